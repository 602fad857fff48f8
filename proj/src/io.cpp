#include "qhm/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "qhm/errors.hpp"

namespace qhm::io {

DistanceMatrix space_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("d"))
    throw InvalidInput("space document must be an object with a \"d\" matrix");
  const Json& rows = doc.at("d");
  if (!rows.is_array() || rows.empty()) throw InvalidInput("\"d\" must be a non-empty array of rows");
  const auto n = static_cast<Index>(rows.size());
  if (doc.contains("n")) {
    if (!doc.at("n").is_number_integer() || doc.at("n").get<Index>() != n)
      throw InvalidInput("\"n\" does not match the number of rows of \"d\"");
  }
  Eigen::MatrixXd d(n, n);
  for (Index i = 0; i < n; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n)
      throw InvalidInput("row " + std::to_string(i) + " of \"d\" must have " + std::to_string(n) +
                         " entries");
    for (Index j = 0; j < n; ++j) {
      const Json& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) throw InvalidInput("\"d\" entries must be numbers");
      d(i, j) = v.get<double>();
    }
  }
  return DistanceMatrix(std::move(d));
}

Json space_to_json(const DistanceMatrix& d) {
  Json doc;
  doc["n"] = d.size();
  doc["d"] = to_json(d.matrix());
  return doc;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

PointConfig read_points_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("points file is empty");
  const std::vector<std::string> header = split_csv(line);
  if (header.empty() || header.front() != "label")
    throw InvalidInput("points header must start with \"label\"");
  const auto dim = static_cast<Index>(header.size() - 1);

  std::vector<std::vector<double>> rows;
  PointConfig config;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_csv(line);
    if (static_cast<Index>(cells.size()) != dim + 1)
      throw InvalidInput("line " + std::to_string(line_no) + " has " +
                         std::to_string(cells.size()) + " fields, expected " +
                         std::to_string(dim + 1));
    config.labels.push_back(cells.front());
    std::vector<double> coords;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      try {
        std::size_t used = 0;
        coords.push_back(std::stod(cells[c], &used));
        if (used != cells[c].size()) throw std::invalid_argument(cells[c]);
      } catch (const std::exception&) {
        throw InvalidInput("line " + std::to_string(line_no) + ": \"" + cells[c] +
                           "\" is not a number");
      }
    }
    rows.push_back(std::move(coords));
  }
  config.points.resize(static_cast<Index>(rows.size()), dim);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Index j = 0; j < dim; ++j)
      config.points(static_cast<Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
  return config;
}

namespace {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_points_csv(std::ostream& out, const PointConfig& config) {
  out << "label";
  for (Index j = 0; j < config.dim(); ++j) out << ",x" << (j + 1);
  out << "\n";
  for (Index i = 0; i < config.count(); ++i) {
    out << config.label(i);
    for (Index j = 0; j < config.dim(); ++j) out << "," << format_double(config.points(i, j));
    out << "\n";
  }
}

namespace {

bool is_flat(const Json& doc) {
  for (const Json& v : doc)
    if (v.is_structured()) return false;
  return true;
}

void write_value(std::ostream& out, const Json& doc, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (doc.type()) {
    case Json::value_t::object: {
      if (doc.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        out << pad << Json(it.key()).dump() << ": ";
        write_value(out, it.value(), depth + 1);
      }
      out << "\n" << close_pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (doc.empty()) {
        out << "[]";
        return;
      }
      // Arrays of scalars (matrix rows, weight vectors) stay on one line.
      if (is_flat(doc)) {
        out << "[";
        bool first = true;
        for (const Json& v : doc) {
          if (!first) out << ", ";
          first = false;
          write_value(out, v, depth + 1);
        }
        out << "]";
        return;
      }
      out << "[\n";
      bool first = true;
      for (const Json& v : doc) {
        if (!first) out << ",\n";
        first = false;
        out << pad;
        write_value(out, v, depth + 1);
      }
      out << "\n" << close_pad << "]";
      return;
    }
    case Json::value_t::number_float:
      out << format_double(doc.get<double>());
      return;
    default:
      out << doc.dump();
      return;
  }
}

}  // namespace

void write_json(std::ostream& out, const Json& doc) {
  write_value(out, doc, 0);
  out << "\n";
}

std::string dump_json(const Json& doc) {
  std::ostringstream out;
  write_json(out, doc);
  return out.str();
}

Json to_json(const Eigen::VectorXd& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Json to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qhm::io
