#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "qhm/embed.hpp"
#include "qhm/metric.hpp"

namespace qhm::io {

using Json = nlohmann::ordered_json;

/// {"n": int, "d": [[real]]}. Throws InvalidInput on malformed documents.
DistanceMatrix space_from_json(const Json& doc);
Json space_to_json(const DistanceMatrix& d);

/// Header `label,x1,...,xk`, one point per row.
PointConfig read_points_csv(std::istream& in);
void write_points_csv(std::ostream& out, const PointConfig& config);

/// Pretty-printed JSON with every floating-point number written with 17
/// significant digits, so values round-trip exactly.
void write_json(std::ostream& out, const Json& doc);
std::string dump_json(const Json& doc);

Json to_json(const Eigen::VectorXd& v);
Json to_json(const Eigen::MatrixXd& m);

}  // namespace qhm::io
