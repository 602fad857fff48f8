#include "qhm/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qhm/classify.hpp"
#include "qhm/embed.hpp"
#include "qhm/errors.hpp"
#include "qhm/generators.hpp"
#include "qhm/io.hpp"
#include "qhm/knr_search.hpp"
#include "qhm/l1geom.hpp"
#include "qhm/measures.hpp"
#include "qhm/subspace.hpp"

namespace qhm::cli {

namespace {

using io::Json;

struct Common {
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string out;
  int threads = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--tol", c.tol, "numerical tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--out", c.out, "output path (default: standard output)");
  cmd->add_option("--threads", c.threads, "worker threads (0 = available cores)")
      ->check(CLI::NonNegativeNumber);
}

std::string read_text(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path.empty() || path == "-") {
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw InvalidInput("cannot open " + path);
  buf << file.rdbuf();
  return buf.str();
}

DistanceMatrix read_space(const std::string& path, std::istream& in) {
  const std::string text = read_text(path, in);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(std::string("malformed space JSON: ") + e.what());
  }
  return io::space_from_json(doc);
}

PointConfig read_points(const std::string& path, std::istream& in) {
  std::istringstream text(read_text(path, in));
  return io::read_points_csv(text);
}

/// Writes `body` to --out when given, otherwise to `out`.
void emit(const Common& c, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (c.out.empty() || c.out == "-") {
    body(out);
    return;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) throw InvalidInput("cannot write " + c.out);
  body(file);
  if (!file) throw InvalidInput("failed writing " + c.out);
}

void emit_json(const Common& c, std::ostream& out, const Json& doc) {
  emit(c, out, [&](std::ostream& s) { io::write_json(s, doc); });
}

Json indices_json(const std::vector<Index>& idx) {
  Json a = Json::array();
  for (Index i : idx) a.push_back(i);
  return a;
}

const char* status_name(MStatus s) {
  switch (s) {
    case MStatus::Finite: return "finite";
    case MStatus::Infinite: return "infinite";
    case MStatus::NotQuasihypermetric: return "not-quasihypermetric";
  }
  return "?";
}

const char* finiteness_name(MFiniteness f) {
  switch (f) {
    case MFiniteness::Finite: return "finite";
    case MFiniteness::Infinite: return "infinite";
    case MFiniteness::NotApplicable: return "not-applicable";
  }
  return "?";
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json config_json(const PointConfig& config) {
  Json doc;
  Json labels = Json::array();
  for (Index i = 0; i < config.count(); ++i) labels.push_back(config.label(i));
  doc["norm"] = config.norm == Norm::L1 ? "l1" : "euclidean";
  doc["labels"] = std::move(labels);
  doc["points"] = io::to_json(config.points);
  return doc;
}

// ---- commands ----

struct ClassifyArgs {
  std::string input;
  std::optional<int> bound;
};

void cmd_classify(const ClassifyArgs& a, const Common& c, std::istream& in, std::ostream& out) {
  const DistanceMatrix d = read_space(a.input, in);
  const Classification cls = classify(d, c.tol.value_or(kEigTol));
  Json doc;
  doc["n"] = d.size();
  doc["quasihypermetric"] = cls.quasihypermetric;
  doc["strict"] = cls.strictly_quasihypermetric;
  doc["m_finite"] = finiteness_name(cls.m_finite);
  doc["rank"] = cls.rank;
  doc["certificate"] =
      cls.certificate ? io::to_json(cls.certificate->weights()) : Json(nullptr);
  doc["spectrum"] = io::to_json(cls.spectrum);
  if (a.bound) {
    const HypermetricVerdict hv = hypermetric_check_bounded(d, *a.bound);
    Json h;
    h["bound"] = *a.bound;
    h["hypermetric"] = !hv.violation.has_value();
    if (hv.violation) {
      Json v = Json::array();
      for (int b : *hv.violation) v.push_back(b);
      h["violation"] = std::move(v);
      h["violation_value"] = hv.violation_value;
    } else {
      h["violation"] = nullptr;
    }
    h["checked"] = hv.checked;
    doc["hypermetric"] = std::move(h);
  }
  emit_json(c, out, doc);
}

struct MValueArgs {
  std::string input;
  bool oracle = false;
};

void cmd_m_value(const MValueArgs& a, const Common& c, std::istream& in, std::ostream& out) {
  const DistanceMatrix d = read_space(a.input, in);
  const MValue m = m_value(d, c.tol.value_or(kEigTol));
  Json doc;
  doc["status"] = status_name(m.status);
  if (m.status == MStatus::Finite) {
    doc["m"] = m.value;
    doc["invariant"] = io::to_json(m.invariant.weights());
  } else {
    doc["m"] = nullptr;
    doc["invariant"] = nullptr;
  }
  if (a.oracle) {
    if (m.status != MStatus::Finite)
      throw InvalidInput("the optimisation oracle needs a space with M finite");
    OracleOptions opts;
    if (c.seed) opts.seed = *c.seed;
    doc["oracle"] = m_value_oracle(d, opts);
  }
  emit_json(c, out, doc);
}

void cmd_embed(const std::string& input, const Common& c, std::istream& in, std::ostream& out) {
  const DistanceMatrix d = read_space(input, in);
  const PointConfig config = schoenberg_embed(d, c.tol.value_or(kEigTol));
  emit(c, out, [&](std::ostream& s) { io::write_points_csv(s, config); });
}

void cmd_config(const std::string& input, const Common& c, std::istream& in, std::ostream& out) {
  const PointConfig config = read_points(input, in);
  const DistanceMatrix d = config_to_metric(config, c.tol.value_or(kAngleTol));
  emit_json(c, out, io::space_to_json(d));
}

struct SubspaceArgs {
  std::string input;
  bool enumerate = false;
};

void cmd_subspace(const SubspaceArgs& a, const Common& c, std::istream& in, std::ostream& out) {
  const DistanceMatrix d = read_space(a.input, in);
  const double tol = c.tol.value_or(kEigTol);
  const SubspaceResult r = maximal_strict_subspace(d, tol);
  Json doc;
  doc["indices"] = indices_json(r.indices);
  doc["cardinality"] = r.cardinality;
  doc["rank"] = r.rank;
  doc["m_finite"] = r.m_finite;
  doc["predicted_cardinality"] = r.predicted_cardinality;
  if (a.enumerate) {
    Json all = Json::array();
    for (const auto& s : enumerate_maximal_strict_subspaces(d, tol)) all.push_back(indices_json(s));
    doc["maximal_subsets"] = std::move(all);
  }
  emit_json(c, out, doc);
}

void cmd_l1_bounds(const std::string& points, const Common& c, std::istream& in,
                   std::ostream& out) {
  PointConfig config = read_points(points, in);
  config.norm = Norm::L1;
  const BoundsReport b = l1_upper_bounds(config, c.tol.value_or(1e-9));
  Json doc;
  doc["points"] = b.points;
  doc["dimension"] = b.dimension;
  doc["diameter"] = b.diameter;
  doc["m"] = b.m_actual;
  doc["sum_proj_bound"] = b.sum_proj_bound;
  doc["dim_bound"] = b.dim_bound;
  doc["card_bound"] = b.card_bound;
  doc["refined_bound"] = optional_number(b.refined_bound);
  doc["four_point_bound"] = optional_number(b.four_point_bound);
  emit_json(c, out, doc);
}

struct GenerateArgs {
  std::string family;
  std::optional<int> n;
  std::optional<int> k;
  double radius = 1.0;
  std::vector<double> half_sides;
  std::vector<int> corners;
  std::optional<int> m;
  std::optional<double> eps;
  std::string variant = "pair";
  std::optional<int> dim;
  int attempts = 200;
  std::string points_out;
};

int need(const std::optional<int>& v, const char* flag, const std::string& family) {
  if (!v) throw CLI::RequiredError(std::string(flag) + " (needed by --family " + family + ")");
  return *v;
}

void cmd_generate(const GenerateArgs& a, const Common& c, std::ostream& out) {
  std::optional<DistanceMatrix> d;
  std::optional<PointConfig> points;
  if (a.family == "discrete") {
    d = gen_discrete(need(a.n, "--n", a.family));
  } else if (a.family == "circle") {
    d = gen_circle(need(a.k, "--k", a.family), a.radius);
  } else if (a.family == "box") {
    if (a.half_sides.empty()) throw CLI::RequiredError("--half-sides (needed by --family box)");
    std::optional<std::vector<Index>> subset;
    if (!a.corners.empty()) subset.emplace(a.corners.begin(), a.corners.end());
    BoxCorners box = gen_box_corners(a.half_sides, subset);
    d = box.metric;
    points = std::move(box.config);
  } else if (a.family == "star") {
    StarSpace star = gen_star(need(a.n, "--n", a.family));
    d = star.metric;
    points = std::move(star.config);
  } else if (a.family == "join") {
    const int m = need(a.m, "--m", a.family);
    if (!a.eps) throw CLI::RequiredError("--eps (needed by --family join)");
    if (a.variant == "pair")
      d = gen_join_discrete_pair(m, *a.eps);
    else if (a.variant == "circle")
      d = gen_join_discrete_circle(m, *a.eps);
    else
      throw CLI::ValidationError("--variant", "must be pair or circle");
  } else if (a.family == "random") {
    const int n = need(a.n, "--n", a.family);
    const int dim = need(a.dim, "--dim", a.family);
    PointConfig config = gen_random_nonobtuse(n, dim, c.seed.value_or(1), a.attempts);
    d = config_to_metric(config);
    points = std::move(config);
  }
  if (!a.points_out.empty()) {
    if (!points) throw InvalidInput("--family " + a.family + " has no point realisation");
    Common sink;
    sink.out = a.points_out;
    emit(sink, out, [&](std::ostream& s) { io::write_points_csv(s, *points); });
  }
  emit_json(c, out, io::space_to_json(*d));
}

struct SearchArgs {
  int n = 0;
  int r = 0;
  std::int64_t budget = 100000;
  int restarts = 8;
  std::optional<double> threshold;
  std::string history;
};

void cmd_search(const SearchArgs& a, const Common& c, std::ostream& out) {
  KnrOptions opts;
  opts.budget = a.budget;
  opts.restarts = a.restarts;
  opts.threads = c.threads;
  if (c.seed) opts.seed = *c.seed;
  if (a.threshold) opts.threshold = *a.threshold;
  if (c.tol) opts.certificate_tol = *c.tol;
  const KnrResult res = knr_lower_bound_search(a.n, a.r, opts);

  Json doc;
  doc["n"] = res.n;
  doc["r"] = res.r;
  doc["found"] = res.found;
  doc["best_ratio"] = res.found ? Json(res.best_ratio) : Json(nullptr);
  doc["known_infinite"] = knr_known_infinite(a.n, a.r);
  doc["threshold"] = opts.threshold;
  doc["threshold_reached"] = res.threshold_reached;
  doc["moves"] = res.moves;
  doc["best_restart"] = res.best_restart;
  doc["config"] = res.found ? config_json(res.config) : Json(nullptr);
  emit_json(c, out, doc);

  if (!a.history.empty()) {
    Common sink;
    sink.out = a.history;
    emit(sink, out, [&](std::ostream& s) {
      s << "move,ratio\n";
      char buf[32];
      for (const auto& [move, ratio] : res.history) {
        std::snprintf(buf, sizeof buf, "%.17g", ratio);
        s << move << "," << buf << "\n";
      }
    });
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Quasihypermetric spaces and the constant M(X)", "qhm"};
  app.require_subcommand(1);
  app.fallthrough(false);

  Common common;
  ClassifyArgs classify_args;
  MValueArgs mvalue_args;
  std::string embed_input;
  std::string config_input;
  bool to_metric = false;
  SubspaceArgs subspace_args;
  std::string l1_points;
  GenerateArgs gen;
  SearchArgs search;

  auto* c_classify = app.add_subcommand("classify", "classify a finite metric space");
  c_classify->add_option("--input", classify_args.input, "space.json (default: stdin)");
  c_classify->add_option("--hypermetric-bound", classify_args.bound,
                         "check hypermetric inequalities with |b|_1 up to B")
      ->check(CLI::PositiveNumber);

  auto* c_mvalue = app.add_subcommand("m-value", "compute M(X) and the maximal measure");
  c_mvalue->add_option("--input", mvalue_args.input, "space.json (default: stdin)");
  c_mvalue->add_flag("--oracle", mvalue_args.oracle, "also run the optimisation oracle");

  auto* c_embed = app.add_subcommand("embed", "Schoenberg embedding to points.csv");
  c_embed->add_option("--input", embed_input, "space.json (default: stdin)");

  auto* c_config = app.add_subcommand("config", "convert a point configuration");
  c_config->add_option("--input", config_input, "points.csv (default: stdin)");
  c_config->add_flag("--to-metric", to_metric, "emit the squared-distance space")->required();

  auto* c_subspace = app.add_subcommand("subspace", "maximal strict subspaces");
  c_subspace->add_option("--input", subspace_args.input, "space.json (default: stdin)");
  c_subspace->add_flag("--enumerate", subspace_args.enumerate, "list every maximal subspace");

  auto* c_l1 = app.add_subcommand("l1-bounds", "upper bounds for M of an L1 point set");
  c_l1->add_option("--points", l1_points, "points.csv (default: stdin)");

  auto* c_gen = app.add_subcommand("generate", "construct a named space");
  c_gen->add_option("--family", gen.family, "space family")
      ->required()
      ->check(CLI::IsMember({"discrete", "circle", "box", "star", "join", "random"}));
  c_gen->add_option("--n", gen.n, "point count (discrete, random) or dimension (star)")
      ->check(CLI::PositiveNumber);
  c_gen->add_option("--k", gen.k, "circle points")->check(CLI::PositiveNumber);
  c_gen->add_option("--radius", gen.radius, "circle radius")->check(CLI::PositiveNumber);
  c_gen->add_option("--half-sides", gen.half_sides, "box half-sides, comma separated")
      ->delimiter(',');
  c_gen->add_option("--corners", gen.corners, "box corner subset, comma separated")
      ->delimiter(',');
  c_gen->add_option("--m", gen.m, "join block size")->check(CLI::PositiveNumber);
  c_gen->add_option("--eps", gen.eps, "join parameter");
  c_gen->add_option("--variant", gen.variant, "join variant")
      ->check(CLI::IsMember({"pair", "circle"}));
  c_gen->add_option("--dim", gen.dim, "ambient dimension (random)")->check(CLI::PositiveNumber);
  c_gen->add_option("--attempts", gen.attempts, "sampling attempts (random)")
      ->check(CLI::PositiveNumber);
  c_gen->add_option("--points-out", gen.points_out, "also write the point realisation");

  auto* c_search = app.add_subcommand("search-knr", "lower-bound search for K(n,r)");
  c_search->add_option("--n", search.n, "cardinality")->required();
  c_search->add_option("--r", search.r, "maximal strict subspace size")->required();
  c_search->add_option("--budget", search.budget, "total moves")->check(CLI::PositiveNumber);
  c_search->add_option("--restarts", search.restarts, "independent restarts")
      ->check(CLI::PositiveNumber);
  c_search->add_option("--threshold", search.threshold, "ratio that ends the search")
      ->check(CLI::PositiveNumber);
  c_search->add_option("--history", search.history, "CSV file for the ratio history");

  for (CLI::App* cmd : {c_classify, c_mvalue, c_embed, c_config, c_subspace, c_l1, c_gen, c_search})
    add_common(cmd, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  }

  try {
    if (c_classify->parsed()) cmd_classify(classify_args, common, in, out);
    else if (c_mvalue->parsed()) cmd_m_value(mvalue_args, common, in, out);
    else if (c_embed->parsed()) cmd_embed(embed_input, common, in, out);
    else if (c_config->parsed()) cmd_config(config_input, common, in, out);
    else if (c_subspace->parsed()) cmd_subspace(subspace_args, common, in, out);
    else if (c_l1->parsed()) cmd_l1_bounds(l1_points, common, in, out);
    else if (c_gen->parsed()) cmd_generate(gen, common, out);
    else if (c_search->parsed()) cmd_search(search, common, out);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace qhm::cli
