#include "qhm/knr_search.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "qhm/classify.hpp"
#include "qhm/errors.hpp"
#include "qhm/generators.hpp"
#include "qhm/linalg.hpp"
#include "qhm/measures.hpp"
#include "qhm/subspace.hpp"

namespace qhm {

bool knr_feasible(int n, int r) {
  if (r < 2 || n < r || r > 62) return false;
  return static_cast<std::int64_t>(n) <= (std::int64_t{1} << (r - 1));
}

bool knr_known_infinite(int n, int r) {
  return n >= 5 && r <= n && 2 * r >= n + 5;
}

std::optional<double> type_ratio(const PointConfig& config, int r, double tol) {
  try {
    if (angle_classification(config).kind == AngleClass::Kind::Obtuse) return std::nullopt;
    const DistanceMatrix d = config_to_metric(config);
    const MValue m = m_value(d, tol);
    if (m.status != MStatus::Finite) return std::nullopt;
    const SubspaceResult sub = maximal_strict_subspace(d, tol);
    if (sub.cardinality != r) return std::nullopt;
    return m.value / diameter(d);
  } catch (const Error&) {
    return std::nullopt;
  }
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Rng = std::mt19937_64;

struct Triple {
  Index a, q, c;  // angle at q
};

std::vector<Triple> all_triples(Index n) {
  std::vector<Triple> out;
  for (Index a = 0; a < n; ++a)
    for (Index q = 0; q < n; ++q) {
      if (q == a) continue;
      for (Index c = a + 1; c < n; ++c)
        if (c != q) out.push_back({a, q, c});
    }
  return out;
}

double angle_dot(const MatrixXd& p, const Triple& t) {
  return (p.row(t.a) - p.row(t.q)).dot(p.row(t.c) - p.row(t.q));
}

double max_sq_distance(const MatrixXd& p) {
  double best = 0.0;
  for (Index i = 0; i < p.rows(); ++i)
    for (Index j = i + 1; j < p.rows(); ++j) best = std::max(best, (p.row(i) - p.row(j)).squaredNorm());
  return best;
}

void normalize_rows(MatrixXd& p) {
  for (Index i = 0; i < p.rows(); ++i) p.row(i).normalize();
}

// Cheap geometric screen: non-obtuse, well separated, spanning R^q.
bool geometric_ok(const MatrixXd& p, const std::vector<Triple>& triples, Index q) {
  const double diam2 = max_sq_distance(p);
  if (!(diam2 > 0.0) || !std::isfinite(diam2)) return false;
  for (Index i = 0; i < p.rows(); ++i)
    for (Index j = i + 1; j < p.rows(); ++j)
      if ((p.row(i) - p.row(j)).squaredNorm() <= 1e-8 * diam2) return false;
  for (const Triple& t : triples)
    if (angle_dot(p, t) < -kAngleTol * diam2) return false;
  return linalg::affine_rank(p, 1e-6) == q;
}

// Vertices of a regular simplex with k+1 points on the unit sphere of R^k.
MatrixXd regular_simplex(Index k) {
  const MatrixXd basis = linalg::mass_zero_basis(k + 1);  // (k+1) × k
  MatrixXd p = basis;
  normalize_rows(p);
  return p;
}

std::optional<MatrixXd> seed_box(Index n, Index q, Rng& rng) {
  if (q >= 62 || n > (Index{1} << q) || n < q + 1) return std::nullopt;
  std::uniform_real_distribution<double> side(0.5, 1.5);
  std::vector<double> half(static_cast<std::size_t>(q));
  for (double& a : half) a = side(rng);
  std::vector<Index> corners{0};
  std::vector<Index> others;
  for (Index c = 1; c < (Index{1} << q); ++c) {
    if ((c & (c - 1)) == 0)
      corners.push_back(c);
    else
      others.push_back(c);
  }
  std::shuffle(others.begin(), others.end(), rng);
  others.resize(static_cast<std::size_t>(n - (q + 1)));
  corners.insert(corners.end(), others.begin(), others.end());
  MatrixXd p = gen_box_corners(half, corners).config.points;
  normalize_rows(p);
  return p;
}

std::optional<MatrixXd> seed_product(Index n, Index q, Rng& rng, const std::vector<Triple>& triples) {
  // Random composition of q into at least two parts (a single part is a
  // simplex, which the spherical seeds already cover).
  if (q < 2) return std::nullopt;
  std::vector<Index> parts;
  Index left = q;
  while (left > 0) {
    const Index cap = parts.empty() ? std::max<Index>(left - 1, 1) : left;
    std::uniform_int_distribution<Index> pick(1, cap);
    const Index k = pick(rng);
    parts.push_back(k);
    left -= k;
  }
  Index count = 1;
  for (Index k : parts) count *= k + 1;
  if (count < n) return std::nullopt;

  std::uniform_real_distribution<double> radius(0.5, 1.5);
  std::normal_distribution<double> jitter(0.0, 0.05);
  std::vector<MatrixXd> factors;
  for (Index k : parts) {
    MatrixXd s = regular_simplex(k);
    if (k >= 2) {
      // Perturb while staying acute.
      for (int tries = 0; tries < 20; ++tries) {
        MatrixXd t = s;
        for (Index i = 0; i < t.rows(); ++i)
          for (Index j = 0; j < t.cols(); ++j) t(i, j) += jitter(rng);
        normalize_rows(t);
        bool acute = true;
        for (const Triple& tr : all_triples(t.rows()))
          if (angle_dot(t, tr) <= 0.0) acute = false;
        if (acute && linalg::affine_rank(t, 1e-6) == k) {
          s = t;
          break;
        }
      }
    }
    factors.push_back(s * radius(rng));
  }

  MatrixXd product(count, q);
  for (Index idx = 0; idx < count; ++idx) {
    Index rest = idx;
    Index col = 0;
    for (const MatrixXd& f : factors) {
      const Index row = rest % f.rows();
      rest /= f.rows();
      product.block(idx, col, 1, f.cols()) = f.row(row);
      col += f.cols();
    }
  }
  normalize_rows(product);

  std::vector<Index> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), Index{0});
  for (int tries = 0; tries < 50; ++tries) {
    std::shuffle(order.begin(), order.end(), rng);
    MatrixXd p(n, q);
    for (Index i = 0; i < n; ++i) p.row(i) = product.row(order[static_cast<std::size_t>(i)]);
    if (geometric_ok(p, triples, q)) return p;
  }
  return std::nullopt;
}

std::optional<MatrixXd> seed_lifted(Index n, Index q, Rng& rng, const std::vector<Triple>& triples) {
  if (q < 2 || q - 1 >= 62 || n > (Index{1} << (q - 1))) return std::nullopt;
  PointConfig flat;
  try {
    flat = gen_random_nonobtuse(n, q - 1, rng(), 50);
  } catch (const Error&) {
    return std::nullopt;
  }
  MatrixXd x = flat.points.rowwise() - flat.points.colwise().mean();
  const double reach = x.rowwise().norm().maxCoeff();
  if (!(reach > 0.0)) return std::nullopt;
  x /= 2.0 * reach;
  for (double shrink : {1.0, 0.5, 0.25, 0.1, 0.03}) {
    MatrixXd p(n, q);
    p.leftCols(q - 1) = x * shrink;
    p.col(q - 1).setOnes();
    normalize_rows(p);
    if (geometric_ok(p, triples, q)) return p;
  }
  return std::nullopt;
}

// Smallest angle cosine over all triples; positive means acute.
double min_angle_cosine(const MatrixXd& x, const std::vector<Triple>& triples) {
  double worst = 1.0;
  for (const Triple& t : triples) {
    const VectorXd u = (x.row(t.a) - x.row(t.q)).transpose();
    const VectorXd v = (x.row(t.c) - x.row(t.q)).transpose();
    const double denom = u.norm() * v.norm();
    worst = std::min(worst, denom > 0.0 ? u.dot(v) / denom : -1.0);
  }
  return worst;
}

// An acute configuration in R^(q-1), found by hill-climbing the smallest
// angle cosine, placed on a small cap of the unit sphere in R^q. Flattening
// such a cap keeps it acute while M/D grows like the squared sphere radius.
std::optional<MatrixXd> seed_acute_lift(Index n, Index q, Rng& rng,
                                        const std::vector<Triple>& triples) {
  const Index d = q - 1;
  if (d < 1) return std::nullopt;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<Index> pick(0, n - 1);
  MatrixXd x(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) x(i, j) = normal(rng);
  double score = min_angle_cosine(x, triples);
  double sigma = 0.3;
  for (int it = 0; it < 4000 && score < 0.05; ++it) {
    MatrixXd y = x;
    const Index i = pick(rng);
    for (Index j = 0; j < d; ++j) y(i, j) += sigma * normal(rng);
    const double s = min_angle_cosine(y, triples);
    if (s >= score) {
      x = std::move(y);
      score = s;
      sigma = std::min(sigma * 1.2, 1.0);
    } else {
      sigma = std::max(sigma * 0.97, 1e-4);
    }
  }
  if (!(score > 0.0)) return std::nullopt;

  x = x.rowwise() - x.colwise().mean();
  x /= 2.0 * x.rowwise().norm().maxCoeff();
  for (double shrink : {0.5, 0.3, 0.2, 0.1}) {
    MatrixXd p(n, q);
    p.leftCols(d) = x * shrink;
    p.col(d).setOnes();
    normalize_rows(p);
    if (geometric_ok(p, triples, q)) return p;
  }
  return std::nullopt;
}

std::optional<MatrixXd> seed_spherical(Index n, Index q, Rng& rng, const std::vector<Triple>& triples) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int tries = 0; tries < 200; ++tries) {
    MatrixXd p(n, q);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < q; ++j) p(i, j) = normal(rng);
    normalize_rows(p);
    if (geometric_ok(p, triples, q)) return p;
  }
  return std::nullopt;
}

// Rows of the constraint Jacobian, flattened row-major over the points.
struct Constraints {
  MatrixXd jacobian;
  VectorXd values;
};

Constraints constraints(const MatrixXd& p, const std::vector<Triple>& triples,
                        const std::vector<std::size_t>& held) {
  const Index n = p.rows();
  const Index q = p.cols();
  Constraints out;
  out.jacobian = MatrixXd::Zero(static_cast<Index>(held.size()) + n, n * q);
  out.values.resize(static_cast<Index>(held.size()) + n);
  Index row = 0;
  for (std::size_t h : held) {
    const Triple& t = triples[h];
    out.jacobian.block(row, t.a * q, 1, q) = p.row(t.c) - p.row(t.q);
    out.jacobian.block(row, t.c * q, 1, q) = p.row(t.a) - p.row(t.q);
    out.jacobian.block(row, t.q * q, 1, q) = 2.0 * p.row(t.q) - p.row(t.a) - p.row(t.c);
    out.values[row] = angle_dot(p, t);
    ++row;
  }
  for (Index i = 0; i < n; ++i) {
    out.jacobian.block(row, i * q, 1, q) = 2.0 * p.row(i);
    out.values[row] = p.row(i).squaredNorm() - 1.0;
    ++row;
  }
  return out;
}

// Point-major: entry i·q + j is coordinate j of point i.
VectorXd flatten(const MatrixXd& p) {
  const MatrixXd t = p.transpose();
  return t.reshaped();
}

MatrixXd unflatten(const VectorXd& v, Index n, Index q) {
  return v.reshaped(q, n).transpose();
}

// Projects a displacement onto the tangent space of the sphere constraints
// and of every tight right angle the displacement would otherwise make
// obtuse, then Newton-corrects back onto that constraint set.
std::optional<MatrixXd> constrained_step(const MatrixXd& p, const MatrixXd& displacement,
                                         const std::vector<Triple>& triples) {
  const Index n = p.rows();
  const Index q = p.cols();
  const double slack = kAngleTol * std::max(max_sq_distance(p), 1e-300);

  std::vector<std::size_t> tight;
  for (std::size_t t = 0; t < triples.size(); ++t)
    if (angle_dot(p, triples[t]) <= slack) tight.push_back(t);

  const VectorXd raw = flatten(displacement);
  VectorXd v = raw;
  std::vector<std::size_t> held;
  for (int round = 0; round < 8; ++round) {
    const Constraints c = constraints(p, triples, held);
    v = raw - c.jacobian.completeOrthogonalDecomposition().solve(c.jacobian * raw);
    std::size_t added = 0;
    const Constraints all = constraints(p, triples, tight);
    for (std::size_t k = 0; k < tight.size(); ++k) {
      if (std::find(held.begin(), held.end(), tight[k]) != held.end()) continue;
      if (all.jacobian.row(static_cast<Index>(k)).dot(v) < 0.0) {
        held.push_back(tight[k]);
        ++added;
      }
    }
    if (added == 0) break;
  }

  VectorXd x = flatten(p) + v;
  for (int it = 0; it < 12; ++it) {
    const MatrixXd cur = unflatten(x, n, q);
    const Constraints c = constraints(cur, triples, held);
    if (c.values.cwiseAbs().maxCoeff() <= 1e-14) return cur;
    x -= c.jacobian.completeOrthogonalDecomposition().solve(c.values);
  }
  const MatrixXd cur = unflatten(x, n, q);
  if (constraints(cur, triples, held).values.cwiseAbs().maxCoeff() <= 1e-12) return cur;
  return std::nullopt;
}

struct RestartOutcome {
  bool found = false;
  double ratio = 0.0;
  MatrixXd points;
  std::vector<std::pair<std::int64_t, double>> history;
  std::int64_t moves = 0;
  bool threshold_reached = false;
};

std::uint64_t restart_seed(std::uint64_t root, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(root), static_cast<std::uint32_t>(root >> 32),
                    static_cast<std::uint32_t>(restart), 0x9e3779b9u};
  std::uint64_t out = 0;
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  out = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return out;
}

RestartOutcome run_restart(int n, int r, int restart, std::int64_t moves,
                           const KnrOptions& options) {
  const Index q = r - 1;
  const std::vector<Triple> triples = all_triples(n);
  Rng rng(restart_seed(options.seed, restart));
  RestartOutcome out;

  const bool unbounded = knr_known_infinite(n, r);
  std::optional<MatrixXd> start;
  if (unbounded) start = seed_acute_lift(n, q, rng, triples);
  for (int k = 0; k < 4 && !start; ++k) {
    switch ((restart + k) % 4) {
      case 0: start = seed_box(n, q, rng); break;
      case 1: start = seed_product(n, q, rng, triples); break;
      case 2: start = seed_lifted(n, q, rng, triples); break;
      default: start = seed_spherical(n, q, rng, triples); break;
    }
    if (start && !geometric_ok(*start, triples, q)) start.reset();
  }
  if (!start) return out;

  auto certify = [&](const MatrixXd& p) -> std::optional<double> {
    PointConfig config;
    config.points = p;
    return type_ratio(config, r, options.certificate_tol);
  };

  MatrixXd current = *start;
  std::optional<double> ratio = certify(current);
  if (!ratio) return out;
  out.found = true;
  out.ratio = *ratio;
  out.points = current;
  out.history.emplace_back(0, out.ratio);

  const std::int64_t stage = std::max<std::int64_t>(moves / 50, 20);
  double sigma = 0.05;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<Index> pick_point(0, n - 1);
  std::uniform_int_distribution<Index> pick_axis(0, q - 1);

  for (std::int64_t move = 1; move <= moves; ++move) {
    out.moves = move;
    if (unbounded && out.ratio > options.threshold) {
      out.threshold_reached = true;
      break;
    }

    MatrixXd step = MatrixXd::Zero(n, q);
    const bool radius_step = move % stage == 0;
    if (radius_step) {
      // Lift onto a sphere 10% larger: shrink tangential parts about the
      // mean direction, keeping every point on the unit sphere.
      VectorXd pole = current.colwise().mean().transpose();
      if (pole.norm() < 1e-9) continue;
      pole.normalize();
      MatrixXd lifted = current;
      bool hemisphere = true;
      for (Index i = 0; i < n; ++i) {
        const double along = current.row(i).dot(pole);
        if (along <= 0.0) hemisphere = false;
        lifted.row(i) = along * pole.transpose() + (current.row(i) - along * pole.transpose()) / 1.1;
      }
      if (!hemisphere) continue;
      normalize_rows(lifted);
      step = lifted - current;
    } else {
      const double kind = unit(rng);
      if (kind < 0.5) {
        const Index i = pick_point(rng);
        for (Index j = 0; j < q; ++j) step(i, j) = sigma * normal(rng);
      } else if (kind < 0.8) {
        const MatrixXd centered = current.rowwise() - current.colwise().mean();
        const linalg::SymmetricEigen axes = linalg::jacobi_eigen(centered.transpose() * centered);
        const VectorXd u = axes.vectors.col(pick_axis(rng));
        step = (current * u) * u.transpose() * (sigma * normal(rng));
      } else {
        MatrixXd g(q, q);
        for (Index a = 0; a < q; ++a)
          for (Index b = 0; b < q; ++b) g(a, b) = normal(rng);
        step = current * g.transpose() * (0.3 * sigma);
      }
    }

    bool accepted = false;
    if (const std::optional<MatrixXd> next = constrained_step(current, step, triples)) {
      const double screen = 2.0 / max_sq_distance(*next);
      if (screen >= out.ratio * (1.0 - 1e-12) && geometric_ok(*next, triples, q)) {
        if (const std::optional<double> cert = certify(*next); cert && *cert >= out.ratio - 1e-14) {
          current = *next;
          if (*cert > out.ratio) out.history.emplace_back(move, *cert);
          out.ratio = std::max(out.ratio, *cert);
          out.points = current;
          accepted = true;
        }
      }
    }
    if (!radius_step) sigma = accepted ? std::min(sigma * 1.1, 0.3) : std::max(sigma * 0.98, 1e-7);
  }
  if (unbounded && out.ratio > options.threshold) out.threshold_reached = true;
  return out;
}

}  // namespace

KnrResult knr_lower_bound_search(int n, int r, const KnrOptions& options) {
  if (!knr_feasible(n, r)) {
    std::ostringstream msg;
    msg << "no space has type (" << n << ", " << r << "); need 2 <= r <= n <= 2^(r-1)";
    throw InvalidInput(msg.str());
  }
  if (options.restarts < 1) throw InvalidInput("need at least one restart");

  const int restarts = options.restarts;
  const std::int64_t per_restart = std::max<std::int64_t>(options.budget / restarts, 1);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(restarts));

  unsigned workers = options.threads > 0 ? static_cast<unsigned>(options.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(restarts));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < restarts; i = next++)
      outcomes[static_cast<std::size_t>(i)] = run_restart(n, r, i, per_restart, options);
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();

  KnrResult result;
  result.n = n;
  result.r = r;
  for (int i = 0; i < restarts; ++i) {
    const RestartOutcome& o = outcomes[static_cast<std::size_t>(i)];
    result.moves += o.moves;
    if (!o.found) continue;
    if (!result.found || o.ratio > result.best_ratio) {
      result.found = true;
      result.best_ratio = o.ratio;
      result.best_restart = i;
      result.history = o.history;
      result.threshold_reached = o.threshold_reached;
      PointConfig config;
      config.points = o.points / std::sqrt(max_sq_distance(o.points));
      result.config = std::move(config);
    }
  }
  return result;
}

MonotonicityReport knr_monotonicity_probe(int r, int n_first, int n_last,
                                          const KnrOptions& options) {
  MonotonicityReport report;
  report.r = r;
  for (int n = n_first; n <= n_last; ++n) {
    if (!knr_feasible(n, r)) {
      std::ostringstream msg;
      msg << "(" << n << ", " << r << ") is not a feasible type";
      throw InvalidInput(msg.str());
    }
    report.cells.push_back(knr_lower_bound_search(n, r, options));
  }
  for (std::size_t i = 1; i < report.cells.size(); ++i) {
    const KnrResult& prev = report.cells[i - 1];
    const KnrResult& cur = report.cells[i];
    if (prev.found && cur.found && cur.best_ratio > prev.best_ratio + 1e-9) {
      report.consistent = false;
      std::ostringstream msg;
      msg << "lower bound for (" << cur.n << ", " << r << ") = " << cur.best_ratio
          << " exceeds that for (" << prev.n << ", " << r << ") = " << prev.best_ratio;
      report.notes.push_back(msg.str());
    }
  }
  return report;
}

}  // namespace qhm
