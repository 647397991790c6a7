#include "sospack/packing.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace sospack {

void Scene::Validate() const {
  if (dimension < 1) throw std::invalid_argument("scene dimension must be positive");
  if (objects.empty()) throw std::invalid_argument("scene has no objects");
  if (degree < 1) throw std::invalid_argument("certification degree must be positive");
  if (!(gamma_cap > 0.0)) throw std::invalid_argument("gamma_cap must be positive");
  if (container.dimension() != dimension) throw std::invalid_argument("container dimension");
  if (container_domain && container_domain->dimension() != dimension) {
    throw std::invalid_argument("container domain dimension");
  }
  if (search_box && search_box->dimension() != dimension) {
    throw std::invalid_argument("search box dimension");
  }
  for (const auto& o : objects) {
    if (o.p.dimension() != dimension || o.transform.dimension() != dimension) {
      throw std::invalid_argument("object '" + o.label + "' has the wrong dimension");
    }
    if (o.domain) {
      if (o.domain->dimension() != dimension) {
        throw std::invalid_argument("object '" + o.label + "' domain has the wrong dimension");
      }
      if (!SublevelRadius(*o.domain)) {
        throw std::invalid_argument("object '" + o.label + "' domain is not bounded");
      }
    }
  }
}

std::string ConstraintId::ToString() const {
  switch (kind) {
    case ConstraintKind::kContainment: return "containment:" + std::to_string(i);
    case ConstraintKind::kDomain: return "domain:" + std::to_string(i);
    case ConstraintKind::kNonOverlap:
      return "overlap:" + std::to_string(i) + ":" + std::to_string(j);
  }
  return "";
}

ConstraintId ConstraintId::Parse(const std::string& text) {
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    int v = -1;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || v < 0) {
      throw std::invalid_argument("bad constraint id '" + text + "'");
    }
    return v;
  };
  const auto c1 = text.find(':');
  if (c1 == std::string::npos) throw std::invalid_argument("bad constraint id '" + text + "'");
  const std::string kind = text.substr(0, c1);
  const std::string rest = text.substr(c1 + 1);
  if (kind == "containment") return {ConstraintKind::kContainment, num(rest)};
  if (kind == "domain") return {ConstraintKind::kDomain, num(rest)};
  if (kind == "overlap") {
    const auto c2 = rest.find(':');
    if (c2 == std::string::npos) throw std::invalid_argument("bad constraint id '" + text + "'");
    const int i = num(rest.substr(0, c2)), j = num(rest.substr(c2 + 1));
    if (i == j) throw std::invalid_argument("overlap constraint needs two distinct objects");
    return {ConstraintKind::kNonOverlap, i, j};
  }
  throw std::invalid_argument("bad constraint id '" + text + "'");
}

std::vector<ConstraintId> SceneConstraints(const Scene& scene) {
  std::vector<ConstraintId> ids;
  const int m = static_cast<int>(scene.objects.size());
  for (int i = 0; i < m; ++i) ids.push_back({ConstraintKind::kContainment, i});
  if (scene.container_domain) {
    for (int i = 0; i < m; ++i) ids.push_back({ConstraintKind::kDomain, i});
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) ids.push_back({ConstraintKind::kNonOverlap, i, j});
  return ids;
}

namespace {

void CheckIndex(const Scene& scene, int i) {
  if (i < 0 || i >= static_cast<int>(scene.objects.size())) {
    throw std::invalid_argument("object index out of range");
  }
}

struct KnownSet {
  std::string multiplier;
  Polynomial g;  // the set is g ≤ 0
};

// target + Σ g_k s_k = slack + γ, γ ≤ cap, maximize γ.
Certificate SolveOnce(const Polynomial& target, const std::vector<KnownSet>& set,
                          const std::string& slack_name, int d, double cap,
                          const CertifyOptions& options) {
  const int n = target.dimension();
  SosProgram prog;
  const UnknownRef gamma = prog.NewScalar("gamma");
  PolyExpression lhs(target);
  std::vector<std::pair<std::string, double>> scales;
  for (const auto& k : set) {
    const int deg = MultiplierDegree(d, k.g.degree());
    if (deg < 0) continue;
    // Composed shapes can carry coefficients in the thousands; a positive
    // rescaling of g is absorbed by its multiplier.
    const double scale = 1.0 / k.g.MaxAbsCoefficient();
    const UnknownRef s = prog.NewSos(k.multiplier, n, deg);
    lhs += (scale * k.g) * prog.Expr(s);
    scales.emplace_back(k.multiplier, scale);
  }
  const UnknownRef slack = prog.NewSos(slack_name, n, SlackDegree(d));
  prog.AddIdentity(lhs, prog.Expr(slack) + prog.Expr(gamma, n));
  prog.AddLinearInequality(prog.ScalarTerm(gamma), cap);
  prog.SetObjective(prog.ScalarTerm(gamma));
  try {
    const SdpSolution sol = Solve(prog.Compile(), options.solver);
    Certificate cert = prog.Verify(sol, options.tolerances, gamma);
    cert.solver_status = sol.status;
    for (const auto& [name, scale] : scales) {
      auto it = cert.multipliers.find(name);
      if (it != cert.multipliers.end()) it->second *= scale;
    }
    if (sol.status == SolverStatus::kInfeasible || sol.status == SolverStatus::kUnbounded) {
      cert.verified = false;
    }
    return cert;
  } catch (const std::exception&) {
    return Certificate{};
  }
}

// At the maximal γ the slack Gram matrix is singular and the final interior
// point iterates lose accuracy. Positivity is all a certificate needs, so an
// unverified positive optimum is re-solved with the cap at half its value,
// which keeps the optimal face away from the PSD boundary.
Certificate SolveTemplate(const Polynomial& target, const std::vector<KnownSet>& set,
                          const std::string& slack_name, int d, double cap,
                          const CertifyOptions& options) {
  Certificate cert = SolveOnce(target, set, slack_name, d, cap, options);
  if (cert.verified || !std::isfinite(cert.gamma) ||
      cert.gamma <= 2.0 * options.tolerances.margin_safety ||
      cert.solver_status == SolverStatus::kInfeasible ||
      cert.solver_status == SolverStatus::kUnbounded) {
    return cert;
  }
  Certificate backed_off =
      SolveOnce(target, set, slack_name, d, 0.5 * std::min(cert.gamma, cap), options);
  return backed_off.verified ? backed_off : cert;
}

Polynomial Local(const Polynomial& p, const AffineTransform& t) { return ComposeAffine(p, t); }

}  // namespace

Certificate CertifyContainment(const Scene& scene, int i, const CertifyOptions& options) {
  CheckIndex(scene, i);
  const auto& o = scene.objects[i];
  std::vector<KnownSet> set{{"s1", Local(o.p, o.transform)}};
  if (o.domain) set.push_back({"s2", Local(*o.domain, o.transform)});
  return SolveTemplate(-1.0 * scene.container, set, "s3", scene.degree, scene.gamma_cap,
                       options);
}

std::optional<Certificate> CertifyDomain(const Scene& scene, int i,
                                         const CertifyOptions& options) {
  CheckIndex(scene, i);
  if (!scene.container_domain) return std::nullopt;
  const auto& o = scene.objects[i];
  std::vector<KnownSet> set{{"s1", Local(o.p, o.transform)}};
  if (o.domain) set.push_back({"s2", Local(*o.domain, o.transform)});
  return SolveTemplate(-1.0 * *scene.container_domain, set, "s3", scene.degree,
                       scene.gamma_cap, options);
}

Certificate CertifyNonOverlap(const Scene& scene, int i, int j, const CertifyOptions& options) {
  CheckIndex(scene, i);
  CheckIndex(scene, j);
  if (i == j) throw std::invalid_argument("CertifyNonOverlap: i == j");
  const auto& oi = scene.objects[i];
  const auto& oj = scene.objects[j];
  std::vector<KnownSet> set{{"s1", Local(oi.p, oi.transform)}};
  if (oi.domain) set.push_back({"s2", Local(*oi.domain, oi.transform)});
  if (oj.domain) set.push_back({"s3", Local(*oj.domain, oj.transform)});
  return SolveTemplate(Local(oj.p, oj.transform), set, "s4", scene.degree, scene.gamma_cap,
                       options);
}

PairCertificate CertifyPair(const Scene& scene, int i, int j, const CertifyOptions& options) {
  PairCertificate out{CertifyNonOverlap(scene, i, j, options), false};
  if (!out.certificate.verified) {
    Certificate rev = CertifyNonOverlap(scene, j, i, options);
    if (rev.verified) out = {std::move(rev), true};
  }
  return out;
}

std::optional<double> SublevelRadius(const Polynomial& p) {
  const int deg = p.degree();
  if (deg < 2 || deg % 2 != 0) return std::nullopt;
  const int n = p.dimension();
  const Polynomial lead = LeadingForm(p);
  double lambda;
  if (deg == 2) {
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [m, c] : lead.terms()) {
      std::vector<int> idx;
      for (int k = 0; k < n; ++k)
        for (int e = 0; e < m[k]; ++e) idx.push_back(k);
      if (idx[0] == idx[1]) {
        q(idx[0], idx[0]) += c;
      } else {
        q(idx[0], idx[1]) += 0.5 * c;
        q(idx[1], idx[0]) += 0.5 * c;
      }
    }
    lambda = MinEigenvalue(q);
  } else {
    // Sampled minimum on the sphere, halved as a safety factor.
    const PolynomialEvaluator eval(lead);
    double lmin = std::numeric_limits<double>::infinity();
    if (n == 1) {
      lmin = std::min(eval(Eigen::VectorXd::Constant(1, 1.0)),
                      eval(Eigen::VectorXd::Constant(1, -1.0)));
    } else if (n == 2) {
      for (int k = 0; k < 1440; ++k) {
        const double t = std::numbers::pi * k / 1440;
        lmin = std::min(lmin, eval(Eigen::Vector2d(std::cos(t), std::sin(t))));
      }
    } else {
      std::mt19937_64 rng(1);
      std::normal_distribution<double> g;
      for (int k = 0; k < 20000; ++k) {
        Eigen::VectorXd v(n);
        for (int a = 0; a < n; ++a) v(a) = g(rng);
        if (v.norm() > 0) lmin = std::min(lmin, eval(v.normalized()));
      }
    }
    lambda = 0.5 * lmin;
  }
  if (!(lambda > 0.0)) return std::nullopt;
  double lower = 0.0;
  for (const auto& [m, c] : p.terms()) {
    if (m.degree() < deg) lower += std::abs(c);
  }
  return std::max(1.0, lower / lambda);
}

namespace {

// One inequality of a violation test: sign * q(x) ≥ margin, where q is the
// polynomial in world coordinates.
struct Condition {
  Polynomial world;
  double sign;
};

std::vector<Condition> Conditions(const Scene& scene, const ConstraintId& id) {
  std::vector<Condition> out;
  auto add_object = [&](int k) {
    CheckIndex(scene, k);
    const auto& o = scene.objects[k];
    out.push_back({ComposeAffine(o.p, o.transform), -1.0});
    if (o.domain) out.push_back({ComposeAffine(*o.domain, o.transform), -1.0});
  };
  switch (id.kind) {
    case ConstraintKind::kContainment:
      add_object(id.i);
      out.push_back({scene.container, 1.0});
      break;
    case ConstraintKind::kDomain:
      if (!scene.container_domain) throw std::invalid_argument("scene has no container domain");
      add_object(id.i);
      out.push_back({*scene.container_domain, 1.0});
      break;
    case ConstraintKind::kNonOverlap:
      if (id.i == id.j) throw std::invalid_argument("overlap constraint needs i != j");
      add_object(id.i);
      add_object(id.j);
      break;
  }
  return out;
}

struct Region {
  bool bounded = false;
  bool empty = false;
  Eigen::VectorXd lo, hi;
};

Region ObjectRegion(const Scene& scene, int k) {
  const auto& o = scene.objects[k];
  std::optional<double> rho;
  if (o.domain) rho = SublevelRadius(*o.domain);
  if (!rho) rho = SublevelRadius(o.p);
  Region r;
  if (!rho) {
    if (scene.search_box) {
      r.bounded = true;
      r.lo = scene.search_box->lower();
      r.hi = scene.search_box->upper();
    }
    return r;
  }
  // x = S⁻¹ y + v with ‖y‖ ≤ ρ.
  const Eigen::MatrixXd inv = o.transform.InverseLinear();
  const Eigen::VectorXd half = *rho * inv.rowwise().norm() * (1.0 + 1e-9);
  r.bounded = true;
  r.lo = o.transform.offset() - half;
  r.hi = o.transform.offset() + half;
  return r;
}

Region ConstraintRegion(const Scene& scene, const ConstraintId& id) {
  CheckIndex(scene, id.i);
  Region r = ObjectRegion(scene, id.i);
  if (id.kind == ConstraintKind::kNonOverlap) {
    CheckIndex(scene, id.j);
    const Region other = ObjectRegion(scene, id.j);
    if (!r.bounded) {
      r = other;
    } else if (other.bounded) {
      r.lo = r.lo.cwiseMax(other.lo);
      r.hi = r.hi.cwiseMin(other.hi);
    }
  }
  if (r.bounded) r.empty = ((r.hi - r.lo).array() <= 0.0).any();
  return r;
}

struct Interval {
  double lo, hi;
};

// Naive interval enclosure of a polynomial over a box, term by term.
class IntervalEvaluator {
 public:
  explicit IntervalEvaluator(const Polynomial& p) : n_(p.dimension()), max_pow_(0) {
    for (const auto& [m, c] : p.terms()) {
      coefs_.push_back(c);
      for (int k = 0; k < n_; ++k) {
        exps_.push_back(m[k]);
        max_pow_ = std::max(max_pow_, m[k]);
      }
    }
  }

  Interval operator()(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) const {
    std::vector<Interval> pw(static_cast<std::size_t>(n_) * (max_pow_ + 1));
    for (int k = 0; k < n_; ++k) {
      for (int e = 0; e <= max_pow_; ++e) {
        const double a = std::pow(lo(k), e), b = std::pow(hi(k), e);
        Interval iv{std::min(a, b), std::max(a, b)};
        if (e % 2 == 0 && e > 0 && lo(k) < 0.0 && hi(k) > 0.0) iv.lo = 0.0;
        pw[k * (max_pow_ + 1) + e] = iv;
      }
    }
    Interval sum{0.0, 0.0};
    for (std::size_t t = 0; t < coefs_.size(); ++t) {
      Interval prod{1.0, 1.0};
      for (int k = 0; k < n_; ++k) {
        const Interval& f = pw[k * (max_pow_ + 1) + exps_[t * n_ + k]];
        const double c[4] = {prod.lo * f.lo, prod.lo * f.hi, prod.hi * f.lo, prod.hi * f.hi};
        prod = {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
      }
      const double c = coefs_[t];
      sum.lo += c >= 0 ? c * prod.lo : c * prod.hi;
      sum.hi += c >= 0 ? c * prod.hi : c * prod.lo;
    }
    const double pad = 1e-12 * (std::abs(sum.lo) + std::abs(sum.hi) + 1.0);
    return {sum.lo - pad, sum.hi + pad};
  }

 private:
  int n_;
  int max_pow_;
  std::vector<double> coefs_;
  std::vector<int> exps_;
};

double UniformDouble(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Searcher {
  std::vector<PolynomialEvaluator> evals;
  std::vector<double> signs;

  double Margin(const double* x) const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < evals.size(); ++k) {
      m = std::min(m, signs[k] * evals[k](x));
      if (!(m > -std::numeric_limits<double>::infinity())) break;
    }
    return std::isnan(m) ? -std::numeric_limits<double>::infinity() : m;
  }
};

// Pattern search maximizing the margin from x.
Eigen::VectorXd Refine(const Searcher& s, Eigen::VectorXd x, double step) {
  const int n = static_cast<int>(x.size());
  std::vector<Eigen::VectorXd> dirs;
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(k) = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  if (n <= 3) {
    // Diagonal directions help on the kinks of min(·).
    for (int mask = 0; mask < (1 << n); ++mask) {
      Eigen::VectorXd e(n);
      for (int k = 0; k < n; ++k) e(k) = (mask >> k & 1) ? 1.0 : -1.0;
      dirs.push_back(e / std::sqrt(static_cast<double>(n)));
    }
  }
  double best = s.Margin(x.data());
  for (int it = 0; it < 4000 && step > 1e-13 * (1.0 + x.norm()); ++it) {
    double cand_best = best;
    Eigen::VectorXd cand = x;
    for (const auto& d : dirs) {
      const Eigen::VectorXd y = x + step * d;
      const double m = s.Margin(y.data());
      if (m > cand_best) {
        cand_best = m;
        cand = y;
      }
    }
    if (cand_best > best) {
      best = cand_best;
      x = cand;
    } else {
      step *= 0.5;
    }
  }
  return x;
}

std::uint64_t ConstraintSeed(std::uint64_t seed, const ConstraintId& id) {
  std::uint64_t h = seed * 0x9E3779B97F4A7C15ULL;
  h ^= static_cast<std::uint64_t>(id.kind) + 0x100000001B3ULL * (id.i + 1) +
       0x1000193ULL * (id.j + 2);
  return h;
}

int DefaultGrid(int n) {
  if (n == 1) return 2000;
  if (n == 2) return 200;
  if (n == 3) return 40;
  return std::max(3, static_cast<int>(std::pow(1e5, 1.0 / n)));
}

}  // namespace

double ViolationMargin(const Scene& scene, const ConstraintId& id,
                       const Eigen::Ref<const Eigen::VectorXd>& x) {
  double m = std::numeric_limits<double>::infinity();
  auto object = [&](int k) {
    CheckIndex(scene, k);
    const auto& o = scene.objects[k];
    const Eigen::VectorXd y = o.transform.ToLocal(x);
    m = std::min(m, -o.p.Evaluate(y));
    if (o.domain) m = std::min(m, -o.domain->Evaluate(y));
  };
  switch (id.kind) {
    case ConstraintKind::kContainment:
      object(id.i);
      m = std::min(m, scene.container.Evaluate(x));
      break;
    case ConstraintKind::kDomain:
      if (!scene.container_domain) throw std::invalid_argument("scene has no container domain");
      object(id.i);
      m = std::min(m, scene.container_domain->Evaluate(x));
      break;
    case ConstraintKind::kNonOverlap:
      if (id.i == id.j) throw std::invalid_argument("overlap constraint needs i != j");
      object(id.i);
      object(id.j);
      break;
  }
  return m;
}

Box SearchRegion(const Scene& scene, const ConstraintId& id) {
  const Region r = ConstraintRegion(scene, id);
  if (!r.bounded) {
    throw std::invalid_argument("no bounded search region for " + id.ToString() +
                                "; set a search box");
  }
  if (r.empty) {
    // Disjoint bounding boxes: return the first object's box.
    return SearchRegion(scene, {ConstraintKind::kContainment, id.i});
  }
  return Box(r.lo, r.hi);
}

std::optional<Witness> FindCounterexample(const Scene& scene, const ConstraintId& id,
                                          const OracleBudget& budget) {
  const Region region = ConstraintRegion(scene, id);
  if (!region.bounded) {
    throw std::invalid_argument("no bounded search region for " + id.ToString() +
                                "; set a search box");
  }
  if (region.empty) return std::nullopt;
  const int n = scene.dimension;
  const std::vector<Condition> conds = Conditions(scene, id);
  Searcher searcher;
  std::vector<IntervalEvaluator> intervals;
  for (const auto& c : conds) {
    searcher.evals.emplace_back(c.world);
    searcher.signs.push_back(c.sign);
    intervals.emplace_back(c.world);
  }

  // Interval pruning on a coarse cell grid.
  const int cells_per_axis = n == 1 ? 256 : n == 2 ? 48 : n == 3 ? 16 : 4;
  const Eigen::VectorXd width = region.hi - region.lo;
  const Eigen::VectorXd cell = width / cells_per_axis;
  long total_cells = 1;
  for (int k = 0; k < n; ++k) total_cells *= cells_per_axis;
  std::vector<char> alive(total_cells, 1);
  std::vector<long> alive_list;
  {
    Eigen::VectorXd lo(n), hi(n);
    for (long c = 0; c < total_cells; ++c) {
      long rem = c;
      for (int k = 0; k < n; ++k) {
        const int idx = static_cast<int>(rem % cells_per_axis);
        rem /= cells_per_axis;
        lo(k) = region.lo(k) + idx * cell(k);
        hi(k) = lo(k) + cell(k);
      }
      for (std::size_t q = 0; q < conds.size(); ++q) {
        const Interval iv = intervals[q](lo, hi);
        // Need sign * value ≥ kWitnessMargin somewhere in the cell.
        const double best = conds[q].sign > 0 ? iv.hi : -iv.lo;
        if (best < kWitnessMargin) {
          alive[c] = 0;
          break;
        }
      }
      if (alive[c]) alive_list.push_back(c);
    }
  }
  if (alive_list.empty()) return std::nullopt;

  constexpr std::size_t kKeep = 8;
  std::vector<std::pair<double, Eigen::VectorXd>> top;
  auto consider = [&](const Eigen::VectorXd& x) {
    const double m = searcher.Margin(x.data());
    if (top.size() < kKeep || m > top.back().first) {
      top.emplace_back(m, x);
      std::stable_sort(top.begin(), top.end(),
                       [](const auto& a, const auto& b) { return a.first > b.first; });
      if (top.size() > kKeep) top.pop_back();
    }
  };
  auto cell_of = [&](const Eigen::VectorXd& x) {
    long c = 0, mul = 1;
    for (int k = 0; k < n; ++k) {
      int idx = static_cast<int>(std::floor((x(k) - region.lo(k)) / cell(k)));
      idx = std::clamp(idx, 0, cells_per_axis - 1);
      c += idx * mul;
      mul *= cells_per_axis;
    }
    return c;
  };

  const int res = budget.grid_resolution > 0 ? budget.grid_resolution : DefaultGrid(n);
  const Eigen::VectorXd h = width / res;
  {
    std::vector<int> idx(n, 0);
    Eigen::VectorXd x(n);
    bool done = false;
    while (!done) {
      for (int k = 0; k < n; ++k) x(k) = region.lo(k) + (idx[k] + 0.5) * h(k);
      if (alive[cell_of(x)]) consider(x);
      int k = 0;
      while (k < n && ++idx[k] == res) idx[k++] = 0;
      done = k == n;
    }
  }
  {
    std::mt19937_64 rng(ConstraintSeed(budget.seed, id));
    Eigen::VectorXd x(n);
    for (int s = 0; s < budget.random_samples; ++s) {
      const long c = alive_list[rng() % alive_list.size()];
      long rem = c;
      for (int k = 0; k < n; ++k) {
        const int i = static_cast<int>(rem % cells_per_axis);
        rem /= cells_per_axis;
        x(k) = region.lo(k) + (i + UniformDouble(rng)) * cell(k);
      }
      consider(x);
    }
  }

  const double step = h.maxCoeff();
  for (const auto& [m, x0] : top) {
    if (!std::isfinite(m)) continue;
    const Eigen::VectorXd x = Refine(searcher, x0, step);
    const double exact = ViolationMargin(scene, id, x);
    if (exact >= kWitnessMargin) return Witness{x, exact};
    const double exact0 = ViolationMargin(scene, id, x0);
    if (exact0 >= kWitnessMargin) return Witness{x0, exact0};
  }
  return std::nullopt;
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kCertified: return "certified";
    case Verdict::kRefuted: return "refuted";
    case Verdict::kUndecided: return "undecided";
  }
  return "undecided";
}

double PackingReport::MinGamma() const {
  double g = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : results) {
    if (r.skipped || std::isnan(r.certificate.gamma)) continue;
    if (std::isnan(g) || r.certificate.gamma < g) g = r.certificate.gamma;
  }
  return g;
}

namespace {

void ParallelFor(int count, int jobs, const std::function<void(int)>& body) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int k = 0; k < count; ++k) body(k);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (int k = next++; k < count; k = next++) {
        try {
          body(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

PackingReport CertifyPacking(const Scene& scene, const PackingOptions& options) {
  scene.Validate();
  PackingReport report;
  report.degree = scene.degree;
  report.gamma_cap = scene.gamma_cap;
  const auto ids = SceneConstraints(scene);
  report.results.resize(ids.size());
  ParallelFor(static_cast<int>(ids.size()), options.jobs, [&](int k) {
    const auto start = std::chrono::steady_clock::now();
    ConstraintResult& r = report.results[k];
    r.id = ids[k];
    switch (r.id.kind) {
      case ConstraintKind::kContainment:
        r.certificate = CertifyContainment(scene, r.id.i, options.certify);
        break;
      case ConstraintKind::kDomain: {
        auto c = CertifyDomain(scene, r.id.i, options.certify);
        if (c) {
          r.certificate = *c;
        } else {
          r.skipped = true;
        }
        break;
      }
      case ConstraintKind::kNonOverlap: {
        PairCertificate pc = CertifyPair(scene, r.id.i, r.id.j, options.certify);
        r.certificate = std::move(pc.certificate);
        r.reversed = pc.reversed;
        break;
      }
    }
    if (options.run_oracle && !r.skipped && !r.certificate.verified) {
      r.witness = FindCounterexample(scene, r.id, options.budget);
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  bool all_verified = true, any_witness = false;
  for (const auto& r : report.results) {
    if (!r.skipped && !r.certificate.verified) all_verified = false;
    if (r.witness) any_witness = true;
  }
  report.verdict = any_witness    ? Verdict::kRefuted
                   : all_verified ? Verdict::kCertified
                                  : Verdict::kUndecided;
  return report;
}

std::vector<OracleResult> OracleCheck(const Scene& scene, const OracleBudget& budget, int jobs) {
  scene.Validate();
  const auto ids = SceneConstraints(scene);
  std::vector<OracleResult> out(ids.size());
  ParallelFor(static_cast<int>(ids.size()), jobs, [&](int k) {
    out[k].id = ids[k];
    out[k].witness = FindCounterexample(scene, ids[k], budget);
  });
  return out;
}

}  // namespace sospack
