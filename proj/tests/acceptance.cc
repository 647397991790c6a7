// Acceptance checks. Usage: acceptance [criterion number ...]; no argument
// runs every criterion. Prints one PASS/FAIL line per criterion and exits
// non-zero if any failed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sospack/fixtures.h"
#include "sospack/packing.h"
#include "sospack/shape.h"
#include "sospack/sos.h"

namespace {

using namespace sospack;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void Check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

Eigen::VectorXd UniformInBall(std::mt19937_64& rng, int n, double r) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = g(rng);
  return x.normalized() * r * std::pow(u(rng), 1.0 / n);
}

std::vector<Eigen::VectorXd> InSetSamples(const ShapeModel& m, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const PolynomialEvaluator j(m.polynomial);
  std::vector<Eigen::VectorXd> out;
  for (long tries = 0; static_cast<int>(out.size()) < count && tries < 1000L * count; ++tries) {
    Eigen::VectorXd x = UniformInBall(rng, m.polynomial.dimension(), m.domain_radius);
    if (j(x) <= 0.0) out.push_back(std::move(x));
  }
  return out;
}

bool PositiveVerified(const Certificate& c) { return c.verified && c.gamma > 0.0; }

Scene UnitDiskScene(std::vector<SceneObject> objects) {
  Scene s;
  s.dimension = 2;
  s.container = Polynomial::SquaredNorm(2) - Polynomial(2, 1.0);
  s.objects = std::move(objects);
  s.degree = 4;
  s.search_box = Box::Cube(2, -1.1, 1.1);
  return s;
}

Eigen::Matrix2d Rotation(double t) {
  Eigen::Matrix2d r;
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

/// Two to four disks or quartic "squircles" under random rigid placements.
Scene RandomScene(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> count(2, 4);
  const int m = count(rng);
  std::vector<SceneObject> objects;
  for (int k = 0; k < m; ++k) {
    const double size = 0.12 + 0.15 * u(rng);
    Polynomial p(2);
    if (u(rng) < 0.5) {
      p = Polynomial::SquaredNorm(2) - Polynomial(2, size * size);
    } else {
      const Polynomial x = Polynomial::Variable(2, 0), y = Polynomial::Variable(2, 1);
      p = x * x * x * x + 0.5 * (x * x * y * y) + y * y * y * y - Polynomial(2, std::pow(size, 4));
    }
    const double rho = 0.7 * std::sqrt(u(rng));
    const double phi = 2.0 * std::numbers::pi * u(rng);
    const Eigen::Vector2d c(rho * std::cos(phi), rho * std::sin(phi));
    objects.push_back({"obj" + std::to_string(k), p, std::nullopt,
                       AffineTransform(Rotation(2.0 * std::numbers::pi * u(rng)).transpose(), c,
                                       true)});
  }
  return UnitDiskScene(std::move(objects));
}

// ------------------------------------------------------------------ 1

void PutinarExact(Outcome& out) {
  const auto start = std::chrono::steady_clock::now();
  const Polynomial x = Polynomial::Variable(1, 0);
  const Polynomial f = Polynomial(1, 2.0) - x * x;
  const Polynomial g = Polynomial(1, 1.0) - x * x;
  SosProgram prog;
  const UnknownRef s0 = prog.NewSos("s0", 1, SlackDegree(2));
  const UnknownRef s1 = prog.NewSos("s1", 1, MultiplierDegree(2, 2));
  const UnknownRef gamma = prog.NewScalar("gamma");
  prog.AddIdentity(PolyExpression(f) - prog.Expr(gamma, 1), prog.Expr(s0) + g * prog.Expr(s1));
  prog.AddLinearInequality(prog.ScalarTerm(gamma), 1.0);
  prog.SetObjective(prog.ScalarTerm(gamma));

  const SdpSolution sol = Solve(prog.Compile());
  const Certificate cert = prog.Verify(sol, {}, gamma);
  const double seconds = Seconds(start);

  // Hand certificate: 2 - x² - 1 = 0 + 1·(1 - x²), cap slack 0.
  SdpSolution hand;
  hand.status = SolverStatus::kOptimal;
  hand.block_values = {Eigen::MatrixXd::Zero(prog.Basis(s0).size(), prog.Basis(s0).size()),
                       Eigen::MatrixXd::Constant(1, 1, 1.0), Eigen::MatrixXd::Zero(1, 1)};
  hand.scalar_values = Eigen::VectorXd::Constant(1, 1.0);
  const Certificate hand_cert = prog.Verify(hand, {}, gamma);

  out.detail << "gamma=" << cert.gamma << " verified=" << cert.verified
             << " residual=" << cert.identity_residual << " hand_verified=" << hand_cert.verified
             << " time=" << seconds << "s ";
  out.Check(cert.verified, "solver certificate verified");
  out.Check(std::abs(cert.gamma - 1.0) <= 1e-6, "|gamma - 1| <= 1e-6");
  out.Check(hand_cert.verified && hand_cert.gamma == 1.0, "hand certificate s1=1, s0=0 verifies");
  out.Check(std::abs(cert.gamma - hand_cert.gamma) <= 1e-6, "solver gamma matches hand gamma");
  out.Check(seconds < 1.0, "runtime < 1 s");
}

// ------------------------------------------------------------------ 2

void DisjointDisks(Outcome& out, double gamma_cap, PackingReport* keep = nullptr) {
  const auto start = std::chrono::steady_clock::now();
  Scene s = fixtures::DisksDisjointScene();
  s.gamma_cap = gamma_cap;
  const PackingReport r = CertifyPacking(s);
  bool all_positive = true;
  for (const auto& c : r.results) all_positive = all_positive && PositiveVerified(c.certificate);
  OracleBudget budget;
  budget.grid_resolution = 400;
  budget.random_samples = 100000;
  int witnesses = 0;
  for (const auto& o : OracleCheck(s, budget)) witnesses += o.witness.has_value();
  const double seconds = Seconds(start);
  out.detail << "verdict=" << to_string(r.verdict) << " constraints=" << r.results.size()
             << " min_gamma=" << r.MinGamma() << " oracle_witnesses=" << witnesses
             << " time=" << seconds << "s ";
  out.Check(r.verdict == Verdict::kCertified, "verdict certified");
  out.Check(r.results.size() == 10 && all_positive, "every gamma > 0 and verified");
  out.Check(witnesses == 0, "oracle grid 400^2 finds no witness");
  out.Check(seconds < 30.0, "runtime < 30 s");
  if (keep) *keep = r;
}

// ------------------------------------------------------------------ 3

void Refutation(Outcome& out) {
  const auto start = std::chrono::steady_clock::now();
  Scene s = fixtures::DisksOverlappingScene();
  // Independent midpoint value: (0.25 - 0.1)² - 0.2² for either disk.
  const double expected_mid = 0.15 * 0.15 - 0.2 * 0.2;
  const Eigen::Vector2d mid(0.25, 0.0);
  const double p0 = s.objects[0].p.Evaluate(s.objects[0].transform.ToLocal(mid));
  const double p1 = s.objects[1].p.Evaluate(s.objects[1].transform.ToLocal(mid));
  out.Check(std::abs(p0 - expected_mid) < 1e-15 && std::abs(p1 - expected_mid) < 1e-15,
            "midpoint value -0.0175");

  const PackingReport r = CertifyPacking(s);
  std::optional<Eigen::VectorXd> witness;
  for (const auto& c : r.results) {
    if (c.id.kind == ConstraintKind::kNonOverlap && c.witness) witness = c.witness->point;
  }
  out.detail << "verdict=" << to_string(r.verdict);
  out.Check(r.verdict == Verdict::kRefuted, "verdict refuted");
  if (witness) {
    const double dist = (*witness - mid).norm();
    out.detail << " witness=(" << (*witness)(0) << "," << (*witness)(1) << ") dist=" << dist;
    out.Check(dist <= 0.05, "witness within 0.05 of (0.25, 0)");
  } else {
    out.Check(false, "overlap witness present");
  }
  for (int d : {4, 8}) {
    s.degree = d;
    const PairCertificate pc = CertifyPair(s, 0, 1);
    out.detail << " d" << d << "_gamma=" << pc.certificate.gamma
               << " verified=" << pc.certificate.verified;
    out.Check(!PositiveVerified(pc.certificate), "no verified positive gamma at d=" +
                                                     std::to_string(d));
  }
  const double seconds = Seconds(start);
  out.detail << " time=" << seconds << "s ";
  out.Check(seconds < 30.0, "runtime < 30 s");
}

// ------------------------------------------------------------------ 4

Scene BallsInTorus(const std::vector<Eigen::Vector3d>& centres) {
  Scene s;
  s.dimension = 3;
  s.container = fixtures::TorusPolynomial();
  s.degree = 8;
  s.search_box = Box::Cube(3, -2.0, 2.0);
  const Polynomial ball = fixtures::BallPolynomial(3);
  for (const auto& c : centres) {
    s.objects.push_back({"ball", ball, ball, AffineTransform(3.0 * Eigen::Matrix3d::Identity(), c)});
  }
  return s;
}

void TorusAnalog(Outcome& out) {
  const auto start = std::chrono::steady_clock::now();
  const Polynomial c = fixtures::TorusPolynomial();
  // Independent evaluation of (‖x‖² + 1)³ - 10 (x1² + x2²)(x3² + 1).
  auto torus = [](double a, double b, double z) {
    const double r2 = a * a + b * b + z * z;
    return std::pow(r2 + 1.0, 3) - 10.0 * (a * a + b * b) * (z * z + 1.0);
  };
  out.Check(c.Evaluate(Eigen::Vector3d(1, 0, 0)) == -2.0 && torus(1, 0, 0) == -2.0,
            "c(1,0,0) = -2");
  out.Check(c.Evaluate(Eigen::Vector3d(1, 1, 0)) == 7.0 && torus(1, 1, 0) == 7.0, "c(1,1,0) = 7");

  const Scene placed = BallsInTorus({Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(-1, 0, 0)});
  const PackingReport r = CertifyPacking(placed);
  out.detail << "centres(+-1,0,0): verdict=" << to_string(r.verdict);
  for (const auto& res : r.results) {
    out.detail << " " << res.id.ToString() << ":gamma=" << res.certificate.gamma
               << (res.certificate.verified ? "/verified" : "/unverified");
    if (res.witness) {
      out.detail << " witness=(" << res.witness->point.transpose() << ")";
    }
  }
  // The ball of radius 1/3 about (1,0,0) reaches (4/3,0,0), where c > 0.
  out.detail << " c(4/3,0,0)=" << torus(4.0 / 3.0, 0, 0);
  out.Check(r.verdict == Verdict::kCertified, "balls at (+-1,0,0) certified at d=8");

  const Scene moved = BallsInTorus({Eigen::Vector3d(1, 1, 0), Eigen::Vector3d(-1, 0, 0)});
  const Certificate moved_cert = CertifyContainment(moved, 0);
  const auto moved_witness =
      FindCounterexample(moved, {ConstraintKind::kContainment, 0});
  out.detail << "; centre (1,1,0): containment gamma=" << moved_cert.gamma
             << " witness=" << moved_witness.has_value();
  out.Check(!PositiveVerified(moved_cert) && moved_witness.has_value(),
            "moving a centre to (1,1,0) refutes containment");
  const double seconds = Seconds(start);
  out.detail << " time=" << seconds << "s ";
  out.Check(seconds < 300.0, "runtime < 5 min");
}

// ------------------------------------------------------------------ 5-8

void CircleLearning(Outcome& out) {
  const auto start = std::chrono::steady_clock::now();
  const PointCloud cloud = fixtures::CircleCloud(0, 200);
  LearnConfig config;
  config.degree = 6;
  const LearnResult r = LearnShape(cloud, config);
  out.Check(r.status == LearnStatus::kOk, "learning succeeded");
  if (r.status != LearnStatus::kOk) return;
  const ShapeModel& m = r.model;
  double max_point = -1e300;
  for (const auto& x : cloud.points) max_point = std::max(max_point, m.polynomial.Evaluate(x));
  std::mt19937_64 rng(5);
  const PolynomialEvaluator j(m.polynomial);
  const double radius = config.ResolvedRadius();
  double max_ball = -1e300;
  for (int k = 0; k < 100000; ++k) max_ball = std::max(max_ball, j(UniformInBall(rng, 2, radius)));
  const double seconds = Seconds(start);
  out.detail << "max J(x_i)=" << max_point << " certificate=" << m.certificate.verified
             << " max J on B_R=" << max_ball << " R=" << radius << " time=" << seconds << "s ";
  out.Check(max_point <= -1e-4, "J(x_i) <= -1e-4");
  out.Check(m.certificate.verified, "boundedness certificate verified");
  out.Check(max_ball <= 1.0 + 1e-6, "J <= 1 + 1e-6 on 1e5 ball samples");
  out.Check(seconds < 60.0, "runtime < 60 s");
}

void SymmetryPrior(Outcome& out) {
  LearnConfig config;
  config.degree = 6;
  config.priors.push_back(Prior::Symmetry(-Eigen::MatrixXd::Identity(2, 2)));
  const LearnResult r = LearnShape(fixtures::CircleCloud(0, 200), config);
  out.Check(r.status == LearnStatus::kOk, "learning succeeded");
  if (r.status != LearnStatus::kOk) return;
  const Polynomial& p = r.model.polynomial;
  const Polynomial diff = p - ComposeLinear(p, -Eigen::MatrixXd::Identity(2, 2));
  const double max_diff = diff.is_zero() ? 0.0 : diff.MaxAbsCoefficient();
  double max_odd = 0.0;
  for (const auto& [mono, coef] : p.terms()) {
    if (mono.degree() % 2 == 1) max_odd = std::max(max_odd, std::abs(coef));
  }
  out.detail << "max|coef(J(x)-J(-x))|=" << max_diff << " max|odd coef|=" << max_odd << " ";
  out.Check(max_diff <= 1e-9, "J(x) - J(-x) coefficients <= 1e-9");
  out.Check(max_odd <= 1e-9 / 2, "odd coefficients vanish");
}

void ConvexPrior(Outcome& out) {
  LearnConfig config;
  config.degree = 4;
  config.priors.push_back(Prior::Convex());
  const LearnResult r = LearnShape(fixtures::TwoClusterCloud(0, 200), config);
  out.Check(r.status == LearnStatus::kOk, "learning succeeded");
  if (r.status != LearnStatus::kOk) return;
  const ShapeModel& m = r.model;
  const PolynomialEvaluator j(m.polynomial);
  const auto in = InSetSamples(m, 2000, 71);
  out.Check(in.size() >= 2, "in-set samples found");
  if (in.size() < 2) return;
  std::mt19937_64 rng(72);
  std::uniform_int_distribution<std::size_t> pick(0, in.size() - 1);
  std::uniform_real_distribution<double> alpha(0.0, 1.0);
  double worst_mid = -1e300;
  for (int k = 0; k < 1000; ++k) {
    const auto& x = in[pick(rng)];
    const auto& y = in[pick(rng)];
    const double a = alpha(rng);
    worst_mid = std::max(worst_mid, j(a * x + (1 - a) * y) - std::max(j(x), j(y)));
  }
  const auto h = Hessian(m.polynomial);
  double min_eig = 1e300;
  for (int k = 0; k < 10000; ++k) {
    const Eigen::Vector2d x = UniformInBall(rng, 2, m.domain_radius);
    Eigen::Matrix2d hx;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) hx(a, b) = h[a][b].Evaluate(x);
    min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(hx).eigenvalues()(0));
  }
  out.detail << "max[J(mid) - max(J(x),J(y))]=" << worst_mid << " min Hessian eig=" << min_eig
             << " ";
  out.Check(worst_mid <= 1e-6, "midpoint inequality within 1e-6 on 1e3 pairs");
  out.Check(min_eig >= -1e-7, "Hessian eigenvalues >= -1e-7 at 1e4 points");
}

void StarPrior(Outcome& out) {
  LearnConfig config;
  config.degree = 8;
  config.priors.push_back(Prior::Star());
  const LearnResult r = LearnShape(fixtures::CrispCloud(0, 300), config);
  out.Check(r.status == LearnStatus::kOk, "learning succeeded");
  if (r.status != LearnStatus::kOk) return;
  const PolynomialEvaluator j(r.model.polynomial);
  const auto in = InSetSamples(r.model, 10000, 81);
  double worst = -1e300;
  for (const auto& x : in) {
    const double jx = j(x);
    for (int s = 1; s <= 10; ++s) worst = std::max(worst, j((s / 10.0) * x) - jx);
  }
  out.detail << "samples=" << in.size() << " max[J(lx) - J(x)]=" << worst << " ";
  out.Check(in.size() == 10000, "1e4 in-set samples");
  out.Check(worst <= 1e-6, "J(lambda x) <= J(x) + 1e-6");
}

// ------------------------------------------------------------------ 9

void OracleAgreement(Outcome& out) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2025);
  int conflicts = 0, refuted_scenes = 0, refuted_without_unverified = 0, certified_scenes = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Scene s = RandomScene(rng);
    PackingOptions options;
    options.run_oracle = false;
    const PackingReport r = CertifyPacking(s, options);
    const auto oracle = OracleCheck(s);
    bool refuted = false, any_unverified = false;
    for (std::size_t k = 0; k < r.results.size(); ++k) {
      const bool positive = PositiveVerified(r.results[k].certificate);
      const bool witness = oracle[k].witness.has_value();
      conflicts += positive && witness;
      refuted = refuted || witness;
      any_unverified = any_unverified || !positive;
    }
    refuted_scenes += refuted;
    refuted_without_unverified += refuted && !any_unverified;
    certified_scenes += !any_unverified;
  }
  const double seconds = Seconds(start);
  out.detail << "scenes=50 certified=" << certified_scenes << " oracle_refuted=" << refuted_scenes
             << " conflicts=" << conflicts
             << " refuted_without_unverified=" << refuted_without_unverified
             << " time=" << seconds << "s ";
  out.Check(conflicts == 0, "no verified positive gamma with an oracle witness");
  out.Check(refuted_without_unverified == 0, "refuted scenes have an unverified constraint");
  out.Check(seconds < 600.0, "runtime < 10 min");
}

// ------------------------------------------------------------------ 10

void DegreeMonotonicity(Outcome& out) {
  std::vector<Scene> suite;
  suite.push_back(fixtures::DisksDisjointScene());
  Scene disjoint6 = fixtures::DisksDisjointScene();
  disjoint6.degree = 6;
  suite.push_back(disjoint6);
  suite.push_back(fixtures::Ex4Scene(fixtures::CrispModel(), true));
  std::mt19937_64 rng(2025);
  for (int k = 0; k < 10; ++k) suite.push_back(RandomScene(rng));

  int certified = 0, recertified = 0;
  for (Scene& s : suite) {
    PackingOptions options;
    options.run_oracle = false;
    const PackingReport low = CertifyPacking(s, options);
    s.degree += 2;
    const PackingReport high = CertifyPacking(s, options);
    for (std::size_t k = 0; k < low.results.size(); ++k) {
      if (!PositiveVerified(low.results[k].certificate)) continue;
      ++certified;
      if (PositiveVerified(high.results[k].certificate)) {
        ++recertified;
      } else {
        out.detail << "lost " << low.results[k].id.ToString() << " at d=" << s.degree << "; ";
      }
    }
  }
  out.detail << "scenes=" << suite.size() << " certified=" << certified
             << " recertified_at_d+2=" << recertified << " ";
  out.Check(certified > 0 && recertified == certified, "every certified constraint re-certifies");
}

// ------------------------------------------------------------------ 11

void CapIndependence(Outcome& out) {
  Outcome base, capped;
  PackingReport a, b;
  DisjointDisks(base, 1.0, &a);
  DisjointDisks(capped, 10.0, &b);
  bool same = a.verdict == b.verdict && a.results.size() == b.results.size();
  for (std::size_t k = 0; same && k < a.results.size(); ++k) {
    same = PositiveVerified(a.results[k].certificate) == PositiveVerified(b.results[k].certificate);
  }
  out.detail << "cap1: " << to_string(a.verdict) << " min_gamma=" << a.MinGamma()
             << "; cap10: " << to_string(b.verdict) << " min_gamma=" << b.MinGamma() << " ";
  out.Check(capped.pass, "criterion 2 passes with gamma_cap = 10");
  out.Check(same, "verdict and per-constraint outcome unchanged");
}

// ------------------------------------------------------------------ 12

void IntegrationExactness(Outcome& out) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  constexpr long kSamples = 10'000'000;
  int agree = 0;
  double worst_z = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    const int terms = 1 + static_cast<int>(u(rng) * 6);
    std::vector<std::vector<int>> exps;
    std::vector<double> coefs;
    Polynomial p(n);
    for (int t = 0; t < terms; ++t) {
      std::vector<int> e(n, 0);
      int budget = static_cast<int>(u(rng) * 5);  // total degree <= 4
      for (int i = 0; i < n && budget > 0; ++i) {
        const int take = i == n - 1 ? budget : static_cast<int>(u(rng) * (budget + 1));
        e[i] = take;
        budget -= take;
      }
      const double c = 4.0 * u(rng) - 2.0;
      exps.push_back(e);
      coefs.push_back(c);
      p.AddTerm(Monomial(e), c);
    }
    Eigen::VectorXd lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
      lo(i) = -2.0 + 3.0 * u(rng);
      hi(i) = lo(i) + 0.1 + 2.0 * u(rng);
    }
    const double exact = IntegrateBox(p, Box(lo, hi));

    // Plain Monte Carlo with its own power evaluation.
    double volume = 1.0;
    for (int i = 0; i < n; ++i) volume *= hi(i) - lo(i);
    std::mt19937_64 mc(1000 + trial);
    double sum = 0.0, sum_sq = 0.0;
    double x[3], pw[3][5];
    for (long s = 0; s < kSamples; ++s) {
      for (int i = 0; i < n; ++i) {
        x[i] = lo(i) + (hi(i) - lo(i)) * (static_cast<double>(mc() >> 11) * 0x1.0p-53);
        pw[i][0] = 1.0;
        for (int k = 1; k < 5; ++k) pw[i][k] = pw[i][k - 1] * x[i];
      }
      double v = 0.0;
      for (std::size_t t = 0; t < coefs.size(); ++t) {
        double m = coefs[t];
        for (int i = 0; i < n; ++i) m *= pw[i][exps[t][i]];
        v += m;
      }
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / kSamples;
    const double var = std::max(0.0, sum_sq / kSamples - mean * mean);
    const double estimate = volume * mean;
    const double se = volume * std::sqrt(var / kSamples);
    // A constant integrand has zero sample variance; the estimate is then
    // exact up to the rounding of 1e7 summed terms.
    const double z = se > 1e-9 * std::abs(estimate)
                         ? std::abs(exact - estimate) / se
                         : (std::abs(exact - estimate) <= 1e-9 * std::abs(exact) ? 0.0 : 1e9);
    worst_z = std::max(worst_z, z);
    agree += z <= 3.0;
  }
  out.detail << "within 3 SE: " << agree << "/100 worst |z|=" << worst_z << " ";
  out.Check(agree >= 97, ">= 97 of 100 within 3 standard errors");
}

struct Criterion {
  int number;
  const char* name;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "Putinar exact case", PutinarExact},
      {2, "disjoint disks certified", [](Outcome& o) { DisjointDisks(o, 1.0); }},
      {3, "overlapping disks refuted", Refutation},
      {4, "balls in torus", TorusAnalog},
      {5, "circle shape learning", CircleLearning},
      {6, "symmetry prior", SymmetryPrior},
      {7, "convexity prior", ConvexPrior},
      {8, "star prior", StarPrior},
      {9, "oracle-certifier agreement", OracleAgreement},
      {10, "degree monotonicity", DegreeMonotonicity},
      {11, "cap independence", CapIndependence},
      {12, "integration exactness", IntegrationExactness},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::stoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), c.number) == selected.end()) {
      continue;
    }
    Outcome out;
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << "[exception: " << e.what() << "]";
    }
    failures += !out.pass;
    std::printf("%s criterion %d (%s): %s\n", out.pass ? "PASS" : "FAIL", c.number, c.name,
                out.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
