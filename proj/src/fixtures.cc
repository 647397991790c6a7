#include "sospack/fixtures.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>

#include "sospack/io.h"

namespace sospack::fixtures {

namespace {

constexpr double kPi = std::numbers::pi;

struct NamedKind {
  Kind kind;
  std::string_view name;
};

constexpr std::array<NamedKind, 12> kKinds = {{
    {Kind::kCircleCloud, "circle_cloud"},
    {Kind::kAnnulusCloud, "annulus_cloud"},
    {Kind::kSphereCloud, "sphere_cloud"},
    {Kind::kBlendedSurfaceCloud, "blended_surface_cloud"},
    {Kind::kTwoClusterCloud, "two_cluster_cloud"},
    {Kind::kCrispCloud, "crisp_cloud"},
    {Kind::kSceneEx3Initial, "scene_ex3_initial"},
    {Kind::kSceneEx3Corrected, "scene_ex3_corrected"},
    {Kind::kSceneEx4Initial, "scene_ex4_initial"},
    {Kind::kSceneEx4Corrected, "scene_ex4_corrected"},
    {Kind::kDisksDisjoint, "disks_disjoint"},
    {Kind::kDisksOverlapping, "disks_overlapping"},
}};

/// mt19937_64 is fully specified by the standard; the distributions are not,
/// so uniforms are formed from the raw bits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  double Normal() {
    double u = Uniform();
    while (u <= 0.0) u = Uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * kPi * Uniform());
  }

 private:
  std::mt19937_64 engine_;
};

Eigen::VectorXd Vec2(double x, double y) { return Eigen::Vector2d(x, y); }

Eigen::VectorXd RandomDirection(Rng& rng, int n) {
  Eigen::VectorXd u(n);
  do {
    for (int i = 0; i < n; ++i) u(i) = rng.Normal();
  } while (u.norm() < 1e-12);
  return u.normalized();
}

PointCloud MakeCloud(int n, std::vector<Eigen::VectorXd> points) {
  PointCloud cloud{n, std::move(points)};
  cloud.Validate();
  return cloud;
}

/// Ellipsoid "distance" ‖(x - c) / r‖ - 1.
struct Ellipsoid {
  Eigen::Vector3d center;
  Eigen::Vector3d radii;
  double operator()(const Eigen::Vector3d& x) const {
    return (x - center).cwiseQuotient(radii).norm() - 1.0;
  }
};

double SmoothMin(double a, double b, double k) {
  const double m = std::min(a, b);
  return m - std::log(std::exp(-k * (a - m)) + std::exp(-k * (b - m))) / k;
}

double TeapotField(const Eigen::Vector3d& x) {
  static const std::array<Ellipsoid, 4> parts = {{
      {{0.0, 0.0, 0.0}, {0.75, 0.75, 0.5}},    // body
      {{0.0, 0.0, 0.5}, {0.25, 0.25, 0.12}},   // lid
      {{0.8, 0.0, 0.2}, {0.35, 0.1, 0.1}},     // spout
      {{-0.8, 0.0, 0.1}, {0.1, 0.08, 0.3}},    // handle
  }};
  double v = parts[0](x);
  for (std::size_t i = 1; i < parts.size(); ++i) v = SmoothMin(v, parts[i](x), 12.0);
  return v;
}

std::string FormatNumber(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string PointsToXyz(const std::vector<Eigen::VectorXd>& points) {
  std::string out;
  for (const auto& p : points) {
    for (int i = 0; i < p.size(); ++i) {
      if (i > 0) out += ' ';
      out += FormatNumber(p(i));
    }
    out += '\n';
  }
  return out;
}

GeneratedFile CloudFile(Kind kind, const PointCloud& cloud) {
  std::string name(to_string(kind));
  if (cloud.dimension == 3) return {name + ".xyz", PointsToXyz(cloud.points)};
  return {name + ".csv", PointsToCsv(cloud.points)};
}

Eigen::Matrix2d Rotation(double theta) {
  Eigen::Matrix2d r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

Scene DiskScene(const std::vector<Eigen::Vector2d>& centers) {
  Scene s;
  s.dimension = 2;
  s.container = BallPolynomial(2);
  s.degree = 4;
  s.search_box = Box::Cube(2, -1.1, 1.1);
  int k = 0;
  for (const auto& c : centers) {
    SceneObject o;
    o.label = "disk" + std::to_string(++k);
    o.p = DiskPolynomial(c(0), c(1), 0.2);
    o.transform = AffineTransform::Identity(2);
    s.objects.push_back(std::move(o));
  }
  return s;
}

ShapeModel LearnOrThrow(const PointCloud& cloud, const LearnConfig& config, const char* what) {
  LearnResult r = LearnShape(cloud, config);
  if (r.status != LearnStatus::kOk) {
    throw std::runtime_error(std::string("learning the ") + what + " stand-in failed: " +
                             r.message);
  }
  return std::move(r.model);
}

}  // namespace

std::string_view to_string(Kind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k.name;
  }
  return "unknown";
}

Kind KindFromString(std::string_view name) {
  for (const auto& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  throw std::invalid_argument("unknown fixture kind '" + std::string(name) + "'");
}

std::vector<Kind> AllKinds() {
  std::vector<Kind> out;
  for (const auto& k : kKinds) out.push_back(k.kind);
  return out;
}

PointCloud CircleCloud(std::uint64_t seed, int n) {
  Rng rng(seed);
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < n; ++i) {
    const double t = rng.Uniform(0.0, 2.0 * kPi);
    const double r = 1.0 + rng.Uniform(-5e-4, 5e-4);
    pts.push_back(Vec2(r * std::cos(t), r * std::sin(t)));
  }
  return MakeCloud(2, std::move(pts));
}

PointCloud AnnulusCloud(std::uint64_t seed, int n) {
  Rng rng(seed);
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < n; ++i) {
    const double t = rng.Uniform(0.0, 2.0 * kPi);
    const double r = std::sqrt(rng.Uniform(0.25, 0.81));
    pts.push_back(Vec2(r * std::cos(t), r * std::sin(t)));
  }
  return MakeCloud(2, std::move(pts));
}

PointCloud SphereCloud(std::uint64_t seed, int n) {
  Rng rng(seed);
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < n; ++i) pts.push_back(RandomDirection(rng, 3));
  return MakeCloud(3, std::move(pts));
}

PointCloud BlendedSurfaceCloud(std::uint64_t seed, int n) {
  Rng rng(seed);
  std::vector<Eigen::VectorXd> pts;
  constexpr double kFar = 2.0;
  constexpr int kSteps = 400;
  double max_norm = 0.0;
  while (static_cast<int>(pts.size()) < n) {
    const Eigen::Vector3d u = RandomDirection(rng, 3);
    // Outermost crossing: march inwards until the field turns negative.
    double hi = kFar;
    double lo = -1.0;
    for (int k = 1; k <= kSteps; ++k) {
      const double t = kFar * (1.0 - static_cast<double>(k) / kSteps);
      if (TeapotField(t * u) < 0.0) {
        lo = t;
        break;
      }
      hi = t;
    }
    if (lo < 0.0) continue;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (TeapotField(mid * u) < 0.0 ? lo : hi) = mid;
    }
    const Eigen::Vector3d p = lo * u;
    max_norm = std::max(max_norm, p.norm());
    pts.push_back(p);
  }
  for (auto& p : pts) p *= 0.8 / max_norm;
  return MakeCloud(3, std::move(pts));
}

PointCloud TwoClusterCloud(std::uint64_t seed, int n) {
  Rng rng(seed);
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < n; ++i) {
    const double t = rng.Uniform(0.0, 2.0 * kPi);
    const double r = 0.1 * std::sqrt(rng.Uniform());
    const double cx = (i % 2 == 0) ? 0.8 : -0.8;
    pts.push_back(Vec2(cx + r * std::cos(t), r * std::sin(t)));
  }
  return MakeCloud(2, std::move(pts));
}

PointCloud CrispCloud(std::uint64_t seed, int n) {
  Rng rng(seed);
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < n; ++i) {
    const double t = rng.Uniform(0.0, 2.0 * kPi);
    const double r = 0.6 + 0.12 * std::cos(2.0 * t) + 0.06 * std::cos(6.0 * t);
    pts.push_back(Vec2(r * std::cos(t), r * std::sin(t)));
  }
  return MakeCloud(2, std::move(pts));
}

Polynomial DiskPolynomial(double cx, double cy, double r) {
  const Polynomial x = Polynomial::Variable(2, 0) - Polynomial(2, cx);
  const Polynomial y = Polynomial::Variable(2, 1) - Polynomial(2, cy);
  return x * x + y * y - Polynomial(2, r * r);
}

Polynomial BallPolynomial(int n, double r) {
  return Polynomial::SquaredNorm(n) - Polynomial(n, r * r);
}

Polynomial TorusPolynomial() {
  const Polynomial norm = Polynomial::SquaredNorm(3);
  const Polynomial x1 = Polynomial::Variable(3, 0);
  const Polynomial x2 = Polynomial::Variable(3, 1);
  const Polynomial x3 = Polynomial::Variable(3, 2);
  return Pow(norm + Polynomial(3, 1.0), 3) -
         10.0 * ((x1 * x1 + x2 * x2) * (x3 * x3 + Polynomial(3, 1.0)));
}

SceneObject ObjectFromShape(const ShapeModel& model, AffineTransform transform,
                            std::string label) {
  SceneObject o;
  o.label = std::move(label);
  o.p = model.polynomial;
  o.domain = BallPolynomial(model.polynomial.dimension(), model.domain_radius);
  o.transform = std::move(transform);
  return o;
}

ShapeModel TeapotModel(std::uint64_t seed) {
  LearnConfig config;
  config.degree = 6;
  config.box = Box::Cube(3, -0.9, 0.9);
  return LearnOrThrow(BlendedSurfaceCloud(seed), config, "teapot");
}

ShapeModel CrispModel(std::uint64_t seed) {
  LearnConfig config;
  config.degree = 8;
  config.box = Box::Cube(2, -0.9, 0.9);
  return LearnOrThrow(CrispCloud(seed), config, "crisp");
}

Scene DisksDisjointScene() {
  return DiskScene({{0.75, 0.0}, {-0.75, 0.0}, {0.0, 0.75}, {0.0, -0.75}});
}

Scene DisksOverlappingScene() { return DiskScene({{0.1, 0.0}, {0.4, 0.0}}); }

Scene Ex3Scene(const ShapeModel& teapot, bool corrected) {
  std::vector<Eigen::Vector3d> centers = {
      {1.0, 1.0, 0.0}, {-0.4, 0.0, 0.0}, {-0.5, 0.5, 0.0}, {-0.5, -0.5, 0.0}};
  if (corrected) {
    // Substituting x -> x - w into p(3(x - c)) moves the centre to c + w.
    centers[0] += Eigen::Vector3d(-0.5, -0.5, 0.0);
    centers[1] += Eigen::Vector3d(0.9, -0.5, 0.0);
  }
  Scene s;
  s.dimension = 3;
  s.container = TorusPolynomial();
  s.degree = 8;
  s.search_box = Box::Cube(3, -2.0, 2.0);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    AffineTransform t(3.0 * Eigen::Matrix3d::Identity(), centers[i], false);
    s.objects.push_back(ObjectFromShape(teapot, std::move(t), "teapot" + std::to_string(i + 1)));
  }
  return s;
}

Scene Ex4Scene(const ShapeModel& crisp, bool corrected) {
  Scene s = DisksDisjointScene();
  const double theta = corrected ? kPi / 4.0 : 0.0;
  const Eigen::Matrix2d linear = Rotation(-theta) / 0.8;
  AffineTransform t(linear, Eigen::Vector2d::Zero(), false);
  s.objects.insert(s.objects.begin(), ObjectFromShape(crisp, std::move(t), "crisp"));
  s.degree = crisp.polynomial.degree() + 2;
  return s;
}

void TagGroundTruth(Scene& scene, int jobs) {
  OracleBudget budget;
  budget.grid_resolution = scene.dimension == 2 ? 400 : 60;
  budget.random_samples = 200000;
  budget.seed = 0;
  bool violated = false;
  for (const auto& r : OracleCheck(scene, budget, jobs)) violated = violated || r.witness.has_value();
  scene.ground_truth = violated ? "incorrect" : "correct";
}

std::vector<GeneratedFile> Generate(const FixtureSpec& spec) {
  auto size = [&](int fallback) { return spec.size > 0 ? spec.size : fallback; };
  auto scene_file = [&](Scene scene) {
    TagGroundTruth(scene);
    return std::vector<GeneratedFile>{
        {std::string(to_string(spec.kind)) + ".json", DumpJson(SceneToJson(scene))}};
  };
  switch (spec.kind) {
    case Kind::kCircleCloud:
      return {CloudFile(spec.kind, CircleCloud(spec.seed, size(200)))};
    case Kind::kAnnulusCloud:
      return {CloudFile(spec.kind, AnnulusCloud(spec.seed, size(400)))};
    case Kind::kSphereCloud:
      return {CloudFile(spec.kind, SphereCloud(spec.seed, size(4096)))};
    case Kind::kBlendedSurfaceCloud:
      return {CloudFile(spec.kind, BlendedSurfaceCloud(spec.seed, size(4096)))};
    case Kind::kTwoClusterCloud:
      return {CloudFile(spec.kind, TwoClusterCloud(spec.seed, size(200)))};
    case Kind::kCrispCloud:
      return {CloudFile(spec.kind, CrispCloud(spec.seed, size(300)))};
    case Kind::kSceneEx3Initial:
    case Kind::kSceneEx3Corrected:
      return scene_file(Ex3Scene(TeapotModel(spec.seed), spec.kind == Kind::kSceneEx3Corrected));
    case Kind::kSceneEx4Initial:
    case Kind::kSceneEx4Corrected:
      return scene_file(Ex4Scene(CrispModel(spec.seed), spec.kind == Kind::kSceneEx4Corrected));
    case Kind::kDisksDisjoint:
      return scene_file(DisksDisjointScene());
    case Kind::kDisksOverlapping:
      return scene_file(DisksOverlappingScene());
  }
  throw std::invalid_argument("unknown fixture kind");
}

}  // namespace sospack::fixtures
