#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sospack/packing.h"
#include "sospack/polynomial.h"
#include "sospack/shape.h"

namespace sospack::fixtures {

enum class Kind {
  kCircleCloud,
  kAnnulusCloud,
  kSphereCloud,
  kBlendedSurfaceCloud,
  kTwoClusterCloud,
  kCrispCloud,
  kSceneEx3Initial,
  kSceneEx3Corrected,
  kSceneEx4Initial,
  kSceneEx4Corrected,
  kDisksDisjoint,
  kDisksOverlapping,
};

std::string_view to_string(Kind kind);
/// Accepts the snake_case names, e.g. "circle_cloud" or "scene_ex3_initial".
Kind KindFromString(std::string_view name);
std::vector<Kind> AllKinds();

struct FixtureSpec {
  Kind kind = Kind::kCircleCloud;
  std::uint64_t seed = 0;
  /// Point count for clouds; 0 selects the default for the kind.
  int size = 0;
};

struct GeneratedFile {
  std::string name;
  std::string content;
};

/// Deterministic files for one fixture request: a cloud file (".csv" in 2D, ".xyz" in
/// 3D) or a scene JSON carrying an oracle-established ground-truth tag.
std::vector<GeneratedFile> Generate(const FixtureSpec& spec);

/// Uniform angles on the unit circle with radial jitter of at most 5e-4.
PointCloud CircleCloud(std::uint64_t seed = 0, int n = 200);
/// Area-uniform samples of the annulus 0.5 ≤ ‖x‖ ≤ 0.9.
PointCloud AnnulusCloud(std::uint64_t seed = 0, int n = 400);
/// Uniform samples of the unit sphere.
PointCloud SphereCloud(std::uint64_t seed = 0, int n = 4096);
/// Teapot-like surface: a smooth union of body, lid, spout and handle
/// ellipsoids, sampled along random rays and scaled into the 0.8 ball.
PointCloud BlendedSurfaceCloud(std::uint64_t seed = 0, int n = 4096);
/// Two disks of radius 0.1 centred at (±0.8, 0).
PointCloud TwoClusterCloud(std::uint64_t seed = 0, int n = 200);
/// Non-convex star-shaped outline r(θ) = 0.6 + 0.12 cos 2θ + 0.06 cos 6θ.
PointCloud CrispCloud(std::uint64_t seed = 0, int n = 300);

/// (x1 - cx)² + (x2 - cy)² - r².
Polynomial DiskPolynomial(double cx, double cy, double r);
/// ‖x‖² - r².
Polynomial BallPolynomial(int n, double r = 1.0);
/// (‖x‖² + 1)³ - 10 (x1² + x2²)(x3² + 1).
Polynomial TorusPolynomial();

/// Object {J ≤ 0, ‖x‖² ≤ r²} for a learned model.
SceneObject ObjectFromShape(const ShapeModel& model, AffineTransform transform,
                            std::string label);

/// Teapot stand-in learned at degree 6 from BlendedSurfaceCloud.
ShapeModel TeapotModel(std::uint64_t seed = 0);
/// Crisp stand-in learned at degree 8 from CrispCloud.
ShapeModel CrispModel(std::uint64_t seed = 0);

/// Unit-disk container with disks of radius 0.2 at (±0.75, 0), (0, ±0.75).
Scene DisksDisjointScene();
/// Unit-disk container with disks of radius 0.2 at (0.1, 0) and (0.4, 0).
Scene DisksOverlappingScene();
/// Torus container with four scaled teapot stand-ins, T⁻¹ = 3(x - c).
Scene Ex3Scene(const ShapeModel& teapot, bool corrected);
/// Unit-disk container with the crisp stand-in and the four disks; the
/// corrected version rotates the crisp object by π/4.
Scene Ex4Scene(const ShapeModel& crisp, bool corrected);

/// Runs the oracle at a high budget and sets scene.ground_truth.
void TagGroundTruth(Scene& scene, int jobs = 1);

}  // namespace sospack::fixtures
