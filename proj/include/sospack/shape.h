#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sospack/polynomial.h"
#include "sospack/sdp.h"
#include "sospack/sos.h"

namespace sospack {

struct PointCloud {
  int dimension = 0;
  std::vector<Eigen::VectorXd> points;

  /// Throws std::invalid_argument on an empty cloud, mixed lengths or
  /// non-finite coordinates.
  void Validate() const;
};

enum class CloudFormat { kCsv, kXyz };

/// ".xyz" selects whitespace-separated columns, anything else CSV.
CloudFormat CloudFormatFromPath(const std::string& path);

/// Parses one point per line. Blank lines and lines starting with '#' are
/// skipped. Errors carry the offending line number.
PointCloud ParsePointCloud(const std::string& text, CloudFormat format);
PointCloud LoadPointCloud(const std::string& path, CloudFormat format);
PointCloud LoadPointCloud(const std::string& path);

/// Writes "x1,x2,..." rows with round-trip precision.
std::string PointsToCsv(const std::vector<Eigen::VectorXd>& points);

struct NormalizedCloud {
  PointCloud cloud;
  /// frame.ToLocal(original) = normalized, frame.ToWorld maps back.
  AffineTransform frame;
};

/// Centers and rescales each coordinate so the cloud fills `target` up to a
/// 5% margin. A coordinate with zero extent borrows the widest extent.
NormalizedCloud NormalizeCloud(const PointCloud& cloud, const Box& target);

struct Prior {
  enum class Kind { kSymmetry, kStar, kConvex };
  Kind kind;
  Eigen::MatrixXd matrix;  // symmetry only

  static Prior Symmetry(Eigen::MatrixXd a) { return {Kind::kSymmetry, std::move(a)}; }
  static Prior Star() { return {Kind::kStar, {}}; }
  static Prior Convex() { return {Kind::kConvex, {}}; }

  /// "star", "convex", "symmetry:neg-identity" or "symmetry:a11,a12;a21,a22".
  static Prior Parse(const std::string& text, int dimension);
  std::string ToString() const;
};

struct LearnConfig {
  int degree = 6;
  Box box = Box::Cube(2, -1.1, 1.1);
  /// Defaults to 1.05 times the distance to the farthest box corner.
  std::optional<double> radius;
  double margin = 1e-4;
  std::vector<Prior> priors;
  /// Defaults to 2⌊(d - 2)/2⌋.
  std::optional<int> bound_multiplier_degree;
  SolverOptions solver;
  VerificationTolerances tolerances;

  double ResolvedRadius() const;
  int ResolvedMultiplierDegree() const;
  /// Throws std::invalid_argument on odd or non-positive degree, a radius that
  /// does not enclose the box, or priors of the wrong dimension.
  void Validate() const;
};

struct ShapeModel {
  Polynomial polynomial{1};
  /// The object is {x : ‖x‖ ≤ domain_radius, J(x) ≤ 0}.
  double domain_radius = 0.0;
  LearnConfig config;
  /// Covers the boundedness identity and every prior identity.
  Certificate certificate;
  double objective = 0.0;
  double max_point_value = 0.0;  // max J(x_i) over the training cloud
};

enum class LearnStatus { kOk, kInfeasible, kRejected };

struct LearnResult {
  LearnStatus status = LearnStatus::kRejected;
  SolverStatus solver_status = SolverStatus::kNumericalTrouble;
  ShapeModel model;
  std::string message;
};

/// Learns J of degree d maximizing ∫_Λ J / vol(Λ) subject to J(x_i) ≤ -ε,
/// 1 - J - s0 (R² - ‖x‖²) SOS and the configured priors.
LearnResult LearnShape(const PointCloud& cloud, const LearnConfig& config);

/// Points with |J| ≤ tolerance inside the domain ball. Contours 2D models
/// along `resolution` rays and 3D models on a resolution³ grid; other
/// dimensions use seeded random rays. Empty when the sublevel set is empty.
std::vector<Eigen::VectorXd> SampleBoundary(const Polynomial& j, double domain_radius,
                                            int resolution, double tolerance = 1e-9);
inline std::vector<Eigen::VectorXd> SampleBoundary(const ShapeModel& model, int resolution) {
  return SampleBoundary(model.polynomial, model.domain_radius, resolution);
}

}  // namespace sospack
