#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sospack/polynomial.h"
#include "sospack/sdp.h"
#include "sospack/sos.h"

namespace sospack {

/// The set {x : p(T⁻¹x) ≤ 0, F(T⁻¹x) ≤ 0}; `transform` stores T⁻¹.
struct SceneObject {
  std::string label;
  Polynomial p{1};
  std::optional<Polynomial> domain;  // F; absent means no domain constraint
  AffineTransform transform = AffineTransform::Identity(1);
};

/// Container {x : c(x) < 0, F0(x) < 0} holding transformed objects.
struct Scene {
  int dimension = 0;
  Polynomial container{1};
  std::optional<Polynomial> container_domain;  // F0
  std::vector<SceneObject> objects;
  int degree = 4;
  double gamma_cap = 1.0;
  /// "correct" or "incorrect" for generated fixtures.
  std::optional<std::string> ground_truth;
  /// Oracle search region for objects without a bounded description.
  std::optional<Box> search_box;

  /// Throws std::invalid_argument on dimension mismatches, an empty object
  /// list, a non-positive degree or cap, or an unbounded domain polynomial.
  void Validate() const;
};

enum class ConstraintKind { kContainment, kDomain, kNonOverlap };

struct ConstraintId {
  ConstraintKind kind;
  int i;
  int j = -1;

  /// "containment:<i>", "domain:<i>" or "overlap:<i>:<j>".
  std::string ToString() const;
  static ConstraintId Parse(const std::string& text);
  friend bool operator==(const ConstraintId&, const ConstraintId&) = default;
};

/// Every constraint of a scene in report order: containment, domain (when
/// F0 is present), then pairs i < j.
std::vector<ConstraintId> SceneConstraints(const Scene& scene);

struct CertifyOptions {
  SolverOptions solver;
  VerificationTolerances tolerances;
};

/// −c + p̃ s1 + F̃ s2 = s3 + γ with p̃ = p_i∘T_i⁻¹, maximizing γ ≤ gamma_cap.
/// Solver failures come back as an unverified certificate.
Certificate CertifyContainment(const Scene& scene, int i, const CertifyOptions& options = {});

/// Same template with F0 in place of c; nullopt when the scene has no F0.
std::optional<Certificate> CertifyDomain(const Scene& scene, int i,
                                         const CertifyOptions& options = {});

/// p̃_j + p̃_i s1 + F̃_i s2 + F̃_j s3 = s4 + γ, certifying that p̃_j > 0 on
/// object i. Exactly the (i, j) ordering; see CertifyPair for the fallback.
Certificate CertifyNonOverlap(const Scene& scene, int i, int j,
                              const CertifyOptions& options = {});

struct PairCertificate {
  Certificate certificate;
  bool reversed = false;  // true when the (j, i) ordering was used
};
/// Tries (i, j), then (j, i) if the first is not verified.
PairCertificate CertifyPair(const Scene& scene, int i, int j, const CertifyOptions& options = {});

struct OracleBudget {
  int grid_resolution = 200;  // per axis
  int random_samples = 20000;
  std::uint64_t seed = 0;
};

struct Witness {
  Eigen::VectorXd point;
  /// Smallest slack of the violated inequalities; positive for a witness.
  double margin;
};

/// Minimum witness margin accepted by the oracle.
inline constexpr double kWitnessMargin = 1e-9;

/// Signed violation margin of `x` for a constraint: the minimum over the
/// inequalities that must all hold for x to violate it. Exact evaluation.
double ViolationMargin(const Scene& scene, const ConstraintId& id,
                       const Eigen::Ref<const Eigen::VectorXd>& x);

/// World-space box that contains every violating point of the constraint.
/// Throws std::invalid_argument if no bounded region can be derived.
Box SearchRegion(const Scene& scene, const ConstraintId& id);

/// Grid plus seeded random search over SearchRegion with interval pruning,
/// followed by local refinement. Returns a point whose margin is at least
/// kWitnessMargin under exact re-evaluation, or nullopt.
std::optional<Witness> FindCounterexample(const Scene& scene, const ConstraintId& id,
                                          const OracleBudget& budget = {});

enum class Verdict { kCertified, kRefuted, kUndecided };
std::string_view to_string(Verdict verdict);

struct ConstraintResult {
  ConstraintId id;
  bool skipped = false;
  bool reversed = false;
  Certificate certificate;
  std::optional<Witness> witness;
  double seconds = 0.0;
};

struct PackingReport {
  int degree = 0;
  double gamma_cap = 1.0;
  std::vector<ConstraintResult> results;
  Verdict verdict = Verdict::kUndecided;

  /// Smallest γ over the solved constraints (NaN when none were solved).
  double MinGamma() const;
};

struct PackingOptions {
  CertifyOptions certify;
  OracleBudget budget;
  int jobs = 1;
  /// Run the oracle on every unverified constraint.
  bool run_oracle = true;
};

/// Certifies every constraint (in parallel with `jobs` workers), searches for
/// counterexamples on the unverified ones and aggregates the verdict.
PackingReport CertifyPacking(const Scene& scene, const PackingOptions& options = {});

struct OracleResult {
  ConstraintId id;
  std::optional<Witness> witness;
};
/// Oracle-only pass over every constraint.
std::vector<OracleResult> OracleCheck(const Scene& scene, const OracleBudget& budget = {},
                                      int jobs = 1);

/// A radius ρ with {p ≤ 0} ⊆ B_ρ(0), derived from a positive definite leading
/// form; nullopt if the leading form is not positive definite.
std::optional<double> SublevelRadius(const Polynomial& p);

}  // namespace sospack
