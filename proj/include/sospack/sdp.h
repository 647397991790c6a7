#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace sospack {

// Symmetric block variables are addressed through their upper triangle only.
// A coefficient a stored at (row, col) with row < col is the value of the
// symmetric coefficient matrix at both (row, col) and (col, row), so it
// contributes a * (Q(row, col) + Q(col, row)) = 2 a Q(row, col).

struct BlockEntry {
  int block;
  int row;
  int col;
  double coefficient;
};

struct ScalarEntry {
  int index;
  double coefficient;
};

struct LinearFunctional {
  std::vector<BlockEntry> block_terms;
  std::vector<ScalarEntry> scalar_terms;

  void AddBlockTerm(int block, int row, int col, double coefficient);
  void AddScalarTerm(int index, double coefficient);
  bool empty() const { return block_terms.empty() && scalar_terms.empty(); }
  double Evaluate(const std::vector<Eigen::MatrixXd>& blocks,
                  const Eigen::VectorXd& scalars) const;
};

struct LinearEquality {
  LinearFunctional lhs;
  double rhs = 0.0;
};

/// maximize objective(X, u) subject to equalities, X_k ⪰ 0, u free.
struct SdpProblem {
  std::vector<int> psd_blocks;
  int free_scalars = 0;
  std::vector<LinearEquality> equalities;
  LinearFunctional objective;

  int AddPsdBlock(int size);
  int AddFreeScalar();
  /// Throws std::invalid_argument on out-of-range indices or bad block sizes.
  void Validate() const;
  /// One line per equality term: "eq <i> block <k> <r> <c> <coef>" or
  /// "eq <i> scalar <j> <coef>", then "rhs <i> <value>".
  std::string DebugDump() const;
};

enum class SolverStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kNumericalTrouble,
  kIterationLimit,
};

std::string_view to_string(SolverStatus status);
SolverStatus SolverStatusFromString(std::string_view name);

struct SdpSolution {
  SolverStatus status = SolverStatus::kNumericalTrouble;
  std::vector<Eigen::MatrixXd> block_values;
  Eigen::VectorXd scalar_values;
  double objective_value = 0.0;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double relative_gap = 0.0;
};

struct SolverOptions {
  int max_iters = 200;
  double feas_tol = 1e-8;
  double duality_gap_tol = 1e-8;
  bool verbose = false;
};

/// Backend contract. Implementations must be pure functions of their inputs.
class SdpSolverBackend {
 public:
  virtual ~SdpSolverBackend() = default;
  virtual std::string name() const = 0;
  virtual SdpSolution Solve(const SdpProblem& problem,
                            const SolverOptions& options) const = 0;
};

/// Infeasible-start primal-dual path following with the HKM search direction
/// and Mehrotra predictor-corrector steps.
class InteriorPointSolver final : public SdpSolverBackend {
 public:
  std::string name() const override { return "sospack-ipm"; }
  SdpSolution Solve(const SdpProblem& problem,
                    const SolverOptions& options) const override;
};

/// Solves with the built-in interior point backend.
SdpSolution Solve(const SdpProblem& problem, const SolverOptions& options = {});

/// Smallest eigenvalue of a symmetric matrix. Throws if asymmetric beyond 1e-9
/// (relative to the largest entry).
double MinEigenvalue(const Eigen::MatrixXd& m);

}  // namespace sospack
