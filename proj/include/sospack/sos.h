#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sospack/polynomial.h"
#include "sospack/sdp.h"

namespace sospack {

enum class UnknownKind { kSos, kFreePolynomial, kScalar };

/// Handle to an unknown declared on an SosProgram.
struct UnknownRef {
  UnknownKind kind;
  int index;
  friend bool operator==(const UnknownRef&, const UnknownRef&) = default;
};

/// A linear map on polynomials. Must be linear; it is applied both to basis
/// elements (compilation) and to reconstructed values (verification).
using PolynomialMap = std::function<Polynomial(const Polynomial&)>;

/// Sum of known polynomials and linear images of unknowns:
///   constant + Σ map_t(unknown_t).
class PolyExpression {
 public:
  struct Term {
    UnknownRef unknown;
    int source_dimension;  // dimension the unknown is expressed in
    PolynomialMap map;
  };

  explicit PolyExpression(Polynomial constant);
  PolyExpression(int dimension, double constant);

  int dimension() const { return constant_.dimension(); }
  const Polynomial& constant() const { return constant_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool HasUnknowns() const { return !terms_.empty(); }

  PolyExpression& operator+=(const PolyExpression& other);
  PolyExpression& operator-=(const PolyExpression& other);
  PolyExpression& operator*=(double k);
  /// Multiplies every part by a known polynomial.
  PolyExpression& operator*=(const Polynomial& known);

  friend PolyExpression operator+(PolyExpression a, const PolyExpression& b) { return a += b; }
  friend PolyExpression operator-(PolyExpression a, const PolyExpression& b) { return a -= b; }
  friend PolyExpression operator-(PolyExpression a) { return a *= -1.0; }
  friend PolyExpression operator*(PolyExpression a, double k) { return a *= k; }
  friend PolyExpression operator*(double k, PolyExpression a) { return a *= k; }
  friend PolyExpression operator*(const Polynomial& known, PolyExpression a) {
    return a *= known;
  }
  /// Throws std::invalid_argument if both operands contain unknowns.
  friend PolyExpression operator*(const PolyExpression& a, const PolyExpression& b);

  /// Applies a further linear map (e.g. differentiation) to every part.
  /// `new_dimension` is the dimension of the map's output.
  PolyExpression Transformed(const PolynomialMap& map, int new_dimension) const;

 private:
  friend class SosProgram;
  Polynomial constant_;
  std::vector<Term> terms_;
};

/// Linear function of free-polynomial coefficients and scalar unknowns.
struct LinearExpression {
  struct Term {
    UnknownRef unknown;
    int element;  // basis index for free polynomials, 0 for scalars
    double coefficient;
  };
  std::vector<Term> terms;
  double constant = 0.0;

  LinearExpression& operator+=(const LinearExpression& other);
  friend LinearExpression operator+(LinearExpression a, const LinearExpression& b) {
    return a += b;
  }
  LinearExpression& operator*=(double k);
};

struct VerificationTolerances {
  double tol_res = 1e-6;
  double tol_psd = 1e-7;
  double margin_safety = 1e-6;
};

struct Certificate {
  double gamma = std::numeric_limits<double>::quiet_NaN();
  std::map<std::string, Polynomial> multipliers;
  std::map<std::string, Eigen::MatrixXd> gram_matrices;
  double identity_residual = std::numeric_limits<double>::infinity();
  double min_gram_eig = -std::numeric_limits<double>::infinity();
  bool verified = false;
  SolverStatus solver_status = SolverStatus::kNumericalTrouble;
};

/// SOS degree for a multiplier of a known polynomial of degree `known_degree`
/// under certification degree `d`: 2⌊(d - deg)/2⌋, or -1 when negative.
int MultiplierDegree(int d, int known_degree);
/// SOS degree for the slack polynomial: 2⌊d/2⌋.
int SlackDegree(int d);

/// Coefficients of z(x)ᵀ Q z(x) with z = MonomialBasis(n, degree / 2), as
/// functionals over the upper triangle of Q (block index 0).
std::map<Monomial, LinearFunctional, GradedLexLess> GramExpand(int n, int degree);

/// Builder for SOS programs: unknown declarations, polynomial identities
/// matched coefficient-wise, linear side constraints, and an objective.
class SosProgram {
 public:
  SosProgram() = default;

  UnknownRef NewSos(const std::string& name, int dimension, int degree);
  UnknownRef NewSosWithBasis(const std::string& name, std::vector<Monomial> basis);
  UnknownRef NewFreePolynomial(const std::string& name, int dimension, int degree);
  UnknownRef NewScalar(const std::string& name);

  /// Expression for an unknown. Scalars need the ambient dimension.
  PolyExpression Expr(UnknownRef u, int dimension = 0) const;

  void AddIdentity(const PolyExpression& lhs, const PolyExpression& rhs,
                   const std::string& label = "");

  /// Constrains w(x, y) = Σ y_i y_j H_ij(x) to be SOS in 2n variables using a
  /// basis bilinear in y. Throws std::invalid_argument if H is not symmetric.
  UnknownRef AddSosMatrixConstraint(const std::string& name,
                                    const std::vector<std::vector<PolyExpression>>& h);

  void AddLinearEquality(const LinearExpression& lhs, double rhs);
  /// lhs ≤ rhs, through a nonnegative slack.
  void AddLinearInequality(const LinearExpression& lhs, double rhs);
  /// Maximized.
  void SetObjective(const LinearExpression& objective) { objective_ = objective; }

  /// Σ_k weight(m_k) c_k over the coefficients c of a free polynomial.
  LinearExpression CoefficientFunctional(
      UnknownRef free_polynomial,
      const std::function<double(const Monomial&)>& weight) const;
  /// The free polynomial evaluated at x, as a function of its coefficients.
  LinearExpression EvaluationAt(UnknownRef free_polynomial,
                                const Eigen::Ref<const Eigen::VectorXd>& x) const;
  LinearExpression ScalarTerm(UnknownRef scalar, double coefficient = 1.0) const;

  SdpProblem Compile() const;

  /// Reconstructs multipliers from `solution`, recomputes every identity with
  /// exact polynomial arithmetic and checks Gram positivity. `gamma`, when
  /// given, must also exceed the safety margin.
  Certificate Verify(const SdpSolution& solution, const VerificationTolerances& tol,
                     std::optional<UnknownRef> gamma = std::nullopt) const;

  Polynomial PolynomialValue(UnknownRef u, const SdpSolution& solution) const;
  double ScalarValue(UnknownRef u, const SdpSolution& solution) const;
  Eigen::MatrixXd GramValue(UnknownRef u, const SdpSolution& solution) const;

  const std::vector<Monomial>& Basis(UnknownRef u) const;
  const std::string& Name(UnknownRef u) const;
  int num_identities() const { return static_cast<int>(identities_.size()); }
  int num_sos() const { return static_cast<int>(sos_.size()); }

  /// Degree bound of an expression: max degree over its constant and the
  /// images of every basis element of its unknowns.
  int ExpressionDegree(const PolyExpression& e) const;
  /// True if a - b is identically zero as a map of the unknowns (1e-12).
  bool ExpressionsEqual(const PolyExpression& a, const PolyExpression& b) const;

 private:
  struct SosUnknown {
    std::string name;
    int dimension;
    std::vector<Monomial> basis;
  };
  struct FreeUnknown {
    std::string name;
    int dimension;
    std::vector<Monomial> basis;
  };
  struct Identity {
    PolyExpression difference;  // lhs - rhs
    std::string label;
  };

  // Basis elements of an unknown, as polynomials in `source_dimension`,
  // together with the variable each element maps to.
  struct Element {
    Polynomial value;
    int block = -1;  // SOS: block index, row/col entry
    int row = 0;
    int col = 0;
    int scalar = -1;  // free scalar index
  };
  std::vector<Element> Elements(UnknownRef u, int source_dimension) const;
  int FreeScalarIndex(UnknownRef u, int element) const;
  void CheckRef(UnknownRef u) const;

  std::vector<SosUnknown> sos_;
  std::vector<FreeUnknown> free_;
  std::vector<std::string> scalars_;
  std::vector<Identity> identities_;
  std::vector<std::pair<LinearExpression, double>> equalities_;
  std::vector<std::pair<LinearExpression, double>> inequalities_;
  LinearExpression objective_;
};

}  // namespace sospack
