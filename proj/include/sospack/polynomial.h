#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sospack {

/// Exponent tuple α of a monomial x^α.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<int> exponents);

  static Monomial Constant(int dimension);
  static Monomial Variable(int dimension, int index, int power = 1);

  int dimension() const { return static_cast<int>(exponents_.size()); }
  int degree() const { return degree_; }
  int operator[](int i) const { return exponents_[i]; }
  const std::vector<int>& exponents() const { return exponents_; }

  Monomial operator*(const Monomial& other) const;
  double Evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  std::string ToString() const;

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.exponents_ == b.exponents_;
  }

 private:
  std::vector<int> exponents_;
  int degree_ = 0;
};

/// Graded lexicographic order: total degree first, then exponent tuples
/// compared lexicographically. For n=2 this yields 1, x2, x1, x2^2, x1x2, ...
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// All monomials in `n` variables of total degree <= `d`, in graded-lex order.
std::vector<Monomial> MonomialBasis(int n, int d);

/// Monomials of total degree exactly `d`, in graded-lex order.
std::vector<Monomial> HomogeneousMonomials(int n, int d);

/// Axis-aligned box [lower, upper] with lower < upper componentwise.
class Box {
 public:
  Box(Eigen::VectorXd lower, Eigen::VectorXd upper);
  /// The cube [lo, hi]^n.
  static Box Cube(int n, double lo, double hi);

  int dimension() const { return static_cast<int>(lower_.size()); }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  double Volume() const;
  bool ContainsStrictly(const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

/// The map x -> S (x - v) taking world coordinates into an object's local
/// frame (the inverse of the placement transform).
class AffineTransform {
 public:
  AffineTransform(Eigen::MatrixXd linear, Eigen::VectorXd offset,
                  bool rigid = false);
  static AffineTransform Identity(int n);
  static AffineTransform Translation(const Eigen::VectorXd& offset);

  int dimension() const { return static_cast<int>(offset_.size()); }
  const Eigen::MatrixXd& linear() const { return linear_; }
  const Eigen::VectorXd& offset() const { return offset_; }
  bool rigid() const { return rigid_; }

  /// S (x - v).
  Eigen::VectorXd ToLocal(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// S^{-1} y + v.
  Eigen::VectorXd ToWorld(const Eigen::Ref<const Eigen::VectorXd>& y) const;
  /// S^{-1}.
  Eigen::MatrixXd InverseLinear() const;

 private:
  Eigen::MatrixXd linear_;
  Eigen::VectorXd offset_;
  bool rigid_;
};

/// Returns t1 ∘ t2, i.e. x -> t1(t2(x)).
AffineTransform Compose(const AffineTransform& t1, const AffineTransform& t2);

/// Sparse multivariate polynomial with real coefficients. No stored
/// coefficient is exactly zero.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, double, GradedLexLess>;

  explicit Polynomial(int dimension);
  Polynomial(int dimension, double constant);
  Polynomial(const Monomial& monomial, double coefficient = 1.0);

  static Polynomial Variable(int dimension, int index);
  /// ‖x‖² in `dimension` variables.
  static Polynomial SquaredNorm(int dimension);

  int dimension() const { return dimension_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  std::size_t num_terms() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  double coefficient(const Monomial& m) const;
  void AddTerm(const Monomial& m, double coefficient);
  double MaxAbsCoefficient() const;

  double Evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double k);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) {
    return a += b;
  }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) {
    return a -= b;
  }
  friend Polynomial operator*(Polynomial a, double k) { return a *= k; }
  friend Polynomial operator*(double k, Polynomial a) { return a *= k; }
  friend Polynomial operator-(Polynomial a) { return a *= -1.0; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.dimension_ == b.dimension_ && a.terms_ == b.terms_;
  }

  std::string ToString() const;

 private:
  void CheckSameDimension(const Polynomial& other) const;

  int dimension_;
  TermMap terms_;
};

Polynomial Pow(const Polynomial& p, int k);

/// q(x) = p(S (x - v)), expanded by nested Horner substitution.
Polynomial ComposeAffine(const Polynomial& p, const AffineTransform& t);

/// q(x) = p(A x).
Polynomial ComposeLinear(const Polynomial& p, const Eigen::MatrixXd& a);

Polynomial Differentiate(const Polynomial& p, int variable);
std::vector<Polynomial> Gradient(const Polynomial& p);
std::vector<std::vector<Polynomial>> Hessian(const Polynomial& p);
/// x · ∇p(x).
Polynomial RadialDerivative(const Polynomial& p);

/// Exact integral over an axis-aligned box.
double IntegrateBox(const Polynomial& p, const Box& box);
/// Integral of a single monomial over a box.
double IntegrateMonomial(const Monomial& m, const Box& box);

/// Embeds p (in n variables) into n + extra variables, new variables last.
Polynomial Embed(const Polynomial& p, int new_dimension);

/// Homogeneous part of top degree.
Polynomial LeadingForm(const Polynomial& p);

/// Flattened polynomial for repeated fast evaluation.
class PolynomialEvaluator {
 public:
  explicit PolynomialEvaluator(const Polynomial& p);
  int dimension() const { return dimension_; }
  double operator()(const double* x) const;
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return (*this)(x.data());
  }

 private:
  int dimension_;
  int max_power_;
  std::vector<double> coefficients_;
  std::vector<int> exponents_;  // row-major, num_terms x dimension
};

}  // namespace sospack
