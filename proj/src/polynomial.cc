#include "sospack/polynomial.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sospack {

namespace {

void EnumerateExponents(int n, int remaining, int var, std::vector<int>& current,
                        std::vector<Monomial>& out) {
  if (var == n - 1) {
    current[var] = remaining;
    out.emplace_back(current);
    return;
  }
  // Graded-lex ascending: smaller leading exponents come first.
  for (int e = 0; e <= remaining; ++e) {
    current[var] = e;
    EnumerateExponents(n, remaining - e, var + 1, current, out);
  }
  current[var] = 0;
}

}  // namespace

Monomial::Monomial(std::vector<int> exponents)
    : exponents_(std::move(exponents)) {
  for (int e : exponents_) {
    if (e < 0) throw std::invalid_argument("Monomial: negative exponent");
    degree_ += e;
  }
}

Monomial Monomial::Constant(int dimension) {
  return Monomial(std::vector<int>(dimension, 0));
}

Monomial Monomial::Variable(int dimension, int index, int power) {
  std::vector<int> e(dimension, 0);
  e.at(index) = power;
  return Monomial(std::move(e));
}

Monomial Monomial::operator*(const Monomial& other) const {
  if (dimension() != other.dimension()) {
    throw std::invalid_argument("Monomial: dimension mismatch");
  }
  std::vector<int> e(exponents_);
  for (int i = 0; i < dimension(); ++i) e[i] += other.exponents_[i];
  return Monomial(std::move(e));
}

double Monomial::Evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  double v = 1.0;
  for (int i = 0; i < dimension(); ++i) {
    for (int k = 0; k < exponents_[i]; ++k) v *= x[i];
  }
  return v;
}

std::string Monomial::ToString() const {
  if (degree_ == 0) return "1";
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < dimension(); ++i) {
    if (exponents_[i] == 0) continue;
    if (!first) os << "*";
    first = false;
    os << "x" << (i + 1);
    if (exponents_[i] > 1) os << "^" << exponents_[i];
  }
  return os.str();
}

bool GradedLexLess::operator()(const Monomial& a, const Monomial& b) const {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  return a.exponents() < b.exponents();
}

std::vector<Monomial> HomogeneousMonomials(int n, int d) {
  if (n < 1 || d < 0) throw std::invalid_argument("HomogeneousMonomials");
  std::vector<Monomial> out;
  std::vector<int> current(n, 0);
  EnumerateExponents(n, d, 0, current, out);
  return out;
}

std::vector<Monomial> MonomialBasis(int n, int d) {
  if (n < 1 || d < 0) throw std::invalid_argument("MonomialBasis");
  std::vector<Monomial> out;
  for (int k = 0; k <= d; ++k) {
    auto layer = HomogeneousMonomials(n, k);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

Box::Box(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || lower_.size() == 0) {
    throw std::invalid_argument("Box: bounds must have equal positive length");
  }
  for (int i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] < upper_[i])) {
      throw std::invalid_argument("Box: lower must be < upper");
    }
  }
}

Box Box::Cube(int n, double lo, double hi) {
  return Box(Eigen::VectorXd::Constant(n, lo), Eigen::VectorXd::Constant(n, hi));
}

double Box::Volume() const { return (upper_ - lower_).prod(); }

bool Box::ContainsStrictly(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return (x.array() > lower_.array()).all() && (x.array() < upper_.array()).all();
}

AffineTransform::AffineTransform(Eigen::MatrixXd linear, Eigen::VectorXd offset,
                                 bool rigid)
    : linear_(std::move(linear)), offset_(std::move(offset)), rigid_(rigid) {
  const auto n = offset_.size();
  if (n == 0 || linear_.rows() != n || linear_.cols() != n) {
    throw std::invalid_argument("AffineTransform: shape mismatch");
  }
  if (std::abs(linear_.determinant()) <= 1e-12) {
    throw std::invalid_argument("AffineTransform: linear part is singular");
  }
  if (rigid_) {
    const Eigen::MatrixXd err =
        linear_.transpose() * linear_ - Eigen::MatrixXd::Identity(n, n);
    if (err.cwiseAbs().maxCoeff() > 1e-9) {
      throw std::invalid_argument("AffineTransform: rigid flag on non-orthogonal matrix");
    }
  }
}

AffineTransform AffineTransform::Identity(int n) {
  return AffineTransform(Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n),
                         true);
}

AffineTransform AffineTransform::Translation(const Eigen::VectorXd& offset) {
  const auto n = offset.size();
  return AffineTransform(Eigen::MatrixXd::Identity(n, n), offset, true);
}

Eigen::VectorXd AffineTransform::ToLocal(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return linear_ * (x - offset_);
}

Eigen::VectorXd AffineTransform::ToWorld(
    const Eigen::Ref<const Eigen::VectorXd>& y) const {
  return linear_.partialPivLu().solve(y) + offset_;
}

Eigen::MatrixXd AffineTransform::InverseLinear() const {
  return linear_.inverse();
}

AffineTransform Compose(const AffineTransform& t1, const AffineTransform& t2) {
  if (t1.dimension() != t2.dimension()) {
    throw std::invalid_argument("Compose: dimension mismatch");
  }
  // t1(t2(x)) = S1 S2 (x - v2 - S2^{-1} v1)
  Eigen::MatrixXd s = t1.linear() * t2.linear();
  Eigen::VectorXd v = t2.offset() + t2.linear().partialPivLu().solve(t1.offset());
  return AffineTransform(std::move(s), std::move(v), t1.rigid() && t2.rigid());
}

Polynomial::Polynomial(int dimension) : dimension_(dimension) {
  if (dimension < 1) throw std::invalid_argument("Polynomial: dimension must be >= 1");
}

Polynomial::Polynomial(int dimension, double constant) : Polynomial(dimension) {
  AddTerm(Monomial::Constant(dimension), constant);
}

Polynomial::Polynomial(const Monomial& monomial, double coefficient)
    : Polynomial(monomial.dimension()) {
  AddTerm(monomial, coefficient);
}

Polynomial Polynomial::Variable(int dimension, int index) {
  return Polynomial(Monomial::Variable(dimension, index));
}

Polynomial Polynomial::SquaredNorm(int dimension) {
  Polynomial p(dimension);
  for (int i = 0; i < dimension; ++i) p.AddTerm(Monomial::Variable(dimension, i, 2), 1.0);
  return p;
}

int Polynomial::degree() const {
  return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
}

double Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::AddTerm(const Monomial& m, double coefficient) {
  if (m.dimension() != dimension_) {
    throw std::invalid_argument("Polynomial: monomial dimension mismatch");
  }
  if (coefficient == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(m, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::MaxAbsCoefficient() const {
  double m = 0.0;
  for (const auto& [mono, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

double Polynomial::Evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != dimension_) {
    throw std::invalid_argument("Polynomial::Evaluate: dimension mismatch");
  }
  return PolynomialEvaluator(*this)(x.data());
}

void Polynomial::CheckSameDimension(const Polynomial& other) const {
  if (dimension_ != other.dimension_) {
    throw std::invalid_argument("Polynomial: dimension mismatch");
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  CheckSameDimension(other);
  for (const auto& [m, c] : other.terms_) AddTerm(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  CheckSameDimension(other);
  for (const auto& [m, c] : other.terms_) AddTerm(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double k) {
  if (k == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= k;
    if (it->second == 0.0) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.CheckSameDimension(b);
  Polynomial out(a.dimension_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) out.AddTerm(ma * mb, ca * cb);
  }
  return out;
}

std::string Polynomial::ToString() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    os << std::abs(c);
    if (m.degree() > 0) os << "*" << m.ToString();
  }
  return os.str();
}

Polynomial Pow(const Polynomial& p, int k) {
  if (k < 0) throw std::invalid_argument("Pow: negative exponent");
  Polynomial result(p.dimension(), 1.0);
  Polynomial base = p;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

namespace {

// Substitutes x_var -> images[var] for var >= `var`, Horner in each variable.
// `p` only involves variables >= var.
Polynomial HornerSubstitute(const Polynomial& p, int var,
                            const std::vector<Polynomial>& images) {
  const int n = p.dimension();
  if (p.is_zero()) return Polynomial(n);
  if (var == n) return p;  // constant
  // Split p = sum_e x_var^e r_e.
  std::map<int, Polynomial> slices;
  for (const auto& [m, c] : p.terms()) {
    std::vector<int> e = m.exponents();
    const int power = e[var];
    e[var] = 0;
    auto [it, _] = slices.try_emplace(power, n);
    it->second.AddTerm(Monomial(std::move(e)), c);
  }
  const int top = slices.rbegin()->first;
  Polynomial acc(n);
  for (int e = top; e >= 0; --e) {
    if (e != top) acc = acc * images[var];
    auto it = slices.find(e);
    if (it != slices.end()) acc += HornerSubstitute(it->second, var + 1, images);
  }
  return acc;
}

}  // namespace

Polynomial ComposeAffine(const Polynomial& p, const AffineTransform& t) {
  const int n = p.dimension();
  if (t.dimension() != n) {
    throw std::invalid_argument("ComposeAffine: dimension mismatch");
  }
  // images[i] = sum_j S_ij (x_j - v_j)
  std::vector<Polynomial> images;
  images.reserve(n);
  const Eigen::VectorXd sv = t.linear() * t.offset();
  for (int i = 0; i < n; ++i) {
    Polynomial li(n, -sv[i]);
    for (int j = 0; j < n; ++j) li.AddTerm(Monomial::Variable(n, j), t.linear()(i, j));
    images.push_back(std::move(li));
  }
  return HornerSubstitute(p, 0, images);
}

Polynomial ComposeLinear(const Polynomial& p, const Eigen::MatrixXd& a) {
  const int n = p.dimension();
  if (a.rows() != n || a.cols() != n) {
    throw std::invalid_argument("ComposeLinear: dimension mismatch");
  }
  std::vector<Polynomial> images;
  for (int i = 0; i < n; ++i) {
    Polynomial li(n);
    for (int j = 0; j < n; ++j) li.AddTerm(Monomial::Variable(n, j), a(i, j));
    images.push_back(std::move(li));
  }
  return HornerSubstitute(p, 0, images);
}

Polynomial Differentiate(const Polynomial& p, int variable) {
  if (variable < 0 || variable >= p.dimension()) {
    throw std::invalid_argument("Differentiate: variable out of range");
  }
  Polynomial out(p.dimension());
  for (const auto& [m, c] : p.terms()) {
    const int e = m[variable];
    if (e == 0) continue;
    std::vector<int> ex = m.exponents();
    ex[variable] -= 1;
    out.AddTerm(Monomial(std::move(ex)), c * e);
  }
  return out;
}

std::vector<Polynomial> Gradient(const Polynomial& p) {
  std::vector<Polynomial> g;
  for (int i = 0; i < p.dimension(); ++i) g.push_back(Differentiate(p, i));
  return g;
}

std::vector<std::vector<Polynomial>> Hessian(const Polynomial& p) {
  const int n = p.dimension();
  const auto g = Gradient(p);
  std::vector<std::vector<Polynomial>> h(n, std::vector<Polynomial>(n, Polynomial(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      h[i][j] = Differentiate(g[i], j);
      h[j][i] = h[i][j];
    }
  }
  return h;
}

Polynomial RadialDerivative(const Polynomial& p) {
  // Each monomial is homogeneous, so x·∇x^α = |α| x^α.
  Polynomial out(p.dimension());
  for (const auto& [m, c] : p.terms()) out.AddTerm(m, c * m.degree());
  return out;
}

double IntegrateMonomial(const Monomial& m, const Box& box) {
  if (m.dimension() != box.dimension()) {
    throw std::invalid_argument("IntegrateMonomial: dimension mismatch");
  }
  double v = 1.0;
  for (int i = 0; i < m.dimension(); ++i) {
    const int k = m[i] + 1;
    v *= (std::pow(box.upper()[i], k) - std::pow(box.lower()[i], k)) / k;
  }
  return v;
}

double IntegrateBox(const Polynomial& p, const Box& box) {
  if (p.dimension() != box.dimension()) {
    throw std::invalid_argument("IntegrateBox: dimension mismatch");
  }
  double total = 0.0;
  for (const auto& [m, c] : p.terms()) total += c * IntegrateMonomial(m, box);
  return total;
}

Polynomial Embed(const Polynomial& p, int new_dimension) {
  if (new_dimension < p.dimension()) throw std::invalid_argument("Embed: shrinking");
  Polynomial out(new_dimension);
  for (const auto& [m, c] : p.terms()) {
    std::vector<int> e = m.exponents();
    e.resize(new_dimension, 0);
    out.AddTerm(Monomial(std::move(e)), c);
  }
  return out;
}

Polynomial LeadingForm(const Polynomial& p) {
  Polynomial out(p.dimension());
  const int d = p.degree();
  for (const auto& [m, c] : p.terms()) {
    if (m.degree() == d) out.AddTerm(m, c);
  }
  return out;
}

PolynomialEvaluator::PolynomialEvaluator(const Polynomial& p)
    : dimension_(p.dimension()), max_power_(0) {
  coefficients_.reserve(p.num_terms());
  exponents_.reserve(p.num_terms() * dimension_);
  for (const auto& [m, c] : p.terms()) {
    coefficients_.push_back(c);
    for (int i = 0; i < dimension_; ++i) {
      exponents_.push_back(m[i]);
      max_power_ = std::max(max_power_, m[i]);
    }
  }
}

double PolynomialEvaluator::operator()(const double* x) const {
  const int stride = max_power_ + 1;
  constexpr int kStackSize = 256;
  double stack[kStackSize];
  std::vector<double> heap;
  double* powers = stack;
  if (dimension_ * stride > kStackSize) {
    heap.resize(dimension_ * stride);
    powers = heap.data();
  }
  for (int i = 0; i < dimension_; ++i) {
    double* row = powers + i * stride;
    row[0] = 1.0;
    for (int k = 1; k < stride; ++k) row[k] = row[k - 1] * x[i];
  }
  double sum = 0.0;
  const int* e = exponents_.data();
  for (std::size_t t = 0; t < coefficients_.size(); ++t, e += dimension_) {
    double v = coefficients_[t];
    for (int i = 0; i < dimension_; ++i) v *= powers[i * stride + e[i]];
    sum += v;
  }
  return sum;
}

}  // namespace sospack
