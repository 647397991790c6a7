#include "sospack/sos.h"

#include <algorithm>
#include <limits>
#include <cmath>
#include <stdexcept>

namespace sospack {

namespace {

double MaxAbs(const Polynomial& p) { return p.MaxAbsCoefficient(); }

}  // namespace

PolyExpression::PolyExpression(Polynomial constant) : constant_(std::move(constant)) {}

PolyExpression::PolyExpression(int dimension, double constant)
    : constant_(dimension, constant) {}

PolyExpression& PolyExpression::operator+=(const PolyExpression& other) {
  if (other.dimension() != dimension()) {
    throw std::invalid_argument("PolyExpression: dimension mismatch");
  }
  constant_ += other.constant_;
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

PolyExpression& PolyExpression::operator-=(const PolyExpression& other) {
  return *this += (-1.0) * other;
}

PolyExpression& PolyExpression::operator*=(double k) {
  constant_ *= k;
  for (auto& t : terms_) {
    t.map = [k, inner = std::move(t.map)](const Polynomial& p) { return k * inner(p); };
  }
  return *this;
}

PolyExpression& PolyExpression::operator*=(const Polynomial& known) {
  if (known.dimension() != dimension()) {
    throw std::invalid_argument("PolyExpression: dimension mismatch");
  }
  constant_ = known * constant_;
  for (auto& t : terms_) {
    t.map = [known, inner = std::move(t.map)](const Polynomial& p) { return known * inner(p); };
  }
  return *this;
}

PolyExpression operator*(const PolyExpression& a, const PolyExpression& b) {
  if (a.HasUnknowns() && b.HasUnknowns()) {
    throw std::invalid_argument(
        "PolyExpression: product of two expressions with unknowns is not linear");
  }
  if (!a.HasUnknowns()) return a.constant() * b;
  return b.constant() * a;
}

PolyExpression PolyExpression::Transformed(const PolynomialMap& map, int new_dimension) const {
  PolyExpression out(map(constant_));
  if (out.dimension() != new_dimension) {
    throw std::invalid_argument("PolyExpression::Transformed: unexpected output dimension");
  }
  for (const auto& t : terms_) {
    out.terms_.push_back(
        {t.unknown, t.source_dimension,
         [map, inner = t.map](const Polynomial& p) { return map(inner(p)); }});
  }
  return out;
}

LinearExpression& LinearExpression::operator+=(const LinearExpression& other) {
  terms.insert(terms.end(), other.terms.begin(), other.terms.end());
  constant += other.constant;
  return *this;
}

LinearExpression& LinearExpression::operator*=(double k) {
  for (auto& t : terms) t.coefficient *= k;
  constant *= k;
  return *this;
}

int MultiplierDegree(int d, int known_degree) {
  const int slack = d - known_degree;
  if (slack < 0) return -1;
  return 2 * (slack / 2);
}

int SlackDegree(int d) { return 2 * (std::max(d, 0) / 2); }

std::map<Monomial, LinearFunctional, GradedLexLess> GramExpand(int n, int degree) {
  if (degree < 0 || degree % 2 != 0) {
    throw std::invalid_argument("GramExpand: degree must be even and non-negative");
  }
  const auto z = MonomialBasis(n, degree / 2);
  std::map<Monomial, LinearFunctional, GradedLexLess> out;
  for (int j = 0; j < static_cast<int>(z.size()); ++j) {
    for (int k = j; k < static_cast<int>(z.size()); ++k) {
      out[z[j] * z[k]].AddBlockTerm(0, j, k, 1.0);
    }
  }
  return out;
}

UnknownRef SosProgram::NewSos(const std::string& name, int dimension, int degree) {
  if (degree < 0 || degree % 2 != 0) {
    throw std::invalid_argument("NewSos: SOS degree must be even and non-negative");
  }
  return NewSosWithBasis(name, MonomialBasis(dimension, degree / 2));
}

UnknownRef SosProgram::NewSosWithBasis(const std::string& name, std::vector<Monomial> basis) {
  if (basis.empty()) throw std::invalid_argument("NewSosWithBasis: empty basis");
  const int dim = basis.front().dimension();
  sos_.push_back({name, dim, std::move(basis)});
  return {UnknownKind::kSos, static_cast<int>(sos_.size()) - 1};
}

UnknownRef SosProgram::NewFreePolynomial(const std::string& name, int dimension, int degree) {
  free_.push_back({name, dimension, MonomialBasis(dimension, degree)});
  return {UnknownKind::kFreePolynomial, static_cast<int>(free_.size()) - 1};
}

UnknownRef SosProgram::NewScalar(const std::string& name) {
  scalars_.push_back(name);
  return {UnknownKind::kScalar, static_cast<int>(scalars_.size()) - 1};
}

void SosProgram::CheckRef(UnknownRef u) const {
  const int size = u.kind == UnknownKind::kSos              ? static_cast<int>(sos_.size())
                   : u.kind == UnknownKind::kFreePolynomial ? static_cast<int>(free_.size())
                                                            : static_cast<int>(scalars_.size());
  if (u.index < 0 || u.index >= size) throw std::invalid_argument("unknown handle out of range");
}

PolyExpression SosProgram::Expr(UnknownRef u, int dimension) const {
  CheckRef(u);
  int dim = dimension;
  if (u.kind == UnknownKind::kSos) dim = sos_[u.index].dimension;
  if (u.kind == UnknownKind::kFreePolynomial) dim = free_[u.index].dimension;
  if (dim < 1) throw std::invalid_argument("Expr: scalar unknowns need a dimension");
  PolyExpression e(dim, 0.0);
  e.terms_.push_back({u, dim, [](const Polynomial& p) { return p; }});
  return e;
}

const std::vector<Monomial>& SosProgram::Basis(UnknownRef u) const {
  CheckRef(u);
  if (u.kind == UnknownKind::kSos) return sos_[u.index].basis;
  if (u.kind == UnknownKind::kFreePolynomial) return free_[u.index].basis;
  throw std::invalid_argument("Basis: scalars have no basis");
}

const std::string& SosProgram::Name(UnknownRef u) const {
  CheckRef(u);
  if (u.kind == UnknownKind::kSos) return sos_[u.index].name;
  if (u.kind == UnknownKind::kFreePolynomial) return free_[u.index].name;
  return scalars_[u.index];
}

int SosProgram::FreeScalarIndex(UnknownRef u, int element) const {
  if (u.kind == UnknownKind::kFreePolynomial) {
    int offset = 0;
    for (int i = 0; i < u.index; ++i) offset += static_cast<int>(free_[i].basis.size());
    return offset + element;
  }
  if (u.kind == UnknownKind::kScalar) {
    int offset = 0;
    for (const auto& f : free_) offset += static_cast<int>(f.basis.size());
    return offset + u.index;
  }
  throw std::invalid_argument("FreeScalarIndex: SOS unknowns are blocks");
}

std::vector<SosProgram::Element> SosProgram::Elements(UnknownRef u, int source_dimension) const {
  CheckRef(u);
  std::vector<Element> out;
  switch (u.kind) {
    case UnknownKind::kSos: {
      const auto& z = sos_[u.index].basis;
      for (int j = 0; j < static_cast<int>(z.size()); ++j) {
        for (int k = j; k < static_cast<int>(z.size()); ++k) {
          out.push_back({Polynomial(z[j] * z[k]), u.index, j, k, -1});
        }
      }
      break;
    }
    case UnknownKind::kFreePolynomial: {
      const auto& basis = free_[u.index].basis;
      for (int k = 0; k < static_cast<int>(basis.size()); ++k) {
        out.push_back({Polynomial(basis[k]), -1, 0, 0, FreeScalarIndex(u, k)});
      }
      break;
    }
    case UnknownKind::kScalar:
      out.push_back({Polynomial(source_dimension, 1.0), -1, 0, 0, FreeScalarIndex(u, 0)});
      break;
  }
  return out;
}

void SosProgram::AddIdentity(const PolyExpression& lhs, const PolyExpression& rhs,
                             const std::string& label) {
  if (lhs.dimension() != rhs.dimension()) {
    throw std::invalid_argument("AddIdentity: dimension mismatch");
  }
  for (const auto* e : {&lhs, &rhs}) {
    for (const auto& t : e->terms()) CheckRef(t.unknown);
  }
  identities_.push_back({lhs - rhs, label});
}

int SosProgram::ExpressionDegree(const PolyExpression& e) const {
  int deg = e.constant().is_zero() ? 0 : e.constant().degree();
  for (const auto& t : e.terms()) {
    for (const auto& el : Elements(t.unknown, t.source_dimension)) {
      const Polynomial img = t.map(el.value);
      if (!img.is_zero()) deg = std::max(deg, img.degree());
    }
  }
  return deg;
}

bool SosProgram::ExpressionsEqual(const PolyExpression& a, const PolyExpression& b) const {
  const PolyExpression diff = a - b;
  const double scale = std::max({1.0, MaxAbs(a.constant()), MaxAbs(b.constant())});
  if (MaxAbs(diff.constant()) > 1e-12 * scale) return false;
  std::vector<std::pair<UnknownRef, int>> seen;
  for (const auto& t : diff.terms()) {
    const std::pair<UnknownRef, int> key{t.unknown, t.source_dimension};
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(key);
    for (const auto& el : Elements(t.unknown, t.source_dimension)) {
      Polynomial sum(diff.dimension());
      double mag = 1.0;
      for (const auto& s : diff.terms()) {
        if (s.unknown == t.unknown && s.source_dimension == t.source_dimension) {
          const Polynomial img = s.map(el.value);
          mag = std::max(mag, MaxAbs(img));
          sum += img;
        }
      }
      if (MaxAbs(sum) > 1e-12 * mag) return false;
    }
  }
  return true;
}

UnknownRef SosProgram::AddSosMatrixConstraint(
    const std::string& name, const std::vector<std::vector<PolyExpression>>& h) {
  const int n = static_cast<int>(h.size());
  if (n == 0) throw std::invalid_argument("AddSosMatrixConstraint: empty matrix");
  for (const auto& row : h) {
    if (static_cast<int>(row.size()) != n) {
      throw std::invalid_argument("AddSosMatrixConstraint: matrix is not square");
    }
    for (const auto& e : row) {
      if (e.dimension() != n) {
        throw std::invalid_argument("AddSosMatrixConstraint: entry dimension must equal n");
      }
    }
  }
  int deg = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j > i && !ExpressionsEqual(h[i][j], h[j][i])) {
        throw std::invalid_argument("AddSosMatrixConstraint: matrix is not symmetric");
      }
      deg = std::max(deg, ExpressionDegree(h[i][j]));
    }
  }
  const int lifted = 2 * n;
  // w(x, y) = Σ_ij y_i y_j H_ij(x)
  PolyExpression w(lifted, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Polynomial yy(Monomial::Variable(lifted, n + i) * Monomial::Variable(lifted, n + j));
      w += h[i][j].Transformed(
          [lifted, yy](const Polynomial& p) { return yy * Embed(p, lifted); }, lifted);
    }
  }
  // Basis y_i x^β with |β| ≤ ⌈deg/2⌉.
  std::vector<Monomial> basis;
  for (const auto& beta : MonomialBasis(n, (deg + 1) / 2)) {
    for (int i = 0; i < n; ++i) {
      std::vector<int> e = beta.exponents();
      e.resize(lifted, 0);
      e[n + i] = 1;
      basis.emplace_back(std::move(e));
    }
  }
  std::sort(basis.begin(), basis.end(), GradedLexLess());
  const UnknownRef sigma = NewSosWithBasis(name, std::move(basis));
  AddIdentity(w, Expr(sigma), name);
  return sigma;
}

void SosProgram::AddLinearEquality(const LinearExpression& lhs, double rhs) {
  equalities_.emplace_back(lhs, rhs);
}

void SosProgram::AddLinearInequality(const LinearExpression& lhs, double rhs) {
  inequalities_.emplace_back(lhs, rhs);
}

LinearExpression SosProgram::CoefficientFunctional(
    UnknownRef u, const std::function<double(const Monomial&)>& weight) const {
  if (u.kind != UnknownKind::kFreePolynomial) {
    throw std::invalid_argument("CoefficientFunctional: needs a free polynomial");
  }
  CheckRef(u);
  LinearExpression out;
  const auto& basis = free_[u.index].basis;
  for (int k = 0; k < static_cast<int>(basis.size()); ++k) {
    const double w = weight(basis[k]);
    if (w != 0.0) out.terms.push_back({u, k, w});
  }
  return out;
}

LinearExpression SosProgram::EvaluationAt(UnknownRef u,
                                          const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return CoefficientFunctional(u, [&x](const Monomial& m) { return m.Evaluate(x); });
}

LinearExpression SosProgram::ScalarTerm(UnknownRef u, double coefficient) const {
  if (u.kind != UnknownKind::kScalar) throw std::invalid_argument("ScalarTerm: not a scalar");
  CheckRef(u);
  LinearExpression out;
  out.terms.push_back({u, 0, coefficient});
  return out;
}

namespace {

struct RowBuilder {
  LinearFunctional lhs;
  double constant = 0.0;
};

}  // namespace

SdpProblem SosProgram::Compile() const {
  SdpProblem problem;
  for (const auto& s : sos_) problem.AddPsdBlock(static_cast<int>(s.basis.size()));
  int num_scalars = static_cast<int>(scalars_.size());
  for (const auto& f : free_) num_scalars += static_cast<int>(f.basis.size());
  problem.free_scalars = num_scalars;

  auto add_linear = [&](const LinearExpression& e, LinearFunctional& out) {
    for (const auto& t : e.terms) {
      if (t.unknown.kind == UnknownKind::kSos) {
        throw std::invalid_argument("linear constraints cannot involve SOS unknowns");
      }
      out.AddScalarTerm(FreeScalarIndex(t.unknown, t.element), t.coefficient);
    }
  };

  for (const auto& identity : identities_) {
    const PolyExpression& e = identity.difference;
    std::map<Monomial, RowBuilder, GradedLexLess> rows;
    for (const auto& [m, c] : e.constant().terms()) rows[m].constant += c;
    for (const auto& t : e.terms()) {
      for (const auto& el : Elements(t.unknown, t.source_dimension)) {
        const Polynomial img = t.map(el.value);
        if (img.dimension() != e.dimension()) {
          throw std::invalid_argument("identity term maps to the wrong dimension");
        }
        for (const auto& [m, c] : img.terms()) {
          auto& row = rows[m];
          if (el.block >= 0) {
            row.lhs.AddBlockTerm(el.block, el.row, el.col, c);
          } else {
            row.lhs.AddScalarTerm(el.scalar, c);
          }
        }
      }
    }
    for (auto& [m, row] : rows) {
      // Σ(unknown parts) + constant = 0
      problem.equalities.push_back({std::move(row.lhs), -row.constant});
    }
  }
  for (const auto& [lhs, rhs] : equalities_) {
    LinearEquality eq;
    add_linear(lhs, eq.lhs);
    eq.rhs = rhs - lhs.constant;
    problem.equalities.push_back(std::move(eq));
  }
  for (const auto& [lhs, rhs] : inequalities_) {
    const int slack = problem.AddPsdBlock(1);
    LinearEquality eq;
    add_linear(lhs, eq.lhs);
    eq.lhs.AddBlockTerm(slack, 0, 0, 1.0);
    eq.rhs = rhs - lhs.constant;
    problem.equalities.push_back(std::move(eq));
  }
  add_linear(objective_, problem.objective);
  return problem;
}

Polynomial SosProgram::PolynomialValue(UnknownRef u, const SdpSolution& solution) const {
  CheckRef(u);
  if (u.kind == UnknownKind::kSos) {
    const auto& z = sos_[u.index].basis;
    const Eigen::MatrixXd q = GramValue(u, solution);
    Polynomial p(sos_[u.index].dimension);
    for (int j = 0; j < static_cast<int>(z.size()); ++j) {
      for (int k = 0; k < static_cast<int>(z.size()); ++k) p.AddTerm(z[j] * z[k], q(j, k));
    }
    return p;
  }
  if (u.kind == UnknownKind::kFreePolynomial) {
    const auto& basis = free_[u.index].basis;
    Polynomial p(free_[u.index].dimension);
    for (int k = 0; k < static_cast<int>(basis.size()); ++k) {
      p.AddTerm(basis[k], solution.scalar_values[FreeScalarIndex(u, k)]);
    }
    return p;
  }
  throw std::invalid_argument("PolynomialValue: scalar unknown");
}

double SosProgram::ScalarValue(UnknownRef u, const SdpSolution& solution) const {
  CheckRef(u);
  if (u.kind != UnknownKind::kScalar) throw std::invalid_argument("ScalarValue: not a scalar");
  return solution.scalar_values[FreeScalarIndex(u, 0)];
}

Eigen::MatrixXd SosProgram::GramValue(UnknownRef u, const SdpSolution& solution) const {
  CheckRef(u);
  if (u.kind != UnknownKind::kSos) throw std::invalid_argument("GramValue: not an SOS unknown");
  const auto& q = solution.block_values.at(u.index);
  return 0.5 * (q + q.transpose());
}

Certificate SosProgram::Verify(const SdpSolution& solution, const VerificationTolerances& tol,
                               std::optional<UnknownRef> gamma) const {
  int expected_blocks = static_cast<int>(sos_.size() + inequalities_.size());
  int expected_scalars = static_cast<int>(scalars_.size());
  for (const auto& f : free_) expected_scalars += static_cast<int>(f.basis.size());
  if (static_cast<int>(solution.block_values.size()) != expected_blocks ||
      solution.scalar_values.size() != expected_scalars) {
    throw std::invalid_argument("Verify: solution shape does not match the program");
  }
  for (int k = 0; k < static_cast<int>(sos_.size()); ++k) {
    const int n = static_cast<int>(sos_[k].basis.size());
    if (solution.block_values[k].rows() != n || solution.block_values[k].cols() != n) {
      throw std::invalid_argument("Verify: Gram block shape mismatch");
    }
  }

  Certificate cert;
  cert.solver_status = solution.status;
  if (!solution.scalar_values.allFinite()) {
    cert.verified = false;
    return cert;
  }

  // Reconstructed unknown values.
  std::vector<Polynomial> sos_values;
  cert.min_gram_eig = std::numeric_limits<double>::infinity();
  for (int k = 0; k < static_cast<int>(sos_.size()); ++k) {
    const UnknownRef u{UnknownKind::kSos, k};
    const Eigen::MatrixXd q = GramValue(u, solution);
    if (!q.allFinite()) return cert;
    cert.min_gram_eig = std::min(cert.min_gram_eig, MinEigenvalue(q));
    cert.gram_matrices.emplace(sos_[k].name, q);
    sos_values.push_back(PolynomialValue(u, solution));
    cert.multipliers.emplace(sos_[k].name, sos_values.back());
  }
  std::vector<Polynomial> free_values;
  for (int k = 0; k < static_cast<int>(free_.size()); ++k) {
    free_values.push_back(PolynomialValue({UnknownKind::kFreePolynomial, k}, solution));
    cert.multipliers.emplace(free_[k].name, free_values.back());
  }

  cert.identity_residual = 0.0;
  for (const auto& identity : identities_) {
    Polynomial residual = identity.difference.constant();
    for (const auto& t : identity.difference.terms()) {
      switch (t.unknown.kind) {
        case UnknownKind::kSos: residual += t.map(sos_values[t.unknown.index]); break;
        case UnknownKind::kFreePolynomial:
          residual += t.map(free_values[t.unknown.index]);
          break;
        case UnknownKind::kScalar:
          residual += t.map(Polynomial(t.source_dimension, ScalarValue(t.unknown, solution)));
          break;
      }
    }
    cert.identity_residual = std::max(cert.identity_residual, residual.MaxAbsCoefficient());
  }

  bool gamma_ok = true;
  if (gamma) {
    cert.gamma = ScalarValue(*gamma, solution);
    gamma_ok = cert.gamma - tol.margin_safety > 0.0;
  }
  if (sos_.empty()) cert.min_gram_eig = 0.0;
  cert.verified = cert.identity_residual <= tol.tol_res && cert.min_gram_eig >= -tol.tol_psd &&
                  gamma_ok;
  return cert;
}

}  // namespace sospack
