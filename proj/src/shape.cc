#include "sospack/shape.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace sospack {

namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double ParseNumber(const std::string& token, int line) {
  const std::string t = Trim(token);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size()) {
    throw std::invalid_argument("line " + std::to_string(line) + ": cannot parse number '" + t +
                                "'");
  }
  if (!std::isfinite(v)) {
    throw std::invalid_argument("line " + std::to_string(line) + ": non-finite value");
  }
  return v;
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void PointCloud::Validate() const {
  if (points.empty()) throw std::invalid_argument("point cloud is empty");
  if (dimension < 1) throw std::invalid_argument("point cloud dimension must be positive");
  for (const auto& p : points) {
    if (p.size() != dimension) throw std::invalid_argument("point cloud has mixed dimensions");
    if (!p.allFinite()) throw std::invalid_argument("point cloud has non-finite coordinates");
  }
}

CloudFormat CloudFormatFromPath(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos) {
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == "xyz") return CloudFormat::kXyz;
  }
  return CloudFormat::kCsv;
}

PointCloud ParsePointCloud(const std::string& text, CloudFormat format) {
  PointCloud cloud;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = Trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<double> values;
    if (format == CloudFormat::kCsv) {
      std::stringstream fields(t);
      std::string field;
      while (std::getline(fields, field, ',')) values.push_back(ParseNumber(field, line_no));
      if (!t.empty() && t.back() == ',') ParseNumber("", line_no);
    } else {
      std::istringstream fields(t);
      std::string field;
      while (fields >> field) values.push_back(ParseNumber(field, line_no));
    }
    if (cloud.dimension == 0) {
      cloud.dimension = static_cast<int>(values.size());
    } else if (static_cast<int>(values.size()) != cloud.dimension) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(cloud.dimension) + " columns, found " +
                                  std::to_string(values.size()));
    }
    cloud.points.push_back(Eigen::Map<Eigen::VectorXd>(values.data(), values.size()));
  }
  cloud.Validate();
  return cloud;
}

PointCloud LoadPointCloud(const std::string& path, CloudFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return ParsePointCloud(buf.str(), format);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

PointCloud LoadPointCloud(const std::string& path) {
  return LoadPointCloud(path, CloudFormatFromPath(path));
}

std::string PointsToCsv(const std::vector<Eigen::VectorXd>& points) {
  std::string out;
  for (const auto& p : points) {
    for (int i = 0; i < p.size(); ++i) {
      if (i) out += ',';
      out += FormatDouble(p(i));
    }
    out += '\n';
  }
  return out;
}

NormalizedCloud NormalizeCloud(const PointCloud& cloud, const Box& target) {
  cloud.Validate();
  const int n = cloud.dimension;
  if (target.dimension() != n) throw std::invalid_argument("NormalizeCloud: box dimension");
  Eigen::VectorXd lo = cloud.points.front(), hi = cloud.points.front();
  for (const auto& p : cloud.points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Eigen::VectorXd center = 0.5 * (lo + hi);
  const Eigen::VectorXd half = 0.5 * (hi - lo);
  const Eigen::VectorXd box_mid = 0.5 * (target.lower() + target.upper());
  const Eigen::VectorXd box_half = 0.5 * (target.upper() - target.lower());
  const double widest = half.maxCoeff();
  Eigen::VectorXd scale(n);
  for (int i = 0; i < n; ++i) {
    const double extent = half(i) > 0.0 ? half(i) : widest;
    scale(i) = extent > 0.0 ? 0.95 * box_half(i) / extent : 1.0;
  }
  // y = diag(scale) (x - center) + box_mid = diag(scale) (x - v)
  const Eigen::VectorXd v = center - box_mid.cwiseQuotient(scale);
  AffineTransform frame(scale.asDiagonal().toDenseMatrix(), v);
  NormalizedCloud out{{n, {}}, frame};
  out.cloud.points.reserve(cloud.points.size());
  for (const auto& p : cloud.points) out.cloud.points.push_back(frame.ToLocal(p));
  return out;
}

Prior Prior::Parse(const std::string& text, int dimension) {
  if (text == "star") return Star();
  if (text == "convex") return Convex();
  const std::string prefix = "symmetry:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string spec = text.substr(prefix.size());
    if (spec == "neg-identity") {
      return Symmetry(-Eigen::MatrixXd::Identity(dimension, dimension));
    }
    std::vector<std::vector<double>> rows;
    std::stringstream rs(spec);
    std::string row;
    while (std::getline(rs, row, ';')) {
      std::vector<double> r;
      std::stringstream cs(row);
      std::string cell;
      while (std::getline(cs, cell, ',')) r.push_back(ParseNumber(cell, 1));
      rows.push_back(r);
    }
    if (static_cast<int>(rows.size()) != dimension) {
      throw std::invalid_argument("symmetry matrix must have " + std::to_string(dimension) +
                                  " rows");
    }
    Eigen::MatrixXd a(dimension, dimension);
    for (int i = 0; i < dimension; ++i) {
      if (static_cast<int>(rows[i].size()) != dimension) {
        throw std::invalid_argument("symmetry matrix must be square");
      }
      for (int j = 0; j < dimension; ++j) a(i, j) = rows[i][j];
    }
    return Symmetry(a);
  }
  throw std::invalid_argument("unknown prior '" + text + "'");
}

std::string Prior::ToString() const {
  switch (kind) {
    case Kind::kStar: return "star";
    case Kind::kConvex: return "convex";
    case Kind::kSymmetry: {
      if (matrix == -Eigen::MatrixXd::Identity(matrix.rows(), matrix.cols())) {
        return "symmetry:neg-identity";
      }
      std::string s = "symmetry:";
      for (int i = 0; i < matrix.rows(); ++i) {
        if (i) s += ';';
        for (int j = 0; j < matrix.cols(); ++j) {
          if (j) s += ',';
          s += FormatDouble(matrix(i, j));
        }
      }
      return s;
    }
  }
  return "";
}

double LearnConfig::ResolvedRadius() const {
  if (radius) return *radius;
  double r2 = 0.0;
  for (int i = 0; i < box.dimension(); ++i) {
    r2 += std::max(box.lower()(i) * box.lower()(i), box.upper()(i) * box.upper()(i));
  }
  return 1.05 * std::sqrt(r2);
}

int LearnConfig::ResolvedMultiplierDegree() const {
  if (bound_multiplier_degree) return *bound_multiplier_degree;
  return 2 * ((degree - 2) / 2);
}

void LearnConfig::Validate() const {
  if (degree < 2 || degree % 2 != 0) {
    throw std::invalid_argument("degree must be an even positive integer");
  }
  if (!(margin > 0.0)) throw std::invalid_argument("margin must be positive");
  const double r = ResolvedRadius();
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  double r2 = 0.0;
  for (int i = 0; i < box.dimension(); ++i) {
    r2 += std::max(box.lower()(i) * box.lower()(i), box.upper()(i) * box.upper()(i));
  }
  if (r2 > r * r * (1.0 + 1e-12)) {
    throw std::invalid_argument("radius does not enclose the box");
  }
  const int m = ResolvedMultiplierDegree();
  if (m < 0 || m % 2 != 0) throw std::invalid_argument("multiplier degree must be even");
  for (const auto& p : priors) {
    if (p.kind == Prior::Kind::kSymmetry &&
        (p.matrix.rows() != box.dimension() || p.matrix.cols() != box.dimension())) {
      throw std::invalid_argument("symmetry matrix dimension mismatch");
    }
  }
}

namespace {

// Orthonormal basis of the coefficient vectors fixed by every symmetry prior.
Eigen::MatrixXd InvariantSubspace(const std::vector<Monomial>& basis,
                                  const std::vector<Prior>& priors) {
  const int m = static_cast<int>(basis.size());
  std::vector<Eigen::MatrixXd> blocks;
  for (const auto& prior : priors) {
    if (prior.kind != Prior::Kind::kSymmetry) continue;
    Eigen::MatrixXd d = -Eigen::MatrixXd::Identity(m, m);
    for (int k = 0; k < m; ++k) {
      const Polynomial image = ComposeLinear(Polynomial(basis[k]), prior.matrix);
      for (int r = 0; r < m; ++r) d(r, k) += image.coefficient(basis[r]);
    }
    blocks.push_back(d);
  }
  if (blocks.empty()) return Eigen::MatrixXd::Identity(m, m);
  Eigen::MatrixXd stacked(m * static_cast<int>(blocks.size()), m);
  for (std::size_t i = 0; i < blocks.size(); ++i) stacked.middleRows(i * m, m) = blocks[i];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(stacked);
  lu.setThreshold(1e-10);
  const Eigen::MatrixXd kernel = lu.kernel();
  if (lu.rank() == m) return Eigen::MatrixXd::Zero(m, 0);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(kernel);
  return qr.householderQ() * Eigen::MatrixXd::Identity(m, kernel.cols());
}

double InscribedRadius(const Box& box) {
  double r = std::numeric_limits<double>::infinity();
  for (int i = 0; i < box.dimension(); ++i) {
    r = std::min(r, std::min(-box.lower()(i), box.upper()(i)));
  }
  return std::max(r, 0.0);
}

}  // namespace

LearnResult LearnShape(const PointCloud& cloud, const LearnConfig& config) {
  cloud.Validate();
  config.Validate();
  const int n = cloud.dimension;
  if (config.box.dimension() != n) throw std::invalid_argument("box dimension mismatch");
  for (const auto& p : cloud.points) {
    if (!config.box.ContainsStrictly(p)) {
      throw std::invalid_argument("point cloud is not strictly inside the box");
    }
  }
  const int d = config.degree;
  const double radius = config.ResolvedRadius();
  const Polynomial ball = Polynomial(n, radius * radius) - Polynomial::SquaredNorm(n);

  SosProgram prog;
  const UnknownRef j = prog.NewFreePolynomial("J", n, d);
  const double vol = config.box.Volume();
  prog.SetObjective(prog.CoefficientFunctional(
      j, [&](const Monomial& m) { return IntegrateMonomial(m, config.box) / vol; }));

  // Solved with a slightly larger margin so that J(x_i) ≤ -ε holds exactly
  // after solver round-off.
  const double solve_margin = config.margin * 1.01 + 1e-9;
  for (const auto& p : cloud.points) {
    prog.AddLinearInequality(prog.EvaluationAt(j, p), -solve_margin);
  }

  const UnknownRef s0 = prog.NewSos("s0", n, config.ResolvedMultiplierDegree());
  const UnknownRef sigma = prog.NewSos("sigma", n, SlackDegree(d));
  prog.AddIdentity(PolyExpression(n, 1.0) - prog.Expr(j) - ball * prog.Expr(s0), prog.Expr(sigma),
                   "bounded");

  bool has_symmetry = false;
  for (std::size_t k = 0; k < config.priors.size(); ++k) {
    const Prior& prior = config.priors[k];
    const std::string tag = std::to_string(k);
    switch (prior.kind) {
      case Prior::Kind::kSymmetry: {
        has_symmetry = true;
        const Eigen::MatrixXd a = prior.matrix;
        prog.AddIdentity(prog.Expr(j).Transformed(
                             [a](const Polynomial& p) { return ComposeLinear(p, a); }, n),
                         prog.Expr(j), "symmetry" + tag);
        break;
      }
      case Prior::Kind::kStar: {
        const UnknownRef s = prog.NewSos("star_mult" + tag, n, 2 * ((d - 2) / 2));
        const UnknownRef t = prog.NewSos("star_sos" + tag, n, SlackDegree(d));
        prog.AddIdentity(prog.Expr(j).Transformed(RadialDerivative, n) - ball * prog.Expr(s),
                         prog.Expr(t), "star" + tag);
        break;
      }
      case Prior::Kind::kConvex: {
        std::vector<std::vector<PolyExpression>> h(n);
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) {
            h[a].push_back(prog.Expr(j).Transformed(
                [a, b](const Polynomial& p) { return Differentiate(Differentiate(p, a), b); }, n));
          }
        }
        prog.AddSosMatrixConstraint("hessian" + tag, h);
        break;
      }
    }
  }

  LearnResult result;
  result.model.config = config;
  result.model.domain_radius = radius;
  {
    double reach = 0.0;
    for (const auto& p : cloud.points) reach = std::max(reach, p.norm());
    result.model.domain_radius = std::min(radius, std::max(InscribedRadius(config.box), reach));
  }

  SdpSolution sol = Solve(prog.Compile(), config.solver);
  result.solver_status = sol.status;
  if (sol.status == SolverStatus::kInfeasible || sol.status == SolverStatus::kUnbounded) {
    result.status = LearnStatus::kInfeasible;
    result.message = "solver reported " + std::string(to_string(sol.status));
    return result;
  }
  if (sol.scalar_values.size() > 0 && has_symmetry) {
    // Project J onto the invariant subspace so the symmetry holds exactly.
    const auto& basis = prog.Basis(j);
    const Eigen::MatrixXd q = InvariantSubspace(basis, config.priors);
    Eigen::VectorXd c = sol.scalar_values.head(basis.size());
    sol.scalar_values.head(basis.size()) = q * (q.transpose() * c);
  }
  result.model.certificate = prog.Verify(sol, config.tolerances);
  result.model.polynomial = prog.PolynomialValue(j, sol);
  result.model.objective = IntegrateBox(result.model.polynomial, config.box) / vol;

  double max_value = -std::numeric_limits<double>::infinity();
  for (const auto& p : cloud.points) {
    max_value = std::max(max_value, result.model.polynomial.Evaluate(p));
  }
  result.model.max_point_value = max_value;

  if (!result.model.certificate.verified) {
    result.status = LearnStatus::kRejected;
    std::ostringstream msg;
    msg << "certificate not verified (identity residual "
        << result.model.certificate.identity_residual << ", min Gram eigenvalue "
        << result.model.certificate.min_gram_eig << ", solver "
        << to_string(sol.status) << ")";
    result.message = msg.str();
    return result;
  }
  if (!(max_value <= -config.margin)) {
    result.status = LearnStatus::kRejected;
    result.message = "training point margin violated: max J(x_i) = " + FormatDouble(max_value);
    return result;
  }
  result.status = LearnStatus::kOk;
  return result;
}

namespace {

// Bisects J along a segment where the sign changes; returns the point if the
// final value is within tolerance.
std::optional<Eigen::VectorXd> Bisect(const PolynomialEvaluator& eval, Eigen::VectorXd a,
                                      Eigen::VectorXd b, double fa, double tol) {
  for (int it = 0; it < 200; ++it) {
    const Eigen::VectorXd mid = 0.5 * (a + b);
    if ((mid - a).norm() == 0.0 || (mid - b).norm() == 0.0) break;
    const double fm = eval(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (fa < 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  const double fb = eval(b);
  const Eigen::VectorXd best = std::abs(fa) <= std::abs(fb) ? a : b;
  if (std::abs(eval(best)) <= tol) return best;
  return std::nullopt;
}

void RayCrossings(const PolynomialEvaluator& eval, const Eigen::VectorXd& dir, double r,
                  double tol, std::vector<Eigen::VectorXd>& out) {
  constexpr int kSteps = 512;
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(dir.size());
  double fprev = eval(prev);
  for (int s = 1; s <= kSteps; ++s) {
    const Eigen::VectorXd cur = (r * s / kSteps) * dir;
    const double fcur = eval(cur);
    if (fprev == 0.0 && s == 1) out.push_back(prev);
    if ((fprev < 0) != (fcur < 0) && fcur != 0.0) {
      if (auto p = Bisect(eval, prev, cur, fprev, tol)) out.push_back(*p);
    } else if (fcur == 0.0) {
      out.push_back(cur);
    }
    prev = cur;
    fprev = fcur;
  }
}

}  // namespace

std::vector<Eigen::VectorXd> SampleBoundary(const Polynomial& j, double domain_radius,
                                            int resolution, double tolerance) {
  if (resolution < 1) throw std::invalid_argument("resolution must be positive");
  if (!(domain_radius > 0.0)) throw std::invalid_argument("domain radius must be positive");
  const int n = j.dimension();
  const PolynomialEvaluator eval(j);
  const double tol = tolerance * std::max(1.0, j.MaxAbsCoefficient());
  std::vector<Eigen::VectorXd> out;
  if (n == 2) {
    for (int k = 0; k < resolution; ++k) {
      const double t = 2.0 * std::numbers::pi * k / resolution;
      RayCrossings(eval, Eigen::Vector2d(std::cos(t), std::sin(t)), domain_radius, tol, out);
    }
  } else if (n == 3) {
    const double r = domain_radius;
    const double h = 2.0 * r / resolution;
    auto node = [&](int a, int b, int c) {
      return Eigen::Vector3d(-r + a * h, -r + b * h, -r + c * h);
    };
    const int m = resolution + 1;
    std::vector<double> values(static_cast<std::size_t>(m) * m * m);
    auto idx = [m](int a, int b, int c) { return (static_cast<std::size_t>(a) * m + b) * m + c; };
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c) values[idx(a, b, c)] = eval(node(a, b, c));
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        for (int c = 0; c < m; ++c) {
          const Eigen::Vector3d p = node(a, b, c);
          if (p.norm() > r) continue;
          const double fp = values[idx(a, b, c)];
          const int nb[3][3] = {{a + 1, b, c}, {a, b + 1, c}, {a, b, c + 1}};
          for (const auto& q : nb) {
            if (q[0] >= m || q[1] >= m || q[2] >= m) continue;
            const Eigen::Vector3d pq = node(q[0], q[1], q[2]);
            if (pq.norm() > r) continue;
            const double fq = values[idx(q[0], q[1], q[2])];
            if (fp == 0.0) {
              out.push_back(p);
              break;
            }
            if ((fp < 0) != (fq < 0) && fq != 0.0) {
              if (auto x = Bisect(eval, p, pq, fp, tol)) out.push_back(*x);
            }
          }
        }
      }
    }
  } else {
    std::mt19937_64 rng(0);
    std::normal_distribution<double> g;
    for (int k = 0; k < resolution; ++k) {
      Eigen::VectorXd dir(n);
      for (int i = 0; i < n; ++i) dir(i) = g(rng);
      if (dir.norm() == 0.0) continue;
      RayCrossings(eval, dir.normalized(), domain_radius, tol, out);
    }
  }
  return out;
}

}  // namespace sospack
