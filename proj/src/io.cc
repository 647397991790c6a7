#include "sospack/io.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace sospack {

namespace {

Json Number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double NumberOr(const Json& j, double fallback) {
  return j.is_number() ? j.get<double>() : fallback;
}

Json VectorToJson(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd VectorFromJson(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected a numeric array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

const Json& Field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw std::invalid_argument(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

}  // namespace

Json PolynomialToJson(const Polynomial& p) {
  Json terms = Json::array();
  for (const auto& [m, c] : p.terms()) {
    Json t;
    t["exp"] = m.exponents();
    t["coef"] = c;
    terms.push_back(std::move(t));
  }
  Json j;
  j["dim"] = p.dimension();
  j["terms"] = std::move(terms);
  return j;
}

Polynomial PolynomialFromJson(const Json& j) {
  const int n = Field(j, "dim").get<int>();
  if (n < 1) throw std::invalid_argument("polynomial dimension must be positive");
  Polynomial p(n);
  for (const auto& t : Field(j, "terms")) {
    auto exp = Field(t, "exp").get<std::vector<int>>();
    if (static_cast<int>(exp.size()) != n) {
      throw std::invalid_argument("polynomial term has the wrong number of exponents");
    }
    for (int e : exp) {
      if (e < 0) throw std::invalid_argument("negative exponent");
    }
    const double c = Field(t, "coef").get<double>();
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite coefficient");
    p.AddTerm(Monomial(std::move(exp)), c);
  }
  return p;
}

Json TransformToJson(const AffineTransform& t) {
  Json linear = Json::array();
  for (int i = 0; i < t.linear().rows(); ++i) linear.push_back(VectorToJson(t.linear().row(i)));
  Json j;
  j["linear"] = std::move(linear);
  j["offset"] = VectorToJson(t.offset());
  j["rigid"] = t.rigid();
  return j;
}

AffineTransform TransformFromJson(const Json& j) {
  const Json& rows = Field(j, "linear");
  const Eigen::VectorXd offset = VectorFromJson(Field(j, "offset"));
  const int n = static_cast<int>(offset.size());
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
    throw std::invalid_argument("transform linear part must be n x n");
  }
  Eigen::MatrixXd s(n, n);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd r = VectorFromJson(rows[i]);
    if (r.size() != n) throw std::invalid_argument("transform linear part must be n x n");
    s.row(i) = r;
  }
  return AffineTransform(s, offset, j.value("rigid", false));
}

Json BoxToJson(const Box& b) {
  Json j;
  j["lower"] = VectorToJson(b.lower());
  j["upper"] = VectorToJson(b.upper());
  return j;
}

Box BoxFromJson(const Json& j) {
  return Box(VectorFromJson(Field(j, "lower")), VectorFromJson(Field(j, "upper")));
}

Json CertificateToJson(const Certificate& c) {
  Json j;
  j["gamma"] = Number(c.gamma);
  j["verified"] = c.verified;
  j["identity_residual"] = Number(c.identity_residual);
  j["min_gram_eig"] = Number(c.min_gram_eig);
  Json mult = Json::object();
  for (const auto& [name, p] : c.multipliers) mult[name] = PolynomialToJson(p);
  j["multipliers"] = std::move(mult);
  j["solver_status"] = std::string(to_string(c.solver_status));
  return j;
}

Certificate CertificateFromJson(const Json& j) {
  Certificate c;
  c.gamma = NumberOr(j.value("gamma", Json()), std::numeric_limits<double>::quiet_NaN());
  c.verified = j.value("verified", false);
  c.identity_residual =
      NumberOr(j.value("identity_residual", Json()), std::numeric_limits<double>::infinity());
  c.min_gram_eig =
      NumberOr(j.value("min_gram_eig", Json()), -std::numeric_limits<double>::infinity());
  if (j.contains("multipliers")) {
    for (const auto& [name, p] : j.at("multipliers").items()) {
      c.multipliers.emplace(name, PolynomialFromJson(p));
    }
  }
  if (j.contains("solver_status")) {
    c.solver_status = SolverStatusFromString(j.at("solver_status").get<std::string>());
  }
  return c;
}

Json SceneToJson(const Scene& s) {
  Json j;
  j["dim"] = s.dimension;
  Json container;
  container["c"] = PolynomialToJson(s.container);
  container["F0"] = s.container_domain ? PolynomialToJson(*s.container_domain) : Json(nullptr);
  j["container"] = std::move(container);
  Json objects = Json::array();
  for (const auto& o : s.objects) {
    Json obj;
    obj["label"] = o.label;
    obj["p"] = PolynomialToJson(o.p);
    obj["F"] = o.domain ? PolynomialToJson(*o.domain) : Json(nullptr);
    obj["transform"] = TransformToJson(o.transform);
    objects.push_back(std::move(obj));
  }
  j["objects"] = std::move(objects);
  j["degree"] = s.degree;
  j["gamma_cap"] = s.gamma_cap;
  if (s.search_box) j["search_box"] = BoxToJson(*s.search_box);
  if (s.ground_truth) j["ground_truth"] = *s.ground_truth;
  return j;
}

Scene SceneFromJson(const Json& j) {
  Scene s;
  s.dimension = Field(j, "dim").get<int>();
  const Json& container = Field(j, "container");
  s.container = PolynomialFromJson(Field(container, "c"));
  if (container.contains("F0") && !container.at("F0").is_null()) {
    s.container_domain = PolynomialFromJson(container.at("F0"));
  }
  for (const auto& obj : Field(j, "objects")) {
    SceneObject o;
    o.label = obj.value("label", "");
    o.p = PolynomialFromJson(Field(obj, "p"));
    if (obj.contains("F") && !obj.at("F").is_null()) o.domain = PolynomialFromJson(obj.at("F"));
    o.transform = obj.contains("transform") ? TransformFromJson(obj.at("transform"))
                                            : AffineTransform::Identity(s.dimension);
    s.objects.push_back(std::move(o));
  }
  s.degree = j.value("degree", 4);
  s.gamma_cap = j.value("gamma_cap", 1.0);
  if (j.contains("search_box")) s.search_box = BoxFromJson(j.at("search_box"));
  if (j.contains("ground_truth")) s.ground_truth = j.at("ground_truth").get<std::string>();
  s.Validate();
  return s;
}

Json WitnessToJson(const std::optional<Witness>& w) {
  if (!w) return nullptr;
  Json j;
  j["point"] = VectorToJson(w->point);
  j["margin"] = w->margin;
  return j;
}

Json ReportToJson(const PackingReport& r) {
  Json j;
  j["verdict"] = std::string(to_string(r.verdict));
  j["degree"] = r.degree;
  j["gamma_cap"] = r.gamma_cap;
  j["min_gamma"] = Number(r.MinGamma());
  Json constraints = Json::array();
  Json counterexamples = Json::array();
  for (const auto& c : r.results) {
    Json e;
    e["id"] = c.id.ToString();
    e["status"] = c.skipped ? "skipped" : c.certificate.verified ? "verified" : "unverified";
    if (c.id.kind == ConstraintKind::kNonOverlap) {
      e["order"] = c.reversed ? std::vector<int>{c.id.j, c.id.i} : std::vector<int>{c.id.i, c.id.j};
    }
    e["certificate"] = c.skipped ? Json(nullptr) : CertificateToJson(c.certificate);
    e["witness"] = WitnessToJson(c.witness);
    if (c.witness) {
      Json w;
      w["id"] = c.id.ToString();
      w["point"] = VectorToJson(c.witness->point);
      counterexamples.push_back(std::move(w));
    }
    constraints.push_back(std::move(e));
  }
  j["constraints"] = std::move(constraints);
  j["counterexamples"] = std::move(counterexamples);
  return j;
}

Json OracleReportToJson(const std::vector<OracleResult>& results) {
  Json j;
  bool any = false;
  Json list = Json::array();
  for (const auto& r : results) {
    Json e;
    e["id"] = r.id.ToString();
    e["witness"] = WitnessToJson(r.witness);
    any = any || r.witness.has_value();
    list.push_back(std::move(e));
  }
  j["violation"] = any;
  j["constraints"] = std::move(list);
  return j;
}

Json ShapeToJson(const ShapeModel& m) {
  Json j = PolynomialToJson(m.polynomial);
  j["radius"] = m.domain_radius;
  Json config;
  config["degree"] = m.config.degree;
  config["box"] = BoxToJson(m.config.box);
  config["R"] = m.config.ResolvedRadius();
  config["margin"] = m.config.margin;
  Json priors = Json::array();
  for (const auto& p : m.config.priors) priors.push_back(p.ToString());
  config["priors"] = std::move(priors);
  config["bound_multiplier_degree"] = m.config.ResolvedMultiplierDegree();
  j["config"] = std::move(config);
  j["objective"] = Number(m.objective);
  j["max_point_value"] = Number(m.max_point_value);
  j["certificate"] = CertificateToJson(m.certificate);
  return j;
}

ShapeModel ShapeFromJson(const Json& j) {
  ShapeModel m;
  m.polynomial = PolynomialFromJson(j);
  m.domain_radius = Field(j, "radius").get<double>();
  if (!(m.domain_radius > 0.0)) throw std::invalid_argument("shape radius must be positive");
  if (j.contains("config")) {
    const Json& c = j.at("config");
    m.config.degree = c.value("degree", m.polynomial.degree());
    if (c.contains("box")) m.config.box = BoxFromJson(c.at("box"));
    if (c.contains("R")) m.config.radius = c.at("R").get<double>();
    m.config.margin = c.value("margin", 1e-4);
    if (c.contains("priors")) {
      for (const auto& p : c.at("priors")) {
        m.config.priors.push_back(Prior::Parse(p.get<std::string>(), m.polynomial.dimension()));
      }
    }
    if (c.contains("bound_multiplier_degree")) {
      m.config.bound_multiplier_degree = c.at("bound_multiplier_degree").get<int>();
    }
  }
  m.objective = NumberOr(j.value("objective", Json()), 0.0);
  m.max_point_value = NumberOr(j.value("max_point_value", Json()), 0.0);
  if (j.contains("certificate")) m.certificate = CertificateFromJson(j.at("certificate"));
  return m;
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

Json ReadJsonFile(const std::string& path) {
  const std::string text = ReadTextFile(path);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

std::string DumpJson(const Json& j) { return j.dump(2) + "\n"; }

std::string Sha256Hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

Json ManifestToJson(const Manifest& m) {
  Json j;
  j["command"] = m.command;
  j["version"] = SOSPACK_VERSION;
  j["config"] = m.config;
  Json inputs = Json::array();
  for (const auto& path : m.inputs) {
    Json e;
    e["path"] = path;
    e["sha256"] = Sha256Hex(ReadTextFile(path));
    inputs.push_back(std::move(e));
  }
  j["inputs"] = std::move(inputs);
  j["seed"] = m.seed ? Json(*m.seed) : Json(nullptr);
  j["timings"] = m.timings;
  return j;
}

}  // namespace sospack
