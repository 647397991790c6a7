// Command-line driver: learn, certify, sample, oracle-check, fixtures.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sospack/fixtures.h"
#include "sospack/io.h"
#include "sospack/packing.h"
#include "sospack/shape.h"

namespace {

using namespace sospack;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitRefuted = 3;
constexpr int kExitUndecided = 4;

class Stopwatch {
 public:
  double Lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

std::string ManifestPath(const std::string& out, const std::string& explicit_path) {
  if (!explicit_path.empty()) return explicit_path;
  std::filesystem::path p(out);
  p.replace_extension();
  return p.string() + ".manifest.json";
}

std::vector<double> SplitNumbers(const std::string& text, char sep) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size() && item.find_first_not_of(" \t", used) != std::string::npos) {
      throw std::invalid_argument("bad number '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

/// "lo,hi" for a cube or "lo1,hi1;lo2,hi2;..." per axis.
Box ParseBox(const std::string& text, int n) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) parts.push_back(item);
  Eigen::VectorXd lo(n), hi(n);
  if (parts.size() == 1) {
    const auto v = SplitNumbers(parts[0], ',');
    if (v.size() != 2) throw std::invalid_argument("--box expects lo,hi");
    lo.setConstant(v[0]);
    hi.setConstant(v[1]);
  } else if (static_cast<int>(parts.size()) == n) {
    for (int i = 0; i < n; ++i) {
      const auto v = SplitNumbers(parts[i], ',');
      if (v.size() != 2) throw std::invalid_argument("--box expects lo,hi per axis");
      lo(i) = v[0];
      hi(i) = v[1];
    }
  } else {
    throw std::invalid_argument("--box has " + std::to_string(parts.size()) +
                                " axes, the cloud has " + std::to_string(n));
  }
  return Box(lo, hi);
}

std::string FormatRow(const Eigen::VectorXd& p, const std::string& label = "") {
  std::string row = label;
  char buf[32];
  for (int i = 0; i < p.size(); ++i) {
    if (!row.empty() || i > 0) row += ',';
    std::snprintf(buf, sizeof(buf), "%.17g", p(i));
    row += buf;
  }
  return row + "\n";
}

// ---------------------------------------------------------------- learn

struct LearnArgs {
  std::string input;
  std::string format;
  int degree = 6;
  std::string box = "-1.1,1.1";
  std::optional<double> radius;
  double margin = 1e-4;
  std::vector<std::string> priors;
  std::optional<int> max_iters;
  std::string out;
  std::string manifest;
};

int RunLearn(const LearnArgs& a) {
  Stopwatch clock;
  Manifest manifest;
  manifest.command = "learn";
  manifest.inputs = {a.input};

  const PointCloud cloud =
      a.format.empty() ? LoadPointCloud(a.input)
                       : LoadPointCloud(a.input, a.format == "xyz" ? CloudFormat::kXyz
                                                                   : CloudFormat::kCsv);
  manifest.timings["load"] = clock.Lap();

  LearnConfig config;
  config.degree = a.degree;
  config.box = ParseBox(a.box, cloud.dimension);
  config.radius = a.radius;
  config.margin = a.margin;
  for (const auto& p : a.priors) config.priors.push_back(Prior::Parse(p, cloud.dimension));
  if (a.max_iters) config.solver.max_iters = *a.max_iters;
  config.Validate();

  const LearnResult result = LearnShape(cloud, config);
  manifest.timings["learn"] = clock.Lap();

  Json resolved;
  resolved["degree"] = config.degree;
  resolved["box"] = BoxToJson(config.box);
  resolved["R"] = config.ResolvedRadius();
  resolved["margin"] = config.margin;
  resolved["priors"] = a.priors;
  resolved["bound_multiplier_degree"] = config.ResolvedMultiplierDegree();
  resolved["max_iters"] = config.solver.max_iters;
  manifest.config = resolved;
  manifest.config["status"] = result.status == LearnStatus::kOk           ? "ok"
                              : result.status == LearnStatus::kInfeasible ? "infeasible"
                                                                          : "rejected";
  manifest.config["solver_status"] = std::string(to_string(result.solver_status));

  if (result.status != LearnStatus::kOk) {
    std::cerr << "learn: " << result.message << "\n";
    WriteTextFile(ManifestPath(a.out, a.manifest), DumpJson(ManifestToJson(manifest)));
    return kExitInfeasible;
  }
  WriteTextFile(a.out, DumpJson(ShapeToJson(result.model)));
  manifest.timings["write"] = clock.Lap();
  WriteTextFile(ManifestPath(a.out, a.manifest), DumpJson(ManifestToJson(manifest)));
  std::cerr << "learn: ok, objective " << result.model.objective << ", max J(x_i) "
            << result.model.max_point_value << "\n";
  return kExitOk;
}

// -------------------------------------------------------------- certify

struct CertifyArgs {
  std::string scene;
  std::optional<int> degree;
  std::optional<double> gamma_cap;
  int jobs = 1;
  int oracle_budget = 0;
  int samples = 20000;
  std::uint64_t seed = 0;
  std::string out;
  std::string manifest;
};

int RunCertify(const CertifyArgs& a) {
  Stopwatch clock;
  Manifest manifest;
  manifest.command = "certify";
  manifest.inputs = {a.scene};
  manifest.seed = a.seed;

  Scene scene = SceneFromJson(ReadJsonFile(a.scene));
  if (a.degree) scene.degree = *a.degree;
  if (a.gamma_cap) scene.gamma_cap = *a.gamma_cap;
  scene.Validate();
  manifest.timings["load"] = clock.Lap();

  PackingOptions options;
  options.jobs = a.jobs;
  options.budget.grid_resolution = a.oracle_budget;
  options.budget.random_samples = a.samples;
  options.budget.seed = a.seed;
  const PackingReport report = CertifyPacking(scene, options);
  manifest.timings["certify"] = clock.Lap();

  WriteTextFile(a.out, DumpJson(ReportToJson(report)));
  manifest.timings["write"] = clock.Lap();
  Json per_constraint = Json::object();
  for (const auto& r : report.results) per_constraint[r.id.ToString()] = r.seconds;
  manifest.timings["constraints"] = std::move(per_constraint);
  Json config;
  config["degree"] = scene.degree;
  config["gamma_cap"] = scene.gamma_cap;
  config["jobs"] = a.jobs;
  config["oracle_grid"] = a.oracle_budget;
  config["oracle_samples"] = a.samples;
  config["verdict"] = std::string(to_string(report.verdict));
  manifest.config = std::move(config);
  WriteTextFile(ManifestPath(a.out, a.manifest), DumpJson(ManifestToJson(manifest)));

  std::cerr << "certify: " << to_string(report.verdict) << ", min gamma " << report.MinGamma()
            << "\n";
  switch (report.verdict) {
    case Verdict::kCertified: return kExitOk;
    case Verdict::kRefuted: return kExitRefuted;
    case Verdict::kUndecided: return kExitUndecided;
  }
  return kExitError;
}

// --------------------------------------------------------------- sample

struct SampleArgs {
  std::string shape;
  std::string scene;
  int resolution = 0;
  std::string out;
};

int DefaultResolution(int n) { return n == 3 ? 60 : n == 2 ? 360 : 1000; }

/// Ray-based contouring only sees sets that are star-shaped about the ray
/// origin, so 2D sets that miss the origin are recentred on their grid minimiser.
std::vector<Eigen::VectorXd> Boundary(const Polynomial& p, double radius, int resolution) {
  const int n = p.dimension();
  if (n == 3) return SampleBoundary(p, radius, resolution);
  Eigen::VectorXd centre = Eigen::VectorXd::Zero(n);
  double best = p.Evaluate(centre);
  const int m = n == 2 && best > 0.0 ? 81 : 0;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      const Eigen::Vector2d x(-radius + 2.0 * radius * a / (m - 1),
                              -radius + 2.0 * radius * b / (m - 1));
      if (x.norm() > radius) continue;
      const double v = p.Evaluate(x);
      if (v < best) {
        best = v;
        centre = x;
      }
    }
  }
  const Polynomial shifted = ComposeAffine(p, AffineTransform::Translation(-centre));
  std::vector<Eigen::VectorXd> out;
  for (auto& y : SampleBoundary(shifted, radius + centre.norm(), resolution)) {
    Eigen::VectorXd x = y + centre;
    if (x.norm() <= radius) out.push_back(std::move(x));
  }
  return out;
}

double BoundingRadius(const Polynomial& p, const std::optional<Polynomial>& domain) {
  if (domain) {
    if (auto r = SublevelRadius(*domain)) return *r;
  }
  if (auto r = SublevelRadius(p)) return *r;
  throw std::invalid_argument("cannot bound the sublevel set; add a domain or radius");
}

int RunSample(const SampleArgs& a) {
  std::string csv;
  std::size_t count = 0;
  if (!a.shape.empty()) {
    const Json j = ReadJsonFile(a.shape);
    const Polynomial p = PolynomialFromJson(j);
    const double radius =
        j.contains("radius") ? j.at("radius").get<double>() : 1.05 * BoundingRadius(p, {});
    const int res = a.resolution > 0 ? a.resolution : DefaultResolution(p.dimension());
    for (const auto& x : SampleBoundary(p, radius, res)) {
      csv += FormatRow(x);
      ++count;
    }
  } else {
    const Scene scene = SceneFromJson(ReadJsonFile(a.scene));
    const int res = a.resolution > 0 ? a.resolution : DefaultResolution(scene.dimension);
    std::optional<double> container_radius;
    if (auto r = SublevelRadius(scene.container)) container_radius = 1.05 * *r;
    if (scene.container_domain) {
      if (auto r = SublevelRadius(*scene.container_domain)) {
        container_radius = container_radius ? std::min(*container_radius, 1.05 * *r) : 1.05 * *r;
      }
    }
    if (!container_radius && scene.search_box) {
      container_radius =
          std::max(scene.search_box->lower().norm(), scene.search_box->upper().norm());
    }
    if (container_radius) {
      for (const auto& x : Boundary(scene.container, *container_radius, res)) {
        csv += FormatRow(x, "container");
        ++count;
      }
    } else {
      std::cerr << "sample: container is unbounded and the scene has no search box; skipped\n";
    }
    for (std::size_t k = 0; k < scene.objects.size(); ++k) {
      const SceneObject& o = scene.objects[k];
      const std::string label = o.label.empty() ? "object" + std::to_string(k) : o.label;
      const double r = 1.05 * BoundingRadius(o.p, o.domain);
      for (const auto& y : Boundary(o.p, r, res)) {
        if (o.domain && o.domain->Evaluate(y) > 0.0) continue;
        csv += FormatRow(o.transform.ToWorld(y), label);
        ++count;
      }
    }
  }
  WriteTextFile(a.out, csv);
  if (count == 0) std::cerr << "sample: warning: empty sublevel set, no boundary points\n";
  return kExitOk;
}

// --------------------------------------------------------- oracle-check

struct OracleArgs {
  std::string scene;
  int grid = 0;
  int samples = 20000;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out;
  std::string manifest;
};

int RunOracle(const OracleArgs& a) {
  Stopwatch clock;
  const Scene scene = SceneFromJson(ReadJsonFile(a.scene));
  OracleBudget budget;
  budget.grid_resolution = a.grid;
  budget.random_samples = a.samples;
  budget.seed = a.seed;
  const auto results = OracleCheck(scene, budget, a.jobs);
  const double seconds = clock.Lap();
  const Json report = OracleReportToJson(results);
  if (a.out.empty()) {
    std::cout << DumpJson(report);
  } else {
    WriteTextFile(a.out, DumpJson(report));
    Manifest manifest;
    manifest.command = "oracle-check";
    manifest.inputs = {a.scene};
    manifest.seed = a.seed;
    manifest.config["grid"] = a.grid;
    manifest.config["samples"] = a.samples;
    manifest.timings["oracle"] = seconds;
    WriteTextFile(ManifestPath(a.out, a.manifest), DumpJson(ManifestToJson(manifest)));
  }
  bool violated = false;
  for (const auto& r : results) {
    if (r.witness) {
      violated = true;
      std::cerr << "oracle-check: " << r.id.ToString() << " violated at ("
                << r.witness->point.transpose() << ")\n";
    }
  }
  return violated ? kExitRefuted : kExitOk;
}

// ------------------------------------------------------------- fixtures

struct FixtureArgs {
  std::string kind;
  std::uint64_t seed = 0;
  int size = 0;
  std::string out = ".";
};

int RunFixtures(const FixtureArgs& a) {
  std::vector<fixtures::Kind> kinds;
  if (a.kind == "all") {
    kinds = fixtures::AllKinds();
  } else {
    kinds.push_back(fixtures::KindFromString(a.kind));
  }
  std::filesystem::create_directories(a.out);
  for (auto kind : kinds) {
    for (const auto& f : fixtures::Generate({kind, a.seed, a.size})) {
      const std::string path = (std::filesystem::path(a.out) / f.name).string();
      WriteTextFile(path, f.content);
      std::cerr << "fixtures: wrote " << path << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial shape learning and SOS packing certification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SOSPACK_VERSION);

  LearnArgs learn;
  auto* learn_cmd = app.add_subcommand("learn", "Learn a polynomial sublevel-set shape from a point cloud");
  learn_cmd->add_option("--input", learn.input, "Point cloud (.csv or .xyz)")->required();
  learn_cmd->add_option("--format", learn.format, "Override the format")
      ->check(CLI::IsMember({"csv", "xyz"}));
  learn_cmd->add_option("--degree", learn.degree, "Even polynomial degree")->capture_default_str();
  learn_cmd->add_option("--box", learn.box, "lo,hi or lo1,hi1;lo2,hi2;...")->capture_default_str();
  learn_cmd->add_option("--radius", learn.radius, "Ball radius R enclosing the box");
  learn_cmd->add_option("--margin", learn.margin, "Strictness margin")->capture_default_str();
  learn_cmd->add_option("--prior", learn.priors,
                        "symmetry:neg-identity, symmetry:<a,b;c,d>, star or convex");
  learn_cmd->add_option("--max-iters", learn.max_iters, "Interior point iteration limit");
  learn_cmd->add_option("--out", learn.out, "Shape JSON")->required();
  learn_cmd->add_option("--manifest", learn.manifest, "Manifest path");

  CertifyArgs cert;
  auto* cert_cmd = app.add_subcommand("certify", "Certify a packing scene");
  cert_cmd->add_option("--scene", cert.scene, "Scene JSON")->required();
  cert_cmd->add_option("--degree", cert.degree, "Override the certificate degree");
  cert_cmd->add_option("--gamma-cap", cert.gamma_cap, "Override the gamma cap");
  cert_cmd->add_option("--jobs", cert.jobs, "Parallel workers")->capture_default_str();
  cert_cmd->add_option("--oracle-budget", cert.oracle_budget,
                       "Oracle grid points per axis (0 = automatic)")
      ->capture_default_str();
  cert_cmd->add_option("--samples", cert.samples, "Oracle random samples")->capture_default_str();
  cert_cmd->add_option("--seed", cert.seed, "Oracle seed")->capture_default_str();
  cert_cmd->add_option("--out", cert.out, "Report JSON")->required();
  cert_cmd->add_option("--manifest", cert.manifest, "Manifest path");

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Export boundary points as CSV");
  auto* shape_opt = sample_cmd->add_option("--shape", sample.shape, "Shape or polynomial JSON");
  auto* scene_opt = sample_cmd->add_option("--scene", sample.scene, "Scene JSON");
  shape_opt->excludes(scene_opt);
  sample_cmd->add_option("--resolution", sample.resolution, "Rays (2D) or grid cells per axis (3D)");
  sample_cmd->add_option("--out", sample.out, "Boundary CSV")->required();

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle-check", "Search every constraint for a counterexample");
  oracle_cmd->add_option("--scene", oracle.scene, "Scene JSON")->required();
  oracle_cmd->add_option("--grid", oracle.grid, "Grid points per axis (0 = automatic)")
      ->capture_default_str();
  oracle_cmd->add_option("--samples", oracle.samples, "Random samples")->capture_default_str();
  oracle_cmd->add_option("--seed", oracle.seed, "Sampling seed")->capture_default_str();
  oracle_cmd->add_option("--jobs", oracle.jobs, "Parallel workers")->capture_default_str();
  oracle_cmd->add_option("--out", oracle.out, "Report JSON (default: standard output)");
  oracle_cmd->add_option("--manifest", oracle.manifest, "Manifest path");

  FixtureArgs fix;
  auto* fix_cmd = app.add_subcommand("fixtures", "Deterministic test fixtures");
  fix_cmd->require_subcommand(1);
  auto* gen_cmd = fix_cmd->add_subcommand("generate", "Write fixture files");
  gen_cmd->add_option("--kind", fix.kind, "Fixture kind or 'all'")->required();
  gen_cmd->add_option("--seed", fix.seed, "Seed")->capture_default_str();
  gen_cmd->add_option("--size", fix.size, "Point count for clouds (0 = default)");
  gen_cmd->add_option("--out", fix.out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*learn_cmd) return RunLearn(learn);
    if (*cert_cmd) return RunCertify(cert);
    if (*sample_cmd) {
      if (sample.shape.empty() == sample.scene.empty()) {
        std::cerr << "sample: exactly one of --shape or --scene is required\n";
        return kExitError;
      }
      return RunSample(sample);
    }
    if (*oracle_cmd) return RunOracle(oracle);
    if (*gen_cmd) return RunFixtures(fix);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
