#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sospack/fixtures.h"
#include "sospack/io.h"
#include "sospack/packing.h"
#include "sospack/shape.h"

namespace py = pybind11;
using namespace sospack;

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

PointCloud CloudFromArray(const RowMatrix& points) {
  PointCloud cloud;
  cloud.dimension = static_cast<int>(points.cols());
  for (Eigen::Index i = 0; i < points.rows(); ++i) cloud.points.push_back(points.row(i).transpose());
  return cloud;
}

RowMatrix ArrayFromPoints(const std::vector<Eigen::VectorXd>& points, int n) {
  RowMatrix out(static_cast<Eigen::Index>(points.size()), n);
  for (std::size_t i = 0; i < points.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = points[i];
  return out;
}

std::string Learn(const RowMatrix& points, int degree, const Eigen::VectorXd& lower,
                  const Eigen::VectorXd& upper, std::optional<double> radius, double margin,
                  const std::vector<std::string>& priors, std::optional<int> max_iters) {
  const PointCloud cloud = CloudFromArray(points);
  LearnConfig config;
  config.degree = degree;
  config.box = Box(lower, upper);
  config.radius = radius;
  config.margin = margin;
  for (const auto& p : priors) config.priors.push_back(Prior::Parse(p, cloud.dimension));
  if (max_iters) config.solver.max_iters = *max_iters;
  config.Validate();
  LearnResult result;
  {
    py::gil_scoped_release release;
    result = LearnShape(cloud, config);
  }
  Json j;
  j["status"] = result.status == LearnStatus::kOk           ? "ok"
                : result.status == LearnStatus::kInfeasible ? "infeasible"
                                                            : "rejected";
  j["solver_status"] = std::string(to_string(result.solver_status));
  j["message"] = result.message;
  j["shape"] = result.status == LearnStatus::kOk ? ShapeToJson(result.model) : Json();
  return j.dump();
}

std::string Certify(const std::string& scene_json, std::optional<int> degree,
                    std::optional<double> gamma_cap, int jobs, int grid, int samples,
                    std::uint64_t seed) {
  Scene scene = SceneFromJson(Json::parse(scene_json));
  if (degree) scene.degree = *degree;
  if (gamma_cap) scene.gamma_cap = *gamma_cap;
  scene.Validate();
  PackingOptions options;
  options.jobs = jobs;
  options.budget.grid_resolution = grid;
  options.budget.random_samples = samples;
  options.budget.seed = seed;
  py::gil_scoped_release release;
  return ReportToJson(CertifyPacking(scene, options)).dump();
}

std::string Oracle(const std::string& scene_json, int grid, int samples, std::uint64_t seed,
                   int jobs) {
  const Scene scene = SceneFromJson(Json::parse(scene_json));
  OracleBudget budget;
  budget.grid_resolution = grid;
  budget.random_samples = samples;
  budget.seed = seed;
  py::gil_scoped_release release;
  return OracleReportToJson(OracleCheck(scene, budget, jobs)).dump();
}

Eigen::VectorXd Evaluate(const std::string& poly_json, const RowMatrix& points) {
  const Polynomial p = PolynomialFromJson(Json::parse(poly_json));
  if (points.cols() != p.dimension()) throw std::invalid_argument("points have the wrong dimension");
  Eigen::VectorXd out(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) out(i) = p.Evaluate(points.row(i).transpose());
  return out;
}

RowMatrix Boundary(const std::string& poly_json, double radius, int resolution) {
  const Polynomial p = PolynomialFromJson(Json::parse(poly_json));
  return ArrayFromPoints(SampleBoundary(p, radius, resolution), p.dimension());
}

std::vector<std::pair<std::string, std::string>> GenerateFixture(const std::string& kind,
                                                                 std::uint64_t seed, int size) {
  std::vector<std::pair<std::string, std::string>> out;
  for (auto& f : fixtures::Generate({fixtures::KindFromString(kind), seed, size})) {
    out.emplace_back(std::move(f.name), std::move(f.content));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_sospack, m) {
  m.doc() = "Polynomial shape learning and SOS packing certification";
  py::register_exception<std::invalid_argument>(m, "InvalidArgument", PyExc_ValueError);

  m.def("learn_shape", &Learn, py::arg("points"), py::arg("degree") = 6, py::arg("lower"),
        py::arg("upper"), py::arg("radius") = py::none(), py::arg("margin") = 1e-4,
        py::arg("priors") = std::vector<std::string>{}, py::arg("max_iters") = py::none());
  m.def("certify", &Certify, py::arg("scene"), py::arg("degree") = py::none(),
        py::arg("gamma_cap") = py::none(), py::arg("jobs") = 1, py::arg("grid") = 0,
        py::arg("samples") = 20000, py::arg("seed") = 0);
  m.def("oracle_check", &Oracle, py::arg("scene"), py::arg("grid") = 0,
        py::arg("samples") = 20000, py::arg("seed") = 0, py::arg("jobs") = 1);
  m.def("evaluate", &Evaluate, py::arg("polynomial"), py::arg("points"));
  m.def("sample_boundary", &Boundary, py::arg("polynomial"), py::arg("radius"),
        py::arg("resolution"));
  m.def("fixture_kinds", [] {
    std::vector<std::string> out;
    for (auto k : fixtures::AllKinds()) out.emplace_back(fixtures::to_string(k));
    return out;
  });
  m.def("generate_fixture", &GenerateFixture, py::arg("kind"), py::arg("seed") = 0,
        py::arg("size") = 0);
  m.def("sha256", [](const py::bytes& b) { return Sha256Hex(std::string(b)); });
  m.attr("__version__") = SOSPACK_VERSION;
}
