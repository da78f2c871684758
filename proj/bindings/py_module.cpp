// Python bindings for the core operations: training runs, checkpoint models,
// any-step ratio / density / MI estimation, benchmark problems and the
// verification battery.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "isadre/checkpoint.hpp"
#include "isadre/config.hpp"
#include "isadre/inference.hpp"
#include "isadre/runner.hpp"
#include "isadre/stats.hpp"
#include "isadre/verify.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

json json_from_py(const py::object& obj) {
  const std::string dumped =
      py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  return json::parse(dumped);
}

py::object py_from_json(const json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

// Read-only view over a trained model.
class Model {
 public:
  explicit Model(isadre::TrainState state) : state_(std::move(state)) {}

  static Model load(const std::string& path) { return Model(isadre::load_checkpoint(path)); }

  int dim() const { return state_.net.spec().data_dim; }
  bool is_secant() const { return state_.net.spec().time_inputs == 2; }
  std::int64_t step() const { return state_.step; }

  double forward(py::array_t<double> x, double l, double t) const {
    auto xv = as_vector(x);
    if (is_secant()) return state_.net.forward(xv, l, t);
    const double times[1] = {t};
    return state_.net.forward(xv, std::span<const double>(times, 1));
  }

  py::array_t<double> log_ratio(py::array_t<double> xs, int nfe) const {
    return map_rows(xs, [&](std::span<const double> row) {
      if (is_secant())
        return isadre::log_ratio_secant(state_.net, row, isadre::Partition::uniform(nfe));
      return isadre::log_ratio_tangent_quadrature(state_.net, row, nfe);
    });
  }

  py::array_t<double> log_density(py::array_t<double> xs, int nfe) const {
    return map_rows(xs, [&](std::span<const double> row) {
      const double lr = is_secant() ? isadre::log_ratio_secant(state_.net, row,
                                                               isadre::Partition::uniform(nfe))
                                    : isadre::log_ratio_tangent_quadrature(state_.net, row, nfe);
      return lr + isadre::stats::std_normal_log_pdf(row);
    });
  }

  std::pair<double, double> estimate_mi(py::array_t<double> xs, int nfe) const {
    auto rows = as_rows(xs);
    if (!is_secant()) {
      std::vector<double> vals(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i)
        vals[i] = isadre::log_ratio_tangent_quadrature(state_.net, rows[i], nfe);
      return {isadre::stats::mean(vals), isadre::stats::stderr_of_mean(vals)};
    }
    const auto est = isadre::estimate_mi(state_.net, rows, isadre::Partition::uniform(nfe));
    return {est.mi, est.stderr_};
  }

 private:
  std::vector<double> as_vector(const py::array_t<double>& x) const {
    auto buf = x.request();
    if (buf.ndim != 1 || buf.shape[0] != dim())
      throw std::invalid_argument("expected a 1-D array of length " + std::to_string(dim()));
    const double* p = static_cast<const double*>(buf.ptr);
    return std::vector<double>(p, p + buf.shape[0]);
  }

  std::vector<std::vector<double>> as_rows(const py::array_t<double>& xs) const {
    auto buf = xs.request();
    std::vector<std::vector<double>> rows;
    const double* p = static_cast<const double*>(buf.ptr);
    if (buf.ndim == 1) {
      if (buf.shape[0] != dim()) throw std::invalid_argument("row length mismatch");
      rows.emplace_back(p, p + buf.shape[0]);
      return rows;
    }
    if (buf.ndim != 2 || buf.shape[1] != dim())
      throw std::invalid_argument("expected an (n, " + std::to_string(dim()) + ") array");
    rows.reserve(buf.shape[0]);
    for (py::ssize_t i = 0; i < buf.shape[0]; ++i)
      rows.emplace_back(p + i * buf.shape[1], p + (i + 1) * buf.shape[1]);
    return rows;
  }

  template <typename Fn>
  py::array_t<double> map_rows(const py::array_t<double>& xs, Fn&& fn) const {
    auto rows = as_rows(xs);
    py::array_t<double> out(static_cast<py::ssize_t>(rows.size()));
    double* o = static_cast<double*>(out.request().ptr);
    for (std::size_t i = 0; i < rows.size(); ++i) o[i] = fn(rows[i]);
    return out;
  }

  isadre::TrainState state_;
};

class Problem {
 public:
  explicit Problem(const py::object& spec) : problem_(isadre::make_problem(json_from_py(spec))) {}

  int dim() const { return problem_.dim; }
  std::string name() const { return problem_.name; }
  py::object oracle_mi() const {
    return problem_.oracle_mi ? py::cast(*problem_.oracle_mi) : py::none();
  }
  bool has_oracle_log_ratio() const { return static_cast<bool>(problem_.oracle_log_ratio); }

  py::array_t<double> sample(const std::string& which, int n, std::uint64_t seed) const {
    isadre::rngutil::Engine rng(seed);
    py::array_t<double> out({n, problem_.dim});
    double* p = static_cast<double*>(out.request().ptr);
    std::vector<double> row(problem_.dim);
    for (int i = 0; i < n; ++i) {
      if (which == "p0")
        problem_.sample_p0(rng, row);
      else
        problem_.sample_p1(rng, row);
      for (int j = 0; j < problem_.dim; ++j) p[i * problem_.dim + j] = row[j];
    }
    return out;
  }

  py::array_t<double> oracle_log_ratio(py::array_t<double> xs) const {
    if (!problem_.oracle_log_ratio)
      throw std::invalid_argument("problem has no analytic log-ratio");
    auto buf = xs.request();
    if (buf.ndim != 2 || buf.shape[1] != problem_.dim)
      throw std::invalid_argument("expected an (n, dim) array");
    const double* p = static_cast<const double*>(buf.ptr);
    py::array_t<double> out(buf.shape[0]);
    double* o = static_cast<double*>(out.request().ptr);
    for (py::ssize_t i = 0; i < buf.shape[0]; ++i)
      o[i] = problem_.oracle_log_ratio(
          std::span<const double>(p + i * problem_.dim, problem_.dim));
    return out;
  }

 private:
  isadre::BenchmarkProblem problem_;
};

py::dict run_train_py(const py::object& config, const std::string& out_dir) {
  auto cfg = isadre::parse_config(json_from_py(config));
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  const auto out = isadre::run_train(cfg);
  py::dict d;
  d["checkpoint"] = out.checkpoint_path;
  d["metrics"] = out.metrics_path;
  d["config"] = out.config_path;
  d["final_loss"] = out.final_loss;
  d["steps"] = out.steps;
  return d;
}

py::list run_eval_py(const py::object& config, const std::string& checkpoint,
                     const std::string& out_dir) {
  auto cfg = isadre::parse_config(json_from_py(config));
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  py::list rows;
  for (const auto& r : isadre::run_eval(cfg, checkpoint)) {
    py::dict d;
    d["method"] = r.method;
    d["sampler"] = r.sampler;
    d["supervision"] = r.supervision;
    d["nfe"] = r.nfe;
    d["metric"] = r.metric;
    d["value"] = r.value;
    d["stderr"] = r.stderr_;
    d["seed"] = r.seed;
    d["config_hash"] = r.config_hash;
    rows.append(d);
  }
  return rows;
}

py::list verify_py(std::uint64_t seed, bool include_training_checks) {
  py::list out;
  for (const auto& r : isadre::run_verification(seed, include_training_checks)) {
    py::dict d;
    d["name"] = r.name;
    d["pass"] = r.pass;
    d["detail"] = r.detail;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Secant-based any-step density ratio estimation";

  py::class_<Model>(m, "Model")
      .def_static("load", &Model::load, py::arg("path"))
      .def_property_readonly("dim", &Model::dim)
      .def_property_readonly("is_secant", &Model::is_secant)
      .def_property_readonly("step", &Model::step)
      .def("forward", &Model::forward, py::arg("x"), py::arg("l"), py::arg("t"))
      .def("log_ratio", &Model::log_ratio, py::arg("x"), py::arg("nfe") = 1)
      .def("log_density", &Model::log_density, py::arg("x"), py::arg("nfe") = 1)
      .def("estimate_mi", &Model::estimate_mi, py::arg("samples"), py::arg("nfe") = 1);

  py::class_<Problem>(m, "Problem")
      .def(py::init<const py::object&>(), py::arg("spec"))
      .def_property_readonly("dim", &Problem::dim)
      .def_property_readonly("name", &Problem::name)
      .def_property_readonly("oracle_mi", &Problem::oracle_mi)
      .def_property_readonly("has_oracle_log_ratio", &Problem::has_oracle_log_ratio)
      .def("sample_p0",
           [](const Problem& p, int n, std::uint64_t seed) { return p.sample("p0", n, seed); },
           py::arg("n"), py::arg("seed") = 0)
      .def("sample_p1",
           [](const Problem& p, int n, std::uint64_t seed) { return p.sample("p1", n, seed); },
           py::arg("n"), py::arg("seed") = 0)
      .def("oracle_log_ratio", &Problem::oracle_log_ratio, py::arg("x"));

  m.def("run_train", &run_train_py, py::arg("config"), py::arg("out_dir") = "");
  m.def("run_eval", &run_eval_py, py::arg("config"), py::arg("checkpoint"),
        py::arg("out_dir") = "");
  m.def("verify", &verify_py, py::arg("seed") = 20240801,
        py::arg("include_training_checks") = false);
  m.def("preset_config",
        [](const std::string& name) { return py_from_json(to_json(isadre::preset_config(name))); },
        py::arg("name"));
  m.def("preset_names", &isadre::preset_names);

  py::register_exception<isadre::ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.attr("__version__") = "0.1.0";
}
