#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wavesrc/band.hpp"
#include "wavesrc/forward.hpp"
#include "wavesrc/gmig.hpp"
#include "wavesrc/recover.hpp"
#include "wavesrc/runner.hpp"

namespace py = pybind11;
using namespace wavesrc;

namespace {

waves::WaveKind make_kind(const std::string& name, double lame_lambda,
                          double lame_mu) {
  const auto model = waves::model_from_name(name);
  if (model == waves::Model::Elastic)
    return waves::WaveKind::elastic(lame_lambda, lame_mu);
  waves::WaveKind k;
  k.model = model;
  return k;
}

Point as_point(const std::vector<double>& v) {
  if (v.size() != 2 && v.size() != 3)
    throw ConfigError("direction/point needs 2 or 3 components");
  Point p{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i];
  return p;
}

py::array_t<cdouble> field_values(const gmig::FieldRealization& f) {
  const auto nodes = static_cast<py::ssize_t>(f.grid.node_count());
  py::array_t<cdouble> out({nodes, static_cast<py::ssize_t>(f.ncomp)});
  std::copy(f.values.begin(), f.values.end(), out.mutable_data());
  return out;
}

} // namespace

PYBIND11_MODULE(_wavesrc, m) {
  m.doc() = "random-source wave toolkit: sampling, far fields, band recovery";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<Grid>(m, "Grid")
      .def(py::init<int, int, double>(), py::arg("d"), py::arg("n"),
           py::arg("length"))
      .def_readonly("d", &Grid::d)
      .def_readonly("n", &Grid::n)
      .def_readonly("length", &Grid::length)
      .def_property_readonly("spacing", &Grid::spacing)
      .def_property_readonly("nyquist", &Grid::nyquist)
      .def_property_readonly("node_count", &Grid::node_count)
      .def("nodes", [](const Grid& g) {
        py::array_t<double> out({static_cast<py::ssize_t>(g.node_count()),
                                 static_cast<py::ssize_t>(g.d)});
        auto* p = out.mutable_data();
        for (std::size_t i = 0; i < g.node_count(); ++i) {
          const auto x = g.node(i);
          for (int a = 0; a < g.d; ++a) *p++ = x[a];
        }
        return out;
      })
      .def("__repr__", [](const Grid& g) {
        return "Grid(d=" + std::to_string(g.d) + ", n=" + std::to_string(g.n) +
               ", length=" + std::to_string(g.length) + ")";
      });

  py::class_<gmig::ScalarStrengthPair>(m, "ScalarStrengths")
      .def(py::init([](const Grid& grid, double order_m,
                       py::array_t<double, py::array::c_style | py::array::forcecast> a_c,
                       py::array_t<cdouble, py::array::c_style | py::array::forcecast> a_r) {
             gmig::ScalarStrengthPair s;
             s.grid = grid;
             s.order_m = order_m;
             if (static_cast<std::size_t>(a_c.size()) != grid.node_count() ||
                 static_cast<std::size_t>(a_r.size()) != grid.node_count())
               throw ConfigError("strength arrays must have one entry per node");
             s.a_c.assign(a_c.data(), a_c.data() + a_c.size());
             s.a_r.assign(a_r.data(), a_r.data() + a_r.size());
             return s;
           }),
           py::arg("grid"), py::arg("order_m"), py::arg("a_c"), py::arg("a_r"))
      .def_readonly("grid", &gmig::ScalarStrengthPair::grid)
      .def_readonly("order_m", &gmig::ScalarStrengthPair::order_m)
      .def("validate", [](const gmig::ScalarStrengthPair& s) {
        const auto r = gmig::validate_strengths(s);
        return py::dict(py::arg("pass") = r.pass,
                        py::arg("min_margin") = r.min_margin,
                        py::arg("failure") = r.failure);
      });

  py::class_<gmig::MatrixStrengthPair>(m, "MatrixStrengths")
      .def(py::init([](const Grid& grid, double order_m,
                       py::array_t<cdouble, py::array::c_style | py::array::forcecast> a_c,
                       py::array_t<cdouble, py::array::c_style | py::array::forcecast> a_r) {
             gmig::MatrixStrengthPair s;
             s.grid = grid;
             s.order_m = order_m;
             const auto need = grid.node_count() * grid.d * grid.d;
             if (static_cast<std::size_t>(a_c.size()) != need ||
                 static_cast<std::size_t>(a_r.size()) != need)
               throw ConfigError("strength arrays must be (nodes, d, d)");
             s.a_c.assign(a_c.data(), a_c.data() + a_c.size());
             s.a_r.assign(a_r.data(), a_r.data() + a_r.size());
             return s;
           }),
           py::arg("grid"), py::arg("order_m"), py::arg("a_c"), py::arg("a_r"))
      .def_readonly("grid", &gmig::MatrixStrengthPair::grid)
      .def("validate", [](const gmig::MatrixStrengthPair& s) {
        const auto r = gmig::validate_strengths(s);
        return py::dict(py::arg("pass") = r.pass,
                        py::arg("min_margin") = r.min_margin,
                        py::arg("failure") = r.failure);
      });

  py::class_<gmig::FieldRealization>(m, "FieldRealization")
      .def_readonly("grid", &gmig::FieldRealization::grid)
      .def_readonly("ncomp", &gmig::FieldRealization::ncomp)
      .def_readonly("order_m", &gmig::FieldRealization::order_m)
      .def_readonly("delta", &gmig::FieldRealization::delta)
      .def_readonly("seed", &gmig::FieldRealization::seed)
      .def_property_readonly("values", &field_values);

  m.def("default_delta", &gmig::default_delta, py::arg("grid"));
  m.def(
      "sample_scalar",
      [](const gmig::ScalarStrengthPair& s, double delta, std::uint64_t seed) {
        return gmig::sample_scalar_gmig(s, delta, seed);
      },
      py::arg("strengths"), py::arg("delta"), py::arg("seed"));
  m.def(
      "sample_vector",
      [](const gmig::MatrixStrengthPair& s, double delta, std::uint64_t seed) {
        return gmig::sample_vector_gmig(s, delta, seed);
      },
      py::arg("strengths"), py::arg("delta"), py::arg("seed"));

  m.def(
      "farfield",
      [](const std::string& kind, const gmig::FieldRealization& f,
         const std::vector<double>& xhat, double frequency, double lame_lambda,
         double lame_mu) {
        const auto rec = forward::farfield(make_kind(kind, lame_lambda, lame_mu),
                                           f, as_point(xhat), frequency);
        return py::make_tuple(rec.value, rec.secondary);
      },
      py::arg("kind"), py::arg("field"), py::arg("xhat"), py::arg("frequency"),
      py::arg("lame_lambda") = 0.0, py::arg("lame_mu") = 1.0,
      "Far-field pattern; returns (value, secondary) with secondary empty "
      "except for the elastic shear part.");

  m.def(
      "band_average",
      [](const std::string& kind, const std::string& target, double order_m,
         const std::vector<double>& xhat, double shift, double q, double step,
         const gmig::FieldRealization& field, double lame_lambda,
         double lame_mu) {
        band::EstimatorConfig cfg;
        cfg.kind = make_kind(kind, lame_lambda, lame_mu);
        cfg.target = band::target_from_name(target);
        cfg.d = field.grid.d;
        cfg.order_m = order_m;
        cfg.xhat = as_point(xhat);
        cfg.shift = shift;
        cfg.band = forward::FrequencyBand(q, step);
        const auto res = band::band_average(cfg, field);
        return py::make_tuple(res.estimate, res.jackknife_se);
      },
      py::arg("kind"), py::arg("target"), py::arg("order_m"), py::arg("xhat"),
      py::arg("shift"), py::arg("q"), py::arg("step"), py::arg("field"),
      py::arg("lame_lambda") = 0.0, py::arg("lame_mu") = 1.0,
      "Frequency-band ergodic average over [Q, 2Q]; returns (estimate, "
      "jackknife_se).");

  m.def(
      "normalization_constant",
      [](const std::string& kind, int d, const std::string& target,
         double lame_lambda, double lame_mu) {
        return recover::normalization_constant(
            make_kind(kind, lame_lambda, lame_mu), d,
            band::target_from_name(target));
      },
      py::arg("kind"), py::arg("d"), py::arg("target"),
      py::arg("lame_lambda") = 0.0, py::arg("lame_mu") = 1.0);

  m.def(
      "invert_polar_fourier",
      [](const std::string& target, int d,
         const std::vector<std::vector<double>>& directions,
         const std::vector<double>& shifts,
         const std::vector<Eigen::MatrixXcd>& values, const Grid& grid,
         bool window) {
        recover::PolarFourierData data;
        data.target = band::target_from_name(target);
        data.d = d;
        data.dim = values.empty() ? 1 : static_cast<int>(values.front().rows());
        for (const auto& v : directions) data.directions.push_back(as_point(v));
        data.shifts = shifts;
        data.values = values;
        const auto rec = recover::invert_polar_fourier(data, grid, window);
        const auto nodes = static_cast<py::ssize_t>(grid.node_count());
        const auto dim = static_cast<py::ssize_t>(rec.dim);
        py::array_t<cdouble> out({nodes, dim, dim});
        std::copy(rec.values.begin(), rec.values.end(), out.mutable_data());
        return py::make_tuple(out, rec.symmetrization_residual);
      },
      py::arg("target"), py::arg("d"), py::arg("directions"), py::arg("shifts"),
      py::arg("values"), py::arg("grid"), py::arg("window") = true,
      "Windowed polar Fourier synthesis of normalized estimates; values are "
      "shift-major (shift * ndir + dir). Returns (strength array, "
      "symmetrization residual).");

  m.def(
      "circle_directions",
      [](int count) {
        std::vector<std::vector<double>> out;
        for (const auto& x : forward::DirectionSet::circle(count).directions)
          out.push_back({x[0], x[1]});
        return out;
      },
      py::arg("count"));
  m.def(
      "sphere_directions",
      [](int pairs) {
        std::vector<std::vector<double>> out;
        for (const auto& x : forward::DirectionSet::sphere_pairs(pairs).directions)
          out.push_back({x[0], x[1], x[2]});
        return out;
      },
      py::arg("pairs"));

  m.def(
      "validate_config",
      [](const std::string& json_text) {
        runner::validate_config(runner::parse_config(json_text));
      },
      py::arg("json_text"),
      "Parses and validates an experiment config; raises ConfigError.");
  m.def(
      "run_config",
      [](const std::string& json_text, const std::string& stage_from,
         int threads) {
        runner::apply_threads(threads);
        auto cfg = runner::parse_config(json_text);
        const auto manifest = runner::run(cfg, stage_from);
        if (!manifest.error.empty())
          throw NumericalError("pipeline failed: " + manifest.error);
        return manifest.to_json();
      },
      py::arg("json_text"), py::arg("stage_from") = "", py::arg("threads") = 0,
      "Runs the full pipeline described by a JSON config; returns the run "
      "manifest as JSON.");
}
