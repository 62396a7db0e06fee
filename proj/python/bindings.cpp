#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ratchet/bands.hpp"
#include "ratchet/classical.hpp"
#include "ratchet/quantum.hpp"
#include "ratchet/sweep.hpp"

namespace py = pybind11;
using namespace ratchet;

namespace {

py::object label_or_none(const ResonanceLabel& label) {
  if (!label.is_resonant()) return py::none();
  return py::make_tuple(label.r, label.s);
}

Grid grid_for(std::size_t m_max, double P, double alpha, std::size_t kicks) {
  return m_max > 0 ? Grid(m_max) : Grid::for_evolution(P, alpha, kicks);
}

py::dict series_dict(const CurrentSeries& series) {
  const auto n = static_cast<py::ssize_t>(series.size());
  py::array_t<long long> l(n);
  py::array_t<double> k(n), norm(n), energy(n);
  for (py::ssize_t i = 0; i < n; ++i) {
    l.mutable_at(i) = static_cast<long long>(series[i].l);
    k.mutable_at(i) = series[i].mean_k;
    norm.mutable_at(i) = series[i].norm;
    energy.mutable_at(i) = series[i].energy;
  }
  py::dict d;
  d["l"] = l;
  d["mean_k"] = k;
  d["norm"] = norm;
  d["energy"] = energy;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Delta-kicked quantum ratchet core";
  m.attr("__version__") = RATCHET_VERSION;

  py::register_exception<AliasingError>(m, "AliasingError", PyExc_RuntimeError);
  py::register_exception<CutoffError>(m, "CutoffError", PyExc_RuntimeError);

  m.def("classify_resonance", [](double hbar, long s_max, double tol) { return label_or_none(classify_resonance(hbar, s_max, tol)); },
        py::arg("hbar_eff"), py::arg("s_max") = kDefaultMaxDenominator, py::arg("tol") = kDefaultResonanceTolerance,
        "(r, s) with hbar_eff = 4 pi r / s, or None off resonance.");
  m.def("barrier_height", &barrier_height, py::arg("depth"), py::arg("alpha"));
  m.def("hbar_from_physical", &hbar_from_physical, py::arg("omega_R"), py::arg("T"));

  m.def(
      "evolve",
      [](double P, double alpha, double hbar_eff, std::size_t kicks, double beta, std::size_t m_max,
         std::size_t record_every) {
        const auto params = ModelParams::from_kick_phase(P, alpha, hbar_eff);
        CurrentSeries series;
        {
          py::gil_scoped_release release;
          series = evolve(params, grid_for(m_max, P, alpha, kicks), beta, kicks, record_every);
        }
        return series_dict(series);
      },
      py::arg("P"), py::arg("alpha"), py::arg("hbar_eff"), py::arg("kicks"), py::arg("beta") = 0.0,
      py::arg("m_max") = 0, py::arg("record_every") = 1,
      "Current series from the uniform state; m_max = 0 sizes the ladder automatically.");

  m.def(
      "acceleration_rate",
      [](double P, double alpha, double hbar_eff, std::size_t kicks, std::size_t m_max) {
        py::gil_scoped_release release;
        return acceleration_rate(ModelParams::from_kick_phase(P, alpha, hbar_eff), grid_for(m_max, P, alpha, kicks), 0.0,
                                 kicks);
      },
      py::arg("P"), py::arg("alpha"), py::arg("hbar_eff"), py::arg("kicks") = 100, py::arg("m_max") = 0);

  py::class_<ScanRow>(m, "ScanRow")
      .def_readonly("param", &ScanRow::param)
      .def_readonly("hbar_eff", &ScanRow::hbar_eff)
      .def_readonly("P", &ScanRow::P)
      .def_readonly("mean_k", &ScanRow::mean_k)
      .def_readonly("norm", &ScanRow::norm)
      .def_readonly("m_max", &ScanRow::m_max)
      .def_readonly("error", &ScanRow::error)
      .def_property_readonly("label", [](const ScanRow& r) { return label_or_none(r.label); })
      .def_property_readonly("ok", &ScanRow::ok);

  py::class_<ScanResult>(m, "ScanResult")
      .def_readonly("rows", &ScanResult::rows)
      .def_readonly("code_version", &ScanResult::code_version)
      .def_property_readonly("params", [](const ScanResult& r) {
        std::vector<double> v;
        for (const auto& row : r.rows) v.push_back(row.param);
        return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
      })
      .def_property_readonly("mean_k", [](const ScanResult& r) {
        std::vector<double> v;
        for (const auto& row : r.rows) v.push_back(row.mean_k);
        return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
      });

  py::class_<Peak>(m, "Peak")
      .def_readonly("row", &Peak::row)
      .def_readonly("param", &Peak::param)
      .def_readonly("mean_k", &Peak::mean_k)
      .def_readonly("prominence", &Peak::prominence)
      .def_property_readonly("label", [](const Peak& p) { return label_or_none(p.label); });

  m.def(
      "scan",
      [](const std::string& axis, std::vector<double> values, double alpha, double P, double hbar_over_pi,
         std::size_t kicks, std::size_t m_max, unsigned threads) {
        ScanSpec spec;
        if (axis == "hbar_over_pi") {
          spec.axis = ScanAxis::HbarOverPi;
        } else if (axis == "P") {
          spec.axis = ScanAxis::P;
        } else {
          throw std::invalid_argument("axis must be 'hbar_over_pi' or 'P'");
        }
        spec.values = std::move(values);
        spec.alpha = alpha;
        spec.P = P;
        spec.hbar_over_pi = hbar_over_pi;
        spec.l_max = kicks;
        spec.m_max = m_max;
        py::gil_scoped_release release;
        return scan(spec, threads);
      },
      py::arg("axis"), py::arg("values"), py::arg("alpha") = 0.3, py::arg("P") = 0.5, py::arg("hbar_over_pi") = 1.5,
      py::arg("kicks") = 200, py::arg("m_max") = 0, py::arg("threads") = 1);
  m.def("detect_peaks", &detect_peaks, py::arg("result"), py::arg("window") = kDefaultPeakWindow,
        py::arg("threshold_ratio") = kDefaultPeakThreshold);

  m.def(
      "map_step",
      [](double x, double p, double K, double alpha) {
        const ClassicalState s = map_step({x, p, std::nullopt}, K, alpha);
        return py::make_tuple(s.x, s.p);
      },
      py::arg("x"), py::arg("p"), py::arg("K"), py::arg("alpha"));
  m.def(
      "lyapunov",
      [](double x, double p, double K, double alpha, std::size_t n_steps) {
        return lyapunov({x, p, std::nullopt}, K, alpha, n_steps);
      },
      py::arg("x"), py::arg("p"), py::arg("K"), py::arg("alpha"), py::arg("n_steps") = 10000);
  m.def(
      "phase_portrait",
      [](double K, double alpha, std::size_t ic_per_side, std::size_t steps_per_ic, unsigned threads) {
        PhasePortrait portrait;
        {
          py::gil_scoped_release release;
          portrait = phase_portrait(K, alpha, ic_per_side, steps_per_ic, threads);
        }
        py::array_t<double> out({static_cast<py::ssize_t>(portrait.points.size()), py::ssize_t{2}});
        auto v = out.mutable_unchecked<2>();
        for (py::ssize_t i = 0; i < v.shape(0); ++i) {
          v(i, 0) = portrait.points[static_cast<std::size_t>(i)].x;
          v(i, 1) = portrait.points[static_cast<std::size_t>(i)].p;
        }
        return out;
      },
      py::arg("K"), py::arg("alpha"), py::arg("ic_per_side") = 16, py::arg("steps_per_ic") = 200, py::arg("threads") = 1,
      "(n, 2) array of (x, p mod 2 pi) points grouped by initial condition.");
  m.def(
      "chaos_fraction",
      [](double K, double alpha, std::size_t grid, std::size_t n_steps, unsigned threads) {
        ChaosOptions opts;
        opts.grid = grid;
        opts.n_steps = n_steps;
        py::gil_scoped_release release;
        return chaos_fraction(K, alpha, opts, threads);
      },
      py::arg("K"), py::arg("alpha"), py::arg("grid") = 64, py::arg("n_steps") = 10000, py::arg("threads") = 1);
  m.def(
      "find_chaos_threshold",
      [](double alpha, double K_lo, double K_hi, double target, std::size_t grid, std::size_t n_steps, unsigned threads) {
        ChaosOptions opts;
        opts.grid = grid;
        opts.n_steps = n_steps;
        ThresholdResult r;
        {
          py::gil_scoped_release release;
          r = find_chaos_threshold(alpha, K_lo, K_hi, target, opts, threads);
        }
        py::dict d;
        d["K_thr"] = r.K_thr;
        d["K_lo"] = r.K_lo;
        d["K_hi"] = r.K_hi;
        d["evaluations"] = r.evaluations;
        return d;
      },
      py::arg("alpha"), py::arg("K_lo"), py::arg("K_hi"), py::arg("target") = 0.99, py::arg("grid") = 64,
      py::arg("n_steps") = 10000, py::arg("threads") = 1);

  m.def(
      "bloch_eigenvalues",
      [](double depth, double alpha, double beta, std::size_t m_max) {
        const Eigen::VectorXd e = bloch_eigenvalues(depth, alpha, beta, m_max);
        return py::array_t<double>(e.size(), e.data());
      },
      py::arg("depth"), py::arg("alpha"), py::arg("beta"), py::arg("m_max") = kDefaultBandCutoff);
  m.def(
      "count_bands_below_barrier",
      [](double depth, double alpha, std::size_t m_max, std::size_t beta_samples) {
        return count_bands_below_barrier(depth, alpha, m_max, beta_samples).n_below;
      },
      py::arg("depth"), py::arg("alpha"), py::arg("m_max") = kDefaultBandCutoff,
      py::arg("beta_samples") = kDefaultBetaSamples);
  m.def(
      "fit_sqrt_scaling",
      [](std::vector<double> depths, double alpha, unsigned threads) {
        ScalingReport r;
        {
          py::gil_scoped_release release;
          r = fit_sqrt_scaling(depths, alpha, kDefaultBandCutoff, kDefaultBetaSamples, threads);
        }
        std::vector<std::size_t> counts;
        for (const auto& c : r.counts) counts.push_back(c.n_below);
        py::dict d;
        d["counts"] = counts;
        d["exponent"] = r.fit.exponent;
        d["prefactor"] = r.fit.prefactor;
        d["r_squared"] = r.fit.r_squared;
        return d;
      },
      py::arg("depths"), py::arg("alpha"), py::arg("threads") = 1);
}
