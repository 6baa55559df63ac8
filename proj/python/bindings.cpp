#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <polyprop/collision.hpp>
#include <polyprop/errors.hpp>
#include <polyprop/paths.hpp>
#include <polyprop/propagator.hpp>
#include <polyprop/runner.hpp>
#include <polyprop/scenario.hpp>

#include <sstream>

namespace py = pybind11;
using namespace polyprop;

namespace {

py::dict profile_dict(const IntensityProfile& p) {
  py::dict d;
  d["coordinate"] = py::array_t<double>(p.coordinate.size(), p.coordinate.data());
  d["intensity"] = py::array_t<double>(p.intensity.size(), p.intensity.data());
  d["n_paths"] = py::array_t<int>(p.n_paths.size(), p.n_paths.data());
  std::vector<std::uint8_t> shadow(p.shadow.begin(), p.shadow.end());
  d["shadow"] = py::array_t<std::uint8_t>(shadow.size(), shadow.data()).attr("astype")("bool");
  return d;
}

IntensityProfile profile_from(py::dict d) {
  IntensityProfile p;
  p.intensity = d["intensity"].cast<std::vector<double>>();
  if (d.contains("coordinate")) p.coordinate = d["coordinate"].cast<std::vector<double>>();
  p.n_paths.assign(p.size(), 0);
  p.shadow.assign(p.size(), false);
  return p;
}

py::dict report_dict(const SimilarityReport& r) {
  py::dict d;
  d["correlation"] = r.correlation;
  d["max_abs_deviation"] = r.max_abs_deviation;
  d["maxima_a"] = r.maxima_a;
  d["maxima_b"] = r.maxima_b;
  d["minima_a"] = r.minima_a;
  d["minima_b"] = r.minima_b;
  d["maxima_offsets"] = r.maxima_offsets;
  d["minima_offsets"] = r.minima_offsets;
  d["max_maxima_offset"] = r.max_maxima_offset;
  d["window"] = py::make_tuple(r.first_bin, r.last_bin);
  return d;
}

py::dict path_dict(const PolygonalPath& p) {
  py::dict d;
  d["vertices"] = p.vertices;
  d["corner_ids"] = p.corner_ids;
  d["segment_times"] = p.segment_times;
  d["length"] = p.length;
  d["action"] = p.action;
  return d;
}

}  // namespace

PYBIND11_MODULE(_polyprop, m) {
  m.doc() = "Polygonal-path propagator for a particle among rigid walls";

  auto validation = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  (void)validation;

  py::class_<Scenario>(m, "Scenario")
      .def_property_readonly("mass", [](const Scenario& s) { return s.constants.mass; })
      .def_property_readonly("hbar", [](const Scenario& s) { return s.constants.hbar; })
      .def_property_readonly("time", [](const Scenario& s) { return s.constants.T; })
      .def_property_readonly("source", [](const Scenario& s) { return s.source; })
      .def_property_readonly("velocity", [](const Scenario& s) { return s.velocity; })
      .def_property_readonly("n_walls", [](const Scenario& s) { return s.walls.size(); })
      .def_property_readonly("n_bins", [](const Scenario& s) { return s.screen.n_bins; })
      .def_property_readonly("corners",
                             [](const Scenario& s) {
                               std::vector<Vec2> out;
                               for (const auto& c : s.constraints().corners()) out.push_back(c.position);
                               return out;
                             })
      .def("bin_center", [](const Scenario& s, int i) { return s.screen.bin_center(i); })
      .def(
          "with_options",
          [](const Scenario& s, std::optional<int> bins, std::optional<int> max_corners, std::optional<int> fan,
             std::optional<int> grid, std::optional<int> slices, std::optional<std::string> out) {
            RunFlags f;
            f.bins = bins;
            f.max_corners = max_corners;
            f.fan = fan;
            f.grid = grid;
            f.slices = slices;
            f.out = out;
            return apply_flags(s, f);
          },
          py::kw_only(), py::arg("bins") = py::none(), py::arg("max_corners") = py::none(),
          py::arg("fan") = py::none(), py::arg("grid") = py::none(), py::arg("slices") = py::none(),
          py::arg("out") = py::none())
      .def("emit", &emit_scenario)
      .def("__eq__", [](const Scenario& a, const Scenario& b) { return a == b; });

  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("parse_scenario", [](const std::string& text) { return parse_scenario(text); }, py::arg("text"));

  m.def(
      "free_kernel",
      [](std::vector<double> q0, std::vector<double> q, double dt, double mass, double hbar) {
        if (q0.size() != q.size()) throw ValidationError("free_kernel: q0 and q differ in dimension");
        PhysicalConstants pc;
        pc.mass = mass;
        pc.hbar = hbar;
        return free_kernel(pc, q0, q, dt);
      },
      py::arg("q0"), py::arg("q"), py::arg("dt"), py::arg("mass") = 1.0, py::arg("hbar") = 1.0);

  m.def(
      "enumerate_paths",
      [](const Scenario& s, const Vec2& dst, std::optional<int> max_corners) {
        py::list out;
        for (const auto& p : enumerate_paths(s.constraints(), s.source, dst, max_corners.value_or(s.run.max_corners)))
          out.append(path_dict(allocate_times(p, s.constants.T, s.constants.mass)));
        return out;
      },
      py::arg("scenario"), py::arg("dst"), py::arg("max_corners") = py::none());

  m.def("polygon_profile", [](const Scenario& s) { return profile_dict(polygon_profile(s)); }, py::arg("scenario"));
  m.def(
      "oracle_profile",
      [](const Scenario& s) {
        std::vector<std::string> warnings;
        IntensityProfile p;
        {
          py::gil_scoped_release release;
          p = oracle_profile(s, &warnings);
        }
        py::dict d = profile_dict(p);
        d["warnings"] = warnings;
        return d;
      },
      py::arg("scenario"));

  m.def(
      "compare",
      [](py::dict reference, py::dict other, int n_fringes) {
        return report_dict(compare_central_fringes(profile_from(reference), profile_from(other), n_fringes));
      },
      py::arg("reference"), py::arg("other"), py::arg("n_fringes") = 5);

  m.def(
      "simulate",
      [](const Scenario& s) {
        ParticleState s0;
        s0.q = s.source;
        s0.v = s.velocity;
        const auto res = simulate(s.constraints(), s0, s.constants.T, s.run.restitution, s.run.fan_size,
                                  s.run.max_branches, s.constants.mass);
        py::list out;
        for (const auto& tr : res.trajectories) {
          py::list points;
          for (const auto& p : tr.points)
            points.append(py::make_tuple(p.state.t, p.state.q, p.state.v, to_string(p.flag)));
          py::dict d;
          d["branch_id"] = tr.branch_id;
          d["points"] = points;
          d["error"] = tr.error;
          out.append(d);
        }
        return py::make_tuple(out, res.truncated);
      },
      py::arg("scenario"));

  m.def(
      "run",
      [](const std::string& subcommand, const Scenario& s, const std::string& name) {
        std::ostringstream log;
        RunSummary summary;
        {
          py::gil_scoped_release release;
          summary = run(subcommand, s, name, log);
        }
        py::dict d;
        d["artifacts"] = summary.artifacts;
        d["log"] = log.str();
        d["report"] = summary.report ? py::object(report_dict(*summary.report)) : py::none();
        return d;
      },
      py::arg("subcommand"), py::arg("scenario"), py::arg("name") = "scenario");
}
