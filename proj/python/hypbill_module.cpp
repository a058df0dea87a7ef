// Thin bindings: polygons and reports cross the boundary as JSON text.

#include "hypbill/io.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace hypb;

namespace {

LabeledPolygon poly_of(const std::string& text) { return polygon_from_json(Json::parse(text)); }

}  // namespace

PYBIND11_MODULE(_hypbill, m) {
  m.doc() = "Hyperbolic polygonal billiards";
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  m.def("regular", [](int n, long p, long q) { return polygon_to_json(build_regular(n, RationalAngle::fraction(p, q))).dump(); },
        py::arg("n"), py::arg("p"), py::arg("q"));
  m.def("area", [](const std::string& poly) { return area(poly_of(poly)); });
  m.def(
      "simulate",
      [](const std::string& poly, double u, double v, double theta, int bounces) {
        return trajectory_to_json(simulate_angle(poly_of(poly), HPoint::from_klein(Vec2(u, v)), theta, bounces)).dump();
      },
      py::arg("polygon"), py::arg("u"), py::arg("v"), py::arg("theta"), py::arg("bounces"));
  m.def("realize", [](const std::string& poly, const std::string& word) {
    return realizability_to_json(realizable(poly_of(poly), parse_word(word))).dump();
  });
  m.def("classify", [](const std::string& poly) { return verdict_to_json(classify(poly_of(poly))).dump(); });
  m.def(
      "compare",
      [](const std::string& p1, const std::string& p2, int samples, int length, std::uint64_t seed) {
        CompareConfig cfg;
        cfg.samples = samples;
        cfg.word_len = length;
        cfg.seed = seed;
        py::gil_scoped_release release;
        return comparison_to_json(compare(poly_of(p1), poly_of(p2), cfg)).dump();
      },
      py::arg("p1"), py::arg("p2"), py::arg("samples") = 200, py::arg("length") = 40, py::arg("seed") = 1);
  m.def("orbifold_area", [](int genus, std::vector<int> orders) { return orbifold_area({genus, std::move(orders)}); });
  m.def("bound_check", [](const std::string& cover) { return bound_to_json(bound_check(cover_from_json(Json::parse(cover)))).dump(); });
}
