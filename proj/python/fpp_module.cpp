#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fpp/harness.hpp"

namespace py = pybind11;
using namespace fpp;

namespace {

Vertex to_vertex(const std::vector<int32_t>& coords) {
  if (coords.size() < 2 || coords.size() > kMaxDim)
    throw std::invalid_argument("vertex needs 2..4 coordinates");
  Vertex v = Vertex::zero(int(coords.size()));
  for (size_t i = 0; i < coords.size(); ++i) v.c[int(i)] = coords[i];
  return v;
}

std::vector<int32_t> from_vertex(const Vertex& v) {
  return std::vector<int32_t>(v.c.begin(), v.c.begin() + v.dim);
}

}  // namespace

PYBIND11_MODULE(fpp_py, m) {
  m.doc() = "first-passage percolation growth, hole statistics, and proof gadgets";

  py::class_<WeightDistribution>(m, "WeightDistribution")
      .def_static("constant", &WeightDistribution::constant, py::arg("c"))
      .def_static("two_point", &WeightDistribution::two_point, py::arg("a"), py::arg("b"),
                  py::arg("p_a"))
      .def_static("uniform", &WeightDistribution::uniform, py::arg("lo"), py::arg("hi"))
      .def_static("exponential", &WeightDistribution::exponential, py::arg("rate"))
      .def_static("shifted_exponential", &WeightDistribution::shifted_exponential,
                  py::arg("shift"), py::arg("rate"))
      .def("cdf", &WeightDistribution::cdf)
      .def("mean", &WeightDistribution::mean)
      .def("__repr__", &WeightDistribution::describe);

  py::class_<WeightField>(m, "WeightField")
      .def(py::init<int, WeightDistribution, uint64_t>(), py::arg("dim"), py::arg("distribution"),
           py::arg("seed"))
      .def("weight",
           [](const WeightField& f, const std::vector<int32_t>& u, const std::vector<int32_t>& v) {
             return f.weight(Edge::between(to_vertex(u), to_vertex(v)));
           })
      .def("with_overrides",
           [](const WeightField& f,
              const std::vector<std::tuple<std::vector<int32_t>, std::vector<int32_t>, double>>&
                  patch) {
             std::vector<std::pair<Edge, double>> edges;
             for (const auto& [u, v, w] : patch)
               edges.emplace_back(Edge::between(to_vertex(u), to_vertex(v)), w);
             return f.with_overrides(edges);
           })
      .def_property_readonly("dim", &WeightField::dim)
      .def_property_readonly("seed", &WeightField::seed);

  py::class_<Ball>(m, "Ball")
      .def(py::init([](const WeightField& f, const std::vector<int32_t>& source,
                       uint64_t max_vertices) {
             return Ball(f, to_vertex(source), GrowthLimits{max_vertices});
           }),
           py::arg("field"), py::arg("source"), py::arg("max_vertices") = 60000000)
      .def("grow_to", &Ball::grow_to, py::arg("t"))
      .def("passage_time",
           [](Ball& b, const std::vector<int32_t>& x) { return b.passage_time(to_vertex(x)); })
      .def("settled",
           [](const Ball& b, const std::vector<int32_t>& x) { return b.settled(to_vertex(x)); })
      .def("__len__", &Ball::size)
      .def_property_readonly("horizon", &Ball::horizon)
      .def("vertices",
           [](const Ball& b) {
             std::vector<std::vector<int32_t>> out;
             for (const Vertex& v : b.vertices()) out.push_back(from_vertex(v));
             return out;
           })
      .def("geodesic", [](const Ball& b, const std::vector<int32_t>& x) {
        Geodesic g = b.extract_geodesic(to_vertex(x));
        std::vector<std::vector<int32_t>> path;
        for (const Vertex& v : g.vertices) path.push_back(from_vertex(v));
        return py::make_tuple(path, g.total_time);
      });

  py::class_<Hole>(m, "Hole")
      .def_readonly("volume", &Hole::volume)
      .def_readonly("radial_diameter", &Hole::radial_diameter)
      .def_readonly("lateral_diameter", &Hole::lateral_diameter)
      .def_property_readonly("vertices", [](const Hole& h) {
        std::vector<std::vector<int32_t>> out;
        for (const Vertex& v : h.vertices) out.push_back(from_vertex(v));
        return out;
      });

  py::class_<HoleReport>(m, "HoleReport")
      .def_readonly("N", &HoleReport::N)
      .def_readonly("M", &HoleReport::M)
      .def_readonly("edge_boundary_size", &HoleReport::edge_boundary_size)
      .def_readonly("holes", &HoleReport::holes);

  m.def("detect_holes", [](const Ball& b) { return detect_holes(b); });
  m.def("edge_boundary", [](const Ball& b) { return edge_boundary(b); });

  py::class_<BarrelSpec>(m, "BarrelSpec")
      .def_static("make", &BarrelSpec::make, py::arg("n"), py::arg("a"), py::arg("b"),
                  py::arg("eps"))
      .def_static("make_relaxed", &BarrelSpec::make_relaxed, py::arg("n"), py::arg("a"),
                  py::arg("b"), py::arg("eps"))
      .def_readonly("n", &BarrelSpec::n)
      .def_readonly("m1", &BarrelSpec::m1)
      .def_readonly("m2", &BarrelSpec::m2)
      .def_readonly("m3", &BarrelSpec::m3)
      .def_readonly("L", &BarrelSpec::L)
      .def_readonly("chain_ok", &BarrelSpec::chain_ok)
      .def("kappa", &BarrelSpec::kappa);

  py::enum_<BandMode>(m, "BandMode")
      .value("min_extremal", BandMode::min_extremal)
      .value("max_extremal", BandMode::max_extremal)
      .value("sampled", BandMode::sampled);

  py::class_<BarrelReport>(m, "BarrelReport")
      .def_readonly("upper_ok", &BarrelReport::upper_ok)
      .def_readonly("lower_ok", &BarrelReport::lower_ok)
      .def_readonly("upper_margin", &BarrelReport::upper_margin)
      .def_readonly("lower_margin", &BarrelReport::lower_margin);

  m.def("verify_barrel", &verify_barrel, py::arg("spec"), py::arg("dim"), py::arg("mode"),
        py::arg("sample_seed") = 0);

  py::class_<GoodVertexCertificate>(m, "GoodVertexCertificate")
      .def_property_readonly("x", [](const GoodVertexCertificate& c) { return from_vertex(c.x); })
      .def_readonly("n", &GoodVertexCertificate::n)
      .def_readonly("b_prime", &GoodVertexCertificate::b_prime);

  py::class_<ScanResult>(m, "ScanResult")
      .def_readonly("certificates", &ScanResult::certificates)
      .def_readonly("density_ratio", &ScanResult::density_ratio)
      .def_readonly("ball_volume", &ScanResult::ball_volume);

  m.def("scan_good_vertices", &scan_good_vertices, py::arg("ball"), py::arg("b_prime"),
        py::arg("n"), py::arg("window_inflation") = 1);

  py::class_<PlantLog>(m, "PlantLog").def(py::init<>());

  py::class_<PlantReport>(m, "PlantReport")
      .def_readonly("hole_formed", &PlantReport::hole_formed)
      .def_readonly("window_lo", &PlantReport::window_lo)
      .def_readonly("window_hi", &PlantReport::window_hi)
      .def_readonly("s_values", &PlantReport::s_values)
      .def_readonly("formed_at_s", &PlantReport::formed_at_s)
      .def_readonly("component_sizes", &PlantReport::component_sizes);

  m.def("plant_and_verify_hole", &plant_and_verify_hole, py::arg("ball"), py::arg("cert"),
        py::arg("spec"), py::arg("mode"), py::arg("log"), py::arg("sample_seed") = 0);

  py::class_<SectorSpec>(m, "SectorSpec")
      .def_readonly("J", &SectorSpec::J)
      .def_readonly("K", &SectorSpec::K);

  m.def("sector",
        [](const std::vector<int32_t>& x0, double C18) { return sector(to_vertex(x0), C18); });
  m.def("sector_contains", [](const SectorSpec& s, const std::vector<int32_t>& v) {
    return sector_contains(s, to_vertex(v));
  });
  m.def("sector_volume", &sector_volume);

  py::class_<SectorTestReport>(m, "SectorTestReport")
      .def_readonly("has_hole", &SectorTestReport::has_hole)
      .def_readonly("contained", &SectorTestReport::contained)
      .def_readonly("hole_volume", &SectorTestReport::hole_volume);

  m.def("largest_hole_sector_test",
        [](const HoleReport& holes, double C18) { return largest_hole_sector_test(holes, C18); });

  m.def("snapshot_save", &snapshot_save, py::arg("ball"), py::arg("path"));
  m.def("snapshot_load", &snapshot_load, py::arg("path"));

  m.attr("__version__") = kVersionTag;
}
