#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qcluster/harness.hpp"

namespace py = pybind11;
using namespace qcluster;

namespace {

PointSet to_points(const std::vector<std::pair<double, double>>& xy) {
  std::vector<Point> pts;
  for (const auto& [x, y] : xy) pts.push_back({x, y});
  return PointSet(std::move(pts));
}

std::vector<std::pair<double, double>> from_points(const PointSet& ps) {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : ps.points()) out.emplace_back(p.x, p.y);
  return out;
}

py::dict result_dict(const RunResult& r) {
  py::dict d;
  d["top_partition"] = r.top_partition ? py::cast(r.top_partition->blocks()) : py::none();
  d["top_probability"] = r.top_probability;
  d["annealed_cost"] = r.annealed_cost;
  d["oracle_min_cost"] = r.oracle_min_cost;
  std::vector<std::vector<std::vector<int>>> oracle;
  for (const auto& p : r.oracle_partitions) oracle.push_back(p.blocks());
  d["oracle_partitions"] = oracle;
  d["match"] = r.match;
  d["invalid_probability"] = r.invalid_probability;
  d["final_norm"] = r.final_norm;
  d["wall_seconds"] = r.wall_seconds;
  d["qutrits"] = r.qutrits;
  d["probabilities"] = r.readout.basis_probabilities;
  return d;
}

RunResult run_with_mode(ProblemSpec spec, const std::string& mode) {
  if (mode == "split")
    spec.anneal.mode = StepMode::split;
  else if (mode != "exact")
    throw std::invalid_argument("mode must be 'exact' or 'split'");
  py::gil_scoped_release release;
  return run(spec);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Qutrit adiabatic annealing for 2-D clustering";
  py::register_exception<SizeLimitError>(m, "SizeLimitError", PyExc_ValueError);
  py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);

  m.attr("MAX_QUTRITS") = kMaxQutrits;

  m.def("distance_matrix", [](const std::vector<std::pair<double, double>>& points) {
    const auto dm = distance_matrix(to_points(points));
    std::vector<std::vector<double>> rows(dm.size(), std::vector<double>(dm.size()));
    for (std::size_t i = 0; i < dm.size(); ++i)
      for (std::size_t j = 0; j < dm.size(); ++j) rows[i][j] = dm(i, j);
    return rows;
  }, py::arg("points"));

  m.def("cost", [](const std::vector<std::pair<double, double>>& points, const std::vector<int>& labels) {
    const int k = labels.empty() ? 1 : *std::max_element(labels.begin(), labels.end()) + 1;
    return cost(distance_matrix(to_points(points)), Partition(labels, k));
  }, py::arg("points"), py::arg("labels"), "Sum of intra-cluster pairwise distances.");

  m.def("oracle_min", [](const std::vector<std::pair<double, double>>& points, int clusters,
                         const std::map<int, int>& fixed) {
    const auto r = oracle_min(distance_matrix(to_points(points)), clusters, fixed);
    std::vector<std::vector<std::vector<int>>> parts;
    for (const auto& p : r.argmin_partitions) parts.push_back(p.blocks());
    return py::make_tuple(r.min_cost, parts);
  }, py::arg("points"), py::arg("clusters"), py::arg("fixed") = std::map<int, int>{},
     "Exhaustive minimum cost and every minimizing partition (as index blocks).");

  m.def("problem_hamiltonian", [](const std::string& spec_json) {
    const auto spec = parse_spec(spec_json, "<python>");
    const auto h = build_problem_hamiltonian(distance_matrix(spec.points), spec.scheme, spec.centroids);
    return std::vector<double>(h.values().begin(), h.values().end());
  }, py::arg("spec_json"), "Diagonal of the problem Hamiltonian (penalties included) for a spec.");

  m.def("argmin_states", [](const std::vector<double>& diagonal, int qutrits) {
    return oracle_diag_min(DiagonalHamiltonian(qutrits, diagonal)).argmin_basis_states;
  }, py::arg("diagonal"), py::arg("qutrits"));

  m.def("anneal", [](const std::vector<double>& diagonal, int qutrits, int steps, double dt, double field,
                     const std::string& mode) {
    AnnealConfig cfg{steps, dt, field, mode == "split" ? StepMode::split : StepMode::exact};
    if (mode != "split" && mode != "exact") throw std::invalid_argument("mode must be 'exact' or 'split'");
    const DiagonalHamiltonian hf(qutrits, diagonal);
    StateVector psi;
    {
      py::gil_scoped_release release;
      psi = anneal(cfg, hf);
    }
    return std::vector<Complex>(psi.amplitudes().begin(), psi.amplitudes().end());
  }, py::arg("diagonal"), py::arg("qutrits"), py::arg("steps") = 2000, py::arg("dt") = 0.1,
     py::arg("field") = 8.0, py::arg("mode") = "exact", "Final amplitudes of the stepped anneal.");

  m.def("basis_digits", [](std::size_t index, int qutrits) { return basis_digits(index, qutrits); },
        py::arg("index"), py::arg("qutrits"), "Spin projections of a basis index, site 0 first.");

  m.def("generate_instance", [](int n, std::uint64_t seed) { return from_points(generate_instance(n, seed)); },
        py::arg("n_points"), py::arg("seed"));

  m.def("preset_names", &preset_names);
  m.def("preset_spec", [](const std::string& name) { return spec_to_json(preset(name)); }, py::arg("name"),
        "Preset as spec JSON text.");

  m.def("run_preset", [](const std::string& name, const std::string& mode) {
    return result_dict(run_with_mode(preset(name), mode));
  }, py::arg("name"), py::arg("mode") = "exact");

  m.def("run_spec", [](const std::string& spec_json, const std::string& mode) {
    return result_dict(run_with_mode(parse_spec(spec_json, "<python>"), mode));
  }, py::arg("spec_json"), py::arg("mode") = "exact");
}
