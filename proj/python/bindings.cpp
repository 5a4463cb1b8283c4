#include "fraclap/continuum.hpp"
#include "fraclap/error.hpp"
#include "fraclap/graph.hpp"
#include "fraclap/harness.hpp"
#include "fraclap/spectral.hpp"
#include "fraclap/ssl.hpp"
#include "fraclap/tlp.hpp"
#include "fraclap/torus.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace fraclap;

namespace {

using Points = py::array_t<double, py::array::c_style | py::array::forcecast>;

SampleSet to_samples(const Points& pts) {
    if (pts.ndim() == 1) {
        return SampleSet(1, std::vector<double>(pts.data(), pts.data() + pts.size()));
    }
    if (pts.ndim() != 2) {
        throw InvalidArgument("points must be a 1-d or (n, d) array");
    }
    return SampleSet(static_cast<std::size_t>(pts.shape(1)),
                     std::vector<double>(pts.data(), pts.data() + pts.size()));
}

py::array_t<double> to_array(const SampleSet& s) {
    py::array_t<double> out({s.size(), s.dim()});
    std::copy(s.flat().begin(), s.flat().end(), out.mutable_data());
    return out;
}

ConstraintSet to_constraints(const std::vector<std::pair<std::size_t, double>>& labels) {
    std::vector<Constraint> entries;
    for (const auto& [node, label] : labels) {
        entries.push_back({node, label});
    }
    return ConstraintSet(std::move(entries));
}

SpectrumVariant to_variant(const std::string& name) {
    if (name == "fd") {
        return SpectrumVariant::FiniteDifference;
    }
    if (name == "analytic") {
        return SpectrumVariant::Analytic;
    }
    throw InvalidArgument("variant must be 'fd' or 'analytic'");
}

}  // namespace

PYBIND11_MODULE(_fraclap, m) {
    m.doc() = "Fractional graph Laplacian regression on the flat torus";
    m.attr("__version__") = FRACLAP_VERSION;

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    m.def("torus_distance",
          [](const std::vector<double>& x, const std::vector<double>& y) { return torus_distance(x, y); });
    m.def("sample_uniform", [](std::size_t n, std::size_t d, std::uint64_t seed) {
        return to_array(sample_uniform(n, d, seed));
    }, py::arg("n"), py::arg("d"), py::arg("seed"));

    m.def("sigma_eta", [](std::size_t d) { return sigma_eta(Kernel::indicator(), d); }, py::arg("d"),
          "Surface tension of the indicator kernel.");
    m.def("weight_matrix", [](const Points& pts, double eps) {
        return build_weight_matrix(to_samples(pts), eps, Kernel::indicator()).weights;
    }, py::arg("points"), py::arg("eps"));
    m.def("graph_laplacian", [](const Points& pts, double eps) {
        return graph_laplacian(build_weight_matrix(to_samples(pts), eps, Kernel::indicator()));
    }, py::arg("points"), py::arg("eps"));
    m.def("is_connected", [](const Points& pts, double eps) {
        return is_connected(build_weight_matrix(to_samples(pts), eps, Kernel::indicator()));
    }, py::arg("points"), py::arg("eps"));
    m.def("connectivity_radius",
          [](const Points& pts) { return connectivity_radius(to_samples(pts), Kernel::indicator()); },
          py::arg("points"));

    m.def("eigendecompose", [](const Eigen::MatrixXd& lap) {
        const auto spec = eigendecompose(lap);
        return py::make_tuple(spec.eigenvalues, spec.eigenvectors);
    }, py::arg("laplacian"), "Eigenvalues ascending and eigenvectors normalised in L2(mu_n).");
    m.def("fractional_energy", [](const Eigen::MatrixXd& lap, const Eigen::VectorXd& u, double s) {
        return fractional_energy(eigendecompose(lap), u, s);
    }, py::arg("laplacian"), py::arg("u"), py::arg("s"));
    m.def("apply_fractional", [](const Eigen::MatrixXd& lap, const Eigen::VectorXd& u, double s) {
        return apply_fractional(eigendecompose(lap), u, s);
    }, py::arg("laplacian"), py::arg("u"), py::arg("s"));

    m.def("solve_constrained",
          [](const Eigen::MatrixXd& lap, const std::vector<std::pair<std::size_t, double>>& labels, double s) {
              const auto sol = solve_constrained(eigendecompose(lap), to_constraints(labels), s);
              return py::make_tuple(sol.values, sol.energy);
          },
          py::arg("laplacian"), py::arg("labels"), py::arg("s"),
          "Minimise the fractional energy subject to u[node] = label. Returns (u, energy).");
    m.def("brute_force_oracle",
          [](const Eigen::MatrixXd& lap, const std::vector<std::pair<std::size_t, double>>& labels, int s) {
              return brute_force_oracle(lap, to_constraints(labels), s);
          },
          py::arg("laplacian"), py::arg("labels"), py::arg("s"));
    m.def("classify", [](const Eigen::VectorXd& u, double threshold) { return classify(u, threshold); },
          py::arg("u"), py::arg("threshold") = 0.5);

    m.def("continuum_spectrum", [](std::size_t grid_m, std::size_t d, const std::string& variant) {
        return continuum_spectrum(PeriodicGrid{grid_m, d}, to_variant(variant)).sorted();
    }, py::arg("m") = 100, py::arg("d") = 2, py::arg("variant") = "fd");
    m.def("continuum_solve",
          [](const std::vector<std::pair<std::vector<double>, double>>& labels, double s, std::size_t grid_m,
             std::size_t d, const std::string& variant) {
              std::vector<std::pair<TorusPoint, double>> cons;
              for (const auto& [x, v] : labels) {
                  cons.emplace_back(TorusPoint(x), v);
              }
              const auto spec = continuum_spectrum(PeriodicGrid{grid_m, d}, to_variant(variant));
              const auto sol = solve_continuum_constrained(spec, cons, s);
              py::array_t<double> u(d == 1 ? std::vector<py::ssize_t>{static_cast<py::ssize_t>(grid_m)}
                                           : std::vector<py::ssize_t>{static_cast<py::ssize_t>(grid_m),
                                                                      static_cast<py::ssize_t>(grid_m)});
              std::copy(sol.u.values.begin(), sol.u.values.end(), u.mutable_data());
              return py::make_tuple(u, sol.energy);
          },
          py::arg("labels"), py::arg("s"), py::arg("m") = 100, py::arg("d") = 2, py::arg("variant") = "fd",
          "Grid solution u[p, q] at (p/m, q/m) and its energy.");
    m.def("continuum_energy",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& u, double s,
             const std::string& variant) {
              const auto grid_m = static_cast<std::size_t>(u.shape(0));
              const std::size_t d = u.ndim() == 1 ? 1 : 2;
              const auto spec = continuum_spectrum(PeriodicGrid{grid_m, d}, to_variant(variant));
              GridFunction fn{spec.grid, std::vector<double>(u.data(), u.data() + u.size())};
              return continuum_energy(spec, fn, s);
          },
          py::arg("u"), py::arg("s"), py::arg("variant") = "fd");

    m.def("tl2_distance",
          [](const Points& xa, const std::vector<double>& va, const Points& xb, const std::vector<double>& vb) {
              return tl2_distance(EmpiricalPair(to_samples(xa), va), EmpiricalPair(to_samples(xb), vb));
          },
          py::arg("points_a"), py::arg("values_a"), py::arg("points_b"), py::arg("values_b"));

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::vector<const char*> argv = {"fraclap"};
        for (const auto& a : args) {
            argv.push_back(a.c_str());
        }
        std::ostringstream out;
        std::ostringstream err;
        const int code = harness::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"), "Run the command-line tool in-process. Returns (exit code, stdout, stderr).");
}
