#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "adelix/cli.hpp"
#include "adelix/expr.hpp"

namespace py = pybind11;
using namespace adelix;

namespace {

// Full CLI semantics in-process: argv tail in, (exit code, stdout, stderr) out.
py::tuple run_args(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_command(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
}

MetrizedLattice lattice_of(const Eigen::MatrixXd& gram) { return lattice_from_gram(gram); }

}  // namespace

PYBIND11_MODULE(_adelix, m) {
    m.doc() = "adelic cohomology on P^1 over Z, desk-scale kernels";

    m.def("run", &run_args, py::arg("args"),
          "Dispatch a CLI invocation; returns (exit_code, stdout, stderr).");

    m.def(
        "render_expr", [](const std::string& s) { return render(parse_expr(s)); }, py::arg("src"),
        "Parse a form/function expression and render it canonically.");

    m.def(
        "deg_ar", [](const Eigen::MatrixXd& g) { return deg_ar(lattice_of(g)); }, py::arg("gram"));
    m.def(
        "h0_ar", [](const Eigen::MatrixXd& g, double tol) { return h0_ar(lattice_of(g), tol); },
        py::arg("gram"), py::arg("tol") = 1e-12);
    m.def(
        "h1_ar", [](const Eigen::MatrixXd& g, double tol) { return h1_ar(lattice_of(g), tol); },
        py::arg("gram"), py::arg("tol") = 1e-12);
    m.def(
        "rr_defect", [](const Eigen::MatrixXd& g, double tol) { return rr_defect(lattice_of(g), tol); },
        py::arg("gram"), py::arg("tol") = 1e-12,
        "h0_ar - h1_ar - deg_ar; vanishes up to series truncation.");

    m.def(
        "curve_h0_h1",
        [](long p, const std::string& divisor) {
            CurveDivisor<Fp> D = to_curve_divisor(parse_divisor(divisor), p);
            CohDims d = adelic_h0_h1(D, Fp(p, 1));
            return py::make_tuple(d.h0, d.h1);
        },
        py::arg("p"), py::arg("divisor"),
        "Adelic h0/h1 of O(D) on the projective line over F_p.");

    static py::exception<AdxError> exc(m, "AdelixError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const AdxError& e) {
            exc(e.what());
        }
    });
}
