#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cli.hpp"
#include "twoproj/dixmier.hpp"
#include "twoproj/lattice.hpp"
#include "twoproj/locality.hpp"
#include "twoproj/matrix_io.hpp"
#include "twoproj/random.hpp"
#include "twoproj/spectral.hpp"
#include "twoproj/trunclab.hpp"

namespace py = pybind11;
using namespace twoproj;

namespace {

py::dict span_dict(const SpanCertificate& c) {
    py::dict d;
    d["gap_to_one"] = c.gap_to_one;
    d["epsilon"] = c.epsilon;
    d["window_hi"] = c.window_hi;
    d["closed"] = c.closed;
    d["rank_R"] = c.rank_R;
    return d;
}

py::tuple pair_tuple(const ProjectionPair& p) { return py::make_tuple(p.P, p.Q); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Pairs of projections: Halmos forms, lattice operations, symbol calculus and truncation labs";
    m.attr("__version__") = cli::tool_version;

    static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
    static py::exception<InvalidInput> invalid(m, "InvalidInput", PyExc_ValueError);
    static py::exception<ParseError> parse_error(m, "ParseError", PyExc_ValueError);
    static py::exception<NumericalError> numerical(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const FileNotFound& e) {
            PyErr_SetString(PyExc_FileNotFoundError, e.what());
        } catch (const ParseError& e) {
            py::set_error(parse_error, e.what());
        } catch (const InvalidInput& e) {
            py::set_error(invalid, e.what());
        } catch (const NumericalError& e) {
            py::set_error(numerical, e.what());
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    py::class_<HalmosForm>(m, "HalmosForm")
        .def_readonly("d0", &HalmosForm::d0)
        .def_readonly("d1", &HalmosForm::d1)
        .def_readonly("d2", &HalmosForm::d2)
        .def_readonly("d3", &HalmosForm::d3)
        .def_readonly("dg", &HalmosForm::dg)
        .def_readonly("U", &HalmosForm::U)
        .def_readonly("s", &HalmosForm::s)
        .def_readonly("tol_used", &HalmosForm::tol_used)
        .def_property_readonly("dim", &HalmosForm::dim)
        .def("__repr__", [](const HalmosForm& f) {
            return "HalmosForm(d=[" + std::to_string(f.d0) + ", " + std::to_string(f.d1) + ", " +
                   std::to_string(f.d2) + ", " + std::to_string(f.d3) + "], dg=" + std::to_string(f.dg) + ")";
        });

    m.def(
        "validate_projection",
        [](const CMatrix& a, double tol) {
            const ProjectionCheck c = validate_projection(a, tol);
            py::dict d;
            d["ok"] = c.ok;
            d["hermitian_residual"] = c.hermitian_residual;
            d["idempotent_residual"] = c.idempotent_residual;
            d["worst_eigenvalue"] = c.worst_eigenvalue;
            return d;
        },
        py::arg("a"), py::arg("tol") = 1e-9);
    m.def("projection_rank", &projection_rank);
    m.def("spectral_projection",
          [](const CMatrix& a, double lo, double hi) { return spectral_projection(a, lo, hi); });

    m.def(
        "decompose",
        [](const CMatrix& p, const CMatrix& q, double tol_cluster, double tol) {
            return decompose(projection_pair(p, q, tol), tol_cluster);
        },
        py::arg("P"), py::arg("Q"), py::arg("tol_cluster") = 1e-8, py::arg("tol") = 1e-9);
    m.def("reconstruct", [](const HalmosForm& f) { return pair_tuple(reconstruct(f)); });
    m.def(
        "principal_angles",
        [](const CMatrix& p, const CMatrix& q) { return principal_angles(projection_pair(p, q)).angles; },
        py::arg("P"), py::arg("Q"));
    m.def(
        "fingerprint",
        [](const CMatrix& p, const CMatrix& q) {
            const Fingerprint f = unitary_equivalence_fingerprint(projection_pair(p, q));
            return py::make_tuple(std::vector<Index>(f.d.begin(), f.d.end()), f.s_micro);
        },
        py::arg("P"), py::arg("Q"));

    m.def(
        "meet", [](const CMatrix& p, const CMatrix& q) { return meet(projection_pair(p, q)); }, py::arg("P"),
        py::arg("Q"));
    m.def(
        "join", [](const CMatrix& p, const CMatrix& q) { return join(projection_pair(p, q)); }, py::arg("P"),
        py::arg("Q"));
    m.def(
        "span_projection_algebraic",
        [](const CMatrix& p, const CMatrix& q) { return span_projection_algebraic(projection_pair(p, q)); },
        py::arg("P"), py::arg("Q"));
    m.def(
        "span_certificate",
        [](const CMatrix& p, const CMatrix& q) { return span_dict(span_certificate(projection_pair(p, q))); },
        py::arg("P"), py::arg("Q"));
    m.def(
        "reduce_by_common_subspace",
        [](const CMatrix& p, const CMatrix& q, const CMatrix& r) {
            return pair_tuple(reduce_by_common_subspace(projection_pair(p, q), r));
        },
        py::arg("P"), py::arg("Q"), py::arg("R_sharp"));

    m.def("canonical_word", [](const std::string& w) { return SymbolWord::parse(w).to_string(); });
    m.def(
        "verify_isomorphism",
        [](const std::string& w, const CMatrix& p, const CMatrix& q) {
            const IsomorphismReport r = verify_isomorphism(SymbolWord::parse(w), projection_pair(p, q));
            py::dict d;
            d["matrix_norm"] = r.matrix_norm;
            d["symbol_sup_norm"] = r.symbol_sup_norm;
            d["rel_error"] = r.rel_error;
            d["samples"] = r.samples;
            return d;
        },
        py::arg("word"), py::arg("P"), py::arg("Q"));
    m.def(
        "check_generic_position",
        [](const CMatrix& p, const CMatrix& q) { return check_generic_position(projection_pair(p, q)); },
        py::arg("P"), py::arg("Q"));

    m.def("paper_example_pair", [](Index n) { return pair_tuple(paper_example_pair(n)); }, py::arg("n_blocks"));
    m.def("builtin_pair_family_names", &builtin_pair_family_names);

    m.def("bergman_shift", &bergman_shift, py::arg("d"));
    m.def("ideal_projection", &ideal_projection, py::arg("p"), py::arg("d"));
    m.def("parse_polynomial", [](const std::string& s) { return parse_polynomial(s); });
    m.def(
        "winding_number",
        [](const std::vector<Complex>& samples) {
            const WindingResult w = winding_number(samples);
            py::dict d;
            d["winding"] = w.winding;
            d["raw"] = w.raw;
            d["max_step"] = w.max_step;
            return d;
        },
        py::arg("samples"));
    m.def(
        "sample_circle", [](const std::string& expr, Index n) { return SymbolExpr::parse(expr).sample_circle(n); },
        py::arg("expr"), py::arg("n"));

    py::class_<CounterRng>(m, "CounterRng")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream_id") = 0)
        .def("next_u64", &CounterRng::next_u64)
        .def("uniform", py::overload_cast<>(&CounterRng::uniform))
        .def("normal", &CounterRng::normal)
        .def_property_readonly("counter", &CounterRng::counter);

    py::class_<cli::RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("subcommand", &cli::RunConfig::subcommand)
        .def_readwrite("seed", &cli::RunConfig::seed)
        .def_readwrite("strict", &cli::RunConfig::strict)
        .def_readwrite("tol", &cli::RunConfig::tol)
        .def_readwrite("tol_cluster", &cli::RunConfig::tol_cluster)
        .def_readwrite("pair", &cli::RunConfig::pair)
        .def_readwrite("p_file", &cli::RunConfig::p_file)
        .def_readwrite("q_file", &cli::RunConfig::q_file)
        .def_readwrite("word", &cli::RunConfig::word)
        .def_readwrite("random_words", &cli::RunConfig::random_words)
        .def_readwrite("max_degree", &cli::RunConfig::max_degree)
        .def_readwrite("family", &cli::RunConfig::family)
        .def_readwrite("dims", &cli::RunConfig::dims)
        .def_readwrite("epsilon", &cli::RunConfig::epsilon)
        .def_readwrite("p_list", &cli::RunConfig::p_list)
        .def_readwrite("poly_p", &cli::RunConfig::poly_p)
        .def_readwrite("poly_q", &cli::RunConfig::poly_q)
        .def_readwrite("poly_r", &cli::RunConfig::poly_r)
        .def_readwrite("dmin", &cli::RunConfig::dmin)
        .def_readwrite("dmax", &cli::RunConfig::dmax)
        .def_readwrite("model", &cli::RunConfig::model)
        .def_readwrite("proj", &cli::RunConfig::proj)
        .def_readwrite("proj2", &cli::RunConfig::proj2)
        .def_readwrite("support_tol", &cli::RunConfig::support_tol)
        .def_readwrite("grid", &cli::RunConfig::grid)
        .def_readwrite("phi", &cli::RunConfig::phi)
        .def_readwrite("winding_grid", &cli::RunConfig::winding_grid);

    // Full report as a JSON string; the Python wrapper decodes it.
    m.def("run_json", [](const cli::RunConfig& cfg) {
        const cli::Report r = cli::run(cfg);
        return nlohmann::json{{"header", r.header}, {"payload", r.payload}}.dump();
    });
}
