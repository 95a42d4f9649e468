// Python bindings.  Structures cross the boundary as JSON text in the same
// format the command-line tool reads and writes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "forge/cli.hpp"
#include "forge/errors.hpp"
#include "forge/green.hpp"
#include "forge/io.hpp"
#include "forge/universal.hpp"

namespace py = pybind11;
using namespace forge;

namespace {

  Structure load(std::string const& text) {
    return structure_from_json(parse_json(text));
  }

  std::string green_counts(std::string const& text) {
    auto M = enumerate_endos(load(text));
    auto G = green_relations(M);
    json j{{"monoid_size", M.size()},
           {"L", G.L_count},
           {"R", G.R_count},
           {"H", G.H_count},
           {"D", G.D_count},
           {"J", G.J_count},
           {"idempotents", idempotents(M).size()}};
    return j.dump();
  }

  std::string monoid_claims(std::string const& text) {
    auto report = verify_monoid_claims(load(text));
    json claims = json::array();
    for (auto const& c : report.claims) {
      claims.push_back({{"name", c.name},
                        {"checked", c.checked},
                        {"counterexample", c.counterexample ? json(*c.counterexample)
                                                            : json(nullptr)}});
    }
    return json{{"ok", report.ok()}, {"monoid_size", report.monoid_size}, {"claims", claims}}
        .dump();
  }

  std::string stage(std::string const& seed, std::uint64_t stages,
                    std::optional<std::uint64_t> cap) {
    StagePlan p;
    p.stages     = stages;
    p.subset_cap = cap;
    return to_json(LazyLimit::over(load(seed), p)->stage_structure(stages)).dump();
  }

  py::tuple run_cli(std::vector<std::string> const& args) {
    std::ostringstream out, err;
    int                code;
    {
      py::gil_scoped_release release;
      code = cli::run(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Universal graphs, their endomorphism monoids and Green's relations";

  auto base = py::register_exception<Error>(m, "ForgeError", PyExc_RuntimeError);
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<CapExceeded>(m, "CapExceeded", base.ptr());
  py::register_exception<CoverageError>(m, "CoverageError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  m.def("run_cli", &run_cli, py::arg("args"),
        "Run a forge subcommand; returns (exit code, stdout, stderr).");
  m.def(
      "count_automorphisms",
      [](std::string const& s, std::size_t cap) { return count_automorphisms(load(s), cap); },
      py::arg("structure"), py::arg("vertex_cap") = 16);
  m.def(
      "isomorphic",
      [](std::string const& a, std::string const& b, std::size_t cap) {
        return isomorphic(load(a), load(b), cap);
      },
      py::arg("a"), py::arg("b"), py::arg("vertex_cap") = 16);
  m.def("green_counts", &green_counts, py::arg("structure"));
  m.def("verify_monoid_claims", &monoid_claims, py::arg("structure"));
  m.def("stage", &stage, py::arg("seed"), py::arg("stages") = 1,
        py::arg("subset_cap") = py::none());
}
