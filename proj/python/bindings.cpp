#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "perfectst/analysis.hpp"
#include "perfectst/cli.hpp"
#include "perfectst/codebook.hpp"
#include "perfectst/io.hpp"
#include "perfectst/sim.hpp"

namespace py = pybind11;
using namespace perfectst;

namespace {

py::dict report_dict(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

FieldTag field_arg(const std::string& s) { return field_from_string(s); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Perfect space-time block codes";

  py::register_exception<ArithmeticError>(m, "ArithmeticError", PyExc_ValueError);
  py::register_exception<SearchCapExceeded>(m, "SearchCapExceeded", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("is_prime", &is_prime);
  m.def("mod_order", &mod_order, py::arg("a"), py::arg("m"));
  m.def("primitive_root", &primitive_root);
  m.def("crt", [](const std::vector<std::pair<std::int64_t, std::uint64_t>>& system) {
    std::vector<Congruence> c;
    for (auto [r, mod] : system) c.push_back({r, mod});
    return crt(c);
  });
  m.def("split_prime", [](std::uint64_t q, const std::string& field) {
    const auto x = split_prime(q, ring_of(field_arg(field)));
    return std::make_pair(x.a, x.b);
  });

  m.def("nonnorm", [](int n, const std::string& field) {
    const auto cert = field_arg(field) == FieldTag::QAM ? nonnorm_qam(n) : nonnorm_hex(n);
    return report_dict(to_json(cert));
  }, py::arg("n"), py::arg("field") = "qam");
  m.def("validate_gamma", [](int n, const std::string& field, std::pair<long, long> num,
                             std::pair<long, long> den) {
    const Ring ring = ring_of(field_arg(field));
    const auto cert = certificate_for_gamma(n, field_arg(field), {num.first, num.second, ring},
                                            {den.first, den.second, ring});
    return report_dict(to_json(validate_gamma(cert)));
  });

  m.def("generator", [](int n, const std::string& field) {
    return generator_for(n, field_arg(field)).entries;
  }, py::arg("n"), py::arg("field") = "qam");
  m.def("odd_lattice", [](int n1, std::optional<std::uint64_t> r) {
    return odd_lattice(n1, r).entries;
  }, py::arg("n1"), py::arg("generator") = py::none());

  py::class_<CodeSpec>(m, "CodeSpec")
      .def_readonly("n", &CodeSpec::n)
      .def_readonly("delay", &CodeSpec::delay)
      .def_readonly("gamma", &CodeSpec::gamma)
      .def_property_readonly("generator", [](const CodeSpec& s) { return s.generator.entries; })
      .def_property_readonly("variant", [](const CodeSpec& s) { return s.variant.name(); })
      .def("info_length", &CodeSpec::info_length)
      .def("to_json", [](const CodeSpec& s) { return to_json(s).dump(2); })
      .def_static("from_json", [](const std::string& text) { return spec_from_json(json::parse(text)); })
      .def("digest", [](const CodeSpec& s) { return spec_digest(s); });

  m.def("build_code", [](int n, const std::string& field, const std::string& variant, int delay) {
    return build_code(n, field_arg(field), Variant::parse(variant), delay);
  }, py::arg("n"), py::arg("field") = "qam", py::arg("variant") = "full", py::arg("delay") = 0);
  m.def("example_2x2", &example_2x2_spec);
  m.def("encode", [](const CodeSpec& s, const std::vector<cdouble>& f) {
    return encode_codeword(s, f).entries;
  });
  m.def("vectorization_matrix", &vectorization_matrix);
  m.def("ld_matrices", &ld_matrices);

  m.def("min_det", [](const CodeSpec& s, const std::string& spacing) {
    return report_dict(to_json(min_det(s, spacing_from_string(spacing))));
  }, py::arg("spec"), py::arg("spacing") = "unit");
  m.def("power_uniformity", [](const CodeSpec& s, const std::string& constellation) {
    return report_dict(to_json(power_uniformity_exhaustive(s, Constellation::parse(constellation))));
  }, py::arg("spec"), py::arg("constellation") = "qam:2");

  m.def("simulate", [](const CodeSpec& s, const std::string& constellation,
                       std::vector<double> snr_db, std::uint64_t trials, std::uint64_t seed, int nr,
                       const std::string& decoder) {
    ChannelConfig cfg;
    cfg.n = s.n;
    cfg.nr = nr;
    cfg.snr_db_list = std::move(snr_db);
    cfg.trials = trials;
    cfg.seed = seed;
    const auto alphabet = Constellation::parse(constellation);
    const auto kind = decoder_from_string(decoder);
    SimResult result;
    {
      py::gil_scoped_release release;
      result = monte_carlo(cfg, s, alphabet, kind);
    }
    return report_dict(to_json(result));
  }, py::arg("spec"), py::arg("constellation") = "qam:2", py::arg("snr_db") = std::vector<double>{10.0},
     py::arg("trials") = 1000, py::arg("seed") = 1, py::arg("nr") = 1, py::arg("decoder") = "sphere");

  m.def("version", &version_digest);
}
