#include "perfectst/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace perfectst {

namespace {

json complex_pair(cdouble z) { return json::array({z.real(), z.imag()}); }

cdouble pair_value(const json& j) {
  if (!j.is_array() || j.size() != 2) throw IoError("complex entries must be [re, im] pairs");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json real_matrix(const RMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json info_vector(const std::vector<cdouble>& v) {
  json out = json::array();
  for (auto z : v) out.push_back(complex_pair(z));
  return out;
}

template <class F>
auto wrap(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw IoError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

json to_json(const GaussLikeInt& x) { return {{"a", x.a}, {"b", x.b}}; }

GaussLikeInt gauss_int_from_json(const json& j, Ring ring) {
  return {j.at("a").get<std::int64_t>(), j.at("b").get<std::int64_t>(), ring};
}

json to_json(const NonNormCertificate& cert) {
  return {{"field", to_string(cert.field)},
          {"ring", to_string(ring_of(cert.field))},
          {"n", cert.n},
          {"n1", cert.n1},
          {"s", cert.s},
          {"p", cert.p},
          {"q", cert.q},
          {"pi1", to_json(cert.pi1)},
          {"gamma_num", to_json(cert.gamma_num)},
          {"gamma_den", to_json(cert.gamma_den)}};
}

NonNormCertificate certificate_from_json(const json& j) {
  return wrap("certificate", [&] {
    NonNormCertificate cert;
    cert.field = field_from_string(j.at("field").get<std::string>());
    const Ring ring = ring_of(cert.field);
    cert.n = j.at("n").get<int>();
    cert.n1 = j.at("n1").get<int>();
    cert.s = j.at("s").get<int>();
    cert.p = j.at("p").get<std::uint64_t>();
    cert.q = j.at("q").get<std::uint64_t>();
    cert.pi1 = gauss_int_from_json(j.at("pi1"), ring);
    cert.gamma_num = gauss_int_from_json(j.at("gamma_num"), ring);
    cert.gamma_den = gauss_int_from_json(j.at("gamma_den"), ring);
    return cert;
  });
}

json to_json(const GeneratorOrigin& origin) {
  json j = {{"kind", to_string(origin.kind)}};
  switch (origin.kind) {
    case OriginKind::OddDegree:
      j["n1"] = origin.n1;
      j["p"] = origin.p;
      j["r"] = origin.r;
      j["lambda"] = origin.lambda;
      break;
    case OriginKind::PowerOfTwo:
      j["s"] = origin.s;
      break;
    case OriginKind::Kronecker: {
      json parts = json::array();
      for (const auto& part : origin.parts) parts.push_back(to_json(part));
      j["parts"] = parts;
      break;
    }
    case OriginKind::Explicit:
      j["label"] = origin.label;
      break;
    case OriginKind::HexC2:
      break;
  }
  return j;
}

GeneratorOrigin origin_from_json(const json& j) {
  GeneratorOrigin origin;
  origin.kind = origin_kind_from_string(j.at("kind").get<std::string>());
  switch (origin.kind) {
    case OriginKind::OddDegree:
      origin.n1 = j.at("n1").get<int>();
      origin.p = j.at("p").get<std::uint64_t>();
      origin.r = j.at("r").get<std::uint64_t>();
      origin.lambda = j.at("lambda").get<std::uint64_t>();
      break;
    case OriginKind::PowerOfTwo:
      origin.s = j.at("s").get<int>();
      break;
    case OriginKind::Kronecker:
      for (const auto& part : j.at("parts")) origin.parts.push_back(origin_from_json(part));
      break;
    case OriginKind::Explicit:
      origin.label = j.value("label", "");
      break;
    case OriginKind::HexC2:
      break;
  }
  return origin;
}

json to_json(const UnitaryGenerator& g) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < g.entries.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < g.entries.cols(); ++c) row.push_back(complex_pair(g.entries(r, c)));
    rows.push_back(row);
  }
  return {{"dim", g.dim()},
          {"origin", to_json(g.origin)},
          {"unitarity_defect", g.unitarity_defect},
          {"entries", rows}};
}

UnitaryGenerator generator_from_json(const json& j) {
  return wrap("generator", [&] {
    const auto& rows = j.at("entries");
    const auto n = static_cast<Eigen::Index>(rows.size());
    if (n == 0) throw IoError("generator has no rows");
    CMatrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (rows.at(r).size() != static_cast<std::size_t>(n)) throw IoError("generator is not square");
      for (Eigen::Index c = 0; c < n; ++c) m(r, c) = pair_value(rows.at(r).at(c));
    }
    UnitaryGenerator g;
    g.entries = m;
    g.origin = origin_from_json(j.at("origin"));
    g.unitarity_defect = unitarity_defect(m);
    return g;
  });
}

json to_json(const CodeSpec& spec) {
  return {{"format", "perfectst.spec"},
          {"version", 1},
          {"n", spec.n},
          {"delay", spec.delay},
          {"variant", spec.variant.name()},
          {"certificate", to_json(spec.cert)},
          {"generator", to_json(spec.generator)}};
}

CodeSpec spec_from_json(const json& j) {
  return wrap("spec", [&] {
    if (j.value("format", "") != "perfectst.spec") throw IoError("not a perfectst spec file");
    const auto cert = certificate_from_json(j.at("certificate"));
    const auto generator = generator_from_json(j.at("generator"));
    if (j.at("n").get<int>() != cert.n) throw IoError("spec n disagrees with its certificate");
    return make_code_spec(cert, generator, Variant::parse(j.at("variant").get<std::string>()),
                          j.at("delay").get<int>());
  });
}

std::string spec_digest(const CodeSpec& spec) {
  const std::string text = to_json(spec).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json to_json(const GammaReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"tower_dependent", c.tower_dependent},
                      {"detail", c.detail}});
  }
  return {{"all_passed", report.all_passed()},
          {"tower_independent_passed", report.tower_independent_passed()},
          {"checks", checks}};
}

json to_json(const MinDetReport& report) {
  return {{"min_det", report.min_det},
          {"convention", to_string(report.convention)},
          {"exhaustive", report.exhaustive},
          {"search_size", report.search_size},
          {"seed", report.seed},
          {"argmin_delta", info_vector(report.argmin_delta)}};
}

json to_json(const PowerReport& report) {
  return {{"mode", to_string(report.mode)},
          {"symbol_energy", report.symbol_energy},
          {"max_relative_deviation", report.max_relative_deviation},
          {"max_z_score", report.max_z_score},
          {"samples", report.samples},
          {"passed", report.passed},
          {"entry_energy", real_matrix(report.entry_energy)}};
}

json to_json(const SimResult& result) {
  json points = json::array();
  for (const auto& p : result.points) {
    points.push_back({{"snr_db", p.snr_db},
                      {"trials", p.trials},
                      {"codeword_errors", p.codeword_errors},
                      {"error_rate", p.error_rate},
                      {"ci_lo", p.wilson.lo},
                      {"ci_hi", p.wilson.hi},
                      {"bit_errors", p.bit_errors},
                      {"bits", p.bits},
                      {"bit_error_rate", p.bit_error_rate},
                      {"visited_nodes", p.visited_nodes}});
  }
  return {{"decoder", result.decoder_tag},
          {"spec_digest", result.spec_digest},
          {"constellation", result.constellation},
          {"nr", result.nr},
          {"seed", result.seed},
          {"points", points}};
}

std::string matrix_text(const CMatrix& m, int decimals) {
  const double half_ulp = 0.5 * std::pow(10.0, -decimals);
  const bool real = m.imag().cwiseAbs().maxCoeff() < half_ulp;
  std::ostringstream out;
  char buf[96];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (real) {
        std::snprintf(buf, sizeof buf, "%*.*f", decimals + 4, decimals, m(r, c).real());
      } else {
        std::snprintf(buf, sizeof buf, "%*.*f%+.*fi", decimals + 4, decimals, m(r, c).real(),
                      decimals, m(r, c).imag());
      }
      out << (c ? "  " : "") << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::string codewords_csv(const std::vector<CodeMatrix>& codewords) {
  std::ostringstream out;
  out << "codeword,row,col,re,im\n";
  char buf[64];
  for (std::size_t k = 0; k < codewords.size(); ++k) {
    const auto& x = codewords[k].entries;
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      for (Eigen::Index c = 0; c < x.cols(); ++c) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g", x(r, c).real(), x(r, c).imag());
        out << k << ',' << r << ',' << c << ',' << buf << '\n';
      }
    }
  }
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

CodeSpec load_spec(const std::string& path) {
  const std::string text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  return spec_from_json(j);
}

void save_spec(const std::string& path, const CodeSpec& spec) {
  write_text_file(path, to_json(spec).dump(2) + "\n");
}

}  // namespace perfectst
