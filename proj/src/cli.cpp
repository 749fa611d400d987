#include "perfectst/cli.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "perfectst/analysis.hpp"
#include "perfectst/io.hpp"
#include "perfectst/sim.hpp"

#ifndef PERFECTST_VERSION
#define PERFECTST_VERSION "0.0.0"
#endif
#ifndef PERFECTST_GIT_REV
#define PERFECTST_GIT_REV "unknown"
#endif

namespace perfectst {

namespace {

const std::vector<std::string> kAllChecks = {"unitarity", "rv-unitarity", "power",
                                             "isometry",  "ld",           "mindet",
                                             "trace-orthogonality", "gamma"};

enum class Status { Pass, Fail, Skip };

struct CheckOutcome {
  std::string name;
  Status status = Status::Pass;
  std::string detail;
  json data;
};

const char* status_text(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Skip: return "SKIP";
  }
  return "FAIL";
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

std::string gamma_text(const NonNormCertificate& cert) {
  return "(" + to_string(cert.gamma_num) + ")/(" + to_string(cert.gamma_den) + ")";
}

void write_manifest(const std::string& out_path, const std::string& command, const json& params,
                    const json& extra) {
  json manifest = {{"command", command},
                   {"version", version_digest()},
                   {"parameters", params}};
  for (auto it = extra.begin(); it != extra.end(); ++it) manifest[it.key()] = it.value();
  write_text_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

void collect_odd_origins(const GeneratorOrigin& origin, std::vector<GeneratorOrigin>& out) {
  if (origin.kind == OriginKind::OddDegree && origin.n1 > 1) out.push_back(origin);
  for (const auto& part : origin.parts) collect_odd_origins(part, out);
}

bool full_square(const CodeSpec& spec) { return spec.variant.kind == VariantKind::Full; }

CheckOutcome run_check(const std::string& name, const CodeSpec& spec,
                       const Constellation& constellation, std::uint64_t seed,
                       std::uint64_t mindet_cap) {
  CheckOutcome out{name, Status::Pass, "", json::object()};
  auto verdict = [&](bool ok) { out.status = ok ? Status::Pass : Status::Fail; };

  if (name == "unitarity") {
    const auto r = check_unitary(spec.generator.entries);
    verdict(r.passed);
    out.detail = "max|GG^H - I| = " + sci(r.defect);
    out.data = {{"defect", r.defect}, {"tol", r.tol}};
  } else if (name == "rv-unitarity") {
    if (!full_square(spec)) {
      out.status = Status::Skip;
      out.detail = "defined for the full variant only";
      return out;
    }
    const CMatrix rv = vectorization_matrix(spec);
    const auto c = check_unitary(rv);
    const auto r = check_orthogonal(real_stacking(rv));
    verdict(c.passed && r.passed);
    out.detail = "R_v defect " + sci(c.defect) + ", R'_v defect " + sci(r.defect);
    out.data = {{"rv_defect", c.defect}, {"real_defect", r.defect}};
  } else if (name == "power") {
    PowerReport report;
    try {
      report = power_uniformity_exhaustive(spec, constellation, 1u << 16);
    } catch (const std::length_error&) {
      report = power_uniformity_analytic(spec, constellation);
    }
    verdict(report.passed);
    out.detail = to_string(report.mode) + " over " + constellation.name() +
                 ", max relative deviation " + sci(report.max_relative_deviation);
    out.data = to_json(report);
  } else if (name == "isometry") {
    if (!spec.isometric()) {
      out.status = Status::Skip;
      out.detail = "truncated codewords are not isometric";
      return out;
    }
    const auto r = isometry_check(spec, 1000, seed);
    verdict(r.passed);
    out.detail = "max relative error " + sci(r.max_relative_error) + " over " +
                 std::to_string(r.trials) + " draws";
    out.data = {{"max_relative_error", r.max_relative_error}, {"trials", r.trials}};
  } else if (name == "ld") {
    if (!full_square(spec)) {
      out.status = Status::Skip;
      out.detail = "defined for the full variant only";
      return out;
    }
    double worst = 0.0;
    for (const auto& a : ld_matrices(spec)) {
      worst = std::max(worst,
                       (a.adjoint() * a - CMatrix::Identity(spec.n, spec.n)).cwiseAbs().maxCoeff());
    }
    verdict(worst <= 1e-10);
    out.detail = "max|A_u^H A_u - I| = " + sci(worst);
    out.data = {{"defect", worst}};
  } else if (name == "mindet") {
    json reports = json::array();
    bool ok = true;
    std::ostringstream detail;
    for (Spacing spacing : {Spacing::UnitSpacing, Spacing::QamSpacing}) {
      MinDetReport r;
      try {
        r = min_det(spec, spacing, mindet_cap);
      } catch (const std::length_error&) {
        r = min_det_sampled(spec, spacing, 20000, seed);
      }
      ok = ok && r.min_det > 1e-12;
      detail << (spacing == Spacing::UnitSpacing ? "" : ", ") << to_string(spacing) << " "
             << std::setprecision(10) << r.min_det << (r.exhaustive ? "" : " (upper bound)");
      reports.push_back(to_json(r));
    }
    verdict(ok);
    out.detail = detail.str();
    out.data = {{"reports", reports}};
  } else if (name == "trace-orthogonality") {
    std::vector<GeneratorOrigin> odd;
    collect_odd_origins(spec.generator.origin, odd);
    if (odd.empty()) {
      out.status = Status::Skip;
      out.detail = "no odd-degree lattice in the generator";
      return out;
    }
    double worst = 0.0;
    for (const auto& o : odd) {
      const auto ing = odd_lattice_ingredients(o.n1, o.r);
      const double p2 = static_cast<double>(ing.p * ing.p);
      for (int t = 0; t < o.n1; ++t) {
        const cdouble target = t == 0 ? p2 : 0.0;
        worst = std::max(worst, std::abs(trace_orthogonality(ing, t) - target) / p2);
      }
    }
    verdict(worst <= 1e-8);
    out.detail = "max relative deviation from p^2 delta " + sci(worst);
    out.data = {{"max_relative_deviation", worst}};
  } else if (name == "gamma") {
    const auto report = validate_gamma(spec.cert);
    verdict(report.all_passed());
    std::string failed;
    for (const auto& c : report.checks) {
      if (!c.passed) failed += (failed.empty() ? "" : ", ") + c.name;
    }
    out.detail = "gamma = " + gamma_text(spec.cert) +
                 (failed.empty() ? ", all conditions hold" : ", failed: " + failed);
    out.data = to_json(report);
  } else {
    throw CLI::ValidationError("--checks", "unknown check '" + name + "'");
  }
  return out;
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

struct ConstructArgs {
  int n = 0;
  std::string field = "qam";
  std::string variant = "full";
  int delay = 0;
  std::string out;
  std::string preset;
};

struct VerifyArgs {
  std::string spec;
  std::string checks = "all";
  std::string constellation = "qam:2";
  std::uint64_t seed = 1;
  std::uint64_t mindet_cap = 10'000'000;
  std::string out;
};

struct SimulateArgs {
  std::string spec;
  std::string constellation = "qam:2";
  std::string snr = "0:20:5";
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  int nr = 1;
  std::string decoder = "sphere";
  int threads = 0;
  std::string out;
};

int cmd_construct(const ConstructArgs& a, std::ostream& out) {
  CodeSpec spec;
  if (!a.preset.empty()) {
    if (a.preset != "example-2x2") throw CLI::ValidationError("--preset", "unknown preset");
    spec = example_2x2_spec();
  } else {
    if (a.n < 1) throw CLI::ValidationError("--n", "must be a positive integer");
    spec = build_code(a.n, field_from_string(a.field), Variant::parse(a.variant), a.delay,
                      SearchLimits::from_env());
  }
  const auto& c = spec.cert;
  out << "n = " << spec.n << ", field = " << to_string(c.field) << ", variant = "
      << spec.variant.name() << ", delay = " << spec.delay << "\n";
  out << "gamma = " << gamma_text(c) << "\n";
  out << "p = " << c.p << ", q = " << c.q << ", pi1 = " << to_string(c.pi1) << "\n";
  out << "generator: " << spec.generator.origin.describe() << "\n";
  out << "unitarity defect = " << sci(spec.generator.unitarity_defect) << "\n";
  if (a.out.empty()) {
    out << to_json(spec).dump(2) << "\n";
  } else {
    save_spec(a.out, spec);
    json params = {{"n", a.n},         {"field", a.field}, {"variant", a.variant},
                   {"delay", a.delay}, {"preset", a.preset}, {"out", a.out}};
    write_manifest(a.out, "construct", params, {{"spec_digest", spec_digest(spec)}});
    out << "wrote " << a.out << "\n";
  }
  return kExitOk;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const CodeSpec spec = load_spec(a.spec);
  const auto constellation = Constellation::parse(a.constellation);
  const auto names = a.checks == "all" ? kAllChecks : split_csv(a.checks);
  if (names.empty()) throw CLI::ValidationError("--checks", "no checks selected");
  bool all_ok = true;
  json results = json::array();
  for (const auto& name : names) {
    const auto r = run_check(name, spec, constellation, a.seed, a.mindet_cap);
    all_ok = all_ok && r.status != Status::Fail;
    out << std::left << std::setw(22) << r.name << status_text(r.status) << "  " << r.detail
        << "\n";
    results.push_back({{"name", r.name}, {"status", status_text(r.status)}, {"detail", r.detail},
                       {"data", r.data}});
  }
  out << (all_ok ? "verify: all selected checks passed" : "verify: FAILED") << "\n";
  if (!a.out.empty()) {
    json report = {{"spec", a.spec},
                   {"spec_digest", spec_digest(spec)},
                   {"passed", all_ok},
                   {"checks", results}};
    write_text_file(a.out, report.dump(2) + "\n");
    json params = {{"spec", a.spec},  {"checks", a.checks},         {"constellation", a.constellation},
                   {"seed", a.seed},  {"mindet_cap", a.mindet_cap}, {"out", a.out}};
    write_manifest(a.out, "verify", params, {{"spec_digest", spec_digest(spec)}});
  }
  return all_ok ? kExitOk : kExitCheckFailed;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const CodeSpec spec = load_spec(a.spec);
  const auto constellation = Constellation::parse(a.constellation);
  ChannelConfig cfg;
  cfg.n = spec.n;
  cfg.nr = a.nr;
  cfg.snr_db_list = parse_snr_list(a.snr);
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  cfg.threads = a.threads;
  cfg.validate();
  const auto result = monte_carlo(cfg, spec, constellation, decoder_from_string(a.decoder));
  const std::string csv = to_csv(result);
  if (a.out.empty()) {
    out << csv;
  } else {
    write_text_file(a.out, csv);
    write_text_file(a.out + ".json", to_json(result).dump(2) + "\n");
    json params = {{"spec", a.spec},   {"constellation", a.constellation}, {"snr", a.snr},
                   {"trials", a.trials}, {"seed", a.seed}, {"nr", a.nr},
                   {"decoder", a.decoder}, {"out", a.out}};
    write_manifest(a.out, "simulate", params, {{"spec_digest", result.spec_digest}});
    out << "wrote " << a.out << "\n";
  }
  return kExitOk;
}

}  // namespace

std::vector<double> parse_snr_list(const std::string& text) {
  std::vector<double> values;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw std::invalid_argument("bad SNR value '" + s + "'");
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw std::invalid_argument("SNR range must be a:b:step");
    const double lo = number(parts[0]), hi = number(parts[1]), step = number(parts[2]);
    if (!(step > 0.0) || hi < lo) throw std::invalid_argument("SNR range needs a <= b and step > 0");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= count; ++i) values.push_back(lo + static_cast<double>(i) * step);
  } else {
    for (const auto& s : split_csv(text)) values.push_back(number(s));
  }
  if (values.empty()) throw std::invalid_argument("SNR list must not be empty");
  return values;
}

std::string version_digest() { return std::string(PERFECTST_VERSION) + "+" + PERFECTST_GIT_REV; }

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Perfect space-time block codes: construct, verify, simulate"};
  app.set_version_flag("--version", version_digest());
  app.require_subcommand(1);

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Build a code and write its spec file");
  construct->add_option("--n", ca.n, "Number of transmit antennas");
  construct->add_option("--field", ca.field, "Base alphabet")->check(CLI::IsMember({"qam", "hex"}));
  construct->add_option("--variant", ca.variant, "full | diag | ir | layered:k | truncated:r");
  construct->add_option("--delay", ca.delay, "Codeword length T, a multiple of n (default n)");
  construct->add_option("--out", ca.out, "Spec file to write (stdout when omitted)");
  construct->add_option("--preset", ca.preset, "Named spec instead of a search")
      ->check(CLI::IsMember({"example-2x2"}));

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run property checks on a spec file");
  verify->add_option("spec", va.spec, "Spec file")->required();
  verify->add_option("--checks", va.checks, "all, or a comma list of checks");
  verify->add_option("--constellation", va.constellation, "Alphabet for the power check");
  verify->add_option("--seed", va.seed, "Seed for randomized checks");
  verify->add_option("--mindet-cap", va.mindet_cap, "Largest exhaustive min_det search");
  verify->add_option("--out", va.out, "JSON report path");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo error rates over Rayleigh fading");
  simulate->add_option("spec", sa.spec, "Spec file")->required();
  simulate->add_option("--constellation", sa.constellation, "qam:M or hex:R");
  simulate->add_option("--snr", sa.snr, "a:b:step in dB, or a comma list");
  simulate->add_option("--trials", sa.trials, "Codewords per SNR point");
  simulate->add_option("--seed", sa.seed, "Master seed");
  simulate->add_option("--nr", sa.nr, "Receive antennas");
  simulate->add_option("--decoder", sa.decoder)->check(CLI::IsMember({"sphere", "ml"}));
  simulate->add_option("--threads", sa.threads, "Worker threads (0: all cores)");
  simulate->add_option("--out", sa.out, "CSV path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*construct) return cmd_construct(ca, out);
    if (*verify) return cmd_verify(va, out);
    if (*simulate) return cmd_simulate(sa, out);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"perfectst"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace perfectst
