#include "perfectst/analysis.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "perfectst/parallel.hpp"

namespace perfectst {

namespace {

constexpr std::uint64_t kChunk = 4096;

CMatrix combine(const std::vector<CMatrix>& basis, const std::vector<cdouble>& f) {
  CMatrix x = CMatrix::Zero(basis.front().rows(), basis.front().cols());
  for (std::size_t u = 0; u < f.size(); ++u) {
    if (f[u] != cdouble(0.0)) x += f[u] * basis[u];
  }
  return x;
}

double gram_det(const CMatrix& dx) {
  if (dx.rows() == dx.cols()) return std::norm(dx.determinant());
  return (dx * dx.adjoint()).determinant().real();
}

/// Strictly smaller beyond a relative tolerance, or tied with a lower index.
bool better(double v, std::uint64_t i, double best, std::uint64_t best_i) {
  if (!std::isfinite(best)) return true;
  const double tol = 1e-12 * std::max(std::abs(best), 1e-300);
  if (v < best - tol) return true;
  return std::abs(v - best) <= tol && i < best_i;
}

std::uint64_t checked_power(std::uint64_t base, int exp, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (int k = 0; k < exp; ++k) {
    if (total > cap / base) return std::numeric_limits<std::uint64_t>::max();
    total *= base;
  }
  return total;
}

void fill_deviation(PowerReport& report) {
  const double mean = report.entry_energy.mean();
  report.max_relative_deviation = 0.0;
  for (Eigen::Index r = 0; r < report.entry_energy.rows(); ++r) {
    for (Eigen::Index c = 0; c < report.entry_energy.cols(); ++c) {
      report.max_relative_deviation =
          std::max(report.max_relative_deviation, std::abs(report.entry_energy(r, c) - mean) / mean);
    }
  }
}

}  // namespace

UnitaryReport check_unitary(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("unitarity check needs a square matrix");
  return {unitarity_defect(m), tol, unitarity_defect(m) <= tol};
}

UnitaryReport check_orthogonal(const RMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("orthogonality check needs a square matrix");
  const double defect =
      (m * m.transpose() - RMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
  return {defect, tol, defect <= tol};
}

std::string to_string(Spacing spacing) {
  return spacing == Spacing::UnitSpacing ? "unit" : "qam";
}

Spacing spacing_from_string(const std::string& s) {
  if (s == "unit") return Spacing::UnitSpacing;
  if (s == "qam") return Spacing::QamSpacing;
  throw std::invalid_argument("spacing must be 'unit' or 'qam'");
}

std::vector<cdouble> difference_set(Spacing spacing) {
  const double step = spacing == Spacing::UnitSpacing ? 1.0 : 2.0;
  const double vals[3] = {0.0, step, -step};
  std::vector<cdouble> out;
  for (double a : vals) {
    for (double b : vals) out.emplace_back(a, b);
  }
  return out;
}

double difference_det(const CodeSpec& spec, const std::vector<cdouble>& delta) {
  return gram_det(encode_codeword(spec, delta).entries);
}

MinDetReport min_det(const CodeSpec& spec, Spacing spacing, std::uint64_t cap, int threads) {
  const int k = spec.info_length();
  const std::uint64_t total = checked_power(9, k, cap);
  if (total > cap) {
    throw std::length_error("exhaustive min_det needs 9^" + std::to_string(k) +
                            " difference vectors, above the cap of " + std::to_string(cap) +
                            "; use the sampled mode");
  }
  const auto diffs = difference_set(spacing);
  const auto basis = dispersion_basis(spec);

  struct Best {
    double value = std::numeric_limits<double>::infinity();
    std::uint64_t index = 0;
  };
  std::vector<Best> per_chunk((total + kChunk - 1) / kChunk);
  parallel_chunks(total, kChunk, threads, [&](std::uint64_t c, std::uint64_t begin, std::uint64_t end) {
    Best best;
    std::vector<cdouble> delta(k);
    for (std::uint64_t idx = std::max<std::uint64_t>(begin, 1); idx < end; ++idx) {
      std::uint64_t rest = idx;
      for (int u = k - 1; u >= 0; --u) {
        delta[u] = diffs[rest % 9];
        rest /= 9;
      }
      const double v = gram_det(combine(basis, delta));
      if (better(v, idx, best.value, best.index)) best = {v, idx};
    }
    per_chunk[c] = best;
  });

  Best best;
  for (const auto& b : per_chunk) {
    if (std::isfinite(b.value) && better(b.value, b.index, best.value, best.index)) best = b;
  }
  MinDetReport report;
  report.min_det = best.value;
  report.convention = spacing;
  report.search_size = total - 1;
  report.exhaustive = true;
  report.argmin_delta.resize(k);
  std::uint64_t rest = best.index;
  for (int u = k - 1; u >= 0; --u) {
    report.argmin_delta[u] = diffs[rest % 9];
    rest /= 9;
  }
  return report;
}

MinDetReport min_det_sampled(const CodeSpec& spec, Spacing spacing, std::uint64_t samples,
                             std::uint64_t seed, int threads) {
  if (samples == 0) throw std::invalid_argument("sampled min_det needs at least one sample");
  const int k = spec.info_length();
  const auto diffs = difference_set(spacing);
  const auto basis = dispersion_basis(spec);

  struct Best {
    double value = std::numeric_limits<double>::infinity();
    std::uint64_t index = 0;
    std::vector<cdouble> delta;
  };
  std::vector<Best> per_chunk((samples + kChunk - 1) / kChunk);
  parallel_chunks(samples, kChunk, threads, [&](std::uint64_t c, std::uint64_t begin, std::uint64_t end) {
    Best best;
    std::vector<cdouble> delta(k);
    std::uniform_int_distribution<int> digit(0, 8);
    for (std::uint64_t s = begin; s < end; ++s) {
      auto rng = stream_for(seed, s);
      bool nonzero = false;
      while (!nonzero) {
        for (auto& d : delta) {
          const int g = digit(rng);
          d = diffs[g];
          nonzero = nonzero || g != 0;
        }
      }
      const double v = gram_det(combine(basis, delta));
      if (better(v, s, best.value, best.index)) best = {v, s, delta};
    }
    per_chunk[c] = std::move(best);
  });

  Best best;
  for (auto& b : per_chunk) {
    if (better(b.value, b.index, best.value, best.index)) best = std::move(b);
  }
  MinDetReport report;
  report.min_det = best.value;
  report.argmin_delta = best.delta;
  report.convention = spacing;
  report.search_size = samples;
  report.exhaustive = false;
  report.seed = seed;
  return report;
}

std::string to_string(PowerMode mode) {
  switch (mode) {
    case PowerMode::Exhaustive: return "exhaustive";
    case PowerMode::MonteCarlo: return "montecarlo";
    case PowerMode::Analytic: return "analytic";
  }
  return "exhaustive";
}

PowerReport power_uniformity_exhaustive(const CodeSpec& spec, const Constellation& constellation,
                                        std::uint64_t cap, int threads) {
  const int k = spec.info_length();
  const std::uint64_t m = constellation.size();
  const std::uint64_t total = checked_power(m, k, cap);
  if (total > cap) {
    throw std::length_error("exhaustive power check needs " + std::to_string(m) + "^" +
                            std::to_string(k) + " codewords, above the cap");
  }
  const auto basis = dispersion_basis(spec);
  const auto rows = basis.front().rows(), cols = basis.front().cols();
  std::vector<RMatrix> per_chunk((total + kChunk - 1) / kChunk);
  parallel_chunks(total, kChunk, threads, [&](std::uint64_t c, std::uint64_t begin, std::uint64_t end) {
    RMatrix acc = RMatrix::Zero(rows, cols);
    std::vector<cdouble> f(k);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      std::uint64_t rest = idx;
      for (int u = k - 1; u >= 0; --u) {
        f[u] = constellation.points[rest % m];
        rest /= m;
      }
      acc += combine(basis, f).cwiseAbs2();
    }
    per_chunk[c] = acc;
  });
  PowerReport report;
  report.mode = PowerMode::Exhaustive;
  report.entry_energy = RMatrix::Zero(rows, cols);
  for (const auto& a : per_chunk) report.entry_energy += a;
  report.entry_energy /= static_cast<double>(total);
  report.symbol_energy = constellation.average_energy();
  report.samples = total;
  fill_deviation(report);
  report.passed = report.max_relative_deviation <= 1e-9;
  return report;
}

PowerReport power_uniformity_montecarlo(const CodeSpec& spec, const Constellation& constellation,
                                        std::uint64_t trials, std::uint64_t seed, int threads) {
  if (trials < 2) throw std::invalid_argument("Monte Carlo power check needs at least two trials");
  const int k = spec.info_length();
  const auto basis = dispersion_basis(spec);
  const auto rows = basis.front().rows(), cols = basis.front().cols();
  struct Acc {
    RMatrix sum, sum_sq;
  };
  std::vector<Acc> per_chunk((trials + kChunk - 1) / kChunk);
  parallel_chunks(trials, kChunk, threads, [&](std::uint64_t c, std::uint64_t begin, std::uint64_t end) {
    Acc acc{RMatrix::Zero(rows, cols), RMatrix::Zero(rows, cols)};
    std::vector<cdouble> f(k);
    std::uniform_int_distribution<std::size_t> pick(0, constellation.size() - 1);
    for (std::uint64_t t = begin; t < end; ++t) {
      auto rng = stream_for(seed, t);
      for (auto& v : f) v = constellation.points[pick(rng)];
      const RMatrix e = combine(basis, f).cwiseAbs2();
      acc.sum += e;
      acc.sum_sq += e.cwiseAbs2();
    }
    per_chunk[c] = std::move(acc);
  });
  RMatrix sum = RMatrix::Zero(rows, cols), sum_sq = RMatrix::Zero(rows, cols);
  for (const auto& a : per_chunk) {
    sum += a.sum;
    sum_sq += a.sum_sq;
  }
  const double count = static_cast<double>(trials);
  PowerReport report;
  report.mode = PowerMode::MonteCarlo;
  report.entry_energy = sum / count;
  report.symbol_energy = constellation.average_energy();
  report.samples = trials;
  fill_deviation(report);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double mean = report.entry_energy(r, c);
      const double var = (sum_sq(r, c) - count * mean * mean) / (count - 1.0);
      const double se = std::sqrt(std::max(var, 0.0) / count);
      const double z = se > 0.0 ? std::abs(mean - report.symbol_energy) / se
                                : (std::abs(mean - report.symbol_energy) > 0.0
                                       ? std::numeric_limits<double>::infinity()
                                       : 0.0);
      report.max_z_score = std::max(report.max_z_score, z);
    }
  }
  report.passed = report.max_z_score <= 3.0;
  return report;
}

PowerReport power_uniformity_analytic(const CodeSpec& spec, const Constellation& constellation) {
  const auto basis = dispersion_basis(spec);
  PowerReport report;
  report.mode = PowerMode::Analytic;
  report.symbol_energy = constellation.average_energy();
  report.entry_energy = RMatrix::Zero(basis.front().rows(), basis.front().cols());
  for (const auto& b : basis) report.entry_energy += b.cwiseAbs2();
  report.entry_energy *= report.symbol_energy;
  fill_deviation(report);
  report.passed = report.max_relative_deviation <= 1e-9;
  return report;
}

IsometryReport isometry_check(const CodeSpec& spec, std::uint64_t trials, std::uint64_t seed,
                              double tol) {
  IsometryReport report;
  report.trials = trials;
  const int k = spec.info_length();
  std::vector<cdouble> f(k);
  for (std::uint64_t t = 0; t < trials; ++t) {
    auto rng = stream_for(seed, t);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    double norm = 0.0;
    for (auto& v : f) {
      const double re = gauss(rng);
      v = {re, gauss(rng)};
      norm += std::norm(v);
    }
    const double tr = encode_codeword(spec, f).entries.squaredNorm();
    report.max_relative_error = std::max(report.max_relative_error, std::abs(tr - norm) / norm);
  }
  report.passed = report.max_relative_error <= tol;
  return report;
}

NormalizationParams normalization(double snr, double r, double m) {
  if (!(snr > 0.0)) throw std::invalid_argument("snr must be positive");
  if (!(m > 0.0) || r < 0.0 || r > m) throw std::invalid_argument("need 0 <= r <= m and m > 0");
  return {snr, r, m, std::pow(snr, 1.0 - r / m)};
}

std::vector<ExponentRow> det_exponent_check(int n, double min_det, const std::vector<double>& snrs,
                                            double r) {
  std::vector<ExponentRow> rows;
  for (double snr : snrs) {
    const auto params = normalization(snr, r, n);
    ExponentRow row;
    row.snr = snr;
    row.nu_squared = params.nu_squared;
    row.scaled_min_det = std::pow(params.nu_squared, n) * min_det;
    row.exponent = std::log(row.scaled_min_det) / std::log(snr);
    row.target = n - r;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace perfectst
