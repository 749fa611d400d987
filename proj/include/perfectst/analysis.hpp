#pragma once

// Property checks and figures of merit: unitarity, minimum determinant,
// per-entry power uniformity, isometry and the SNR normalization exponent.

#include <cstdint>
#include <string>
#include <vector>

#include "perfectst/codebook.hpp"
#include "perfectst/types.hpp"

namespace perfectst {

struct UnitaryReport {
  double defect = 0.0;  ///< max |M M^H - I| entry
  double tol = 0.0;
  bool passed = false;
};

UnitaryReport check_unitary(const CMatrix& m, double tol = 1e-10);
UnitaryReport check_orthogonal(const RMatrix& m, double tol = 1e-10);

/// UnitSpacing: differences in {0, ±1, ±i, ±1±i}. QamSpacing: the same
/// pattern scaled by 2, i.e. differences of odd-coordinate 4-QAM.
enum class Spacing { UnitSpacing, QamSpacing };

std::string to_string(Spacing spacing);
Spacing spacing_from_string(const std::string& s);

/// The nine per-component difference values, zero first.
std::vector<cdouble> difference_set(Spacing spacing);

struct MinDetReport {
  double min_det = 0.0;
  std::vector<cdouble> argmin_delta;
  Spacing convention = Spacing::UnitSpacing;
  std::uint64_t search_size = 0;
  /// False for sampled searches: min_det is then only an upper bound.
  bool exhaustive = true;
  std::uint64_t seed = 0;
};

/// det(dX dX^H) for the codeword difference encoding `delta`.
double difference_det(const CodeSpec& spec, const std::vector<cdouble>& delta);

/// Exhaustive minimum over all nonzero difference vectors. Throws
/// std::length_error when 9^K exceeds `cap`; use min_det_sampled then.
MinDetReport min_det(const CodeSpec& spec, Spacing spacing, std::uint64_t cap = 10'000'000,
                     int threads = 0);

/// Seeded random nonzero difference vectors; reports an upper bound.
MinDetReport min_det_sampled(const CodeSpec& spec, Spacing spacing, std::uint64_t samples,
                             std::uint64_t seed, int threads = 0);

enum class PowerMode { Exhaustive, MonteCarlo, Analytic };

std::string to_string(PowerMode mode);

struct PowerReport {
  PowerMode mode = PowerMode::Exhaustive;
  /// E|X_rc|^2 per entry.
  RMatrix entry_energy;
  /// Average symbol energy of the constellation.
  double symbol_energy = 0.0;
  /// max_rc |E_rc - mean| / mean.
  double max_relative_deviation = 0.0;
  /// Monte Carlo only: max_rc |E_rc - Es| / stderr_rc.
  double max_z_score = 0.0;
  std::uint64_t samples = 0;
  bool passed = false;
};

/// Averages over every codeword; throws std::length_error past `cap` codewords.
PowerReport power_uniformity_exhaustive(const CodeSpec& spec, const Constellation& constellation,
                                        std::uint64_t cap = 1u << 22, int threads = 0);
/// Passes when every entry sits within 3 standard errors of Es.
PowerReport power_uniformity_montecarlo(const CodeSpec& spec, const Constellation& constellation,
                                        std::uint64_t trials, std::uint64_t seed, int threads = 0);
/// E|X_rc|^2 = Es sum_u |B_u(r, c)|^2 for i.i.d. zero-mean symbols.
PowerReport power_uniformity_analytic(const CodeSpec& spec, const Constellation& constellation);

struct IsometryReport {
  double max_relative_error = 0.0;
  std::uint64_t trials = 0;
  bool passed = false;
};

/// Tr(X^H X) against |f|^2 for random complex Gaussian f.
IsometryReport isometry_check(const CodeSpec& spec, std::uint64_t trials, std::uint64_t seed,
                              double tol = 1e-9);

struct NormalizationParams {
  double snr = 0.0;
  double r = 0.0;
  double m = 0.0;
  double nu_squared = 0.0;
};

/// nu^2 = snr^(1 - r/m).
NormalizationParams normalization(double snr, double r, double m);

struct ExponentRow {
  double snr = 0.0;
  double nu_squared = 0.0;
  double scaled_min_det = 0.0;  ///< (nu^2)^n min_det
  double exponent = 0.0;        ///< log_snr(scaled_min_det)
  double target = 0.0;          ///< n - r
};

/// Informational: the exponent approaches n - r only asymptotically.
std::vector<ExponentRow> det_exponent_check(int n, double min_det, const std::vector<double>& snrs,
                                            double r);

}  // namespace perfectst
