#pragma once

// Link-level simulation over i.i.d. Rayleigh MIMO channels: Y = nu H X + W,
// with exhaustive ML and sphere decoding of the info symbols.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "perfectst/codebook.hpp"
#include "perfectst/types.hpp"

namespace perfectst {

enum class Fading { RayleighIID };

struct ChannelConfig {
  int n = 2;   ///< transmit antennas
  int nr = 1;  ///< receive antennas
  Fading fading = Fading::RayleighIID;
  std::vector<double> snr_db_list;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  int threads = 0;  ///< 0: hardware concurrency; never affects results

  /// Throws std::invalid_argument on trials == 0, empty SNR list, bad sizes.
  void validate() const;
};

/// i.i.d. CN(0, 1) entries.
CMatrix complex_gaussian(int rows, int cols, std::mt19937_64& rng);
CMatrix channel_sample(const ChannelConfig& cfg, std::mt19937_64& rng);

/// E|X|_F^2 over uniformly drawn info symbols: Es sum_u |B_u|_F^2.
double codebook_energy(const CodeSpec& spec, const Constellation& constellation);

/// nu with nu^2 = snr T / E|X|_F^2, snr linear.
double nu_for(const CodeSpec& spec, const Constellation& constellation, double snr);

/// nu H X + W with unit-variance W.
CMatrix transmit(const CMatrix& x, const CMatrix& h, double nu, std::mt19937_64& rng);
CMatrix transmit_noiseless(const CMatrix& x, const CMatrix& h, double nu);

/// vec(Y) = A f + vec(W) with column u of A equal to vec(nu H B_u).
class LinearModel {
 public:
  LinearModel(const std::vector<CMatrix>& basis, const CMatrix& h, double nu);

  const CMatrix& matrix() const { return a_; }
  int symbols() const { return static_cast<int>(a_.cols()); }
  static CVector vectorize(const CMatrix& y);
  /// |y - A f|^2, the metric both decoders compare.
  double metric(const CVector& y, const std::vector<cdouble>& f) const;

 private:
  CMatrix a_;
};

struct DecodeResult {
  /// Constellation index per info symbol.
  std::vector<std::size_t> indices;
  std::vector<cdouble> info;
  double metric = 0.0;
  std::uint64_t visited_nodes = 0;
};

enum class DecoderKind { Sphere, ExhaustiveML };

std::string to_string(DecoderKind kind);
DecoderKind decoder_from_string(const std::string& s);

/// Every codeword, ties to the lexicographically smallest index vector.
/// Throws std::length_error when the codebook exceeds `cap`.
DecodeResult ml_decode_exhaustive(const CVector& y, const LinearModel& model,
                                  const Constellation& constellation,
                                  std::uint64_t cap = 1u << 16);

/// Schnorr-Euchner enumeration with an infinite initial radius. QAM is solved
/// in the real model (one PAM level per real coordinate), HEX in the complex
/// model; both return the exhaustive-ML answer including its tie rule.
DecodeResult sphere_decode(const CVector& y, const LinearModel& model,
                           const Constellation& constellation);

DecodeResult ml_decode_exhaustive(const CMatrix& y, const CMatrix& h, double nu,
                                  const CodeSpec& spec, const Constellation& constellation,
                                  std::uint64_t cap = 1u << 16);
DecodeResult sphere_decode(const CMatrix& y, const CMatrix& h, double nu, const CodeSpec& spec,
                           const Constellation& constellation);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// 95% Wilson score interval for k successes out of n.
Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054);

struct SnrPoint {
  double snr_db = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t codeword_errors = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t bits = 0;
  double error_rate = 0.0;
  double bit_error_rate = 0.0;
  Interval wilson;
  std::uint64_t visited_nodes = 0;
};

struct SimResult {
  std::vector<SnrPoint> points;
  std::string decoder_tag;
  std::string spec_digest;
  std::string constellation;
  int nr = 1;
  std::uint64_t seed = 0;
};

/// Per trial: draw f uniformly, encode, fade, add noise, decode, compare.
/// The result depends only on the inputs, never on the thread count.
SimResult monte_carlo(const ChannelConfig& cfg, const CodeSpec& spec,
                      const Constellation& constellation, DecoderKind decoder);

/// Columns: snr_db, trials, cw_errors, cw_rate, ci_lo, ci_hi, bit_rate.
std::string to_csv(const SimResult& result);

/// Median visited-node count of the sphere decoder over random instances.
/// Instance i draws H and W before the symbols, so specs with the same n see
/// the same channels and noise.
double median_visited_nodes(const CodeSpec& spec, const Constellation& constellation, int nr,
                            double snr_db, int instances, std::uint64_t seed);

}  // namespace perfectst
