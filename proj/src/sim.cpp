#include "perfectst/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/QR>

#include "perfectst/io.hpp"
#include "perfectst/parallel.hpp"

namespace perfectst {

namespace {

double tie_tol(double best) { return 1e-10 * (1.0 + std::abs(best)); }

/// The shared acceptance rule: strictly better beyond tolerance, or tied and
/// lexicographically smaller.
bool accept(double d, const std::vector<std::size_t>& idx, double best,
            const std::vector<std::size_t>& best_idx) {
  if (!std::isfinite(best)) return true;
  const double tol = tie_tol(best);
  if (d < best - tol) return true;
  return std::abs(d - best) <= tol && idx < best_idx;
}

double abs2(double v) { return v * v; }
double abs2(cdouble v) { return std::norm(v); }

/// Depth-first enumeration over y ~ R s with s drawn per level from
/// `alphabet`. `leaf` maps a full level-index vector to its exact metric and
/// records it; `bound` returns the current pruning radius.
template <class Scalar>
class Enumerator {
 public:
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Enumerator(const Mat& a, const Vec& y, std::vector<Scalar> alphabet)
      : alphabet_(std::move(alphabet)), cols_(a.cols()) {
    Eigen::HouseholderQR<Mat> qr(a);
    const Vec qty = qr.householderQ().adjoint() * y;
    rank_rows_ = std::min(a.rows(), a.cols());
    r_ = qr.matrixQR().topRows(rank_rows_);
    for (Eigen::Index i = 0; i < rank_rows_; ++i) r_.row(i).head(i).setZero();
    z_ = qty.head(rank_rows_);
    offset_ = std::max(0.0, y.squaredNorm() - z_.squaredNorm());
    level_.assign(cols_, 0);
    symbol_ = Vec::Zero(cols_);
  }

  template <class Leaf, class Bound>
  std::uint64_t run(Leaf&& leaf, Bound&& bound) {
    visited_ = 0;
    if (cols_ > 0) descend(cols_ - 1, 0.0, leaf, bound);
    return visited_;
  }

 private:
  template <class Leaf, class Bound>
  void descend(Eigen::Index k, double partial, Leaf& leaf, Bound& bound) {
    const std::size_t m = alphabet_.size();
    std::vector<std::pair<double, std::size_t>> order(m);
    if (k < rank_rows_) {
      Scalar center = z_(k);
      for (Eigen::Index j = k + 1; j < cols_; ++j) center -= r_(k, j) * symbol_(j);
      for (std::size_t a = 0; a < m; ++a) order[a] = {abs2(center - r_(k, k) * alphabet_[a]), a};
      std::stable_sort(order.begin(), order.end(),
                       [](const auto& x, const auto& y) { return x.first < y.first; });
    } else {
      for (std::size_t a = 0; a < m; ++a) order[a] = {0.0, a};
    }
    for (const auto& [inc, a] : order) {
      const double d = partial + inc;
      if (d + offset_ > bound()) break;
      ++visited_;
      level_[k] = a;
      symbol_(k) = alphabet_[a];
      if (k == 0) {
        leaf(level_);
      } else {
        descend(k - 1, d, leaf, bound);
      }
    }
  }

  std::vector<Scalar> alphabet_;
  Eigen::Index cols_;
  Eigen::Index rank_rows_ = 0;
  Mat r_;
  Vec z_;
  double offset_ = 0.0;
  std::vector<std::size_t> level_;
  Vec symbol_;
  std::uint64_t visited_ = 0;
};

std::vector<std::size_t> draw_indices(int k, std::size_t m, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  std::vector<std::size_t> idx(k);
  for (auto& i : idx) i = pick(rng);
  return idx;
}

std::vector<cdouble> to_points(const std::vector<std::size_t>& idx, const Constellation& c) {
  std::vector<cdouble> f(idx.size());
  for (std::size_t u = 0; u < idx.size(); ++u) f[u] = c.points[idx[u]];
  return f;
}

CMatrix apply_basis(const std::vector<CMatrix>& basis, const std::vector<cdouble>& f) {
  CMatrix x = CMatrix::Zero(basis.front().rows(), basis.front().cols());
  for (std::size_t u = 0; u < f.size(); ++u) x += f[u] * basis[u];
  return x;
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

}  // namespace

void ChannelConfig::validate() const {
  if (n < 1 || nr < 1) throw std::invalid_argument("antenna counts must be positive");
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (snr_db_list.empty()) throw std::invalid_argument("SNR list must not be empty");
}

CMatrix complex_gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  CMatrix m(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      const double re = gauss(rng);
      m(r, c) = {re, gauss(rng)};
    }
  }
  return m;
}

CMatrix channel_sample(const ChannelConfig& cfg, std::mt19937_64& rng) {
  return complex_gaussian(cfg.nr, cfg.n, rng);
}

double codebook_energy(const CodeSpec& spec, const Constellation& constellation) {
  double total = 0.0;
  for (const auto& b : dispersion_basis(spec)) total += b.squaredNorm();
  return constellation.average_energy() * total;
}

double nu_for(const CodeSpec& spec, const Constellation& constellation, double snr) {
  return std::sqrt(snr * spec.delay / codebook_energy(spec, constellation));
}

CMatrix transmit(const CMatrix& x, const CMatrix& h, double nu, std::mt19937_64& rng) {
  return transmit_noiseless(x, h, nu) +
         complex_gaussian(static_cast<int>(h.rows()), static_cast<int>(x.cols()), rng);
}

CMatrix transmit_noiseless(const CMatrix& x, const CMatrix& h, double nu) {
  if (h.cols() != x.rows()) throw std::invalid_argument("channel and codeword sizes disagree");
  return nu * h * x;
}

LinearModel::LinearModel(const std::vector<CMatrix>& basis, const CMatrix& h, double nu) {
  if (basis.empty()) throw std::invalid_argument("empty dispersion basis");
  const auto rows = h.rows() * basis.front().cols();
  a_.resize(rows, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t u = 0; u < basis.size(); ++u) a_.col(u) = vectorize(nu * h * basis[u]);
}

CVector LinearModel::vectorize(const CMatrix& y) {
  return Eigen::Map<const CVector>(y.data(), y.size());
}

double LinearModel::metric(const CVector& y, const std::vector<cdouble>& f) const {
  const CVector fv = Eigen::Map<const CVector>(f.data(), static_cast<Eigen::Index>(f.size()));
  return (y - a_ * fv).squaredNorm();
}

std::string to_string(DecoderKind kind) {
  return kind == DecoderKind::Sphere ? "sphere" : "ml";
}

DecoderKind decoder_from_string(const std::string& s) {
  if (s == "sphere") return DecoderKind::Sphere;
  if (s == "ml") return DecoderKind::ExhaustiveML;
  throw std::invalid_argument("decoder must be 'sphere' or 'ml'");
}

DecodeResult ml_decode_exhaustive(const CVector& y, const LinearModel& model,
                                  const Constellation& constellation, std::uint64_t cap) {
  const int k = model.symbols();
  const std::uint64_t m = constellation.size();
  std::uint64_t total = 1;
  for (int u = 0; u < k; ++u) {
    if (total > cap / m) {
      throw std::length_error("codebook has more than " + std::to_string(cap) +
                              " codewords; use the sphere decoder");
    }
    total *= m;
  }
  DecodeResult best;
  best.metric = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(k, 0);
  for (std::uint64_t t = 0; t < total; ++t) {
    std::uint64_t rest = t;
    for (int u = k - 1; u >= 0; --u) {
      idx[u] = rest % m;
      rest /= m;
    }
    const auto f = to_points(idx, constellation);
    const double d = model.metric(y, f);
    if (accept(d, idx, best.metric, best.indices)) {
      best.metric = d;
      best.indices = idx;
      best.info = f;
    }
  }
  best.visited_nodes = total;
  return best;
}

DecodeResult sphere_decode(const CVector& y, const LinearModel& model,
                           const Constellation& constellation) {
  const int k = model.symbols();
  DecodeResult best;
  best.metric = std::numeric_limits<double>::infinity();
  auto bound = [&] {
    return std::isfinite(best.metric) ? best.metric + 1e-9 * (1.0 + best.metric)
                                      : std::numeric_limits<double>::infinity();
  };
  auto record = [&](std::vector<std::size_t> idx) {
    auto f = to_points(idx, constellation);
    const double d = model.metric(y, f);
    if (accept(d, idx, best.metric, best.indices)) {
      best.metric = d;
      best.indices = std::move(idx);
      best.info = std::move(f);
    }
  };

  if (constellation.kind == ConstellationKind::QAM) {
    // Real coordinates interleaved (Re f_0, Im f_0, Re f_1, ...), so the order
    // of level vectors matches the order of complex index vectors.
    const CMatrix& a = model.matrix();
    const auto rows = a.rows();
    RMatrix ar(2 * rows, 2 * k);
    for (int u = 0; u < k; ++u) {
      ar.col(2 * u) << a.col(u).real(), a.col(u).imag();
      ar.col(2 * u + 1) << -a.col(u).imag(), a.col(u).real();
    }
    RVector yr(2 * rows);
    yr << y.real(), y.imag();
    const auto levels = constellation.axis_levels();
    const std::size_t m = levels.size();
    Enumerator<double> en(ar, yr, levels);
    best.visited_nodes = en.run(
        [&](const std::vector<std::size_t>& lv) {
          std::vector<std::size_t> idx(k);
          for (int u = 0; u < k; ++u) idx[u] = lv[2 * u] * m + lv[2 * u + 1];
          record(std::move(idx));
        },
        bound);
  } else {
    Enumerator<cdouble> en(model.matrix(), y, constellation.points);
    best.visited_nodes = en.run([&](const std::vector<std::size_t>& lv) { record(lv); }, bound);
  }
  return best;
}

DecodeResult ml_decode_exhaustive(const CMatrix& y, const CMatrix& h, double nu,
                                  const CodeSpec& spec, const Constellation& constellation,
                                  std::uint64_t cap) {
  const LinearModel model(dispersion_basis(spec), h, nu);
  return ml_decode_exhaustive(LinearModel::vectorize(y), model, constellation, cap);
}

DecodeResult sphere_decode(const CMatrix& y, const CMatrix& h, double nu, const CodeSpec& spec,
                           const Constellation& constellation) {
  const LinearModel model(dispersion_basis(spec), h, nu);
  return sphere_decode(LinearModel::vectorize(y), model, constellation);
}

Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {k == 0 ? 0.0 : std::max(0.0, center - half), k == n ? 1.0 : std::min(1.0, center + half)};
}

SimResult monte_carlo(const ChannelConfig& cfg, const CodeSpec& spec,
                      const Constellation& constellation, DecoderKind decoder) {
  cfg.validate();
  if (cfg.n != spec.n) throw std::invalid_argument("channel n does not match the code");
  const int k = spec.info_length();
  if (decoder == DecoderKind::ExhaustiveML) {
    std::uint64_t total = 1;
    for (int u = 0; u < k; ++u) {
      if (total > (1u << 16) / constellation.size()) {
        throw std::length_error(
            "codebook too large for the exhaustive decoder; use --decoder sphere");
      }
      total *= constellation.size();
    }
  }
  const auto basis = dispersion_basis(spec);
  const int bits_per_symbol = constellation.bits_per_symbol();

  SimResult result;
  result.decoder_tag = to_string(decoder);
  result.spec_digest = spec_digest(spec);
  result.constellation = constellation.name();
  result.nr = cfg.nr;
  result.seed = cfg.seed;

  for (std::size_t s = 0; s < cfg.snr_db_list.size(); ++s) {
    const double snr_db = cfg.snr_db_list[s];
    const double nu = nu_for(spec, constellation, std::pow(10.0, snr_db / 10.0));
    struct Counts {
      std::uint64_t cw = 0, bits = 0, nodes = 0;
    };
    constexpr std::uint64_t chunk = 256;
    std::vector<Counts> per_chunk((cfg.trials + chunk - 1) / chunk);
    parallel_chunks(cfg.trials, chunk, cfg.threads,
                    [&](std::uint64_t c, std::uint64_t begin, std::uint64_t end) {
                      Counts counts;
                      for (std::uint64_t t = begin; t < end; ++t) {
                        auto rng = stream_for(cfg.seed, s, t);
                        const auto sent = draw_indices(k, constellation.size(), rng);
                        const CMatrix x = apply_basis(basis, to_points(sent, constellation));
                        const CMatrix h = channel_sample(cfg, rng);
                        const CMatrix y = transmit(x, h, nu, rng);
                        const LinearModel model(basis, h, nu);
                        const CVector yv = LinearModel::vectorize(y);
                        const auto got = decoder == DecoderKind::Sphere
                                             ? sphere_decode(yv, model, constellation)
                                             : ml_decode_exhaustive(yv, model, constellation);
                        counts.nodes += got.visited_nodes;
                        if (got.indices != sent) ++counts.cw;
                        for (int u = 0; u < k; ++u) {
                          counts.bits += std::popcount(constellation.bit_label(sent[u]) ^
                                                       constellation.bit_label(got.indices[u]));
                        }
                      }
                      per_chunk[c] = counts;
                    });
    SnrPoint point;
    point.snr_db = snr_db;
    point.trials = cfg.trials;
    for (const auto& c : per_chunk) {
      point.codeword_errors += c.cw;
      point.bit_errors += c.bits;
      point.visited_nodes += c.nodes;
    }
    point.bits = cfg.trials * static_cast<std::uint64_t>(k) * bits_per_symbol;
    point.error_rate = static_cast<double>(point.codeword_errors) / static_cast<double>(cfg.trials);
    point.bit_error_rate =
        point.bits == 0 ? 0.0 : static_cast<double>(point.bit_errors) / static_cast<double>(point.bits);
    point.wilson = wilson_interval(point.codeword_errors, cfg.trials);
    result.points.push_back(point);
  }
  return result;
}

std::string to_csv(const SimResult& result) {
  std::string out = "snr_db,trials,cw_errors,cw_rate,ci_lo,ci_hi,bit_rate\n";
  for (const auto& p : result.points) {
    out += fmt("%.6g", p.snr_db) + "," + std::to_string(p.trials) + "," +
           std::to_string(p.codeword_errors) + "," + fmt("%.10g", p.error_rate) + "," +
           fmt("%.10g", p.wilson.lo) + "," + fmt("%.10g", p.wilson.hi) + "," +
           fmt("%.10g", p.bit_error_rate) + "\n";
  }
  return out;
}

double median_visited_nodes(const CodeSpec& spec, const Constellation& constellation, int nr,
                            double snr_db, int instances, std::uint64_t seed) {
  if (instances < 1) throw std::invalid_argument("need at least one instance");
  const auto basis = dispersion_basis(spec);
  const int k = spec.info_length();
  const double nu = nu_for(spec, constellation, std::pow(10.0, snr_db / 10.0));
  std::vector<double> counts;
  for (int i = 0; i < instances; ++i) {
    auto rng = stream_for(seed, static_cast<std::uint64_t>(i));
    const CMatrix h = complex_gaussian(nr, spec.n, rng);
    const CMatrix w = complex_gaussian(nr, spec.delay, rng);
    const auto sent = draw_indices(k, constellation.size(), rng);
    const CMatrix y = transmit_noiseless(apply_basis(basis, to_points(sent, constellation)), h, nu) + w;
    const LinearModel model(basis, h, nu);
    counts.push_back(static_cast<double>(
        sphere_decode(LinearModel::vectorize(y), model, constellation).visited_nodes));
  }
  std::sort(counts.begin(), counts.end());
  const auto mid = counts.size() / 2;
  return counts.size() % 2 ? counts[mid] : 0.5 * (counts[mid - 1] + counts[mid]);
}

}  // namespace perfectst
