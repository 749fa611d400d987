#include "perfectst/codebook.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace perfectst {

namespace {

void require_length(const std::vector<cdouble>& f, std::size_t expected, const char* what) {
  if (f.size() != expected) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(expected) +
                                " symbols, got " + std::to_string(f.size()));
  }
}

/// d = f_block * G for the block starting at `offset`.
CVector layer_row(const CodeSpec& spec, const std::vector<cdouble>& f, std::size_t offset,
                  int active) {
  const int n = spec.n;
  CVector d = CVector::Zero(n);
  for (int i = 0; i < active; ++i) d += f[offset + i] * spec.generator.entries.row(i).transpose();
  return d;
}

/// Adds Gamma^j diag(d) into x.
void add_layer(CMatrix& x, const CVector& d, int j, cdouble gamma) {
  const int n = static_cast<int>(d.size());
  for (int c = 0; c < n; ++c) {
    const int r = (c + j) % n;
    x(r, c) += (c + j >= n ? gamma : cdouble(1.0)) * d(c);
  }
}

std::uint32_t gray(std::uint32_t v) { return v ^ (v >> 1); }

}  // namespace

Constellation Constellation::qam(int levels) {
  if (levels < 2 || !std::has_single_bit(static_cast<unsigned>(levels))) {
    throw std::invalid_argument("QAM levels per axis must be a power of two >= 2");
  }
  Constellation c;
  c.kind = ConstellationKind::QAM;
  c.param = levels;
  for (int ia = 0; ia < levels; ++ia) {
    for (int ib = 0; ib < levels; ++ib) {
      c.points.emplace_back(2 * ia - (levels - 1), 2 * ib - (levels - 1));
    }
  }
  return c;
}

Constellation Constellation::hex(int radius) {
  if (radius < 1) throw std::invalid_argument("HEX radius must be >= 1");
  Constellation c;
  c.kind = ConstellationKind::HEX;
  c.param = radius;
  const cdouble w3 = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  const int span = 2 * radius + 1;
  for (int a = -span; a <= span; ++a) {
    for (int b = -span; b <= span; ++b) {
      // |a + b w3|^2 = a^2 - ab + b^2 exactly
      if (a * a - a * b + b * b <= radius * radius) c.points.push_back(double(a) + double(b) * w3);
    }
  }
  cdouble mean = 0.0;
  for (auto p : c.points) mean += p;
  mean /= static_cast<double>(c.points.size());
  for (auto& p : c.points) p -= mean;
  std::sort(c.points.begin(), c.points.end(), [](cdouble x, cdouble y) {
    if (std::abs(x.real() - y.real()) > 1e-12) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return c;
}

Constellation Constellation::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("constellation must be qam:M or hex:R");
  const std::string kind = text.substr(0, colon);
  int value = 0;
  try {
    value = std::stoi(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad constellation parameter in '" + text + "'");
  }
  if (kind == "qam") return qam(value);
  if (kind == "hex") return hex(value);
  throw std::invalid_argument("unknown constellation '" + kind + "'");
}

std::string Constellation::name() const {
  return (kind == ConstellationKind::QAM ? "qam:" : "hex:") + std::to_string(param);
}

double Constellation::average_energy() const {
  double e = 0.0;
  for (auto p : points) e += std::norm(p);
  return e / static_cast<double>(points.size());
}

int Constellation::bits_per_symbol() const {
  return static_cast<int>(std::bit_width(points.size() - 1));
}

std::uint32_t Constellation::bit_label(std::size_t index) const {
  if (kind == ConstellationKind::HEX) return static_cast<std::uint32_t>(index);
  const auto m = static_cast<std::uint32_t>(param);
  const int axis_bits = std::bit_width(m - 1);
  const auto ia = static_cast<std::uint32_t>(index) / m;
  const auto ib = static_cast<std::uint32_t>(index) % m;
  return (gray(ia) << axis_bits) | gray(ib);
}

std::vector<double> Constellation::axis_levels() const {
  if (kind != ConstellationKind::QAM) throw std::logic_error("axis levels exist only for QAM");
  std::vector<double> levels;
  for (int i = 0; i < param; ++i) levels.push_back(2 * i - (param - 1));
  return levels;
}

Variant Variant::parse(const std::string& text) {
  Variant v;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  int arg = 0;
  if (colon != std::string::npos) {
    try {
      arg = std::stoi(text.substr(colon + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad variant argument in '" + text + "'");
    }
  }
  if (head == "full") {
    v.kind = VariantKind::Full;
  } else if (head == "diag" || head == "diagonal") {
    v.kind = VariantKind::Diagonal;
  } else if (head == "ir" || head == "integral") {
    v.kind = VariantKind::IntegralRestriction;
  } else if (head == "layered") {
    v.kind = VariantKind::Layered;
    v.layers = arg;
  } else if (head == "truncated") {
    v.kind = VariantKind::Truncated;
    v.rows = arg;
  } else {
    throw std::invalid_argument("unknown variant '" + text + "'");
  }
  if ((v.kind == VariantKind::Layered || v.kind == VariantKind::Truncated) && arg < 1) {
    throw std::invalid_argument("variant '" + head + "' needs a positive argument");
  }
  return v;
}

std::string Variant::name() const {
  switch (kind) {
    case VariantKind::Full: return "full";
    case VariantKind::Diagonal: return "diag";
    case VariantKind::IntegralRestriction: return "ir";
    case VariantKind::Layered: return "layered:" + std::to_string(layers);
    case VariantKind::Truncated: return "truncated:" + std::to_string(rows);
  }
  return "full";
}

int CodeSpec::info_length() const {
  switch (variant.kind) {
    case VariantKind::Full: return n * n * (delay / n);
    case VariantKind::Diagonal:
    case VariantKind::IntegralRestriction: return n;
    case VariantKind::Layered: return variant.layers * n;
    case VariantKind::Truncated: return n * n;
  }
  return n * n;
}

int CodeSpec::rows() const {
  return variant.kind == VariantKind::Truncated ? variant.rows : n;
}

bool CodeSpec::isometric() const { return variant.kind != VariantKind::Truncated; }

CodeSpec make_code_spec(const NonNormCertificate& cert, const UnitaryGenerator& generator,
                        Variant variant, int delay) {
  CodeSpec spec;
  spec.n = cert.n;
  if (spec.n < 1) throw std::invalid_argument("code dimension must be positive");
  if (generator.dim() != spec.n || generator.entries.cols() != spec.n) {
    throw std::invalid_argument("generator is " + std::to_string(generator.dim()) +
                                "-dimensional, code needs " + std::to_string(spec.n));
  }
  spec.cert = cert;
  spec.generator = generator;
  spec.variant = variant;
  spec.gamma = cert.gamma();
  if (std::abs(std::abs(spec.gamma) - 1.0) > 1e-12) {
    throw std::invalid_argument("gamma must have unit magnitude");
  }
  spec.delay = delay == 0 ? spec.n : delay;
  if (spec.delay % spec.n != 0) throw std::invalid_argument("delay must be a multiple of n");
  if (variant.kind != VariantKind::Full && spec.delay != spec.n) {
    throw std::invalid_argument("only the full variant supports stacked delays");
  }
  if (variant.kind == VariantKind::Layered && (variant.layers < 1 || variant.layers > spec.n)) {
    throw std::invalid_argument("layer count out of range");
  }
  if (variant.kind == VariantKind::Truncated && (variant.rows < 1 || variant.rows >= spec.n)) {
    throw std::invalid_argument("truncation must keep between 1 and n-1 rows");
  }
  return spec;
}

CodeSpec build_code(int n, FieldTag field, Variant variant, int delay, const SearchLimits& limits) {
  const auto cert = field == FieldTag::QAM ? nonnorm_qam(n, limits) : nonnorm_hex(n, limits);
  return make_code_spec(cert, generator_for(n, field, limits), variant, delay);
}

CodeSpec example_2x2_spec() {
  const Ring zi = Ring::GaussianZi;
  const auto cert = certificate_for_gamma(2, FieldTag::QAM, {2, 1, zi}, {1, 2, zi});
  return make_code_spec(cert, alternate_2x2_generator());
}

CMatrix gamma_matrix(cdouble gamma, int n) {
  if (n < 1) throw std::invalid_argument("gamma_matrix dimension must be positive");
  CMatrix g = CMatrix::Zero(n, n);
  g(0, n - 1) = gamma;
  for (int i = 1; i < n; ++i) g(i, i - 1) = 1.0;
  return g;
}

CodeMatrix encode(const CodeSpec& spec, const std::vector<cdouble>& f) {
  const int n = spec.n;
  require_length(f, static_cast<std::size_t>(n * n), "encode");
  CMatrix x = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) add_layer(x, layer_row(spec, f, j * n, n), j, spec.gamma);
  return {x, f, true};
}

CVector layer_vectorize(const CMatrix& x) {
  const auto n = x.rows();
  CVector v(n * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index c = 0; c < n; ++c) v(j * n + c) = x((c + j) % n, c);
  }
  return v;
}

CMatrix vectorization_matrix(const CodeSpec& spec) {
  const int n = spec.n;
  CMatrix rv = CMatrix::Zero(n * n, n * n);
  for (int j = 0; j < n; ++j) {
    CMatrix block = spec.generator.entries;
    // Gamma^(j): j trailing gamma entries on the diagonal
    for (int c = n - j; c < n; ++c) block.col(c) *= spec.gamma;
    rv.block(j * n, j * n, n, n) = block;
  }
  return rv;
}

RMatrix real_stacking(const CMatrix& rv) {
  const auto r = rv.rows(), c = rv.cols();
  RMatrix out(2 * r, 2 * c);
  out.topLeftCorner(r, c) = rv.real();
  out.topRightCorner(r, c) = rv.imag();
  out.bottomLeftCorner(r, c) = -rv.imag();
  out.bottomRightCorner(r, c) = rv.real();
  return out;
}

std::vector<CMatrix> ld_matrices(const CodeSpec& spec) {
  const int n = spec.n;
  const CMatrix gam = gamma_matrix(spec.gamma, n);
  std::vector<CMatrix> out;
  for (int u = 1; u <= n; ++u) {
    CMatrix power = CMatrix::Identity(n, n);
    for (int k = 0; k < n - u; ++k) power = gam * power;
    CMatrix a(n * n, n);
    for (int i = 0; i < n; ++i) {
      const CMatrix diag_row = spec.generator.entries.row(i).transpose().asDiagonal();
      a.block(i * n, 0, n, n) = power * diag_row;
    }
    out.push_back(std::move(a));
  }
  return out;
}

CodeMatrix diagonal_variant(const CodeSpec& spec, const std::vector<cdouble>& f) {
  require_length(f, static_cast<std::size_t>(spec.n), "diagonal_variant");
  const CVector d = layer_row(spec, f, 0, spec.n);
  return {CMatrix(d.asDiagonal()), f, true};
}

CodeMatrix integral_restriction(const CodeSpec& spec, const std::vector<cdouble>& s) {
  const int n = spec.n;
  require_length(s, static_cast<std::size_t>(n), "integral_restriction");
  CMatrix x = CMatrix::Zero(n, n);
  // Gamma^k has ones (or gamma above the wrap) on the k-th cyclic subdiagonal.
  for (int k = 0; k < n; ++k) add_layer(x, CVector::Constant(n, s[k]), k, spec.gamma);
  return {x, s, true};
}

CodeMatrix layered_variant(const CodeSpec& spec, int layers, const std::vector<cdouble>& f) {
  const int n = spec.n;
  if (layers < 1 || layers > n) throw std::invalid_argument("layer count out of range");
  require_length(f, static_cast<std::size_t>(layers * n), "layered_variant");
  CMatrix x = CMatrix::Zero(n, n);
  for (int j = 0; j < layers; ++j) add_layer(x, layer_row(spec, f, j * n, n), j, spec.gamma);
  return {x, f, true};
}

CodeMatrix masked_layers(const CodeSpec& spec, int active, const std::vector<cdouble>& f) {
  const int n = spec.n;
  if (active < 1 || active > n) throw std::invalid_argument("active row count out of range");
  require_length(f, static_cast<std::size_t>(n * n), "masked_layers");
  CMatrix x = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) add_layer(x, layer_row(spec, f, j * n, active), j, spec.gamma);
  return {x, f, true};
}

CodeMatrix reshape_delay(const CodeSpec& spec, DelayMode mode,
                         const std::vector<std::vector<cdouble>>& blocks) {
  const int n = spec.n;
  if (mode.kind == DelayMode::Truncate) {
    if (blocks.size() != 1) throw std::invalid_argument("truncation takes exactly one block");
    if (mode.amount < 1 || mode.amount >= n) {
      throw std::invalid_argument("truncation must keep between 1 and n-1 rows");
    }
    auto cw = encode(spec, blocks.front());
    return {cw.entries.topRows(mode.amount), cw.info, false};
  }
  if (mode.amount < 1 || blocks.size() != static_cast<std::size_t>(mode.amount)) {
    throw std::invalid_argument("stacking needs one block per repetition");
  }
  CMatrix x(n, n * mode.amount);
  std::vector<cdouble> info;
  for (int k = 0; k < mode.amount; ++k) {
    auto cw = encode(spec, blocks[k]);
    x.middleCols(k * n, n) = cw.entries;
    info.insert(info.end(), blocks[k].begin(), blocks[k].end());
  }
  return {x, info, true};
}

CodeMatrix encode_codeword(const CodeSpec& spec, const std::vector<cdouble>& f) {
  require_length(f, static_cast<std::size_t>(spec.info_length()), "encode_codeword");
  switch (spec.variant.kind) {
    case VariantKind::Full: {
      if (spec.delay == spec.n) return encode(spec, f);
      const int k = spec.delay / spec.n;
      const auto block = static_cast<std::size_t>(spec.n * spec.n);
      std::vector<std::vector<cdouble>> blocks;
      for (int b = 0; b < k; ++b) {
        blocks.emplace_back(f.begin() + b * block, f.begin() + (b + 1) * block);
      }
      return reshape_delay(spec, {DelayMode::Stack, k}, blocks);
    }
    case VariantKind::Diagonal: return diagonal_variant(spec, f);
    case VariantKind::IntegralRestriction: return integral_restriction(spec, f);
    case VariantKind::Layered: return layered_variant(spec, spec.variant.layers, f);
    case VariantKind::Truncated:
      return reshape_delay(spec, {DelayMode::Truncate, spec.variant.rows}, {f});
  }
  throw std::logic_error("unhandled variant");
}

std::vector<CMatrix> dispersion_basis(const CodeSpec& spec) {
  const int k = spec.info_length();
  std::vector<CMatrix> basis;
  basis.reserve(k);
  std::vector<cdouble> e(k, 0.0);
  for (int u = 0; u < k; ++u) {
    e[u] = 1.0;
    basis.push_back(encode_codeword(spec, e).entries);
    e[u] = 0.0;
  }
  return basis;
}

}  // namespace perfectst
