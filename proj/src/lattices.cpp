#include "perfectst/lattices.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace perfectst {

double unitarity_defect(const CMatrix& m) {
  const CMatrix gram = m * m.adjoint();
  return (gram - CMatrix::Identity(m.rows(), m.rows())).cwiseAbs().maxCoeff();
}

CMatrix kronecker(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

std::string to_string(OriginKind kind) {
  switch (kind) {
    case OriginKind::OddDegree: return "odd_degree";
    case OriginKind::PowerOfTwo: return "power_of_two";
    case OriginKind::HexC2: return "hex_c2";
    case OriginKind::Kronecker: return "kronecker";
    case OriginKind::Explicit: return "explicit";
  }
  return "explicit";
}

OriginKind origin_kind_from_string(const std::string& s) {
  for (auto k : {OriginKind::OddDegree, OriginKind::PowerOfTwo, OriginKind::HexC2,
                 OriginKind::Kronecker, OriginKind::Explicit}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown generator origin '" + s + "'");
}

std::string GeneratorOrigin::describe() const {
  std::ostringstream os;
  switch (kind) {
    case OriginKind::OddDegree:
      os << "OddDegree(n1=" << n1 << ", p=" << p << ", r=" << r << ", lambda=" << lambda << ")";
      break;
    case OriginKind::PowerOfTwo: os << "PowerOfTwo(s=" << s << ")"; break;
    case OriginKind::HexC2: os << "HexC2"; break;
    case OriginKind::Kronecker:
      os << "Kronecker(";
      for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? ", " : "") << parts[i].describe();
      os << ")";
      break;
    case OriginKind::Explicit: os << "Explicit(" << label << ")"; break;
  }
  return os.str();
}

UnitaryGenerator explicit_generator(const CMatrix& entries, std::string label) {
  if (entries.rows() != entries.cols() || entries.rows() == 0) {
    throw std::invalid_argument("generator must be a non-empty square matrix");
  }
  GeneratorOrigin origin;
  origin.kind = OriginKind::Explicit;
  origin.label = std::move(label);
  return {entries, origin, unitarity_defect(entries)};
}

OddLatticeIngredients odd_lattice_ingredients(int n1, std::optional<std::uint64_t> generator,
                                              const SearchLimits& limits) {
  if (n1 < 1 || n1 % 2 == 0) {
    throw ArithmeticError("odd lattice requires an odd dimension, got " + std::to_string(n1));
  }
  OddLatticeIngredients ing;
  ing.n1 = n1;
  // Smallest odd prime p = 1 (mod n1); stepping by 2 n1 skips even candidates.
  ing.p = dirichlet_prime(1, 2 * static_cast<std::uint64_t>(n1), limits);
  if (ing.p > limits.lattice_prime_cap) {
    throw SearchCapExceeded("lattice prime " + std::to_string(ing.p) + " exceeds cap " +
                            std::to_string(limits.lattice_prime_cap));
  }
  const std::uint64_t p = ing.p;
  if (generator) {
    if (*generator % p == 0 || mod_order(static_cast<std::int64_t>(*generator), p) != p - 1) {
      throw ArithmeticError(std::to_string(*generator) + " is not a primitive root mod " +
                            std::to_string(p));
    }
    ing.r = *generator % p;
  } else {
    ing.r = primitive_root(p);
  }
  ing.m = (p - 1) / 2;
  ing.lambda = mod_inverse(static_cast<std::int64_t>(ing.r) - 1, p);

  std::vector<cdouble> w(p);
  for (std::uint64_t e = 0; e < p; ++e) {
    w[e] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(p));
  }
  ing.omega = w[1 % p];
  const std::uint64_t order = p - 1;
  std::vector<std::uint64_t> rpow(order);
  rpow[0] = 1;
  for (std::uint64_t k = 1; k < order; ++k) rpow[k] = rpow[k - 1] * ing.r % p;

  // sigma^j(z) with sigma(w) = w^r: substitute w -> w^{r^j} in
  // z = w^lambda * prod_{k<m} (1 - w^{r^k}) * (1 - w).
  std::vector<cdouble> z(order);
  for (std::uint64_t j = 0; j < order; ++j) {
    cdouble prod = 1.0;
    for (std::uint64_t k = 0; k < ing.m; ++k) prod *= 1.0 - w[rpow[(j + k) % order]];
    if (j == 0) ing.alpha = prod;
    z[j] = w[ing.lambda * rpow[j] % p] * prod * (1.0 - w[rpow[j]]);
  }

  const std::uint64_t terms = order / static_cast<std::uint64_t>(n1);
  ing.x_orbit.assign(n1, 0.0);
  for (int i = 0; i < n1; ++i) {
    cdouble acc = 0.0;
    for (std::uint64_t k = 1; k <= terms; ++k) acc += z[(i + k * n1) % order];
    ing.x_orbit[i] = acc;
  }
  return ing;
}

UnitaryGenerator odd_lattice_from(const OddLatticeIngredients& ing) {
  const int n1 = ing.n1;
  const double p = static_cast<double>(ing.p);
  CMatrix g(n1, n1);
  double residue = 0.0;
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n1; ++j) {
      const cdouble v = ing.x_orbit[(i + j) % n1] / p;
      residue = std::max(residue, std::abs(v.imag()));
      g(i, j) = v.real();
    }
  }
  if (residue > 1e-9) {
    throw std::runtime_error("odd lattice has imaginary residue " + std::to_string(residue));
  }
  GeneratorOrigin origin;
  origin.kind = OriginKind::OddDegree;
  origin.n1 = n1;
  origin.p = ing.p;
  origin.r = ing.r;
  origin.lambda = ing.lambda;
  return {g, origin, unitarity_defect(g)};
}

UnitaryGenerator odd_lattice(int n1, std::optional<std::uint64_t> generator,
                             const SearchLimits& limits) {
  return odd_lattice_from(odd_lattice_ingredients(n1, generator, limits));
}

std::vector<cdouble> odd_first_row_closed_form(const OddLatticeIngredients& ing) {
  const std::uint64_t p = ing.p;
  const auto n1 = static_cast<std::uint64_t>(ing.n1);
  const std::uint64_t terms = (p - 1) / n1;
  auto w = [p](std::uint64_t e) {
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e % p) /
                               static_cast<double>(p));
  };
  const cdouble lead = w(ing.lambda) * ing.alpha / static_cast<double>(p);
  std::vector<cdouble> row(n1);
  for (std::uint64_t j = 0; j < n1; ++j) {
    cdouble acc = 0.0;
    for (std::uint64_t k = 1; k <= terms; ++k) {
      const std::uint64_t e = k * n1 + j;
      const double sign = (e % 2 == 0) ? 1.0 : -1.0;
      acc += sign * (1.0 - w(mod_pow(ing.r, e, p)));
    }
    row[j] = lead * acc;
  }
  return row;
}

cdouble trace_orthogonality(const OddLatticeIngredients& ing, int t) {
  const int n1 = ing.n1;
  const int shift = ((t % n1) + n1) % n1;
  cdouble acc = 0.0;
  for (int a = 0; a < n1; ++a) acc += ing.x_orbit[a] * ing.x_orbit[(a + shift) % n1];
  return acc;
}

cdouble alpha_square_identity(const OddLatticeIngredients& ing) {
  const cdouble w_lambda =
      std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(ing.lambda % ing.p) /
                          static_cast<double>(ing.p));
  const cdouble v = w_lambda * ing.alpha;
  return v * v;
}

UnitaryGenerator pow2_lattice(int s) {
  if (s < 0 || s > 20) throw std::invalid_argument("pow2_lattice exponent out of range");
  const std::uint64_t m = 1ULL << s;
  const std::uint64_t big_m = m << 2;
  CMatrix g(m, m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  std::uint64_t five_k = 1;
  for (std::uint64_t k = 0; k < m; ++k) {
    for (std::uint64_t i = 0; i < m; ++i) {
      const std::uint64_t e = i * five_k % big_m;
      g(i, k) = scale * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) /
                                            static_cast<double>(big_m));
    }
    five_k = five_k * 5 % big_m;
  }
  GeneratorOrigin origin;
  origin.kind = OriginKind::PowerOfTwo;
  origin.s = s;
  return {g, origin, unitarity_defect(g)};
}

UnitaryGenerator hex_c2() {
  const double h = 1.0 / std::numbers::sqrt2;
  CMatrix g(2, 2);
  g << cdouble(h, 0), cdouble(0, h), cdouble(h, 0), cdouble(0, -h);
  GeneratorOrigin origin;
  origin.kind = OriginKind::HexC2;
  return {g, origin, unitarity_defect(g)};
}

UnitaryGenerator kronecker_combine(const UnitaryGenerator& left, const UnitaryGenerator& right) {
  if (std::gcd(left.dim(), right.dim()) != 1) {
    throw std::invalid_argument("kronecker_combine needs coprime dimensions, got " +
                                std::to_string(left.dim()) + " and " +
                                std::to_string(right.dim()));
  }
  GeneratorOrigin origin;
  origin.kind = OriginKind::Kronecker;
  origin.parts = {left.origin, right.origin};
  const CMatrix g = kronecker(left.entries, right.entries);
  return {g, origin, unitarity_defect(g)};
}

UnitaryGenerator generator_for(int n, FieldTag field, const SearchLimits& limits) {
  const auto [s, n1] = two_adic_split(n);
  if (field == FieldTag::QAM) {
    if (n1 == 1) return pow2_lattice(s);
    if (s == 0) return odd_lattice(n1, {}, limits);
    return kronecker_combine(odd_lattice(n1, {}, limits), pow2_lattice(s));
  }
  if (s > 1) throw std::invalid_argument("HEX shaping undefined for multiples of 4");
  if (s == 0) return odd_lattice(n1, {}, limits);
  if (n1 == 1) return hex_c2();
  return kronecker_combine(odd_lattice(n1, {}, limits), hex_c2());
}

UnitaryGenerator generator_from_origin(const GeneratorOrigin& origin, const SearchLimits& limits) {
  switch (origin.kind) {
    case OriginKind::OddDegree: {
      auto g = odd_lattice(origin.n1, origin.r, limits);
      if (g.origin.p != origin.p || g.origin.lambda != origin.lambda) {
        throw std::invalid_argument("odd-degree origin is inconsistent: " + origin.describe());
      }
      return g;
    }
    case OriginKind::PowerOfTwo: return pow2_lattice(origin.s);
    case OriginKind::HexC2: return hex_c2();
    case OriginKind::Kronecker: {
      if (origin.parts.size() != 2) throw std::invalid_argument("kronecker origin needs 2 parts");
      return kronecker_combine(generator_from_origin(origin.parts[0], limits),
                               generator_from_origin(origin.parts[1], limits));
    }
    case OriginKind::Explicit: break;
  }
  throw std::invalid_argument("explicit generators cannot be rebuilt from their origin");
}

UnitaryGenerator alternate_2x2_generator() {
  const double h = 1.0 / std::numbers::sqrt2;
  auto w8 = [](int e) { return std::polar(1.0, 2.0 * std::numbers::pi * e / 8.0); };
  CMatrix g(2, 2);
  g << h, h, h * w8(3), h * w8(7);
  return explicit_generator(g, "basis {1, w8^3}");
}

double cyclic_alignment_error(const CMatrix& a, const CMatrix& b, int* best_shift) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("cyclic alignment needs equal shapes");
  }
  const auto n = a.cols();
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < n; ++c) {
    double err = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        err = std::max(err, std::abs(a(i, (j + c) % n) - b(i, j)));
      }
    }
    if (err < best) {
      best = err;
      if (best_shift) *best_shift = static_cast<int>(c);
    }
  }
  return best;
}

}  // namespace perfectst
