#pragma once

// Unitary lattice generators G: the odd-degree circulant lattices from
// cyclotomic subfields, the 2^s cyclotomic embeddings, the HEX C2 matrix and
// their Kronecker combinations.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "perfectst/algint.hpp"
#include "perfectst/types.hpp"

namespace perfectst {

enum class OriginKind { OddDegree, PowerOfTwo, HexC2, Kronecker, Explicit };

std::string to_string(OriginKind kind);
OriginKind origin_kind_from_string(const std::string& s);

struct GeneratorOrigin {
  OriginKind kind = OriginKind::Explicit;
  // OddDegree
  int n1 = 0;
  std::uint64_t p = 0;
  std::uint64_t r = 0;
  std::uint64_t lambda = 0;
  // PowerOfTwo
  int s = 0;
  // Kronecker: left factor then right factor
  std::vector<GeneratorOrigin> parts;
  // Explicit
  std::string label;

  std::string describe() const;
  bool operator==(const GeneratorOrigin&) const = default;
};

struct UnitaryGenerator {
  CMatrix entries;
  GeneratorOrigin origin;
  double unitarity_defect = 0.0;

  int dim() const { return static_cast<int>(entries.rows()); }
};

/// Wraps an arbitrary square matrix; the defect is measured, not enforced.
UnitaryGenerator explicit_generator(const CMatrix& entries, std::string label);

struct OddLatticeIngredients {
  int n1 = 1;
  std::uint64_t p = 0;
  std::uint64_t r = 0;
  std::uint64_t lambda = 0;
  std::uint64_t m = 0;  ///< (p - 1) / 2
  cdouble alpha;
  cdouble omega;
  /// [x, sigma(x), ..., sigma^{n1-1}(x)]
  std::vector<cdouble> x_orbit;
};

/// Runs the cyclotomic pipeline for odd n1: p is the smallest odd prime with
/// p = 1 (mod n1), r the smallest primitive root unless `generator` is given
/// (it must then be a primitive root mod p).
OddLatticeIngredients odd_lattice_ingredients(int n1,
                                              std::optional<std::uint64_t> generator = {},
                                              const SearchLimits& limits = {});

UnitaryGenerator odd_lattice(int n1, std::optional<std::uint64_t> generator = {},
                             const SearchLimits& limits = {});
UnitaryGenerator odd_lattice_from(const OddLatticeIngredients& ingredients);

/// First row of G_{n1} from the closed form
///   (1/p) w^lambda alpha sum_k (-1)^{k n1 + j} (1 - w^{r^{k n1 + j}}).
std::vector<cdouble> odd_first_row_closed_form(const OddLatticeIngredients& ingredients);

/// sum_{a} sigma^a(x sigma^t(x)); equals p^2 delta_{0,t}.
cdouble trace_orthogonality(const OddLatticeIngredients& ingredients, int t);

/// (w^lambda alpha)^2, which should equal (-1)^m p.
cdouble alpha_square_identity(const OddLatticeIngredients& ingredients);

/// (1/sqrt(2^s)) [w^{i 5^k}] with w = exp(2 pi i / 2^{s+2}).
UnitaryGenerator pow2_lattice(int s);

/// (1/sqrt 2) [[1, i], [1, -i]]
UnitaryGenerator hex_c2();

/// Kronecker product of generators of coprime dimension.
UnitaryGenerator kronecker_combine(const UnitaryGenerator& left, const UnitaryGenerator& right);

UnitaryGenerator generator_for(int n, FieldTag field, const SearchLimits& limits = {});

/// Rebuilds a generator from its recorded origin (same construction path).
UnitaryGenerator generator_from_origin(const GeneratorOrigin& origin,
                                       const SearchLimits& limits = {});

/// The alternate 2x2 basis (1/sqrt 2)[[1, 1], [w8^3, w8^7]].
UnitaryGenerator alternate_2x2_generator();

/// min over cyclic shifts c of max_{ij} |a(i, (j + c) mod n) - b(i, j)|.
double cyclic_alignment_error(const CMatrix& a, const CMatrix& b, int* best_shift = nullptr);

}  // namespace perfectst
