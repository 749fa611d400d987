#pragma once

// Code assembly: X = sum_j Gamma^j diag(f_j G) and its variants, plus the
// vectorization, real-stacking and linear-dispersion views of the same map.
//
// Info vectors are layer-major: f = [f_{0,0} .. f_{0,n-1}, f_{1,0} .. ],
// so block j (entries j*n .. j*n+n-1) feeds layer j.

#include <string>
#include <vector>

#include "perfectst/algint.hpp"
#include "perfectst/lattices.hpp"
#include "perfectst/types.hpp"

namespace perfectst {

enum class ConstellationKind { QAM, HEX };

struct Constellation {
  ConstellationKind kind = ConstellationKind::QAM;
  /// QAM: levels per axis M (M^2 points). HEX: radius in lattice units.
  int param = 2;
  /// Sorted by (real, imag); the index order defines lexicographic order of
  /// info vectors.
  std::vector<cdouble> points;

  /// Odd-coordinate M^2-QAM, M a power of two.
  static Constellation qam(int levels_per_axis);
  /// Eisenstein points a + b w3 with |a + b w3| <= radius, shifted to zero mean.
  static Constellation hex(int radius);
  /// "qam:M" or "hex:R".
  static Constellation parse(const std::string& text);

  std::string name() const;
  std::size_t size() const { return points.size(); }
  double average_energy() const;
  int bits_per_symbol() const;
  /// Gray-coded bits per QAM axis; HEX uses the plain point index.
  std::uint32_t bit_label(std::size_t index) const;
  /// Per-axis PAM alphabet (QAM only).
  std::vector<double> axis_levels() const;
};

enum class VariantKind { Full, Diagonal, IntegralRestriction, Layered, Truncated };

struct Variant {
  VariantKind kind = VariantKind::Full;
  int layers = 0;  ///< Layered
  int rows = 0;    ///< Truncated

  static Variant parse(const std::string& text);
  std::string name() const;
  bool operator==(const Variant&) const = default;
};

struct CodeSpec {
  int n = 0;
  int delay = 0;  ///< T
  NonNormCertificate cert;
  UnitaryGenerator generator;
  Variant variant;
  cdouble gamma;

  /// Info symbols carried by one T-long codeword.
  int info_length() const;
  int rows() const;
  /// Whether Tr(X^H X) = |f|^2 holds for the variant.
  bool isometric() const;
};

/// Checks shapes, |gamma| = 1 and the delay; does not require unitarity so
/// that corrupted generators can still be loaded and reported on.
CodeSpec make_code_spec(const NonNormCertificate& cert, const UnitaryGenerator& generator,
                        Variant variant = {}, int delay = 0);

/// Certificate search + generator construction for (n, field).
CodeSpec build_code(int n, FieldTag field, Variant variant = {}, int delay = 0,
                    const SearchLimits& limits = {});

/// The worked 2x2 example: gamma = (2+i)/(1+2i), G = (1/sqrt 2)[[1,1],[w8^3,w8^7]].
CodeSpec example_2x2_spec();

struct CodeMatrix {
  CMatrix entries;
  std::vector<cdouble> info;
  /// False for truncated codewords: the shaping isometry is lost.
  bool isometric = true;
};

CMatrix gamma_matrix(cdouble gamma, int n);

/// Full-rate n x n block.
CodeMatrix encode(const CodeSpec& spec, const std::vector<cdouble>& f);

/// The layer-by-layer vectorization matching f * R_v: block j, slot c is
/// X((c + j) mod n, c).
CVector layer_vectorize(const CMatrix& x);

CMatrix vectorization_matrix(const CodeSpec& spec);
RMatrix real_stacking(const CMatrix& rv);

/// The n matrices A_u (each n^2 x n), u = 1..n in order.
std::vector<CMatrix> ld_matrices(const CodeSpec& spec);

CodeMatrix diagonal_variant(const CodeSpec& spec, const std::vector<cdouble>& f);
CodeMatrix integral_restriction(const CodeSpec& spec, const std::vector<cdouble>& s);
CodeMatrix layered_variant(const CodeSpec& spec, int layers, const std::vector<cdouble>& f);
/// sum_j Gamma^j diag(f_j T G) where T keeps the first `active` entries of f_j.
CodeMatrix masked_layers(const CodeSpec& spec, int active, const std::vector<cdouble>& f);

struct DelayMode {
  enum Kind { Truncate, Stack } kind = Stack;
  int amount = 1;  ///< rows kept (Truncate) or blocks stacked (Stack)
};

CodeMatrix reshape_delay(const CodeSpec& spec, DelayMode mode,
                         const std::vector<std::vector<cdouble>>& blocks);

/// Dispatches on spec.variant and spec.delay; f has spec.info_length() entries.
CodeMatrix encode_codeword(const CodeSpec& spec, const std::vector<cdouble>& f);

/// B_u = encode_codeword(e_u), so X = sum_u f_u B_u.
std::vector<CMatrix> dispersion_basis(const CodeSpec& spec);

}  // namespace perfectst
