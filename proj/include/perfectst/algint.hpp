#pragma once

// Exact integer and quadratic-integer arithmetic used by the non-norm
// element searches. Everything here is a pure function of its inputs.

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace perfectst {

/// Raised for invalid arguments to the number-theoretic routines.
class ArithmeticError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a bounded search (progression scan, lattice prime) runs out.
class SearchCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Ring { GaussianZi, EisensteinZw3 };
enum class FieldTag { QAM, HEX };

Ring ring_of(FieldTag field);
std::string to_string(Ring ring);
std::string to_string(FieldTag field);
FieldTag field_from_string(const std::string& s);

/// a + b*u with u = i (Gaussian) or u = w3 = exp(2*pi*i/3) (Eisenstein).
struct GaussLikeInt {
  std::int64_t a = 0;
  std::int64_t b = 0;
  Ring ring = Ring::GaussianZi;

  std::int64_t norm() const;
  GaussLikeInt conj() const;
  std::complex<double> value() const;

  bool operator==(const GaussLikeInt&) const = default;
};

GaussLikeInt operator*(const GaussLikeInt& x, const GaussLikeInt& y);
GaussLikeInt operator-(const GaussLikeInt& x);

/// The unit group: {±1, ±i} or {±1, ±w3, ±w3^2}.
std::vector<GaussLikeInt> units(Ring ring);
bool is_associate(const GaussLikeInt& x, const GaussLikeInt& y);
std::string to_string(const GaussLikeInt& x);

struct SearchLimits {
  std::uint64_t progression_cap = 10'000'000;
  /// Largest prime p accepted for the odd-degree lattice.
  std::uint64_t lattice_prime_cap = 10'000;

  /// Defaults, with PERFECTST_SEARCH_CAP overriding progression_cap.
  static SearchLimits from_env();
};

bool is_prime(std::uint64_t m);
std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
std::uint64_t mod_inverse(std::int64_t a, std::uint64_t m);
std::vector<std::uint64_t> prime_factors(std::uint64_t m);

std::uint64_t mod_order(std::int64_t a, std::uint64_t m);

/// Smallest r >= 2 generating (Z/pZ)^*.
std::uint64_t primitive_root(std::uint64_t p);

struct Congruence {
  std::int64_t residue;
  std::uint64_t modulus;
};

/// Unique b in [0, prod m_i) solving every congruence.
std::uint64_t crt(std::span<const Congruence> system);

/// First prime in the progression b, b+m, b+2m, ... (b reduced into [1, m]).
std::uint64_t dirichlet_prime(std::int64_t b, std::uint64_t m,
                              const SearchLimits& limits = {});

/// A prime of norm q in the ring, canonicalized: a > 0, b >= 0, a maximal,
/// then b minimal.
GaussLikeInt split_prime(std::uint64_t q, Ring ring);

struct NonNormCertificate {
  int n = 0;
  int n1 = 1;  ///< odd part of n
  int s = 0;   ///< 2-adic exponent of n
  std::uint64_t p = 0;  ///< 0 when n1 == 1 (no odd tower)
  std::uint64_t q = 0;
  GaussLikeInt pi1;
  GaussLikeInt gamma_num;
  GaussLikeInt gamma_den;
  FieldTag field = FieldTag::QAM;

  std::complex<double> gamma() const;
};

/// Splits n = 2^s * n1 with n1 odd.
std::pair<int, int> two_adic_split(int n);

NonNormCertificate nonnorm_qam(int n, const SearchLimits& limits = {});
NonNormCertificate nonnorm_hex(int n, const SearchLimits& limits = {});

/// Certificate for an externally supplied gamma = num/den (e.g. a published
/// table entry). p is filled from the standard tower when n1 > 1.
NonNormCertificate certificate_for_gamma(int n, FieldTag field,
                                         const GaussLikeInt& num,
                                         const GaussLikeInt& den);

struct GammaCheck {
  std::string name;
  bool passed = false;
  /// True when the condition depends on the chosen (p, 2-power) tower rather
  /// than on gamma and its field alone.
  bool tower_dependent = false;
  std::string detail;
};

struct GammaReport {
  std::vector<GammaCheck> checks;

  bool all_passed() const;
  bool tower_independent_passed() const;
  const GammaCheck* find(const std::string& name) const;
};

/// Machine-checkable conditions of the construction. Non-norm-ness itself is
/// the theorem's content and is not checked.
GammaReport validate_gamma(const NonNormCertificate& cert);

}  // namespace perfectst
