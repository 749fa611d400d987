#include "perfectst/algint.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <sstream>

namespace perfectst {

namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t reduce(std::int64_t a, std::uint64_t m) {
  if (a >= 0) return static_cast<std::uint64_t>(a) % m;
  const std::uint64_t r = static_cast<std::uint64_t>(-(a + 1)) % m;
  return (m - 1 - r) % m;
}

std::uint64_t isqrt(std::uint64_t v) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(v)));
  while (r > 0 && static_cast<u128>(r) * r > v) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= v) ++r;
  return r;
}

std::uint64_t euler_phi(std::uint64_t m) {
  std::uint64_t phi = m;
  for (auto f : prime_factors(m)) phi = phi / f * (f - 1);
  return phi;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

Ring ring_of(FieldTag field) {
  return field == FieldTag::QAM ? Ring::GaussianZi : Ring::EisensteinZw3;
}

std::string to_string(Ring ring) {
  return ring == Ring::GaussianZi ? "gaussian" : "eisenstein";
}

std::string to_string(FieldTag field) {
  return field == FieldTag::QAM ? "qam" : "hex";
}

FieldTag field_from_string(const std::string& s) {
  if (s == "qam" || s == "QAM") return FieldTag::QAM;
  if (s == "hex" || s == "HEX") return FieldTag::HEX;
  throw std::invalid_argument("unknown field tag '" + s + "' (expected qam or hex)");
}

std::int64_t GaussLikeInt::norm() const {
  if (ring == Ring::GaussianZi) return a * a + b * b;
  return a * a - a * b + b * b;
}

GaussLikeInt GaussLikeInt::conj() const {
  if (ring == Ring::GaussianZi) return {a, -b, ring};
  // conj(w) = w^2 = -1 - w
  return {a - b, -b, ring};
}

std::complex<double> GaussLikeInt::value() const {
  const std::complex<double> u =
      ring == Ring::GaussianZi
          ? std::complex<double>(0.0, 1.0)
          : std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  return static_cast<double>(a) + static_cast<double>(b) * u;
}

GaussLikeInt operator*(const GaussLikeInt& x, const GaussLikeInt& y) {
  if (x.ring != y.ring) throw ArithmeticError("ring mismatch in product");
  if (x.ring == Ring::GaussianZi) {
    return {x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a, x.ring};
  }
  // w^2 = -1 - w
  const std::int64_t bd = x.b * y.b;
  return {x.a * y.a - bd, x.a * y.b + x.b * y.a - bd, x.ring};
}

GaussLikeInt operator-(const GaussLikeInt& x) { return {-x.a, -x.b, x.ring}; }

std::vector<GaussLikeInt> units(Ring ring) {
  if (ring == Ring::GaussianZi) {
    return {{1, 0, ring}, {0, 1, ring}, {-1, 0, ring}, {0, -1, ring}};
  }
  return {{1, 0, ring},  {0, 1, ring},  {-1, -1, ring},
          {-1, 0, ring}, {0, -1, ring}, {1, 1, ring}};
}

bool is_associate(const GaussLikeInt& x, const GaussLikeInt& y) {
  if (x.ring != y.ring) return false;
  for (const auto& u : units(x.ring)) {
    if (u * x == y) return true;
  }
  return false;
}

std::string to_string(const GaussLikeInt& x) {
  std::ostringstream os;
  const char* sym = x.ring == Ring::GaussianZi ? "i" : "w";
  os << x.a << (x.b < 0 ? "-" : "+") << std::llabs(x.b) << sym;
  return os.str();
}

SearchLimits SearchLimits::from_env() {
  SearchLimits limits;
  if (const char* env = std::getenv("PERFECTST_SEARCH_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) limits.progression_cap = v;
  }
  return limits;
}

bool is_prime(std::uint64_t m) {
  if (m < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (m % p == 0) return m == p;
  }
  std::uint64_t d = m - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // This witness set is deterministic for all m < 2^64.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = mod_pow(a, d, m);
    if (x == 1 || x == m - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, m);
      if (x == m - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t mod_inverse(std::int64_t a, std::uint64_t m) {
  if (m < 2) throw ArithmeticError("modulus must be at least 2");
  __int128 old_r = static_cast<__int128>(reduce(a, m)), r = m;
  __int128 old_s = 1, s = 0;
  while (r != 0) {
    const __int128 quot = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - quot * r};
    std::tie(old_s, s) = std::pair{s, old_s - quot * s};
  }
  if (old_r != 1) throw ArithmeticError("not a unit");
  __int128 inv = old_s % static_cast<__int128>(m);
  if (inv < 0) inv += m;
  return static_cast<std::uint64_t>(inv);
}

std::vector<std::uint64_t> prime_factors(std::uint64_t m) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t f = 2; f * f <= m; f += (f == 2 ? 1 : 2)) {
    if (m % f == 0) {
      out.push_back(f);
      while (m % f == 0) m /= f;
    }
  }
  if (m > 1) out.push_back(m);
  return out;
}

std::uint64_t mod_order(std::int64_t a, std::uint64_t m) {
  if (m < 2) throw ArithmeticError("modulus must be at least 2");
  const std::uint64_t x = reduce(a, m);
  if (std::gcd(x, m) != 1) throw ArithmeticError("not a unit");
  std::uint64_t order = euler_phi(m);
  for (auto f : prime_factors(order)) {
    while (order % f == 0 && mod_pow(x, order / f, m) == 1) order /= f;
  }
  return order;
}

std::uint64_t primitive_root(std::uint64_t p) {
  if (p < 3 || !is_prime(p)) {
    throw ArithmeticError("primitive_root requires an odd prime, got " + std::to_string(p));
  }
  const auto factors = prime_factors(p - 1);
  for (std::uint64_t r = 2; r < p; ++r) {
    bool generator = true;
    for (auto f : factors) {
      if (mod_pow(r, (p - 1) / f, p) == 1) {
        generator = false;
        break;
      }
    }
    if (generator) return r;
  }
  throw ArithmeticError("no primitive root found");  // unreachable for primes
}

std::uint64_t crt(std::span<const Congruence> system) {
  if (system.empty()) throw ArithmeticError("crt needs at least one congruence");
  u128 value = 0;
  u128 modulus = 1;
  for (const auto& c : system) {
    if (c.modulus == 0) throw ArithmeticError("zero modulus");
    if (std::gcd(static_cast<std::uint64_t>(modulus), c.modulus) != 1) {
      throw ArithmeticError("crt moduli are not pairwise coprime");
    }
    const u128 next = modulus * c.modulus;
    if (next > static_cast<u128>(UINT64_MAX)) throw ArithmeticError("crt modulus overflow");
    const std::uint64_t r = reduce(c.residue, c.modulus);
    if (c.modulus == 1) {
      modulus = next;
      continue;
    }
    // value + modulus * t == r (mod c.modulus)
    const std::uint64_t cur = static_cast<std::uint64_t>(value % c.modulus);
    const std::uint64_t diff = (r + c.modulus - cur) % c.modulus;
    const std::uint64_t inv =
        mod_inverse(static_cast<std::int64_t>(modulus % c.modulus), c.modulus);
    const std::uint64_t t = mul_mod(diff, inv, c.modulus);
    value += modulus * t;
    modulus = next;
    value %= modulus;
  }
  return static_cast<std::uint64_t>(value);
}

std::uint64_t dirichlet_prime(std::int64_t b, std::uint64_t m, const SearchLimits& limits) {
  if (m == 0) throw ArithmeticError("zero modulus");
  const std::uint64_t start0 = reduce(b, m);
  if (std::gcd(start0, m) != 1 && m != 1) {
    throw ArithmeticError("dirichlet_prime requires gcd(b, m) = 1");
  }
  const std::uint64_t start = start0 == 0 ? m : start0;
  for (std::uint64_t k = 0; k < limits.progression_cap; ++k) {
    const u128 cand = static_cast<u128>(start) + static_cast<u128>(k) * m;
    if (cand > static_cast<u128>(UINT64_MAX)) break;
    if (is_prime(static_cast<std::uint64_t>(cand))) return static_cast<std::uint64_t>(cand);
  }
  throw SearchCapExceeded("progression cap exceeded scanning " + std::to_string(start) +
                          " mod " + std::to_string(m));
}

GaussLikeInt split_prime(std::uint64_t q, Ring ring) {
  if (!is_prime(q)) throw ArithmeticError(std::to_string(q) + " is not prime");
  if (q > (1ULL << 60)) throw ArithmeticError("prime too large for exact splitting");
  const auto qi = static_cast<std::int64_t>(q);
  std::vector<GaussLikeInt> found;
  if (ring == Ring::GaussianZi) {
    if (q % 4 != 1) throw ArithmeticError("inert or ramified: " + std::to_string(q) + " in Z[i]");
    for (std::int64_t a = 1; a * a <= qi; ++a) {
      const auto rest = static_cast<std::uint64_t>(qi - a * a);
      const auto b = static_cast<std::int64_t>(isqrt(rest));
      if (static_cast<std::uint64_t>(b * b) == rest) found.push_back({a, b, ring});
    }
  } else {
    if (q % 3 != 1) throw ArithmeticError("inert or ramified: " + std::to_string(q) + " in Z[w3]");
    // a^2 - ab + b^2 = q  =>  b = (a +- sqrt(4q - 3a^2)) / 2
    for (std::int64_t a = 1; 3 * a * a <= 4 * qi; ++a) {
      const auto disc = static_cast<std::uint64_t>(4 * qi - 3 * a * a);
      const auto root = static_cast<std::int64_t>(isqrt(disc));
      if (static_cast<std::uint64_t>(root * root) != disc) continue;
      for (std::int64_t num : {a - root, a + root}) {
        if (num >= 0 && num % 2 == 0) found.push_back({a, num / 2, ring});
      }
    }
  }
  if (found.empty()) throw ArithmeticError("no element of norm " + std::to_string(q));
  return *std::min_element(found.begin(), found.end(), [](const auto& x, const auto& y) {
    return x.a != y.a ? x.a > y.a : x.b < y.b;
  });
}

std::complex<double> NonNormCertificate::gamma() const {
  return gamma_num.value() / gamma_den.value();
}

std::pair<int, int> two_adic_split(int n) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  int s = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++s;
  }
  return {s, n};
}

namespace {

std::uint64_t tower_prime(int n1, FieldTag field, const SearchLimits& limits) {
  std::uint64_t p = dirichlet_prime(1, static_cast<std::uint64_t>(n1), limits);
  // HEX needs p > 3; the progression 1 + k*n1 is rescanned past 3 if hit.
  while (field == FieldTag::HEX && p <= 3) {
    p = dirichlet_prime(static_cast<std::int64_t>(p + n1), static_cast<std::uint64_t>(n1), limits);
  }
  return p;
}

}  // namespace

NonNormCertificate nonnorm_qam(int n, const SearchLimits& limits) {
  NonNormCertificate cert;
  cert.n = n;
  std::tie(cert.s, cert.n1) = two_adic_split(n);
  cert.field = FieldTag::QAM;
  const Ring ring = Ring::GaussianZi;
  if (cert.n1 == 1) {
    cert.q = 5;
    cert.pi1 = {1, 2, ring};
    cert.gamma_num = cert.pi1;
    cert.gamma_den = cert.pi1.conj();
    return cert;
  }
  cert.p = tower_prime(cert.n1, FieldTag::QAM, limits);
  const std::uint64_t g = primitive_root(cert.p);
  const std::uint64_t two_power = 1ULL << (cert.s + 2);
  const Congruence system[] = {{5, two_power}, {static_cast<std::int64_t>(g), cert.p}};
  const std::uint64_t b = crt(system);
  cert.q = dirichlet_prime(static_cast<std::int64_t>(b), two_power * cert.p, limits);
  cert.pi1 = split_prime(cert.q, ring);
  cert.gamma_num = cert.pi1;
  cert.gamma_den = cert.pi1.conj();
  return cert;
}

NonNormCertificate nonnorm_hex(int n, const SearchLimits& limits) {
  NonNormCertificate cert;
  cert.n = n;
  std::tie(cert.s, cert.n1) = two_adic_split(n);
  cert.field = FieldTag::HEX;
  if (cert.s > 1) throw ArithmeticError("HEX construction limited to s in {0,1}");
  const Ring ring = Ring::EisensteinZw3;
  if (cert.n1 == 1) {
    cert.q = 7;
    cert.pi1 = {3, 1, ring};
    cert.gamma_num = cert.pi1;
    cert.gamma_den = cert.pi1.conj();
    return cert;
  }
  cert.p = tower_prime(cert.n1, FieldTag::HEX, limits);
  const std::uint64_t g = primitive_root(cert.p);
  std::vector<Congruence> system = {{1, 3}, {static_cast<std::int64_t>(g), cert.p}};
  if (cert.s == 1) system.push_back({3, 4});
  const std::uint64_t b = crt(system);
  const std::uint64_t step = (cert.s == 1 ? 12 : 3) * cert.p;
  cert.q = dirichlet_prime(static_cast<std::int64_t>(b), step, limits);
  cert.pi1 = split_prime(cert.q, ring);
  cert.gamma_num = cert.pi1;
  cert.gamma_den = cert.pi1.conj();
  return cert;
}

NonNormCertificate certificate_for_gamma(int n, FieldTag field, const GaussLikeInt& num,
                                         const GaussLikeInt& den) {
  NonNormCertificate cert;
  cert.n = n;
  std::tie(cert.s, cert.n1) = two_adic_split(n);
  cert.field = field;
  cert.q = static_cast<std::uint64_t>(num.norm());
  cert.pi1 = num;
  cert.gamma_num = num;
  cert.gamma_den = den;
  if (cert.n1 > 1) cert.p = tower_prime(cert.n1, field, SearchLimits{});
  return cert;
}

bool GammaReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

bool GammaReport::tower_independent_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const auto& c) { return c.tower_dependent || c.passed; });
}

const GammaCheck* GammaReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

GammaReport validate_gamma(const NonNormCertificate& cert) {
  GammaReport report;
  auto add = [&](std::string name, bool ok, bool tower, std::string detail) {
    report.checks.push_back({std::move(name), ok, tower, std::move(detail)});
  };
  const Ring ring = ring_of(cert.field);
  const auto q = static_cast<std::int64_t>(cert.q);

  {
    bool ok = cert.n >= 1 && cert.n1 >= 1 && cert.n1 % 2 == 1 && cert.s >= 0 && cert.s < 31 &&
              static_cast<std::int64_t>(cert.n1) << cert.s == cert.n;
    if (cert.field == FieldTag::HEX && cert.s > 1) ok = false;
    add("dimension", ok, false,
        "n=" + std::to_string(cert.n) + " = 2^" + std::to_string(cert.s) + " * " +
            std::to_string(cert.n1));
  }
  const bool ring_ok =
      cert.pi1.ring == ring && cert.gamma_num.ring == ring && cert.gamma_den.ring == ring;
  add("ring", ring_ok, false, "elements of " + to_string(ring));
  add("q_prime", is_prime(cert.q), false, "q=" + std::to_string(cert.q));
  add("pi1_norm", ring_ok && cert.pi1.norm() == q, false,
      "norm(" + to_string(cert.pi1) + ")=" + std::to_string(cert.pi1.norm()));
  add("numerator_is_pi1", ring_ok && is_associate(cert.gamma_num, cert.pi1), false,
      to_string(cert.gamma_num));
  const bool unit =
      ring_ok && cert.gamma_num.norm() > 0 && cert.gamma_num.norm() == cert.gamma_den.norm();
  add("unit_magnitude", unit, false,
      "norm(num)=" + std::to_string(cert.gamma_num.norm()) +
          " norm(den)=" + std::to_string(cert.gamma_den.norm()));
  add("conjugate_denominator", ring_ok && is_associate(cert.gamma_den, cert.gamma_num.conj()),
      false, to_string(cert.gamma_den) + " ~ conj(" + to_string(cert.gamma_num) + ")");
  add("not_self_conjugate", ring_ok && !is_associate(cert.pi1, cert.pi1.conj()), false,
      "pi1 and conj(pi1) are not associates");

  if (cert.field == FieldTag::QAM) {
    add("split_congruence", floor_mod(q, 4) == 1, false,
        "q mod 4 = " + std::to_string(floor_mod(q, 4)));
    const std::int64_t two_power = std::int64_t{1} << (cert.s + 2);
    add("two_power_congruence", floor_mod(q, two_power) == 5 % two_power, true,
        "q mod " + std::to_string(two_power) + " = " + std::to_string(floor_mod(q, two_power)));
  } else {
    add("split_congruence", floor_mod(q, 3) == 1, false,
        "q mod 3 = " + std::to_string(floor_mod(q, 3)));
    const bool ok = cert.s == 0 || floor_mod(q, 4) == 3;
    add("two_power_congruence", ok, true,
        cert.s == 0 ? std::string("s=0, no condition")
                    : "q mod 4 = " + std::to_string(floor_mod(q, 4)));
  }

  if (cert.n1 == 1) {
    add("p_prime", true, true, "n1=1, no odd tower");
    add("q_inert_mod_p", true, true, "n1=1, no odd tower");
    return report;
  }
  const std::uint64_t p = cert.p;
  bool p_ok = is_prime(p) && p > 2 && (p - 1) % static_cast<std::uint64_t>(cert.n1) == 0;
  if (cert.field == FieldTag::HEX && p <= 3) p_ok = false;
  add("p_prime", p_ok, true, "p=" + std::to_string(p));
  if (!p_ok || cert.q % p == 0) {
    add("q_inert_mod_p", false, true, "q is not a unit mod p");
    return report;
  }
  // q is inert in the degree-n1 subfield of Q(w_p) iff its class generates
  // (Z/p)^* / ((Z/p)^*)^n1, i.e. q is not an l-th power for any prime l | n1.
  bool inert = true;
  for (auto l : prime_factors(static_cast<std::uint64_t>(cert.n1))) {
    if (mod_pow(cert.q, (p - 1) / l, p) == 1) inert = false;
  }
  add("q_inert_mod_p", inert, true,
      "ord(q mod p)=" + std::to_string(mod_order(q, p)) + ", n1=" + std::to_string(cert.n1));
  return report;
}

}  // namespace perfectst
