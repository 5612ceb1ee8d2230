#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace ww {

// Thrown for malformed inputs: bad parameters, bad encodings, mixed
// graph families, invalid manifests. The CLI maps this to exit code 2.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when a certified hypothesis fails (connectivity, denseness,
// determinism, trust horizon). The CLI maps this to exit code 3.
struct CertificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Count request on a truncated graph beyond the radius it is exact for.
struct HorizonError : CertificationError {
  using CertificationError::CertificationError;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

// Exact fraction with small numerator/denominator; enough for the
// one-step kernels whose probabilities are rational by construction.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d) : num(n), den(d) {
    require(d != 0, "Rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
  }

  Rational operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
  }
  Rational operator-(const Rational& o) const {
    return Rational(num * o.den - o.num * den, den * o.den);
  }
  Rational operator*(const Rational& o) const {
    return Rational(num * o.num, den * o.den);
  }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// --- hashing for DP maps and visited sets -------------------------------

inline void hash_combine(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

inline std::size_t hash_of(long long v) {
  std::uint64_t x = static_cast<std::uint64_t>(v);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return static_cast<std::size_t>(x ^ (x >> 31));
}

inline std::size_t hash_of(int v) { return hash_of(static_cast<long long>(v)); }

inline std::size_t hash_of(const std::string& s) { return std::hash<std::string>{}(s); }

inline std::size_t hash_of(const std::vector<long long>& v) {
  std::size_t seed = 0x51ed270b;
  for (long long x : v) hash_combine(seed, hash_of(x));
  return seed;
}

// Generic hasher usable as the Hash parameter of unordered containers,
// dispatching to hash_of overloads (including those found by ADL for
// types defined in other headers).
struct HashOf {
  template <class T>
  std::size_t operator()(const T& t) const {
    return hash_of(t);
  }
};

}  // namespace ww
