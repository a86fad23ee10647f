#include "sep/modmath.hpp"

#include <numeric>

namespace sep {

namespace {

void check_modulus(u64 n) {
  if (n < 2) fail(Errc::invalid_modulus, "modulus must be at least 2");
  if (n > kMaxModulus) fail(Errc::invalid_modulus, "modulus exceeds 2^31 - 1");
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (u64 d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

u64 mulmod(u64 a, u64 b, u64 n) {
  check_modulus(n);
  // Reduced operands are below 2^31, so the product fits in 64 bits.
  return (a % n) * (b % n) % n;
}

u64 powmod(u64 base, u64 exp, u64 n) {
  check_modulus(n);
  u64 result = 1;
  u64 acc = base % n;
  while (exp > 0) {
    if (exp & 1) result = result * acc % n;
    acc = acc * acc % n;
    exp >>= 1;
  }
  return result;
}

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

u64 invmod(u64 a, u64 m) {
  if (m < 2) fail(Errc::invalid_modulus, "inverse modulus must be at least 2");
  // Extended Euclid on (a mod m, m), tracking only the coefficient of a.
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m);
  std::int64_t new_r = static_cast<std::int64_t>(a % m);
  while (new_r != 0) {
    std::int64_t quotient = r / new_r;
    std::int64_t tmp_t = t - quotient * new_t;
    t = new_t;
    new_t = tmp_t;
    std::int64_t tmp_r = r - quotient * new_r;
    r = new_r;
    new_r = tmp_r;
  }
  if (r != 1) fail(Errc::not_invertible, "gcd(a, m) != 1");
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<u64>(t);
}

u64 crt_combine(u64 rp, u64 p, u64 rq, u64 q) {
  if (p == q) fail(Errc::invalid_input, "crt moduli must be distinct");
  if (!is_prime(p) || !is_prime(q)) fail(Errc::invalid_input, "crt moduli must be prime");
  if (rp >= p || rq >= q) fail(Errc::invalid_input, "crt residues must be reduced");
  // x = rp + p * ((rq - rp) * p^-1 mod q)
  u64 p_inv = invmod(p % q, q);
  u64 delta = (rq + q - rp % q) % q;
  return rp + p * (delta * p_inv % q);
}

Semiprime make_semiprime(u64 p, u64 q) {
  if (p > q) std::swap(p, q);
  if (p == q) fail(Errc::not_semiprime, "factors must be distinct");
  if (!is_prime(p) || !is_prime(q)) fail(Errc::not_semiprime, "factors must be prime");
  u64 n = p * q;
  if (n > kMaxModulus) fail(Errc::invalid_modulus, "product exceeds 2^31 - 1");
  return Semiprime{n, p, q};
}

Semiprime factor_semiprime(u64 n) {
  if (n < 6 || n > kMaxModulus) fail(Errc::not_semiprime, "value out of range");
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      u64 cofactor = n / d;
      if (d == cofactor || !is_prime(d) || !is_prime(cofactor)) {
        fail(Errc::not_semiprime, "not a product of two distinct primes");
      }
      return Semiprime{n, d, cofactor};
    }
  }
  fail(Errc::not_semiprime, "value is prime");
}

u64 euler_phi(const Semiprime& s) { return (s.p - 1) * (s.q - 1); }

}  // namespace sep
