#pragma once

#include <cstdint>

#include "sep/error.hpp"

namespace sep {

using u64 = std::uint64_t;

// All moduli are capped so that any product of two reduced residues fits in
// 64 bits; everything stays exact without wide-integer support.
inline constexpr u64 kMaxModulus = 0x7FFFFFFF;  // 2^31 - 1

// N = p * q with p < q, both prime.
struct Semiprime {
  u64 n = 0;
  u64 p = 0;
  u64 q = 0;
};

bool is_prime(u64 n);

// (a * b) mod n, exact. Inputs are reduced first.
u64 mulmod(u64 a, u64 b, u64 n);

// base^exp mod n by square-and-multiply; exp == 0 yields 1.
u64 powmod(u64 base, u64 exp, u64 n);

// gcd(0, 0) == 0 by convention.
u64 gcd(u64 a, u64 b);

// Modular inverse via extended Euclid; throws not_invertible when
// gcd(a, m) != 1.
u64 invmod(u64 a, u64 m);

// Unique x < p*q with x = rp (mod p) and x = rq (mod q).
u64 crt_combine(u64 rp, u64 p, u64 rq, u64 q);

// Builds a Semiprime from its factors, normalizing order.
Semiprime make_semiprime(u64 p, u64 q);

// Trial division. Harness-side setup only; honest protocol parties never
// factor N directly.
Semiprime factor_semiprime(u64 n);

u64 euler_phi(const Semiprime& s);

}  // namespace sep
