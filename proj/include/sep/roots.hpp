#pragma once

#include <utility>
#include <vector>

#include "sep/modmath.hpp"

namespace sep {

// All k-th roots of `value` modulo the ambient semiprime, sorted ascending.
struct RootSet {
  u64 value = 0;
  u64 k = 0;
  std::vector<u64> roots;
};

// A modulus paired with a root degree. Construct directly for plain root
// queries; go through validate_setup() before running the protocol on it.
struct GameSetup {
  Semiprime s;
  u64 k = 0;
};

// Number of k-th roots of any k-th power residue coprime to N:
// gcd(k, p-1) * gcd(k, q-1).
u64 count_kth_roots(u64 k, const Semiprime& s);

// All x < p with x^k = a (mod p), sorted. Brute force over 0..p-1, with an
// exponent-inverse shortcut when gcd(k, p-1) == 1 (the mapping is then a
// bijection and the shortcut provably returns the same single root).
std::vector<u64> kth_roots_mod_prime(u64 a, u64 k, u64 p);

inline constexpr u64 kBruteForcePrimeBound = 1u << 20;

// CRT combination of the per-prime root sets. Empty roots when `a` is not a
// k-th power residue.
RootSet kth_roots_mod_semiprime(u64 a, const GameSetup& setup);

// Every coprime k-th power residue below N with its full root set, ascending.
std::vector<RootSet> residue_table(const GameSetup& setup);

// Accepts k == 2 over odd semiprimes, and odd k >= 3 only when
// {gcd(k, p-1), gcd(k, q-1)} == {k, 1}. That shape guarantees exactly k roots
// which all agree modulo exactly one prime, so the difference of any two
// distinct roots shares exactly one prime with N.
GameSetup validate_setup(u64 k, const Semiprime& s);

// The unordered pair {r, N - r} in (smaller, larger) order.
std::pair<u64, u64> negation_class(u64 r, u64 n);

}  // namespace sep
