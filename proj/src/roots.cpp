#include "sep/roots.hpp"

#include <algorithm>
#include <map>

namespace sep {

u64 count_kth_roots(u64 k, const Semiprime& s) {
  if (k < 1) fail(Errc::invalid_degree, "degree must be at least 1");
  return gcd(k, s.p - 1) * gcd(k, s.q - 1);
}

std::vector<u64> kth_roots_mod_prime(u64 a, u64 k, u64 p) {
  if (!is_prime(p)) fail(Errc::invalid_input, "modulus must be prime");
  if (k < 1) fail(Errc::invalid_degree, "degree must be at least 1");
  a %= p;
  if (a == 0) return {0};
  if (gcd(k, p - 1) == 1) {
    // x -> x^k is a bijection on the units; invert the exponent.
    u64 inverse_exp = invmod(k % (p - 1), p - 1);
    return {powmod(a, inverse_exp, p)};
  }
  if (p > kBruteForcePrimeBound) {
    fail(Errc::unsupported_prime, "prime too large for exhaustive root search");
  }
  std::vector<u64> roots;
  for (u64 x = 1; x < p; ++x) {
    if (powmod(x, k, p) == a) roots.push_back(x);
  }
  return roots;
}

RootSet kth_roots_mod_semiprime(u64 a, const GameSetup& setup) {
  const Semiprime& s = setup.s;
  if (a >= s.n) fail(Errc::invalid_input, "value must be reduced mod N");
  if (gcd(a, s.n) != 1) fail(Errc::not_coprime, "value shares a factor with N");
  std::vector<u64> roots_p = kth_roots_mod_prime(a % s.p, setup.k, s.p);
  std::vector<u64> roots_q = kth_roots_mod_prime(a % s.q, setup.k, s.q);
  RootSet result{a, setup.k, {}};
  result.roots.reserve(roots_p.size() * roots_q.size());
  for (u64 rp : roots_p) {
    for (u64 rq : roots_q) {
      result.roots.push_back(crt_combine(rp, s.p, rq, s.q));
    }
  }
  std::sort(result.roots.begin(), result.roots.end());
  return result;
}

std::vector<RootSet> residue_table(const GameSetup& setup) {
  // k-th powering partitions the coprime residues into equal-sized fibers;
  // collecting preimages gives every row and its sorted roots in one pass.
  std::map<u64, std::vector<u64>> fibers;
  for (u64 r = 1; r < setup.s.n; ++r) {
    if (gcd(r, setup.s.n) != 1) continue;
    fibers[powmod(r, setup.k, setup.s.n)].push_back(r);
  }
  std::vector<RootSet> table;
  table.reserve(fibers.size());
  for (auto& [value, roots] : fibers) {
    table.push_back(RootSet{value, setup.k, std::move(roots)});
  }
  return table;
}

GameSetup validate_setup(u64 k, const Semiprime& s) {
  if (k < 2) fail(Errc::invalid_setup, "degree must be at least 2");
  if (k == 2) {
    if (s.p == 2) fail(Errc::invalid_setup, "square variant needs an odd semiprime");
    return GameSetup{s, k};
  }
  if (k % 2 == 0) fail(Errc::unsupported_variant, "even degrees above 2 not supported");
  u64 gp = gcd(k, s.p - 1);
  u64 gq = gcd(k, s.q - 1);
  bool exact = (gp == k && gq == 1) || (gp == 1 && gq == k);
  if (!exact) {
    fail(Errc::invalid_setup,
         "degree must yield exactly k roots concentrated in one prime");
  }
  return GameSetup{s, k};
}

std::pair<u64, u64> negation_class(u64 r, u64 n) {
  if (r == 0 || r >= n) fail(Errc::invalid_input, "residue must satisfy 0 < r < N");
  u64 mirror = n - r;
  return r < mirror ? std::make_pair(r, mirror) : std::make_pair(mirror, r);
}

}  // namespace sep
