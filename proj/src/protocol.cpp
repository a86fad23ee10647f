#include "sep/protocol.hpp"

#include <algorithm>
#include <array>

namespace sep {

REPolicy policy_for(const GameSetup& setup) {
  return setup.k == 2 ? REPolicy::class_swap : REPolicy::ordered_distinct;
}

const char* outcome_label(Outcome o) {
  switch (o) {
    case Outcome::yy: return "YY";
    case Outcome::yn: return "YN";
    case Outcome::ny: return "NY";
    case Outcome::nn: return "NN";
  }
  return "??";
}

ProtocolParams make_params(const GameSetup& setup, u64 e, u64 m, u64 x,
                           u64 held_alice, u64 held_bob) {
  const u64 n = setup.s.n;
  if (gcd(e, euler_phi(setup.s)) != 1) fail(Errc::bad_exponent, "gcd(e, phi(N)) != 1");
  if (m == 0 || m >= n || gcd(m, n) != 1) fail(Errc::bad_message, "message must be coprime to N");
  if (powmod(held_alice, setup.k, n) != x || powmod(held_bob, setup.k, n) != x) {
    fail(Errc::invalid_setup, "held values are not k-th roots of x");
  }
  if (held_alice == held_bob) fail(Errc::invalid_setup, "held roots must differ");
  if (setup.k == 2 && held_bob == n - held_alice) {
    fail(Errc::invalid_setup, "square-variant roots must come from different negation classes");
  }
  return ProtocolParams{setup, e, m, powmod(m, e, n), x, held_alice, held_bob};
}

namespace {

u64 sample_coprime_power(const GameSetup& setup, Rng& rng) {
  const u64 n = setup.s.n;
  // A uniform coprime base makes x uniform over the k-th power residues,
  // because all fibers of the powering map have equal size.
  u64 base;
  do {
    base = 1 + rng.uniform(n - 1);
  } while (gcd(base, n) != 1);
  return powmod(base, setup.k, n);
}

// Splits the four square roots of x into its two negation classes.
std::array<std::pair<u64, u64>, 2> split_classes(const RootSet& set, u64 n) {
  if (set.roots.size() != 4) {
    fail(Errc::protocol_violation, "square residue does not have four roots");
  }
  // Sorted roots r0<r1<r2<r3 pair up as {r0, r3} and {r1, r2}.
  auto first = negation_class(set.roots[0], n);
  auto second = negation_class(set.roots[1], n);
  return {first, second};
}

u64 pick_representative(const std::pair<u64, u64>& cls, Rng& rng) {
  return rng.uniform(2) == 0 ? cls.first : cls.second;
}

}  // namespace

ProtocolParams ca_setup(const Semiprime& s, u64 k, u64 e, u64 m, Rng& rng) {
  GameSetup setup = validate_setup(k, s);
  if (gcd(e, euler_phi(s)) != 1) fail(Errc::bad_exponent, "gcd(e, phi(N)) != 1");
  if (m == 0 || m >= s.n || gcd(m, s.n) != 1) fail(Errc::bad_message, "message must be coprime to N");

  u64 x = sample_coprime_power(setup, rng);
  RootSet set = kth_roots_mod_semiprime(x, setup);

  u64 held_alice, held_bob;
  if (k == 2) {
    auto classes = split_classes(set, s.n);
    if (rng.uniform(2) == 1) std::swap(classes[0], classes[1]);
    held_alice = pick_representative(classes[0], rng);
    held_bob = pick_representative(classes[1], rng);
  } else {
    u64 i = rng.uniform(set.roots.size());
    u64 j = rng.uniform(set.roots.size() - 1);
    if (j >= i) ++j;
    held_alice = set.roots[i];
    held_bob = set.roots[j];
  }
  return make_params(setup, e, m, x, held_alice, held_bob);
}

u64 party_submit(u64 held, const GameSetup& setup) {
  if (gcd(held, setup.s.n) != 1) fail(Errc::not_coprime, "held root shares a factor with N");
  return powmod(held, setup.k, setup.s.n);
}

std::pair<u64, u64> re_reply(u64 x, const GameSetup& setup, REPolicy policy, Rng& rng) {
  RootSet set = kth_roots_mod_semiprime(x, setup);
  if (set.roots.empty()) fail(Errc::not_a_residue, "value has no k-th roots");
  if (policy == REPolicy::class_swap) {
    auto classes = split_classes(set, setup.s.n);
    if (rng.uniform(2) == 1) std::swap(classes[0], classes[1]);
    return {pick_representative(classes[0], rng), pick_representative(classes[1], rng)};
  }
  u64 i = rng.uniform(set.roots.size());
  u64 j = rng.uniform(set.roots.size() - 1);
  if (j >= i) ++j;
  return {set.roots[i], set.roots[j]};
}

std::optional<u64> attempt_factor(u64 held, u64 received, u64 n) {
  if (received == held) return std::nullopt;
  u64 diff = (received + n - held % n) % n;
  u64 g = gcd(diff, n);
  if (g > 1 && g < n) return g;
  return std::nullopt;
}

u64 recover_secret(u64 factor, u64 n, u64 e, u64 c) {
  if (factor <= 1 || factor >= n || n % factor != 0) {
    fail(Errc::not_a_factor, "value does not split N");
  }
  u64 cofactor = n / factor;
  u64 phi = (factor - 1) * (cofactor - 1);
  u64 d = invmod(e, phi);
  return powmod(c, d, n);
}

Outcome classify_outcome(bool alice_found, bool bob_found) {
  if (alice_found) return bob_found ? Outcome::yy : Outcome::yn;
  return bob_found ? Outcome::ny : Outcome::nn;
}

namespace {

PartyResult settle_party(u64 held, u64 received, const ProtocolParams& params) {
  PartyResult result;
  result.received = received;
  result.factor_found = attempt_factor(held, received, params.setup.s.n);
  if (result.factor_found) {
    result.recovered = recover_secret(*result.factor_found, params.setup.s.n, params.e, params.c);
  }
  return result;
}

SessionTranscript finish_session(const ProtocolParams& params, std::pair<u64, u64> pair,
                                 u64 session_id, u64 seed) {
  u64 submitted_alice = party_submit(params.held_alice, params.setup);
  u64 submitted_bob = party_submit(params.held_bob, params.setup);
  if (submitted_alice != params.x || submitted_bob != params.x) {
    fail(Errc::protocol_violation, "submitted value does not match the session's x");
  }
  SessionTranscript t;
  t.session_id = session_id;
  t.params = params;
  t.re_pair = pair;
  t.alice = settle_party(params.held_alice, pair.first, params);
  t.bob = settle_party(params.held_bob, pair.second, params);
  t.outcome = classify_outcome(t.alice.success(), t.bob.success());
  t.seed = seed;
  return t;
}

}  // namespace

SessionTranscript run_session(const ProtocolParams& params, REPolicy policy,
                              u64 session_id, u64 seed) {
  Rng re_rng(stream_seed(seed, Stream::re));
  auto pair = re_reply(params.x, params.setup, policy, re_rng);
  return finish_session(params, pair, session_id, seed);
}

SessionTranscript run_session_with_pair(const ProtocolParams& params,
                                        std::pair<u64, u64> pair, u64 session_id) {
  return finish_session(params, pair, session_id, 0);
}

}  // namespace sep
