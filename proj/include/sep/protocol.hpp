#pragma once

#include <optional>
#include <string>
#include <utility>

#include "sep/rng.hpp"
#include "sep/roots.hpp"

namespace sep {

// How RE picks the pair of roots it returns.
//   class_swap:       k == 2. The four square roots form two negation
//                     classes; each party gets a representative of one class,
//                     class-to-party assignment chosen uniformly.
//   ordered_distinct: odd k. A uniform ordered pair of distinct roots,
//                     k*(k-1) equally likely cases.
enum class REPolicy { class_swap, ordered_distinct };

REPolicy policy_for(const GameSetup& setup);

// Everything CA fixes for one game: the public numbers, the secret and its
// ciphertext, the common k-th power x and the roots issued to the parties.
struct ProtocolParams {
  GameSetup setup;
  u64 e = 0;
  u64 m = 0;
  u64 c = 0;
  u64 x = 0;
  u64 held_alice = 0;
  u64 held_bob = 0;
};

struct PartyResult {
  u64 received = 0;
  std::optional<u64> factor_found;
  std::optional<u64> recovered;

  bool success() const { return factor_found.has_value(); }
};

enum class Outcome { yy, yn, ny, nn };

const char* outcome_label(Outcome o);

struct SessionTranscript {
  u64 session_id = 0;
  ProtocolParams params;
  std::pair<u64, u64> re_pair{0, 0};  // (to Alice, to Bob)
  PartyResult alice;
  PartyResult bob;
  Outcome outcome = Outcome::nn;
  u64 seed = 0;
};

// Validates a full parameter set against the protocol invariants.
ProtocolParams make_params(const GameSetup& setup, u64 e, u64 m, u64 x,
                           u64 held_alice, u64 held_bob);

// CA's setup phase: samples a uniform coprime k-th power residue and issues
// two held roots. Odd k: two distinct roots without replacement. k == 2: one
// representative from each negation class, so the parties never hold a
// trivially related pair.
ProtocolParams ca_setup(const Semiprime& s, u64 k, u64 e, u64 m, Rng& rng);

// A party raises its held root to the k-th power; this is the value sent
// to RE.
u64 party_submit(u64 held, const GameSetup& setup);

// RE's choice of the two roots it returns, per policy. Uses the factors of N.
std::pair<u64, u64> re_reply(u64 x, const GameSetup& setup, REPolicy policy, Rng& rng);

// gcd step on the difference of received and held roots; nullopt when no
// proper factor emerges.
std::optional<u64> attempt_factor(u64 held, u64 received, u64 n);

// With one factor in hand: cofactor, phi, d = e^-1 mod phi, then c^d mod N.
u64 recover_secret(u64 factor, u64 n, u64 e, u64 c);

Outcome classify_outcome(bool alice_found, bool bob_found);

// One full session: submit -> reply -> factor -> recover, classified.
// Deterministic in `seed`; RE's generator is derived from it.
SessionTranscript run_session(const ProtocolParams& params, REPolicy policy,
                              u64 session_id, u64 seed);

// Same session pipeline with RE's pair forced; used by exhaustive iteration
// over RE's choices.
SessionTranscript run_session_with_pair(const ProtocolParams& params,
                                        std::pair<u64, u64> pair, u64 session_id);

}  // namespace sep
