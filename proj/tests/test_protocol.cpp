#include <doctest.h>

#include <functional>
#include <set>

#include "golden.hpp"
#include "sep/protocol.hpp"
#include "sep/serialize.hpp"

using namespace sep;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& err) {
    return err.code();
  }
  FAIL("expected an error");
  return Errc::invalid_input;
}

ProtocolParams cubic_params() {
  GameSetup setup = validate_setup(3, factor_semiprime(77));
  return make_params(setup, 7, 2, 48, 5, 38);
}

}  // namespace

TEST_CASE("policy_for") {
  CHECK(policy_for(GameSetup{factor_semiprime(77), 2}) == REPolicy::class_swap);
  CHECK(policy_for(GameSetup{factor_semiprime(77), 3}) == REPolicy::ordered_distinct);
}

TEST_CASE("make_params validates the whole parameter set") {
  GameSetup setup = validate_setup(3, factor_semiprime(77));
  ProtocolParams params = cubic_params();
  CHECK(params.c == 51);  // 2^7 mod 77
  CHECK(params.x == 48);

  CHECK(code_of([&] { make_params(setup, 3, 2, 48, 5, 38); }) == Errc::bad_exponent);
  CHECK(code_of([&] { make_params(setup, 7, 7, 48, 5, 38); }) == Errc::bad_message);
  CHECK(code_of([&] { make_params(setup, 7, 0, 48, 5, 38); }) == Errc::bad_message);
  CHECK(code_of([&] { make_params(setup, 7, 2, 48, 5, 27 + 1); }) == Errc::invalid_setup);
  CHECK(code_of([&] { make_params(setup, 7, 2, 48, 5, 5); }) == Errc::invalid_setup);

  GameSetup square = validate_setup(2, factor_semiprime(77));
  // 3 and 74 share a negation class; 3 and 25 do not.
  CHECK(code_of([&] { make_params(square, 7, 2, 4, 3, 74); }) == Errc::invalid_setup);
  ProtocolParams ok = make_params(square, 7, 2, 4, 3, 25);
  CHECK(ok.x == 4);
}

TEST_CASE("ca_setup produces consistent parameters and reaches the worked example") {
  Semiprime s = factor_semiprime(77);
  bool reached_example = false;
  for (u64 seed = 0; seed < 4000; ++seed) {
    Rng rng(seed);
    ProtocolParams params = ca_setup(s, 3, 7, 2, rng);
    CHECK(powmod(params.held_alice, 3, 77) == params.x);
    CHECK(powmod(params.held_bob, 3, 77) == params.x);
    CHECK(params.held_alice != params.held_bob);
    CHECK(params.c == 51);
    if (params.x == 48 && params.held_alice == 5 && params.held_bob == 38) {
      reached_example = true;
    }
  }
  CHECK(reached_example);
}

TEST_CASE("ca_setup in the square variant never issues a negation pair") {
  Semiprime s = factor_semiprime(77);
  for (u64 seed = 0; seed < 500; ++seed) {
    Rng rng(seed);
    ProtocolParams params = ca_setup(s, 2, 7, 2, rng);
    CHECK(params.held_bob != 77 - params.held_alice);
    CHECK(params.held_bob != params.held_alice);
    CHECK(powmod(params.held_alice, 2, 77) == params.x);
    CHECK(powmod(params.held_bob, 2, 77) == params.x);
  }
}

TEST_CASE("ca_setup rejects bad exponents and messages") {
  Semiprime s = factor_semiprime(77);
  Rng rng(1);
  CHECK(code_of([&] { ca_setup(s, 3, 3, 2, rng); }) == Errc::bad_exponent);
  CHECK(code_of([&] { ca_setup(s, 3, 7, 7, rng); }) == Errc::bad_message);
  CHECK(code_of([&] { ca_setup(s, 15, 7, 2, rng); }) == Errc::invalid_setup);
}

TEST_CASE("party_submit") {
  GameSetup setup{factor_semiprime(77), 3};
  CHECK(party_submit(5, setup) == 48);
  CHECK(party_submit(38, setup) == 48);
  CHECK(party_submit(1, setup) == 1);
  CHECK(code_of([&] { party_submit(7, setup); }) == Errc::not_coprime);
}

TEST_CASE("re_reply covers all ordered pairs and replays deterministically") {
  GameSetup setup = validate_setup(3, factor_semiprime(77));
  std::set<std::pair<u64, u64>> seen;
  for (u64 seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    auto pair = re_reply(48, setup, REPolicy::ordered_distinct, rng);
    CHECK(pair.first != pair.second);
    CHECK(powmod(pair.first, 3, 77) == 48);
    CHECK(powmod(pair.second, 3, 77) == 48);
    seen.insert(pair);

    Rng replay(seed);
    CHECK(re_reply(48, setup, REPolicy::ordered_distinct, replay) == pair);
  }
  CHECK(seen.size() == 6);  // all k(k-1) ordered pairs of {5, 27, 38}

  CHECK(code_of([&] { Rng rng(0); re_reply(2, setup, REPolicy::ordered_distinct, rng); }) ==
        Errc::not_a_residue);
}

TEST_CASE("re_reply class swap always crosses the classes") {
  GameSetup setup = validate_setup(2, factor_semiprime(77));
  std::set<std::pair<u64, u64>> seen;
  for (u64 seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    auto pair = re_reply(4, setup, REPolicy::class_swap, rng);
    CHECK(negation_class(pair.first, 77) != negation_class(pair.second, 77));
    seen.insert(pair);
  }
  CHECK(seen.size() == 8);  // 2 class orders x 2 representatives each
}

TEST_CASE("attempt_factor") {
  CHECK(attempt_factor(5, 27, 77) == 11);
  CHECK(attempt_factor(5, 38, 77) == 11);
  CHECK(attempt_factor(5, 5, 77) == std::nullopt);
  // A negation pair never splits N: gcd(N - 2h, N) = 1 for coprime h.
  for (u64 h = 1; h < 77; ++h) {
    if (gcd(h, 77) != 1) continue;
    CHECK(attempt_factor(h, 77 - h, 77) == std::nullopt);
  }
}

TEST_CASE("recover_secret") {
  CHECK(recover_secret(11, 77, 7, 51) == 2);
  CHECK(recover_secret(7, 77, 7, 51) == 2);
  CHECK(recover_secret(11, 77, 7, 1) == 1);
  CHECK(code_of([] { recover_secret(6, 77, 7, 51); }) == Errc::not_a_factor);
  CHECK(code_of([] { recover_secret(1, 77, 7, 51); }) == Errc::not_a_factor);
  CHECK(code_of([] { recover_secret(77, 77, 7, 51); }) == Errc::not_a_factor);
}

TEST_CASE("classify_outcome") {
  CHECK(classify_outcome(true, true) == Outcome::yy);
  CHECK(classify_outcome(true, false) == Outcome::yn);
  CHECK(classify_outcome(false, true) == Outcome::ny);
  CHECK(classify_outcome(false, false) == Outcome::nn);
  CHECK(std::string(outcome_label(Outcome::ny)) == "NY");
}

TEST_CASE("run_session_with_pair reproduces the six-case table") {
  ProtocolParams params = cubic_params();
  for (const auto& c : golden::kCubicCases) {
    SessionTranscript t = run_session_with_pair(params, {c.to_alice, c.to_bob}, 0);
    CHECK(std::string(outcome_label(t.outcome)) == c.outcome);
    CHECK(t.alice.received == c.to_alice);
    CHECK(t.bob.received == c.to_bob);
  }
}

TEST_CASE("success bit means received differs from held, and recovery is exact") {
  ProtocolParams params = cubic_params();
  for (u64 seed = 0; seed < 300; ++seed) {
    SessionTranscript t = run_session(params, REPolicy::ordered_distinct, seed, seed);
    CHECK(t.alice.success() == (t.alice.received != params.held_alice));
    CHECK(t.bob.success() == (t.bob.received != params.held_bob));
    for (const PartyResult* r : {&t.alice, &t.bob}) {
      if (r->success()) {
        CHECK(*r->recovered == params.m);
        CHECK((*r->factor_found == 7 || *r->factor_found == 11));
      } else {
        CHECK_FALSE(r->factor_found.has_value());
        CHECK_FALSE(r->recovered.has_value());
      }
    }
  }
}

TEST_CASE("square variant sessions are perfectly correlated") {
  GameSetup setup = validate_setup(2, factor_semiprime(77));
  ProtocolParams params = make_params(setup, 7, 2, 4, 3, 25);
  for (u64 seed = 0; seed < 300; ++seed) {
    SessionTranscript t = run_session(params, REPolicy::class_swap, seed, seed);
    CHECK((t.outcome == Outcome::yy || t.outcome == Outcome::nn));
  }
}

TEST_CASE("same seed replays a byte-identical transcript") {
  ProtocolParams params = cubic_params();
  SessionTranscript a = run_session(params, REPolicy::ordered_distinct, 9, 1234);
  SessionTranscript b = run_session(params, REPolicy::ordered_distinct, 9, 1234);
  CHECK(transcript_json(a).dump() == transcript_json(b).dump());
  CHECK(transcript_text(a) == transcript_text(b));
}

TEST_CASE("tampered parameters trip the submit cross-check") {
  ProtocolParams params = cubic_params();
  params.held_bob = 16;  // a cubic root of 15, not of 48
  CHECK(code_of([&] { run_session(params, REPolicy::ordered_distinct, 0, 0); }) ==
        Errc::protocol_violation);
}
