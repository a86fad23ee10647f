#include <doctest.h>

#include <cmath>
#include <functional>

#include "sep/statekit.hpp"

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

OutcomeDistribution counts_to_distribution(const TrialCounts& c) {
  u64 total = c.trials();
  return OutcomeDistribution{Rational(c.yy, total), Rational(c.yn, total),
                             Rational(c.ny, total), Rational(c.nn, total)};
}

}  // namespace

TEST_CASE("rational arithmetic") {
  CHECK(Rational(6, 8) == Rational(3, 4));
  CHECK(Rational(0, 5) == Rational(0, 1));
  CHECK(Rational(13, 20).str() == "13/20");
  CHECK(Rational(0, 7).str() == "0");
  CHECK(Rational(4, 4).str() == "1");
  CHECK(Rational(1, 6) + Rational(1, 2) == Rational(2, 3));
  CHECK(Rational(1, 2).to_double() == 0.5);
  CHECK(code_of([] { Rational(1, 0); }) == Errc::invalid_input);
}

TEST_CASE("theorem_state closed form") {
  OutcomeDistribution k3 = theorem_state(3);
  CHECK(k3.yy == Rational(1, 2));
  CHECK(k3.yn == Rational(1, 6));
  CHECK(k3.ny == Rational(1, 6));
  CHECK(k3.nn == Rational(1, 6));

  OutcomeDistribution k5 = theorem_state(5);
  CHECK(k5.yy == Rational(13, 20));
  CHECK(k5.yn == Rational(3, 20));
  CHECK(k5.ny == Rational(3, 20));
  CHECK(k5.nn == Rational(1, 20));

  OutcomeDistribution k2 = theorem_state(2);
  CHECK(k2.yy == Rational(1, 2));
  CHECK(k2.yn == Rational(0, 1));
  CHECK(k2.ny == Rational(0, 1));
  CHECK(k2.nn == Rational(1, 2));

  CHECK(code_of([] { theorem_state(1); }) == Errc::invalid_degree);
  CHECK(code_of([] { theorem_state(0); }) == Errc::invalid_degree);
}

TEST_CASE("theorem_state components always sum to one") {
  for (u64 k = 2; k <= 99; ++k) {
    OutcomeDistribution d = theorem_state(k);
    CHECK(d.yy + d.yn + d.ny + d.nn == Rational(1, 1));
    CHECK(d.yn == d.ny);
  }
}

TEST_CASE("enumeration counts for small degrees") {
  CHECK(enumerate_distribution(3) ==
        OutcomeDistribution{Rational(3, 6), Rational(1, 6), Rational(1, 6), Rational(1, 6)});
  CHECK(enumerate_distribution(5) ==
        OutcomeDistribution{Rational(13, 20), Rational(3, 20), Rational(3, 20), Rational(1, 20)});
  CHECK(enumerate_distribution(7) ==
        OutcomeDistribution{Rational(31, 42), Rational(5, 42), Rational(5, 42), Rational(1, 42)});
  CHECK(enumerate_distribution(2) == theorem_state(2));

  CHECK(code_of([] { enumerate_distribution(4); }) == Errc::invalid_degree);
  CHECK(code_of([] { enumerate_distribution(1); }) == Errc::invalid_degree);
}

TEST_CASE("enumeration agrees with the closed form for every odd degree") {
  for (u64 k = 3; k <= 99; k += 2) {
    CHECK(enumerate_distribution(k) == theorem_state(k));
  }
}

TEST_CASE("marginal success probabilities") {
  CHECK(marginal_success(theorem_state(3), Party::alice) == Rational(2, 3));
  CHECK(marginal_success(theorem_state(5), Party::bob) == Rational(4, 5));
  for (u64 k = 2; k <= 99; ++k) {
    OutcomeDistribution d = theorem_state(k);
    CHECK(marginal_success(d, Party::alice) == Rational(k - 1, k));
    CHECK(marginal_success(d, Party::bob) == Rational(k - 1, k));
  }
}

TEST_CASE("protocol-level enumeration matches the abstract oracle") {
  CHECK(counts_to_distribution(enumerate_protocol(cubic_params())) ==
        enumerate_distribution(3));

  GameSetup quintic = validate_setup(5, factor_semiprime(77));
  ProtocolParams p5 = make_params(quintic, 7, 2, 32, 2, 30);
  TrialCounts c5 = enumerate_protocol(p5);
  CHECK(c5.yy == 13);
  CHECK(c5.yn == 3);
  CHECK(c5.ny == 3);
  CHECK(c5.nn == 1);

  // Same distribution over a different concrete modulus.
  GameSetup other = validate_setup(3, factor_semiprime(221));
  Rng rng(7);
  ProtocolParams p221 = ca_setup(other.s, 3, 7, 2, rng);
  CHECK(counts_to_distribution(enumerate_protocol(p221)) == enumerate_distribution(3));
}

TEST_CASE("square-variant enumeration is exactly half-and-half") {
  GameSetup setup = validate_setup(2, factor_semiprime(77));
  ProtocolParams params = make_params(setup, 7, 2, 4, 3, 25);
  TrialCounts counts = enumerate_protocol(params);
  CHECK(counts.trials() == 8);
  CHECK(counts.yy == 4);
  CHECK(counts.yn == 0);
  CHECK(counts.ny == 0);
  CHECK(counts.nn == 4);
}

TEST_CASE("monte_carlo is deterministic and respects the variant") {
  ProtocolParams params = cubic_params();
  TrialCounts a = monte_carlo(params, REPolicy::ordered_distinct, 2000, 5);
  TrialCounts b = monte_carlo(params, REPolicy::ordered_distinct, 2000, 5);
  CHECK(a.yy == b.yy);
  CHECK(a.yn == b.yn);
  CHECK(a.ny == b.ny);
  CHECK(a.nn == b.nn);
  CHECK(a.trials() == 2000);

  TrialCounts one = monte_carlo(params, REPolicy::ordered_distinct, 1, 5);
  CHECK(one.trials() == 1);
  CHECK(one.yy + one.yn + one.ny + one.nn == 1);

  GameSetup square = validate_setup(2, factor_semiprime(77));
  ProtocolParams sq = make_params(square, 7, 2, 4, 3, 25);
  TrialCounts swap_counts = monte_carlo(sq, REPolicy::class_swap, 1000, 5);
  CHECK(swap_counts.yn == 0);
  CHECK(swap_counts.ny == 0);
  CHECK(swap_counts.yy + swap_counts.nn == 1000);

  CHECK(code_of([&] { monte_carlo(params, REPolicy::ordered_distinct, 0, 5); }) ==
        Errc::invalid_input);
}

TEST_CASE("seeded monte carlo lands inside the acceptance band") {
  ProtocolParams params = cubic_params();
  TrialCounts counts = monte_carlo(params, REPolicy::ordered_distinct, 60000, 1);
  OutcomeDistribution expected = theorem_state(3);
  double trials = static_cast<double>(counts.trials());
  CHECK(std::abs(counts.yy / trials - 0.5) < 0.02);
  CHECK(std::abs(counts.yn / trials - 1.0 / 6.0) < 0.02);
  CHECK(std::abs(counts.ny / trials - 1.0 / 6.0) < 0.02);
  CHECK(std::abs(counts.nn / trials - 1.0 / 6.0) < 0.02);
  CHECK(chi_square(counts, expected) < 16.27);
}

TEST_CASE("chi_square") {
  TrialCounts proportional{30000, 10000, 10000, 10000};
  CHECK(chi_square(proportional, theorem_state(3)) == 0.0);

  TrialCounts skewed{30300, 9900, 9900, 9900};
  CHECK(chi_square(skewed, theorem_state(3)) > 0.0);

  TrialCounts impossible{400, 3, 0, 600};
  CHECK(code_of([&] { chi_square(impossible, theorem_state(2)); }) ==
        Errc::impossible_outcome);

  TrialCounts correlated{499, 0, 0, 501};
  CHECK(chi_square(correlated, theorem_state(2)) ==
        doctest::Approx(0.004).epsilon(0.001));

  CHECK(chi_square_threshold(3) == doctest::Approx(16.266));
  CHECK(chi_square_threshold(1) == doctest::Approx(10.828));
  CHECK(code_of([] { chi_square_threshold(4); }) == Errc::invalid_input);
}
