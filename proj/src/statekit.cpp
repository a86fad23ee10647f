#include "sep/statekit.hpp"

#include <array>

namespace sep {

Rational::Rational(u64 numerator, u64 denominator) : num(numerator), den(denominator) {
  if (den == 0) fail(Errc::invalid_input, "zero denominator");
  u64 g = gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
}

void TrialCounts::add(Outcome o) {
  switch (o) {
    case Outcome::yy: ++yy; break;
    case Outcome::yn: ++yn; break;
    case Outcome::ny: ++ny; break;
    case Outcome::nn: ++nn; break;
  }
}

OutcomeDistribution theorem_state(u64 k) {
  if (k < 2) fail(Errc::invalid_degree, "degree must be at least 2");
  u64 cases = k * (k - 1);
  return OutcomeDistribution{
      Rational(k * k - 3 * k + 3, cases),
      Rational(k - 2, cases),
      Rational(k - 2, cases),
      Rational(1, cases),
  };
}

OutcomeDistribution enumerate_distribution(u64 k) {
  if (k < 2 || (k > 2 && k % 2 == 0)) {
    fail(Errc::invalid_degree, "degree must be 2 or odd and at least 3");
  }
  if (k == 2) {
    // Swap policy: keep-own-class is NN, cross-class is YY, one case each.
    return OutcomeDistribution{Rational(1, 2), Rational(0, 1), Rational(0, 1), Rational(1, 2)};
  }
  // Abstract root indices; Alice holds index 0, Bob holds index 1.
  TrialCounts counts;
  for (u64 to_alice = 0; to_alice < k; ++to_alice) {
    for (u64 to_bob = 0; to_bob < k; ++to_bob) {
      if (to_alice == to_bob) continue;
      counts.add(classify_outcome(to_alice != 0, to_bob != 1));
    }
  }
  u64 cases = counts.trials();
  return OutcomeDistribution{
      Rational(counts.yy, cases),
      Rational(counts.yn, cases),
      Rational(counts.ny, cases),
      Rational(counts.nn, cases),
  };
}

Rational marginal_success(const OutcomeDistribution& dist, Party party) {
  return party == Party::alice ? dist.yy + dist.yn : dist.yy + dist.ny;
}

TrialCounts enumerate_protocol(const ProtocolParams& params) {
  TrialCounts counts;
  const GameSetup& setup = params.setup;
  RootSet set = kth_roots_mod_semiprime(params.x, setup);
  if (policy_for(setup) == REPolicy::class_swap) {
    // 2 class orders x 2 representatives each.
    auto class_a = negation_class(set.roots[0], setup.s.n);
    auto class_b = negation_class(set.roots[1], setup.s.n);
    std::array<std::array<u64, 2>, 2> classes{{{class_a.first, class_a.second},
                                               {class_b.first, class_b.second}}};
    for (int order = 0; order < 2; ++order) {
      const auto& to_alice = classes[order];
      const auto& to_bob = classes[1 - order];
      for (u64 ra : to_alice) {
        for (u64 rb : to_bob) {
          counts.add(run_session_with_pair(params, {ra, rb}, 0).outcome);
        }
      }
    }
    return counts;
  }
  for (u64 ra : set.roots) {
    for (u64 rb : set.roots) {
      if (ra == rb) continue;
      counts.add(run_session_with_pair(params, {ra, rb}, 0).outcome);
    }
  }
  return counts;
}

TrialCounts monte_carlo(const ProtocolParams& params, REPolicy policy, u64 trials,
                        u64 master_seed) {
  if (trials < 1) fail(Errc::invalid_input, "at least one trial required");
  TrialCounts counts;
  for (u64 i = 0; i < trials; ++i) {
    counts.add(run_session(params, policy, i, session_seed(master_seed, i)).outcome);
  }
  return counts;
}

double chi_square(const TrialCounts& counts, const OutcomeDistribution& expected) {
  const std::array<u64, 4> observed{counts.yy, counts.yn, counts.ny, counts.nn};
  const std::array<Rational, 4> probs{expected.yy, expected.yn, expected.ny, expected.nn};
  const double trials = static_cast<double>(counts.trials());
  double statistic = 0.0;
  for (int cell = 0; cell < 4; ++cell) {
    if (probs[cell].num == 0) {
      if (observed[cell] != 0) {
        fail(Errc::impossible_outcome, "nonzero count in a zero-probability cell");
      }
      continue;
    }
    double expectation = probs[cell].to_double() * trials;
    double delta = static_cast<double>(observed[cell]) - expectation;
    statistic += delta * delta / expectation;
  }
  return statistic;
}

double chi_square_threshold(int degrees_of_freedom) {
  // 99.9th percentile.
  switch (degrees_of_freedom) {
    case 1: return 10.828;
    case 2: return 13.816;
    case 3: return 16.266;
    default: fail(Errc::invalid_input, "degrees of freedom must be 1..3");
  }
}

}  // namespace sep
