#pragma once

#include <string>

#include "sep/protocol.hpp"

namespace sep {

// Non-negative rational, always stored reduced.
struct Rational {
  u64 num = 0;
  u64 den = 1;

  Rational() = default;
  Rational(u64 numerator, u64 denominator);

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  // "13/20"; whole values render without the denominator ("0", "1").
  std::string str() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend Rational operator+(const Rational& a, const Rational& b);
};

// Exact probabilities of the four joint outcomes, in (YY, YN, NY, NN) order.
struct OutcomeDistribution {
  Rational yy, yn, ny, nn;

  friend bool operator==(const OutcomeDistribution&, const OutcomeDistribution&) = default;
};

struct TrialCounts {
  u64 yy = 0;
  u64 yn = 0;
  u64 ny = 0;
  u64 nn = 0;

  u64 trials() const { return yy + yn + ny + nn; }
  void add(Outcome o);
};

enum class Party { alice, bob };

// The closed form for a degree-k game:
//   ( (k^2-3k+3)/(k(k-1)), (k-2)/(k(k-1)), (k-2)/(k(k-1)), 1/(k(k-1)) ).
// Defined for every k >= 2; k == 2 collapses to (1/2, 0, 0, 1/2).
OutcomeDistribution theorem_state(u64 k);

// Independent oracle: exhaustively iterates the root distributor's choices
// over abstract root indices (held roots at indices 0 and 1) and classifies
// each case. Odd k: all k(k-1) ordered distinct pairs. k == 2: the two class
// assignments of the swap policy.
OutcomeDistribution enumerate_distribution(u64 k);

// A party's total success probability: YY+YN for Alice, YY+NY for Bob.
Rational marginal_success(const OutcomeDistribution& dist, Party party);

// Exhaustive iteration of RE's concrete choices against a fixed parameter
// set, running the full factor/recover pipeline per case.
TrialCounts enumerate_protocol(const ProtocolParams& params);

// `trials` independent sessions; session i is seeded from
// (master_seed, i), so counts are reproducible and order-independent.
TrialCounts monte_carlo(const ProtocolParams& params, REPolicy policy, u64 trials,
                        u64 master_seed);

// Pearson statistic over the cells with nonzero expectation. A nonzero count
// in a zero-probability cell is an impossible outcome, not a bad fit.
double chi_square(const TrialCounts& counts, const OutcomeDistribution& expected);

// 99.9th percentile of the chi-square distribution by degrees of freedom
// (1..3); the simulate verdict threshold.
double chi_square_threshold(int degrees_of_freedom);

}  // namespace sep
