#pragma once

#include <string>

#include "sep/statekit.hpp"

#include <json.hpp>

namespace sep {

// Insertion-ordered JSON so emitted documents are byte-stable.
using Json = nlohmann::ordered_json;

Json rational_json(const Rational& r);
Json distribution_json(const OutcomeDistribution& dist);
Json counts_json(const TrialCounts& counts);

// {session_id, N, k, e, x, held, re_pair, alice{...}, bob{...}, outcome, seed}
Json transcript_json(const SessionTranscript& t);

std::string transcript_text(const SessionTranscript& t);

// "1/2 1/6 1/6 1/6"
std::string distribution_text(const OutcomeDistribution& dist);

}  // namespace sep
