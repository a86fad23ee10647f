#include "sep/serialize.hpp"

#include <sstream>

namespace sep {

Json rational_json(const Rational& r) { return Json{{"num", r.num}, {"den", r.den}}; }

Json distribution_json(const OutcomeDistribution& dist) {
  return Json{{"yy", rational_json(dist.yy)},
              {"yn", rational_json(dist.yn)},
              {"ny", rational_json(dist.ny)},
              {"nn", rational_json(dist.nn)}};
}

Json counts_json(const TrialCounts& counts) {
  return Json{{"yy", counts.yy}, {"yn", counts.yn}, {"ny", counts.ny}, {"nn", counts.nn}};
}

namespace {

Json party_json(const PartyResult& r) {
  Json j;
  j["received"] = r.received;
  j["factor"] = r.factor_found ? Json(*r.factor_found) : Json(nullptr);
  j["recovered"] = r.recovered ? Json(*r.recovered) : Json(nullptr);
  j["bit"] = r.success() ? "Y" : "N";
  return j;
}

std::string party_text(const char* name, const PartyResult& r) {
  std::ostringstream out;
  out << name << " received " << r.received << " factor ";
  if (r.factor_found) {
    out << *r.factor_found;
  } else {
    out << "-";
  }
  out << " recovered ";
  if (r.recovered) {
    out << *r.recovered;
  } else {
    out << "-";
  }
  out << " -> " << (r.success() ? "Y" : "N");
  return out.str();
}

}  // namespace

Json transcript_json(const SessionTranscript& t) {
  Json j;
  j["session_id"] = t.session_id;
  j["N"] = t.params.setup.s.n;
  j["k"] = t.params.setup.k;
  j["e"] = t.params.e;
  j["x"] = t.params.x;
  j["held"] = Json::array({t.params.held_alice, t.params.held_bob});
  j["re_pair"] = Json::array({t.re_pair.first, t.re_pair.second});
  j["alice"] = party_json(t.alice);
  j["bob"] = party_json(t.bob);
  j["outcome"] = outcome_label(t.outcome);
  j["seed"] = t.seed;
  return j;
}

std::string transcript_text(const SessionTranscript& t) {
  std::ostringstream out;
  out << "session " << t.session_id << " seed " << t.seed << "\n"
      << "N " << t.params.setup.s.n << " k " << t.params.setup.k << " e " << t.params.e
      << " m " << t.params.m << " c " << t.params.c << "\n"
      << "x " << t.params.x << " held " << t.params.held_alice << " " << t.params.held_bob
      << "\n"
      << "re_pair " << t.re_pair.first << " " << t.re_pair.second << "\n"
      << party_text("alice", t.alice) << "\n"
      << party_text("bob", t.bob) << "\n"
      << "outcome " << outcome_label(t.outcome) << "\n";
  return out.str();
}

std::string distribution_text(const OutcomeDistribution& dist) {
  return dist.yy.str() + " " + dist.yn.str() + " " + dist.ny.str() + " " + dist.nn.str();
}

}  // namespace sep
