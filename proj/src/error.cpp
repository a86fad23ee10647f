#include "sep/error.hpp"

namespace sep {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_modulus: return "invalid-modulus";
    case Errc::invalid_input: return "invalid-input";
    case Errc::not_invertible: return "not-invertible";
    case Errc::not_semiprime: return "not-semiprime";
    case Errc::not_coprime: return "not-coprime";
    case Errc::unsupported_prime: return "unsupported-prime";
    case Errc::unsupported_variant: return "unsupported-variant";
    case Errc::invalid_setup: return "invalid-setup";
    case Errc::invalid_degree: return "invalid-degree";
    case Errc::bad_exponent: return "bad-exponent";
    case Errc::bad_message: return "bad-message";
    case Errc::not_a_residue: return "not-a-residue";
    case Errc::not_a_factor: return "not-a-factor";
    case Errc::protocol_violation: return "protocol-violation";
    case Errc::impossible_outcome: return "impossible-outcome";
    case Errc::oversize_frame: return "oversize-frame";
    case Errc::truncated_frame: return "truncated-frame";
    case Errc::unknown_tag: return "unknown-tag";
    case Errc::wrong_field_count: return "wrong-field-count";
    case Errc::transport_failure: return "transport-failure";
  }
  return "unknown-error";
}

}  // namespace sep
