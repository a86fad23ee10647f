#pragma once

#include <stdexcept>
#include <string>

namespace sep {

// Every failure the library can signal. The CLI maps these onto exit codes;
// tests match on the code rather than the message text.
enum class Errc {
  invalid_modulus,
  invalid_input,
  not_invertible,
  not_semiprime,
  not_coprime,
  unsupported_prime,
  unsupported_variant,
  invalid_setup,
  invalid_degree,
  bad_exponent,
  bad_message,
  not_a_residue,
  not_a_factor,
  protocol_violation,
  impossible_outcome,
  oversize_frame,
  truncated_frame,
  unknown_tag,
  wrong_field_count,
  transport_failure,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace sep
