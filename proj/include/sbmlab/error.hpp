#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sbmlab {

enum class Errc {
  parameter_out_of_range,
  invalid_argument,
  length_mismatch,
  empty_community,
  degenerate,
  division_by_zero,
  domain_error,
  size_limit,
  non_finite,
  empty_typical_set,
  io_error,
};

constexpr std::string_view to_string(Errc e) noexcept {
  switch (e) {
    case Errc::parameter_out_of_range: return "parameter-out-of-range";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::length_mismatch: return "length-mismatch";
    case Errc::empty_community: return "empty-community";
    case Errc::degenerate: return "degenerate";
    case Errc::division_by_zero: return "division-by-zero";
    case Errc::domain_error: return "domain-error";
    case Errc::size_limit: return "size-limit";
    case Errc::non_finite: return "non-finite";
    case Errc::empty_typical_set: return "empty-typical-set";
    case Errc::io_error: return "io-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sbmlab
