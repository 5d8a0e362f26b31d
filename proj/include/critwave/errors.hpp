#ifndef CRITWAVE_ERRORS_HPP
#define CRITWAVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace critwave {

enum class errc {
  invalid_parameter,
  domain_exceeded,
  grid_mismatch,
  coverage,
  resolution,
  numeric,
  parse,
  precondition,
  inconsistency,
  io
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_parameter: return "invalid-parameter";
    case errc::domain_exceeded:   return "domain-exceeded";
    case errc::grid_mismatch:     return "grid-mismatch";
    case errc::coverage:          return "coverage";
    case errc::resolution:        return "resolution";
    case errc::numeric:           return "numeric";
    case errc::parse:             return "parse";
    case errc::precondition:      return "precondition";
    case errc::inconsistency:     return "inconsistency";
    case errc::io:                return "io";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw error(c, msg); }

}  // namespace critwave

#endif
