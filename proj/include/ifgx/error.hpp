#pragma once

#include <stdexcept>
#include <string>

namespace ifgx {

/// Exception carrying one of the closed-set error codes (E_CYCLE, E_SCHEMA, ...).
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

} // namespace ifgx
