#pragma once

#include <stdexcept>
#include <string>

namespace snfp {

// Error categories map one-to-one onto CLI exit codes.
enum class ErrorKind {
  Parse = 2,
  Shape = 3,
  NotAComplex = 4,
  NotACocycle = 5,
  Internal = 6,
  Domain = 7,
  Io = 8,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
  ErrorKind kind_;
};

inline Error parse_error(const std::string& what) { return {ErrorKind::Parse, what}; }
inline Error shape_error(const std::string& what) { return {ErrorKind::Shape, what}; }
inline Error domain_error(const std::string& what) { return {ErrorKind::Domain, what}; }
inline Error io_error(const std::string& what) { return {ErrorKind::Io, what}; }
inline Error internal_error(const std::string& what) { return {ErrorKind::Internal, what}; }

}  // namespace snfp
