#ifndef HAWKES_ERROR_HPP
#define HAWKES_ERROR_HPP

#include <stdexcept>
#include <string>

namespace hawkes {

// Numeric values are part of the C API (see hawkes.h) and must not change.
enum class ErrorCode : int {
  kOk = 0,
  kDomain = 1,
  kDivergence = 2,
  kUnboundedSearch = 3,
  kIntegrity = 4,
  kUnsupported = 5,
  kInvariantViolation = 6,
  kConfig = 7,
  kIo = 8,
  kInternal = 9,
};

const char *error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

// Invalid argument outside the mathematical domain of an operation.
struct DomainError : Error {
  explicit DomainError(const std::string &w) : Error(ErrorCode::kDomain, w) {}
};

// History state outside S_h: the excitation sum exceeds the divergence cap.
struct DivergenceError : Error {
  explicit DivergenceError(const std::string &w)
      : Error(ErrorCode::kDivergence, w) {}
};

// Inversion of the cumulative intensity ran past its time cap.
struct UnboundedSearchError : Error {
  explicit UnboundedSearchError(const std::string &w)
      : Error(ErrorCode::kUnboundedSearch, w) {}
};

// Recomputed quantities disagree with stored ones beyond tolerance.
struct IntegrityError : Error {
  explicit IntegrityError(const std::string &w)
      : Error(ErrorCode::kIntegrity, w) {}
};

struct UnsupportedError : Error {
  explicit UnsupportedError(const std::string &w)
      : Error(ErrorCode::kUnsupported, w) {}
};

struct InvariantViolation : Error {
  explicit InvariantViolation(const std::string &w)
      : Error(ErrorCode::kInvariantViolation, w) {}
};

// Carries the JSON pointer of the offending config entry when known.
struct ConfigError : Error {
  explicit ConfigError(const std::string &w, std::string pointer = "")
      : Error(ErrorCode::kConfig, w), pointer_(std::move(pointer)) {}
  const std::string &pointer() const noexcept { return pointer_; }

private:
  std::string pointer_;
};

struct IoError : Error {
  explicit IoError(const std::string &w) : Error(ErrorCode::kIo, w) {}
};

} // namespace hawkes

#endif // HAWKES_ERROR_HPP
