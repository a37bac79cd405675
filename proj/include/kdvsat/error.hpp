#pragma once

#include <stdexcept>
#include <string>

namespace kdvsat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an input value was violated.
class InvalidParameter : public Error {
 public:
  InvalidParameter(const std::string& field, const std::string& what)
      : Error("invalid parameter '" + field + "': " + what), field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// External data (tabulated initial condition, config file) is unusable.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Factorization hit an exactly zero pivot.
class NumericalBreakdown : public Error {
 public:
  explicit NumericalBreakdown(std::size_t pivot)
      : Error("singular matrix: zero pivot at index " + std::to_string(pivot)),
        pivot_(pivot) {}

  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

/// A non-finite value appeared while time stepping.
class DivergenceError : public Error {
 public:
  DivergenceError(long time_index, int iterate)
      : Error("non-finite state at time index " + std::to_string(time_index) +
              ", inner iterate " + std::to_string(iterate)),
        time_index_(time_index),
        iterate_(iterate) {}

  long time_index() const noexcept { return time_index_; }
  int iterate() const noexcept { return iterate_; }

 private:
  long time_index_;
  int iterate_;
};

/// Decay-rate fit requested on data outside the log domain.
class FitDomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace kdvsat
