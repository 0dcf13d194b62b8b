#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ttsim {

enum class ErrorKind {
  InvalidArgument,
  Membership,
  DegenerateGroundTruth,
  DegenerateSet,
  Infeasible,
  Granularity,
  ZeroMass,
  AbsoluteContinuity,
  NeverTerminates,
  BudgetExhausted,
  Undetermined,
  Parse,
  Usage,
};

const char* to_string(ErrorKind kind) noexcept;

// Every failure raised by the library derives from this, so callers can switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class BudgetExhaustedError : public Error {
 public:
  explicit BudgetExhaustedError(std::uint64_t draws_used);
  std::uint64_t draws_used() const noexcept { return draws_used_; }

 private:
  std::uint64_t draws_used_;
};

// Raised when the finite support cannot reach the requested (J, s_ver) within tolerance.
class GranularityError : public Error {
 public:
  GranularityError(double best_j, double best_s_ver, double tol);
  double best_j() const noexcept { return best_j_; }
  double best_s_ver() const noexcept { return best_s_ver_; }

 private:
  double best_j_;
  double best_s_ver_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Wraps a failure inside a Monte Carlo run with the episode (and grid point) where it happened.
class EpisodeError : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  EpisodeError(ErrorKind inner, std::size_t episode, std::size_t grid_index, const std::string& inner_what);
  std::size_t episode() const noexcept { return episode_; }
  std::size_t grid_index() const noexcept { return grid_index_; }
  ErrorKind inner_kind() const noexcept { return inner_; }

 private:
  ErrorKind inner_;
  std::size_t episode_;
  std::size_t grid_index_;
};

}  // namespace ttsim
