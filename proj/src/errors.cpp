#include "ttsim/errors.hpp"

#include <cstdio>

namespace ttsim {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Membership: return "membership";
    case ErrorKind::DegenerateGroundTruth: return "degenerate-ground-truth";
    case ErrorKind::DegenerateSet: return "degenerate-set";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::Granularity: return "granularity";
    case ErrorKind::ZeroMass: return "zero-mass";
    case ErrorKind::AbsoluteContinuity: return "absolute-continuity";
    case ErrorKind::NeverTerminates: return "never-terminates";
    case ErrorKind::BudgetExhausted: return "budget-exhausted";
    case ErrorKind::Undetermined: return "undetermined";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Usage: return "usage";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

BudgetExhaustedError::BudgetExhaustedError(std::uint64_t draws_used)
    : Error(ErrorKind::BudgetExhausted, "draw budget exhausted after " + std::to_string(draws_used) + " proposals"),
      draws_used_(draws_used) {}

namespace {
std::string granularity_message(double j, double s_ver, double tol) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "targets not reachable within tol=%.6g; best achievable J=%.6g, s_ver=%.6g", tol, j,
                s_ver);
  return buf;
}
}  // namespace

GranularityError::GranularityError(double best_j, double best_s_ver, double tol)
    : Error(ErrorKind::Granularity, granularity_message(best_j, best_s_ver, tol)),
      best_j_(best_j),
      best_s_ver_(best_s_ver) {}

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {
std::string episode_message(std::size_t episode, std::size_t grid, const std::string& inner) {
  std::string msg = "episode " + std::to_string(episode);
  if (grid != EpisodeError::npos) msg += " (grid point " + std::to_string(grid) + ")";
  return msg + ": " + inner;
}
}  // namespace

EpisodeError::EpisodeError(ErrorKind inner, std::size_t episode, std::size_t grid_index, const std::string& inner_what)
    : Error(inner, episode_message(episode, grid_index, inner_what)),
      inner_(inner),
      episode_(episode),
      grid_index_(grid_index) {}

}  // namespace ttsim
