#pragma once

#include <Eigen/Core>

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperlab {

using Index = Eigen::Index;
using SpaceId = std::uint64_t;

enum class Errc {
  InvalidArgument,
  Asymmetry,
  NonzeroDiagonal,
  TriangleViolation,
  CoincidentPoints,
  SingletonSpace,
  KindMismatch,
  TooLarge,
  MissingSingletons,
  Discrepancy,
  BadParams,
  UnknownName,
  NotInjective,
  NotMonotone,
  NotConvexPreserving,
  Io,
  Parse,
  UnknownSuite,
  BadConfig,
};

constexpr std::string_view errc_name(Errc e) noexcept
{
  switch (e) {
  case Errc::InvalidArgument: return "INVALID_ARGUMENT";
  case Errc::Asymmetry: return "ASYMMETRY";
  case Errc::NonzeroDiagonal: return "NONZERO_DIAGONAL";
  case Errc::TriangleViolation: return "TRIANGLE_VIOLATION";
  case Errc::CoincidentPoints: return "COINCIDENT_POINTS";
  case Errc::SingletonSpace: return "SINGLETON_SPACE";
  case Errc::KindMismatch: return "KIND_MISMATCH";
  case Errc::TooLarge: return "TOO_LARGE";
  case Errc::MissingSingletons: return "MISSING_SINGLETONS";
  case Errc::Discrepancy: return "DISCREPANCY";
  case Errc::BadParams: return "BAD_PARAMS";
  case Errc::UnknownName: return "UNKNOWN_NAME";
  case Errc::NotInjective: return "NOT_INJECTIVE";
  case Errc::NotMonotone: return "NOT_MONOTONE";
  case Errc::NotConvexPreserving: return "NOT_CONVEX_PRESERVING";
  case Errc::Io: return "IO";
  case Errc::Parse: return "PARSE";
  case Errc::UnknownSuite: return "UNKNOWN_SUITE";
  case Errc::BadConfig: return "BAD_CONFIG";
  }
  return "UNKNOWN";
}

/// Library-wide exception. `code()` is the machine-readable kind; `what()`
/// is "<CODE>: <detail>".
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code)
  {
  }

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

inline SpaceId next_space_id() noexcept
{
  static std::atomic<SpaceId> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

/// Enumeration / exhaustive-pair caps. HYPERLAB_MAX_N, when set to a positive
/// integer, replaces every base-size cap.
struct Caps {
  Index enumerate_max_n = 20;
  Index exhaustive_max_n = 10;
  Index max_members = 4096;
};

inline Caps caps_from_env()
{
  Caps caps;
  if (const char* env = std::getenv("HYPERLAB_MAX_N")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) {
      caps.enumerate_max_n = v;
      caps.exhaustive_max_n = v;
    }
  }
  return caps;
}

} // namespace hyperlab
