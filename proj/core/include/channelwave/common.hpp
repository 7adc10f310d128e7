#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace channelwave {

enum class ErrorKind {
  InvalidInput,
  Domain,
  Resolution,
  Window,
  Precondition,
  UndefinedRatio,
  Configuration,
  NotSmallData,
  Range,
  InsufficientRange,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Surface area of the unit sphere S^n embedded in R^{n+1}.
double sphere_area(int n);

/// Throws Domain unless d is odd and lies in [lo, hi].
void require_odd_dimension(int d, int lo, int hi);

/// Closed interval [lo, hi]; either bound may be infinite.
struct Interval {
  double lo = -kInf;
  double hi = kInf;

  bool empty() const noexcept { return !(lo <= hi); }
  double length() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

/// 64-bit FNV-1a, used for stable config and instance hashes.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 14695981039346656037ull);
std::string hex64(std::uint64_t value);

}  // namespace channelwave
