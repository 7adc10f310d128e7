#include "channelwave/common.hpp"

#include <cmath>
#include <cstdio>

namespace channelwave {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Resolution: return "resolution";
    case ErrorKind::Window: return "window";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::UndefinedRatio: return "undefined-ratio";
    case ErrorKind::Configuration: return "configuration";
    case ErrorKind::NotSmallData: return "not-in-small-data-regime";
    case ErrorKind::Range: return "range";
    case ErrorKind::InsufficientRange: return "insufficient-range";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

double sphere_area(int n) {
  if (n < 0) throw Error(ErrorKind::Domain, "sphere dimension must be non-negative");
  const double half = 0.5 * (n + 1);
  return 2.0 * std::pow(kPi, half) / std::tgamma(half);
}

void require_odd_dimension(int d, int lo, int hi) {
  if (d % 2 == 0 || d < lo || d > hi) {
    throw Error(ErrorKind::Domain, "dimension " + std::to_string(d) + " must be odd and in [" +
                                       std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace channelwave
