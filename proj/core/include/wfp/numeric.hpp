#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace wfp {

/// Numerically stable logistic function.
inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

/// Inverse of sigmoid; p is clamped away from {0,1}.
inline double logit(double p) {
  p = std::min(std::max(p, 1e-9), 1.0 - 1e-9);
  return std::log(p / (1.0 - p));
}

/// log(1 + e^x) without overflow.
inline double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

/// Shortest decimal form that round-trips to the same double. All CSV and
/// JSON report writers go through this so reruns are byte-identical.
inline void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  out.append(buf, ptr);
}

inline std::string fmt_double(double v) {
  std::string s;
  append_double(s, v);
  return s;
}

}  // namespace wfp
