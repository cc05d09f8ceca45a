#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace circlefeat {

/// Sums `terms` in ascending value order with Neumaier compensation.
/// The result is a function of the value multiset alone, never of the
/// order terms were produced in, so quantities built from these sums stay
/// bit-identical under node relabeling. Consumes the buffer (sorts in place).
inline double ordered_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double sum = 0.0;
  double comp = 0.0;
  for (double t : terms) {
    double next = sum + t;
    if (std::abs(sum) >= std::abs(t)) {
      comp += (sum - next) + t;
    } else {
      comp += (t - next) + sum;
    }
    sum = next;
  }
  return sum + comp;
}

inline double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

/// Binary cross-entropy evaluated from the logit; finite for every finite z.
inline double bce_from_logit(double z, double label) {
  return std::max(z, 0.0) - z * label + std::log1p(std::exp(-std::abs(z)));
}

}  // namespace circlefeat
