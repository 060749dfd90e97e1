#include <arm_neon.h>

#include "glass/kernels.hpp"

namespace glass::kernels::detail {
namespace {

// Two 2-lane accumulators reproduce the 4-lane order of the scalar
// reference. vmulq/vaddq are kept separate (no vfmaq).
double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc01 = vaddq_f64(acc01, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    acc23 = vaddq_f64(acc23, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double r = (vgetq_lane_f64(acc01, 0) + vgetq_lane_f64(acc01, 1)) +
             (vgetq_lane_f64(acc23, 0) + vgetq_lane_f64(acc23, 1));
  for (; i < n; ++i) r += a[i] * b[i];
  return r;
}

double sum_squares_neon(const double* a, std::size_t n) { return dot_neon(a, a, n); }

}  // namespace

const KernelSet& neon_kernels() {
  static const KernelSet set{"neon", &dot_neon, &sum_squares_neon};
  return set;
}

}  // namespace glass::kernels::detail
