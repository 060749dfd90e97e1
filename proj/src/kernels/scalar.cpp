#include "glass/kernels.hpp"

namespace glass::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    l0 += a[i] * b[i];
    l1 += a[i + 1] * b[i + 1];
    l2 += a[i + 2] * b[i + 2];
    l3 += a[i + 3] * b[i + 3];
  }
  double r = (l0 + l1) + (l2 + l3);
  for (; i < n; ++i) r += a[i] * b[i];
  return r;
}

double sum_squares_scalar(const double* a, std::size_t n) { return dot_scalar(a, a, n); }

}  // namespace

const KernelSet& scalar_kernels() {
  static const KernelSet set{"scalar", &dot_scalar, &sum_squares_scalar};
  return set;
}

}  // namespace glass::kernels
