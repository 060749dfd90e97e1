#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace glass::kernels {

// Dense double-precision reductions used by the similarity objective and the
// synthetic oracles.
//
// Every variant accumulates in four interleaved lanes (element i goes to lane
// i % 4), folds the lanes as (l0 + l1) + (l2 + l3), then adds the tail
// elements in order. The scalar reference follows the same order, so the
// SIMD variants are bit-identical to it and dispatch never changes a run.

using DotFn = double (*)(const double* a, const double* b, std::size_t n);
using SumSquaresFn = double (*)(const double* a, std::size_t n);

struct KernelSet {
  std::string_view name;
  DotFn dot;
  SumSquaresFn sum_squares;
};

const KernelSet& scalar_kernels();

/// Variants compiled in and supported by the running CPU, scalar first.
std::vector<const KernelSet*> available_kernels();

/// Best available set. GLASS_KERNELS=scalar forces the reference path.
const KernelSet& active_kernels();

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active_kernels().dot(a.data(), b.data(), a.size());
}

inline double sum_squares(std::span<const double> a) {
  return active_kernels().sum_squares(a.data(), a.size());
}

/// out[r] = dot(row r of a row-major rows x cols matrix, x).
void matvec(std::span<const double> matrix, std::size_t rows, std::span<const double> x,
            std::span<double> out);

namespace detail {
#if defined(GLASS_HAVE_AVX2)
const KernelSet& avx2_kernels();
#endif
#if defined(GLASS_HAVE_NEON)
const KernelSet& neon_kernels();
#endif
}  // namespace detail

}  // namespace glass::kernels
