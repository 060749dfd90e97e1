#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "glass/kernels.hpp"

namespace glass::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(GLASS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelSet& select_kernels() {
  if (const char* forced = std::getenv("GLASS_KERNELS")) {
    const std::string_view want(forced);
    for (const KernelSet* set : available_kernels()) {
      if (set->name == want) return *set;
    }
  }
  return *available_kernels().back();
}

}  // namespace

std::vector<const KernelSet*> available_kernels() {
  std::vector<const KernelSet*> sets{&scalar_kernels()};
#if defined(GLASS_HAVE_AVX2)
  if (cpu_has_avx2()) sets.push_back(&detail::avx2_kernels());
#endif
#if defined(GLASS_HAVE_NEON)
  sets.push_back(&detail::neon_kernels());
#endif
  return sets;
}

const KernelSet& active_kernels() {
  static const KernelSet& set = select_kernels();
  return set;
}

void matvec(std::span<const double> matrix, std::size_t rows, std::span<const double> x,
            std::span<double> out) {
  const std::size_t cols = x.size();
  if (matrix.size() != rows * cols || out.size() != rows) {
    throw std::invalid_argument("matvec: shape mismatch");
  }
  const DotFn dot_fn = active_kernels().dot;
  for (std::size_t r = 0; r < rows; ++r) {
    out[r] = dot_fn(matrix.data() + r * cols, x.data(), cols);
  }
}

}  // namespace glass::kernels
