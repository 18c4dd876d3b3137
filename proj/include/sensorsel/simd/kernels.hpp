#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops used by deflation, Jacobi sweeps and Gram products.
//
// Every kernel has a scalar reference implementation plus vectorized variants
// (AVX2+FMA on x86-64, NEON on AArch64). The active table is chosen once at
// first use from CPU feature detection; SENSORSEL_KERNELS=scalar|avx2|neon in
// the environment, or set_isa(), overrides the choice. Variants agree with the
// reference up to floating point reassociation, not bit-for-bit.

namespace sensorsel::simd {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum_sq)(const double* a, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // (x, y) <- (c*x - s*y, s*x + c*y)
  void (*rotate)(double c, double s, double* x, double* y, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
// nullptr when the variant was not compiled in or the CPU lacks the features.
const KernelTable* avx2_kernels() noexcept;
const KernelTable* neon_kernels() noexcept;

const KernelTable& active() noexcept;
// Returns false (and leaves the table unchanged) if the requested ISA is unavailable.
bool set_isa(Isa isa) noexcept;
std::string_view isa_name(Isa isa) noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  return active().dot(a.data(), b.data(), a.size());
}
inline double sum_sq(std::span<const double> a) noexcept {
  return active().sum_sq(a.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
  active().axpy(alpha, x.data(), y.data(), x.size());
}
inline void rotate(double c, double s, std::span<double> x, std::span<double> y) noexcept {
  active().rotate(c, s, x.data(), y.data(), x.size());
}

}  // namespace sensorsel::simd
