#include <atomic>
#include <cstdlib>
#include <string_view>

#include "sensorsel/simd/kernels.hpp"

namespace sensorsel::simd {
namespace {

const KernelTable* table_for(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return &scalar_kernels();
    case Isa::Avx2: return avx2_kernels();
    case Isa::Neon: return neon_kernels();
  }
  return nullptr;
}

const KernelTable* detect() noexcept {
  if (const char* env = std::getenv("SENSORSEL_KERNELS")) {
    const std::string_view want(env);
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
      if (want == isa_name(isa)) {
        if (const KernelTable* t = table_for(isa)) return t;
      }
    }
  }
  if (const KernelTable* t = avx2_kernels()) return t;
  if (const KernelTable* t = neon_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() noexcept {
  static std::atomic<const KernelTable*> current{detect()};
  return current;
}

}  // namespace

const KernelTable& active() noexcept { return *slot().load(std::memory_order_acquire); }

bool set_isa(Isa isa) noexcept {
  const KernelTable* t = table_for(isa);
  if (t == nullptr) return false;
  slot().store(t, std::memory_order_release);
  return true;
}

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

}  // namespace sensorsel::simd
