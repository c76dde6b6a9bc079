#include <atomic>
#include <cassert>
#include <cstdlib>
#include <string_view>

#include "rulemine/error.hpp"
#include "rulemine/simd/kernels.hpp"

namespace rulemine::simd {

namespace {

constexpr KernelTable kScalarTable{scalar::dot, scalar::axpy, scalar::squared_distance,
                                   scalar::scale};
#if defined(RULEMINE_HAVE_AVX2)
constexpr KernelTable kAvx2Table{avx2::dot, avx2::axpy, avx2::squared_distance, avx2::scale};
#endif

Isa detect() {
  if (const char* env = std::getenv("RULEMINE_SIMD"); env && std::string_view(env) == "scalar")
    return Isa::Scalar;
  return isa_supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<const KernelTable*>& active_table() {
  static std::atomic<const KernelTable*> table{&kernels(detect())};
  return table;
}

}  // namespace

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(RULEMINE_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& kernels(Isa isa) {
  if (!isa_supported(isa)) throw ConfigError(std::string("ISA not supported: ") + isa_name(isa));
#if defined(RULEMINE_HAVE_AVX2)
  if (isa == Isa::Avx2) return kAvx2Table;
#endif
  return kScalarTable;
}

Isa active_isa() { return active_table().load() == &kScalarTable ? Isa::Scalar : Isa::Avx2; }

void set_active_isa(Isa isa) { active_table().store(&kernels(isa)); }

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active_table().load(std::memory_order_relaxed)->dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active_table().load(std::memory_order_relaxed)->axpy(alpha, x.data(), y.data(), x.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active_table().load(std::memory_order_relaxed)->squared_distance(a.data(), b.data(),
                                                                          a.size());
}

void scale(double alpha, std::span<double> x) {
  active_table().load(std::memory_order_relaxed)->scale(alpha, x.data(), x.size());
}

}  // namespace rulemine::simd
