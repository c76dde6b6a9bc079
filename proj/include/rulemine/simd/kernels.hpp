#pragma once

#include <cstddef>
#include <span>

// Dense double-precision kernels used by the classifiers. Each kernel has a
// scalar reference and, on x86-64, an AVX2/FMA variant; the variant is chosen
// once at runtime from CPU features (override with RULEMINE_SIMD=scalar).

namespace rulemine::simd {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  void (*scale)(double alpha, double* x, std::size_t n);
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
}  // namespace scalar

#if defined(RULEMINE_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
}  // namespace avx2
#endif

const char* isa_name(Isa isa);
bool isa_supported(Isa isa);

/// The table for a specific ISA; throws ConfigError when unsupported.
const KernelTable& kernels(Isa isa);

Isa active_isa();
/// Forces an ISA for subsequent calls (tests and benchmarking).
void set_active_isa(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double squared_distance(std::span<const double> a, std::span<const double> b);
void scale(double alpha, std::span<double> x);

}  // namespace rulemine::simd
