#pragma once

#include <cstddef>
#include <vector>

namespace smatch::kernels {

// Dense double-precision vector kernels used by the geometry layer. Each
// backend fills one table; the scalar table is the reference semantics and
// every other backend must agree with it within summation-order rounding.
struct Ops {
  const char* name;
  // sum_i a[i]*b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i a[i]^2
  double (*nrm2sq)(const double* a, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // x[i] *= alpha
  void (*scal)(double alpha, double* x, std::size_t n);
  // plane rotation: (x[i], y[i]) <- (c*x[i] - s*y[i], s*x[i] + c*y[i])
  void (*rot)(double* x, double* y, double c, double s, std::size_t n);
};

enum class Backend { scalar, avx2, neon };

const char* backend_name(Backend backend);

bool backend_available(Backend backend);

/// Table for an explicit backend; throws invalid_input if the backend is not
/// compiled in or the CPU lacks it.
const Ops& table(Backend backend);

std::vector<Backend> available_backends();

/// Process-wide table, selected once: best available backend, overridable via
/// the SMATCH_SIMD environment variable (auto|scalar|avx2|neon).
const Ops& active();
Backend active_backend();

}  // namespace smatch::kernels
