#include "smatch/kernels.hpp"

#include <cstdlib>
#include <string>

#include "smatch/error.hpp"

namespace smatch::kernels {

extern const Ops kScalarOps;
#if defined(SMATCH_HAVE_AVX2)
extern const Ops kAvx2Ops;
#endif
#if defined(SMATCH_HAVE_NEON)
extern const Ops kNeonOps;
#endif

const char* backend_name(Backend backend) {
  switch (backend) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "?";
}

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(SMATCH_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Backend::neon:
#if defined(SMATCH_HAVE_NEON)
      return true;  // baseline on aarch64
#else
      return false;
#endif
  }
  return false;
}

const Ops& table(Backend backend) {
  if (!backend_available(backend)) {
    fail(ErrorKind::invalid_input,
         std::string("kernel backend not available on this machine: ") + backend_name(backend));
  }
  switch (backend) {
    case Backend::scalar: return kScalarOps;
#if defined(SMATCH_HAVE_AVX2)
    case Backend::avx2: return kAvx2Ops;
#endif
#if defined(SMATCH_HAVE_NEON)
    case Backend::neon: return kNeonOps;
#endif
    default: return kScalarOps;
  }
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
    if (backend_available(b)) out.push_back(b);
  }
  return out;
}

namespace {

Backend select_backend() {
  const char* env = std::getenv("SMATCH_SIMD");
  const std::string req = env == nullptr ? "auto" : env;
  if (req == "scalar") return Backend::scalar;
  if (req == "avx2" || req == "neon") {
    const Backend b = req == "avx2" ? Backend::avx2 : Backend::neon;
    if (!backend_available(b)) {
      fail(ErrorKind::invalid_input, "SMATCH_SIMD requests unavailable backend: " + req);
    }
    return b;
  }
  if (req != "auto" && !req.empty()) {
    fail(ErrorKind::invalid_input, "unknown SMATCH_SIMD value: " + req);
  }
  if (backend_available(Backend::avx2)) return Backend::avx2;
  if (backend_available(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

}  // namespace

Backend active_backend() {
  static const Backend selected = select_backend();
  return selected;
}

const Ops& active() { return table(active_backend()); }

}  // namespace smatch::kernels
