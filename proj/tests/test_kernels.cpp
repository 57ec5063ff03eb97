#include <doctest.h>

#include <cmath>
#include <vector>

#include "smatch/kernels.hpp"
#include "smatch/rng.hpp"

using namespace smatch;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  GaussianRng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.next();
  return v;
}

}  // namespace

TEST_CASE("scalar kernels compute the obvious things") {
  const auto& ops = kernels::table(kernels::Backend::scalar);
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{4, -5, 6};
  CHECK(ops.dot(a.data(), b.data(), 3) == doctest::Approx(12.0));
  CHECK(ops.nrm2sq(a.data(), 3) == doctest::Approx(14.0));

  std::vector<double> y{1, 1, 1};
  ops.axpy(2.0, a.data(), y.data(), 3);
  CHECK(y == std::vector<double>{3, 5, 7});

  std::vector<double> s{2, 4, 8};
  ops.scal(0.5, s.data(), 3);
  CHECK(s == std::vector<double>{1, 2, 4});

  // rotation by pi/2 swaps the vectors up to sign
  std::vector<double> p{1, 0};
  std::vector<double> q{0, 1};
  ops.rot(p.data(), q.data(), 0.0, 1.0, 2);
  CHECK(p == std::vector<double>{0, -1});
  CHECK(q == std::vector<double>{1, 0});

  CHECK(ops.dot(a.data(), b.data(), 0) == 0.0);
}

TEST_CASE("every available backend agrees with the scalar reference") {
  const auto& ref = kernels::table(kernels::Backend::scalar);
  for (kernels::Backend backend : kernels::available_backends()) {
    const auto& ops = kernels::table(backend);
    CAPTURE(kernels::backend_name(backend));
    // lengths straddling the vector width and remainder handling
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 64u, 1001u}) {
      const auto a = random_vec(n, 11 + n);
      const auto b = random_vec(n, 97 + n);
      const double tol = 1e-13 * (1.0 + static_cast<double>(n));

      CHECK(ops.dot(a.data(), b.data(), n) ==
            doctest::Approx(ref.dot(a.data(), b.data(), n)).epsilon(tol));
      CHECK(ops.nrm2sq(a.data(), n) == doctest::Approx(ref.nrm2sq(a.data(), n)).epsilon(tol));

      auto y1 = random_vec(n, 7 + n);
      auto y2 = y1;
      ops.axpy(0.37, a.data(), y1.data(), n);
      ref.axpy(0.37, a.data(), y2.data(), n);
      CHECK(y1 == y2);  // elementwise mul+add, no reassociation, so bitwise

      auto s1 = a;
      auto s2 = a;
      ops.scal(-2.5, s1.data(), n);
      ref.scal(-2.5, s2.data(), n);
      CHECK(s1 == s2);  // elementwise product, no reassociation possible

      auto p1 = a;
      auto q1 = b;
      auto p2 = a;
      auto q2 = b;
      const double c = std::cos(0.3);
      const double s = std::sin(0.3);
      ops.rot(p1.data(), q1.data(), c, s, n);
      ref.rot(p2.data(), q2.data(), c, s, n);
      CHECK(p1 == p2);
      CHECK(q1 == q2);
    }
  }
}

TEST_CASE("active backend is one of the available ones") {
  const auto backends = kernels::available_backends();
  bool found = false;
  for (kernels::Backend b : backends) {
    if (b == kernels::active_backend()) found = true;
  }
  CHECK(found);
  CHECK(kernels::active().dot != nullptr);
}
