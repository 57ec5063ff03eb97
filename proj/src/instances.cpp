#include "smatch/instances.hpp"

#include <cmath>
#include <numeric>

#include "smatch/kernels.hpp"
#include "smatch/rng.hpp"

namespace smatch {
namespace instances {

const char* to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::identical: return "identical";
    case InstanceKind::rotated: return "rotated";
    case InstanceKind::appendix_c1: return "appendix_c1";
    case InstanceKind::appendix_c2: return "appendix_c2";
    case InstanceKind::remark_a1: return "remark_a1";
    case InstanceKind::hadamard: return "hadamard";
    case InstanceKind::random_gaussian: return "random_gaussian";
  }
  return "?";
}

InstanceKind instance_kind_from_string(const std::string& name) {
  for (InstanceKind kind :
       {InstanceKind::identical, InstanceKind::rotated, InstanceKind::appendix_c1,
        InstanceKind::appendix_c2, InstanceKind::remark_a1, InstanceKind::hadamard,
        InstanceKind::random_gaussian}) {
    if (name == to_string(kind)) return kind;
  }
  fail(ErrorKind::invalid_input, "unknown instance kind: " + name);
}

std::vector<std::vector<std::int64_t>> hadamard_matrix(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0) {
    fail(ErrorKind::invalid_input, "hadamard size must be a power of 2, got " + std::to_string(n));
  }
  std::vector<std::vector<std::int64_t>> a{{1}};
  for (std::size_t m = 1; m < n; m *= 2) {
    std::vector<std::vector<std::int64_t>> next(2 * m, std::vector<std::int64_t>(2 * m));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        next[i][j] = a[i][j];
        next[i][j + m] = a[i][j];
        next[i + m][j] = -a[j][i];
        next[i + m][j + m] = a[j][i];
      }
    }
    a = std::move(next);
  }
  return a;
}

InstancePair gen_hadamard(std::size_t n, double epsilon0) {
  if (n == 0 || (n & (n - 1)) != 0) {
    fail(ErrorKind::invalid_input, "hadamard instance needs n a power of 2");
  }
  if (!(epsilon0 > 0.0) || !(epsilon0 < 1.0 / 3.0)) {
    fail(ErrorKind::invalid_input, "hadamard instance needs epsilon0 in (0, 1/3)");
  }

  const auto a = hadamard_matrix(n);
  const double delta = std::sqrt(2.0 * epsilon0 * epsilon0 / static_cast<double>(n));
  const double diag = std::sqrt(1.0 - (static_cast<double>(n) - 1.0) * delta * delta);

  ActivationMatrix x(n, n);
  ActivationMatrix y(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    x.at(i, i) = 1.0;
    // w_i is the i-th column of the construction matrix
    for (std::size_t j = 0; j < n; ++j) {
      y.at(i, j) = delta * static_cast<double>(a[j][i]);
    }
    y.at(i, i) += diag - delta;
  }

  // the four construction identities, checked at generation time
  const auto& ops = kernels::active();
  constexpr double kTol = 1e-12;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(std::sqrt(ops.nrm2sq(y.row(i).data(), n)) - 1.0) > kTol) {
      fail(ErrorKind::generation, "hadamard: |y_i| != 1");
    }
    if (std::abs(ops.dot(x.row(i).data(), y.row(i).data(), n) - diag) > kTol) {
      fail(ErrorKind::generation, "hadamard: x_i . y_i != sqrt(1-(n-1)delta^2)");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (std::abs(ops.dot(y.row(i).data(), y.row(j).data(), n)) > kTol) {
        fail(ErrorKind::generation, "hadamard: y rows not orthogonal");
      }
      if (std::abs(std::abs(ops.dot(x.row(i).data(), y.row(j).data(), n)) - delta) > kTol) {
        fail(ErrorKind::generation, "hadamard: |x_i . y_j| != delta");
      }
    }
  }
  return {std::move(x), std::move(y)};
}

InstancePair gen_appendix_c1() {
  return {ActivationMatrix::from_rows({{1, 0}, {0, 1}}),
          ActivationMatrix::from_rows({{1, 0}, {1, 1}})};
}

InstancePair gen_appendix_c2() {
  return {ActivationMatrix::from_rows({{0, 1}, {1, 1}, {1, -1}}),
          ActivationMatrix::from_rows({{1, 0}, {1, 1}, {1, -1}})};
}

InstancePair gen_remark_a1(double epsilon0) {
  if (!(epsilon0 > 0.0) || !(epsilon0 < 1.0)) {
    fail(ErrorKind::invalid_input, "remark_a1 needs epsilon0 in (0, 1)");
  }
  const double h = std::sqrt(0.5);
  ActivationMatrix x = ActivationMatrix::from_rows({{h, h, 0}, {h, -h, 0}});
  ActivationMatrix y = ActivationMatrix::from_rows(
      {{h, h, 0}, {h, -h, 0}, {std::sqrt(1.0 - epsilon0 * epsilon0), 0.0, epsilon0}});
  return {std::move(x), std::move(y)};
}

namespace {

ActivationMatrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  GaussianRng rng(seed);
  ActivationMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rng.next();
  }
  return m;
}

bool rows_independent(const ActivationMatrix& m) {
  std::vector<std::size_t> all(m.rows());
  std::iota(all.begin(), all.end(), 0);
  return orthonormal_basis(m, all, NumericPolicy{}).rank == m.rows();
}

constexpr int kMaxAttempts = 16;

}  // namespace

InstancePair gen_identical(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n > d) fail(ErrorKind::invalid_input, "identical instance needs n <= d");
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    ActivationMatrix m = gaussian_matrix(n, d, derive_seed(seed, 0x1d, attempt));
    if (n == 0 || rows_independent(m)) {
      ActivationMatrix copy = m;
      return {std::move(m), std::move(copy)};
    }
  }
  fail(ErrorKind::generation, "could not draw an independent-row matrix");
}

InstancePair gen_rotated(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n > d) fail(ErrorKind::invalid_input, "rotated instance needs n <= d");
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    ActivationMatrix x = gaussian_matrix(n, d, derive_seed(seed, 0xa0, attempt));
    if (n > 0 && !rows_independent(x)) continue;
    const ActivationMatrix mix = gaussian_matrix(n, n == 0 ? 1 : n, derive_seed(seed, 0xb1, attempt));
    ActivationMatrix y(n, d);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        kernels::active().axpy(mix.at(i, k), x.row(k).data(), y.row(i).data(), d);
      }
    }
    if (n == 0 || rows_independent(y)) return {std::move(x), std::move(y)};
  }
  fail(ErrorKind::generation, "could not draw an invertible recombination");
}

InstancePair gen_random_gaussian(std::size_t n_x, std::size_t n_y, std::size_t d,
                                 std::uint64_t seed) {
  ActivationMatrix x = gaussian_matrix(n_x, d, derive_seed(seed, 0x5a));
  ActivationMatrix y = gaussian_matrix(n_y, d, derive_seed(seed, 0x5b));
  for (std::size_t i = 0; i < n_x; ++i) {
    if (x.row_norm(i) == 0.0) fail(ErrorKind::generation, "gaussian draw produced a zero row");
  }
  for (std::size_t i = 0; i < n_y; ++i) {
    if (y.row_norm(i) == 0.0) fail(ErrorKind::generation, "gaussian draw produced a zero row");
  }
  return {std::move(x), std::move(y)};
}

InstancePair generate(const InstanceSpec& spec) {
  switch (spec.kind) {
    case InstanceKind::identical: return gen_identical(spec.n, spec.d, spec.seed);
    case InstanceKind::rotated: return gen_rotated(spec.n, spec.d, spec.seed);
    case InstanceKind::appendix_c1: return gen_appendix_c1();
    case InstanceKind::appendix_c2: return gen_appendix_c2();
    case InstanceKind::remark_a1: return gen_remark_a1(spec.epsilon0);
    case InstanceKind::hadamard: return gen_hadamard(spec.n, spec.epsilon0);
    case InstanceKind::random_gaussian:
      return gen_random_gaussian(spec.n_x == 0 ? spec.n : spec.n_x,
                                 spec.n_y == 0 ? spec.n : spec.n_y, spec.d, spec.seed);
  }
  fail(ErrorKind::invalid_input, "unknown instance kind");
}

}  // namespace instances
}  // namespace smatch
