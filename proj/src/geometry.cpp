#include "smatch/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "smatch/kernels.hpp"

namespace smatch {

const char* to_string(ZeroVectorPolicy policy) {
  switch (policy) {
    case ZeroVectorPolicy::reject: return "reject";
    case ZeroVectorPolicy::drop: return "drop";
    case ZeroVectorPolicy::keep: return "keep";
  }
  return "?";
}

ZeroVectorPolicy zero_vector_policy_from_string(const std::string& name) {
  if (name == "reject") return ZeroVectorPolicy::reject;
  if (name == "drop") return ZeroVectorPolicy::drop;
  if (name == "keep") return ZeroVectorPolicy::keep;
  fail(ErrorKind::invalid_input, "unknown zero-vector policy: " + name);
}

void NumericPolicy::validate() const {
  if (!(rank_tol_factor >= 0.0) || !std::isfinite(rank_tol_factor)) {
    fail(ErrorKind::invalid_input, "rank_tol_factor must be a finite nonnegative real");
  }
  if (!(boundary_slack >= 0.0) || !std::isfinite(boundary_slack)) {
    fail(ErrorKind::invalid_input, "boundary_slack must be a finite nonnegative real");
  }
}

ActivationMatrix::ActivationMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
  if (cols_ == 0) fail(ErrorKind::invalid_input, "activation matrix needs at least one column");
}

ActivationMatrix ActivationMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 1 : rows.front().size();
  ActivationMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      fail(ErrorKind::invalid_input,
           "row " + std::to_string(i) + " has length " + std::to_string(rows[i].size()) +
               ", expected " + std::to_string(cols));
    }
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  m.validate_finite();
  return m;
}

double ActivationMatrix::row_norm(std::size_t i) const {
  return std::sqrt(kernels::active().nrm2sq(row(i).data(), cols_));
}

void ActivationMatrix::validate_finite() const {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      fail(ErrorKind::invalid_input, "non-finite activation at row " + std::to_string(i / cols_) +
                                         ", col " + std::to_string(i % cols_));
    }
  }
}

namespace {

// ============================================================================
// One-sided Jacobi (Hestenes) orthogonalization
// ============================================================================
//
// Rotates pairs of columns of a d x m work array until all pairs are
// orthogonal. On exit the column norms are the singular values of the input
// and the nonzero columns are (scaled) left singular vectors, which is
// exactly the data the rank cutoff and the basis need. Chosen over QR
// because the rank contract is phrased in singular values.

constexpr double kJacobiTol = 1e-14;
constexpr int kMaxSweeps = 128;

// work holds m columns of length d, column-major. Returns per-column norms.
std::vector<double> hestenes_orthogonalize(std::vector<double>& work, std::size_t d,
                                           std::size_t m) {
  const auto& ops = kernels::active();
  auto col = [&](std::size_t j) { return work.data() + j * d; };

  // Columns whose norm falls to the rounding floor of the whole matrix are
  // numerically zero: rank-deficient inputs push redundant columns there but
  // leave them pointing in noise directions, so without this cutoff the
  // angle criterion below would keep rotating them forever.
  double max_norm2 = 0.0;
  for (std::size_t j = 0; j < m; ++j) max_norm2 = std::max(max_norm2, ops.nrm2sq(col(j), d));
  const double zero_floor2 = max_norm2 * 1e-30;

  bool rotated = true;
  int sweep = 0;
  while (rotated) {
    if (++sweep > kMaxSweeps) {
      fail(ErrorKind::invalid_input, "orthogonalization did not converge");
    }
    rotated = false;
    for (std::size_t p = 0; p + 1 < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        const double alpha = ops.nrm2sq(col(p), d);
        const double beta = ops.nrm2sq(col(q), d);
        if (alpha <= zero_floor2 || beta <= zero_floor2) continue;
        const double gamma = ops.dot(col(p), col(q), d);
        if (std::abs(gamma) <= kJacobiTol * std::sqrt(alpha) * std::sqrt(beta)) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        ops.rot(col(p), col(q), c, s, d);
        rotated = true;
      }
    }
  }

  std::vector<double> norms(m);
  for (std::size_t j = 0; j < m; ++j) norms[j] = std::sqrt(ops.nrm2sq(col(j), d));
  return norms;
}

OrthonormalBasis basis_from_columns(std::vector<double> work, std::size_t d, std::size_t m,
                                    const NumericPolicy& policy) {
  policy.validate();
  OrthonormalBasis basis;
  basis.dim = d;
  if (m == 0) return basis;

  const std::vector<double> sigma = hestenes_orthogonalize(work, d, m);

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  const double sigma_max = sigma[order.front()];
  const double cutoff = policy.rank_tol_factor * sigma_max * static_cast<double>(std::max(m, d));

  const auto& ops = kernels::active();
  for (std::size_t j : order) {
    if (sigma[j] <= cutoff) break;
    const std::size_t at = basis.vectors.size();
    basis.vectors.insert(basis.vectors.end(), work.begin() + j * d, work.begin() + (j + 1) * d);
    ops.scal(1.0 / sigma[j], basis.vectors.data() + at, d);
    ++basis.rank;
  }
  return basis;
}

}  // namespace

OrthonormalBasis orthonormal_basis(const ActivationMatrix& acts,
                                   std::span<const std::size_t> row_ids,
                                   const NumericPolicy& policy) {
  const std::size_t d = acts.cols();
  const std::size_t m = row_ids.size();
  std::vector<double> work(d * m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto r = acts.row(row_ids[j]);
    std::copy(r.begin(), r.end(), work.begin() + j * d);
  }
  return basis_from_columns(std::move(work), d, m, policy);
}

OrthonormalBasis orthonormal_basis(const std::vector<std::vector<double>>& vectors,
                                   const NumericPolicy& policy) {
  if (vectors.empty()) {
    OrthonormalBasis basis;
    basis.dim = 0;
    return basis;
  }
  const ActivationMatrix m = ActivationMatrix::from_rows(vectors);
  std::vector<std::size_t> all(m.rows());
  std::iota(all.begin(), all.end(), 0);
  return orthonormal_basis(m, all, policy);
}

double dist_to_span(std::span<const double> z, const OrthonormalBasis& basis) {
  // dim 0 only arises from an empty vector list, where span() accepts any z
  if (basis.dim != 0 && z.size() != basis.dim) {
    fail(ErrorKind::invalid_input, "vector length " + std::to_string(z.size()) +
                                       " does not match basis dimension " +
                                       std::to_string(basis.dim));
  }
  for (double v : z) {
    if (!std::isfinite(v)) fail(ErrorKind::invalid_input, "non-finite input vector");
  }
  const auto& ops = kernels::active();
  std::vector<double> residual(z.begin(), z.end());
  for (std::size_t i = 0; i < basis.rank; ++i) {
    const double* q = basis.vectors.data() + i * basis.dim;
    const double coeff = ops.dot(residual.data(), q, basis.dim);
    ops.axpy(-coeff, q, residual.data(), basis.dim);
  }
  return std::sqrt(ops.nrm2sq(residual.data(), residual.size()));
}

double relative_residual(std::span<const double> z, const OrthonormalBasis& basis,
                         const NumericPolicy& policy) {
  const auto& ops = kernels::active();
  const double norm = std::sqrt(ops.nrm2sq(z.data(), z.size()));
  if (norm == 0.0) {
    if (policy.zero_vector_policy == ZeroVectorPolicy::reject) {
      fail(ErrorKind::degenerate_neuron, "zero activation vector");
    }
    return 0.0;  // dist(0, S) = 0 for every subspace
  }
  return dist_to_span(z, basis) / norm;
}

double subspace_angle(const OrthonormalBasis& a, const OrthonormalBasis& b) {
  if (a.rank == 0 || b.rank == 0) {
    fail(ErrorKind::invalid_input, "subspace angle undefined for rank-0 span");
  }
  if (a.dim != b.dim) {
    fail(ErrorKind::invalid_input, "subspace angle needs matching ambient dimensions");
  }
  // Largest singular value of the r_a x r_b cross-dot matrix.
  const auto& ops = kernels::active();
  std::vector<double> cross(a.rank * b.rank);
  for (std::size_t j = 0; j < b.rank; ++j) {
    for (std::size_t i = 0; i < a.rank; ++i) {
      cross[j * a.rank + i] = ops.dot(a.vec(i).data(), b.vec(j).data(), a.dim);
    }
  }
  const std::vector<double> sigma = hestenes_orthogonalize(cross, a.rank, b.rank);
  const double sigma_max = *std::max_element(sigma.begin(), sigma.end());
  return std::acos(std::min(1.0, sigma_max));
}

}  // namespace smatch
