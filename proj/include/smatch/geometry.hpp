#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "smatch/error.hpp"

namespace smatch {

enum class ZeroVectorPolicy { reject, drop, keep };

const char* to_string(ZeroVectorPolicy policy);
ZeroVectorPolicy zero_vector_policy_from_string(const std::string& name);

struct NumericPolicy {
  // Singular values <= rank_tol_factor * sigma_max * max(N, d) are treated
  // as zero, both for basis rank and for span-membership at epsilon = 0.
  double rank_tol_factor = 1e-12;
  // Multiplicative slack on the match threshold: residual <= eps*(1+slack).
  double boundary_slack = 0.0;
  ZeroVectorPolicy zero_vector_policy = ZeroVectorPolicy::reject;

  void validate() const;
};

/// Per-network activations: row i is the activation vector of neuron i over
/// cols() input samples. Entries are finite; cols() >= 1.
class ActivationMatrix {
public:
  ActivationMatrix() : ActivationMatrix(0, 1) {}
  ActivationMatrix(std::size_t rows, std::size_t cols);

  static ActivationMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }

  double row_norm(std::size_t i) const;

  /// Throws invalid_input on any NaN/Inf entry.
  void validate_finite() const;

  bool operator==(const ActivationMatrix& other) const = default;

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// Numerically orthonormal spanning set; rank 0 encodes span() = {0}.
struct OrthonormalBasis {
  std::size_t dim = 0;
  std::size_t rank = 0;
  std::vector<double> vectors;  // rank x dim, row-major

  std::span<const double> vec(std::size_t i) const { return {vectors.data() + i * dim, dim}; }
};

/// Orthonormal basis of span{rows row_ids of acts}. Rank is decided by a
/// singular-value cutoff relative to the largest singular value.
OrthonormalBasis orthonormal_basis(const ActivationMatrix& acts,
                                   std::span<const std::size_t> row_ids,
                                   const NumericPolicy& policy);

/// Same, over an explicit vector list (validates shape and finiteness).
OrthonormalBasis orthonormal_basis(const std::vector<std::vector<double>>& vectors,
                                   const NumericPolicy& policy);

/// L2 distance from z to the spanned subspace; distance to {0} is |z|.
double dist_to_span(std::span<const double> z, const OrthonormalBasis& basis);

/// dist_to_span(z, basis) / |z|. A zero vector yields 0 under the keep
/// policy (it lies in every subspace) and a degenerate-neuron error under
/// reject; drop is handled upstream by the loaders.
double relative_residual(std::span<const double> z, const OrthonormalBasis& basis,
                         const NumericPolicy& policy);

/// First principal angle between two non-trivial subspaces, in [0, pi/2].
double subspace_angle(const OrthonormalBasis& a, const OrthonormalBasis& b);

}  // namespace smatch
