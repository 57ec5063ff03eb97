#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smatch/geometry.hpp"

namespace smatch {
namespace instances {

/// A generated pair of activation matrices; epsilon is supplied by the caller
/// when the pair is turned into a MatchProblem.
struct InstancePair {
  ActivationMatrix x;
  ActivationMatrix y;
};

enum class InstanceKind {
  identical,
  rotated,
  appendix_c1,
  appendix_c2,
  remark_a1,
  hadamard,
  random_gaussian,
};

const char* to_string(InstanceKind kind);
InstanceKind instance_kind_from_string(const std::string& name);

struct InstanceSpec {
  InstanceKind kind = InstanceKind::identical;
  std::size_t n = 4;        // neurons per side
  std::size_t d = 4;        // samples
  double epsilon0 = 0.2;    // construction parameter (hadamard, remark_a1)
  std::uint64_t seed = 0;
  std::size_t n_x = 0;      // random_gaussian side sizes; 0 = use n
  std::size_t n_y = 0;
};

InstancePair generate(const InstanceSpec& spec);

/// Recursive block construction: A_1 = [1], A_2m = [A_m A_m; -A_m^T A_m^T].
/// Satisfies A A^T = n I, A + A^T = 2 I, unit diagonal.
std::vector<std::vector<std::int64_t>> hadamard_matrix(std::size_t n);

/// x rows are the standard basis of R^n; y_i = (sqrt(1-(n-1)d^2) - d) x_i +
/// d w_i with w_i the i-th column of the Hadamard-like matrix and
/// d = sqrt(2 eps0^2 / n). Construction identities are asserted to 1e-12.
InstancePair gen_hadamard(std::size_t n, double epsilon0);

InstancePair gen_appendix_c1();
InstancePair gen_appendix_c2();
InstancePair gen_remark_a1(double epsilon0);

/// One seeded gaussian matrix with numerically independent rows, used for
/// both sides.
InstancePair gen_identical(std::size_t n, std::size_t d, std::uint64_t seed);

/// y rows are an invertible random recombination of the x rows: the full
/// pair is an exact match while single rows generally are not.
InstancePair gen_rotated(std::size_t n, std::size_t d, std::uint64_t seed);

InstancePair gen_random_gaussian(std::size_t n_x, std::size_t n_y, std::size_t d,
                                 std::uint64_t seed);

}  // namespace instances
}  // namespace smatch
