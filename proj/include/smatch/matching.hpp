#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smatch/geometry.hpp"

namespace smatch {

enum class Side : std::uint8_t { x = 0, y = 1 };

struct NeuronId {
  Side side = Side::x;
  std::size_t index = 0;

  friend auto operator<=>(const NeuronId&, const NeuronId&) = default;
};

std::string to_string(const NeuronId& v);            // "x:3"
NeuronId neuron_from_string(const std::string& s);   // throws invalid_input

/// A pair (X, Y) of neuron index subsets in canonical form: sorted ascending,
/// duplicate-free. Equality and ordering are set-wise.
struct MatchPair {
  std::vector<std::size_t> xs;
  std::vector<std::size_t> ys;

  static MatchPair canonical(std::vector<std::size_t> xs, std::vector<std::size_t> ys);

  bool empty() const { return xs.empty() && ys.empty(); }
  std::size_t support_size() const { return xs.size() + ys.size(); }
  bool contains(NeuronId v) const;
  /// other.xs subset of xs and other.ys subset of ys.
  bool contains_pair(const MatchPair& other) const;
  /// Neurons of both sides in canonical order (X ascending, then Y).
  std::vector<NeuronId> support() const;

  friend auto operator<=>(const MatchPair&, const MatchPair&) = default;
};

MatchPair match_union(const MatchPair& a, const MatchPair& b);

struct MatchProblem {
  ActivationMatrix x_acts;
  ActivationMatrix y_acts;
  double epsilon = 0.0;
  NumericPolicy policy;

  MatchProblem(ActivationMatrix x, ActivationMatrix y, double eps, NumericPolicy pol = {});

  /// Residual threshold used by all membership tests:
  /// max(epsilon * (1 + boundary_slack), numerical zero floor). The floor
  /// (rank_tol_factor * max(N, d)) makes the epsilon = 0 path a span
  /// membership test instead of an exact floating-point comparison.
  double match_threshold() const;

  const ActivationMatrix& acts(Side side) const {
    return side == Side::x ? x_acts : y_acts;
  }
};

/// Definition check: every x within threshold of span(Y) and vice versa.
bool is_match(const MatchProblem& problem, const MatchPair& pair);

/// Maximum match via alternating deletion (all failing neurons of one side
/// are removed per pass, then the other side's basis is rebuilt).
MatchPair max_match(const MatchProblem& problem);

/// Same, restricted to the sub-universe (xs, ys); both lists sorted ascending.
MatchPair max_match_within(const MatchProblem& problem, std::vector<std::size_t> xs,
                           std::vector<std::size_t> ys);

enum class CheckOrder { ascending, shuffle };

struct OrderSpec {
  CheckOrder order = CheckOrder::ascending;
  std::uint64_t seed = 0;
};

/// One v-minimal match, or nullopt when v lies outside the maximum match.
/// With ascending order the result is a deterministic function of the
/// problem; with shuffle it is a deterministic function of (problem, seed).
std::optional<MatchPair> min_match(const MatchProblem& problem, NeuronId v,
                                   const OrderSpec& order = {});

std::optional<MatchPair> min_match_within(const MatchProblem& problem,
                                          std::vector<std::size_t> xs,
                                          std::vector<std::size_t> ys, NeuronId v,
                                          const OrderSpec& order = {});

struct AllMinOptions {
  std::size_t budget = 0;  // max matches to collect; 0 = unlimited
};

struct AllMinResult {
  std::vector<MatchPair> matches;  // canonical order
  bool truncated = false;          // budget hit before the search closed
};

/// All v-minimal matches (empty when v is outside the maximum match).
AllMinResult all_min_match(const MatchProblem& problem, NeuronId v,
                           const AllMinOptions& options = {});

struct SimpleMatchOptions {
  std::size_t budget = 0;   // per-neuron cap forwarded to all_min_match
  std::size_t threads = 0;  // 0 = SMATCH_THREADS / hardware
};

struct SimpleMatchReport {
  std::vector<MatchPair> matches;  // canonical order, deduplicated
  std::map<NeuronId, std::size_t> per_neuron_counts;  // N_v per neuron in the maximum match
  bool exhaustive = false;
  bool truncated = false;
};

/// Exhaustive simple matches: union of all_min_match over every neuron of the
/// maximum match, both sides.
SimpleMatchReport simple_matches(const MatchProblem& problem,
                                 const SimpleMatchOptions& options = {});

/// Randomized estimate: per neuron, `iterations` shuffled min_match runs with
/// seeds derived from (seed, neuron, iteration).
SimpleMatchReport sampled_simple_matches(const MatchProblem& problem, std::size_t iterations,
                                         std::uint64_t seed,
                                         const SimpleMatchOptions& options = {});

/// Maximum matching similarity (|X*| + |Y*|) / (|X| + |Y|).
double similarity(const MatchProblem& problem);

struct SimilarityPoint {
  double epsilon = 0.0;
  double similarity = 0.0;
};

struct SimilarityCurve {
  std::vector<SimilarityPoint> points;
};

SimilarityCurve similarity_sweep(const ActivationMatrix& x_acts, const ActivationMatrix& y_acts,
                                 const NumericPolicy& policy,
                                 const std::vector<double>& epsilons);

}  // namespace smatch
