#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "smatch/matching.hpp"

namespace smatch {
namespace oracle {

// Brute-force ground truth for small instances. Everything here works from
// the match definition alone (exhaustive subset enumeration), never from the
// deletion algorithms, so it can sit on the other side of equivalence tests.

/// Every (X, Y) over the full subset lattice that satisfies is_match,
/// including the empty pair, in canonical order. Throws too_large when
/// rows(x) + rows(y) > limit.
std::vector<MatchPair> enumerate_matches(const MatchProblem& problem, std::size_t limit = 12);

/// Matches of the diagonal family (X_S, Y_S) for S over row subsets; needs
/// equal row counts on both sides. For instances whose match structure is
/// known to be diagonal this replaces the 4^n lattice with 2^n candidates.
std::vector<MatchPair> enumerate_diagonal_matches(const MatchProblem& problem,
                                                  std::size_t limit = 16);

/// Simple matches per Definition: non-empty matches not reconstructible as
/// the union of the matches strictly contained in them.
std::vector<MatchPair> oracle_simple_matches(const std::vector<MatchPair>& all);

/// Matches containing v with no strictly contained match also containing v.
std::vector<MatchPair> oracle_v_minimal(const std::vector<MatchPair>& all, NeuronId v);

struct OracleReport {
  std::vector<MatchPair> all_matches;
  MatchPair maximum;
  std::vector<MatchPair> simple;
  std::map<NeuronId, std::vector<MatchPair>> minimal_by_neuron;  // neurons of the maximum match
};

OracleReport oracle_report(const MatchProblem& problem, std::size_t limit = 12);

/// theta-strong linear independence: no zero row, and every pair of disjoint
/// non-empty row subsets spans subspaces at angle >= theta. Exponential;
/// throws too_large past the limit.
bool check_strong_independence(const ActivationMatrix& acts, double theta,
                               const NumericPolicy& policy, std::size_t limit = 8);

/// (epsilon, lambda)-stability: no cross-side relative residual falls in
/// (eps, lambda*eps], over every subset of the opposite side.
bool check_stability(const MatchProblem& problem, double lambda, std::size_t limit = 10);

/// True iff the union of the simple matches contained in target's support
/// reconstructs target exactly.
bool verify_decomposition(const MatchPair& target, const std::vector<MatchPair>& simples);

}  // namespace oracle
}  // namespace smatch
