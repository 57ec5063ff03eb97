#include "smatch/matching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "smatch/parallel.hpp"
#include "smatch/rng.hpp"

namespace smatch {

std::string to_string(const NeuronId& v) {
  return std::string(v.side == Side::x ? "x:" : "y:") + std::to_string(v.index);
}

NeuronId neuron_from_string(const std::string& s) {
  if (s.size() < 3 || (s[0] != 'x' && s[0] != 'y') || s[1] != ':') {
    fail(ErrorKind::invalid_input, "neuron must look like x:<index> or y:<index>, got: " + s);
  }
  std::size_t pos = 0;
  std::size_t index = 0;
  try {
    index = std::stoull(s.substr(2), &pos);
  } catch (const std::exception&) {
    fail(ErrorKind::invalid_input, "bad neuron index in: " + s);
  }
  if (pos != s.size() - 2) fail(ErrorKind::invalid_input, "bad neuron index in: " + s);
  return {s[0] == 'x' ? Side::x : Side::y, index};
}

MatchPair MatchPair::canonical(std::vector<std::size_t> xs, std::vector<std::size_t> ys) {
  auto canon = [](std::vector<std::size_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  canon(xs);
  canon(ys);
  return {std::move(xs), std::move(ys)};
}

bool MatchPair::contains(NeuronId v) const {
  const auto& ids = v.side == Side::x ? xs : ys;
  return std::binary_search(ids.begin(), ids.end(), v.index);
}

bool MatchPair::contains_pair(const MatchPair& other) const {
  return std::includes(xs.begin(), xs.end(), other.xs.begin(), other.xs.end()) &&
         std::includes(ys.begin(), ys.end(), other.ys.begin(), other.ys.end());
}

std::vector<NeuronId> MatchPair::support() const {
  std::vector<NeuronId> out;
  out.reserve(support_size());
  for (std::size_t i : xs) out.push_back({Side::x, i});
  for (std::size_t i : ys) out.push_back({Side::y, i});
  return out;
}

MatchPair match_union(const MatchPair& a, const MatchPair& b) {
  MatchPair out;
  std::set_union(a.xs.begin(), a.xs.end(), b.xs.begin(), b.xs.end(), std::back_inserter(out.xs));
  std::set_union(a.ys.begin(), a.ys.end(), b.ys.begin(), b.ys.end(), std::back_inserter(out.ys));
  return out;
}

MatchProblem::MatchProblem(ActivationMatrix x, ActivationMatrix y, double eps, NumericPolicy pol)
    : x_acts(std::move(x)), y_acts(std::move(y)), epsilon(eps), policy(pol) {
  policy.validate();
  if (x_acts.cols() != y_acts.cols()) {
    fail(ErrorKind::dimension_mismatch,
         "activation matrices disagree on sample count: " + std::to_string(x_acts.cols()) +
             " vs " + std::to_string(y_acts.cols()));
  }
  if (!(epsilon >= 0.0) || !(epsilon < 1.0)) {
    fail(ErrorKind::invalid_input, "epsilon must lie in [0, 1)");
  }
  if (policy.zero_vector_policy == ZeroVectorPolicy::reject) {
    for (Side side : {Side::x, Side::y}) {
      const ActivationMatrix& m = acts(side);
      for (std::size_t i = 0; i < m.rows(); ++i) {
        if (m.row_norm(i) == 0.0) {
          fail(ErrorKind::degenerate_neuron,
               "zero activation vector at " + to_string(NeuronId{side, i}) +
                   " (use --zero-policy drop or keep to accept it)");
        }
      }
    }
  }
}

double MatchProblem::match_threshold() const {
  const std::size_t scale =
      std::max({x_acts.rows(), y_acts.rows(), x_acts.cols()});
  const double zero_floor = policy.rank_tol_factor * static_cast<double>(scale);
  return std::max(epsilon * (1.0 + policy.boundary_slack), zero_floor);
}

namespace {

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

// Residual of each of `queries`' rows against span{rows basis_ids of basis_side}.
// Returns the ids in `queries` whose relative residual stays within threshold.
std::vector<std::size_t> surviving_ids(const MatchProblem& problem, Side query_side,
                                       const std::vector<std::size_t>& query_ids,
                                       const std::vector<std::size_t>& basis_ids) {
  const ActivationMatrix& queries = problem.acts(query_side);
  const ActivationMatrix& spans =
      problem.acts(query_side == Side::x ? Side::y : Side::x);
  const OrthonormalBasis basis = orthonormal_basis(spans, basis_ids, problem.policy);
  const double threshold = problem.match_threshold();
  std::vector<std::size_t> kept;
  kept.reserve(query_ids.size());
  for (std::size_t id : query_ids) {
    if (relative_residual(queries.row(id), basis, problem.policy) <= threshold) {
      kept.push_back(id);
    }
  }
  return kept;
}

}  // namespace

bool is_match(const MatchProblem& problem, const MatchPair& pair) {
  for (std::size_t i : pair.xs) {
    if (i >= problem.x_acts.rows()) fail(ErrorKind::invalid_input, "x index out of range");
  }
  for (std::size_t i : pair.ys) {
    if (i >= problem.y_acts.rows()) fail(ErrorKind::invalid_input, "y index out of range");
  }
  return surviving_ids(problem, Side::x, pair.xs, pair.ys).size() == pair.xs.size() &&
         surviving_ids(problem, Side::y, pair.ys, pair.xs).size() == pair.ys.size();
}

MatchPair max_match_within(const MatchProblem& problem, std::vector<std::size_t> xs,
                           std::vector<std::size_t> ys) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::size_t> kept = surviving_ids(problem, Side::x, xs, ys);
    if (kept.size() != xs.size()) {
      xs = std::move(kept);
      changed = true;
    }
    kept = surviving_ids(problem, Side::y, ys, xs);
    if (kept.size() != ys.size()) {
      ys = std::move(kept);
      changed = true;
    }
  }
  return {std::move(xs), std::move(ys)};
}

MatchPair max_match(const MatchProblem& problem) {
  return max_match_within(problem, all_indices(problem.x_acts.rows()),
                          all_indices(problem.y_acts.rows()));
}

std::optional<MatchPair> min_match_within(const MatchProblem& problem,
                                          std::vector<std::size_t> xs,
                                          std::vector<std::size_t> ys, NeuronId v,
                                          const OrderSpec& order) {
  MatchPair current = max_match_within(problem, std::move(xs), std::move(ys));
  if (!current.contains(v)) return std::nullopt;  // the not-in-maximum-match signal

  std::vector<NeuronId> candidates = current.support();
  if (order.order == CheckOrder::shuffle) seeded_shuffle(candidates, order.seed);

  std::vector<bool> checked(candidates.size(), false);
  for (;;) {
    std::size_t pick = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (!checked[i] && current.contains(candidates[i])) {
        pick = i;
        break;
      }
    }
    if (pick == candidates.size()) break;
    checked[pick] = true;
    const NeuronId u = candidates[pick];

    MatchPair trimmed = current;
    auto& ids = u.side == Side::x ? trimmed.xs : trimmed.ys;
    ids.erase(std::find(ids.begin(), ids.end(), u.index));

    MatchPair candidate = max_match_within(problem, std::move(trimmed.xs), std::move(trimmed.ys));
    if (candidate.contains(v)) current = std::move(candidate);
  }
  return current;
}

std::optional<MatchPair> min_match(const MatchProblem& problem, NeuronId v,
                                   const OrderSpec& order) {
  if (v.index >= problem.acts(v.side).rows()) {
    fail(ErrorKind::invalid_input, "neuron out of range: " + to_string(v));
  }
  return min_match_within(problem, all_indices(problem.x_acts.rows()),
                          all_indices(problem.y_acts.rows()), v, order);
}

AllMinResult all_min_match(const MatchProblem& problem, NeuronId v,
                           const AllMinOptions& options) {
  if (v.index >= problem.acts(v.side).rows()) {
    fail(ErrorKind::invalid_input, "neuron out of range: " + to_string(v));
  }

  AllMinResult result;
  std::vector<MatchPair>& found = result.matches;  // in discovery order during the search
  std::vector<std::vector<NeuronId>> supports;

  bool grew = true;
  while (grew) {
    grew = false;
    if (options.budget != 0 && found.size() >= options.budget) {
      result.truncated = true;
      break;
    }

    // Lexicographic odometer over the cross product of found supports; the
    // empty product contributes exactly one empty tuple.
    std::vector<std::size_t> tuple(supports.size(), 0);
    bool exhausted = false;
    while (!exhausted && !grew) {
      // Delete one neuron of every previously found match, then look for a
      // fresh v-minimal match in what is left.
      std::vector<bool> drop_x(problem.x_acts.rows(), false);
      std::vector<bool> drop_y(problem.y_acts.rows(), false);
      for (std::size_t i = 0; i < tuple.size(); ++i) {
        const NeuronId u = supports[i][tuple[i]];
        (u.side == Side::x ? drop_x : drop_y)[u.index] = true;
      }
      std::vector<std::size_t> xs;
      std::vector<std::size_t> ys;
      for (std::size_t i = 0; i < drop_x.size(); ++i) {
        if (!drop_x[i]) xs.push_back(i);
      }
      for (std::size_t i = 0; i < drop_y.size(); ++i) {
        if (!drop_y[i]) ys.push_back(i);
      }

      std::optional<MatchPair> fresh =
          min_match_within(problem, std::move(xs), std::move(ys), v, {});
      if (fresh && std::find(found.begin(), found.end(), *fresh) == found.end()) {
        supports.push_back(fresh->support());
        found.push_back(std::move(*fresh));
        grew = true;
        break;
      }

      // advance odometer (last component fastest)
      exhausted = true;
      for (std::size_t i = tuple.size(); i-- > 0;) {
        if (++tuple[i] < supports[i].size()) {
          exhausted = false;
          break;
        }
        tuple[i] = 0;
      }
    }
  }

  std::sort(result.matches.begin(), result.matches.end());
  return result;
}

namespace {

SimpleMatchReport merge_per_neuron(const std::vector<NeuronId>& neurons,
                                   const std::vector<std::vector<MatchPair>>& per_neuron,
                                   bool exhaustive, bool truncated) {
  SimpleMatchReport report;
  report.exhaustive = exhaustive;
  report.truncated = truncated;
  std::set<MatchPair> dedup;
  for (std::size_t i = 0; i < neurons.size(); ++i) {
    report.per_neuron_counts[neurons[i]] = per_neuron[i].size();
    dedup.insert(per_neuron[i].begin(), per_neuron[i].end());
  }
  report.matches.assign(dedup.begin(), dedup.end());
  return report;
}

}  // namespace

SimpleMatchReport simple_matches(const MatchProblem& problem, const SimpleMatchOptions& options) {
  const std::vector<NeuronId> neurons = max_match(problem).support();
  std::vector<std::vector<MatchPair>> per_neuron(neurons.size());
  std::vector<bool> truncated(neurons.size(), false);
  parallel_for(neurons.size(), options.threads, [&](std::size_t i) {
    AllMinResult r = all_min_match(problem, neurons[i], {options.budget});
    truncated[i] = r.truncated;
    per_neuron[i] = std::move(r.matches);
  });
  const bool any_truncated =
      std::find(truncated.begin(), truncated.end(), true) != truncated.end();
  return merge_per_neuron(neurons, per_neuron, /*exhaustive=*/true, any_truncated);
}

SimpleMatchReport sampled_simple_matches(const MatchProblem& problem, std::size_t iterations,
                                         std::uint64_t seed, const SimpleMatchOptions& options) {
  if (iterations == 0) fail(ErrorKind::invalid_input, "iterations must be >= 1");
  const std::vector<NeuronId> neurons = max_match(problem).support();
  std::vector<std::vector<MatchPair>> per_neuron(neurons.size());
  parallel_for(neurons.size(), options.threads, [&](std::size_t i) {
    const NeuronId v = neurons[i];
    std::set<MatchPair> seen;
    for (std::size_t iter = 0; iter < iterations; ++iter) {
      const std::uint64_t run_seed =
          derive_seed(seed, static_cast<std::uint64_t>(v.side), v.index, iter);
      std::optional<MatchPair> m =
          min_match(problem, v, {CheckOrder::shuffle, run_seed});
      if (m) seen.insert(std::move(*m));
    }
    per_neuron[i].assign(seen.begin(), seen.end());
  });
  return merge_per_neuron(neurons, per_neuron, /*exhaustive=*/false, false);
}

double similarity(const MatchProblem& problem) {
  const std::size_t total = problem.x_acts.rows() + problem.y_acts.rows();
  if (total == 0) fail(ErrorKind::invalid_input, "similarity undefined for two empty networks");
  const MatchPair m = max_match(problem);
  return static_cast<double>(m.support_size()) / static_cast<double>(total);
}

SimilarityCurve similarity_sweep(const ActivationMatrix& x_acts, const ActivationMatrix& y_acts,
                                 const NumericPolicy& policy,
                                 const std::vector<double>& epsilons) {
  SimilarityCurve curve;
  curve.points.reserve(epsilons.size());
  for (double eps : epsilons) {
    const MatchProblem problem(x_acts, y_acts, eps, policy);
    curve.points.push_back({eps, similarity(problem)});
  }
  return curve;
}

}  // namespace smatch
