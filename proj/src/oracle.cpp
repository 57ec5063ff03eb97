#include "smatch/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace smatch {
namespace oracle {

namespace {

std::vector<std::size_t> mask_to_ids(std::uint32_t mask, std::size_t n) {
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask & (1u << i)) ids.push_back(i);
  }
  return ids;
}

// residual_ok[mask][i]: row i of `queries` stays within threshold of
// span{rows of spans selected by mask}. Bit i of the returned word.
std::vector<std::uint32_t> residual_table(const MatchProblem& problem, Side query_side) {
  const ActivationMatrix& queries = problem.acts(query_side);
  const ActivationMatrix& spans = problem.acts(query_side == Side::x ? Side::y : Side::x);
  const double threshold = problem.match_threshold();
  const std::size_t masks = 1u << spans.rows();
  std::vector<std::uint32_t> ok(masks, 0);
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    const std::vector<std::size_t> ids = mask_to_ids(mask, spans.rows());
    const OrthonormalBasis basis = orthonormal_basis(spans, ids, problem.policy);
    std::uint32_t bits = 0;
    for (std::size_t i = 0; i < queries.rows(); ++i) {
      if (relative_residual(queries.row(i), basis, problem.policy) <= threshold) {
        bits |= 1u << i;
      }
    }
    ok[mask] = bits;
  }
  return ok;
}

}  // namespace

std::vector<MatchPair> enumerate_matches(const MatchProblem& problem, std::size_t limit) {
  const std::size_t nx = problem.x_acts.rows();
  const std::size_t ny = problem.y_acts.rows();
  if (nx + ny > std::min<std::size_t>(limit, 26)) {
    fail(ErrorKind::too_large, "instance has " + std::to_string(nx + ny) +
                                   " neurons, enumeration limit is " +
                                   std::to_string(std::min<std::size_t>(limit, 26)));
  }

  // x_ok[ymask] has bit i set when x_i survives against span(Y_mask).
  const std::vector<std::uint32_t> x_ok = residual_table(problem, Side::x);
  const std::vector<std::uint32_t> y_ok = residual_table(problem, Side::y);

  std::vector<MatchPair> out;
  for (std::uint32_t mx = 0; mx < (1u << nx); ++mx) {
    for (std::uint32_t my = 0; my < (1u << ny); ++my) {
      if ((mx & ~x_ok[my]) == 0 && (my & ~y_ok[mx]) == 0) {
        out.push_back({mask_to_ids(mx, nx), mask_to_ids(my, ny)});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<MatchPair> enumerate_diagonal_matches(const MatchProblem& problem,
                                                  std::size_t limit) {
  const std::size_t n = problem.x_acts.rows();
  if (problem.y_acts.rows() != n) {
    fail(ErrorKind::invalid_input, "diagonal enumeration needs equal row counts");
  }
  if (n > limit) {
    fail(ErrorKind::too_large, "instance has " + std::to_string(n) +
                                   " neurons per side, diagonal limit is " + std::to_string(limit));
  }
  std::vector<MatchPair> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    MatchPair pair{mask_to_ids(mask, n), mask_to_ids(mask, n)};
    if (is_match(problem, pair)) out.push_back(std::move(pair));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<MatchPair> oracle_simple_matches(const std::vector<MatchPair>& all) {
  std::vector<MatchPair> out;
  for (const MatchPair& m : all) {
    if (m.empty()) continue;
    // Union of every match strictly contained in m (union-closure makes the
    // single combined union equivalent to testing all families).
    MatchPair combined;
    for (const MatchPair& inner : all) {
      if (inner != m && m.contains_pair(inner)) combined = match_union(combined, inner);
    }
    if (combined != m) out.push_back(m);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<MatchPair> oracle_v_minimal(const std::vector<MatchPair>& all, NeuronId v) {
  std::vector<MatchPair> out;
  for (const MatchPair& m : all) {
    if (!m.contains(v)) continue;
    bool minimal = true;
    for (const MatchPair& inner : all) {
      if (inner != m && m.contains_pair(inner) && inner.contains(v)) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.push_back(m);
  }
  std::sort(out.begin(), out.end());
  return out;
}

OracleReport oracle_report(const MatchProblem& problem, std::size_t limit) {
  OracleReport report;
  report.all_matches = enumerate_matches(problem, limit);
  for (const MatchPair& m : report.all_matches) {
    report.maximum = match_union(report.maximum, m);
  }
  report.simple = oracle_simple_matches(report.all_matches);
  for (const NeuronId& v : report.maximum.support()) {
    report.minimal_by_neuron[v] = oracle_v_minimal(report.all_matches, v);
  }
  return report;
}

bool check_strong_independence(const ActivationMatrix& acts, double theta,
                               const NumericPolicy& policy, std::size_t limit) {
  if (!(theta > 0.0) || !(theta <= std::numbers::pi / 2)) {
    fail(ErrorKind::invalid_input, "theta must lie in (0, pi/2]");
  }
  const std::size_t n = acts.rows();
  if (n > limit) {
    fail(ErrorKind::too_large, "independence check limited to " + std::to_string(limit) +
                                   " rows, got " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (acts.row_norm(i) == 0.0) return false;
  }
  if (n < 2) return true;

  std::vector<OrthonormalBasis> bases(1u << n);
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const std::vector<std::size_t> ids = mask_to_ids(mask, n);
    bases[mask] = orthonormal_basis(acts, ids, policy);
  }

  const std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t a = 1; a <= full; ++a) {
    const std::uint32_t rest = full & ~a;
    // enumerate non-empty b disjoint from a; a < b avoids the mirror pair
    for (std::uint32_t b = rest; b != 0; b = (b - 1) & rest) {
      if (a < b && subspace_angle(bases[a], bases[b]) < theta) return false;
    }
  }
  return true;
}

bool check_stability(const MatchProblem& problem, double lambda, std::size_t limit) {
  if (!(lambda > 1.0)) fail(ErrorKind::invalid_input, "lambda must be > 1");
  const std::size_t nx = problem.x_acts.rows();
  const std::size_t ny = problem.y_acts.rows();
  if (nx > limit || ny > limit) {
    fail(ErrorKind::too_large, "stability check limited to " + std::to_string(limit) +
                                   " rows per side");
  }
  const double eps = problem.epsilon;

  auto side_stable = [&](Side query_side) {
    const ActivationMatrix& queries = problem.acts(query_side);
    const ActivationMatrix& spans = problem.acts(query_side == Side::x ? Side::y : Side::x);
    for (std::uint32_t mask = 0; mask < (1u << spans.rows()); ++mask) {
      const OrthonormalBasis basis =
          orthonormal_basis(spans, mask_to_ids(mask, spans.rows()), problem.policy);
      for (std::size_t i = 0; i < queries.rows(); ++i) {
        const double r = relative_residual(queries.row(i), basis, problem.policy);
        if (r > eps && r <= lambda * eps) return false;
      }
    }
    return true;
  };

  return side_stable(Side::x) && side_stable(Side::y);
}

bool verify_decomposition(const MatchPair& target, const std::vector<MatchPair>& simples) {
  MatchPair combined;
  for (const MatchPair& s : simples) {
    if (target.contains_pair(s)) combined = match_union(combined, s);
  }
  return combined == target;
}

}  // namespace oracle
}  // namespace smatch
