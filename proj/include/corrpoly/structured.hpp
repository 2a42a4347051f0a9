#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "corrpoly/detail/support_search.hpp"
#include "corrpoly/error.hpp"
#include "corrpoly/generators.hpp"
#include "corrpoly/hulls.hpp"
#include "corrpoly/ranks.hpp"
#include "corrpoly/reductions.hpp"

namespace corrpoly {

inline std::vector<std::size_t> mask_vertices(std::uint64_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; mask; ++i, mask >>= 1)
    if (mask & 1u) out.push_back(i);
  return out;
}

/// Vertex subsets stored as bitmasks, kept sorted ascending and duplicate-free.
struct CliqueFamily {
  std::size_t n = 0;
  std::vector<std::uint64_t> cliques;

  CliqueFamily() = default;
  CliqueFamily(std::size_t dim, std::vector<std::uint64_t> sets) : n(dim), cliques(std::move(sets)) {
    const std::uint64_t universe = dim >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << dim) - 1;
    for (auto c : cliques) {
      if (c == 0) throw Error(ErrorCode::InvalidInstance, "empty clique");
      if (c & ~universe) throw Error(ErrorCode::InvalidInstance, "clique vertex outside 1.." + std::to_string(dim));
    }
    std::sort(cliques.begin(), cliques.end());
    if (std::adjacent_find(cliques.begin(), cliques.end()) != cliques.end()) {
      throw Error(ErrorCode::InvalidInstance, "duplicate clique");
    }
  }

  static CliqueFamily from_lists(std::size_t dim, const std::vector<std::vector<std::size_t>>& lists) {
    std::vector<std::uint64_t> masks;
    for (const auto& l : lists) {
      std::uint64_t m = 0;
      for (auto v : l) {
        if (v >= dim) throw Error(ErrorCode::InvalidInstance, "clique vertex outside 1.." + std::to_string(dim));
        m |= std::uint64_t{1} << v;
      }
      masks.push_back(m);
    }
    return CliqueFamily(dim, std::move(masks));
  }

  void require_cliques_of(const SupportGraph& g) const {
    for (auto c : cliques) {
      if (!g.is_clique(c)) throw Error(ErrorCode::InvalidInstance, "a listed set is not a clique of the support graph");
    }
  }
};

inline bool is_forest(const SupportGraph& g) {
  std::vector<std::size_t> parent(g.n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t i = 0; i < g.n; ++i) {
    for (std::size_t j = i + 1; j < g.n; ++j) {
      if (!g.has_edge(i, j)) continue;
      auto a = find(i), b = find(j);
      if (a == b) return false;
      parent[a] = b;
    }
  }
  return true;
}

namespace detail {

// Maximum cardinality search, returned as an elimination order (reverse visit
// order). Ties go to the lowest vertex.
inline std::vector<std::size_t> mcs_elimination_order(const SupportGraph& g) {
  std::vector<std::size_t> weight(g.n, 0), visit;
  std::vector<bool> done(g.n, false);
  for (std::size_t step = 0; step < g.n; ++step) {
    std::size_t best = g.n;
    for (std::size_t v = 0; v < g.n; ++v)
      if (!done[v] && (best == g.n || weight[v] > weight[best])) best = v;
    done[best] = true;
    visit.push_back(best);
    for (std::size_t w = 0; w < g.n; ++w)
      if (!done[w] && g.has_edge(best, w)) ++weight[w];
  }
  std::reverse(visit.begin(), visit.end());
  return visit;
}

// Neighbours of each vertex that come later in `order`.
inline std::vector<std::uint64_t> later_neighbours(const SupportGraph& g, const std::vector<std::size_t>& order) {
  std::vector<std::size_t> pos(g.n);
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  std::vector<std::uint64_t> later(g.n, 0);
  for (std::size_t v = 0; v < g.n; ++v)
    for (std::size_t w = 0; w < g.n; ++w)
      if (g.has_edge(v, w) && pos[w] > pos[v]) later[v] |= std::uint64_t{1} << w;
  return later;
}

}  // namespace detail

inline bool is_chordal(const SupportGraph& g) {
  const auto order = detail::mcs_elimination_order(g);
  const auto later = detail::later_neighbours(g, order);
  std::vector<std::size_t> pos(g.n);
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  for (std::size_t v = 0; v < g.n; ++v) {
    if (!later[v]) continue;
    std::size_t u = g.n;
    for (auto w : mask_vertices(later[v]))
      if (u == g.n || pos[w] < pos[u]) u = w;
    const std::uint64_t rest = later[v] & ~(std::uint64_t{1} << u);
    if (rest & ~g.adj[u]) return false;
  }
  return true;
}

/// Maximal cliques read off a perfect elimination ordering: at most n of them.
inline CliqueFamily chordal_max_cliques(const SupportGraph& g) {
  if (!is_chordal(g)) throw Error(ErrorCode::NotChordal, "support graph has a chordless cycle");
  const auto order = detail::mcs_elimination_order(g);
  const auto later = detail::later_neighbours(g, order);
  std::vector<std::uint64_t> candidates;
  for (std::size_t v = 0; v < g.n; ++v) candidates.push_back(later[v] | (std::uint64_t{1} << v));
  std::vector<std::uint64_t> maximal;
  for (std::size_t a = 0; a < candidates.size(); ++a) {
    bool dominated = false;
    for (std::size_t b = 0; b < candidates.size() && !dominated; ++b) {
      if (a == b) continue;
      const bool subset = (candidates[a] & ~candidates[b]) == 0;
      dominated = subset && (candidates[a] != candidates[b] || b < a);
    }
    if (!dominated) maximal.push_back(candidates[a]);
  }
  return CliqueFamily(g.n, std::move(maximal));
}

/// Every non-empty subset of every bag that is a clique of `g`, deduplicated.
inline CliqueFamily expand_subcliques(const CliqueFamily& bags, const SupportGraph& g) {
  std::vector<std::uint64_t> out;
  for (auto bag : bags.cliques) {
    for (std::uint64_t s = bag; s; s = (s - 1) & bag)
      if (g.is_clique(s)) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return CliqueFamily(g.n, std::move(out));
}

inline CliqueFamily all_support_cliques(const SupportGraph& g) { return CliqueFamily(g.n, all_cliques(g)); }

struct ForestDecomposition {
  std::size_t n = 0;
  std::map<std::pair<std::size_t, std::size_t>, Rational> edge_weights;  // (i, j), i < j, 0-based
  std::map<std::size_t, Rational> loop_weights;                          // s_i for every vertex

  DecompositionCertificate certificate() const {
    DecompositionCertificate cert{n, GeneratorKind::Boolean, {}};
    for (const auto& [e, w] : edge_weights)
      if (w > 0) cert.weights.emplace((std::uint64_t{1} << e.first) | (std::uint64_t{1} << e.second), w);
    for (const auto& [i, w] : loop_weights)
      if (w > 0) cert.weights.emplace(std::uint64_t{1} << i, w);
    return cert;
  }
};

struct ForestFailure {
  std::size_t vertex = 0;
  Rational slack;  // the negative s_i
};

struct ForestResult {
  std::optional<ForestDecomposition> decomposition;
  std::optional<ForestFailure> failure;

  bool ok() const { return decomposition.has_value(); }
};

/// Decomposition into edge and singleton generators when the support is a forest:
/// edge {i,j} gets Gamma_ij and singleton i gets s_i = Gamma_ii - sum_j Gamma_ij.
inline ForestResult forest_decompose(const RationalMatrix& m) {
  const SupportGraph g = support_graph(m);
  if (!is_forest(g)) throw Error(ErrorCode::NotForest, "support graph contains a cycle");
  ForestDecomposition d;
  d.n = m.dim();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Rational s = m(i, i);
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (j == i || !g.has_edge(i, j)) continue;
      s -= m(i, j);
      if (i < j) d.edge_weights.emplace(std::pair{i, j}, m(i, j));
    }
    if (s < 0) return {std::nullopt, ForestFailure{i, s}};
    d.loop_weights.emplace(i, s);
  }
  return {std::move(d), std::nullopt};
}

enum class CliqueLpMode { Membership, RelaxedRank };

namespace detail {

inline void require_covered(const RationalMatrix& m, const CliqueFamily& family) {
  if (!check_symmetric(m)) throw Error(ErrorCode::AsymmetricInput, "clique LP needs a symmetric matrix");
  if (family.n != m.dim()) throw Error(ErrorCode::DimensionMismatch, "clique family and matrix sizes differ");
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = i; j < m.dim(); ++j) {
      if (m(i, j) <= 0) continue;
      const std::uint64_t pair = (std::uint64_t{1} << i) | (std::uint64_t{1} << j);
      bool covered = std::any_of(family.cliques.begin(), family.cliques.end(),
                                 [&](std::uint64_t c) { return (c & pair) == pair; });
      if (!covered) {
        throw Error(ErrorCode::UncoveredEntry, "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                                   ") is positive but lies in no clique");
      }
    }
  }
}

}  // namespace detail

/// Clique-indexed membership LP. A clique C is the generator whose support is C.
inline MembershipResult clique_lp_membership(const RationalMatrix& m, const CliqueFamily& family) {
  detail::require_covered(m, family);
  const auto sys = decomposition_system(m, GeneratorKind::Boolean, family.cliques, std::nullopt);
  const auto out = lp_feasible(sys);
  MembershipResult r;
  if (out.status != LpStatus::Feasible) {
    r.rejection = Rejection{RejectionKind::LpInfeasible, {}};
    return r;
  }
  r.member = true;
  r.certificate = certificate_from(m.dim(), GeneratorKind::Boolean, family.cliques, *out.witness);
  return r;
}

inline RelaxedRankResult clique_lp_relaxed_rank(const RationalMatrix& m, const CliqueFamily& family) {
  detail::require_covered(m, family);
  auto sys = decomposition_system(m, GeneratorKind::Boolean, family.cliques, std::nullopt);
  sys.c = std::vector<Rational>(family.cliques.size(), Rational(1));
  const auto out = lp_minimize(sys);
  RelaxedRankResult r;
  if (out.status != LpStatus::Optimal) return r;
  r.status = RankStatus::Answered;
  r.value = *out.value;
  r.certificate = certificate_from(m.dim(), GeneratorKind::Boolean, family.cliques, *out.witness);
  return r;
}

inline std::variant<MembershipResult, RelaxedRankResult> clique_lp_solve(const RationalMatrix& m,
                                                                         const CliqueFamily& family,
                                                                         CliqueLpMode mode) {
  if (mode == CliqueLpMode::Membership) return clique_lp_membership(m, family);
  return clique_lp_relaxed_rank(m, family);
}

/// At most q positive clique weights, searched over the clique-indexed columns.
inline RankResult clique_rank(const RationalMatrix& m, const CliqueFamily& family, std::size_t q) {
  if (!clique_lp_membership(m, family).member) return {};
  const auto sys = decomposition_system(m, GeneratorKind::Boolean, family.cliques, std::nullopt);
  detail::SupportSearch search(sys, std::vector<bool>(sys.rows, true));
  RankResult r;
  r.status = RankStatus::Answered;
  auto hit = search.find(q);
  r.threshold_met = hit.has_value();
  if (hit) {
    std::vector<std::uint64_t> ids;
    for (auto c : hit->columns) ids.push_back(family.cliques[c]);
    r.certificate = certificate_from(m.dim(), GeneratorKind::Boolean, ids, hit->weights);
    r.rank = r.certificate->support_size();
  }
  return r;
}

struct SeparationHit {
  std::uint64_t clique = 0;
  Rational weight;
};

/// Most violated dual constraint sum_{i<=j in C} Y_ij <= 1 over all cliques of the
/// support graph of `m`, found by enumeration. Ties go to the lowest clique mask.
inline std::optional<SeparationHit> clique_separation_dual(const RationalMatrix& m, const RationalMatrix& y) {
  if (y.dim() != m.dim()) throw Error(ErrorCode::DimensionMismatch, "dual matrix size differs");
  if (!check_symmetric(y)) throw Error(ErrorCode::AsymmetricInput, "dual matrix is not symmetric");
  const auto g = support_graph(m);
  std::optional<SeparationHit> best;
  for (auto c : all_cliques(g)) {
    const auto vs = mask_vertices(c);
    Rational w;
    for (std::size_t a = 0; a < vs.size(); ++a)
      for (std::size_t b = a; b < vs.size(); ++b) w += y(vs[a], vs[b]);
    if (w > 1 && (!best || w > best->weight)) best = SeparationHit{c, w};
  }
  return best;
}

}  // namespace corrpoly
