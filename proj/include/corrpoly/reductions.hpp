#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "corrpoly/error.hpp"
#include "corrpoly/exactnum.hpp"
#include "corrpoly/generators.hpp"
#include "corrpoly/hulls.hpp"
#include "corrpoly/simplex.hpp"

namespace corrpoly {

/// Exact cover by 3-sets on {1..universe_size}, every pair in at most one triple.
struct X3CInstance {
  std::size_t universe_size = 0;
  std::vector<std::array<std::size_t, 3>> triples;  // 1-based elements

  std::size_t q() const { return universe_size / 3; }
};

/// Simple graph on {1..vertex_count} with a fractional clique cover budget.
struct FCCInstance {
  std::size_t vertex_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // 1-based
  Rational budget;
};

struct ReducedInstance {
  RationalMatrix matrix;
  HullFamily family = HullFamily::CorrCone;
  std::optional<Rational> threshold;
  std::string provenance;
};

namespace detail {

inline void require_square_symmetric(const RationalMatrix& m, const char* what) {
  if (m.dim() == 0) throw Error(ErrorCode::NonSquare, std::string(what) + ": empty matrix");
  if (!check_symmetric(m)) throw Error(ErrorCode::AsymmetricInput, std::string(what) + ": matrix is not symmetric");
}

}  // namespace detail

/// [[Z, diag Z], [diag Z^T, 1]]: COR(n) into CONX(n+1).
inline RationalMatrix lift_cor_to_conx(const RationalMatrix& z) {
  detail::require_square_symmetric(z, "lift");
  const std::size_t n = z.dim();
  RationalMatrix g(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) g(i, j) = z(i, j);
    g(i, n) = z(i, i);
    g(n, i) = z(i, i);
  }
  g(n, n) = 1;
  return g;
}

/// [[1, diag^T], [diag, Gamma]]: COR(n) onto a face of nCOR(n+1).
inline RationalMatrix lift_to_normalized(const RationalMatrix& m) {
  detail::require_square_symmetric(m, "normalized lift");
  const std::size_t n = m.dim();
  RationalMatrix g(n + 1);
  g(0, 0) = 1;
  for (std::size_t i = 0; i < n; ++i) {
    g(0, i + 1) = m(i, i);
    g(i + 1, 0) = m(i, i);
    for (std::size_t j = 0; j < n; ++j) g(i + 1, j + 1) = m(i, j);
  }
  return g;
}

/// Affine isomorphism COR(n) -> CUT(n+1) from y = 2x - 1. Row/column 0 of the
/// result is the new index; the diagonal is 1.
inline RationalMatrix cor_to_cut(const RationalMatrix& x) {
  detail::require_square_symmetric(x, "cor-to-cut");
  const std::size_t n = x.dim();
  RationalMatrix y(n + 1);
  for (std::size_t i = 0; i <= n; ++i) y(i, i) = 1;
  for (std::size_t i = 0; i < n; ++i) {
    y(0, i + 1) = 2 * x(i, i) - 1;
    y(i + 1, 0) = y(0, i + 1);
    for (std::size_t j = i + 1; j < n; ++j) {
      y(i + 1, j + 1) = 4 * x(i, j) - 2 * x(i, i) - 2 * x(j, j) + 1;
      y(j + 1, i + 1) = y(i + 1, j + 1);
    }
  }
  return y;
}

/// Inverse of cor_to_cut: X_ij = (1 + Y_0i + Y_0j + Y_ij) / 4 for all i <= j.
inline RationalMatrix cut_to_cor(const RationalMatrix& y) {
  detail::require_square_symmetric(y, "cut-to-cor");
  if (y.dim() < 2) throw Error(ErrorCode::NonSquare, "cut-to-cor needs dimension at least 2");
  for (std::size_t i = 0; i < y.dim(); ++i) {
    if (y(i, i) != 1) {
      throw Error(ErrorCode::NonUnitDiagonal, "diagonal entry " + std::to_string(i + 1) + " is " + to_string(y(i, i)));
    }
  }
  const std::size_t n = y.dim() - 1;
  RationalMatrix x(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Rational v = (1 + y(0, i + 1) + y(0, j + 1) + y(i + 1, j + 1)) / 4;
      x(i, j) = v;
      x(j, i) = v;
    }
  }
  return x;
}

/// Structural checks for an X3C instance, including the pairwise linearity rule.
inline void validate(const X3CInstance& inst) {
  if (inst.universe_size == 0 || inst.universe_size % 3 != 0) {
    throw Error(ErrorCode::BadUniverseSize, "universe size " + std::to_string(inst.universe_size) +
                                                " is not a positive multiple of 3");
  }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> owner;
  for (std::size_t t = 0; t < inst.triples.size(); ++t) {
    auto tri = inst.triples[t];
    std::sort(tri.begin(), tri.end());
    if (tri[0] < 1 || tri[2] > inst.universe_size) {
      throw Error(ErrorCode::InvalidInstance, "triple " + std::to_string(t + 1) + " has an element outside the universe");
    }
    if (tri[0] == tri[1] || tri[1] == tri[2]) {
      throw Error(ErrorCode::InvalidInstance, "triple " + std::to_string(t + 1) + " repeats an element");
    }
    for (auto [a, b] : {std::pair{tri[0], tri[1]}, std::pair{tri[0], tri[2]}, std::pair{tri[1], tri[2]}}) {
      auto [it, fresh] = owner.emplace(std::pair{a, b}, t);
      if (!fresh) {
        throw Error(ErrorCode::NotLinear, "pair {" + std::to_string(a) + "," + std::to_string(b) +
                                              "} occurs in triples " + std::to_string(it->second + 1) + " and " +
                                              std::to_string(t + 1));
      }
    }
  }
}

/// Rank instance: n = 3q+1, unit diagonal on the universe, all-ones last
/// row/column, Gamma_nn = q, Gamma_ij = 1 iff i and j share a triple.
inline ReducedInstance x3c_to_rank_instance(const X3CInstance& inst) {
  validate(inst);
  const std::size_t q = inst.q();
  const std::size_t n = inst.universe_size + 1;
  RationalMatrix g(n);
  const std::size_t last = n - 1;
  for (std::size_t i = 0; i < last; ++i) {
    g(i, i) = 1;
    g(i, last) = 1;
    g(last, i) = 1;
  }
  g(last, last) = static_cast<unsigned long>(q);
  for (const auto& tri : inst.triples) {
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = 0; b < 3; ++b) {
        if (a != b) g(tri[a] - 1, tri[b] - 1) = 1;
      }
    }
  }
  return {std::move(g), HullFamily::CorrCone, Rational(static_cast<unsigned long>(q)),
          "x3c: |U| = " + std::to_string(inst.universe_size) + ", m = " + std::to_string(inst.triples.size()) +
              " -> conx rank instance n = " + std::to_string(n) + ", threshold q = " + std::to_string(q)};
}

inline void validate(const FCCInstance& inst) {
  if (inst.budget <= 0) throw Error(ErrorCode::NonPositiveBudget, "budget t = " + to_string(inst.budget));
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto [a, b] : inst.edges) {
    if (a < 1 || b < 1 || a > inst.vertex_count || b > inst.vertex_count) {
      throw Error(ErrorCode::InvalidInstance, "edge {" + std::to_string(a) + "," + std::to_string(b) + "} out of range");
    }
    if (a == b) throw Error(ErrorCode::InvalidInstance, "loop at vertex " + std::to_string(a));
    if (!seen.emplace(std::min(a, b), std::max(a, b)).second) {
      throw Error(ErrorCode::InvalidInstance, "duplicate edge {" + std::to_string(a) + "," + std::to_string(b) + "}");
    }
  }
}

/// Relaxed-rank instance with n = |V|+1: Gamma_ij = 1/n^2 on edges, Gamma_ii = 1/n,
/// Gamma_in = 1/n^2, Gamma_nn = t/n^2, rho = (3n^2 - n + 4t) / (2n^2).
inline ReducedInstance fcc_to_relaxed_rank_instance(const FCCInstance& inst) {
  validate(inst);
  const std::size_t n = inst.vertex_count + 1;
  const Rational nn(static_cast<unsigned long>(n));
  const Rational inv_n = 1 / nn;
  const Rational inv_n2 = inv_n * inv_n;
  RationalMatrix g(n);
  const std::size_t last = n - 1;
  for (std::size_t i = 0; i < last; ++i) {
    g(i, i) = inv_n;
    g(i, last) = inv_n2;
    g(last, i) = inv_n2;
  }
  g(last, last) = inst.budget * inv_n2;
  for (auto [a, b] : inst.edges) {
    g(a - 1, b - 1) = inv_n2;
    g(b - 1, a - 1) = inv_n2;
  }
  Rational rho = (3 * nn * nn - nn + 4 * inst.budget) / (2 * nn * nn);
  return {std::move(g), HullFamily::CorrCone, rho,
          "fcc: |V| = " + std::to_string(inst.vertex_count) + ", |E| = " + std::to_string(inst.edges.size()) +
              ", t = " + to_string(inst.budget) + " -> conx relaxed-rank instance n = " + std::to_string(n) +
              ", threshold rho = " + to_string(rho)};
}

/// Exhaustive search over q-subsets of the triples for a partition of the universe.
inline bool solve_x3c(const X3CInstance& inst) {
  validate(inst);
  if (inst.universe_size > 63) throw Error(ErrorCode::DimensionCap, "x3c search limited to 63 elements");
  const std::size_t q = inst.q();
  const std::size_t m = inst.triples.size();
  if (q > m) return false;
  std::vector<std::uint64_t> masks;
  for (const auto& tri : inst.triples) {
    masks.push_back((std::uint64_t{1} << (tri[0] - 1)) | (std::uint64_t{1} << (tri[1] - 1)) |
                    (std::uint64_t{1} << (tri[2] - 1)));
  }
  const std::uint64_t full = (std::uint64_t{1} << inst.universe_size) - 1;
  std::vector<std::size_t> pick(q);
  for (std::size_t i = 0; i < q; ++i) pick[i] = i;
  for (;;) {
    std::uint64_t acc = 0;
    bool disjoint = true;
    for (auto i : pick) {
      if (acc & masks[i]) {
        disjoint = false;
        break;
      }
      acc |= masks[i];
    }
    if (disjoint && acc == full) return true;
    // next combination
    std::size_t i = q;
    while (i > 0 && pick[i - 1] == m - q + i - 1) --i;
    if (i == 0) return false;
    ++pick[i - 1];
    for (std::size_t j = i; j < q; ++j) pick[j] = pick[j - 1] + 1;
  }
}

/// All non-empty cliques of a graph given by adjacency masks, ascending by mask.
inline std::vector<std::uint64_t> all_cliques(const SupportGraph& g) {
  std::vector<std::uint64_t> out;
  if (g.n == 0) return out;
  if (g.n > 24) throw Error(ErrorCode::DimensionCap, "clique enumeration limited to 24 vertices");
  const std::uint64_t last = (std::uint64_t{1} << g.n) - 1;
  for (std::uint64_t mask = 1; mask <= last; ++mask)
    if (g.is_clique(mask)) out.push_back(mask);
  return out;
}

inline SupportGraph fcc_graph(const FCCInstance& inst) {
  SupportGraph g(inst.vertex_count);
  for (auto [a, b] : inst.edges) g.add_edge(a - 1, b - 1);
  return g;
}

struct FccAnswer {
  bool within_budget = false;
  Rational optimum;
};

/// Fractional clique cover LP over every clique of the graph.
inline FccAnswer solve_fcc(const FCCInstance& inst) {
  validate(inst);
  const auto cliques = all_cliques(fcc_graph(inst));
  LinearSystem sys(inst.vertex_count, cliques.size());
  for (std::size_t v = 0; v < inst.vertex_count; ++v) {
    sys.b[v] = 1;
    for (std::size_t c = 0; c < cliques.size(); ++c)
      if ((cliques[c] >> v) & 1u) sys.at(v, c) = 1;
  }
  sys.c = std::vector<Rational>(cliques.size(), Rational(1));
  auto out = lp_minimize(sys);
  if (out.status != LpStatus::Optimal) throw std::logic_error("clique cover LP is always feasible and bounded");
  return {*out.value <= inst.budget, *out.value};
}

}  // namespace corrpoly
