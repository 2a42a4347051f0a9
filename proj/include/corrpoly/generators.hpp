#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "corrpoly/error.hpp"
#include "corrpoly/exactnum.hpp"

namespace corrpoly {

/// Generator matrices are materialized over all 2^n ids, so n is bounded well
/// below the width of the id type.
inline constexpr std::size_t kHardMaxDim = 30;

/// A generator index k in [0, 2^n). Component i (0-based) of the boolean vector
/// x_k is bit i of k, least-significant first.
struct GeneratorId {
  std::size_t n = 0;
  std::uint64_t k = 0;

  GeneratorId() = default;
  GeneratorId(std::size_t dim, std::uint64_t id) : n(dim), k(id) {
    if (dim == 0 || dim > kHardMaxDim) {
      throw Error(ErrorCode::OutOfRange, "dimension " + std::to_string(dim) + " outside [1, " +
                                             std::to_string(kHardMaxDim) + "]");
    }
    if (id > max_id(dim)) {
      throw Error(ErrorCode::OutOfRange,
                  "generator " + std::to_string(id) + " exceeds P_n = " + std::to_string(max_id(dim)));
    }
  }

  static std::uint64_t max_id(std::size_t dim) { return (std::uint64_t{1} << dim) - 1; }

  friend bool operator==(const GeneratorId&, const GeneratorId&) = default;
};

using BooleanVector = std::vector<std::uint8_t>;

enum class GeneratorKind { Boolean, Cut };

inline BooleanVector boolean_vector(GeneratorId id) {
  BooleanVector x(id.n);
  for (std::size_t i = 0; i < id.n; ++i) x[i] = static_cast<std::uint8_t>((id.k >> i) & 1u);
  return x;
}

/// Bits written component 1 first, e.g. k=1, n=3 -> "100".
inline std::string bit_string(GeneratorId id) {
  std::string s(id.n, '0');
  for (std::size_t i = 0; i < id.n; ++i)
    if ((id.k >> i) & 1u) s[i] = '1';
  return s;
}

inline std::uint64_t id_from_bits(const BooleanVector& x) {
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i]) k |= std::uint64_t{1} << i;
  return k;
}

inline std::uint64_t id_from_support(const std::vector<std::size_t>& support) {
  std::uint64_t k = 0;
  for (auto i : support) k |= std::uint64_t{1} << i;
  return k;
}

/// X^k = x_k x_k^T.
inline RationalMatrix generator_matrix(GeneratorId id) {
  RationalMatrix m(id.n);
  for (std::size_t i = 0; i < id.n; ++i) {
    if (!((id.k >> i) & 1u)) continue;
    for (std::size_t j = 0; j < id.n; ++j)
      if ((id.k >> j) & 1u) m(i, j) = 1;
  }
  return m;
}

/// Y^k = y_k y_k^T with y_k = 2 x_k - 1.
inline RationalMatrix cut_generator(GeneratorId id) {
  RationalMatrix m(id.n);
  for (std::size_t i = 0; i < id.n; ++i)
    for (std::size_t j = 0; j < id.n; ++j)
      m(i, j) = (((id.k >> i) ^ (id.k >> j)) & 1u) ? -1 : 1;
  return m;
}

inline RationalMatrix generator_of_kind(GeneratorKind kind, GeneratorId id) {
  return kind == GeneratorKind::Boolean ? generator_matrix(id) : cut_generator(id);
}

/// One id per {y, -y} pair: the member whose last component is 0, i.e. k < 2^(n-1).
inline std::vector<std::uint64_t> cut_representatives(std::size_t n) {
  if (n == 0 || n > kHardMaxDim) throw Error(ErrorCode::OutOfRange, "cut dimension out of range");
  std::vector<std::uint64_t> ids(std::size_t{1} << (n - 1));
  for (std::uint64_t k = 0; k < ids.size(); ++k) ids[k] = k;
  return ids;
}

/// BQP point (x, y) to its symmetric matrix. `y` lists the pairs (1,2), (1,3),
/// ..., (1,n), (2,3), ... in row order. All four Fortet inequalities are checked.
inline RationalMatrix bqp_point_to_matrix(const std::vector<Rational>& x, const std::vector<Rational>& y) {
  const std::size_t n = x.size();
  if (y.size() != n * (n - (n ? 1 : 0)) / 2) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(n * (n ? n - 1 : 0) / 2) +
                                                  " pair values, got " + std::to_string(y.size()));
  }
  RationalMatrix m(n);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n; ++i) m(i, i) = x[i];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++idx) {
      const Rational& v = y[idx];
      const std::string where = "y_{" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "}";
      if (v < 0) throw Error(ErrorCode::FortetViolation, where + " >= 0 fails");
      if (v > x[i]) throw Error(ErrorCode::FortetViolation, where + " <= x_" + std::to_string(i + 1) + " fails");
      if (v > x[j]) throw Error(ErrorCode::FortetViolation, where + " <= x_" + std::to_string(j + 1) + " fails");
      if (v < x[i] + x[j] - 1) {
        throw Error(ErrorCode::FortetViolation, where + " >= x_" + std::to_string(i + 1) + " + x_" +
                                                    std::to_string(j + 1) + " - 1 fails");
      }
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

/// Undirected graph on 0..n-1 with adjacency bitmasks and per-vertex loop flags.
struct SupportGraph {
  std::size_t n = 0;
  std::vector<std::uint64_t> adj;
  std::vector<bool> loop;

  explicit SupportGraph(std::size_t dim = 0) : n(dim), adj(dim, 0), loop(dim, false) {}

  bool has_edge(std::size_t i, std::size_t j) const { return (adj[i] >> j) & 1u; }

  void add_edge(std::size_t i, std::size_t j) {
    if (i == j) {
      loop[i] = true;
      return;
    }
    adj[i] |= std::uint64_t{1} << j;
    adj[j] |= std::uint64_t{1} << i;
  }

  std::size_t edge_count() const {
    std::size_t c = 0;
    for (auto a : adj) c += static_cast<std::size_t>(__builtin_popcountll(a));
    return c / 2;
  }

  /// True iff `mask` is a clique (loops not required).
  bool is_clique(std::uint64_t mask) const {
    for (std::size_t i = 0; i < n; ++i) {
      if (((mask >> i) & 1u) && (mask & ~adj[i] & ~(std::uint64_t{1} << i))) return false;
    }
    return true;
  }
};

inline SupportGraph support_graph(const RationalMatrix& m) {
  if (!check_symmetric(m)) throw Error(ErrorCode::AsymmetricInput, "support graph needs a symmetric matrix");
  if (m.dim() > 64) throw Error(ErrorCode::DimensionCap, "support graph limited to 64 vertices");
  SupportGraph g(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = i; j < m.dim(); ++j) {
      if (m(i, j) < 0) {
        throw Error(ErrorCode::NegativeEntry,
                    "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") is negative");
      }
      if (m(i, j) > 0) g.add_edge(i, j);
    }
  }
  return g;
}

/// Generator ids that can carry positive weight in a decomposition of `m`.
/// Boolean: nonzero supports that are cliques of the support graph with a loop at
/// every vertex. Cut: every representative, unpruned.
inline std::vector<std::uint64_t> admissible_generators(const RationalMatrix& m, GeneratorKind kind) {
  if (kind == GeneratorKind::Cut) return cut_representatives(m.dim());
  if (m.dim() > kHardMaxDim) throw Error(ErrorCode::DimensionCap, "too many generators to enumerate");
  const SupportGraph g = support_graph(m);
  std::uint64_t looped = 0;
  for (std::size_t i = 0; i < g.n; ++i)
    if (g.loop[i]) looped |= std::uint64_t{1} << i;
  std::vector<std::uint64_t> out;
  const std::uint64_t last = GeneratorId::max_id(m.dim());
  for (std::uint64_t k = 1; k <= last; ++k) {
    if ((k & ~looped) == 0 && g.is_clique(k)) out.push_back(k);
  }
  return out;
}

}  // namespace corrpoly
