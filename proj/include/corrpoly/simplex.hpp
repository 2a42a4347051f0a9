#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "corrpoly/error.hpp"
#include "corrpoly/exactnum.hpp"

namespace corrpoly {

/// A p = b, p >= 0, with an optional objective c (minimized).
struct LinearSystem {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rational> a;  // row-major, rows x cols
  std::vector<Rational> b;
  std::optional<std::vector<Rational>> c;

  LinearSystem() = default;
  LinearSystem(std::size_t m, std::size_t v) : rows(m), cols(v), a(m * v), b(m) {}

  Rational& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

enum class LpStatus { Feasible, Infeasible, Optimal, Unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Feasible: return "feasible";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  std::optional<std::vector<Rational>> witness;
  std::optional<Rational> value;
  std::vector<std::size_t> basis;  // structural columns in the final basis, ascending
};

namespace detail {

// Dense two-phase tableau. Columns [0, v) are structural, [v, v+m) artificial.
// Pivoting follows Bland's rule throughout: the entering column is the lowest
// index with negative reduced cost, the leaving row breaks ratio ties by the
// lowest basic variable index. This guarantees termination.
class Tableau {
 public:
  Tableau(const LinearSystem& sys, const std::vector<std::size_t>& kept) : v_(sys.cols), m_(kept.size()) {
    const std::size_t width = v_ + m_;
    t_.assign(m_, std::vector<Rational>(width));
    rhs_.resize(m_);
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t r = kept[i];
      const bool flip = sys.b[r] < 0;
      for (std::size_t j = 0; j < v_; ++j) t_[i][j] = flip ? Rational(-sys.at(r, j)) : sys.at(r, j);
      t_[i][v_ + i] = 1;
      rhs_[i] = flip ? Rational(-sys.b[r]) : sys.b[r];
      basis_[i] = v_ + i;
    }
  }

  /// Phase 1: minimize the sum of artificials. Returns true iff that sum reaches 0.
  bool phase_one() {
    std::vector<Rational> cost(v_ + m_);
    for (std::size_t i = 0; i < m_; ++i) cost[v_ + i] = 1;
    price(cost);
    iterate(v_ + m_);
    Rational infeasibility;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= v_) infeasibility += rhs_[i];
    if (infeasibility != 0) return false;
    drive_out_artificials();
    return true;
  }

  /// Phase 2 on structural columns only. Returns false if unbounded.
  bool phase_two(const std::vector<Rational>& c) {
    std::vector<Rational> cost(v_ + m_);
    std::copy(c.begin(), c.end(), cost.begin());
    price(cost);
    return iterate(v_);
  }

  std::vector<Rational> solution() const {
    std::vector<Rational> p(v_);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < v_) p[basis_[i]] = rhs_[i];
    return p;
  }

  std::vector<std::size_t> structural_basis() const {
    std::vector<std::size_t> out;
    for (auto j : basis_)
      if (j < v_) out.push_back(j);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  void price(const std::vector<Rational>& cost) {
    reduced_ = cost;
    for (std::size_t i = 0; i < m_; ++i) {
      const Rational& cb = cost[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < reduced_.size(); ++j)
        if (t_[i][j] != 0) reduced_[j] -= cb * t_[i][j];
    }
  }

  // Returns false when an improving column has no positive entry (unbounded).
  bool iterate(std::size_t eligible) {
    for (;;) {
      std::size_t enter = eligible;
      for (std::size_t j = 0; j < eligible; ++j) {
        if (reduced_[j] < 0 && !is_basic(j)) {
          enter = j;
          break;
        }
      }
      if (enter == eligible) return true;
      std::size_t leave = m_;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (t_[i][enter] <= 0) continue;
        Rational ratio = rhs_[i] / t_[i][enter];
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  bool is_basic(std::size_t j) const { return std::find(basis_.begin(), basis_.end(), j) != basis_.end(); }

  void pivot(std::size_t r, std::size_t c) {
    const Rational piv = t_[r][c];
    for (auto& x : t_[r]) x /= piv;
    rhs_[r] /= piv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || t_[i][c] == 0) continue;
      const Rational f = t_[i][c];
      for (std::size_t j = 0; j < t_[i].size(); ++j)
        if (t_[r][j] != 0) t_[i][j] -= f * t_[r][j];
      rhs_[i] -= f * rhs_[r];
    }
    if (!reduced_.empty() && reduced_[c] != 0) {
      const Rational f = reduced_[c];
      for (std::size_t j = 0; j < reduced_.size(); ++j)
        if (t_[r][j] != 0) reduced_[j] -= f * t_[r][j];
    }
    basis_[r] = c;
  }

  // After a zero-infeasibility phase 1, any artificial still basic sits at value
  // 0. Swap it for a structural column when its row has one; otherwise the row
  // is a linear combination of the others and is dropped.
  void drive_out_artificials() {
    std::vector<bool> redundant(m_, false);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < v_) continue;
      std::size_t j = 0;
      while (j < v_ && (t_[i][j] == 0 || is_basic(j))) ++j;
      if (j < v_) {
        pivot(i, j);
      } else {
        redundant[i] = true;
      }
    }
    std::size_t w = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (redundant[i]) continue;
      if (w != i) {
        t_[w] = std::move(t_[i]);
        rhs_[w] = rhs_[i];
        basis_[w] = basis_[i];
      }
      ++w;
    }
    t_.resize(w);
    rhs_.resize(w);
    basis_.resize(w);
    m_ = w;
  }

  std::size_t v_;
  std::size_t m_;
  std::vector<std::vector<Rational>> t_;
  std::vector<Rational> rhs_;
  std::vector<std::size_t> basis_;
  std::vector<Rational> reduced_;
};

inline void validate(const LinearSystem& sys, bool need_objective) {
  if (sys.a.size() != sys.rows * sys.cols || sys.b.size() != sys.rows) {
    throw Error(ErrorCode::DimensionMismatch, "A is " + std::to_string(sys.a.size()) + " entries for " +
                                                  std::to_string(sys.rows) + "x" + std::to_string(sys.cols) +
                                                  ", b has " + std::to_string(sys.b.size()));
  }
  if (need_objective && (!sys.c || sys.c->size() != sys.cols)) {
    throw Error(ErrorCode::DimensionMismatch, "objective missing or of wrong length");
  }
}

// Zero rows with zero rhs are dropped; a zero row with nonzero rhs is infeasible.
inline std::optional<std::vector<std::size_t>> presolve(const LinearSystem& sys) {
  std::vector<std::size_t> kept;
  for (std::size_t r = 0; r < sys.rows; ++r) {
    bool zero = true;
    for (std::size_t j = 0; j < sys.cols && zero; ++j) zero = sys.at(r, j) == 0;
    if (!zero) {
      kept.push_back(r);
    } else if (sys.b[r] != 0) {
      return std::nullopt;
    }
  }
  return kept;
}

}  // namespace detail

/// Phase-1 simplex. On success the witness is a basic feasible solution.
inline LpOutcome lp_feasible(const LinearSystem& sys) {
  detail::validate(sys, false);
  auto kept = detail::presolve(sys);
  if (!kept) return {};
  detail::Tableau tab(sys, *kept);
  if (!tab.phase_one()) return {};
  return {LpStatus::Feasible, tab.solution(), std::nullopt, tab.structural_basis()};
}

/// Two-phase simplex minimizing c.p.
inline LpOutcome lp_minimize(const LinearSystem& sys) {
  detail::validate(sys, true);
  auto kept = detail::presolve(sys);
  if (!kept) return {};
  detail::Tableau tab(sys, *kept);
  if (!tab.phase_one()) return {};
  if (!tab.phase_two(*sys.c)) return {LpStatus::Unbounded, std::nullopt, std::nullopt, {}};
  auto p = tab.solution();
  Rational value;
  for (std::size_t j = 0; j < p.size(); ++j) value += (*sys.c)[j] * p[j];
  return {LpStatus::Optimal, std::move(p), value, tab.structural_basis()};
}

/// Exact check that `p` satisfies A p = b and p >= 0.
inline bool satisfies(const LinearSystem& sys, const std::vector<Rational>& p) {
  if (p.size() != sys.cols) return false;
  for (const auto& x : p)
    if (x < 0) return false;
  for (std::size_t r = 0; r < sys.rows; ++r) {
    Rational s;
    for (std::size_t j = 0; j < sys.cols; ++j) s += sys.at(r, j) * p[j];
    if (s != sys.b[r]) return false;
  }
  return true;
}

}  // namespace corrpoly
