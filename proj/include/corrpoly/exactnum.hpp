#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corrpoly/error.hpp"

namespace corrpoly {

/// Exact rational scalar. GMP keeps every value in lowest terms with a positive
/// denominator once canonicalized; all constructors below canonicalize.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Strict parser for the literals `a` and `a/b` (optional leading '-', b > 0,
/// decimal digits only). Anything else is a ParseError.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&](const char* why) -> Rational {
    throw Error(ErrorCode::ParseError, "malformed rational '" + std::string(text) + "': " + why);
  };
  if (text.empty()) return fail("empty literal");
  std::size_t pos = 0;
  if (text[0] == '-') pos = 1;
  auto digits = [&](std::size_t from) {
    std::size_t p = from;
    while (p < text.size() && text[p] >= '0' && text[p] <= '9') ++p;
    return p;
  };
  std::size_t num_end = digits(pos);
  if (num_end == pos) return fail("missing numerator digits");
  std::string num(text.substr(0, num_end));
  std::string den = "1";
  if (num_end != text.size()) {
    if (text[num_end] != '/') return fail("unexpected character");
    std::size_t den_end = digits(num_end + 1);
    if (den_end == num_end + 1) return fail("missing denominator digits");
    if (den_end != text.size()) return fail("trailing characters");
    den = std::string(text.substr(num_end + 1));
    if (mpz_class(den) == 0) return fail("zero denominator");
  }
  Rational r{mpz_class(num), mpz_class(den)};
  r.canonicalize();
  return r;
}

/// `a` when the denominator is 1, `a/b` otherwise. Never decimal.
inline std::string to_string(const Rational& r) { return r.get_str(); }

/// Dense square matrix of rationals. Symmetry is not enforced; check_symmetric
/// reports it.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(std::size_t n) : n_(n), data_(n * n) {}

  RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows) : n_(rows.size()) {
    data_.reserve(n_ * n_);
    for (const auto& row : rows) {
      if (row.size() != n_) throw Error(ErrorCode::NonSquare, "row length differs from row count");
      for (const auto& v : row) data_.push_back(v);
    }
  }

  static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows) {
    RationalMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) {
        throw Error(ErrorCode::NonSquare, "row " + std::to_string(i + 1) + " has " +
                                              std::to_string(rows[i].size()) + " entries, expected " +
                                              std::to_string(rows.size()));
      }
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static RationalMatrix zero(std::size_t n) { return RationalMatrix(n); }

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static RationalMatrix constant(std::size_t n, const Rational& v) {
    RationalMatrix m(n);
    for (auto& x : m.data_) x = v;
    return m;
  }

  std::size_t dim() const noexcept { return n_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  RationalMatrix transpose() const {
    RationalMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  RationalMatrix& operator+=(const RationalMatrix& other) {
    if (other.n_ != n_) throw Error(ErrorCode::DimensionMismatch, "matrix sum of different sizes");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
  }

  RationalMatrix& operator*=(const Rational& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend RationalMatrix operator+(RationalMatrix a, const RationalMatrix& b) { return a += b; }
  friend RationalMatrix operator*(const Rational& s, RationalMatrix m) { return m *= s; }

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.n_ == b.n_ && a.data_ == b.data_;
  }

  /// Adds w * (v v^T) in place.
  void add_outer(const Rational& w, const std::vector<Rational>& v) {
    for (std::size_t i = 0; i < n_; ++i) {
      if (v[i] == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) data_[i * n_ + j] += w * v[i] * v[j];
    }
  }

 private:
  std::size_t n_ = 0;
  std::vector<Rational> data_;
};

inline std::ostream& operator<<(std::ostream& os, const RationalMatrix& m) {
  os << '[';
  for (std::size_t i = 0; i < m.dim(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < m.dim(); ++j) os << (j ? "," : "") << m(i, j);
    os << ']';
  }
  return os << ']';
}

inline bool check_symmetric(const RationalMatrix& m) {
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i + 1; j < m.dim(); ++j)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

inline bool check_nonnegative(const RationalMatrix& m) {
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      if (m(i, j) < 0) return false;
  return true;
}

enum class PsdFailure { NegativePivot, ZeroPivotNonzeroRow };

/// Where Schur elimination stopped. `index` is the original row of the pivot,
/// `other` the offending row entry for ZeroPivotNonzeroRow.
struct PsdWitness {
  std::size_t step = 0;
  std::size_t index = 0;
  PsdFailure kind = PsdFailure::NegativePivot;
  std::optional<std::size_t> other;
  Rational pivot;
};

struct PsdResult {
  bool psd = true;
  std::optional<PsdWitness> witness;
};

/// Exact PSD test by repeated Schur complementation on the leading remaining
/// index. A negative pivot, or a zero pivot with a nonzero entry left in its row,
/// certifies non-PSD; a zero pivot with a zero row is dropped.
inline PsdResult check_psd(const RationalMatrix& m) {
  if (!check_symmetric(m)) throw Error(ErrorCode::AsymmetricInput, "PSD test needs a symmetric matrix");
  const std::size_t n = m.dim();
  RationalMatrix work = m;
  std::vector<bool> active(n, true);
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t p = step;
    active[p] = false;
    const Rational pivot = work(p, p);
    if (pivot < 0) return {false, PsdWitness{step, p, PsdFailure::NegativePivot, std::nullopt, pivot}};
    if (pivot == 0) {
      for (std::size_t j = 0; j < n; ++j) {
        if (active[j] && work(p, j) != 0) {
          return {false, PsdWitness{step, p, PsdFailure::ZeroPivotNonzeroRow, j, pivot}};
        }
      }
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i] || work(i, p) == 0) continue;
      const Rational factor = work(i, p) / pivot;
      for (std::size_t j = 0; j < n; ++j) {
        if (active[j]) work(i, j) -= factor * work(p, j);
      }
    }
  }
  return {};
}

struct Violation {
  std::string condition;
  std::size_t i = 0;
  std::size_t j = 0;
  std::optional<std::size_t> schur_step;
};

struct ConditionReport {
  bool symmetric = false;
  bool nonnegative = false;
  bool psd = false;
  bool dnn = false;
  std::optional<Violation> first_violation;
};

/// Runs all screens and never throws. An asymmetric matrix is reported as not PSD.
inline ConditionReport check_dnn(const RationalMatrix& m) {
  ConditionReport r;
  const std::size_t n = m.dim();
  r.symmetric = true;
  for (std::size_t i = 0; i < n && r.symmetric; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (m(i, j) != m(j, i)) {
        r.symmetric = false;
        r.first_violation = Violation{"symmetric", i, j, std::nullopt};
        break;
      }
    }
  }
  r.nonnegative = true;
  std::optional<Violation> negative;
  for (std::size_t i = 0; i < n && r.nonnegative; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (m(i, j) < 0) {
        r.nonnegative = false;
        negative = Violation{"nonnegative", i, j, std::nullopt};
        break;
      }
    }
  }
  std::optional<Violation> psd_violation;
  if (r.symmetric) {
    auto res = check_psd(m);
    r.psd = res.psd;
    if (!res.psd) {
      const auto& w = *res.witness;
      psd_violation = Violation{"psd", w.index, w.other.value_or(w.index), w.step};
    }
  }
  r.dnn = r.psd && r.nonnegative;
  if (!r.first_violation) r.first_violation = psd_violation ? psd_violation : negative;
  return r;
}

}  // namespace corrpoly
