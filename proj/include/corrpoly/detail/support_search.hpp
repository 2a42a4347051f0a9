#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "corrpoly/simplex.hpp"

namespace corrpoly::detail {

// Fixed-width bitset over the rows of a decomposition system.
class RowBits {
 public:
  RowBits() = default;
  explicit RowBits(std::size_t bits) : words_((bits + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }

  RowBits& operator|=(const RowBits& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
    return *this;
  }
  friend RowBits operator|(RowBits a, const RowBits& b) { return a |= b; }

  bool contains(const RowBits& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (o.words_[w] & ~words_[w]) return false;
    return true;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct SupportHit {
  std::vector<std::size_t> columns;  // indices into the full system, ascending
  std::vector<Rational> weights;     // one per entry of `columns`
};

// Smallest-support search for A p = b, p >= 0: depth-first over column subsets of
// size <= limit in lexicographic order, solving the restricted LP at every subset
// whose columns touch all rows with b_r != 0. A subtree is abandoned as soon as
// some such row cannot be touched by the chosen columns plus all later ones.
// `cover_rows` selects which rows take part in the coverage test.
class SupportSearch {
 public:
  SupportSearch(const LinearSystem& sys, const std::vector<bool>& cover_rows) : sys_(sys) {
    required_ = RowBits(sys.rows);
    cover_.assign(sys.cols, RowBits(sys.rows));
    for (std::size_t r = 0; r < sys.rows; ++r) {
      if (!cover_rows[r] || sys.b[r] == 0) continue;
      required_.set(r);
      for (std::size_t c = 0; c < sys.cols; ++c)
        if (sys.at(r, c) != 0) cover_[c].set(r);
    }
    suffix_.assign(sys.cols + 1, RowBits(sys.rows));
    for (std::size_t c = sys.cols; c-- > 0;) suffix_[c] = suffix_[c + 1] | cover_[c];
  }

  std::optional<SupportHit> find(std::size_t limit) {
    limit_ = limit;
    chosen_.clear();
    hit_.reset();
    descend(0, RowBits(sys_.rows));
    return hit_;
  }

 private:
  bool descend(std::size_t start, const RowBits& covered) {
    if (!(covered | suffix_[start]).contains(required_)) return false;
    if (covered.contains(required_) && try_columns()) return true;
    if (chosen_.size() == limit_) return false;
    for (std::size_t c = start; c < sys_.cols; ++c) {
      chosen_.push_back(c);
      if (descend(c + 1, covered | cover_[c])) return true;
      chosen_.pop_back();
    }
    return false;
  }

  bool try_columns() {
    LinearSystem sub(sys_.rows, chosen_.size());
    sub.b = sys_.b;
    for (std::size_t r = 0; r < sys_.rows; ++r)
      for (std::size_t c = 0; c < chosen_.size(); ++c) sub.at(r, c) = sys_.at(r, chosen_[c]);
    auto out = lp_feasible(sub);
    if (out.status != LpStatus::Feasible) return false;
    hit_ = SupportHit{chosen_, std::move(*out.witness)};
    return true;
  }

  const LinearSystem& sys_;
  RowBits required_;
  std::vector<RowBits> cover_;
  std::vector<RowBits> suffix_;
  std::vector<std::size_t> chosen_;
  std::size_t limit_ = 0;
  std::optional<SupportHit> hit_;
};

}  // namespace corrpoly::detail
