#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "corrpoly/detail/support_search.hpp"
#include "corrpoly/error.hpp"
#include "corrpoly/hulls.hpp"

namespace corrpoly {

enum class RankStatus { Answered, NotMember };

struct RankResult {
  RankStatus status = RankStatus::NotMember;
  std::optional<std::size_t> rank;
  std::optional<DecompositionCertificate> certificate;
  std::optional<bool> threshold_met;
};

struct RelaxedRankResult {
  RankStatus status = RankStatus::NotMember;
  std::optional<Rational> value;
  std::optional<DecompositionCertificate> certificate;
};

struct RelaxedRankDecision {
  bool holds = false;
  bool member = false;
  std::optional<Rational> value;
};

/// Largest possible rank: n(n+1)/2 equations, plus the sum row for polytopes.
inline std::size_t rank_bound(std::size_t n, HullFamily family) {
  return n * (n + 1) / 2 + (family == HullFamily::CorrPolytope ? 1 : 0);
}

namespace detail {

inline void require_rank_family(HullFamily family) {
  if (family != HullFamily::CorrCone && family != HullFamily::CorrPolytope) {
    throw Error(ErrorCode::InvalidInstance, "rank is defined here for conx and cor only");
  }
}

// Searches for a decomposition with at most q positive weights. Membership must
// already be established.
inline std::optional<DecompositionCertificate> bounded_support(const RationalMatrix& m, HullFamily family,
                                                               std::size_t q) {
  const HullSpec spec(family);
  const auto ids = family_generators(m, family);
  const auto sys = decomposition_system(m, GeneratorKind::Boolean, ids, spec.weight_sum());
  std::vector<bool> cover_rows(sys.rows, true);
  if (spec.weight_sum()) cover_rows.back() = false;
  SupportSearch search(sys, cover_rows);
  auto hit = search.find(q);
  if (!hit) return std::nullopt;
  std::vector<std::uint64_t> chosen_ids;
  for (auto c : hit->columns) chosen_ids.push_back(ids[c]);
  return certificate_from(m.dim(), GeneratorKind::Boolean, chosen_ids, hit->weights);
}

}  // namespace detail

/// Is there a decomposition with at most q positive weights? Membership is
/// checked first; non-members answer NotMember.
inline RankResult rank_decision(const RationalMatrix& m, HullFamily family, std::size_t q,
                                const SolveOptions& opts = {}) {
  detail::require_rank_family(family);
  if (!decide_membership(m, HullSpec(family), opts).member) return {};
  RankResult r;
  r.status = RankStatus::Answered;
  auto cert = detail::bounded_support(m, family, q);
  r.threshold_met = cert.has_value();
  if (cert) {
    r.rank = cert->support_size();
    r.certificate = std::move(cert);
  }
  return r;
}

/// Minimum number of positive weights, by iterative deepening on q. For the
/// polytope a positive weight on the zero generator counts.
inline RankResult rank_minimum(const RationalMatrix& m, HullFamily family, const SolveOptions& opts = {}) {
  detail::require_rank_family(family);
  if (!decide_membership(m, HullSpec(family), opts).member) return {};
  const std::size_t bound = rank_bound(m.dim(), family);
  for (std::size_t q = 0; q <= bound; ++q) {
    if (auto cert = detail::bounded_support(m, family, q)) {
      RankResult r;
      r.status = RankStatus::Answered;
      r.rank = cert->support_size();
      r.threshold_met = true;
      r.certificate = std::move(cert);
      return r;
    }
  }
  // A basic feasible solution has at most `bound` nonzeros.
  throw std::logic_error("rank search exhausted the basic-solution bound for a member");
}

/// min sum p over decompositions in CONX(n), with a basic optimal certificate.
inline RelaxedRankResult relaxed_rank(const RationalMatrix& m, const SolveOptions& opts = {}) {
  if (!decide_membership(m, HullSpec(HullFamily::CorrCone), opts).member) return {};
  const auto ids = admissible_generators(m, GeneratorKind::Boolean);
  auto sys = decomposition_system(m, GeneratorKind::Boolean, ids, std::nullopt);
  sys.c = std::vector<Rational>(ids.size(), Rational(1));
  const auto out = lp_minimize(sys);
  if (out.status != LpStatus::Optimal) throw std::logic_error("relaxed rank LP failed on a member");
  RelaxedRankResult r;
  r.status = RankStatus::Answered;
  r.value = *out.value;
  r.certificate = certificate_from(m.dim(), GeneratorKind::Boolean, ids, *out.witness);
  return r;
}

inline RelaxedRankDecision relaxed_rank_decision(const RationalMatrix& m, const Rational& rho,
                                                 const SolveOptions& opts = {}) {
  auto rr = relaxed_rank(m, opts);
  if (rr.status == RankStatus::NotMember) return {};
  return {*rr.value <= rho, true, rr.value};
}

}  // namespace corrpoly
