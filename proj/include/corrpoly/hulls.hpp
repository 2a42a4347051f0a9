#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corrpoly/error.hpp"
#include "corrpoly/exactnum.hpp"
#include "corrpoly/generators.hpp"
#include "corrpoly/simplex.hpp"

namespace corrpoly {

enum class HullFamily {
  CorrCone,
  CorrPolytope,
  ScaledCorrPolytope,
  NormalizedCorrPolytope,
  CutPolytope,
  NormalizedCutPolytope,
  CutCone,
};

inline std::string_view family_name(HullFamily f) {
  switch (f) {
    case HullFamily::CorrCone: return "conx";
    case HullFamily::CorrPolytope: return "cor";
    case HullFamily::ScaledCorrPolytope: return "rho-cor";
    case HullFamily::NormalizedCorrPolytope: return "ncor";
    case HullFamily::CutPolytope: return "cut";
    case HullFamily::NormalizedCutPolytope: return "ncut";
    case HullFamily::CutCone: return "cutcone";
  }
  return "?";
}

inline std::optional<HullFamily> parse_family(std::string_view name) {
  for (auto f : {HullFamily::CorrCone, HullFamily::CorrPolytope, HullFamily::ScaledCorrPolytope,
                 HullFamily::NormalizedCorrPolytope, HullFamily::CutPolytope, HullFamily::NormalizedCutPolytope,
                 HullFamily::CutCone}) {
    if (family_name(f) == name) return f;
  }
  return std::nullopt;
}

inline GeneratorKind generator_kind(HullFamily f) {
  switch (f) {
    case HullFamily::CutPolytope:
    case HullFamily::NormalizedCutPolytope:
    case HullFamily::CutCone: return GeneratorKind::Cut;
    default: return GeneratorKind::Boolean;
  }
}

inline bool is_polytope(HullFamily f) { return f != HullFamily::CorrCone && f != HullFamily::CutCone; }

struct HullSpec {
  HullFamily family = HullFamily::CorrCone;
  std::optional<Rational> rho;

  HullSpec() = default;
  explicit HullSpec(HullFamily f, std::optional<Rational> r = std::nullopt) : family(f), rho(std::move(r)) {
    const bool scaled = f == HullFamily::ScaledCorrPolytope;
    if (scaled != rho.has_value()) {
      throw Error(ErrorCode::InvalidInstance, "rho must be given exactly for the scaled correlation polytope");
    }
    if (rho && *rho <= 0) throw Error(ErrorCode::NonPositiveRho, "rho = " + to_string(*rho) + " is not positive");
  }

  /// Required value of sum p, if the family has one.
  std::optional<Rational> weight_sum() const {
    if (rho) return rho;
    if (is_polytope(family)) return Rational(1);
    return std::nullopt;
  }
};

/// Nonnegative weights on generator ids, ascending by id. Only strictly positive
/// weights are stored.
struct DecompositionCertificate {
  std::size_t n = 0;
  GeneratorKind kind = GeneratorKind::Boolean;
  std::map<std::uint64_t, Rational> weights;

  std::size_t support_size() const { return weights.size(); }

  Rational total() const {
    Rational s;
    for (const auto& [k, w] : weights) s += w;
    return s;
  }

  RationalMatrix recompose() const {
    RationalMatrix m(n);
    for (const auto& [k, w] : weights) {
      RationalMatrix g = generator_of_kind(kind, GeneratorId(n, k));
      g *= w;
      m += g;
    }
    return m;
  }
};

enum class RejectionKind { FailedScreen, LpInfeasible };

struct Rejection {
  RejectionKind kind = RejectionKind::LpInfeasible;
  std::vector<std::string> screens;  // names of failed screens, empty for LpInfeasible
};

struct MembershipResult {
  bool member = false;
  std::optional<DecompositionCertificate> certificate;
  std::optional<Rejection> rejection;
};

struct SolveOptions {
  std::size_t max_n = 16;
};

inline void enforce_cap(std::size_t n, const SolveOptions& opts) {
  const std::size_t cap = std::min(opts.max_n, kHardMaxDim);
  if (n > cap) {
    throw Error(ErrorCode::DimensionCap,
                "dimension " + std::to_string(n) + " exceeds the configured limit " + std::to_string(cap));
  }
}

/// Necessary conditions for the family. Returns the names of failed screens.
inline std::vector<std::string> screen_failures(const RationalMatrix& m, HullFamily family) {
  std::vector<std::string> failed;
  if (!check_symmetric(m)) {
    failed.emplace_back("symmetric");
    return failed;
  }
  if (generator_kind(family) == GeneratorKind::Boolean) {
    auto report = check_dnn(m);
    if (!report.nonnegative) failed.emplace_back("nonnegative");
    if (!report.psd) failed.emplace_back("psd");
    return failed;
  }
  if (family != HullFamily::CutCone) {
    bool unit = true;
    bool bounded = true;
    for (std::size_t i = 0; i < m.dim(); ++i) {
      if (m(i, i) != 1) unit = false;
      for (std::size_t j = 0; j < m.dim(); ++j)
        if (m(i, j) < -1 || m(i, j) > 1) bounded = false;
    }
    if (!unit) failed.emplace_back("unit-diagonal");
    if (!bounded) failed.emplace_back("entries-in-[-1,1]");
  }
  if (!check_psd(m).psd) failed.emplace_back("psd");
  return failed;
}

/// Upper-triangle entry (i, j), i <= j, to its row in a decomposition system.
inline std::size_t entry_row(std::size_t n, std::size_t i, std::size_t j) {
  return i * n - i * (i + 1) / 2 + j;
}

/// The system sum_k p_k G^k = m over `ids`, one row per entry i <= j, plus
/// sum p = `weight_sum` when given.
inline LinearSystem decomposition_system(const RationalMatrix& m, GeneratorKind kind,
                                         const std::vector<std::uint64_t>& ids,
                                         const std::optional<Rational>& weight_sum) {
  const std::size_t n = m.dim();
  const std::size_t entries = n * (n + 1) / 2;
  LinearSystem sys(entries + (weight_sum ? 1 : 0), ids.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) sys.b[entry_row(n, i, j)] = m(i, j);
  for (std::size_t c = 0; c < ids.size(); ++c) {
    const std::uint64_t k = ids[c];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const bool bi = (k >> i) & 1u;
        const bool bj = (k >> j) & 1u;
        int v;
        if (kind == GeneratorKind::Boolean) {
          v = (bi && bj) ? 1 : 0;
        } else {
          v = (bi == bj) ? 1 : -1;
        }
        if (v != 0) sys.at(entry_row(n, i, j), c) = v;
      }
    }
    if (weight_sum) sys.at(entries, c) = 1;
  }
  if (weight_sum) sys.b[entries] = *weight_sum;
  return sys;
}

inline DecompositionCertificate certificate_from(std::size_t n, GeneratorKind kind,
                                                 const std::vector<std::uint64_t>& ids,
                                                 const std::vector<Rational>& p) {
  DecompositionCertificate cert{n, kind, {}};
  for (std::size_t c = 0; c < ids.size(); ++c)
    if (p[c] > 0) cert.weights.emplace(ids[c], p[c]);
  return cert;
}

/// Candidate generator ids for a family, ascending. The zero generator appears
/// only for COR and rho*COR, where it absorbs weight in the sum constraint.
inline std::vector<std::uint64_t> family_generators(const RationalMatrix& m, HullFamily family) {
  const GeneratorKind kind = generator_kind(family);
  std::vector<std::uint64_t> ids = admissible_generators(m, kind);
  if (family == HullFamily::CorrPolytope || family == HullFamily::ScaledCorrPolytope) {
    ids.insert(ids.begin(), 0);
  }
  if (family == HullFamily::NormalizedCutPolytope) {
    // Representative 0 is y = -1, the all-ones matrix.
    ids.erase(ids.begin());
  }
  return ids;
}

inline MembershipResult decide_membership(const RationalMatrix& m, const HullSpec& spec,
                                          const SolveOptions& opts = {}) {
  enforce_cap(m.dim(), opts);
  if (m.dim() == 0) throw Error(ErrorCode::NonSquare, "empty matrix");
  MembershipResult result;
  auto failed = screen_failures(m, spec.family);
  if (!failed.empty()) {
    result.rejection = Rejection{RejectionKind::FailedScreen, std::move(failed)};
    return result;
  }
  const GeneratorKind kind = generator_kind(spec.family);
  const auto ids = family_generators(m, spec.family);
  const auto sys = decomposition_system(m, kind, ids, spec.weight_sum());
  const auto outcome = lp_feasible(sys);
  if (outcome.status != LpStatus::Feasible) {
    result.rejection = Rejection{RejectionKind::LpInfeasible, {}};
    return result;
  }
  result.member = true;
  result.certificate = certificate_from(m.dim(), kind, ids, *outcome.witness);
  return result;
}

/// Membership in rho*COR(n), solved directly with sum p = rho.
inline MembershipResult decide_scaled_cor(const RationalMatrix& m, const Rational& rho,
                                          const SolveOptions& opts = {}) {
  if (rho <= 0) throw Error(ErrorCode::NonPositiveRho, "rho = " + to_string(rho) + " is not positive");
  return decide_membership(m, HullSpec(HullFamily::ScaledCorrPolytope, rho), opts);
}

/// True iff the certificate recomposes `m` exactly and meets the family's side
/// constraint (and excluded-generator rule).
inline bool verify_certificate(const RationalMatrix& m, const DecompositionCertificate& cert, const HullSpec& spec) {
  if (cert.n != m.dim() || cert.kind != generator_kind(spec.family)) return false;
  for (const auto& [k, w] : cert.weights) {
    if (w <= 0) return false;
    if (k > GeneratorId::max_id(cert.n)) return false;
    if (cert.kind == GeneratorKind::Cut && (k >> (cert.n - 1)) != 0) return false;
    if (k == 0 && (spec.family == HullFamily::NormalizedCorrPolytope ||
                   spec.family == HullFamily::NormalizedCutPolytope)) {
      return false;
    }
  }
  if (auto s = spec.weight_sum(); s && cert.total() != *s) return false;
  return cert.recompose() == m;
}

/// Completely positive factor of a CONX certificate, kept symbolic: each term is
/// (p_k, x_k) with column sqrt(p_k) x_k, so sum p_k x_k x_k^T is the matrix.
inline std::vector<std::pair<Rational, BooleanVector>> cp_witness(const DecompositionCertificate& cert) {
  if (cert.kind != GeneratorKind::Boolean) {
    throw Error(ErrorCode::InvalidCertificate, "CP witness needs boolean generators");
  }
  std::vector<std::pair<Rational, BooleanVector>> out;
  for (const auto& [k, w] : cert.weights) {
    if (w <= 0) throw Error(ErrorCode::InvalidCertificate, "weight of generator " + std::to_string(k) + " is not positive");
    if (cert.n == 0 || k > GeneratorId::max_id(cert.n)) {
      throw Error(ErrorCode::InvalidCertificate, "generator " + std::to_string(k) + " out of range");
    }
    if (k == 0) continue;
    out.emplace_back(w, boolean_vector(GeneratorId(cert.n, k)));
  }
  return out;
}

inline std::vector<std::pair<Rational, BooleanVector>> cp_witness(const DecompositionCertificate& cert,
                                                                  const RationalMatrix& m) {
  if (!verify_certificate(m, cert, HullSpec(HullFamily::CorrCone))) {
    throw Error(ErrorCode::InvalidCertificate, "certificate does not recompose the matrix");
  }
  return cp_witness(cert);
}

}  // namespace corrpoly
