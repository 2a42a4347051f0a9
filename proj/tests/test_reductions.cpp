#include <gtest/gtest.h>

#include <random>

#include "corrpoly/ranks.hpp"
#include "corrpoly/reductions.hpp"
#include "oracles.hpp"

using namespace corrpoly;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::ParseError;
}

Rational q(long a, long b = 1) { return make_rational(a, b); }

}  // namespace

TEST(LiftCorToConx, Examples) {
  EXPECT_EQ(lift_cor_to_conx(RationalMatrix({{1}})), RationalMatrix::constant(2, 1));
  EXPECT_EQ(lift_cor_to_conx(RationalMatrix({{q(1, 2), 0}, {0, q(1, 2)}})),
            RationalMatrix({{q(1, 2), 0, q(1, 2)}, {0, q(1, 2), q(1, 2)}, {q(1, 2), q(1, 2), 1}}));
  EXPECT_EQ(lift_cor_to_conx(RationalMatrix({{0}})), RationalMatrix({{0, 0}, {0, 1}}));
  EXPECT_EQ(code_of([] { lift_cor_to_conx(RationalMatrix()); }), ErrorCode::NonSquare);
}

TEST(LiftCorToConx, BorderIsDiagonal) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + t % 4;
    const auto z = oracle::random_combination(rng, n, 3, Rational(1));
    const auto g = lift_cor_to_conx(z);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(g(i, n), z(i, i));
      EXPECT_EQ(g(n, i), z(i, i));
    }
    EXPECT_EQ(g(n, n), 1);
  }
}

TEST(LiftToNormalized, Examples) {
  EXPECT_EQ(lift_to_normalized(RationalMatrix({{1}})), RationalMatrix::constant(2, 1));
  EXPECT_EQ(lift_to_normalized(RationalMatrix({{q(1, 2), 0}, {0, q(1, 2)}})),
            RationalMatrix({{1, q(1, 2), q(1, 2)}, {q(1, 2), q(1, 2), 0}, {q(1, 2), 0, q(1, 2)}}));
  EXPECT_EQ(lift_to_normalized(RationalMatrix::zero(2)), RationalMatrix({{1, 0, 0}, {0, 0, 0}, {0, 0, 0}}));
}

TEST(CorToCut, Examples) {
  EXPECT_EQ(cor_to_cut(RationalMatrix({{1}})), RationalMatrix::constant(2, 1));
  EXPECT_EQ(cor_to_cut(RationalMatrix({{0}})), RationalMatrix({{1, -1}, {-1, 1}}));
  EXPECT_EQ(cor_to_cut(RationalMatrix::constant(2, 1)), RationalMatrix::constant(3, 1));
}

TEST(CutToCor, Examples) {
  EXPECT_EQ(cut_to_cor(RationalMatrix::constant(3, 1)), RationalMatrix::constant(2, 1));
  EXPECT_EQ(cut_to_cor(RationalMatrix({{1, -1}, {-1, 1}})), RationalMatrix({{0}}));
  EXPECT_EQ(code_of([] { cut_to_cor(RationalMatrix({{2, 0}, {0, 1}})); }), ErrorCode::NonUnitDiagonal);
  EXPECT_EQ(code_of([] { cut_to_cor(RationalMatrix({{1}})); }), ErrorCode::NonSquare);
}

TEST(CutToCor, RoundTrip) {
  std::mt19937_64 rng(20);
  std::uniform_int_distribution<int> num(-5, 5), den(1, 6);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 1 + t % 4;
    RationalMatrix x(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) x(i, j) = x(j, i) = make_rational(num(rng), den(rng));
    EXPECT_EQ(cut_to_cor(cor_to_cut(x)), x);
  }
}

TEST(CorToCut, GeneratorsMapToCutGenerators) {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::uint64_t k = 0; k <= GeneratorId::max_id(n); ++k) {
      // x -> y = (1, 2x - 1), the cut vector whose bits are (1, x).
      const auto y = cor_to_cut(generator_matrix(GeneratorId(n, k)));
      EXPECT_EQ(y, cut_generator(GeneratorId(n + 1, (k << 1) | 1)));
    }
  }
}

TEST(CorToCut, PreservesMembership) {
  std::mt19937_64 rng(33);
  std::uniform_int_distribution<int> coin(0, 1), pick(0, 3);
  const Rational vals[] = {q(0), q(1, 4), q(1, 2), q(1)};
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + t % 3;
    RationalMatrix x(n);
    if (coin(rng)) {
      x = oracle::random_combination(rng, n, 1 + t % 4, Rational(1));
    } else {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) x(i, j) = x(j, i) = vals[pick(rng)];
    }
    EXPECT_EQ(decide_membership(x, HullSpec(HullFamily::CorrPolytope)).member,
              decide_membership(cor_to_cut(x), HullSpec(HullFamily::CutPolytope)).member)
        << x;
  }
}

TEST(X3C, ReductionExamples) {
  const auto one = x3c_to_rank_instance({3, {{1, 2, 3}}});
  EXPECT_EQ(one.matrix, RationalMatrix::constant(4, 1));
  EXPECT_EQ(*one.threshold, 1);
  EXPECT_EQ(one.family, HullFamily::CorrCone);

  const auto two = x3c_to_rank_instance({6, {{1, 2, 3}, {4, 5, 6}}});
  ASSERT_EQ(two.matrix.dim(), 7u);
  EXPECT_EQ(two.matrix(6, 6), 2);
  EXPECT_EQ(*two.threshold, 2);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(two.matrix(i, 6), 1);
    for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(two.matrix(i, j), Rational((i < 3) == (j < 3) ? 1 : 0));
  }
}

TEST(X3C, ValidationErrors) {
  try {
    x3c_to_rank_instance({6, {{1, 2, 3}, {1, 2, 4}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotLinear);
    EXPECT_NE(std::string(e.what()).find("{1,2}"), std::string::npos);
  }
  EXPECT_EQ(code_of([] { x3c_to_rank_instance({4, {{1, 2, 3}}}); }), ErrorCode::BadUniverseSize);
  EXPECT_EQ(code_of([] { x3c_to_rank_instance({0, {}}); }), ErrorCode::BadUniverseSize);
  EXPECT_EQ(code_of([] { x3c_to_rank_instance({3, {{1, 1, 2}}}); }), ErrorCode::InvalidInstance);
  EXPECT_EQ(code_of([] { x3c_to_rank_instance({3, {{1, 2, 4}}}); }), ErrorCode::InvalidInstance);
}

TEST(X3C, SolveExamples) {
  EXPECT_TRUE(solve_x3c({3, {{1, 2, 3}}}));
  EXPECT_FALSE(solve_x3c({6, {{1, 2, 3}, {3, 4, 5}}}));
  EXPECT_TRUE(solve_x3c({6, {{1, 2, 3}, {4, 5, 6}}}));
  EXPECT_FALSE(solve_x3c({3, {}}));
}

TEST(X3C, SolverMatchesOracleAndRankDecision) {
  std::mt19937_64 rng(8);
  std::vector<std::array<std::size_t, 3>> all;
  for (std::size_t a = 1; a <= 6; ++a)
    for (std::size_t b = a + 1; b <= 6; ++b)
      for (std::size_t c = b + 1; c <= 6; ++c) all.push_back({a, b, c});
  int checked = 0;
  for (int t = 0; t < 400 && checked < 40; ++t) {
    std::shuffle(all.begin(), all.end(), rng);
    X3CInstance inst{6, {}};
    for (const auto& tri : all) {
      inst.triples.push_back(tri);
      try {
        validate(inst);
      } catch (const Error&) {
        inst.triples.pop_back();
      }
      if (inst.triples.size() == 1 + static_cast<std::size_t>(t % 4)) break;
    }
    const bool cover = solve_x3c(inst);
    EXPECT_EQ(cover, oracle::exact_cover(6, inst.triples));
    const auto red = x3c_to_rank_instance(inst);
    const auto r = rank_decision(red.matrix, HullFamily::CorrCone, 2);
    const bool agree = r.status == RankStatus::Answered && *r.threshold_met;
    EXPECT_EQ(cover, agree);
    ++checked;
  }
}

TEST(FCC, ReductionExamples) {
  const auto k1 = fcc_to_relaxed_rank_instance({1, {}, Rational(1)});
  EXPECT_EQ(k1.matrix, RationalMatrix({{q(1, 2), q(1, 4)}, {q(1, 4), q(1, 4)}}));
  EXPECT_EQ(*k1.threshold, q(7, 4));

  const auto k2 = fcc_to_relaxed_rank_instance({2, {{1, 2}}, Rational(1)});
  EXPECT_EQ(k2.matrix, RationalMatrix({{q(1, 3), q(1, 9), q(1, 9)}, {q(1, 9), q(1, 3), q(1, 9)}, {q(1, 9), q(1, 9), q(1, 9)}}));
  EXPECT_EQ(*k2.threshold, q(14, 9));

  const auto e2 = fcc_to_relaxed_rank_instance({2, {}, Rational(2)});
  EXPECT_EQ(e2.matrix(0, 1), 0);
  EXPECT_EQ(e2.matrix(0, 2), q(1, 9));
  EXPECT_EQ(e2.matrix(1, 2), q(1, 9));
  EXPECT_EQ(e2.matrix(2, 2), q(2, 9));
  EXPECT_EQ(*e2.threshold, q(16, 9));
}

TEST(FCC, ValidationErrors) {
  EXPECT_EQ(code_of([] { fcc_to_relaxed_rank_instance({1, {}, Rational(0)}); }), ErrorCode::NonPositiveBudget);
  EXPECT_EQ(code_of([] { fcc_to_relaxed_rank_instance({2, {{1, 3}}, Rational(1)}); }), ErrorCode::InvalidInstance);
  EXPECT_EQ(code_of([] { fcc_to_relaxed_rank_instance({2, {{1, 1}}, Rational(1)}); }), ErrorCode::InvalidInstance);
  EXPECT_EQ(code_of([] { fcc_to_relaxed_rank_instance({2, {{1, 2}, {2, 1}}, Rational(1)}); }),
            ErrorCode::InvalidInstance);
}

TEST(FCC, SolveExamples) {
  const auto k2 = solve_fcc({2, {{1, 2}}, Rational(1)});
  EXPECT_TRUE(k2.within_budget);
  EXPECT_EQ(k2.optimum, 1);
  const auto path = solve_fcc({3, {{1, 2}, {2, 3}}, q(3, 2)});
  EXPECT_FALSE(path.within_budget);
  EXPECT_EQ(path.optimum, 2);
  const auto tri = solve_fcc({3, {{1, 2}, {2, 3}, {1, 3}}, Rational(1)});
  EXPECT_TRUE(tri.within_budget);
  EXPECT_EQ(tri.optimum, 1);
}

TEST(FCC, FiveCycleIsFractional) {
  FCCInstance c5{5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}}, Rational(5, 2)};
  const auto r = solve_fcc(c5);
  EXPECT_EQ(r.optimum, q(5, 2));
  EXPECT_EQ(r.optimum, oracle::fractional_clique_cover(5, c5.edges));
  EXPECT_TRUE(r.within_budget);
}

TEST(FCC, ReductionMatchesRelaxedRank) {
  for (std::uint32_t mask = 0; mask < 8; ++mask) {
    const std::pair<std::size_t, std::size_t> pairs[] = {{1, 2}, {1, 3}, {2, 3}};
    FCCInstance inst{3, {}, Rational(1)};
    for (int e = 0; e < 3; ++e)
      if ((mask >> e) & 1u) inst.edges.push_back(pairs[e]);
    const Rational opt = oracle::fractional_clique_cover(3, inst.edges);
    for (const Rational& t : std::vector<Rational>{opt, opt - q(1, 4), opt + q(1, 4)}) {
      inst.budget = t;
      const auto red = fcc_to_relaxed_rank_instance(inst);
      EXPECT_EQ(solve_fcc(inst).within_budget, relaxed_rank_decision(red.matrix, *red.threshold).holds);
    }
  }
}
