#include <gtest/gtest.h>

#include <random>

#include "drcc/simplex.hpp"
#include "drcc/solver.hpp"

using namespace drcc;

namespace {
SparseRow row(std::vector<std::size_t> idx, std::vector<double> val, double lo, double hi) {
  return SparseRow{std::move(idx), std::move(val), lo, hi};
}
}  // namespace

TEST(Simplex, SingleBoundRow) {
  SimplexEngine lp({1.0}, {-kInf}, {kInf}, {row({0}, {1.0}, 3.0, kInf)});
  ASSERT_EQ(lp.solve(), LpStatus::optimal);
  EXPECT_NEAR(lp.objective(), 3.0, 1e-12);
}

TEST(Simplex, RelaxedKnapsack) {
  SimplexEngine lp({-1.0, -1.0}, {0, 0}, {1, 1}, {row({0, 1}, {1.0, 1.0}, -kInf, 1.5)});
  ASSERT_EQ(lp.solve(), LpStatus::optimal);
  EXPECT_NEAR(lp.objective(), -1.5, 1e-12);
}

// max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6) with duals (0, 1.5, 1).
TEST(Simplex, TextbookDualsAndComplementarity) {
  SimplexEngine lp({-3.0, -5.0}, {0, 0}, {kInf, kInf},
                   {row({0}, {1.0}, -kInf, 4.0), row({1}, {2.0}, -kInf, 12.0), row({0, 1}, {3.0, 2.0}, -kInf, 18.0)});
  ASSERT_EQ(lp.solve(), LpStatus::optimal);
  EXPECT_NEAR(lp.objective(), -36.0, 1e-10);
  EXPECT_NEAR(lp.value(0), 2.0, 1e-10);
  EXPECT_NEAR(lp.value(1), 6.0, 1e-10);
  auto y = lp.duals();
  ASSERT_EQ(y.size(), 3u);
  EXPECT_NEAR(std::abs(y[0]), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(y[1]), 1.5, 1e-10);
  EXPECT_NEAR(std::abs(y[2]), 1.0, 1e-10);
}

TEST(Simplex, DetectsInfeasibleAndUnbounded) {
  SimplexEngine bad({0.0}, {0}, {1}, {row({0}, {1.0}, 2.0, kInf)});
  EXPECT_EQ(bad.solve(), LpStatus::infeasible);
  SimplexEngine open({-1.0, 0.0}, {0, 0}, {kInf, kInf}, {row({0, 1}, {1.0, -1.0}, -kInf, 1.0)});
  EXPECT_EQ(open.solve(), LpStatus::unbounded);
}

TEST(Simplex, ReoptimizesAfterBoundChangeAndNewRow) {
  SimplexEngine lp({-1.0, -2.0}, {0, 0}, {3, 3}, {row({0, 1}, {1.0, 1.0}, -kInf, 4.0)});
  ASSERT_EQ(lp.solve(), LpStatus::optimal);
  EXPECT_NEAR(lp.objective(), -7.0, 1e-12);
  lp.set_bounds(1, 0, 2);
  ASSERT_EQ(lp.solve(), LpStatus::optimal);
  EXPECT_NEAR(lp.objective(), -6.0, 1e-12);
  lp.add_row(row({0, 1}, {1.0, 3.0}, -kInf, 6.0));
  ASSERT_EQ(lp.solve(), LpStatus::optimal);
  // max x + 2y, x + y <= 4, x + 3y <= 6, y <= 2, x <= 3 -> x = 3, y = 1.
  EXPECT_NEAR(lp.objective(), -5.0, 1e-10);
  lp.set_bounds(1, 0, 3);
  lp.set_bounds(0, 0, 0);
  ASSERT_EQ(lp.solve(), LpStatus::optimal);
  EXPECT_NEAR(lp.objective(), -4.0, 1e-10);
}

TEST(Simplex, EqualityRowsAndFreeColumns) {
  // min x0 + x1 + x2 with x0 - x1 = 1, x1 + x2 = 2, x free, x2 in [0, 5]
  SimplexEngine lp({1, 1, 1}, {-kInf, -kInf, 0}, {kInf, kInf, 5},
                   {row({0, 1}, {1, -1}, 1, 1), row({1, 2}, {1, 1}, 2, 2), row({0}, {1}, -10, kInf)});
  ASSERT_EQ(lp.solve(), LpStatus::optimal);
  // x1 = 2 - x2, x0 = 3 - x2: objective 5 - x2, minimized at x2 = 5.
  EXPECT_NEAR(lp.objective(), 0.0, 1e-10);
}

// Strong duality on random bounded LPs: objective equals b.y + reduced-cost
// contributions of the bounds.
TEST(Simplex, RandomLpsMatchDualObjective) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 6 + trial % 5, m = 4 + trial % 4;
    std::vector<double> c(n), lo(n, -2.0), hi(n, 3.0);
    for (double& v : c) v = U(rng);
    std::vector<SparseRow> rows;
    for (std::size_t i = 0; i < m; ++i) {
      SparseRow r;
      for (std::size_t j = 0; j < n; ++j)
        if (U(rng) > -0.3) {
          r.idx.push_back(j);
          r.val.push_back(U(rng));
        }
      r.lo = -1.0 - std::abs(U(rng));
      r.hi = i % 3 == 0 ? r.lo : 1.0 + std::abs(U(rng));
      if (i % 3 == 0) r.lo = r.hi = 0.1 * U(rng);
      rows.push_back(r);
    }
    SimplexEngine lp(c, lo, hi, rows);
    const LpStatus st = lp.solve();
    if (st == LpStatus::infeasible) continue;
    ASSERT_EQ(st, LpStatus::optimal) << "trial " << trial;
    const auto x = lp.primal();
    const auto y = lp.duals();
    // Reduced costs d = c - A^T y; dual objective uses whichever bound is active.
    double dual_obj = 0.0;
    std::vector<double> d = c;
    for (std::size_t i = 0; i < m; ++i) {
      double act = 0.0;
      for (std::size_t k = 0; k < rows[i].idx.size(); ++k) {
        d[rows[i].idx[k]] -= rows[i].val[k] * y[i];
        act += rows[i].val[k] * x[rows[i].idx[k]];
      }
      EXPECT_GE(act, rows[i].lo - 1e-8);
      EXPECT_LE(act, rows[i].hi + 1e-8);
      dual_obj += y[i] * act;
    }
    double primal = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      primal += c[j] * x[j];
      dual_obj += d[j] * x[j];
      if (d[j] > 1e-8) {
        EXPECT_NEAR(x[j], lo[j], 1e-8);
      }
      if (d[j] < -1e-8) {
        EXPECT_NEAR(x[j], hi[j], 1e-8);
      }
    }
    EXPECT_NEAR(primal, lp.objective(), 1e-9);
    EXPECT_NEAR(dual_obj, primal, 1e-8);
  }
}
