#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "nslice/lp.hpp"

namespace nslice::testing {

// Deterministic draws (implementation-defined <random> distributions would
// make the frozen expected values fragile).
inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}
inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return lo + (static_cast<double>(rng() >> 11) * 0x1.0p-53) * (hi - lo);
}

// Independent optimum for LPs with at most 3 variables: enumerate candidate
// vertices as intersections of n active constraints chosen among rows
// (treated as equalities) and bounds, keep the feasible ones, and take the
// minimum objective. All variables must have finite lower bounds, so the
// feasible region is pointed and any finite optimum is attained at a vertex.
struct VertexOracle {
  bool feasible = false;
  double objective = 0.0;
};

inline VertexOracle enumerate_vertices(const LinearProgram& lp) {
  const int n = lp.num_vars();
  VertexOracle result;

  // Candidate hyperplanes: every row as equality, every finite bound.
  struct Plane {
    std::vector<double> a;
    double b;
  };
  std::vector<Plane> planes;
  for (int i = 0; i < lp.num_rows(); ++i) {
    Plane p;
    p.a.assign(n, 0.0);
    for (const auto& t : lp.row(i).terms) p.a[t.var] = t.coef;
    p.b = lp.row(i).rhs;
    planes.push_back(std::move(p));
  }
  for (int j = 0; j < n; ++j) {
    Plane lo;
    lo.a.assign(n, 0.0);
    lo.a[j] = 1.0;
    lo.b = lp.lower(j);
    planes.push_back(std::move(lo));
    if (lp.upper(j) != kInf) {
      Plane hi;
      hi.a.assign(n, 0.0);
      hi.a[j] = 1.0;
      hi.b = lp.upper(j);
      planes.push_back(std::move(hi));
    }
  }

  const int p = static_cast<int>(planes.size());
  std::vector<int> pick(n);
  auto feasible_point = [&](const std::vector<double>& x) {
    for (int j = 0; j < n; ++j) {
      if (x[j] < lp.lower(j) - 1e-7) return false;
      if (lp.upper(j) != kInf && x[j] > lp.upper(j) + 1e-7) return false;
    }
    for (int i = 0; i < lp.num_rows(); ++i) {
      double act = 0.0;
      for (const auto& t : lp.row(i).terms) act += t.coef * x[t.var];
      const double rhs = lp.row(i).rhs;
      switch (lp.row(i).sense) {
        case RowSense::LE:
          if (act > rhs + 1e-7) return false;
          break;
        case RowSense::GE:
          if (act < rhs - 1e-7) return false;
          break;
        case RowSense::EQ:
          if (std::abs(act - rhs) > 1e-7) return false;
          break;
      }
    }
    return true;
  };

  // Solve the n x n system for each n-subset of planes by Gaussian
  // elimination; skip singular selections.
  std::vector<int> stack;
  std::vector<double> x(n);
  auto try_subset = [&](const std::vector<int>& sel) {
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (int r = 0; r < n; ++r) {
      for (int j = 0; j < n; ++j) a[r][j] = planes[sel[r]].a[j];
      a[r][n] = planes[sel[r]].b;
    }
    for (int k = 0; k < n; ++k) {
      int piv = -1;
      double best = 1e-10;
      for (int r = k; r < n; ++r)
        if (std::abs(a[r][k]) > best) {
          best = std::abs(a[r][k]);
          piv = r;
        }
      if (piv < 0) return;
      std::swap(a[k], a[piv]);
      for (int r = 0; r < n; ++r) {
        if (r == k) continue;
        const double f = a[r][k] / a[k][k];
        if (f == 0.0) continue;
        for (int j = k; j <= n; ++j) a[r][j] -= f * a[k][j];
      }
    }
    for (int j = 0; j < n; ++j) x[j] = a[j][n] / a[j][j];
    for (int j = 0; j < n; ++j)
      if (!std::isfinite(x[j])) return;
    if (!feasible_point(x)) return;
    const double obj = lp.objective_value(x);
    if (!result.feasible || obj < result.objective) {
      result.feasible = true;
      result.objective = obj;
    }
  };

  std::vector<int> sel(n);
  auto rec = [&](auto&& self, int start, int depth) -> void {
    if (depth == n) {
      try_subset(sel);
      return;
    }
    for (int i = start; i < p; ++i) {
      sel[depth] = i;
      self(self, i + 1, depth + 1);
    }
  };
  if (n > 0) rec(rec, 0, 0);
  return result;
}

// Dual objective recomputed from the original data and the reported row
// multipliers: y.b plus the bound term of each variable's reduced cost.
inline std::optional<double> dual_objective(const LinearProgram& lp,
                                            const std::vector<double>& duals) {
  std::vector<double> d(lp.num_vars());
  for (int j = 0; j < lp.num_vars(); ++j) d[j] = lp.objective(j);
  double obj = 0.0;
  for (int i = 0; i < lp.num_rows(); ++i) {
    obj += duals[i] * lp.row(i).rhs;
    for (const auto& t : lp.row(i).terms) d[t.var] -= duals[i] * t.coef;
  }
  for (int j = 0; j < lp.num_vars(); ++j) {
    double dj = d[j];
    if (std::abs(dj) <= 1e-7) continue;
    if (dj > 0.0) {
      obj += dj * lp.lower(j);
    } else {
      if (lp.upper(j) == kInf) return std::nullopt;  // dual-infeasible duals
      obj += dj * lp.upper(j);
    }
  }
  return obj;
}

// Random LPs exercising all senses, finite and unlimited upper bounds, and a
// mix of feasible/infeasible systems.
inline LinearProgram random_lp(std::mt19937_64& rng, int max_vars,
                               int max_rows) {
  LinearProgram lp;
  const int n = uniform_int(rng, 1, max_vars);
  const int m = uniform_int(rng, 1, max_rows);
  for (int j = 0; j < n; ++j) {
    const double lo = uniform_int(rng, -3, 3);
    const bool bounded = uniform_int(rng, 0, 2) > 0;
    const double hi = bounded ? lo + uniform_int(rng, 0, 8) : kInf;
    lp.add_variable(lo, hi, uniform_int(rng, -5, 5));
  }
  for (int i = 0; i < m; ++i) {
    std::vector<LinearProgram::Term> terms;
    for (int j = 0; j < n; ++j) {
      if (uniform_int(rng, 0, 2) == 0) continue;
      const int c = uniform_int(rng, -4, 4);
      if (c != 0) terms.push_back({j, static_cast<double>(c)});
    }
    const auto sense = static_cast<RowSense>(uniform_int(rng, 0, 2));
    lp.add_row(sense, uniform_int(rng, -10, 10), std::move(terms));
  }
  return lp;
}

}  // namespace nslice::testing
