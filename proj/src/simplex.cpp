#include "nslice/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

namespace nslice {

namespace {

struct SparseCol {
  std::vector<int> idx;
  std::vector<double> val;
};

enum : std::uint8_t { kAtLower = 0, kAtUpper = 1, kBasic = 2 };

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SimplexConfig& cfg)
      : lp_(lp), cfg_(cfg), m_(lp.num_rows()), nstruct_(lp.num_vars()) {}

  LpOutcome run();

 private:
  void build();
  void init_basis();
  bool refactor();          // false when the basis matrix is singular
  void recompute_basics();

  void btran(const std::vector<double>& costs, std::vector<double>& y) const;
  void ftran(const SparseCol& col);
  double reduced_cost(int j, const std::vector<double>& y) const;

  int price(const std::vector<double>& y) const;
  // Ratio test along the entering direction. Returns the step, the blocking
  // basis row (-1 for a bound flip), and whether the leaving variable ends
  // at its lower bound. A +inf step means the direction is unblocked.
  double ratio_test(int q, int& leave_row, bool& leave_to_lower) const;
  void apply_flip(int q, double step);
  void apply_pivot(int q, int leave_row, double step, bool leave_to_lower);

  double infeasibility_sum() const;
  bool primal_feasible(double* worst = nullptr) const;
  LpOutcome extract_infeasible();
  LpOutcome extract_optimal();
  LpOutcome extract_unbounded(int q);
  LpOutcome stalled();

  enum class LoopExit { Converged, Unbounded, IterLimit, Breakdown };
  LoopExit iterate();

  const LinearProgram& lp_;
  SimplexConfig cfg_;
  int m_, nstruct_, ntotal_ = 0, first_art_ = 0;
  std::vector<SparseCol> cols_;
  std::vector<double> lb_, ub_;
  std::vector<double> cost_;       // active phase costs
  std::vector<double> cost_real_;  // phase-two costs
  std::vector<double> rhs_;
  bool phase_one_ = false;

  std::vector<int> basis_;      // row -> variable
  std::vector<std::uint8_t> state_;
  std::vector<double> x_;
  std::vector<double> binv_;    // m*m, column-major
  std::vector<double> w_;       // ftran result
  std::vector<int> w_nnz_;
  std::vector<double> y_;
  int unbounded_q_ = -1;
  int unbounded_sigma_ = 1;

  long iters_ = 0;
  int degen_run_ = 0;
  bool bland_ = false;
  bool fresh_factor_ = false;
};

void Simplex::build() {
  cols_.assign(nstruct_, {});
  lb_.resize(nstruct_);
  ub_.resize(nstruct_);
  cost_real_.resize(nstruct_);
  rhs_.resize(m_);
  for (int j = 0; j < nstruct_; ++j) {
    lb_[j] = lp_.lower(j);
    ub_[j] = lp_.upper(j);
    cost_real_[j] = lp_.objective(j);
  }
  for (int i = 0; i < m_; ++i) {
    const auto& row = lp_.row(i);
    rhs_[i] = row.rhs;
    for (const auto& t : row.terms) {
      cols_[t.var].idx.push_back(i);
      cols_[t.var].val.push_back(t.coef);
    }
  }
  // One logical column per row; its bounds encode the row sense.
  for (int i = 0; i < m_; ++i) {
    SparseCol slack;
    slack.idx.push_back(i);
    slack.val.push_back(1.0);
    cols_.push_back(std::move(slack));
    switch (lp_.row(i).sense) {
      case RowSense::LE:
        lb_.push_back(0.0);
        ub_.push_back(kInf);
        break;
      case RowSense::GE:
        lb_.push_back(-kInf);
        ub_.push_back(0.0);
        break;
      case RowSense::EQ:
        lb_.push_back(0.0);
        ub_.push_back(0.0);
        break;
    }
    cost_real_.push_back(0.0);
  }
  first_art_ = nstruct_ + m_;
  ntotal_ = first_art_;
}

void Simplex::init_basis() {
  state_.assign(ntotal_, kAtLower);
  x_.assign(ntotal_, 0.0);
  for (int j = 0; j < ntotal_; ++j) {
    if (lb_[j] == -kInf) {
      state_[j] = kAtUpper;
      x_[j] = ub_[j];
    } else {
      x_[j] = lb_[j];
    }
  }

  std::vector<double> residual = rhs_;
  for (int j = 0; j < nstruct_; ++j) {
    if (x_[j] == 0.0) continue;
    const SparseCol& col = cols_[j];
    for (size_t k = 0; k < col.idx.size(); ++k)
      residual[col.idx[k]] -= col.val[k] * x_[j];
  }

  basis_.assign(m_, -1);
  std::vector<double> diag(m_, 1.0);
  for (int i = 0; i < m_; ++i) {
    const int slack = nstruct_ + i;
    const double r = residual[i];
    bool slack_hosts = false;
    switch (lp_.row(i).sense) {
      case RowSense::LE:
        slack_hosts = r >= -1e-11;
        break;
      case RowSense::GE:
        slack_hosts = r <= 1e-11;
        break;
      case RowSense::EQ:
        slack_hosts = std::abs(r) <= 1e-11;
        break;
    }
    if (slack_hosts) {
      basis_[i] = slack;
      state_[slack] = kBasic;
      x_[slack] = r;
    } else {
      const double sign = r >= 0.0 ? 1.0 : -1.0;
      SparseCol art;
      art.idx.push_back(i);
      art.val.push_back(sign);
      cols_.push_back(std::move(art));
      lb_.push_back(0.0);
      ub_.push_back(kInf);
      cost_real_.push_back(0.0);
      const int a = ntotal_++;
      basis_[i] = a;
      state_.push_back(kBasic);
      x_.push_back(std::abs(r));
      diag[i] = sign;
    }
  }

  binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i) binv_[static_cast<size_t>(i) * m_ + i] = diag[i];
  w_.assign(m_, 0.0);
  y_.assign(m_, 0.0);
  fresh_factor_ = true;

  phase_one_ = ntotal_ > first_art_;
  cost_.assign(ntotal_, 0.0);
  if (phase_one_) {
    for (int j = first_art_; j < ntotal_; ++j) cost_[j] = 1.0;
  } else {
    cost_ = cost_real_;
  }
}

bool Simplex::refactor() {
  // Dense inversion of the basis matrix with partial pivoting; row-major
  // scratch so the elimination runs on contiguous memory.
  const size_t mm = static_cast<size_t>(m_);
  std::vector<double> a(mm * mm, 0.0), inv(mm * mm, 0.0);
  for (int r = 0; r < m_; ++r) inv[static_cast<size_t>(r) * m_ + r] = 1.0;
  for (int r = 0; r < m_; ++r) {
    const SparseCol& col = cols_[basis_[r]];
    for (size_t k = 0; k < col.idx.size(); ++k)
      a[static_cast<size_t>(col.idx[k]) * m_ + r] = col.val[k];
  }
  for (int k = 0; k < m_; ++k) {
    int p = k;
    double best = std::abs(a[static_cast<size_t>(k) * m_ + k]);
    for (int i = k + 1; i < m_; ++i) {
      const double v = std::abs(a[static_cast<size_t>(i) * m_ + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best < 1e-12) return false;
    if (p != k) {
      for (int j = 0; j < m_; ++j) {
        std::swap(a[static_cast<size_t>(p) * m_ + j],
                  a[static_cast<size_t>(k) * m_ + j]);
        std::swap(inv[static_cast<size_t>(p) * m_ + j],
                  inv[static_cast<size_t>(k) * m_ + j]);
      }
    }
    double* ak = &a[static_cast<size_t>(k) * m_];
    double* ik = &inv[static_cast<size_t>(k) * m_];
    const double f = 1.0 / ak[k];
    for (int j = 0; j < m_; ++j) {
      ak[j] *= f;
      ik[j] *= f;
    }
    for (int i = 0; i < m_; ++i) {
      if (i == k) continue;
      const double g = a[static_cast<size_t>(i) * m_ + k];
      if (g == 0.0) continue;
      double* ai = &a[static_cast<size_t>(i) * m_];
      double* ii = &inv[static_cast<size_t>(i) * m_];
      for (int j = k; j < m_; ++j) ai[j] -= g * ak[j];
      for (int j = 0; j < m_; ++j) ii[j] -= g * ik[j];
    }
  }
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j)
      binv_[static_cast<size_t>(j) * m_ + i] = inv[static_cast<size_t>(i) * m_ + j];
  fresh_factor_ = true;
  return true;
}

void Simplex::recompute_basics() {
  std::vector<double> residual = rhs_;
  for (int j = 0; j < ntotal_; ++j) {
    if (state_[j] == kBasic || x_[j] == 0.0) continue;
    const SparseCol& col = cols_[j];
    for (size_t k = 0; k < col.idx.size(); ++k)
      residual[col.idx[k]] -= col.val[k] * x_[j];
  }
  std::vector<double> xb(m_, 0.0);
  for (int j = 0; j < m_; ++j) {
    const double r = residual[j];
    if (r == 0.0) continue;
    const double* col = &binv_[static_cast<size_t>(j) * m_];
    for (int i = 0; i < m_; ++i) xb[i] += r * col[i];
  }
  for (int i = 0; i < m_; ++i) x_[basis_[i]] = xb[i];
}

void Simplex::btran(const std::vector<double>& costs,
                    std::vector<double>& y) const {
  // y^T = c_B^T B^{-1}; exploit sparsity of the basic cost vector.
  std::vector<std::pair<int, double>> nz;
  for (int i = 0; i < m_; ++i) {
    const double c = costs[basis_[i]];
    if (c != 0.0) nz.emplace_back(i, c);
  }
  y.assign(m_, 0.0);
  if (nz.empty()) return;
  for (int j = 0; j < m_; ++j) {
    const double* col = &binv_[static_cast<size_t>(j) * m_];
    double acc = 0.0;
    for (const auto& [i, c] : nz) acc += c * col[i];
    y[j] = acc;
  }
}

void Simplex::ftran(const SparseCol& col) {
  std::memset(w_.data(), 0, sizeof(double) * m_);
  for (size_t k = 0; k < col.idx.size(); ++k) {
    const double a = col.val[k];
    const double* bc = &binv_[static_cast<size_t>(col.idx[k]) * m_];
    for (int i = 0; i < m_; ++i) w_[i] += a * bc[i];
  }
  w_nnz_.clear();
  for (int i = 0; i < m_; ++i)
    if (w_[i] != 0.0) w_nnz_.push_back(i);
}

double Simplex::reduced_cost(int j, const std::vector<double>& y) const {
  double d = cost_[j];
  const SparseCol& col = cols_[j];
  for (size_t k = 0; k < col.idx.size(); ++k)
    d -= y[col.idx[k]] * col.val[k];
  return d;
}

int Simplex::price(const std::vector<double>& y) const {
  int best = -1;
  double best_mag = cfg_.tol_dj;
  for (int j = 0; j < ntotal_; ++j) {
    if (state_[j] == kBasic || lb_[j] == ub_[j]) continue;
    if (j >= first_art_) continue;  // artificials never re-enter
    const double d = reduced_cost(j, y);
    const bool eligible = (state_[j] == kAtLower && d < -cfg_.tol_dj) ||
                          (state_[j] == kAtUpper && d > cfg_.tol_dj);
    if (!eligible) continue;
    if (bland_) return j;
    const double mag = std::abs(d);
    if (mag > best_mag) {
      best_mag = mag;
      best = j;
    }
  }
  return best;
}

double Simplex::ratio_test(int q, int& leave_row, bool& leave_to_lower) const {
  const int sigma = state_[q] == kAtLower ? 1 : -1;
  double best =
      (lb_[q] != -kInf && ub_[q] != kInf) ? ub_[q] - lb_[q] : kInf;
  leave_row = -1;
  leave_to_lower = false;
  int best_var = -1;
  for (int i : w_nnz_) {
    const double wi = w_[i];
    if (std::abs(wi) < cfg_.tol_pivot) continue;
    const int bv = basis_[i];
    const double delta = -sigma * wi;  // change of x_B[i] per unit step
    double limit;
    bool to_lower;
    if (delta < 0.0) {
      if (lb_[bv] == -kInf) continue;
      limit = (x_[bv] - lb_[bv]) / (-delta);
      to_lower = true;
    } else {
      if (ub_[bv] == kInf) continue;
      limit = (ub_[bv] - x_[bv]) / delta;
      to_lower = false;
    }
    if (limit < 0.0) limit = 0.0;
    if (limit < best || (limit == best && leave_row >= 0 && bv < best_var)) {
      best = limit;
      leave_row = i;
      best_var = bv;
      leave_to_lower = to_lower;
    }
  }
  return best;
}

void Simplex::apply_flip(int q, double step) {
  const int sigma = state_[q] == kAtLower ? 1 : -1;
  for (int i : w_nnz_) x_[basis_[i]] += -sigma * w_[i] * step;
  x_[q] = state_[q] == kAtLower ? ub_[q] : lb_[q];
  state_[q] = state_[q] == kAtLower ? kAtUpper : kAtLower;
}

void Simplex::apply_pivot(int q, int leave_row, double step,
                          bool leave_to_lower) {
  const int sigma = state_[q] == kAtLower ? 1 : -1;
  const int bv = basis_[leave_row];
  for (int i : w_nnz_) {
    if (i == leave_row) continue;
    x_[basis_[i]] += -sigma * w_[i] * step;
  }
  x_[q] += sigma * step;
  x_[bv] = leave_to_lower ? lb_[bv] : ub_[bv];
  state_[bv] = leave_to_lower ? kAtLower : kAtUpper;
  state_[q] = kBasic;
  basis_[leave_row] = q;

  const double pivot = w_[leave_row];
  for (int jc = 0; jc < m_; ++jc) {
    double* col = &binv_[static_cast<size_t>(jc) * m_];
    const double t = col[leave_row];
    if (t == 0.0) continue;
    const double f = t / pivot;
    col[leave_row] = f;
    for (int i : w_nnz_) {
      if (i != leave_row) col[i] -= f * w_[i];
    }
  }
  fresh_factor_ = false;

  if (step <= 1e-12) {
    if (++degen_run_ >= cfg_.bland_after) bland_ = true;
  } else {
    degen_run_ = 0;
    bland_ = false;
  }
}

double Simplex::infeasibility_sum() const {
  double sum = 0.0;
  for (int j = first_art_; j < ntotal_; ++j) sum += std::max(0.0, x_[j]);
  return sum;
}

bool Simplex::primal_feasible(double* worst) const {
  double w = 0.0;
  for (int j = 0; j < ntotal_; ++j) {
    const double scale = 1.0 + std::abs(x_[j]);
    if (lb_[j] != -kInf) w = std::max(w, (lb_[j] - x_[j]) / scale);
    if (ub_[j] != kInf) w = std::max(w, (x_[j] - ub_[j]) / scale);
  }
  std::vector<double> act(m_, 0.0);
  for (int j = 0; j < nstruct_; ++j) {
    if (x_[j] == 0.0) continue;
    const SparseCol& col = cols_[j];
    for (size_t k = 0; k < col.idx.size(); ++k)
      act[col.idx[k]] += col.val[k] * x_[j];
  }
  for (int i = 0; i < m_; ++i) {
    const double rhs = lp_.row(i).rhs;
    const double scale = 1.0 + std::abs(rhs);
    switch (lp_.row(i).sense) {
      case RowSense::LE:
        w = std::max(w, (act[i] - rhs) / scale);
        break;
      case RowSense::GE:
        w = std::max(w, (rhs - act[i]) / scale);
        break;
      case RowSense::EQ:
        w = std::max(w, std::abs(act[i] - rhs) / scale);
        break;
    }
  }
  if (worst) *worst = w;
  return w <= cfg_.tol_feas;
}

Simplex::LoopExit Simplex::iterate() {
  int refactor_attempts = 0;
  while (true) {
    if (iters_ >= cfg_.iter_limit) return LoopExit::IterLimit;
    if (phase_one_ && infeasibility_sum() <= 1e-12) return LoopExit::Converged;

    btran(cost_, y_);
    const int q = price(y_);
    if (q < 0) {
      // No candidate: accept only on a freshly factored basis.
      if (fresh_factor_ || refactor_attempts >= 3) return LoopExit::Converged;
      ++refactor_attempts;
      if (!refactor()) return LoopExit::Breakdown;
      recompute_basics();
      continue;
    }

    ++iters_;
    ftran(cols_[q]);
    int leave_row;
    bool to_lower;
    const double step = ratio_test(q, leave_row, to_lower);
    if (step == kInf) {
      if (!fresh_factor_ && refactor_attempts < 3) {
        ++refactor_attempts;
        if (!refactor()) return LoopExit::Breakdown;
        recompute_basics();
        continue;
      }
      unbounded_q_ = q;
      unbounded_sigma_ = state_[q] == kAtLower ? 1 : -1;
      return LoopExit::Unbounded;
    }
    if (leave_row < 0) {
      apply_flip(q, step);
    } else {
      apply_pivot(q, leave_row, step, to_lower);
    }
  }
}

LpOutcome Simplex::extract_infeasible() {
  LpOutcome out;
  out.iterations = iters_;
  for (int attempt = 0; attempt < 2; ++attempt) {
    btran(cost_, y_);  // phase-one duals
    FarkasCertificate cert;
    cert.row_multipliers.resize(m_);
    for (int i = 0; i < m_; ++i) {
      double v = -y_[i];
      // Clamp sign noise so the certificate satisfies the sign conditions
      // it provably meets in exact arithmetic.
      switch (lp_.row(i).sense) {
        case RowSense::LE:
          if (v < 0.0 && v > -1e-9) v = 0.0;
          break;
        case RowSense::GE:
          if (v > 0.0 && v < 1e-9) v = 0.0;
          break;
        case RowSense::EQ:
          break;
      }
      cert.row_multipliers[i] = v;
    }
    if (verify_certificate(lp_, cert, cfg_.tol_cert)) {
      out.status = LpStatus::Infeasible;
      out.certificate = std::move(cert);
      return out;
    }
    if (attempt == 0) {
      if (!refactor()) break;
      recompute_basics();
    }
  }
  out.status = LpStatus::Stalled;
  return out;
}

LpOutcome Simplex::extract_optimal() {
  LpOutcome out;
  out.iterations = iters_;
  if (!primal_feasible()) {
    if (!refactor()) return stalled();
    recompute_basics();
    if (!primal_feasible()) return stalled();
  }
  out.status = LpStatus::Optimal;
  out.x.assign(x_.begin(), x_.begin() + nstruct_);
  out.objective = lp_.objective_value(out.x);
  btran(cost_real_, y_);
  out.duals = y_;
  return out;
}

LpOutcome Simplex::extract_unbounded(int q) {
  LpOutcome out;
  out.iterations = iters_;
  out.status = LpStatus::Unbounded;
  out.ray.assign(nstruct_, 0.0);
  if (q < nstruct_) out.ray[q] = unbounded_sigma_;
  for (int i = 0; i < m_; ++i) {
    const int bv = basis_[i];
    if (bv < nstruct_) out.ray[bv] = -unbounded_sigma_ * w_[i];
  }
  if (!x_.empty()) {
    out.x.assign(x_.begin(), x_.begin() + nstruct_);
    out.objective = -kInf;
  }
  return out;
}

LpOutcome Simplex::stalled() {
  LpOutcome out;
  out.iterations = iters_;
  out.status = LpStatus::Stalled;
  return out;
}

LpOutcome Simplex::run() {
  build();
  init_basis();

  if (phase_one_) {
    const LoopExit exit = iterate();
    if (exit == LoopExit::IterLimit || exit == LoopExit::Breakdown ||
        exit == LoopExit::Unbounded) {
      return stalled();  // the phase-one objective is bounded below by zero
    }
    const double infeas = infeasibility_sum();
    if (infeas > cfg_.tol_feas) return extract_infeasible();
    // Pin the artificials at zero and continue with the real objective.
    for (int j = first_art_; j < ntotal_; ++j) {
      lb_[j] = 0.0;
      ub_[j] = 0.0;
    }
    phase_one_ = false;
    cost_ = cost_real_;
    degen_run_ = 0;
    bland_ = false;
  }

  const LoopExit exit = iterate();
  switch (exit) {
    case LoopExit::Converged:
      return extract_optimal();
    case LoopExit::Unbounded:
      return extract_unbounded(unbounded_q_);
    case LoopExit::IterLimit:
    case LoopExit::Breakdown:
      return stalled();
  }
  return stalled();
}

}  // namespace

LpOutcome solve_lp(const LinearProgram& lp, const SimplexConfig& config) {
  lp.check_well_formed();
  if (lp.num_rows() == 0) {
    // Pure box problem: each variable sits at its cheapest bound.
    LpOutcome out;
    out.x.resize(lp.num_vars());
    for (int j = 0; j < lp.num_vars(); ++j) {
      const double c = lp.objective(j);
      if (c >= 0.0) {
        out.x[j] = lp.lower(j);
      } else {
        if (lp.upper(j) == kInf) {
          out.status = LpStatus::Unbounded;
          out.ray.assign(lp.num_vars(), 0.0);
          out.ray[j] = 1.0;
          return out;
        }
        out.x[j] = lp.upper(j);
      }
    }
    out.status = LpStatus::Optimal;
    out.objective = lp.objective_value(out.x);
    return out;
  }
  Simplex solver(lp, config);
  return solver.run();
}

}  // namespace nslice
