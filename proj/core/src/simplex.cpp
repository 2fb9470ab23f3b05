#include "homegrid/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace homegrid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-10;  // entries smaller than this never pivot
constexpr double kRatioTie = 1e-10;  // ratio-test tie window
constexpr double kDegenEps = 1e-11;  // step sizes below this count as stalled
constexpr int kStallLimit = 60;      // stalled pivots before switching to Bland

enum : signed char { kAtLower = 0, kAtUpper = 1, kFreeNB = 2, kBasic = 3 };

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

// Bounded-variable two-phase primal simplex over the columns
//   [ structurals | one slack per row | one artificial per row ].
// The basis is kept as a dense LU factorization plus a product-form eta file,
// rebuilt every opt.refactor_interval pivots.
class Simplex {
 public:
  Simplex(const LpInstance& lp, const SimplexOptions& opt) : opt_(opt) {
    m_ = static_cast<int>(lp.rows.size());
    nstruct_ = static_cast<int>(lp.vars.size());
    ncols_ = nstruct_ + 2 * m_;

    lo_.assign(ncols_, 0.0);
    up_.assign(ncols_, 0.0);
    cost_.assign(ncols_, 0.0);
    b_.assign(m_, 0.0);

    for (int j = 0; j < nstruct_; ++j) {
      const LpVar& v = lp.vars[j];
      if (std::isnan(v.lower) || std::isnan(v.upper))
        throw std::invalid_argument("variable bound is NaN");
      lo_[j] = v.lower;
      up_[j] = v.upper;
    }
    for (const auto& [id, c] : lp.objective) {
      if (id < 0 || id >= nstruct_)
        throw std::invalid_argument("objective references unknown variable");
      if (!std::isfinite(c)) throw std::invalid_argument("objective coefficient not finite");
      cost_[id] += c;
    }

    // Column-major copy of the constraint matrix.
    std::vector<int> count(ncols_, 0);
    for (const LpRow& r : lp.rows)
      for (const auto& [id, c] : r.terms) {
        if (id < 0 || id >= nstruct_) throw std::invalid_argument("row references unknown variable");
        if (!std::isfinite(c)) throw std::invalid_argument("row coefficient not finite");
        ++count[id];
      }
    for (int r = 0; r < m_; ++r) {
      ++count[nstruct_ + r];       // slack
      ++count[nstruct_ + m_ + r];  // artificial
    }
    col_ptr_.assign(ncols_ + 1, 0);
    for (int j = 0; j < ncols_; ++j) col_ptr_[j + 1] = col_ptr_[j] + count[j];
    col_row_.resize(col_ptr_[ncols_]);
    col_val_.resize(col_ptr_[ncols_]);
    std::vector<int> fill(col_ptr_.begin(), col_ptr_.end() - 1);
    for (int r = 0; r < m_; ++r) {
      const LpRow& row = lp.rows[r];
      if (!std::isfinite(row.rhs)) throw std::invalid_argument("row rhs not finite");
      b_[r] = row.rhs;
      for (const auto& [id, c] : row.terms) {
        col_row_[fill[id]] = r;
        col_val_[fill[id]] = c;
        ++fill[id];
      }
    }
    for (int r = 0; r < m_; ++r) {
      const int slack = nstruct_ + r;
      const int art = nstruct_ + m_ + r;
      col_row_[fill[slack]] = r;
      col_val_[fill[slack]] = 1.0;
      col_row_[fill[art]] = r;
      col_val_[fill[art]] = 1.0;  // sign fixed in start_basis()
      switch (lp.rows[r].rel) {
        case Relation::Le: lo_[slack] = 0.0; up_[slack] = kInf; break;
        case Relation::Ge: lo_[slack] = -kInf; up_[slack] = 0.0; break;
        case Relation::Eq: lo_[slack] = 0.0; up_[slack] = 0.0; break;
      }
    }

    bnorm_ = 1.0;
    for (int r = 0; r < m_; ++r) bnorm_ = std::max(bnorm_, std::fabs(b_[r]));
  }

  LpResult run() {
    for (int j = 0; j < nstruct_; ++j)
      if (lo_[j] > up_[j]) return {LpStatus::Infeasible, {}, quiet_nan(), 0};

    start_basis();

    phase1_ = true;
    iterate();  // phase 1 is bounded, always ends optimal
    const double drop_tol = opt_.feas_tol * (1.0 + bnorm_) * 10.0;
    double infeas = 0.0;
    for (int r = 0; r < m_; ++r)
      if (is_artificial(basic_[r])) infeas += std::max(xB_[r], 0.0);
    if (infeas > drop_tol) return {LpStatus::Infeasible, {}, quiet_nan(), iterations_};

    // Pin artificials to zero for phase 2; absorb the tiny values left behind.
    for (int r = 0; r < m_; ++r)
      if (is_artificial(basic_[r]) && std::fabs(xB_[r]) <= drop_tol) xB_[r] = 0.0;
    for (int j = nstruct_ + m_; j < ncols_; ++j) up_[j] = 0.0;

    phase1_ = false;
    if (!iterate()) return {LpStatus::Unbounded, {}, -kInf, iterations_};

    std::vector<double> full = current_point();
    std::vector<double> x(full.begin(), full.begin() + nstruct_);
    for (int j = 0; j < nstruct_; ++j) {
      if (std::isfinite(lo_[j]) && std::fabs(x[j] - lo_[j]) < 1e-9) x[j] = lo_[j];
      else if (std::isfinite(up_[j]) && std::fabs(x[j] - up_[j]) < 1e-9) x[j] = up_[j];
    }
    double obj = 0.0;
    for (int j = 0; j < nstruct_; ++j) obj += cost_[j] * x[j];
    return {LpStatus::Optimal, std::move(x), obj, iterations_};
  }

 private:
  bool is_artificial(int j) const { return j >= nstruct_ + m_; }

  double phase_cost(int j) const {
    if (phase1_) return is_artificial(j) ? 1.0 : 0.0;
    return cost_[j];
  }

  double nb_value(int j) const {
    switch (stat_[j]) {
      case kAtLower: return lo_[j];
      case kAtUpper: return up_[j];
      default: return 0.0;  // free nonbasic
    }
  }

  std::vector<double> current_point() const {
    std::vector<double> x(ncols_, 0.0);
    for (int j = 0; j < ncols_; ++j)
      if (stat_[j] != kBasic) x[j] = nb_value(j);
    for (int r = 0; r < m_; ++r) x[basic_[r]] = xB_[r];
    return x;
  }

  // Initial basis: the row's slack when the starting residual fits the slack's
  // bounds, otherwise the row's artificial, sign-matched so its value is >= 0.
  void start_basis() {
    basic_.assign(m_, -1);
    stat_.assign(ncols_, kAtLower);
    for (int j = 0; j < ncols_; ++j) {
      if (lo_[j] == -kInf && up_[j] == kInf) stat_[j] = kFreeNB;
      else if (lo_[j] == -kInf) stat_[j] = kAtUpper;
      else if (up_[j] == kInf) stat_[j] = kAtLower;
      else stat_[j] = (std::fabs(lo_[j]) <= std::fabs(up_[j])) ? kAtLower : kAtUpper;
    }

    std::vector<double> resid(b_);
    for (int j = 0; j < nstruct_; ++j) {
      const double v = nb_value(j);
      if (v == 0.0) continue;
      for (int t = col_ptr_[j]; t < col_ptr_[j + 1]; ++t) resid[col_row_[t]] -= col_val_[t] * v;
    }

    for (int r = 0; r < m_; ++r) {
      const int slack = nstruct_ + r;
      const int art = nstruct_ + m_ + r;
      if (resid[r] >= lo_[slack] - opt_.feas_tol && resid[r] <= up_[slack] + opt_.feas_tol) {
        basic_[r] = slack;
        stat_[slack] = kBasic;
        // artificial stays nonbasic, fixed at zero: lo_ = up_ = 0 already
      } else {
        if (resid[r] < 0.0) col_val_[col_ptr_[art]] = -1.0;
        basic_[r] = art;
        stat_[art] = kBasic;
        up_[art] = kInf;  // free to shrink to zero during phase 1
      }
    }
    refactor();
  }

  // --- dense LU of the basis -------------------------------------------------

  void refactor() {
    F_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int pos = 0; pos < m_; ++pos) {
      const int j = basic_[pos];
      for (int t = col_ptr_[j]; t < col_ptr_[j + 1]; ++t)
        F_[static_cast<std::size_t>(col_row_[t]) * m_ + pos] += col_val_[t];
    }
    perm_.resize(m_);
    for (int i = 0; i < m_; ++i) perm_[i] = i;
    for (int k = 0; k < m_; ++k) {
      int piv = k;
      double best = std::fabs(F_[static_cast<std::size_t>(k) * m_ + k]);
      for (int i = k + 1; i < m_; ++i) {
        const double v = std::fabs(F_[static_cast<std::size_t>(i) * m_ + k]);
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (best < 1e-12)
        throw std::runtime_error("simplex: singular basis during refactorization (column " +
                                 std::to_string(k) + ")");
      if (piv != k) {
        double* a = &F_[static_cast<std::size_t>(piv) * m_];
        double* bp = &F_[static_cast<std::size_t>(k) * m_];
        for (int c = 0; c < m_; ++c) std::swap(a[c], bp[c]);
        std::swap(perm_[piv], perm_[k]);
      }
      const double d = F_[static_cast<std::size_t>(k) * m_ + k];
      const double* rk = &F_[static_cast<std::size_t>(k) * m_];
      for (int i = k + 1; i < m_; ++i) {
        double* ri = &F_[static_cast<std::size_t>(i) * m_];
        if (ri[k] == 0.0) continue;
        const double f = ri[k] / d;
        ri[k] = f;
        for (int c = k + 1; c < m_; ++c) ri[c] -= f * rk[c];
      }
    }
    etas_.clear();
    recompute_basic_values();
  }

  void recompute_basic_values() {
    std::vector<double> rhs(b_);
    for (int j = 0; j < ncols_; ++j) {
      if (stat_[j] == kBasic) continue;
      const double v = nb_value(j);
      if (v == 0.0) continue;
      for (int t = col_ptr_[j]; t < col_ptr_[j + 1]; ++t) rhs[col_row_[t]] -= col_val_[t] * v;
    }
    lu_ftran(rhs);
    xB_ = rhs;
  }

  void lu_ftran(std::vector<double>& v) const {
    scratch_.resize(m_);
    for (int i = 0; i < m_; ++i) scratch_[i] = v[perm_[i]];
    for (int i = 0; i < m_; ++i) {
      const double vi = scratch_[i];
      if (vi == 0.0) continue;
      for (int k = i + 1; k < m_; ++k)
        scratch_[k] -= F_[static_cast<std::size_t>(k) * m_ + i] * vi;
    }
    for (int i = m_ - 1; i >= 0; --i) {
      const double* row = &F_[static_cast<std::size_t>(i) * m_];
      double s = scratch_[i];
      for (int k = i + 1; k < m_; ++k) s -= row[k] * scratch_[k];
      scratch_[i] = s / row[i];
    }
    v = scratch_;
  }

  void lu_btran(std::vector<double>& v) const {
    // B = P^T L U, so solve U^T w = v, then L^T z = w, then y = P^T z.
    scratch_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      double s = v[i];
      for (int k = 0; k < i; ++k) s -= F_[static_cast<std::size_t>(k) * m_ + i] * scratch_[k];
      scratch_[i] = s / F_[static_cast<std::size_t>(i) * m_ + i];
    }
    for (int i = m_ - 1; i >= 0; --i) {
      double s = scratch_[i];
      for (int k = i + 1; k < m_; ++k) s -= F_[static_cast<std::size_t>(k) * m_ + i] * scratch_[k];
      scratch_[i] = s;
    }
    for (int i = 0; i < m_; ++i) v[perm_[i]] = scratch_[i];
  }

  void ftran(std::vector<double>& v) const {
    lu_ftran(v);
    for (const Eta& e : etas_) {
      const double pr = v[e.r] / e.a[e.r];
      for (int i = 0; i < m_; ++i) v[i] -= e.a[i] * pr;
      v[e.r] = pr;
    }
  }

  void btran(std::vector<double>& v) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      const Eta& e = *it;
      double s = v[e.r];
      for (int i = 0; i < m_; ++i)
        if (i != e.r) s -= e.a[i] * v[i];
      v[e.r] = s / e.a[e.r];
    }
    lu_btran(v);
  }

  // ----------------------------------------------------------------------------

  // One simplex phase. Returns false when phase 2 hits an unbounded ray.
  bool iterate() {
    int stale = 0;
    bool bland = false;

    while (true) {
      if (iterations_ >= opt_.max_iterations)
        throw std::runtime_error("simplex: iteration limit reached");
      if (static_cast<int>(etas_.size()) >= opt_.refactor_interval) refactor();

      std::vector<double> y(m_);
      for (int r = 0; r < m_; ++r) y[r] = phase_cost(basic_[r]);
      btran(y);

      int enter = -1, enter_dir = 0;
      double enter_score = 0.0;
      for (int j = 0; j < ncols_; ++j) {
        if (stat_[j] == kBasic || lo_[j] == up_[j]) continue;
        double d = phase_cost(j);
        for (int t = col_ptr_[j]; t < col_ptr_[j + 1]; ++t) d -= y[col_row_[t]] * col_val_[t];
        int dir = 0;
        if (stat_[j] == kAtLower && d < -opt_.opt_tol) dir = 1;
        else if (stat_[j] == kAtUpper && d > opt_.opt_tol) dir = -1;
        else if (stat_[j] == kFreeNB && std::fabs(d) > opt_.opt_tol) dir = (d < 0.0) ? 1 : -1;
        if (dir == 0) continue;
        if (bland) {
          enter = j;
          enter_dir = dir;
          break;
        }
        if (std::fabs(d) > enter_score + 1e-15) {
          enter = j;
          enter_score = std::fabs(d);
          enter_dir = dir;
        }
      }
      if (enter < 0) return true;  // phase optimal

      std::vector<double> alpha(m_, 0.0);
      for (int t = col_ptr_[enter]; t < col_ptr_[enter + 1]; ++t)
        alpha[col_row_[t]] += col_val_[t];
      ftran(alpha);

      // Ratio test: the entering variable moves by delta >= 0 in direction
      // enter_dir; basic i then changes at rate g_i = -alpha_i * enter_dir.
      double limit = kInf;  // entering variable's own range
      if (std::isfinite(lo_[enter]) && std::isfinite(up_[enter])) limit = up_[enter] - lo_[enter];
      int leave_pos = -1;
      double leave_alpha = 0.0;
      for (int r = 0; r < m_; ++r) {
        const double a = alpha[r];
        if (std::fabs(a) <= kPivotTol) continue;
        const double g = -a * enter_dir;
        const int bj = basic_[r];
        double cap;
        if (g > 0.0) {
          if (up_[bj] == kInf) continue;
          cap = (up_[bj] - xB_[r]) / g;
        } else {
          if (lo_[bj] == -kInf) continue;
          cap = (xB_[r] - lo_[bj]) / (-g);
        }
        if (cap < 0.0) cap = 0.0;
        if (cap > limit + kRatioTie) continue;
        if (leave_pos < 0 || cap < limit - kRatioTie) {
          limit = std::min(limit, cap);
          leave_pos = r;
          leave_alpha = a;
          continue;
        }
        // Tie: prefer the larger pivot magnitude, then the smaller column id.
        if (std::fabs(a) > std::fabs(leave_alpha) + 1e-12 ||
            (std::fabs(a) >= std::fabs(leave_alpha) - 1e-12 && bj < basic_[leave_pos])) {
          limit = std::min(limit, cap);
          leave_pos = r;
          leave_alpha = a;
        }
      }

      if (limit == kInf) {
        if (phase1_) throw std::runtime_error("simplex: unbounded phase-1 subproblem");
        return false;
      }

      if (leave_pos >= 0 && std::fabs(leave_alpha) < 1e-9 && !etas_.empty()) {
        refactor();  // suspiciously small pivot: rebuild factors and retry
        continue;
      }

      ++iterations_;
      if (limit <= kDegenEps) {
        if (++stale >= kStallLimit) bland = true;
      } else {
        stale = 0;
        bland = false;
      }

      if (leave_pos < 0) {
        // Bound flip: the entering variable crosses its whole range.
        for (int r = 0; r < m_; ++r) xB_[r] -= alpha[r] * enter_dir * limit;
        stat_[enter] = (stat_[enter] == kAtLower) ? kAtUpper : kAtLower;
        continue;
      }

      const int leave = basic_[leave_pos];
      const double enter_val = nb_value(enter) + enter_dir * limit;
      for (int r = 0; r < m_; ++r) xB_[r] -= alpha[r] * enter_dir * limit;

      const double g_leave = -leave_alpha * enter_dir;
      stat_[leave] = (g_leave > 0.0) ? kAtUpper : kAtLower;
      if (is_artificial(leave)) up_[leave] = 0.0;  // once out, an artificial stays out

      basic_[leave_pos] = enter;
      stat_[enter] = kBasic;
      xB_[leave_pos] = enter_val;
      etas_.push_back({leave_pos, std::move(alpha)});
    }
  }

  const SimplexOptions opt_;
  int m_ = 0, nstruct_ = 0, ncols_ = 0;
  std::vector<int> col_ptr_, col_row_;
  std::vector<double> col_val_;
  std::vector<double> lo_, up_, cost_, b_;
  double bnorm_ = 1.0;
  bool phase1_ = true;

  std::vector<int> basic_;
  std::vector<signed char> stat_;
  std::vector<double> xB_;
  std::vector<double> F_;
  std::vector<int> perm_;
  struct Eta {
    int r;
    std::vector<double> a;
  };
  std::vector<Eta> etas_;
  std::int64_t iterations_ = 0;
  mutable std::vector<double> scratch_;
};

}  // namespace

LpResult solve_lp(const LpInstance& lp, const SimplexOptions& opt) {
  if (lp.rows.empty()) {
    // Pure box problem: every variable sits at whichever bound its cost prefers.
    std::vector<double> cost(lp.vars.size(), 0.0);
    for (const auto& [id, c] : lp.objective) {
      if (id < 0 || id >= static_cast<int>(lp.vars.size()))
        throw std::invalid_argument("objective references unknown variable");
      if (!std::isfinite(c)) throw std::invalid_argument("objective coefficient not finite");
      cost[id] += c;
    }
    std::vector<double> x(lp.vars.size(), 0.0);
    double obj = 0.0;
    for (std::size_t j = 0; j < lp.vars.size(); ++j) {
      const LpVar& v = lp.vars[j];
      if (v.lower > v.upper) return {LpStatus::Infeasible, {}, quiet_nan(), 0};
      double pick = (cost[j] > 0.0) ? v.lower : (cost[j] < 0.0) ? v.upper : 0.0;
      if (cost[j] == 0.0)
        pick = std::isfinite(v.lower) ? v.lower : (std::isfinite(v.upper) ? v.upper : 0.0);
      if (!std::isfinite(pick)) {
        if (cost[j] != 0.0) return {LpStatus::Unbounded, {}, -kInf, 0};
        pick = 0.0;
      }
      x[j] = pick;
      obj += cost[j] * pick;
    }
    return {LpStatus::Optimal, std::move(x), obj + lp.objective_offset, 0};
  }

  Simplex s(lp, opt);
  LpResult r = s.run();
  if (r.status == LpStatus::Optimal) r.objective += lp.objective_offset;
  return r;
}

}  // namespace homegrid
