#include "dual_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mtrpp::detail {

namespace {
constexpr double kDualTol = 1e-9;
constexpr double kZero = 1e-12;
}  // namespace

DualSimplex::DualSimplex(const MilpModel& model, const MilpOptions& options) : opt_(options) {
  m_ = model.row_count();
  n_ = model.column_count();
  total_ = n_ + m_;
  if (m_ > 0 && total_ > opt_.max_tableau_entries / m_)
    throw std::length_error("model too large for the dense simplex: " + std::to_string(m_) + " rows, " +
                            std::to_string(n_) + " columns");
  a_.assign(m_ * n_, 0.0);
  b_.resize(m_);
  for (std::size_t i = 0; i < m_; ++i) {
    for (const auto& [j, v] : model.rows()[i].coeffs) a_[i * n_ + j] += v;
    b_[i] = model.rows()[i].rhs;
  }
  c_.assign(total_, 0.0);
  lo_.assign(total_, 0.0);
  hi_.assign(total_, 0.0);
  artificial_lo_.assign(total_, false);
  artificial_hi_.assign(total_, false);
  for (std::size_t j = 0; j < n_; ++j) {
    const auto& col = model.columns()[j];
    c_[j] = col.objective;
    set_bounds(j, col.lower, col.upper);
  }
  for (std::size_t i = 0; i < m_; ++i) {
    switch (model.rows()[i].sense) {
      case Sense::LessEqual: lo_[n_ + i] = 0.0; hi_[n_ + i] = kInfinity; break;
      case Sense::GreaterEqual: lo_[n_ + i] = -kInfinity; hi_[n_ + i] = 0.0; break;
      case Sense::Equal: lo_[n_ + i] = 0.0; hi_[n_ + i] = 0.0; break;
    }
  }

  tab_.assign(m_ * total_, 0.0);
  for (std::size_t i = 0; i < m_; ++i) {
    std::copy(&a_[i * n_], &a_[i * n_] + n_, row(i));
    row(i)[n_ + i] = 1.0;
  }
  beta_ = b_;
  d_ = c_;
  basis_.resize(m_);
  pos_.assign(total_, -1);
  at_upper_.assign(total_, false);
  for (std::size_t i = 0; i < m_; ++i) {
    basis_[i] = n_ + i;
    pos_[n_ + i] = static_cast<std::ptrdiff_t>(i);
  }
  for (std::size_t j = 0; j < n_; ++j) place_nonbasic(j);
  recompute_basic_values();
}

double DualSimplex::value(std::size_t j) const {
  if (pos_[j] >= 0) return xb_[static_cast<std::size_t>(pos_[j])];
  return at_upper_[j] ? hi_[j] : lo_[j];
}

void DualSimplex::place_nonbasic(std::size_t j) {
  if (lo_[j] == hi_[j]) {
    at_upper_[j] = false;
  } else if (d_[j] > kDualTol) {
    at_upper_[j] = false;
  } else if (d_[j] < -kDualTol) {
    at_upper_[j] = true;
  }
  // Never rest on an infinite bound (only slacks can have one).
  if (at_upper_[j] && std::isinf(hi_[j])) at_upper_[j] = false;
  if (!at_upper_[j] && std::isinf(lo_[j])) at_upper_[j] = true;
}

void DualSimplex::set_bounds(std::size_t j, double lower, double upper) {
  if (lower > upper) throw std::invalid_argument("column bounds cross");
  const bool nonbasic = !pos_.empty() && pos_[j] < 0;
  const double old = nonbasic ? value(j) : 0.0;
  artificial_lo_[j] = std::isinf(lower);
  artificial_hi_[j] = std::isinf(upper);
  lo_[j] = artificial_lo_[j] ? -opt_.big_bound : lower;
  hi_[j] = artificial_hi_[j] ? opt_.big_bound : upper;
  if (!nonbasic) return;
  place_nonbasic(j);
  const double now = value(j);
  if (now != old) {
    const double delta = now - old;
    for (std::size_t i = 0; i < m_; ++i) xb_[i] -= delta * row(i)[j];
  }
}

void DualSimplex::recompute_basic_values() {
  xb_ = beta_;
  for (std::size_t j = 0; j < total_; ++j) {
    if (pos_[j] >= 0) continue;
    const double v = value(j);
    if (v == 0.0) continue;
    for (std::size_t i = 0; i < m_; ++i) xb_[i] -= row(i)[j] * v;
  }
}

void DualSimplex::refactor() {
  since_refactor_ = 0;
  if (m_ == 0) return;
  // Gauss-Jordan on [B | I] with partial pivoting.
  const std::size_t w = 2 * m_;
  std::vector<double> aug(m_ * w, 0.0);
  for (std::size_t i = 0; i < m_; ++i) {
    const std::size_t j = basis_[i];
    for (std::size_t r = 0; r < m_; ++r)
      aug[r * w + i] = j < n_ ? a_[r * n_ + j] : (r == j - n_ ? 1.0 : 0.0);
    aug[i * w + m_ + i] = 1.0;
  }
  for (std::size_t col = 0; col < m_; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m_; ++r)
      if (std::fabs(aug[r * w + col]) > std::fabs(aug[piv * w + col])) piv = r;
    if (std::fabs(aug[piv * w + col]) < kZero) throw std::runtime_error("singular basis");
    if (piv != col)
      for (std::size_t k = 0; k < w; ++k) std::swap(aug[piv * w + k], aug[col * w + k]);
    const double inv = 1.0 / aug[col * w + col];
    for (std::size_t k = 0; k < w; ++k) aug[col * w + k] *= inv;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == col) continue;
      const double f = aug[r * w + col];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < w; ++k) aug[r * w + k] -= f * aug[col * w + k];
    }
  }
  // Row i of B^-1 is aug[i][m..2m).
  for (std::size_t i = 0; i < m_; ++i) {
    const double* binv = &aug[i * w + m_];
    double* t = row(i);
    for (std::size_t j = 0; j < n_; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < m_; ++r)
        if (binv[r] != 0.0) s += binv[r] * a_[r * n_ + j];
      t[j] = std::fabs(s) < kZero ? 0.0 : s;
    }
    for (std::size_t r = 0; r < m_; ++r) t[n_ + r] = std::fabs(binv[r]) < kZero ? 0.0 : binv[r];
    double s = 0.0;
    for (std::size_t r = 0; r < m_; ++r) s += binv[r] * b_[r];
    beta_[i] = s;
  }
  for (std::size_t i = 0; i < m_; ++i) {
    double* t = row(i);
    for (std::size_t r = 0; r < m_; ++r) t[basis_[r]] = r == i ? 1.0 : 0.0;
  }
  d_ = c_;
  for (std::size_t i = 0; i < m_; ++i) {
    const double cb = c_[basis_[i]];
    if (cb == 0.0) continue;
    const double* t = row(i);
    for (std::size_t j = 0; j < total_; ++j) d_[j] -= cb * t[j];
  }
  for (std::size_t i = 0; i < m_; ++i) d_[basis_[i]] = 0.0;
  recompute_basic_values();
}

bool DualSimplex::artificial_active() const {
  for (std::size_t j = 0; j < n_; ++j) {
    if (pos_[j] >= 0 || std::fabs(d_[j]) <= kDualTol) continue;
    if ((at_upper_[j] && artificial_hi_[j]) || (!at_upper_[j] && artificial_lo_[j])) return true;
  }
  return false;
}

double DualSimplex::objective() const {
  double s = 0.0;
  for (std::size_t j = 0; j < n_; ++j) s += c_[j] * value(j);
  return s;
}

std::vector<double> DualSimplex::primal() const {
  std::vector<double> x(n_);
  for (std::size_t j = 0; j < n_; ++j) x[j] = value(j);
  return x;
}

DualSimplex::Result DualSimplex::solve(double cutoff, std::chrono::steady_clock::time_point deadline) {
  std::size_t degenerate = 0;
  bool bland = false;
  std::size_t local = 0;
  for (;;) {
    if (since_refactor_ >= opt_.refactor_interval) refactor();
    if ((++local & 15) == 0 && std::chrono::steady_clock::now() > deadline) return Result::TimeLimit;

    // Leaving row: largest bound violation, or lowest variable index under Bland.
    std::size_t r = m_;
    double worst = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t j = basis_[i];
      const double tol = opt_.feas_tol * (1.0 + std::fabs(xb_[i]));
      double v = 0.0;
      if (xb_[i] < lo_[j] - tol) v = lo_[j] - xb_[i];
      else if (xb_[i] > hi_[j] + tol) v = xb_[i] - hi_[j];
      if (v <= 0.0) continue;
      if (bland) {
        if (r == m_ || j < basis_[r]) r = i;
      } else if (v > worst) {
        worst = v;
        r = i;
      }
    }
    if (r == m_) return artificial_active() ? Result::Unbounded : Result::Optimal;

    if (std::isfinite(cutoff) && objective() > cutoff && !artificial_active()) return Result::Cutoff;

    const std::size_t leave = basis_[r];
    const bool increase = xb_[r] < lo_[leave];
    const double target = increase ? lo_[leave] : hi_[leave];
    const double* tr = row(r);

    // Eligible entering columns and Harris two-pass ratio test.
    auto eligible = [&](std::size_t j) -> bool {
      if (pos_[j] >= 0 || lo_[j] == hi_[j]) return false;
      const double alpha = tr[j];
      if (std::fabs(alpha) <= opt_.pivot_tol) return false;
      const bool can_increase = !at_upper_[j];
      // x_B[r] moves by -alpha * dx_j.
      return increase ? ((can_increase && alpha < 0) || (!can_increase && alpha > 0))
                      : ((can_increase && alpha > 0) || (!can_increase && alpha < 0));
    };
    std::size_t q = total_;
    if (bland) {
      double best = kInfinity;
      for (std::size_t j = 0; j < total_; ++j) {
        if (!eligible(j)) continue;
        const double ratio = std::fabs(d_[j]) / std::fabs(tr[j]);
        if (ratio < best - kZero) {
          best = ratio;
          q = j;
        }
      }
    } else {
      double bound = kInfinity;
      for (std::size_t j = 0; j < total_; ++j) {
        if (!eligible(j)) continue;
        bound = std::min(bound, (std::fabs(d_[j]) + kDualTol) / std::fabs(tr[j]));
      }
      double best_alpha = 0.0;
      for (std::size_t j = 0; j < total_; ++j) {
        if (!eligible(j)) continue;
        if (std::fabs(d_[j]) / std::fabs(tr[j]) > bound) continue;
        if (std::fabs(tr[j]) > best_alpha) {
          best_alpha = std::fabs(tr[j]);
          q = j;
        }
      }
    }
    if (q == total_) return Result::Infeasible;

    const double alpha = tr[q];
    if (std::fabs(d_[q] / alpha) < kZero) {
      if (++degenerate > opt_.bland_threshold) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }

    // Primal update before the tableau changes.
    const double delta = (xb_[r] - target) / alpha;
    const double entering_value = value(q) + delta;
    for (std::size_t i = 0; i < m_; ++i) xb_[i] -= delta * row(i)[q];
    xb_[r] = entering_value;

    // Pivot on (r, q).
    double* pr = row(r);
    const double inv = 1.0 / alpha;
    for (std::size_t j = 0; j < total_; ++j) pr[j] *= inv;
    beta_[r] *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* ti = row(i);
      const double f = ti[q];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < total_; ++j) ti[j] -= f * pr[j];
      beta_[i] -= f * beta_[r];
      ti[q] = 0.0;
    }
    const double dq = d_[q];
    if (dq != 0.0)
      for (std::size_t j = 0; j < total_; ++j) d_[j] -= dq * pr[j];
    d_[q] = 0.0;
    pr[q] = 1.0;

    basis_[r] = q;
    pos_[q] = static_cast<std::ptrdiff_t>(r);
    pos_[leave] = -1;
    at_upper_[leave] = lo_[leave] != hi_[leave] && target == hi_[leave];
    ++iterations_;
    ++since_refactor_;
  }
}

}  // namespace mtrpp::detail
