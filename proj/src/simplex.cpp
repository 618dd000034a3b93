#include "spherekern/simplex.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "spherekern/error.hpp"

namespace spherekern {

namespace {

// Tableau with m constraint rows, the objective row m and the phase-one row m + 1.
// Column n holds the artificial variable, column n + 1 the right-hand side.
// Nonbasic labels are stored in `nonbasic`, basic labels in `basic`; slack i
// has label n + i and the artificial variable has label -1.
class Tableau {
 public:
  Tableau(const LinearProgram& lp, double eps, int max_pivots)
      : max_pivots_(max_pivots),
        m_(static_cast<int>(lp.b.size())),
        n_(static_cast<int>(lp.c.size())),
        eps_(eps),
        d_(m_ + 2, n_ + 2),
        basic_(static_cast<std::size_t>(m_)),
        nonbasic_(static_cast<std::size_t>(n_) + 1) {
    d_.setZero();
    d_.topLeftCorner(m_, n_) = lp.a;
    for (int i = 0; i < m_; ++i) {
      basic_[static_cast<std::size_t>(i)] = n_ + i;
      d_(i, n_) = -1.0;
      d_(i, n_ + 1) = lp.b(i);
    }
    for (int j = 0; j < n_; ++j) {
      nonbasic_[static_cast<std::size_t>(j)] = j;
      d_(m_, j) = -lp.c(j);
    }
    nonbasic_[static_cast<std::size_t>(n_)] = -1;
    d_(m_ + 1, n_) = 1.0;
  }

  LPSolution solve() {
    LPSolution out;
    int r = 0;
    for (int i = 1; i < m_; ++i)
      if (d_(i, n_ + 1) < d_(r, n_ + 1)) r = i;
    if (m_ > 0 && d_(r, n_ + 1) < -eps_) {
      pivot(r, n_);
      if (!run(2) || d_(m_ + 1, n_ + 1) < -eps_) {
        out.status = LPStatus::infeasible;
        return out;
      }
      for (int i = 0; i < m_; ++i) {
        if (basic_[static_cast<std::size_t>(i)] != -1) continue;
        int s = 0;
        for (int j = 1; j <= n_; ++j)
          if (better(d_(i, j), j, d_(i, s), s)) s = j;
        pivot(i, s);
      }
    }
    const bool bounded = run(1);
    out.x = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      const int label = basic_[static_cast<std::size_t>(i)];
      if (label >= 0 && label < n_) out.x(label) = d_(i, n_ + 1);
    }
    out.dual = Eigen::VectorXd::Zero(m_);
    for (int j = 0; j <= n_; ++j) {
      const int label = nonbasic_[static_cast<std::size_t>(j)];
      if (label >= n_) out.dual(label - n_) = d_(m_, j);
    }
    out.pivots = pivots_;
    out.status = bounded ? LPStatus::optimal : LPStatus::unbounded;
    out.objective = bounded ? d_(m_, n_ + 1) : INFINITY;
    return out;
  }

 private:
  bool better(double a, int ja, double b, int jb) const {
    const int la = nonbasic_[static_cast<std::size_t>(ja)];
    const int lb = nonbasic_[static_cast<std::size_t>(jb)];
    return a < b || (a == b && la < lb);
  }

  void pivot(int r, int s) {
    if (++pivots_ > max_pivots_) {
      throw LPError("simplex exceeded " + std::to_string(max_pivots_) + " pivots");
    }
    const double inv = 1.0 / d_(r, s);
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r || std::abs(d_(i, s)) <= eps_) continue;
      const double factor = d_(i, s) * inv;
      d_.row(i) -= factor * d_.row(r);
      d_(i, s) = d_(r, s) * factor;
    }
    for (int j = 0; j < n_ + 2; ++j)
      if (j != s) d_(r, j) *= inv;
    for (int i = 0; i < m_ + 2; ++i)
      if (i != r) d_(i, s) *= -inv;
    d_(r, s) = inv;
    std::swap(basic_[static_cast<std::size_t>(r)], nonbasic_[static_cast<std::size_t>(s)]);
  }

  bool run(int phase) {
    const int objective_row = m_ + phase - 1;
    for (;;) {
      int s = -1;
      const bool bland = degenerate_run_ > kDegenerateLimit;
      for (int j = 0; j <= n_; ++j) {
        const int label = nonbasic_[static_cast<std::size_t>(j)];
        if (label == -phase) continue;
        if (bland) {
          if (d_(objective_row, j) < -eps_ &&
              (s == -1 || label < nonbasic_[static_cast<std::size_t>(s)])) {
            s = j;
          }
        } else if (s == -1 || better(d_(objective_row, j), j, d_(objective_row, s), s)) {
          s = j;
        }
      }
      if (s == -1 || d_(objective_row, s) >= -eps_) return true;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (d_(i, s) <= eps_) continue;
        if (r == -1) {
          r = i;
          continue;
        }
        const double ri = d_(i, n_ + 1) / d_(i, s);
        const double rr = d_(r, n_ + 1) / d_(r, s);
        if (ri < rr || (ri == rr && basic_[static_cast<std::size_t>(i)] <
                                        basic_[static_cast<std::size_t>(r)])) {
          r = i;
        }
      }
      if (r == -1) return false;
      degenerate_run_ = d_(r, n_ + 1) <= eps_ ? degenerate_run_ + 1 : 0;
      pivot(r, s);
    }
  }

  static constexpr int kDegenerateLimit = 50;
  int max_pivots_;
  int pivots_ = 0;
  int degenerate_run_ = 0;
  int m_;
  int n_;
  double eps_;
  Eigen::MatrixXd d_;
  std::vector<int> basic_;
  std::vector<int> nonbasic_;
};

}  // namespace

LPSolution solve_simplex(const LinearProgram& lp, double eps, int max_pivots) {
  if (lp.a.rows() != lp.b.size() || lp.a.cols() != lp.c.size()) {
    throw DomainError("solve_simplex: inconsistent problem dimensions");
  }
  Tableau tableau(lp, eps, max_pivots);
  return tableau.solve();
}

}  // namespace spherekern
