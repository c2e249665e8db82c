#include "surfelastic/optimize.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace surfelastic {

namespace {

constexpr double kHuge = 1e50;

struct LineSearchResult {
  double step = 0.0;
  double value = 0.0;
  Eigen::VectorXd x, grad;
  bool ok = false;
};

// Strong Wolfe line search (bracket + zoom with bisection-guarded cubic).
class LineSearch {
 public:
  LineSearch(const ObjectiveHandle& obj, const OptimizerConfig& cfg,
             const Eigen::VectorXd& x0, double f0,
             const Eigen::VectorXd& g0, const Eigen::VectorXd& dir)
      : obj_(obj), cfg_(cfg), x0_(x0), f0_(f0), d_(dir) {
    dphi0_ = g0.dot(dir);
  }

  LineSearchResult run(double a_init) {
    LineSearchResult out;
    double a_prev = 0.0, f_prev = f0_, dphi_prev = dphi0_;
    double a = a_init;
    double a_max = 1e8;
    for (int it = 0; it < cfg_.max_line_search; ++it) {
      double f, dphi;
      if (!eval(a, f, dphi)) {
        // Infeasible point: shrink into the feasible region.
        a = 0.5 * (a_prev + a);
        continue;
      }
      if (f > f0_ + cfg_.wolfe_c1 * a * dphi0_ || (it > 0 && f >= f_prev)) {
        return zoom(a_prev, f_prev, dphi_prev, a, f, dphi);
      }
      if (std::abs(dphi) <= -cfg_.wolfe_c2 * dphi0_) {
        out.ok = true;
        out.step = a;
        out.value = f;
        out.x = x_;
        out.grad = g_;
        return out;
      }
      if (dphi >= 0.0) {
        return zoom(a, f, dphi, a_prev, f_prev, dphi_prev);
      }
      a_prev = a;
      f_prev = f;
      dphi_prev = dphi;
      a = std::min(2.0 * a, a_max);
    }
    return out;
  }

 private:
  bool eval(double a, double& f, double& dphi) {
    x_ = x0_ + a * d_;
    g_.resize(x0_.size());
    f = obj_.evaluate(x_, g_);
    if (!std::isfinite(f) || f >= kHuge) return false;
    dphi = g_.dot(d_);
    return true;
  }

  LineSearchResult zoom(double a_lo, double f_lo, double dphi_lo, double a_hi,
                        double f_hi, double dphi_hi) {
    LineSearchResult out;
    (void)dphi_hi;
    bool hi_valid = std::isfinite(f_hi) && f_hi < kHuge;
    for (int it = 0; it < cfg_.max_line_search; ++it) {
      if (std::abs(a_hi - a_lo) < 1e-16 * std::max(1.0, std::abs(a_lo)))
        break;
      // Quadratic interpolation through (a_lo, f_lo, dphi_lo) and
      // (a_hi, f_hi), safeguarded toward bisection.
      double a = 0.5 * (a_lo + a_hi);
      if (hi_valid) {
        double da = a_hi - a_lo;
        double denom = 2.0 * (f_hi - f_lo - dphi_lo * da);
        if (std::abs(denom) > 1e-300) {
          double cand = a_lo - dphi_lo * da * da / denom;
          double lo = std::min(a_lo, a_hi), hi = std::max(a_lo, a_hi);
          double margin = 1e-3 * (hi - lo);
          if (cand > lo + margin && cand < hi - margin) a = cand;
        }
      }
      double f, dphi;
      if (!eval(a, f, dphi)) {
        a_hi = a;
        hi_valid = false;
        continue;
      }
      if (f > f0_ + cfg_.wolfe_c1 * a * dphi0_ || f >= f_lo) {
        a_hi = a;
        f_hi = f;
        hi_valid = true;
        continue;
      }
      if (std::abs(dphi) <= -cfg_.wolfe_c2 * dphi0_) {
        out.ok = true;
        out.step = a;
        out.value = f;
        out.x = x_;
        out.grad = g_;
        return out;
      }
      if (dphi * (a_hi - a_lo) >= 0.0) {
        a_hi = a_lo;
        f_hi = f_lo;
        hi_valid = true;
      }
      a_lo = a;
      f_lo = f;
      dphi_lo = dphi;
    }
    return out;
  }

  const ObjectiveHandle& obj_;
  const OptimizerConfig& cfg_;
  const Eigen::VectorXd& x0_;
  double f0_;
  const Eigen::VectorXd& d_;
  double dphi0_ = 0.0;
  Eigen::VectorXd x_, g_;
};

}  // namespace

OptimizeReport minimize(const ObjectiveHandle& obj, const Eigen::VectorXd& x0,
                        const OptimizerConfig& cfg) {
  const int n = static_cast<int>(x0.size());
  if (obj.dimension != n)
    throw ValidationError("minimize: x0 does not match objective dimension");

  OptimizeReport rep;
  Eigen::VectorXd x = x0, g(n);
  double f = obj.evaluate(x, g);
  if (!std::isfinite(f))
    throw ValidationError("minimize: objective not finite at x0");
  rep.trace.push_back({f, 0.0, g.norm()});

  const bool dense = n < cfg.full_bfgs_below;
  Eigen::MatrixXd h_inv;
  if (dense) h_inv = Eigen::MatrixXd::Identity(n, n);
  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> history;  // (s, y)
  double gamma = 1.0;  // initial Hessian scaling for the two-loop recursion

  auto converged = [&](double fv, const Eigen::VectorXd& gv) {
    return gv.norm() <= cfg.g_tol * std::max(1.0, std::abs(fv));
  };

  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    if (converged(f, g)) {
      rep.converged = true;
      break;
    }
    // Search direction.
    Eigen::VectorXd d(n);
    if (dense) {
      d = -(h_inv * g);
    } else {
      Eigen::VectorXd q = g;
      std::vector<double> alpha(history.size());
      for (int k = static_cast<int>(history.size()) - 1; k >= 0; --k) {
        const auto& [s, y] = history[k];
        double rho = 1.0 / y.dot(s);
        alpha[k] = rho * s.dot(q);
        q -= alpha[k] * y;
      }
      q *= gamma;
      for (std::size_t k = 0; k < history.size(); ++k) {
        const auto& [s, y] = history[k];
        double rho = 1.0 / y.dot(s);
        double beta = rho * y.dot(q);
        q += (alpha[k] - beta) * s;
      }
      d = -q;
    }
    if (d.dot(g) >= 0.0) {
      // Reset to steepest descent if the model lost positive definiteness.
      d = -g;
      if (dense) h_inv.setIdentity();
      history.clear();
      gamma = 1.0;
    }

    // The unit step first: required for superlinear convergence, and the
    // zoom interpolation recovers the exact line minimum on quadratics.
    double a_init = 1.0;
    LineSearch ls(obj, cfg, x, f, g, d);
    LineSearchResult r = ls.run(a_init);
    if (!r.ok) {
      rep.message = "line search failed";
      break;
    }

    Eigen::VectorXd s = r.x - x;
    Eigen::VectorXd y = r.grad - g;
    x = r.x;
    f = r.value;
    g = r.grad;
    rep.trace.push_back({f, r.step, g.norm()});

    double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (dense) {
        if (it == 0) h_inv *= sy / y.squaredNorm();  // initial scaling
        Eigen::VectorXd hy = h_inv * y;
        double yhy = y.dot(hy);
        double rho = 1.0 / sy;
        h_inv += (sy + yhy) * rho * rho * (s * s.transpose()) -
                 rho * (hy * s.transpose() + s * hy.transpose());
      } else {
        history.emplace_back(std::move(s), std::move(y));
        if (static_cast<int>(history.size()) > cfg.memory)
          history.pop_front();
        gamma = sy / history.back().second.squaredNorm();
      }
    }
  }
  if (!rep.converged && it == cfg.max_iter) rep.message = "iteration cap";
  if (rep.converged) rep.message = "gradient tolerance reached";
  rep.x_opt = x;
  rep.f_opt = f;
  rep.iterations = it;
  rep.gradient_norm = g.norm();
  return rep;
}

}  // namespace surfelastic
