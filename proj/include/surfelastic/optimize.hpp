#pragma once

#include <functional>
#include <string>
#include <vector>

#include "surfelastic/types.hpp"

namespace surfelastic {

/// Objective: value plus gradient at x. May return a huge value (treated
/// as infeasible) but must not throw.
using Objective =
    std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct ObjectiveHandle {
  int dimension = 0;
  Objective evaluate;
  std::string name;
};

struct OptimizerConfig {
  int max_iter = 500;
  double g_tol = 1e-6;  // stop when |g| <= g_tol * max(1, |f|)
  int memory = 20;      // L-BFGS history length
  int full_bfgs_below = 200;  // dense BFGS for smaller problems
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  int max_line_search = 50;
};

struct TraceEntry {
  double value;
  double step;
  double gradient_norm;
};

struct OptimizeReport {
  Eigen::VectorXd x_opt;
  double f_opt = 0.0;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
  std::vector<TraceEntry> trace;
  std::string message;
};

/// Quasi-Newton minimization with a strong-Wolfe line search. Line-search
/// failures are reported through the `converged` flag and message, never
/// thrown. Deterministic for identical inputs and config.
OptimizeReport minimize(const ObjectiveHandle& obj, const Eigen::VectorXd& x0,
                        const OptimizerConfig& config = {});

}  // namespace surfelastic
