#ifndef RAILS_NPS_HPP
#define RAILS_NPS_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rails/design.hpp"

namespace rails {

/// Solver controls for the nested propensity score fit.
struct NpsOptions {
  int max_iterations = 100;
  double step_tolerance = 1e-8;   // on the Newton step norm
  double score_tolerance = 1e-6;  // on the score norm, certifies stationarity
  int max_step_halvings = 20;
  double ridge = 0.0;  // optional diagonal stabilizer, reported when used
};

/// Result of maximizing the propensity pseudo-likelihood.
struct NpsFit {
  Eigen::VectorXd theta;
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  Eigen::MatrixXd hessian;  // at the final theta; symmetric negative semidefinite
  double score_norm = 0.0;
  double ridge_used = 0.0;
};

/// Pseudo-log-likelihood of the non-probability inclusion model:
/// sum over the NP cohort of x'theta minus the design-weighted probability
/// cohort sum of log(1 + exp(x'theta)), evaluated overflow-safe.
double pseudo_log_likelihood(const Eigen::VectorXd& theta, const Eigen::MatrixXd& x_np,
                             const Eigen::MatrixXd& x_p, const Eigen::VectorXd& d_p);

/// Analytic gradient and Hessian of the pseudo-log-likelihood. The Hessian
/// sums over the probability cohort only.
void score_and_hessian(const Eigen::VectorXd& theta, const Eigen::MatrixXd& x_np,
                       const Eigen::MatrixXd& x_p, const Eigen::VectorXd& d_p,
                       Eigen::VectorXd& score, Eigen::MatrixXd& hessian);

/// Newton-Raphson maximization from theta = 0 with step-halving; convergence
/// is certified by the score norm. Throws SingularHessianError (naming the
/// offending columns when labels are given) if the Hessian is singular even
/// after the optional ridge.
NpsFit fit_nps(const Eigen::MatrixXd& x_np, const Eigen::MatrixXd& x_p,
               const Eigen::VectorXd& d_p, const NpsOptions& opts = {},
               const std::vector<std::string>* column_labels = nullptr);

NpsFit fit_nps(const SharedEncoding& enc, const Eigen::VectorXd& d_p,
               const NpsOptions& opts = {});

/// Base weights 1/pi = 1 + exp(-x'theta), strictly greater than 1.
Eigen::VectorXd base_weights(const NpsFit& fit, const Eigen::MatrixXd& x_np);

}  // namespace rails

#endif  // RAILS_NPS_HPP
