#include "rails/nps.hpp"

#include <cmath>
#include <sstream>

#include "rails/errors.hpp"
#include "rails/stats.hpp"

namespace rails {

namespace {

void check_shapes(const Eigen::VectorXd& theta, const Eigen::MatrixXd& x_np,
                  const Eigen::MatrixXd& x_p, const Eigen::VectorXd& d_p) {
  if (x_np.cols() != x_p.cols())
    throw ShapeError("NP and P design matrices have different column counts");
  if (theta.size() != x_np.cols())
    throw ShapeError("theta length does not match design columns");
  if (d_p.size() != x_p.rows())
    throw ShapeError("design weight length does not match P rows");
}

std::vector<std::string> singular_columns(const Eigen::MatrixXd& a,
                                          const std::vector<std::string>* labels) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  const int rank = static_cast<int>(qr.rank());
  const auto perm = qr.colsPermutation().indices();
  std::vector<std::string> out;
  for (int k = rank; k < a.cols(); ++k) {
    int col = perm(k);
    out.push_back(labels && col < static_cast<int>(labels->size())
                      ? (*labels)[col]
                      : "column " + std::to_string(col));
  }
  return out;
}

}  // namespace

double pseudo_log_likelihood(const Eigen::VectorXd& theta, const Eigen::MatrixXd& x_np,
                             const Eigen::MatrixXd& x_p, const Eigen::VectorXd& d_p) {
  check_shapes(theta, x_np, x_p, d_p);
  for (int i = 0; i < d_p.size(); ++i)
    if (!(d_p(i) > 0.0)) throw Error("design weights must be strictly positive");
  double ll = (x_np * theta).sum();
  Eigen::VectorXd eta = x_p * theta;
  for (int i = 0; i < eta.size(); ++i) ll -= d_p(i) * stats::log1p_exp(eta(i));
  if (!std::isfinite(ll)) throw NumericError("pseudo-log-likelihood is not finite");
  return ll;
}

void score_and_hessian(const Eigen::VectorXd& theta, const Eigen::MatrixXd& x_np,
                       const Eigen::MatrixXd& x_p, const Eigen::VectorXd& d_p,
                       Eigen::VectorXd& score, Eigen::MatrixXd& hessian) {
  check_shapes(theta, x_np, x_p, d_p);
  const int p = static_cast<int>(x_np.cols());
  Eigen::VectorXd eta = x_p * theta;
  Eigen::VectorXd pi(eta.size());
  Eigen::VectorXd curv(eta.size());
  for (int i = 0; i < eta.size(); ++i) {
    double m = stats::logistic(eta(i));
    pi(i) = d_p(i) * m;
    curv(i) = d_p(i) * m * (1.0 - m);
  }
  score = x_np.colwise().sum().transpose() - x_p.transpose() * pi;
  hessian = -(x_p.transpose() * curv.asDiagonal() * x_p);
  // Symmetrize away rounding noise.
  hessian = 0.5 * (hessian + hessian.transpose()).eval();
  if (!score.allFinite() || !hessian.allFinite())
    throw NumericError("score/Hessian is not finite");
  (void)p;
}

NpsFit fit_nps(const Eigen::MatrixXd& x_np, const Eigen::MatrixXd& x_p,
               const Eigen::VectorXd& d_p, const NpsOptions& opts,
               const std::vector<std::string>* column_labels) {
  if (x_np.cols() < 1) throw ShapeError("design matrices need at least one column");
  const int p = static_cast<int>(x_np.cols());

  NpsFit fit;
  fit.theta = Eigen::VectorXd::Zero(p);
  fit.ridge_used = opts.ridge;
  double loglik = pseudo_log_likelihood(fit.theta, x_np, x_p, d_p);

  Eigen::VectorXd score(p);
  Eigen::MatrixXd hessian(p, p);
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    score_and_hessian(fit.theta, x_np, x_p, d_p, score, hessian);
    if (score.norm() <= opts.score_tolerance) break;

    Eigen::MatrixXd a = -hessian;
    if (opts.ridge > 0.0) a.diagonal().array() += opts.ridge;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    double d_max = ldlt.vectorD().cwiseAbs().maxCoeff();
    double d_min = ldlt.vectorD().minCoeff();
    if (ldlt.info() != Eigen::Success || !(d_min > 1e-12 * d_max)) {
      std::ostringstream os;
      os << "singular pseudo-likelihood Hessian";
      auto cols = singular_columns(a, column_labels);
      if (!cols.empty()) {
        os << "; offending columns:";
        for (const auto& c : cols) os << ' ' << c;
      }
      throw SingularHessianError(os.str(), cols);
    }
    Eigen::VectorXd delta = ldlt.solve(score);

    double lambda = 1.0;
    bool accepted = false;
    Eigen::VectorXd candidate;
    double candidate_ll = 0.0;
    for (int h = 0; h <= opts.max_step_halvings; ++h) {
      candidate = fit.theta + lambda * delta;
      candidate_ll = pseudo_log_likelihood(candidate, x_np, x_p, d_p);
      if (candidate_ll >= loglik) {
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) break;  // no ascent possible; certify via the score below

    double step_norm = lambda * delta.norm();
    fit.theta = candidate;
    loglik = candidate_ll;
    ++fit.iterations;
    if (step_norm <= opts.step_tolerance) break;
  }

  score_and_hessian(fit.theta, x_np, x_p, d_p, score, fit.hessian);
  fit.score_norm = score.norm();
  fit.loglik = loglik;
  fit.converged = fit.score_norm <= opts.score_tolerance;
  return fit;
}

NpsFit fit_nps(const SharedEncoding& enc, const Eigen::VectorXd& d_p, const NpsOptions& opts) {
  auto labels = enc.np.column_labels();
  return fit_nps(enc.np.values, enc.p.values, d_p, opts, &labels);
}

Eigen::VectorXd base_weights(const NpsFit& fit, const Eigen::MatrixXd& x_np) {
  if (fit.theta.size() != x_np.cols())
    throw ShapeError("theta length does not match design columns");
  Eigen::VectorXd eta = x_np * fit.theta;
  Eigen::VectorXd w(eta.size());
  for (int i = 0; i < eta.size(); ++i) w(i) = 1.0 + std::exp(-eta(i));
  return w;
}

}  // namespace rails
