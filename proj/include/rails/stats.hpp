#ifndef RAILS_STATS_HPP
#define RAILS_STATS_HPP

namespace rails {
namespace stats {

/// Pr(chi^2_df >= x), the likelihood-ratio test p-value.
double chi_squared_upper_tail(double x, double df);

/// Standard normal quantile, e.g. normal_quantile(0.975) = 1.959964.
double normal_quantile(double p);

/// log(1 + exp(t)) without overflow.
double log1p_exp(double t);

/// Logistic function 1 / (1 + exp(-t)), stable at both tails.
double logistic(double t);

}  // namespace stats
}  // namespace rails

#endif  // RAILS_STATS_HPP
