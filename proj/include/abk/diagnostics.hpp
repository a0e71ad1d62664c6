#ifndef ABK_DIAGNOSTICS_HPP
#define ABK_DIAGNOSTICS_HPP

#include <vector>

namespace abk {

// Effective sample size via the initial monotone sequence estimator on the
// even/odd autocovariance pairs. Requires at least 10 points; a trace with
// zero variance counts as one effective sample.
double effective_sample_size(const std::vector<double>& trace);

// Monte Carlo standard error of the trace mean, variance scaled by ESS.
double mc_standard_error(const std::vector<double>& trace);

double mean_of(const std::vector<double>& v);
double sd_of(const std::vector<double>& v);

// Equal-tailed quantile by linear interpolation on the sorted copy.
double quantile_of(std::vector<double> v, double p);

}  // namespace abk

#endif
