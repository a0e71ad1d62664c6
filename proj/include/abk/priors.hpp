#ifndef ABK_PRIORS_HPP
#define ABK_PRIORS_HPP

#include <limits>

#include "abk/gamma.hpp"
#include "abk/model.hpp"

namespace abk {

// Optional truncation window; used to make the improper priors proper for the
// prior-vs-posterior joint validation runs.
struct Truncation {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    bool contains(double x) const { return x >= lo && x <= hi; }
    bool bounded() const { return std::isfinite(hi); }
};

struct PriorSpec {
    // Vague gamma prior shared by the three contact rates. The default is an
    // exponential with rate 1e-9, flat to one part in 1e8 over any plausible
    // contact rate; a literal mean-1e3/sd-1e6 gamma has shape 1e-6 and tilts
    // the posterior rate means down by its 1/x density spike.
    GammaSpec rate_prior = gamma_from_mean_sd(1e9, 1e9);
    // v ~ uniform(0,1); b, t_q flat on (0, inf); kappa uniform over the cases;
    // the vaccination config uniform over the admissible set; e_kappa flat.
    Truncation rate_trunc, v_trunc{0.0, 1.0}, b_trunc, tq_trunc;
    bool kappa_unvaccinated_only = false;

    double log_prior_rate(double x) const;
    double log_prior_v(double x) const;
    double log_prior_b(double x) const;
    double log_prior_tq(double x) const;

    // Draws from the truncated priors; requires bounded truncations for the
    // flat ones.
    double sample_rate(Rng& rng) const;
    double sample_v(Rng& rng) const;
    double sample_b(Rng& rng) const;
    double sample_tq(Rng& rng) const;
};

}  // namespace abk

#endif
