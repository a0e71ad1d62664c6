#ifndef ABK_LIKELIHOOD_HPP
#define ABK_LIKELIHOOD_HPP

#include <vector>

#include "abk/model.hpp"
#include "abk/population.hpp"

namespace abk {

// Compound membership over time plus confession; enough to evaluate every
// pairwise contact rate.
struct Trajectory {
    int compound_pre = 0;
    int compound_post = 0;
    Confession conf = Confession::FTC;
};

// Sufficient statistics of one pressure quantity (an integral or an
// instantaneous value). The quantity is recovered as
//   b*(la*af + lf*ff + lh*hf) + (la*ar + lf*fr + lh*hr),
// so the statistics depend on event times only, never on the parameters.
struct RateStats {
    double af = 0, ff = 0, hf = 0;  // fever-window multipliers of la, lf, lh
    double ar = 0, fr = 0, hr = 0;  // rash-window multipliers

    double value(const ModelParams& p) const {
        return p.b * (p.lambda_a * af + p.lambda_f * ff + p.lambda_h * hf) +
               (p.lambda_a * ar + p.lambda_f * fr + p.lambda_h * hr);
    }
};

struct CaseInfo {
    double r = 0.0;
    Trajectory traj;
    bool vaccinated = false;
};

// Group of never-infected individuals sharing one pressure trajectory; the
// vaccinated/unvaccinated head counts may depend on the vaccination config.
struct SusceptibleCell {
    Trajectory traj;
    std::vector<double> n_vacc;    // per config index
    std::vector<double> n_unvacc;
};

// Everything the likelihood needs, precomputed once per dataset.
struct LikelihoodContext {
    double n_minus_1 = 0.0;       // N - 1
    double ftc_minus_1 = 0.0;     // n - 1, or 0 when there is a single FTC member
    bool has_move = false;
    double move_day = 0.0;
    double T = 0.0;               // final rash time
    // The fitted model truncates never-infected avoidance at T. Disabling the
    // truncation integrates every infectious window in full, which is the
    // exact density of a completed outbreak; the joint-distribution
    // validation needs that mode.
    bool cap_at_end_time = true;
    int n_configs = 1;
    std::vector<CaseInfo> cases;
    std::vector<SusceptibleCell> cells;

    // (compound, confession) -> group size, pre and post move
    std::vector<double> group_pre, group_post;
    int n_compounds = 0;

    double group(int compound, Confession f, bool pre) const {
        int idx = compound * 2 + (f == Confession::FTC ? 0 : 1);
        return pre ? group_pre[idx] : group_post[idx];
    }

    static LikelihoodContext build(const Population& pop, const std::vector<CaseRecord>& cases);
};

// Per-target pressure statistics for one configuration of event times.
struct PressureStatsTable {
    std::vector<RateStats> case_integral;  // over [e_kappa, e_j]
    std::vector<RateStats> case_instant;   // at e_j-
    std::vector<RateStats> cell_integral;  // over [e_kappa, T]
};

void build_pressure_stats(const LikelihoodContext& ctx, const AugmentedEvents& ev,
                          PressureStatsTable& out);

// log( v + (1-v) * exp(-pressure) ): marginal avoidance factor of one
// never-infected vaccinated individual.
double protection_log_term(double v, double pressure);

// Additive pieces of the log-likelihood; their sum is the return value of
// log_likelihood. Used by tests and the per-term audits.
struct LogLikParts {
    double exposure = 0.0;        // sum of log pressures at exposure instants
    double avoidance_cases = 0.0; // minus integrated pressure on the cases
    double avoidance_unvacc = 0.0;
    double protection_vacc = 0.0; // marginalised never-infected vaccinated terms
    double case_vacc = 0.0;       // log(1-v) per vaccinated case
    double stage = 0.0;           // stage-duration densities

    double total() const {
        return exposure + avoidance_cases + avoidance_unvacc + protection_vacc + case_vacc + stage;
    }
};

// Exact log of the augmented-data likelihood with every protection status
// marginalised out. Returns -inf (never throws) for zero-likelihood states.
double log_likelihood(const ModelParams& params, const AugmentedEvents& ev, int config_index,
                      const StageDurations& stages, const LikelihoodContext& ctx);

LogLikParts log_likelihood_parts(const ModelParams& params, const AugmentedEvents& ev,
                                 int config_index, const StageDurations& stages,
                                 const LikelihoodContext& ctx);

// Assembly from precomputed statistics; used by the sampler so that scalar
// parameter updates skip the pair loop.
double assemble_loglik(const ModelParams& params, const AugmentedEvents& ev, int config_index,
                       const StageDurations& stages, const LikelihoodContext& ctx,
                       const PressureStatsTable& stats);

}  // namespace abk

#endif
