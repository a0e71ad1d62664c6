#ifndef ABK_ANALYSIS_HPP
#define ABK_ANALYSIS_HPP

#include <map>
#include <string>
#include <vector>

#include "abk/likelihood.hpp"
#include "abk/sampler.hpp"
#include "abk/simulator.hpp"

namespace abk {

struct ReproductionNumbers {
    double R0 = 0, RF = 0;
    double Ra = 0, Rf = 0, Rh = 0;   // single-route decompositions
    double R0_post_control = 0;      // rash stage cut short by quarantine
};

ReproductionNumbers reproduction_numbers(const ModelParams& p, const StageDurations& stages);

struct ParamSummary {
    std::string name;
    double mean = 0, median = 0, ci_lo = 0, ci_hi = 0, ess = 0;
};

struct PosteriorSummary {
    std::vector<ParamSummary> rows;
    const ParamSummary& by_name(const std::string& name) const;
};

// Per-parameter posterior summaries plus the per-sample reproduction numbers.
PosteriorSummary summarize_posterior(const std::vector<Sample>& samples,
                                     const StageDurations& stages);

// Posterior probability that case k infected case j, averaged over retained
// samples; the sample's index case attributes its mass to `index_mass`.
struct WhoInfectedWhom {
    int n_cases = 0;
    std::vector<std::vector<double>> prob;  // prob[j][k]
    std::vector<double> index_mass;         // P(j was the index)
};

WhoInfectedWhom who_infected_whom(const std::vector<Sample>& samples, const Population& pop,
                                  const std::vector<CaseRecord>& cases);

// Per-case posterior of the exposure day, 1-day bins keyed by floor(e).
std::vector<std::map<int, double>> exposure_posterior(const std::vector<Sample>& samples);

// Rank statistics of sorted, first-rash-anchored rash times estimated from
// conditional (fixed final size) simulations.
struct RankStats {
    std::vector<double> mean, var;
    int n_ranks_excluded = 0;  // ranks with variance below the floor
};

RankStats estimate_rank_stats(const SimConfig& cfg, const Population& pop, int m1, int target,
                              int max_attempts, Rng& rng);

// Chi-squared discrepancy of anchored sorted rash times against rank stats;
// near-degenerate ranks (var < min_var) are skipped.
double discrepancy(const std::vector<double>& anchored_sorted, const RankStats& stats,
                   double min_var = 1e-9);

std::vector<double> anchored_sorted_rash(const std::vector<double>& rash_times);

double chi_squared_discrepancy(const std::vector<double>& observed_rash, const SimConfig& cfg,
                               const Population& pop, int m1, int max_attempts,
                               std::uint64_t seed);

struct DiscrepancyReport {
    std::vector<double> d_obs, d_rep;
    double ppp = 0.0;
    int M = 0, M1 = 0;
};

// Posterior predictive p-value: one conditional replicate per posterior draw,
// ties counting toward the upper tail.
DiscrepancyReport ppp_value(const std::vector<ModelParams>& draws,
                            const std::vector<int>& config_indices,
                            const std::vector<double>& observed_rash, const SimConfig& base,
                            const Population& pop, int m1, int max_attempts, std::uint64_t seed);

struct PredictiveReport {
    std::map<int, long long> final_size_hist;
    std::map<int, long long> final_size_hist_mover;  // runs with a pre-move mover infection
    std::map<int, long long> duration_hist;          // 1-day bins
    double mean_final_size = 0, mean_final_size_mover = 0, mean_duration = 0;
    double ftc_fraction = 0, outside_fraction = 0;   // per-run fractions, averaged
    long long n_runs = 0, n_mover_runs = 0;
};

PredictiveReport predictive_checks(const std::vector<BatchSummary>& runs);

// Pointwise quantile envelope of cumulative case counts from conditional runs.
struct CumulativeEnvelope {
    std::vector<double> days;
    std::vector<double> q05, q25, q50, q75, q95;
};

CumulativeEnvelope incidence_envelope(const std::vector<std::vector<double>>& anchored_rash_sets,
                                      double max_day);

struct SensitivitySetting {
    std::string label;
    StageDurations stages;
};

// Baseline plus halved/doubled rash mean and halved/doubled quarantine delay
// (coefficient of variation one).
std::vector<SensitivitySetting> default_sensitivity_grid();

struct SensitivityResult {
    std::string label;
    PosteriorSummary summary;
    std::vector<Sample> samples;
};

std::vector<SensitivityResult> sensitivity_sweep(const std::vector<SensitivitySetting>& grid,
                                                 const LikelihoodContext& ctx,
                                                 const PriorSpec& priors,
                                                 const ProposalConfig& prop, long long iterations,
                                                 long long burnin, long long thin,
                                                 std::uint64_t seed);

}  // namespace abk

#endif
