#ifndef ABK_SAMPLER_HPP
#define ABK_SAMPLER_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "abk/likelihood.hpp"
#include "abk/priors.hpp"
#include "abk/rng.hpp"

namespace abk {

// Random-walk scales; the non-positive parameters walk on transformed scales
// so proposals never leave the support.
struct ProposalConfig {
    double scale_log_lambda_a = 0.5;
    double scale_log_lambda_f = 0.5;
    double scale_log_lambda_h = 0.3;
    double scale_logit_v = 0.6;
    double scale_log_b = 0.7;
    double scale_tq = 2.5;
    double scale_tq_shift = 3.0;    // rigid shift of t_q with its anchored q's
    bool adapt = true;              // Robbins-Monro during burn-in only
    double target_accept = 0.234;
    double tq_init = 50.0;
    int max_init_attempts = 1000;
};

// Scalar step-size tuner driven toward a target acceptance probability.
// Gain decays as k^-0.6; frozen once adaptation ends.
class StepSizeTuner {
  public:
    StepSizeTuner() = default;
    explicit StepSizeTuner(double initial) : scale_(initial) {}
    double scale() const { return scale_; }
    void observe(double accept_prob, double target) {
        k_ += 1.0;
        double factor = std::exp((accept_prob - target) / std::pow(k_, 0.6));
        scale_ = std::min(1e4, std::max(1e-6, scale_ * factor));
    }

  private:
    double scale_ = 1.0;
    double k_ = 0.0;
};

struct ChainState {
    ModelParams params;
    AugmentedEvents events;
    int config_index = 0;
    double loglik = 0.0;
    PressureStatsTable stats;  // pressure statistics for the current events

    double e_kappa() const { return events.e[params.kappa]; }
};

struct Sample {
    long long iter = 0;
    ModelParams params;
    double e_kappa = 0.0;
    int config_index = 0;
    double loglik = 0.0;
    std::vector<double> e, i, tau, q;
};

struct UpdateCounter {
    std::string name;
    long long proposed = 0;
    long long accepted = 0;
    double rate() const { return proposed > 0 ? static_cast<double>(accepted) / proposed : 0.0; }
};

struct AcceptanceReport {
    std::vector<UpdateCounter> counters;
    const UpdateCounter& by_name(const std::string& name) const;
};

// Metropolis-within-Gibbs data-augmentation sampler. One instance drives one
// chain; the shared context is read-only.
class Sampler {
  public:
    Sampler(const LikelihoodContext& ctx, const StageDurations& stages, const PriorSpec& priors,
            const ProposalConfig& prop);

    ChainState init_state(Rng& rng) const;
    // Rebuilds statistics and the cached log-likelihood for externally
    // assembled states (forward-simulated ones in particular).
    void refresh(ChainState& state) const;
    double fresh_loglik(const ChainState& state) const;

    bool update_rate(ChainState& state, int which, Rng& rng);  // 0/1/2 -> la/lf/lh
    bool update_v(ChainState& state, Rng& rng);
    bool update_b(ChainState& state, Rng& rng);
    bool update_tq(ChainState& state, Rng& rng);
    // Translates t_q and every quarantine time anchored to it by one Gaussian
    // step; proposals that would change the anchor set are rejected. The plain
    // walk alone crawls against the min-q barrier (the conditional density of
    // t_q rises right up to it), so this move does the long-range mixing.
    bool update_tq_shift(ChainState& state, Rng& rng);
    bool update_case_times(ChainState& state, int j, Rng& rng);
    bool update_kappa(ChainState& state, Rng& rng);
    bool update_vax_config(ChainState& state, Rng& rng);

    // One full sweep: six scalar updates, one block update per case in random
    // order, a kappa swap and a config swap.
    void sweep(ChainState& state, Rng& rng);

    void set_adapting(bool adapting) { adapting_ = adapting; }
    AcceptanceReport acceptance_report() const;
    const LikelihoodContext& context() const { return ctx_; }
    const StageDurations& stages() const { return stages_; }
    const PriorSpec& priors() const { return priors_; }

  private:
    enum Counter { kLa, kLf, kLh, kV, kB, kTq, kTqShift, kCase, kKappa, kConfig, kNumCounters };

    double stage_terms(const AugmentedEvents& ev, int j, double t_q) const;
    bool scalar_mh(ChainState& state, const ModelParams& proposed, double log_extra, int counter,
                   StepSizeTuner& tuner, Rng& rng);

    const LikelihoodContext& ctx_;
    StageDurations stages_;
    PriorSpec priors_;
    ProposalConfig prop_;
    bool adapting_ = true;
    std::array<StepSizeTuner, 7> tuners_;
    std::array<UpdateCounter, kNumCounters> counters_;
    mutable PressureStatsTable scratch_;
};

struct RunResult {
    std::vector<Sample> samples;
    AcceptanceReport report;
    ChainState final_state;
    long long sweeps = 0;
};

// Runs a single chain: `iterations` sweeps in total, the first `burnin` of
// which adapt and are discarded; every `thin`-th state afterwards is retained.
// Cached log-likelihoods are re-verified against fresh evaluations every
// 1,000 sweeps.
RunResult run_chain(const LikelihoodContext& ctx, const StageDurations& stages,
                    const PriorSpec& priors, const ProposalConfig& prop, long long iterations,
                    long long burnin, long long thin, std::uint64_t seed,
                    const std::function<void(long long)>& progress = nullptr);

}  // namespace abk

#endif
