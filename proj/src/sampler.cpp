#include "abk/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace abk {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logit(double p) { return std::log(p / (1.0 - p)); }
double inv_logit(double x) { return 1.0 / (1.0 + std::exp(-x)); }
}  // namespace

const UpdateCounter& AcceptanceReport::by_name(const std::string& name) const {
    for (const auto& c : counters)
        if (c.name == name) return c;
    throw std::runtime_error("no acceptance counter named " + name);
}

Sampler::Sampler(const LikelihoodContext& ctx, const StageDurations& stages,
                 const PriorSpec& priors, const ProposalConfig& prop)
    : ctx_(ctx), stages_(stages), priors_(priors), prop_(prop) {
    tuners_ = {StepSizeTuner(prop.scale_log_lambda_a), StepSizeTuner(prop.scale_log_lambda_f),
               StepSizeTuner(prop.scale_log_lambda_h), StepSizeTuner(prop.scale_logit_v),
               StepSizeTuner(prop.scale_log_b),        StepSizeTuner(prop.scale_tq),
               StepSizeTuner(prop.scale_tq_shift)};
    const char* names[kNumCounters] = {"lambda_a", "lambda_f",   "lambda_h", "v",     "b",
                                       "t_q",      "t_q_shift",  "case_times", "kappa", "config"};
    for (int c = 0; c < kNumCounters; ++c) counters_[c].name = names[c];
    adapting_ = prop.adapt;
}

double Sampler::stage_terms(const AugmentedEvents& ev, int j, double t_q) const {
    double x_i = ev.i[j] - ev.e[j];
    double x_f = ev.r[j] - ev.i[j];
    double x_r = ev.tau[j] - ev.r[j];
    double x_q = ev.q[j] - std::max(ev.r[j], t_q);
    if (x_i <= 0.0 || x_f <= 0.0 || x_r <= 0.0 || x_q <= 0.0) return kNegInf;
    return stages_.incubation.log_pdf(x_i) + stages_.fever.log_pdf(x_f) +
           stages_.rash.log_pdf(x_r) + stages_.quarantine_delay.log_pdf(x_q);
}

ChainState Sampler::init_state(Rng& rng) const {
    ChainState st;
    st.params.lambda_a = 0.1;
    st.params.lambda_f = 0.1;
    st.params.lambda_h = 0.1;
    st.params.v = 0.8;
    st.params.b = 0.5;
    st.params.t_q = prop_.tq_init;
    st.config_index = 0;

    int m = static_cast<int>(ctx_.cases.size());
    // Index case: earliest rash, restricted to unvaccinated cases if required.
    int kappa = -1;
    for (int j = 0; j < m; ++j) {
        if (priors_.kappa_unvaccinated_only && ctx_.cases[j].vaccinated) continue;
        if (kappa < 0 || ctx_.cases[j].r < ctx_.cases[kappa].r) kappa = j;
    }
    if (kappa < 0) throw std::runtime_error("no admissible index case");
    st.params.kappa = kappa;

    st.events.r.resize(m);
    st.events.e.resize(m);
    st.events.i.resize(m);
    st.events.tau.resize(m);
    st.events.q.resize(m);
    for (int j = 0; j < m; ++j) st.events.r[j] = ctx_.cases[j].r;

    for (int attempt = 0; attempt < prop_.max_init_attempts; ++attempt) {
        for (int j = 0; j < m; ++j) {
            double r = st.events.r[j];
            st.events.i[j] = r - stages_.fever.sample(rng);
            st.events.e[j] = st.events.i[j] - stages_.incubation.sample(rng);
            st.events.tau[j] = r + stages_.rash.sample(rng);
            st.events.q[j] = std::max(r, st.params.t_q) + stages_.quarantine_delay.sample(rng);
        }
        refresh(st);
        if (std::isfinite(st.loglik)) return st;
    }
    throw std::runtime_error("init_state: no finite-likelihood start after " +
                             std::to_string(prop_.max_init_attempts) + " attempts");
}

void Sampler::refresh(ChainState& state) const {
    build_pressure_stats(ctx_, state.events, state.stats);
    state.loglik = assemble_loglik(state.params, state.events, state.config_index, stages_, ctx_,
                                   state.stats);
}

double Sampler::fresh_loglik(const ChainState& state) const {
    return log_likelihood(state.params, state.events, state.config_index, stages_, ctx_);
}

bool Sampler::scalar_mh(ChainState& state, const ModelParams& proposed, double log_extra,
                        int counter, StepSizeTuner& tuner, Rng& rng) {
    counters_[counter].proposed++;
    double ll_new = assemble_loglik(proposed, state.events, state.config_index, stages_, ctx_,
                                    state.stats);
    double log_ratio = ll_new - state.loglik + log_extra;
    double accept_prob = 0.0;
    if (std::isfinite(log_ratio))
        accept_prob = std::exp(std::min(0.0, log_ratio));
    bool accept = rng.uniform() < accept_prob;
    if (accept) {
        state.params = proposed;
        state.loglik = ll_new;
        counters_[counter].accepted++;
    }
    if (adapting_) tuner.observe(accept_prob, prop_.target_accept);
    return accept;
}

bool Sampler::update_rate(ChainState& state, int which, Rng& rng) {
    double cur = which == 0   ? state.params.lambda_a
                 : which == 1 ? state.params.lambda_f
                              : state.params.lambda_h;
    double prop = cur * std::exp(tuners_[which].scale() * rng.normal());
    ModelParams p = state.params;
    (which == 0 ? p.lambda_a : which == 1 ? p.lambda_f : p.lambda_h) = prop;
    if (!std::isfinite(priors_.log_prior_rate(prop))) {
        counters_[which].proposed++;
        if (adapting_) tuners_[which].observe(0.0, prop_.target_accept);
        return false;
    }
    // Multiplicative walk: Jacobian log(prop/cur); vague gamma prior ratio.
    double log_extra = priors_.log_prior_rate(prop) - priors_.log_prior_rate(cur) +
                       std::log(prop) - std::log(cur);
    return scalar_mh(state, p, log_extra, which, tuners_[which], rng);
}

bool Sampler::update_v(ChainState& state, Rng& rng) {
    double cur = state.params.v;
    double x = logit(cur) + tuners_[3].scale() * rng.normal();
    double prop = inv_logit(x);
    ModelParams p = state.params;
    p.v = prop;
    if (!std::isfinite(priors_.log_prior_v(prop))) {
        counters_[kV].proposed++;
        if (adapting_) tuners_[3].observe(0.0, prop_.target_accept);
        return false;
    }
    double log_extra = std::log(prop * (1.0 - prop)) - std::log(cur * (1.0 - cur));
    return scalar_mh(state, p, log_extra, kV, tuners_[3], rng);
}

bool Sampler::update_b(ChainState& state, Rng& rng) {
    double cur = state.params.b;
    double prop = cur * std::exp(tuners_[4].scale() * rng.normal());
    ModelParams p = state.params;
    p.b = prop;
    if (!std::isfinite(priors_.log_prior_b(prop))) {
        counters_[kB].proposed++;
        if (adapting_) tuners_[4].observe(0.0, prop_.target_accept);
        return false;
    }
    double log_extra = std::log(prop) - std::log(cur);
    return scalar_mh(state, p, log_extra, kB, tuners_[4], rng);
}

bool Sampler::update_tq(ChainState& state, Rng& rng) {
    double prop = state.params.t_q + tuners_[5].scale() * rng.normal();
    ModelParams p = state.params;
    p.t_q = prop;
    if (!std::isfinite(priors_.log_prior_tq(prop))) {
        counters_[kTq].proposed++;
        if (adapting_) tuners_[5].observe(0.0, prop_.target_accept);
        return false;
    }
    return scalar_mh(state, p, 0.0, kTq, tuners_[5], rng);
}

bool Sampler::update_tq_shift(ChainState& state, Rng& rng) {
    counters_[kTqShift].proposed++;
    // Mixture kernel: mostly tuned steps, sometimes a long jump.
    double scale = tuners_[6].scale() * (rng.uniform() < 0.25 ? 4.0 : 1.0);
    double tq_old = state.params.t_q;
    double tq_new = tq_old + scale * rng.normal();
    AugmentedEvents& ev = state.events;
    int m = ev.n_cases();

    if (!std::isfinite(priors_.log_prior_tq(tq_new))) {
        if (adapting_) tuners_[6].observe(0.0, prop_.target_accept);
        return false;
    }

    // Redraw every quarantine time anchored to either t_q from its proposal
    // law q ~ max(r, t_q') + f_Q. Those proposal densities cancel the f_Q
    // likelihood factors both ways, leaving a pure window-change ratio, so
    // the quarantine ensemble tracks t_q instead of boxing it in.
    std::vector<double> q_old = ev.q;
    double log_hastings = 0.0;
    for (int j = 0; j < m; ++j) {
        if (ev.r[j] >= std::max(tq_old, tq_new)) continue;
        double q_prop = std::max(ev.r[j], tq_new) + stages_.quarantine_delay.sample(rng);
        // forward/reverse proposal densities against the state's f_Q factors
        log_hastings += stages_.quarantine_delay.log_pdf(q_old[j] - std::max(ev.r[j], tq_old)) -
                        stages_.quarantine_delay.log_pdf(q_prop - std::max(ev.r[j], tq_new));
        ev.q[j] = q_prop;
    }
    ModelParams p = state.params;
    p.t_q = tq_new;
    build_pressure_stats(ctx_, ev, scratch_);
    double ll_new = assemble_loglik(p, ev, state.config_index, stages_, ctx_, scratch_);
    double log_ratio = ll_new - state.loglik + log_hastings;
    double accept_prob = std::isfinite(log_ratio) ? std::exp(std::min(0.0, log_ratio)) : 0.0;
    bool accept = rng.uniform() < accept_prob;
    if (accept) {
        state.params = p;
        state.loglik = ll_new;
        std::swap(state.stats, scratch_);
        counters_[kTqShift].accepted++;
    } else {
        ev.q = std::move(q_old);
    }
    if (adapting_) tuners_[6].observe(accept_prob, prop_.target_accept);
    return accept;
}

bool Sampler::update_case_times(ChainState& state, int j, Rng& rng) {
    counters_[kCase].proposed++;
    AugmentedEvents& ev = state.events;
    double old_e = ev.e[j], old_i = ev.i[j], old_tau = ev.tau[j], old_q = ev.q[j];
    double old_stage = stage_terms(ev, j, state.params.t_q);

    double r = ev.r[j];
    double i_new = r - stages_.fever.sample(rng);
    double e_new = i_new - stages_.incubation.sample(rng);
    double tau_new = r + stages_.rash.sample(rng);
    double q_new = std::max(r, state.params.t_q) + stages_.quarantine_delay.sample(rng);

    if (j == state.params.kappa) {
        // The index exposure must stay the earliest.
        for (int l = 0; l < ev.n_cases(); ++l)
            if (l != j && ev.e[l] < e_new) return false;
    }

    ev.e[j] = e_new;
    ev.i[j] = i_new;
    ev.tau[j] = tau_new;
    ev.q[j] = q_new;
    build_pressure_stats(ctx_, ev, scratch_);
    double ll_new = assemble_loglik(state.params, ev, state.config_index, stages_, ctx_, scratch_);
    double new_stage = stage_terms(ev, j, state.params.t_q);

    // Independence proposal from the stage distributions: the proposal density
    // cancels the per-case stage factors of the likelihood.
    double log_ratio = (ll_new - new_stage) - (state.loglik - old_stage);
    bool accept = std::isfinite(log_ratio) && std::log(rng.uniform()) < log_ratio;
    if (accept) {
        state.loglik = ll_new;
        std::swap(state.stats, scratch_);
        counters_[kCase].accepted++;
    } else {
        ev.e[j] = old_e;
        ev.i[j] = old_i;
        ev.tau[j] = old_tau;
        ev.q[j] = old_q;
    }
    return accept;
}

bool Sampler::update_kappa(ChainState& state, Rng& rng) {
    int m = state.events.n_cases();
    std::vector<int> candidates;
    for (int j = 0; j < m; ++j) {
        if (j == state.params.kappa) continue;
        if (priors_.kappa_unvaccinated_only && ctx_.cases[j].vaccinated) continue;
        candidates.push_back(j);
    }
    if (candidates.empty()) return false;
    counters_[kKappa].proposed++;

    int old_k = state.params.kappa;
    int new_k = candidates[rng.uniform_int(static_cast<int>(candidates.size()))];
    AugmentedEvents& ev = state.events;
    double old_e_new_k = ev.e[new_k], old_e_old_k = ev.e[old_k];

    // Jointly repropose both exposures from their incubation-anchored laws.
    double e_new_k = ev.i[new_k] - stages_.incubation.sample(rng);
    double e_old_k = ev.i[old_k] - stages_.incubation.sample(rng);

    double q_fwd = stages_.incubation.log_pdf(ev.i[new_k] - e_new_k) +
                   stages_.incubation.log_pdf(ev.i[old_k] - e_old_k);
    double q_rev = stages_.incubation.log_pdf(ev.i[new_k] - old_e_new_k) +
                   stages_.incubation.log_pdf(ev.i[old_k] - old_e_old_k);

    ModelParams p = state.params;
    p.kappa = new_k;
    ev.e[new_k] = e_new_k;
    ev.e[old_k] = e_old_k;
    build_pressure_stats(ctx_, ev, scratch_);
    double ll_new = assemble_loglik(p, ev, state.config_index, stages_, ctx_, scratch_);

    double log_ratio = ll_new - state.loglik + q_rev - q_fwd;
    bool accept = std::isfinite(log_ratio) && std::log(rng.uniform()) < log_ratio;
    if (accept) {
        state.params = p;
        state.loglik = ll_new;
        std::swap(state.stats, scratch_);
        counters_[kKappa].accepted++;
    } else {
        ev.e[new_k] = old_e_new_k;
        ev.e[old_k] = old_e_old_k;
    }
    return accept;
}

bool Sampler::update_vax_config(ChainState& state, Rng& rng) {
    if (ctx_.n_configs <= 1) return false;
    counters_[kConfig].proposed++;
    int prop = rng.uniform_int(ctx_.n_configs - 1);
    if (prop >= state.config_index) prop++;
    double ll_new = assemble_loglik(state.params, state.events, prop, stages_, ctx_, state.stats);
    double log_ratio = ll_new - state.loglik;
    bool accept = std::isfinite(log_ratio) && std::log(rng.uniform()) < log_ratio;
    if (accept) {
        state.config_index = prop;
        state.loglik = ll_new;
        counters_[kConfig].accepted++;
    }
    return accept;
}

void Sampler::sweep(ChainState& state, Rng& rng) {
    update_rate(state, 0, rng);
    update_rate(state, 1, rng);
    update_rate(state, 2, rng);
    update_v(state, rng);
    update_b(state, rng);
    update_tq(state, rng);
    for (int rep = 0; rep < 6; ++rep) update_tq_shift(state, rng);
    std::vector<int> order(state.events.n_cases());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    for (int j : order) update_case_times(state, j, rng);
    update_kappa(state, rng);
    update_vax_config(state, rng);
}

AcceptanceReport Sampler::acceptance_report() const {
    AcceptanceReport rep;
    rep.counters.assign(counters_.begin(), counters_.end());
    return rep;
}

RunResult run_chain(const LikelihoodContext& ctx, const StageDurations& stages,
                    const PriorSpec& priors, const ProposalConfig& prop, long long iterations,
                    long long burnin, long long thin, std::uint64_t seed,
                    const std::function<void(long long)>& progress) {
    Rng rng(seed);
    Sampler sampler(ctx, stages, priors, prop);
    RunResult out;
    out.sweeps = iterations;
    if (iterations <= 0) {
        out.report = sampler.acceptance_report();
        return out;
    }
    ChainState state = sampler.init_state(rng);
    for (long long sweep = 1; sweep <= iterations; ++sweep) {
        sampler.set_adapting(prop.adapt && sweep <= burnin);
        sampler.sweep(state, rng);
        if (sweep % 1000 == 0) {
            double fresh = sampler.fresh_loglik(state);
            if (std::abs(fresh - state.loglik) > 1e-8 * std::max(1.0, std::abs(fresh)))
                throw std::runtime_error("cached log-likelihood drifted from fresh evaluation");
            state.loglik = fresh;
        }
        if (sweep > burnin && (sweep - burnin) % thin == 0) {
            Sample s;
            s.iter = sweep;
            s.params = state.params;
            s.e_kappa = state.e_kappa();
            s.config_index = state.config_index;
            s.loglik = state.loglik;
            s.e = state.events.e;
            s.i = state.events.i;
            s.tau = state.events.tau;
            s.q = state.events.q;
            out.samples.push_back(std::move(s));
        }
        if (progress && sweep % 1000 == 0) progress(sweep);
    }
    out.report = sampler.acceptance_report();
    out.final_state = std::move(state);
    return out;
}

}  // namespace abk
