#include "abk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "abk/diagnostics.hpp"
#include "abk/pressure.hpp"

namespace abk {

ReproductionNumbers reproduction_numbers(const ModelParams& p, const StageDurations& stages) {
    double mu_r = stages.rash.mean;
    double mu_f = stages.fever.mean;
    double mu_q = stages.quarantine_delay.mean;
    double lam_sum = p.lambda_a + p.lambda_f + p.lambda_h;
    ReproductionNumbers r;
    r.R0 = (mu_r + p.b * mu_f) * lam_sum;
    r.RF = p.b * mu_f * lam_sum;
    r.Ra = (mu_r + p.b * mu_f) * p.lambda_a;
    r.Rf = (mu_r + p.b * mu_f) * p.lambda_f;
    r.Rh = (mu_r + p.b * mu_f) * p.lambda_h;
    r.R0_post_control = (mu_q + p.b * mu_f) * lam_sum;
    return r;
}

const ParamSummary& PosteriorSummary::by_name(const std::string& name) const {
    for (const auto& r : rows)
        if (r.name == name) return r;
    throw std::runtime_error("no summary row named " + name);
}

PosteriorSummary summarize_posterior(const std::vector<Sample>& samples,
                                     const StageDurations& stages) {
    if (samples.empty()) throw std::runtime_error("summarize_posterior: no samples");
    auto extract = [&](auto&& get) {
        std::vector<double> v;
        v.reserve(samples.size());
        for (const auto& s : samples) v.push_back(get(s));
        return v;
    };
    auto row = [&](const std::string& name, std::vector<double> v) {
        ParamSummary r;
        r.name = name;
        r.mean = mean_of(v);
        r.median = quantile_of(v, 0.5);
        r.ci_lo = quantile_of(v, 0.025);
        r.ci_hi = quantile_of(v, 0.975);
        r.ess = v.size() >= 10 ? effective_sample_size(v) : static_cast<double>(v.size());
        return r;
    };

    PosteriorSummary out;
    out.rows.push_back(row("lambda_a", extract([](const Sample& s) { return s.params.lambda_a; })));
    out.rows.push_back(row("lambda_f", extract([](const Sample& s) { return s.params.lambda_f; })));
    out.rows.push_back(row("lambda_h", extract([](const Sample& s) { return s.params.lambda_h; })));
    out.rows.push_back(row("v", extract([](const Sample& s) { return s.params.v; })));
    out.rows.push_back(row("b", extract([](const Sample& s) { return s.params.b; })));
    out.rows.push_back(row("t_q", extract([](const Sample& s) { return s.params.t_q; })));
    auto rn = [&](const Sample& s) { return reproduction_numbers(s.params, stages); };
    out.rows.push_back(row("R0", extract([&](const Sample& s) { return rn(s).R0; })));
    out.rows.push_back(row("RF", extract([&](const Sample& s) { return rn(s).RF; })));
    out.rows.push_back(row("Ra", extract([&](const Sample& s) { return rn(s).Ra; })));
    out.rows.push_back(row("Rf", extract([&](const Sample& s) { return rn(s).Rf; })));
    out.rows.push_back(row("Rh", extract([&](const Sample& s) { return rn(s).Rh; })));
    out.rows.push_back(
        row("R0_post_control", extract([&](const Sample& s) { return rn(s).R0_post_control; })));
    return out;
}

WhoInfectedWhom who_infected_whom(const std::vector<Sample>& samples, const Population& pop,
                                  const std::vector<CaseRecord>& cases) {
    if (samples.empty()) throw std::runtime_error("who_infected_whom: no samples");
    int m = static_cast<int>(cases.size());
    WhoInfectedWhom out;
    out.n_cases = m;
    out.prob.assign(m, std::vector<double>(m, 0.0));
    out.index_mass.assign(m, 0.0);

    AugmentedEvents ev;
    ev.r.resize(m);
    for (const auto& c : cases) ev.r[c.case_id] = c.rash_day;

    for (const Sample& s : samples) {
        ev.e = s.e;
        ev.i = s.i;
        ev.tau = s.tau;
        ev.q = s.q;
        for (int j = 0; j < m; ++j) {
            if (j == s.params.kappa) {
                out.index_mass[j] += 1.0;
                continue;
            }
            PressureBreakdown pb =
                pressure_on_left(pop.individual_of_case(j), ev.e[j], s.params, ev, pop);
            if (pb.total <= 0.0)
                throw std::runtime_error("who_infected_whom: retained state has zero pressure");
            for (const auto& [k, a] : pb.per_infector) out.prob[j][k] += a / pb.total;
        }
    }
    double inv = 1.0 / static_cast<double>(samples.size());
    for (int j = 0; j < m; ++j) {
        out.index_mass[j] *= inv;
        for (int k = 0; k < m; ++k) out.prob[j][k] *= inv;
    }
    return out;
}

std::vector<std::map<int, double>> exposure_posterior(const std::vector<Sample>& samples) {
    if (samples.empty()) throw std::runtime_error("exposure_posterior: no samples");
    int m = static_cast<int>(samples.front().e.size());
    std::vector<std::map<int, double>> out(m);
    double inv = 1.0 / static_cast<double>(samples.size());
    for (const Sample& s : samples)
        for (int j = 0; j < m; ++j) out[j][static_cast<int>(std::floor(s.e[j]))] += inv;
    return out;
}

std::vector<double> anchored_sorted_rash(const std::vector<double>& rash_times) {
    std::vector<double> r = rash_times;
    std::sort(r.begin(), r.end());
    double first = r.front();
    for (double& x : r) x -= first;
    return r;
}

RankStats estimate_rank_stats(const SimConfig& cfg, const Population& pop, int m1, int target,
                              int max_attempts, Rng& rng) {
    std::vector<std::vector<double>> draws;
    draws.reserve(m1);
    for (int s = 0; s < m1; ++s) {
        ConditionalResult cr = simulate_conditional(cfg, pop, target, max_attempts, rng);
        std::vector<double> r;
        for (const SimCase& c : cr.result.cases) r.push_back(c.r);
        draws.push_back(anchored_sorted_rash(r));
    }
    RankStats stats;
    stats.mean.assign(target, 0.0);
    stats.var.assign(target, 0.0);
    for (const auto& d : draws)
        for (int j = 0; j < target; ++j) stats.mean[j] += d[j];
    for (int j = 0; j < target; ++j) stats.mean[j] /= m1;
    for (const auto& d : draws)
        for (int j = 0; j < target; ++j) {
            double dev = d[j] - stats.mean[j];
            stats.var[j] += dev * dev;
        }
    for (int j = 0; j < target; ++j) {
        stats.var[j] /= std::max(1, m1 - 1);
        if (stats.var[j] < 1e-9) stats.n_ranks_excluded++;
    }
    return stats;
}

double discrepancy(const std::vector<double>& anchored_sorted, const RankStats& stats,
                   double min_var) {
    if (anchored_sorted.size() != stats.mean.size())
        throw std::runtime_error("discrepancy: rank count mismatch");
    double d = 0.0;
    for (size_t j = 0; j < anchored_sorted.size(); ++j) {
        if (stats.var[j] < min_var) continue;
        double dev = anchored_sorted[j] - stats.mean[j];
        d += dev * dev / stats.var[j];
    }
    return d;
}

double chi_squared_discrepancy(const std::vector<double>& observed_rash, const SimConfig& cfg,
                               const Population& pop, int m1, int max_attempts,
                               std::uint64_t seed) {
    Rng rng(seed);
    int target = static_cast<int>(observed_rash.size());
    RankStats stats = estimate_rank_stats(cfg, pop, m1, target, max_attempts, rng);
    return discrepancy(anchored_sorted_rash(observed_rash), stats);
}

DiscrepancyReport ppp_value(const std::vector<ModelParams>& draws,
                            const std::vector<int>& config_indices,
                            const std::vector<double>& observed_rash, const SimConfig& base,
                            const Population& pop, int m1, int max_attempts, std::uint64_t seed) {
    if (draws.empty()) throw std::runtime_error("ppp_value: no posterior draws");
    auto configs = enumerate_vaccination_configs();
    int target = static_cast<int>(observed_rash.size());
    std::vector<double> obs = anchored_sorted_rash(observed_rash);

    DiscrepancyReport rep;
    rep.M = static_cast<int>(draws.size());
    rep.M1 = m1;
    long long exceed = 0;
    for (size_t i = 0; i < draws.size(); ++i) {
        SimConfig cfg = base;
        cfg.params = draws[i];
        if (!config_indices.empty())
            cfg.vacc_config = configs[config_indices[i] % configs.size()];
        Rng rng(derive_seed(seed, i));
        RankStats stats = estimate_rank_stats(cfg, pop, m1, target, max_attempts, rng);
        double d_obs = discrepancy(obs, stats);
        ConditionalResult rep_run = simulate_conditional(cfg, pop, target, max_attempts, rng);
        std::vector<double> r;
        for (const SimCase& c : rep_run.result.cases) r.push_back(c.r);
        double d_rep = discrepancy(anchored_sorted_rash(r), stats);
        rep.d_obs.push_back(d_obs);
        rep.d_rep.push_back(d_rep);
        if (d_rep >= d_obs) exceed++;
    }
    rep.ppp = static_cast<double>(exceed) / static_cast<double>(rep.M);
    return rep;
}

PredictiveReport predictive_checks(const std::vector<BatchSummary>& runs) {
    if (runs.empty()) throw std::runtime_error("predictive_checks: no runs");
    PredictiveReport rep;
    rep.n_runs = static_cast<long long>(runs.size());
    double sum_size = 0, sum_size_mover = 0, sum_dur = 0, sum_ftc = 0, sum_out = 0;
    for (const auto& r : runs) {
        rep.final_size_hist[r.final_size]++;
        rep.duration_hist[static_cast<int>(std::floor(r.duration))]++;
        sum_size += r.final_size;
        sum_dur += r.duration;
        sum_ftc += static_cast<double>(r.n_ftc) / r.final_size;
        sum_out += static_cast<double>(r.n_outside) / r.final_size;
        if (r.mover_infected) {
            rep.final_size_hist_mover[r.final_size]++;
            sum_size_mover += r.final_size;
            rep.n_mover_runs++;
        }
    }
    rep.mean_final_size = sum_size / rep.n_runs;
    rep.mean_duration = sum_dur / rep.n_runs;
    rep.ftc_fraction = sum_ftc / rep.n_runs;
    rep.outside_fraction = sum_out / rep.n_runs;
    rep.mean_final_size_mover = rep.n_mover_runs > 0 ? sum_size_mover / rep.n_mover_runs : 0.0;
    return rep;
}

CumulativeEnvelope incidence_envelope(const std::vector<std::vector<double>>& anchored_rash_sets,
                                      double max_day) {
    CumulativeEnvelope env;
    if (anchored_rash_sets.empty()) return env;
    for (double day = 0.0; day <= max_day; day += 1.0) {
        std::vector<double> counts;
        counts.reserve(anchored_rash_sets.size());
        for (const auto& rs : anchored_rash_sets) {
            double c = 0;
            for (double r : rs)
                if (r <= day) c += 1;
            counts.push_back(c);
        }
        env.days.push_back(day);
        env.q05.push_back(quantile_of(counts, 0.05));
        env.q25.push_back(quantile_of(counts, 0.25));
        env.q50.push_back(quantile_of(counts, 0.50));
        env.q75.push_back(quantile_of(counts, 0.75));
        env.q95.push_back(quantile_of(counts, 0.95));
    }
    return env;
}

std::vector<SensitivitySetting> default_sensitivity_grid() {
    std::vector<SensitivitySetting> grid;
    StageDurations base;
    grid.push_back({"baseline", base});
    StageDurations half_r = base, dbl_r = base;
    half_r.rash = gamma_from_mean_sd(base.rash.mean / 2.0, base.rash.sd);
    dbl_r.rash = gamma_from_mean_sd(base.rash.mean * 2.0, base.rash.sd);
    grid.push_back({"mu_R_half", half_r});
    grid.push_back({"mu_R_double", dbl_r});
    StageDurations half_q = base, dbl_q = base;
    half_q.quarantine_delay = gamma_from_mean_sd(1.0, 1.0);
    dbl_q.quarantine_delay = gamma_from_mean_sd(4.0, 4.0);
    grid.push_back({"mu_Q_half", half_q});
    grid.push_back({"mu_Q_double", dbl_q});
    return grid;
}

std::vector<SensitivityResult> sensitivity_sweep(const std::vector<SensitivitySetting>& grid,
                                                 const LikelihoodContext& ctx,
                                                 const PriorSpec& priors,
                                                 const ProposalConfig& prop, long long iterations,
                                                 long long burnin, long long thin,
                                                 std::uint64_t seed) {
    if (grid.empty()) throw std::runtime_error("sensitivity_sweep: empty grid");
    std::vector<SensitivityResult> out;
    for (size_t g = 0; g < grid.size(); ++g) {
        RunResult run = run_chain(ctx, grid[g].stages, priors, prop, iterations, burnin, thin,
                                  derive_seed(seed, g));
        SensitivityResult res;
        res.label = grid[g].label;
        res.summary = summarize_posterior(run.samples, grid[g].stages);
        res.samples = std::move(run.samples);
        out.push_back(std::move(res));
    }
    return out;
}

}  // namespace abk
