#include "abk/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace abk {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct PairCoeffs {
    double a = 0, f = 0;          // time-independent
    double h_pre = 0, h_post = 0; // within-compound term can change at the move
};

PairCoeffs pair_coeffs(const LikelihoodContext& ctx, const Trajectory& inf, const Trajectory& tgt) {
    PairCoeffs c;
    if (inf.conf == Confession::FTC) {
        c.a = 1.0 / ctx.n_minus_1;
        if (tgt.conf == Confession::FTC && ctx.ftc_minus_1 > 0.0) c.f = 1.0 / ctx.ftc_minus_1;
    } else {
        c.a = 1.0 / ctx.n_minus_1;
        c.f = 1.0 / ctx.n_minus_1;
    }
    if (inf.conf == tgt.conf) {
        if (inf.compound_pre > 0 && inf.compound_pre == tgt.compound_pre) {
            double g = ctx.group(inf.compound_pre, inf.conf, true);
            if (g > 1.0) c.h_pre = 1.0 / (g - 1.0);
        }
        if (inf.compound_post > 0 && inf.compound_post == tgt.compound_post) {
            double g = ctx.group(inf.compound_post, inf.conf, false);
            if (g > 1.0) c.h_post = 1.0 / (g - 1.0);
        }
    }
    return c;
}

// Adds the integral of infector k's emission onto `tgt` over (-inf, cap),
// split into the fever and rash windows and at the move day.
void add_pair_integral(const LikelihoodContext& ctx, const AugmentedEvents& ev, int k,
                       const Trajectory& inf, const Trajectory& tgt, double cap, RateStats& out) {
    double fever_hi = std::min(ev.r[k], cap);
    double rash_hi = std::min(ev.infectious_end(k), cap);
    double fever_len = fever_hi - ev.i[k];
    double rash_len = rash_hi - ev.r[k];
    if (fever_len <= 0.0 && rash_len <= 0.0) return;
    PairCoeffs c = pair_coeffs(ctx, inf, tgt);

    auto split = [&](double lo, double hi, double& pre_len, double& post_len) {
        if (!ctx.has_move) {
            pre_len = hi - lo;
            post_len = 0.0;
            return;
        }
        pre_len = std::max(0.0, std::min(hi, ctx.move_day) - lo);
        post_len = std::max(0.0, hi - std::max(lo, ctx.move_day));
    };
    if (fever_len > 0.0) {
        double pre, post;
        split(ev.i[k], fever_hi, pre, post);
        out.af += c.a * fever_len;
        out.ff += c.f * fever_len;
        out.hf += c.h_pre * pre + c.h_post * post;
    }
    if (rash_len > 0.0) {
        double pre, post;
        split(ev.r[k], rash_hi, pre, post);
        out.ar += c.a * rash_len;
        out.fr += c.f * rash_len;
        out.hr += c.h_pre * pre + c.h_post * post;
    }
}

// Adds infector k's left-limit contribution at time t (fever coefficients if
// i_k < t <= r_k, rash coefficients if r_k < t <= end).
void add_pair_instant(const LikelihoodContext& ctx, const AugmentedEvents& ev, int k,
                      const Trajectory& inf, const Trajectory& tgt, double t, RateStats& out) {
    bool fever = ev.i[k] < t && t <= ev.r[k];
    bool rash = ev.r[k] < t && t <= ev.infectious_end(k);
    if (!fever && !rash) return;
    PairCoeffs c = pair_coeffs(ctx, inf, tgt);
    double h = (!ctx.has_move || t <= ctx.move_day) ? c.h_pre : c.h_post;
    if (fever) {
        out.af += c.a;
        out.ff += c.f;
        out.hf += h;
    } else {
        out.ar += c.a;
        out.fr += c.f;
        out.hr += h;
    }
}

}  // namespace

LikelihoodContext LikelihoodContext::build(const Population& pop,
                                           const std::vector<CaseRecord>& cases) {
    LikelihoodContext ctx;
    ctx.n_minus_1 = static_cast<double>(pop.total() - 1);
    ctx.ftc_minus_1 = pop.ftc_total() > 1 ? static_cast<double>(pop.ftc_total() - 1) : 0.0;
    ctx.has_move = pop.move().has_value();
    ctx.move_day = ctx.has_move ? pop.move()->day : 0.0;
    ctx.n_compounds = pop.max_compound();

    ctx.group_pre.assign((ctx.n_compounds + 1) * 2, 0.0);
    ctx.group_post.assign((ctx.n_compounds + 1) * 2, 0.0);
    for (int c = 0; c <= ctx.n_compounds; ++c)
        for (Confession f : {Confession::FTC, Confession::NonFTC}) {
            int idx = c * 2 + (f == Confession::FTC ? 0 : 1);
            ctx.group_pre[idx] = static_cast<double>(pop.group_size(c, f, ctx.has_move ? ctx.move_day - 1.0 : 0.0));
            ctx.group_post[idx] = static_cast<double>(pop.group_size(c, f, ctx.has_move ? ctx.move_day + 1.0 : 0.0));
        }

    // Populations without symbolic census entries have a single configuration.
    bool symbolic = false;
    for (const auto& row : pop.rows())
        if (row.vaccinated.symbol >= 0 || row.unvaccinated.symbol >= 0) symbolic = true;
    auto configs = enumerate_vaccination_configs();
    if (!symbolic) configs.resize(1);
    ctx.n_configs = static_cast<int>(configs.size());

    double max_r = -1e300;
    for (const auto& c : cases) {
        const Individual& ind = pop.individual(pop.individual_of_case(c.case_id));
        CaseInfo info;
        info.r = c.rash_day;
        info.traj = {ind.compound_pre, ind.compound_post, ind.confession};
        info.vaccinated = c.vaccinated;
        ctx.cases.push_back(info);
        max_r = std::max(max_r, c.rash_day);
    }
    ctx.T = max_r;

    // Never-infected cells: one per (compound, confession) for residents that
    // stay put, one per vaccination status for the uninfected movers, and the
    // two outside groups.
    auto case_counts_in = [&](int compound, Confession f, bool vaccinated) {
        int n = 0;
        for (const auto& c : cases) {
            const Individual& ind = pop.individual(pop.individual_of_case(c.case_id));
            if (ind.compound_pre == compound && ind.confession == f && c.vaccinated == vaccinated) n++;
        }
        return n;
    };
    auto [mover_vacc, mover_unvacc] = pop.uninfected_mover_counts();

    for (int c = 0; c <= ctx.n_compounds; ++c) {
        for (Confession f : {Confession::FTC, Confession::NonFTC}) {
            if (pop.census(c, f) == 0) continue;
            SusceptibleCell cell;
            cell.traj = {c, c, f};
            int cv = case_counts_in(c, f, true);
            int cu = case_counts_in(c, f, false);
            int mv = 0, mu = 0;
            if (pop.move() && c == pop.move()->from_compound && f == Confession::FTC) {
                mv = mover_vacc;
                mu = mover_unvacc;
            }
            for (const auto& cfg : configs) {
                auto [nv, nu] = pop.cell_counts(c, f, cfg);
                double rv = static_cast<double>(nv) - cv - mv;
                double ru = static_cast<double>(nu) - cu - mu;
                if (rv < 0.0 || ru < 0.0)
                    throw std::runtime_error("susceptible cell count went negative");
                cell.n_vacc.push_back(rv);
                cell.n_unvacc.push_back(ru);
            }
            ctx.cells.push_back(std::move(cell));
        }
    }
    if (pop.move() && (mover_vacc > 0 || mover_unvacc > 0)) {
        SusceptibleCell cell;
        cell.traj = {pop.move()->from_compound, pop.move()->to_compound, Confession::FTC};
        cell.n_vacc.assign(ctx.n_configs, static_cast<double>(mover_vacc));
        cell.n_unvacc.assign(ctx.n_configs, static_cast<double>(mover_unvacc));
        ctx.cells.push_back(std::move(cell));
    }

    // Cross-check: cells plus cases account for the whole population.
    for (int g = 0; g < ctx.n_configs; ++g) {
        double tot = static_cast<double>(cases.size());
        for (const auto& cell : ctx.cells) tot += cell.n_vacc[g] + cell.n_unvacc[g];
        if (tot != static_cast<double>(pop.total()))
            throw std::runtime_error("cell partition does not cover the population");
    }
    return ctx;
}

void build_pressure_stats(const LikelihoodContext& ctx, const AugmentedEvents& ev,
                          PressureStatsTable& out) {
    int m = ev.n_cases();
    out.case_integral.assign(m, RateStats{});
    out.case_instant.assign(m, RateStats{});
    out.cell_integral.assign(ctx.cells.size(), RateStats{});
    for (int k = 0; k < m; ++k) {
        const Trajectory& inf = ctx.cases[k].traj;
        for (int j = 0; j < m; ++j) {
            if (j == k) continue;
            add_pair_integral(ctx, ev, k, inf, ctx.cases[j].traj, ev.e[j], out.case_integral[j]);
            add_pair_instant(ctx, ev, k, inf, ctx.cases[j].traj, ev.e[j], out.case_instant[j]);
        }
        double cell_cap = ctx.cap_at_end_time ? ctx.T : 1e300;
        for (size_t s = 0; s < ctx.cells.size(); ++s)
            add_pair_integral(ctx, ev, k, inf, ctx.cells[s].traj, cell_cap, out.cell_integral[s]);
    }
}

double protection_log_term(double v, double pressure) {
    if (v <= 0.0) return -pressure;
    return std::log(v + (1.0 - v) * std::exp(-pressure));
}

LogLikParts log_likelihood_parts(const ModelParams& params, const AugmentedEvents& ev,
                                 int config_index, const StageDurations& stages,
                                 const LikelihoodContext& ctx) {
    PressureStatsTable stats;
    build_pressure_stats(ctx, ev, stats);

    LogLikParts parts;
    int m = ev.n_cases();
    for (int j = 0; j < m; ++j) {
        double x_i = ev.i[j] - ev.e[j];
        double x_f = ev.r[j] - ev.i[j];
        double x_r = ev.tau[j] - ev.r[j];
        double x_q = ev.q[j] - std::max(ev.r[j], params.t_q);
        parts.stage += stages.incubation.log_pdf(x_i) + stages.fever.log_pdf(x_f) +
                       stages.rash.log_pdf(x_r) + stages.quarantine_delay.log_pdf(x_q);
        if (j != params.kappa) {
            double lam = stats.case_instant[j].value(params);
            parts.exposure += lam > 0.0 ? std::log(lam) : kNegInf;
        }
        parts.avoidance_cases -= stats.case_integral[j].value(params);
        if (ctx.cases[j].vaccinated)
            parts.case_vacc += params.v < 1.0 ? std::log(1.0 - params.v) : kNegInf;
    }
    for (size_t s = 0; s < ctx.cells.size(); ++s) {
        double E = stats.cell_integral[s].value(params);
        parts.avoidance_unvacc -= ctx.cells[s].n_unvacc[config_index] * E;
        double nv = ctx.cells[s].n_vacc[config_index];
        if (nv > 0.0) parts.protection_vacc += nv * protection_log_term(params.v, E);
    }
    return parts;
}

double assemble_loglik(const ModelParams& params, const AugmentedEvents& ev, int config_index,
                       const StageDurations& stages, const LikelihoodContext& ctx,
                       const PressureStatsTable& stats) {
    double ll = 0.0;
    int m = ev.n_cases();
    for (int j = 0; j < m; ++j) {
        double x_i = ev.i[j] - ev.e[j];
        double x_f = ev.r[j] - ev.i[j];
        double x_r = ev.tau[j] - ev.r[j];
        double x_q = ev.q[j] - std::max(ev.r[j], params.t_q);
        if (x_i <= 0.0 || x_f <= 0.0 || x_r <= 0.0 || x_q <= 0.0) return kNegInf;
        ll += stages.incubation.log_pdf(x_i) + stages.fever.log_pdf(x_f) +
              stages.rash.log_pdf(x_r) + stages.quarantine_delay.log_pdf(x_q);
    }
    for (int j = 0; j < m; ++j) {
        if (j != params.kappa) {
            double lam = stats.case_instant[j].value(params);
            if (!(lam > 0.0)) return kNegInf;
            ll += std::log(lam);
        }
        ll -= stats.case_integral[j].value(params);
    }
    if (params.v >= 1.0) {
        for (int j = 0; j < m; ++j)
            if (ctx.cases[j].vaccinated) return kNegInf;
    } else {
        double log1mv = std::log(1.0 - params.v);
        for (int j = 0; j < m; ++j)
            if (ctx.cases[j].vaccinated) ll += log1mv;
    }
    for (size_t s = 0; s < ctx.cells.size(); ++s) {
        double E = stats.cell_integral[s].value(params);
        ll -= ctx.cells[s].n_unvacc[config_index] * E;
        double nv = ctx.cells[s].n_vacc[config_index];
        if (nv > 0.0) ll += nv * protection_log_term(params.v, E);
    }
    return ll;
}

double log_likelihood(const ModelParams& params, const AugmentedEvents& ev, int config_index,
                      const StageDurations& stages, const LikelihoodContext& ctx) {
    PressureStatsTable stats;
    build_pressure_stats(ctx, ev, stats);
    return assemble_loglik(params, ev, config_index, stages, ctx, stats);
}

}  // namespace abk
