#include "abk/pressure.hpp"

#include <algorithm>
#include <cmath>

namespace abk {

namespace {

int compound_at(const Individual& ind, double t, const Population& pop) {
    if (pop.move() && ind.mover && t >= pop.move()->day) return ind.compound_post;
    return ind.compound_pre;
}

// Per-pair infection rate from case k (as individual) to target, excluding the
// infectivity multiplier.
double pair_rate(const Individual& inf, const Individual& tgt, double t, const ModelParams& p,
                 const Population& pop) {
    double nm1 = static_cast<double>(pop.total() - 1);
    double rate = 0.0;
    bool both_ftc = inf.confession == Confession::FTC && tgt.confession == Confession::FTC;
    if (inf.confession == Confession::FTC) {
        rate += p.lambda_a / nm1;
        if (both_ftc && pop.ftc_total() > 1) rate += p.lambda_f / static_cast<double>(pop.ftc_total() - 1);
    } else {
        rate += (p.lambda_a + p.lambda_f) / nm1;
    }
    int ci = compound_at(inf, t, pop);
    int ct = compound_at(tgt, t, pop);
    if (ci > 0 && ci == ct && inf.confession == tgt.confession) {
        long long group = pop.group_size(ci, inf.confession, t);
        if (group > 1) rate += p.lambda_h / static_cast<double>(group - 1);
    }
    return rate;
}

PressureBreakdown pressure_impl(int id, double t, const ModelParams& params,
                                const AugmentedEvents& ev, const Population& pop, bool left) {
    PressureBreakdown out;
    const Individual tgt = pop.individual(id);
    for (int k = 0; k < ev.n_cases(); ++k) {
        double m = left ? infectivity_multiplier_left(k, t, params.b, ev)
                        : infectivity_multiplier(k, t, params.b, ev);
        if (m == 0.0) continue;
        const Individual inf = pop.individual(pop.individual_of_case(k));
        double tk = left ? std::nextafter(t, -1e300) : t;
        double a = m * pair_rate(inf, tgt, tk, params, pop);
        if (a > 0.0) {
            out.per_infector.emplace_back(k, a);
            out.total += a;
        }
    }
    return out;
}

}  // namespace

PressureBreakdown pressure_on(int id, double t, const ModelParams& params,
                              const AugmentedEvents& ev, const Population& pop) {
    return pressure_impl(id, t, params, ev, pop, false);
}

PressureBreakdown pressure_on_left(int id, double t, const ModelParams& params,
                                   const AugmentedEvents& ev, const Population& pop) {
    return pressure_impl(id, t, params, ev, pop, true);
}

std::vector<double> pressure_breakpoints(const AugmentedEvents& ev, const Population& pop) {
    std::vector<double> pts;
    for (int k = 0; k < ev.n_cases(); ++k) {
        pts.push_back(ev.i[k]);
        pts.push_back(ev.r[k]);
        pts.push_back(ev.infectious_end(k));
    }
    if (pop.move()) pts.push_back(pop.move()->day);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

double integrated_pressure(int id, double t0, double t1, const ModelParams& params,
                           const AugmentedEvents& ev, const Population& pop) {
    if (t1 <= t0) return 0.0;
    std::vector<double> pts = pressure_breakpoints(ev, pop);
    std::vector<double> grid;
    grid.push_back(t0);
    for (double p : pts)
        if (p > t0 && p < t1) grid.push_back(p);
    grid.push_back(t1);
    double total = 0.0;
    for (size_t s = 0; s + 1 < grid.size(); ++s) {
        double mid = 0.5 * (grid[s] + grid[s + 1]);
        total += (grid[s + 1] - grid[s]) * pressure_on(id, mid, params, ev, pop).total;
    }
    return total;
}

}  // namespace abk
