#ifndef ABK_PRESSURE_HPP
#define ABK_PRESSURE_HPP

#include <vector>

#include "abk/model.hpp"
#include "abk/population.hpp"

namespace abk {

// Additive decomposition of the infectious pressure on one susceptible:
// total = sum of the per-infector contributions a_k(t).
struct PressureBreakdown {
    double total = 0.0;
    std::vector<std::pair<int, double>> per_infector;  // (case id, a_k(t))
};

// Instantaneous hazard acting on individual `id` at time t. The caller is
// responsible for only asking about individuals susceptible at t.
PressureBreakdown pressure_on(int id, double t, const ModelParams& params,
                              const AugmentedEvents& ev, const Population& pop);

// As above, with the infectivity multipliers taken as left limits m(k,t-).
PressureBreakdown pressure_on_left(int id, double t, const ModelParams& params,
                                   const AugmentedEvents& ev, const Population& pop);

// Times at which any pressure trajectory can change: fever onsets, rash
// onsets, infectious ends, and the move day. Sorted and deduplicated.
std::vector<double> pressure_breakpoints(const AugmentedEvents& ev, const Population& pop);

// Exact integral of the pressure on `id` over [t0, t1], summing constant
// pieces between breakpoints.
double integrated_pressure(int id, double t0, double t1, const ModelParams& params,
                           const AugmentedEvents& ev, const Population& pop);

}  // namespace abk

#endif
