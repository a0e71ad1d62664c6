#include "abk/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace abk {

double end_time(const std::vector<double>& rash_times) {
    if (rash_times.empty()) throw std::runtime_error("end_time: no cases");
    return *std::max_element(rash_times.begin(), rash_times.end());
}

bool AugmentedEvents::ordering_ok(int kappa) const {
    for (int j = 0; j < n_cases(); ++j) {
        if (!(e[j] < i[j] && i[j] < r[j] && r[j] < tau[j])) return false;
        if (!(q[j] > r[j])) return false;
        if (!(e[kappa] <= e[j])) return false;
    }
    return true;
}

double infectivity_multiplier(int k, double t, double b, const AugmentedEvents& ev) {
    if (t >= ev.i[k] && t < ev.r[k]) return b;
    if (t >= ev.r[k] && t < ev.infectious_end(k)) return 1.0;
    return 0.0;
}

double infectivity_multiplier_left(int k, double t, double b, const AugmentedEvents& ev) {
    if (t > ev.i[k] && t <= ev.r[k]) return b;
    if (t > ev.r[k] && t <= ev.infectious_end(k)) return 1.0;
    return 0.0;
}

}  // namespace abk
