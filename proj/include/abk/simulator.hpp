#ifndef ABK_SIMULATOR_HPP
#define ABK_SIMULATOR_HPP

#include <cstdint>
#include <vector>

#include "abk/model.hpp"
#include "abk/population.hpp"
#include "abk/rng.hpp"

namespace abk {

// Where calendar inputs (t_q, the move day) place their day zero inside a
// simulation. FirstRash matches the case data's day-zero convention (and the
// fitted model); IndexExposure reads them on the simulation clock, day zero
// at the index exposure. Defaults: the relocation follows the outbreak clock
// from the initial exposure, quarantine responds to the first detected rash.
enum class CalendarAnchor { FirstRash, IndexExposure };

// Forward-simulation settings. t_q may be +inf for no restrictions.
struct SimConfig {
    ModelParams params;
    StageDurations stages;
    VaccinationConfig vacc_config;
    std::uint64_t seed = 0;
    CalendarAnchor anchor_move = CalendarAnchor::IndexExposure;
    CalendarAnchor anchor_tq = CalendarAnchor::FirstRash;
    // Index case selection rule: the seed individual's category.
    int index_compound = 1;
    Confession index_confession = Confession::FTC;
    bool index_vaccinated = false;
};

struct SimCase {
    int sim_id = 0;
    int infector = -1;  // sim_id of the source, -1 for the index case
    int compound_at_exposure = 0;
    Confession confession = Confession::FTC;
    bool vaccinated = false;
    bool mover = false;
    double e = 0, i = 0, r = 0, tau = 0, q = 0;  // q = +inf when never quarantined
};

struct SimResult {
    std::vector<SimCase> cases;  // exposure order; [0] is the index case
    int final_size = 0;
    double duration = 0.0;       // last rash - first rash
    double first_rash = 0.0;     // on the simulation clock (index exposed at 0)
    int n_ftc = 0;
    int n_outside = 0;
    bool mover_infected = false;     // some mover exposed before the move
    long long protected_reveals = 0; // vaccinated contacts that proved protected
};

SimResult simulate(const SimConfig& cfg, const Population& pop, Rng& rng);
SimResult simulate(const SimConfig& cfg, const Population& pop);

struct ConditionalResult {
    SimResult result;
    int attempts = 0;
};

// Rejection sampling until the final size hits `target`. Throws (with the
// attempt count in the message) once `max_attempts` simulations all miss.
ConditionalResult simulate_conditional(const SimConfig& cfg, const Population& pop, int target,
                                       int max_attempts, Rng& rng);

struct BatchSummary {
    int run_id = 0;
    int final_size = 0;
    double duration = 0.0;
    int n_ftc = 0;
    int n_outside = 0;
    bool mover_infected = false;
};

// One simulation per parameter set, distributed over `parallelism` workers.
// Seeds derive from cfg.seed and the run index, so results do not depend on
// the scheduling and arrive ordered by run.
std::vector<BatchSummary> batch_simulate(const SimConfig& cfg, const Population& pop,
                                         const std::vector<ModelParams>& params_per_run,
                                         int parallelism);

}  // namespace abk

#endif
