#include "abk/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace abk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Stage { Exposed, Fever, Rash, Done };

struct Active {
    int sim_id;
    int compound;  // current compound, 0 = outside
    Confession conf;
    bool mover;
    Stage stage = Stage::Exposed;
    double t_fever, t_rash, tau;
    double t_end = kInf;  // min(tau, q), known once the rash starts
};

struct Pool {
    int compound;
    Confession conf;
    double n_unvacc = 0;
    double n_vacc = 0;  // vaccinated with protection status not yet revealed
    bool mover = false;
    double size() const { return n_unvacc + n_vacc; }
};

struct Sim {
    const SimConfig& cfg;
    const Population& pop;
    Rng& rng;

    std::vector<Pool> pools;
    std::vector<Active> actives;
    std::vector<double> group_count;  // (compound, confession) -> current size
    int max_compound;

    double first_rash = -1.0;
    double move_abs = kInf;
    double tq_abs = kInf;
    bool move_done = false;
    bool has_move = false;

    SimResult result;

    Sim(const SimConfig& c, const Population& p, Rng& r) : cfg(c), pop(p), rng(r) {
        max_compound = pop.max_compound();
        has_move = pop.move().has_value();
        if (has_move && cfg.anchor_move == CalendarAnchor::IndexExposure)
            move_abs = pop.move()->day;
        if (std::isfinite(cfg.params.t_q) && cfg.anchor_tq == CalendarAnchor::IndexExposure)
            tq_abs = cfg.params.t_q;
        group_count.assign((max_compound + 1) * 2, 0.0);
        for (int cm = 0; cm <= max_compound; ++cm)
            for (Confession f : {Confession::FTC, Confession::NonFTC})
                group_count[idx(cm, f)] = static_cast<double>(pop.census(cm, f));

        auto [mover_vacc, mover_unvacc] = pop.uninfected_mover_counts();
        int mover_case_vacc = 0, mover_case_unvacc = 0;
        if (has_move)
            for (int cid : pop.move()->case_ids)
                (pop.cases()[cid].vaccinated ? mover_case_vacc : mover_case_unvacc)++;
        for (int cm = 0; cm <= max_compound; ++cm) {
            for (Confession f : {Confession::FTC, Confession::NonFTC}) {
                auto [nv, nu] = pop.cell_counts(cm, f, cfg.vacc_config);
                if (has_move && cm == pop.move()->from_compound && f == Confession::FTC) {
                    nv -= mover_vacc + mover_case_vacc;
                    nu -= mover_unvacc + mover_case_unvacc;
                }
                if (nv + nu <= 0) continue;
                Pool pl;
                pl.compound = cm;
                pl.conf = f;
                pl.n_vacc = static_cast<double>(nv);
                pl.n_unvacc = static_cast<double>(nu);
                pools.push_back(pl);
            }
        }
        // Movers are singleton pools so the day-25 relocation can follow them
        // whether or not they are still susceptible. Mover cases from the data
        // are ordinary susceptibles here: a simulation decides on its own who
        // gets infected.
        if (has_move) {
            int total_vacc = mover_vacc + mover_case_vacc;
            int total_unvacc = mover_unvacc + mover_case_unvacc;
            for (int k = 0; k < total_vacc + total_unvacc; ++k) {
                Pool pl;
                pl.compound = pop.move()->from_compound;
                pl.conf = Confession::FTC;
                pl.mover = true;
                (k < total_vacc ? pl.n_vacc : pl.n_unvacc) = 1.0;
                pools.push_back(pl);
            }
        }
    }

    int idx(int compound, Confession f) const {
        return compound * 2 + (f == Confession::FTC ? 0 : 1);
    }

    double pair_rate(const Active& k, const Pool& target) const {
        double nm1 = static_cast<double>(pop.total() - 1);
        double rate;
        if (k.conf == Confession::FTC) {
            rate = cfg.params.lambda_a / nm1;
            if (target.conf == Confession::FTC && pop.ftc_total() > 1)
                rate += cfg.params.lambda_f / static_cast<double>(pop.ftc_total() - 1);
        } else {
            rate = (cfg.params.lambda_a + cfg.params.lambda_f) / nm1;
        }
        if (k.compound > 0 && k.compound == target.compound && k.conf == target.conf) {
            double g = group_count[idx(k.compound, k.conf)];
            if (g > 1.0) rate += cfg.params.lambda_h / (g - 1.0);
        }
        return rate;
    }

    double multiplier(const Active& k) const {
        if (k.stage == Stage::Fever) return cfg.params.b;
        if (k.stage == Stage::Rash) return 1.0;
        return 0.0;
    }

    double total_hazard() const {
        double h = 0.0;
        for (const Active& k : actives) {
            double m = multiplier(k);
            if (m == 0.0) continue;
            for (const Pool& pl : pools) {
                double s = pl.size();
                if (s > 0.0) h += m * s * pair_rate(k, pl);
            }
        }
        return h;
    }

    void expose(int pool_index, int infector_sim_id, double t) {
        Pool& pl = pools[pool_index];
        bool vaccinated;
        if (rng.uniform() * pl.size() < pl.n_unvacc) {
            vaccinated = false;
        } else {
            vaccinated = true;
            if (rng.uniform() < cfg.params.v) {
                // Protection revealed on first contact; never a target again.
                pl.n_vacc -= 1.0;
                result.protected_reveals++;
                return;
            }
        }
        (vaccinated ? pl.n_vacc : pl.n_unvacc) -= 1.0;
        add_case(pl.compound, pl.conf, vaccinated, pl.mover, infector_sim_id, t);
    }

    void add_case(int compound, Confession conf, bool vaccinated, bool mover, int infector,
                  double t) {
        SimCase sc;
        sc.sim_id = static_cast<int>(result.cases.size());
        sc.infector = infector;
        sc.compound_at_exposure = compound;
        sc.confession = conf;
        sc.vaccinated = vaccinated;
        sc.mover = mover;
        sc.e = t;
        sc.i = t + cfg.stages.incubation.sample(rng);
        sc.r = sc.i + cfg.stages.fever.sample(rng);
        sc.tau = sc.r + cfg.stages.rash.sample(rng);
        sc.q = kInf;
        result.cases.push_back(sc);

        Active a;
        a.sim_id = sc.sim_id;
        a.compound = compound;
        a.conf = conf;
        a.mover = mover;
        a.t_fever = sc.i;
        a.t_rash = sc.r;
        a.tau = sc.tau;
        actives.push_back(a);

        if (mover && !move_done) result.mover_infected = true;
    }

    void apply_move() {
        move_done = true;
        const MoveEvent& mv = *pop.move();
        int n_movers = mv.n_vaccinated + mv.n_unvaccinated;
        group_count[idx(mv.from_compound, Confession::FTC)] -= n_movers;
        group_count[idx(mv.to_compound, Confession::FTC)] += n_movers;
        for (Pool& pl : pools)
            if (pl.mover) pl.compound = mv.to_compound;
        for (Active& a : actives)
            if (a.mover) a.compound = mv.to_compound;
    }

    void run() {
        int pool_index = -1;
        for (size_t s = 0; s < pools.size(); ++s) {
            const Pool& pl = pools[s];
            if (pl.mover || pl.compound != cfg.index_compound || pl.conf != cfg.index_confession)
                continue;
            if ((cfg.index_vaccinated ? pl.n_vacc : pl.n_unvacc) > 0.0) {
                pool_index = static_cast<int>(s);
                break;
            }
        }
        if (pool_index < 0) throw std::runtime_error("no individual matches the index-case rule");
        Pool& seed_pool = pools[pool_index];
        (cfg.index_vaccinated ? seed_pool.n_vacc : seed_pool.n_unvacc) -= 1.0;
        add_case(seed_pool.compound, seed_pool.conf, cfg.index_vaccinated, false, -1, 0.0);

        double t = 0.0;
        for (;;) {
            double h = total_hazard();
            double t_exp = h > 0.0 ? t + rng.exponential(h) : kInf;

            double t_trans = kInf;
            int trans_who = -1;
            for (size_t a = 0; a < actives.size(); ++a) {
                const Active& k = actives[a];
                double next = kInf;
                if (k.stage == Stage::Exposed) next = k.t_fever;
                else if (k.stage == Stage::Fever) next = k.t_rash;
                else if (k.stage == Stage::Rash) next = k.t_end;
                if (next < t_trans) {
                    t_trans = next;
                    trans_who = static_cast<int>(a);
                }
            }
            bool move_known = cfg.anchor_move == CalendarAnchor::IndexExposure || first_rash >= 0.0;
            double t_move = (has_move && !move_done && move_known) ? move_abs : kInf;

            if (t_exp <= t_trans && t_exp <= t_move) {
                t = t_exp;
                // Pick the (infector, pool) channel proportional to hazard.
                double u = rng.uniform() * h;
                double acc = 0.0;
                int pick_pool = -1, pick_infector = -1;
                for (const Active& k : actives) {
                    double m = multiplier(k);
                    if (m == 0.0) continue;
                    for (size_t s = 0; s < pools.size(); ++s) {
                        double sz = pools[s].size();
                        if (sz <= 0.0) continue;
                        double contrib = m * sz * pair_rate(k, pools[s]);
                        if (contrib <= 0.0) continue;
                        acc += contrib;
                        pick_pool = static_cast<int>(s);
                        pick_infector = k.sim_id;
                        if (u < acc) break;
                    }
                    if (pick_pool >= 0 && u < acc) break;
                }
                if (pick_pool >= 0) expose(pick_pool, pick_infector, t);
            } else if (t_move <= t_trans) {
                t = t_move;
                apply_move();
            } else if (trans_who >= 0) {
                t = t_trans;
                Active& k = actives[trans_who];
                if (k.stage == Stage::Exposed) {
                    k.stage = Stage::Fever;
                } else if (k.stage == Stage::Fever) {
                    k.stage = Stage::Rash;
                    if (first_rash < 0.0) {
                        first_rash = t;
                        if (has_move && cfg.anchor_move == CalendarAnchor::FirstRash)
                            move_abs = first_rash + pop.move()->day;
                        if (std::isfinite(cfg.params.t_q) && cfg.anchor_tq == CalendarAnchor::FirstRash)
                            tq_abs = first_rash + cfg.params.t_q;
                    }
                    double q = kInf;
                    if (std::isfinite(tq_abs))
                        q = std::max(t, tq_abs) + cfg.stages.quarantine_delay.sample(rng);
                    result.cases[k.sim_id].q = q;
                    k.t_end = std::min(k.tau, q);
                } else {
                    k.stage = Stage::Done;
                }
            } else {
                break;  // no exposures possible, nothing in progress
            }

            bool anyone_left = false;
            for (const Active& k : actives)
                if (k.stage != Stage::Done) anyone_left = true;
            if (!anyone_left) break;
        }

        result.final_size = static_cast<int>(result.cases.size());
        result.first_rash = first_rash;
        double last_rash = first_rash;
        for (const SimCase& c : result.cases) last_rash = std::max(last_rash, c.r);
        result.duration = last_rash - first_rash;
        for (const SimCase& c : result.cases) {
            if (c.confession == Confession::FTC) result.n_ftc++;
            if (c.compound_at_exposure == 0) result.n_outside++;
        }
    }
};

}  // namespace

SimResult simulate(const SimConfig& cfg, const Population& pop, Rng& rng) {
    Sim sim(cfg, pop, rng);
    sim.run();
    return std::move(sim.result);
}

SimResult simulate(const SimConfig& cfg, const Population& pop) {
    Rng rng(cfg.seed);
    return simulate(cfg, pop, rng);
}

ConditionalResult simulate_conditional(const SimConfig& cfg, const Population& pop, int target,
                                       int max_attempts, Rng& rng) {
    if (target < 1) throw std::runtime_error("simulate_conditional: target must be >= 1");
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        SimResult r = simulate(cfg, pop, rng);
        if (r.final_size == target) return {std::move(r), attempt};
    }
    throw std::runtime_error("simulate_conditional: no outbreak of size " + std::to_string(target) +
                             " in " + std::to_string(max_attempts) + " attempts");
}

std::vector<BatchSummary> batch_simulate(const SimConfig& cfg, const Population& pop,
                                         const std::vector<ModelParams>& params_per_run,
                                         int parallelism) {
    int count = static_cast<int>(params_per_run.size());
    std::vector<BatchSummary> out(count);
    if (count == 0) return out;
    int workers = std::max(1, std::min(parallelism, count));

    auto work = [&](int w) {
        for (int run = w; run < count; run += workers) {
            SimConfig c = cfg;
            c.params = params_per_run[run];
            Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(run)));
            SimResult r = simulate(c, pop, rng);
            out[run] = {run, r.final_size, r.duration, r.n_ftc, r.n_outside, r.mover_infected};
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
        for (auto& th : threads) th.join();
    }
    return out;
}

}  // namespace abk
