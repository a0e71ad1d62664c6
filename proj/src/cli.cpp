#include "abk/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "abk/csv.hpp"
#include "abk/diagnostics.hpp"

namespace abk {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct ManifestScope {
    RunManifest manifest;
    std::string dir;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    ManifestScope(const RunConfig& cfg, const std::string& command) : dir(cfg.output_dir) {
        fs::create_directories(dir);
        manifest.command = command;
        manifest.config_hash = config_hash(cfg);
        write_manifest(dir, manifest);
    }
    void add_output(const std::string& file) { manifest.outputs.push_back(file); }
    void finish() {
        manifest.status = "complete";
        manifest.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_manifest(dir, manifest);
    }
};

std::vector<double> observed_rash(const Dataset& data) {
    std::vector<double> r;
    for (const auto& c : data.cases) r.push_back(c.rash_day);
    return r;
}

json summary_to_json(const PosteriorSummary& summary) {
    json params = json::object();
    for (const auto& row : summary.rows) {
        params[row.name] = {{"mean", row.mean},
                            {"median", row.median},
                            {"ci_lo", row.ci_lo},
                            {"ci_hi", row.ci_hi},
                            {"ess", row.ess}};
    }
    return params;
}

// Posterior parameter draws for simulation: evenly strided, cycling when more
// runs than samples are requested.
void strided_draws(const std::vector<Sample>& samples, long long count,
                   std::vector<ModelParams>& params, std::vector<int>& config_indices) {
    long long n = static_cast<long long>(samples.size());
    for (long long k = 0; k < count; ++k) {
        size_t idx = count <= n ? static_cast<size_t>((k * n) / count) : static_cast<size_t>(k % n);
        const Sample& s = samples[idx];
        params.push_back(s.params);
        config_indices.push_back(s.config_index);
    }
}

ModelParams posterior_mean_params(const std::vector<Sample>& samples) {
    ModelParams p;
    for (const Sample& s : samples) {
        p.lambda_a += s.params.lambda_a;
        p.lambda_f += s.params.lambda_f;
        p.lambda_h += s.params.lambda_h;
        p.v += s.params.v;
        p.b += s.params.b;
        p.t_q += s.params.t_q;
    }
    double n = static_cast<double>(samples.size());
    p.lambda_a /= n;
    p.lambda_f /= n;
    p.lambda_h /= n;
    p.v /= n;
    p.b /= n;
    p.t_q /= n;
    return p;
}

int modal_config_index(const std::vector<Sample>& samples) {
    std::map<int, long long> counts;
    for (const Sample& s : samples) counts[s.config_index]++;
    int best = 0;
    long long best_n = -1;
    for (const auto& [idx, n] : counts)
        if (n > best_n) {
            best = idx;
            best_n = n;
        }
    return best;
}

std::vector<Sample> load_samples_with_latents(const RunConfig& cfg, bool need_latents) {
    std::string samples_path = cfg.output_dir + "/samples.csv";
    if (!fs::exists(samples_path))
        throw std::runtime_error("missing samples file: " + samples_path + " (run the mcmc command first)");
    std::vector<Sample> samples = read_samples_csv(samples_path);
    for (int k = 1;; ++k) {
        std::string extra = cfg.output_dir + "/samples_" + std::to_string(k) + ".csv";
        if (!fs::exists(extra)) break;
        auto more = read_samples_csv(extra);
        samples.insert(samples.end(), more.begin(), more.end());
    }
    if (need_latents) {
        std::string latents_path = cfg.output_dir + "/latents.csv";
        if (!fs::exists(latents_path))
            throw std::runtime_error("missing latent-times file: " + latents_path);
        attach_latents_csv(latents_path, samples);
    }
    return samples;
}

CalendarAnchor parse_anchor(const std::string& name) {
    if (name == "first_rash") return CalendarAnchor::FirstRash;
    if (name == "index_exposure") return CalendarAnchor::IndexExposure;
    throw std::runtime_error("unknown anchor: " + name + " (use first_rash or index_exposure)");
}

SimConfig base_sim_config(const RunConfig& cfg) {
    SimConfig sc;
    sc.stages = cfg.stages;
    sc.seed = cfg.sim_seed;
    sc.vacc_config = enumerate_vaccination_configs().front();
    sc.anchor_move = parse_anchor(cfg.sim_anchor_move);
    sc.anchor_tq = parse_anchor(cfg.sim_anchor_tq);
    sc.index_compound = 1;
    sc.index_confession = Confession::FTC;
    sc.index_vaccinated = false;
    return sc;
}

}  // namespace

Dataset load_dataset(const RunConfig& cfg) {
    Dataset d;
    d.cases = load_cases(cfg.cases_path);
    d.population = load_population(cfg.population_path, cfg.moves_path, d.cases);
    d.ctx = LikelihoodContext::build(d.population, d.cases);
    return d;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
    try {
        Dataset data = load_dataset(cfg);
        out << "OK: N=" << data.population.total() << ", cases=" << data.cases.size()
            << ", configs=" << enumerate_vaccination_configs().size() << "\n";
        return 0;
    } catch (const std::exception& e) {
        out << "validation failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_mcmc(const RunConfig& cfg, std::ostream& out) {
    Dataset data;
    try {
        data = load_dataset(cfg);
    } catch (const std::exception& e) {
        out << "validation failed: " << e.what() << "\n";
        return 1;
    }
    ManifestScope scope(cfg, "mcmc");
    scope.manifest.seeds.emplace_back("mcmc", cfg.mcmc_seed);

    PriorSpec priors;
    if (cfg.tq_truncate_to_T) priors.tq_trunc = Truncation{0.0, data.ctx.T};

    if (cfg.mcmc_iterations <= 0) {
        write_samples_csv(cfg.output_dir + "/samples.csv", {});
        write_latents_csv(cfg.output_dir + "/latents.csv", {});
        scope.add_output("samples.csv");
        scope.add_output("latents.csv");
        scope.finish();
        out << "no iterations requested: empty samples written, summary refused\n";
        return 0;
    }

    std::vector<RunResult> runs(cfg.mcmc_chains);
    auto run_one = [&](int chain) {
        auto progress = chain == 0 ? std::function<void(long long)>([&](long long sweep) {
            if (sweep % 10000 == 0)
                out << "chain 0: sweep " << sweep << "/" << cfg.mcmc_iterations << "\n";
        })
                                   : std::function<void(long long)>();
        runs[chain] = run_chain(data.ctx, cfg.stages, priors, cfg.proposal, cfg.mcmc_iterations,
                                cfg.mcmc_burnin, cfg.mcmc_thin,
                                derive_seed(cfg.mcmc_seed, static_cast<std::uint64_t>(chain)),
                                progress);
    };
    if (cfg.mcmc_chains == 1) {
        run_one(0);
    } else {
        std::vector<std::thread> threads;
        for (int c = 0; c < cfg.mcmc_chains; ++c) threads.emplace_back(run_one, c);
        for (auto& t : threads) t.join();
    }

    std::vector<Sample> pooled;
    for (int c = 0; c < cfg.mcmc_chains; ++c) {
        std::string suffix = c == 0 ? "" : "_" + std::to_string(c);
        write_samples_csv(cfg.output_dir + "/samples" + suffix + ".csv", runs[c].samples);
        write_latents_csv(cfg.output_dir + "/latents" + suffix + ".csv", runs[c].samples);
        scope.add_output("samples" + suffix + ".csv");
        scope.add_output("latents" + suffix + ".csv");
        pooled.insert(pooled.end(), runs[c].samples.begin(), runs[c].samples.end());
    }
    for (const auto& counter : runs[0].report.counters)
        scope.manifest.acceptance_rates.emplace_back(counter.name, counter.rate());

    PosteriorSummary summary = summarize_posterior(pooled, cfg.stages);
    json j;
    j["parameters"] = summary_to_json(summary);
    j["n_samples"] = pooled.size();
    j["chains"] = cfg.mcmc_chains;
    j["seed"] = cfg.mcmc_seed;
    json acc = json::object();
    for (const auto& counter : runs[0].report.counters) acc[counter.name] = counter.rate();
    j["acceptance_rates"] = acc;
    write_file_atomic(cfg.output_dir + "/summary.json", j.dump(2) + "\n");
    scope.add_output("summary.json");
    scope.finish();

    out << "mcmc done: " << pooled.size() << " samples";
    for (const auto& name : {"lambda_a", "lambda_h", "t_q"})
        out << ", " << name << " mean " << summary.by_name(name).mean;
    out << "\n";
    return 0;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    Dataset data;
    try {
        data = load_dataset(cfg);
    } catch (const std::exception& e) {
        out << "validation failed: " << e.what() << "\n";
        return 1;
    }
    ManifestScope scope(cfg, "simulate");
    scope.manifest.seeds.emplace_back("sim", cfg.sim_seed);

    SimConfig base = base_sim_config(cfg);
    std::vector<ModelParams> params;
    std::vector<int> config_indices;
    auto configs = enumerate_vaccination_configs();

    if (cfg.sim_params_source == "posterior" || cfg.sim_params_source == "posterior_means") {
        std::vector<Sample> samples = load_samples_with_latents(cfg, false);
        if (samples.empty()) throw std::runtime_error("samples file is empty");
        if (cfg.sim_params_source == "posterior") {
            strided_draws(samples, cfg.sim_count, params, config_indices);
        } else {
            ModelParams mean = posterior_mean_params(samples);
            params.assign(cfg.sim_count, mean);
            config_indices.assign(cfg.sim_count, modal_config_index(samples));
        }
    } else {
        throw std::runtime_error("unknown sim.params_source: " + cfg.sim_params_source);
    }
    if (!std::isnan(cfg.sim_tq_override))
        for (ModelParams& p : params) p.t_q = cfg.sim_tq_override;

    std::ostringstream csv, events_csv;
    csv << "run_id,final_size,duration,n_ftc,n_outside,mover_infected\n";
    events_csv << "run_id,sim_id,infector,compound,confession,vaccinated,mover,e,i,r,tau,q\n";
    auto log_events = [&](long long run, const SimResult& r) {
        for (const SimCase& c : r.cases)
            events_csv << run << ',' << c.sim_id << ',' << c.infector << ',' << c.compound_at_exposure
                       << ',' << confession_name(c.confession) << ',' << (c.vaccinated ? 1 : 0)
                       << ',' << (c.mover ? 1 : 0) << ',' << fmt_double(c.e) << ','
                       << fmt_double(c.i) << ',' << fmt_double(c.r) << ',' << fmt_double(c.tau)
                       << ',' << fmt_double(c.q) << '\n';
    };
    if (cfg.sim_conditional_target > 0) {
        Rng rng(cfg.sim_seed);
        for (long long run = 0; run < cfg.sim_count; ++run) {
            SimConfig sc = base;
            sc.params = params[run];
            sc.vacc_config = configs[config_indices[run] % configs.size()];
            ConditionalResult cr =
                simulate_conditional(sc, data.population, cfg.sim_conditional_target,
                                     cfg.sim_max_attempts, rng);
            const SimResult& r = cr.result;
            csv << run << ',' << r.final_size << ',' << fmt_double(r.duration) << ',' << r.n_ftc
                << ',' << r.n_outside << ',' << (r.mover_infected ? 1 : 0) << '\n';
            if (cfg.sim_event_log) log_events(run, r);
        }
    } else if (cfg.sim_event_log) {
        // Event logs need the full results, so this path runs sequentially.
        SimConfig sc = base;
        for (long long run = 0; run < cfg.sim_count; ++run) {
            sc.params = params[run];
            sc.vacc_config = configs[config_indices[run] % configs.size()];
            Rng rng(derive_seed(cfg.sim_seed, static_cast<std::uint64_t>(run)));
            SimResult r = simulate(sc, data.population, rng);
            csv << run << ',' << r.final_size << ',' << fmt_double(r.duration) << ',' << r.n_ftc
                << ',' << r.n_outside << ',' << (r.mover_infected ? 1 : 0) << '\n';
            log_events(run, r);
        }
    } else {
        SimConfig sc = base;
        if (!config_indices.empty()) sc.vacc_config = configs[config_indices[0] % configs.size()];
        auto summaries = batch_simulate(sc, data.population, params, cfg.sim_parallelism);
        for (const auto& s : summaries)
            csv << s.run_id << ',' << s.final_size << ',' << fmt_double(s.duration) << ','
                << s.n_ftc << ',' << s.n_outside << ',' << (s.mover_infected ? 1 : 0) << '\n';
    }
    write_file_atomic(cfg.output_dir + "/sim_summary.csv", csv.str());
    scope.add_output("sim_summary.csv");
    if (cfg.sim_event_log) {
        write_file_atomic(cfg.output_dir + "/sim_events.csv", events_csv.str());
        scope.add_output("sim_events.csv");
    }
    scope.finish();
    out << "simulate done: " << cfg.sim_count << " runs\n";
    return 0;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
    Dataset data;
    try {
        data = load_dataset(cfg);
    } catch (const std::exception& e) {
        out << "validation failed: " << e.what() << "\n";
        return 1;
    }
    ManifestScope scope(cfg, "analyze");

    bool need_latents = cfg.analysis_wiw || cfg.analysis_exposure;
    std::vector<Sample> samples = load_samples_with_latents(cfg, need_latents);
    if (samples.empty()) throw std::runtime_error("samples file is empty");

    PosteriorSummary summary = summarize_posterior(samples, cfg.stages);
    json j;
    j["parameters"] = summary_to_json(summary);
    j["n_samples"] = samples.size();

    if (cfg.analysis_wiw) {
        WhoInfectedWhom wiw = who_infected_whom(samples, data.population, data.cases);
        std::ostringstream csv;
        csv << "case_id,p_index";
        for (int k = 0; k < wiw.n_cases; ++k) csv << ",p_from_" << k;
        csv << '\n';
        for (int jrow = 0; jrow < wiw.n_cases; ++jrow) {
            csv << jrow << ',' << fmt_double(wiw.index_mass[jrow]);
            for (int k = 0; k < wiw.n_cases; ++k) csv << ',' << fmt_double(wiw.prob[jrow][k]);
            csv << '\n';
        }
        write_file_atomic(cfg.output_dir + "/wiw.csv", csv.str());
        scope.add_output("wiw.csv");
    }

    if (cfg.analysis_exposure) {
        auto hist = exposure_posterior(samples);
        std::ostringstream csv;
        csv << "case_id,day,probability\n";
        for (size_t jc = 0; jc < hist.size(); ++jc)
            for (const auto& [day, p] : hist[jc])
                csv << jc << ',' << day << ',' << fmt_double(p) << '\n';
        write_file_atomic(cfg.output_dir + "/exposure_heatmap.csv", csv.str());
        scope.add_output("exposure_heatmap.csv");
    }

    SimConfig base = base_sim_config(cfg);
    auto configs = enumerate_vaccination_configs();

    if (cfg.analysis_ppc) {
        std::vector<ModelParams> params;
        std::vector<int> config_indices;
        strided_draws(samples, cfg.sim_count, params, config_indices);
        SimConfig sc = base;
        sc.vacc_config = configs[modal_config_index(samples) % configs.size()];
        auto summaries = batch_simulate(sc, data.population, params, cfg.sim_parallelism);
        PredictiveReport rep = predictive_checks(summaries);

        std::ostringstream fs_csv;
        fs_csv << "final_size,count,count_mover_subset\n";
        for (const auto& [size, count] : rep.final_size_hist) {
            long long mc = rep.final_size_hist_mover.count(size) ? rep.final_size_hist_mover.at(size) : 0;
            fs_csv << size << ',' << count << ',' << mc << '\n';
        }
        write_file_atomic(cfg.output_dir + "/ppc_finalsize.csv", fs_csv.str());
        scope.add_output("ppc_finalsize.csv");

        std::ostringstream dur_csv;
        dur_csv << "duration_day,count\n";
        for (const auto& [day, count] : rep.duration_hist) dur_csv << day << ',' << count << '\n';
        write_file_atomic(cfg.output_dir + "/ppc_duration.csv", dur_csv.str());
        scope.add_output("ppc_duration.csv");

        std::ostringstream stats_csv;
        stats_csv << "n_runs,mean_final_size,n_mover_runs,mean_final_size_mover,mean_duration,"
                     "ftc_fraction,outside_fraction\n";
        stats_csv << rep.n_runs << ',' << fmt_double(rep.mean_final_size) << ',' << rep.n_mover_runs
                  << ',' << fmt_double(rep.mean_final_size_mover) << ','
                  << fmt_double(rep.mean_duration) << ',' << fmt_double(rep.ftc_fraction) << ','
                  << fmt_double(rep.outside_fraction) << '\n';
        write_file_atomic(cfg.output_dir + "/ppc_stats.csv", stats_csv.str());
        scope.add_output("ppc_stats.csv");

        j["ppc"] = {{"mean_final_size", rep.mean_final_size},
                    {"mean_final_size_mover", rep.mean_final_size_mover},
                    {"mean_duration", rep.mean_duration},
                    {"ftc_fraction", rep.ftc_fraction},
                    {"outside_fraction", rep.outside_fraction}};

        if (cfg.ppc_envelope_runs > 0) {
            std::vector<ModelParams> env_params;
            std::vector<int> env_cfgs;
            strided_draws(samples, cfg.ppc_envelope_runs, env_params, env_cfgs);
            Rng rng(derive_seed(cfg.sim_seed, 777));
            std::vector<std::vector<double>> rash_sets;
            int target = static_cast<int>(data.cases.size());
            for (int run = 0; run < cfg.ppc_envelope_runs; ++run) {
                SimConfig c2 = base;
                c2.params = env_params[run];
                c2.vacc_config = configs[env_cfgs[run] % configs.size()];
                ConditionalResult cr = simulate_conditional(c2, data.population, target,
                                                            cfg.sim_max_attempts, rng);
                std::vector<double> r;
                for (const SimCase& c : cr.result.cases) r.push_back(c.r);
                rash_sets.push_back(anchored_sorted_rash(r));
            }
            double max_day = data.ctx.T;
            CumulativeEnvelope env = incidence_envelope(rash_sets, max_day);
            std::vector<double> obs = anchored_sorted_rash(observed_rash(data));
            std::ostringstream inc_csv;
            inc_csv << "day,q05,q25,q50,q75,q95,observed_cumulative\n";
            for (size_t d = 0; d < env.days.size(); ++d) {
                long long obs_cum = 0;
                for (double r : obs)
                    if (r <= env.days[d]) obs_cum++;
                inc_csv << env.days[d] << ',' << fmt_double(env.q05[d]) << ','
                        << fmt_double(env.q25[d]) << ',' << fmt_double(env.q50[d]) << ','
                        << fmt_double(env.q75[d]) << ',' << fmt_double(env.q95[d]) << ',' << obs_cum
                        << '\n';
            }
            write_file_atomic(cfg.output_dir + "/ppc_incidence.csv", inc_csv.str());
            scope.add_output("ppc_incidence.csv");
        }
    }

    if (cfg.analysis_ppp) {
        std::vector<ModelParams> draws;
        std::vector<int> draw_cfgs;
        strided_draws(samples, cfg.ppp_m, draws, draw_cfgs);
        DiscrepancyReport rep = ppp_value(draws, draw_cfgs, observed_rash(data), base,
                                          data.population, cfg.ppp_m1, cfg.sim_max_attempts,
                                          cfg.ppp_seed);
        j["ppp"] = {{"value", rep.ppp}, {"M", rep.M}, {"M1", rep.M1}};
        std::ostringstream ppp_csv;
        ppp_csv << "draw,d_obs,d_rep\n";
        for (size_t i = 0; i < rep.d_obs.size(); ++i)
            ppp_csv << i << ',' << fmt_double(rep.d_obs[i]) << ',' << fmt_double(rep.d_rep[i])
                    << '\n';
        write_file_atomic(cfg.output_dir + "/ppp_draws.csv", ppp_csv.str());
        scope.add_output("ppp_draws.csv");
        out << "ppp = " << rep.ppp << " (M=" << rep.M << ", M1=" << rep.M1 << ")\n";
    }

    write_file_atomic(cfg.output_dir + "/summary.json", j.dump(2) + "\n");
    scope.add_output("summary.json");
    scope.finish();
    out << "analyze done\n";
    return 0;
}

int cmd_sensitivity(const RunConfig& cfg, std::ostream& out) {
    Dataset data;
    try {
        data = load_dataset(cfg);
    } catch (const std::exception& e) {
        out << "validation failed: " << e.what() << "\n";
        return 1;
    }
    ManifestScope scope(cfg, "sensitivity");

    PriorSpec priors;
    if (cfg.tq_truncate_to_T) priors.tq_trunc = Truncation{0.0, data.ctx.T};
    auto grid = default_sensitivity_grid();
    auto results = sensitivity_sweep(grid, data.ctx, priors, cfg.proposal, cfg.sens_iterations,
                                     cfg.sens_burnin, cfg.sens_thin, cfg.mcmc_seed);

    std::ostringstream sum_csv;
    sum_csv << "setting,parameter,mean,median,ci_lo,ci_hi\n";
    for (const auto& res : results)
        for (const auto& row : res.summary.rows)
            sum_csv << res.label << ',' << row.name << ',' << fmt_double(row.mean) << ','
                    << fmt_double(row.median) << ',' << fmt_double(row.ci_lo) << ','
                    << fmt_double(row.ci_hi) << '\n';
    write_file_atomic(cfg.output_dir + "/sensitivity_summary.csv", sum_csv.str());
    scope.add_output("sensitivity_summary.csv");

    // Overlaid density tables: common bins per parameter across settings.
    const char* names[6] = {"lambda_a", "lambda_f", "lambda_h", "v", "b", "t_q"};
    auto value_of = [](const Sample& s, int which) {
        switch (which) {
            case 0: return s.params.lambda_a;
            case 1: return s.params.lambda_f;
            case 2: return s.params.lambda_h;
            case 3: return s.params.v;
            case 4: return s.params.b;
            default: return s.params.t_q;
        }
    };
    std::ostringstream den_csv;
    den_csv << "setting,parameter,bin_lo,bin_hi,density\n";
    for (int w = 0; w < 6; ++w) {
        double lo = 1e300, hi = -1e300;
        for (const auto& res : results)
            for (const Sample& s : res.samples) {
                lo = std::min(lo, value_of(s, w));
                hi = std::max(hi, value_of(s, w));
            }
        if (!(hi > lo)) hi = lo + 1.0;
        int bins = 40;
        double width = (hi - lo) / bins;
        for (const auto& res : results) {
            std::vector<long long> counts(bins, 0);
            for (const Sample& s : res.samples) {
                int bin = std::min(bins - 1, static_cast<int>((value_of(s, w) - lo) / width));
                counts[bin]++;
            }
            for (int bn = 0; bn < bins; ++bn)
                den_csv << res.label << ',' << names[w] << ',' << fmt_double(lo + bn * width) << ','
                        << fmt_double(lo + (bn + 1) * width) << ','
                        << fmt_double(counts[bn] / (res.samples.size() * width)) << '\n';
        }
    }
    write_file_atomic(cfg.output_dir + "/sensitivity_densities.csv", den_csv.str());
    scope.add_output("sensitivity_densities.csv");
    scope.finish();
    out << "sensitivity done: " << results.size() << " settings\n";
    return 0;
}

int cmd_report(const RunConfig& cfg, std::ostream& out) {
    std::string path = cfg.output_dir + "/summary.json";
    if (!fs::exists(path)) {
        out << "missing " << path << " (run mcmc/analyze first)\n";
        return 2;
    }
    std::ifstream in(path);
    json j = json::parse(in);
    std::ostringstream rep;
    rep << "posterior summary\n";
    rep << "parameter        mean      median    2.5%      97.5%\n";
    for (const auto& name :
         {"lambda_a", "lambda_f", "lambda_h", "v", "b", "t_q", "R0", "RF", "R0_post_control"}) {
        if (!j["parameters"].contains(name)) continue;
        const auto& row = j["parameters"][name];
        char line[160];
        std::snprintf(line, sizeof(line), "%-16s %-9.4g %-9.4g %-9.4g %-9.4g\n", name,
                      row["mean"].get<double>(), row["median"].get<double>(),
                      row["ci_lo"].get<double>(), row["ci_hi"].get<double>());
        rep << line;
    }
    if (j.contains("ppp"))
        rep << "\nppp-value: " << j["ppp"]["value"].get<double>() << " (M=" << j["ppp"]["M"]
            << ", M1=" << j["ppp"]["M1"] << ")\n";
    if (j.contains("ppc")) {
        rep << "\npredictive checks\n";
        rep << "mean final size:        " << j["ppc"]["mean_final_size"].get<double>() << "\n";
        rep << "mover-subset mean size: " << j["ppc"]["mean_final_size_mover"].get<double>() << "\n";
        rep << "mean duration:          " << j["ppc"]["mean_duration"].get<double>() << "\n";
        rep << "FTC fraction:           " << j["ppc"]["ftc_fraction"].get<double>() << "\n";
        rep << "outside fraction:       " << j["ppc"]["outside_fraction"].get<double>() << "\n";
    }
    write_file_atomic(cfg.output_dir + "/report.txt", rep.str());
    out << rep.str();
    return 0;
}

}  // namespace abk
