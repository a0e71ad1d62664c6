#ifndef ABK_RUNCONFIG_HPP
#define ABK_RUNCONFIG_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "abk/analysis.hpp"
#include "abk/sampler.hpp"

namespace abk {

// One flat-key JSON config drives every command; command-line --set overrides
// replace keys one-for-one.
struct RunConfig {
    std::string cases_path = "data/cases.csv";
    std::string population_path = "data/population.csv";
    std::string moves_path = "data/moves.csv";
    std::string output_dir = "out";

    StageDurations stages;

    long long mcmc_iterations = 100000;
    long long mcmc_burnin = 10000;
    long long mcmc_thin = 10;
    std::uint64_t mcmc_seed = 1;
    int mcmc_chains = 1;
    ProposalConfig proposal;
    bool tq_truncate_to_T = true;

    long long sim_count = 5000;
    std::uint64_t sim_seed = 2;
    std::string sim_params_source = "posterior";  // or "posterior_means"
    std::string sim_anchor_move = "index_exposure";  // or "first_rash"
    std::string sim_anchor_tq = "first_rash";
    double sim_tq_override = std::numeric_limits<double>::quiet_NaN();  // NaN: keep; inf: none
    int sim_parallelism = 4;
    int sim_conditional_target = 0;  // 0: unconditional batch
    int sim_max_attempts = 50000;
    bool sim_event_log = false;      // also write per-run event logs

    bool analysis_wiw = true;
    bool analysis_exposure = true;
    bool analysis_ppc = true;
    bool analysis_ppp = true;
    int ppp_m = 100;
    int ppp_m1 = 100;
    std::uint64_t ppp_seed = 3;
    int ppc_envelope_runs = 1000;

    long long sens_iterations = 30000;
    long long sens_burnin = 5000;
    long long sens_thin = 10;

    std::string raw_text;  // exact config text plus overrides, for the hash
};

RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides);
RunConfig default_run_config();

std::string config_hash(const RunConfig& cfg);

// Samples and latent-times CSV round-trip. Headers are fixed:
//   iter,lambda_a,lambda_f,lambda_h,v,b,t_q,kappa,e_kappa,loglik,config_i4,config_i5,config_i7
//   iter,case_id,e,i,tau,q
void write_samples_csv(const std::string& path, const std::vector<Sample>& samples);
void write_latents_csv(const std::string& path, const std::vector<Sample>& samples);
std::vector<Sample> read_samples_csv(const std::string& path);
void attach_latents_csv(const std::string& path, std::vector<Sample>& samples);

// Run manifest written at start (incomplete) and end (complete) of a command.
struct RunManifest {
    std::string command;
    std::string config_hash;
    std::string status = "incomplete";
    double wall_seconds = 0.0;
    std::vector<std::string> outputs;
    std::vector<std::pair<std::string, double>> acceptance_rates;
    std::vector<std::pair<std::string, std::uint64_t>> seeds;
};

void write_manifest(const std::string& dir, const RunManifest& manifest);

}  // namespace abk

#endif
