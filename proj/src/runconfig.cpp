#include "abk/runconfig.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "abk/csv.hpp"

namespace abk {

using nlohmann::json;

namespace {

void apply_key(RunConfig& cfg, const std::string& key, const json& val) {
    auto num = [&]() { return val.get<double>(); };
    auto integer = [&]() { return val.get<long long>(); };
    auto str = [&]() { return val.get<std::string>(); };
    auto flag = [&]() { return val.get<bool>(); };

    if (key == "data.cases") cfg.cases_path = str();
    else if (key == "data.population") cfg.population_path = str();
    else if (key == "data.moves") cfg.moves_path = str();
    else if (key == "output.dir") cfg.output_dir = str();
    else if (key == "stages.mu_I") cfg.stages.incubation = gamma_from_mean_sd(num(), cfg.stages.incubation.sd);
    else if (key == "stages.sigma_I") cfg.stages.incubation = gamma_from_mean_sd(cfg.stages.incubation.mean, num());
    else if (key == "stages.mu_F") cfg.stages.fever = gamma_from_mean_sd(num(), cfg.stages.fever.sd);
    else if (key == "stages.sigma_F") cfg.stages.fever = gamma_from_mean_sd(cfg.stages.fever.mean, num());
    else if (key == "stages.mu_R") cfg.stages.rash = gamma_from_mean_sd(num(), cfg.stages.rash.sd);
    else if (key == "stages.sigma_R") cfg.stages.rash = gamma_from_mean_sd(cfg.stages.rash.mean, num());
    else if (key == "stages.mu_Q") cfg.stages.quarantine_delay = gamma_from_mean_sd(num(), cfg.stages.quarantine_delay.sd);
    else if (key == "stages.sigma_Q") cfg.stages.quarantine_delay = gamma_from_mean_sd(cfg.stages.quarantine_delay.mean, num());
    else if (key == "mcmc.iterations") cfg.mcmc_iterations = integer();
    else if (key == "mcmc.burnin") cfg.mcmc_burnin = integer();
    else if (key == "mcmc.thin") cfg.mcmc_thin = integer();
    else if (key == "mcmc.seed") cfg.mcmc_seed = val.get<std::uint64_t>();
    else if (key == "mcmc.chains") cfg.mcmc_chains = static_cast<int>(integer());
    else if (key == "mcmc.adapt") cfg.proposal.adapt = flag();
    else if (key == "mcmc.scale_log_lambda_a") cfg.proposal.scale_log_lambda_a = num();
    else if (key == "mcmc.scale_log_lambda_f") cfg.proposal.scale_log_lambda_f = num();
    else if (key == "mcmc.scale_log_lambda_h") cfg.proposal.scale_log_lambda_h = num();
    else if (key == "mcmc.scale_logit_v") cfg.proposal.scale_logit_v = num();
    else if (key == "mcmc.scale_log_b") cfg.proposal.scale_log_b = num();
    else if (key == "mcmc.scale_tq") cfg.proposal.scale_tq = num();
    else if (key == "mcmc.tq_init") cfg.proposal.tq_init = num();
    else if (key == "mcmc.tq_truncate_to_T") cfg.tq_truncate_to_T = flag();
    else if (key == "sim.count") cfg.sim_count = integer();
    else if (key == "sim.seed") cfg.sim_seed = val.get<std::uint64_t>();
    else if (key == "sim.params_source") cfg.sim_params_source = str();
    else if (key == "sim.anchor_move") cfg.sim_anchor_move = str();
    else if (key == "sim.anchor_tq") cfg.sim_anchor_tq = str();
    else if (key == "sim.tq_override") {
        if (val.is_string() && str() == "none")
            cfg.sim_tq_override = std::numeric_limits<double>::infinity();
        else
            cfg.sim_tq_override = num();
    } else if (key == "sim.parallelism") cfg.sim_parallelism = static_cast<int>(integer());
    else if (key == "sim.conditional_target") cfg.sim_conditional_target = static_cast<int>(integer());
    else if (key == "sim.max_attempts") cfg.sim_max_attempts = static_cast<int>(integer());
    else if (key == "sim.event_log") cfg.sim_event_log = flag();
    else if (key == "analysis.wiw") cfg.analysis_wiw = flag();
    else if (key == "analysis.exposure") cfg.analysis_exposure = flag();
    else if (key == "analysis.ppc") cfg.analysis_ppc = flag();
    else if (key == "analysis.ppp") cfg.analysis_ppp = flag();
    else if (key == "analysis.ppp_M") cfg.ppp_m = static_cast<int>(integer());
    else if (key == "analysis.ppp_M1") cfg.ppp_m1 = static_cast<int>(integer());
    else if (key == "analysis.ppp_seed") cfg.ppp_seed = val.get<std::uint64_t>();
    else if (key == "analysis.envelope_runs") cfg.ppc_envelope_runs = static_cast<int>(integer());
    else if (key == "sensitivity.iterations") cfg.sens_iterations = integer();
    else if (key == "sensitivity.burnin") cfg.sens_burnin = integer();
    else if (key == "sensitivity.thin") cfg.sens_thin = integer();
    else throw std::runtime_error("unknown config key: " + key);
}

}  // namespace

RunConfig default_run_config() { return RunConfig{}; }

RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides) {
    RunConfig cfg;
    std::string text;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config: " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
        json j = json::parse(text);
        if (!j.is_object()) throw std::runtime_error(path + ": config must be a JSON object");
        for (auto it = j.begin(); it != j.end(); ++it) apply_key(cfg, it.key(), it.value());
    }
    for (const std::string& ov : overrides) {
        size_t eq = ov.find('=');
        if (eq == std::string::npos) throw std::runtime_error("override must be key=value: " + ov);
        std::string key = ov.substr(0, eq);
        std::string raw = ov.substr(eq + 1);
        json val;
        try {
            val = json::parse(raw);
        } catch (const json::parse_error&) {
            val = raw;  // bare strings allowed
        }
        apply_key(cfg, key, val);
        text += "\n--set " + ov;
    }
    cfg.raw_text = text;
    return cfg;
}

std::string config_hash(const RunConfig& cfg) { return fnv1a_hex(cfg.raw_text); }

void write_samples_csv(const std::string& path, const std::vector<Sample>& samples) {
    auto configs = enumerate_vaccination_configs();
    std::ostringstream out;
    out << "iter,lambda_a,lambda_f,lambda_h,v,b,t_q,kappa,e_kappa,loglik,config_i4,config_i5,config_i7\n";
    for (const Sample& s : samples) {
        const VaccinationConfig& c = configs[s.config_index % configs.size()];
        out << s.iter << ',' << fmt_double(s.params.lambda_a) << ',' << fmt_double(s.params.lambda_f)
            << ',' << fmt_double(s.params.lambda_h) << ',' << fmt_double(s.params.v) << ','
            << fmt_double(s.params.b) << ',' << fmt_double(s.params.t_q) << ',' << s.params.kappa
            << ',' << fmt_double(s.e_kappa) << ',' << fmt_double(s.loglik) << ',' << c.i4 << ','
            << c.i5 << ',' << c.i7 << '\n';
    }
    write_file_atomic(path, out.str());
}

void write_latents_csv(const std::string& path, const std::vector<Sample>& samples) {
    std::ostringstream out;
    out << "iter,case_id,e,i,tau,q\n";
    for (const Sample& s : samples)
        for (size_t j = 0; j < s.e.size(); ++j)
            out << s.iter << ',' << j << ',' << fmt_double(s.e[j]) << ',' << fmt_double(s.i[j])
                << ',' << fmt_double(s.tau[j]) << ',' << fmt_double(s.q[j]) << '\n';
    write_file_atomic(path, out.str());
}

std::vector<Sample> read_samples_csv(const std::string& path) {
    CsvTable t = read_csv(path);
    auto configs = enumerate_vaccination_configs();
    std::vector<Sample> out;
    for (size_t r = 0; r < t.rows.size(); ++r) {
        std::string where = path + ":" + std::to_string(t.line_numbers[r]);
        const auto& f = t.rows[r];
        Sample s;
        s.iter = parse_int(f[0], where);
        s.params.lambda_a = parse_double(f[1], where);
        s.params.lambda_f = parse_double(f[2], where);
        s.params.lambda_h = parse_double(f[3], where);
        s.params.v = parse_double(f[4], where);
        s.params.b = parse_double(f[5], where);
        s.params.t_q = parse_double(f[6], where);
        s.params.kappa = static_cast<int>(parse_int(f[7], where));
        s.e_kappa = parse_double(f[8], where);
        s.loglik = parse_double(f[9], where);
        VaccinationConfig c{static_cast<int>(parse_int(f[10], where)),
                            static_cast<int>(parse_int(f[11], where)),
                            static_cast<int>(parse_int(f[12], where))};
        s.config_index = 0;
        for (size_t g = 0; g < configs.size(); ++g)
            if (configs[g] == c) s.config_index = static_cast<int>(g);
        out.push_back(std::move(s));
    }
    return out;
}

void attach_latents_csv(const std::string& path, std::vector<Sample>& samples) {
    CsvTable t = read_csv(path);
    std::map<long long, Sample*> by_iter;
    for (Sample& s : samples) by_iter[s.iter] = &s;
    for (size_t r = 0; r < t.rows.size(); ++r) {
        std::string where = path + ":" + std::to_string(t.line_numbers[r]);
        const auto& f = t.rows[r];
        long long iter = parse_int(f[0], where);
        auto it = by_iter.find(iter);
        if (it == by_iter.end()) continue;
        Sample& s = *it->second;
        size_t j = static_cast<size_t>(parse_int(f[1], where));
        if (s.e.size() <= j) {
            s.e.resize(j + 1);
            s.i.resize(j + 1);
            s.tau.resize(j + 1);
            s.q.resize(j + 1);
        }
        s.e[j] = parse_double(f[2], where);
        s.i[j] = parse_double(f[3], where);
        s.tau[j] = parse_double(f[4], where);
        s.q[j] = parse_double(f[5], where);
    }
}

void write_manifest(const std::string& dir, const RunManifest& m) {
    json j;
    j["command"] = m.command;
    j["config_hash"] = m.config_hash;
    j["status"] = m.status;
    j["wall_seconds"] = m.wall_seconds;
    j["outputs"] = m.outputs;
    json acc = json::object();
    for (const auto& [name, rate] : m.acceptance_rates) acc[name] = rate;
    j["acceptance_rates"] = acc;
    json seeds = json::object();
    for (const auto& [name, seed] : m.seeds) seeds[name] = seed;
    j["seeds"] = seeds;
    j["version"] = "0.1.0";
    write_file_atomic(dir + "/manifest.json", j.dump(2) + "\n");
}

}  // namespace abk
