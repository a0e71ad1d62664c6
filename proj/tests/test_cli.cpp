#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "abk/cli.hpp"
#include "abk/csv.hpp"

using namespace abk;
namespace fs = std::filesystem;

namespace {

RunConfig test_config(const std::string& out_dir) {
    RunConfig cfg;
    cfg.cases_path = std::string(ABK_DATA_DIR) + "/cases.csv";
    cfg.population_path = std::string(ABK_DATA_DIR) + "/population.csv";
    cfg.moves_path = std::string(ABK_DATA_DIR) + "/moves.csv";
    cfg.output_dir = out_dir;
    cfg.mcmc_iterations = 400;
    cfg.mcmc_burnin = 100;
    cfg.mcmc_thin = 10;
    cfg.sim_count = 200;
    cfg.sim_parallelism = 2;
    cfg.ppp_m = 3;
    cfg.ppp_m1 = 10;
    cfg.ppc_envelope_runs = 10;
    cfg.raw_text = "test";
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("validate prints the dataset fingerprint") {
    std::ostringstream out;
    CHECK(cmd_validate(test_config("/tmp/abk_cli_v"), out) == 0);
    CHECK(out.str() == "OK: N=31200, cases=32, configs=5\n");
}

TEST_CASE("validate fails with the violated sum named") {
    RunConfig cfg = test_config("/tmp/abk_cli_v2");
    std::string bad = "/tmp/abk_cli_bad_pop.csv";
    {
        std::string text = slurp(cfg.population_path);
        size_t pos = text.find("1,FTC,18,15");
        REQUIRE(pos != std::string::npos);
        text.replace(pos, 11, "1,FTC,18,16");
        std::ofstream(bad) << text;
    }
    cfg.population_path = bad;
    std::ostringstream out;
    CHECK(cmd_validate(cfg, out) == 1);
    CHECK(out.str().find("FTC total") != std::string::npos);

    cfg = test_config("/tmp/abk_cli_v3");
    cfg.moves_path = "/nonexistent/moves.csv";
    std::ostringstream out2;
    CHECK(cmd_validate(cfg, out2) == 1);
    CHECK(out2.str().find("/nonexistent/moves.csv") != std::string::npos);
}

TEST_CASE("mcmc writes samples, latents, summary and a complete manifest") {
    RunConfig cfg = test_config("/tmp/abk_cli_m");
    fs::remove_all(cfg.output_dir);
    std::ostringstream out;
    REQUIRE(cmd_mcmc(cfg, out) == 0);
    for (const char* f : {"samples.csv", "latents.csv", "summary.json", "manifest.json"})
        CHECK(fs::exists(cfg.output_dir + "/" + std::string(f)));
    CHECK(slurp(cfg.output_dir + "/manifest.json").find("\"status\": \"complete\"") !=
          std::string::npos);
    CsvTable samples = read_csv(cfg.output_dir + "/samples.csv");
    CHECK(samples.header ==
          split_csv_line("iter,lambda_a,lambda_f,lambda_h,v,b,t_q,kappa,e_kappa,loglik,"
                         "config_i4,config_i5,config_i7"));
    CHECK(samples.rows.size() == 30);  // (400-100)/10
    CsvTable latents = read_csv(cfg.output_dir + "/latents.csv");
    CHECK(latents.header == split_csv_line("iter,case_id,e,i,tau,q"));
    CHECK(latents.rows.size() == 30 * 32);
}

TEST_CASE("zero iterations yields an empty samples file and no summary") {
    RunConfig cfg = test_config("/tmp/abk_cli_m0");
    fs::remove_all(cfg.output_dir);
    cfg.mcmc_iterations = 0;
    std::ostringstream out;
    REQUIRE(cmd_mcmc(cfg, out) == 0);
    CHECK(out.str().find("summary refused") != std::string::npos);
    CHECK(read_csv(cfg.output_dir + "/samples.csv").rows.empty());
    CHECK_FALSE(fs::exists(cfg.output_dir + "/summary.json"));
}

TEST_CASE("repeated runs with one seed are byte-for-byte identical") {
    RunConfig cfg = test_config("/tmp/abk_cli_rep");
    fs::remove_all(cfg.output_dir);
    std::ostringstream out;
    REQUIRE(cmd_mcmc(cfg, out) == 0);
    std::string first = slurp(cfg.output_dir + "/samples.csv");
    REQUIRE(cmd_mcmc(cfg, out) == 0);
    CHECK(slurp(cfg.output_dir + "/samples.csv") == first);
}

TEST_CASE("two chains produce distinct streams in separate files") {
    RunConfig cfg = test_config("/tmp/abk_cli_2c");
    fs::remove_all(cfg.output_dir);
    cfg.mcmc_chains = 2;
    std::ostringstream out;
    REQUIRE(cmd_mcmc(cfg, out) == 0);
    CHECK(fs::exists(cfg.output_dir + "/samples.csv"));
    CHECK(fs::exists(cfg.output_dir + "/samples_1.csv"));
    CHECK(slurp(cfg.output_dir + "/samples.csv") != slurp(cfg.output_dir + "/samples_1.csv"));
}

TEST_CASE("simulate requires samples and then writes the summary table") {
    RunConfig cfg = test_config("/tmp/abk_cli_s");
    fs::remove_all(cfg.output_dir);
    std::ostringstream out;
    CHECK_THROWS_WITH_AS(cmd_simulate(cfg, out), doctest::Contains("samples.csv"),
                         std::runtime_error);
    REQUIRE(cmd_mcmc(cfg, out) == 0);
    REQUIRE(cmd_simulate(cfg, out) == 0);
    CsvTable t = read_csv(cfg.output_dir + "/sim_summary.csv");
    CHECK(t.header == split_csv_line("run_id,final_size,duration,n_ftc,n_outside,mover_infected"));
    CHECK(t.rows.size() == 200);
    CHECK_FALSE(fs::exists(cfg.output_dir + "/sim_events.csv"));

    cfg.sim_event_log = true;
    cfg.sim_count = 20;
    REQUIRE(cmd_simulate(cfg, out) == 0);
    CsvTable ev = read_csv(cfg.output_dir + "/sim_events.csv");
    CHECK(ev.header ==
          split_csv_line("run_id,sim_id,infector,compound,confession,vaccinated,mover,e,i,r,tau,q"));
    // every run's event rows add up to its reported final size
    CsvTable t2 = read_csv(cfg.output_dir + "/sim_summary.csv");
    REQUIRE(t2.rows.size() == 20);
    std::map<std::string, long long> rows_per_run;
    for (const auto& row : ev.rows) rows_per_run[row[0]]++;
    for (const auto& row : t2.rows)
        CHECK(rows_per_run[row[0]] == std::stoll(row[1]));
}

TEST_CASE("analyze emits the toggled outputs and the report bundles them") {
    RunConfig cfg = test_config("/tmp/abk_cli_a");
    fs::remove_all(cfg.output_dir);
    std::ostringstream out;
    REQUIRE(cmd_mcmc(cfg, out) == 0);
    REQUIRE(cmd_analyze(cfg, out) == 0);
    for (const char* f : {"summary.json", "wiw.csv", "exposure_heatmap.csv", "ppc_finalsize.csv",
                          "ppc_duration.csv", "ppc_stats.csv", "ppc_incidence.csv", "ppp_draws.csv"})
        CHECK(fs::exists(cfg.output_dir + "/" + std::string(f)));

    // who-infected-whom rows are stochastic
    CsvTable wiw = read_csv(cfg.output_dir + "/wiw.csv");
    REQUIRE(wiw.rows.size() == 32);
    for (const auto& row : wiw.rows) {
        double total = 0.0;
        for (size_t c = 1; c < row.size(); ++c) total += std::stod(row[c]);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }

    std::ostringstream rep;
    REQUIRE(cmd_report(cfg, rep) == 0);
    CHECK(rep.str().find("posterior summary") != std::string::npos);
    CHECK(rep.str().find("ppp-value") != std::string::npos);
    CHECK(fs::exists(cfg.output_dir + "/report.txt"));
}

TEST_CASE("report without a summary fails with exit 2") {
    RunConfig cfg = test_config("/tmp/abk_cli_r0");
    fs::remove_all(cfg.output_dir);
    std::ostringstream out;
    CHECK(cmd_report(cfg, out) == 2);
}

TEST_CASE("config file and overrides load flat keys") {
    std::string path = "/tmp/abk_cli_cfg.json";
    std::ofstream(path) << R"({"mcmc.iterations": 123, "sim.tq_override": "none",
                              "output.dir": "/tmp/abk_cli_x", "stages.mu_R": 8.0})";
    RunConfig cfg = load_run_config(path, {"mcmc.iterations=77", "sim.count=5"});
    CHECK(cfg.mcmc_iterations == 77);  // override wins
    CHECK(cfg.sim_count == 5);
    CHECK(std::isinf(cfg.sim_tq_override));
    CHECK(cfg.output_dir == "/tmp/abk_cli_x");
    CHECK(cfg.stages.rash.mean == 8.0);
    CHECK(config_hash(cfg) != config_hash(load_run_config(path, {})));
    CHECK_THROWS_WITH_AS(load_run_config(path, {"bogus.key=1"}), doctest::Contains("bogus.key"),
                         std::runtime_error);
}

TEST_CASE("samples csv round-trips through the reader") {
    RunConfig cfg = test_config("/tmp/abk_cli_rt");
    fs::remove_all(cfg.output_dir);
    std::ostringstream out;
    REQUIRE(cmd_mcmc(cfg, out) == 0);
    auto samples = read_samples_csv(cfg.output_dir + "/samples.csv");
    REQUIRE(samples.size() == 30);
    attach_latents_csv(cfg.output_dir + "/latents.csv", samples);
    for (const auto& s : samples) {
        REQUIRE(s.e.size() == 32);
        CHECK(std::isfinite(s.loglik));
        CHECK(s.e[s.params.kappa] == s.e_kappa);
    }
}

TEST_CASE("sensitivity writes summary and density tables for every setting") {
    RunConfig cfg = test_config("/tmp/abk_cli_sens");
    fs::remove_all(cfg.output_dir);
    cfg.sens_iterations = 400;
    cfg.sens_burnin = 100;
    cfg.sens_thin = 10;
    std::ostringstream out;
    REQUIRE(cmd_sensitivity(cfg, out) == 0);
    CsvTable sum = read_csv(cfg.output_dir + "/sensitivity_summary.csv");
    CHECK(sum.header == split_csv_line("setting,parameter,mean,median,ci_lo,ci_hi"));
    std::set<std::string> settings;
    for (const auto& row : sum.rows) settings.insert(row[0]);
    CHECK(settings == std::set<std::string>{"baseline", "mu_R_half", "mu_R_double", "mu_Q_half",
                                            "mu_Q_double"});
    CsvTable dens = read_csv(cfg.output_dir + "/sensitivity_densities.csv");
    CHECK(dens.header == split_csv_line("setting,parameter,bin_lo,bin_hi,density"));
    CHECK(dens.rows.size() == 5 * 6 * 40);
}
