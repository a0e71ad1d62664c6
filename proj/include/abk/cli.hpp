#ifndef ABK_CLI_HPP
#define ABK_CLI_HPP

#include <iosfwd>
#include <string>

#include "abk/runconfig.hpp"

namespace abk {

// Exit codes: 0 success, 1 validation error, 2 runtime failure.
int cmd_validate(const RunConfig& cfg, std::ostream& out);
int cmd_mcmc(const RunConfig& cfg, std::ostream& out);
int cmd_simulate(const RunConfig& cfg, std::ostream& out);
int cmd_analyze(const RunConfig& cfg, std::ostream& out);
int cmd_sensitivity(const RunConfig& cfg, std::ostream& out);
int cmd_report(const RunConfig& cfg, std::ostream& out);

struct Dataset {
    std::vector<CaseRecord> cases;
    Population population;
    LikelihoodContext ctx;
};

Dataset load_dataset(const RunConfig& cfg);

}  // namespace abk

#endif
