#ifndef MAGTRACE_CLI_CONFIG_HPP
#define MAGTRACE_CLI_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "magtrace/geometry.hpp"
#include "magtrace/testfunction.hpp"

namespace magtrace {

struct ParseError {
    int line = 0; // 1-based; 0 = document-level
    int col = 0;
    std::string message;
};

// One resolved run of the pipeline. The command picks which fields matter;
// validation re-checks every owning-module invariant at parse time.
struct RunConfig {
    enum class Command { coeffs, model1d, verify, kunz, thermo };
    Command command = Command::coeffs;

    std::optional<DomainSpec> domain;
    std::optional<FieldSpec> field;
    std::optional<TestFunction> function;

    // verify
    std::vector<double> h_list;
    std::string mode = "trace"; // trace | count
    double E = 0.0;
    int K = 1;

    // model1d
    std::vector<double> xi_list;
    int k_max = 1;
    double spacing = 0.01;

    // kunz / thermo
    double B = 1.0;
    std::vector<double> E_list;
    std::vector<double> L_list;
    double beta = 1.0;
    double mu = 0.0;

    // tolerances
    double abs_tol = 1e-10;
    int k_cap = 200;

    // output
    std::string out_path;
    std::string format = "json"; // json | csv
    std::string spectrum_out;    // optional spectrum dump (verify)
};

struct ParseResult {
    std::optional<RunConfig> config;
    std::vector<ParseError> errors; // every violation, not just the first
    bool ok() const { return errors.empty() && config.has_value(); }
};

// Parses the flat-section key = value document for the given command.
ParseResult parse_config(const std::string& text, RunConfig::Command command);

// Executes a validated config. Returns the process exit status:
// 0 success, 2 numeric non-convergence. Artifacts land on disk at the
// resolved output path.
int run(const RunConfig& config);

std::string command_name(RunConfig::Command c);

} // namespace magtrace

#endif
