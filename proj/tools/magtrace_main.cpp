// magtrace: two-term magnetic trace and counting asymptotics on model domains.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "magtrace/cli_config.hpp"

namespace {

int dispatch(magtrace::RunConfig::Command cmd, const std::string& config_path,
             const std::string& out_override, const std::string& fmt_override) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        std::cerr << "magtrace: cannot read config file '" << config_path << "'\n";
        return 1;
    }
    std::ostringstream ss;
    ss << in.rdbuf();

    auto parsed = magtrace::parse_config(ss.str(), cmd);
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors)
            std::cerr << "config:" << e.line << ":" << e.col << ": " << e.message << "\n";
        return 1;
    }
    magtrace::RunConfig cfg = *parsed.config;
    if (!out_override.empty()) cfg.out_path = out_override;
    if (!fmt_override.empty()) cfg.format = fmt_override;
    return magtrace::run(cfg);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"magtrace: semiclassical trace and eigenvalue-counting asymptotics for "
                 "2D magnetic Dirichlet operators"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        magtrace::RunConfig::Command cmd;
    };
    const Sub subs[] = {
        {"coeffs", "bulk and boundary coefficients C0(f), C1(f)",
         magtrace::RunConfig::Command::coeffs},
        {"model1d", "half-line model operator eigenvalue tables",
         magtrace::RunConfig::Command::model1d},
        {"verify", "trace or counting convergence study against exact spectra",
         magtrace::RunConfig::Command::verify},
        {"kunz", "boundary counting shift across an energy grid",
         magtrace::RunConfig::Command::kunz},
        {"thermo", "thermodynamic-limit densities on dilated disks",
         magtrace::RunConfig::Command::thermo},
    };

    int rc = 0;
    for (const auto& s : subs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        auto config = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto fmt = std::make_shared<std::string>();
        sub->add_option("--config", *config, "configuration file")->required();
        sub->add_option("--out", *out, "output path (default magtrace_<cmd>.<format>)");
        sub->add_option("--format", *fmt, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->callback([&rc, cmd = s.cmd, config, out, fmt] {
            rc = dispatch(cmd, *config, *out, *fmt);
        });
    }

    CLI11_PARSE(app, argc, argv);
    return rc;
}
