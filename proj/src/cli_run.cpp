#include <iostream>
#include <sstream>

#include "json.hpp"

#include "magtrace/asymptotics.hpp"
#include "magtrace/cli_config.hpp"
#include "magtrace/errors.hpp"
#include "magtrace/io.hpp"

namespace magtrace {

namespace {

using nlohmann::json;

std::string resolve_path(const RunConfig& cfg) {
    if (!cfg.out_path.empty()) return cfg.out_path;
    return "magtrace_" + command_name(cfg.command) + "." + cfg.format;
}

json geometry_echo(const RunConfig& cfg) {
    auto [bmin, bmax] = field_range(*cfg.domain, *cfg.field);
    return json{{"domain", cfg.domain->describe()},
                {"field", cfg.field->describe()},
                {"area", cfg.domain->area()},
                {"perimeter", cfg.domain->perimeter()},
                {"B_min", bmin},
                {"B_max", bmax}};
}

json spectrum_json(const Spectrum& s) {
    json j{{"domain", s.domain}, {"field", s.field},     {"E_cut", s.E_cut},
           {"method", s.method}, {"grid", s.grid},       {"eigenvalues", s.eigenvalues},
           {"err_est", s.err_est}};
    return j;
}

std::string spectrum_csv(const Spectrum& s) {
    std::ostringstream os;
    os << "idx,lambda,err_est,m_channel\n";
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
        os << i + 1 << ',' << csv_number(s.eigenvalues[i]) << ','
           << csv_number(s.err_est[i]) << ','
           << (s.channel[i] == Spectrum::kNoChannel ? std::string("-")
                                                    : std::to_string(s.channel[i]))
           << '\n';
    }
    return os.str();
}

int run_coeffs(const RunConfig& cfg) {
    SeriesTolerance tol{cfg.abs_tol, cfg.k_cap};
    ModelCache cache;
    auto r0 = c0(*cfg.function, *cfg.domain, *cfg.field, tol);
    auto r1 = c1(*cfg.function, *cfg.domain, *cfg.field, tol, cache);

    if (cfg.format == "csv") {
        // per-k s table at the (constant) boundary field value
        double B = cfg.field->param_B0();
        auto series = s_series(B, *cfg.function, tol, cache);
        std::ostringstream os;
        os << "k,s_k,err_est,k_window_lo,k_window_hi\n";
        for (const auto& t : series.terms)
            os << t.k << ',' << csv_number(t.value) << ',' << csv_number(t.err_est) << ','
               << csv_number(t.window.lo) << ',' << csv_number(t.window.hi) << '\n';
        write_file(resolve_path(cfg), os.str());
    } else {
        json j{{"command", "coeffs"},
               {"generated_at", timestamp_utc()},
               {"function", cfg.function->describe()},
               {"geometry", geometry_echo(cfg)},
               {"c0", {{"value", r0.value}, {"err_est", r0.err_est}}},
               {"c1", {{"value", r1.value}, {"err_est", r1.err_est}}}};
        if (cfg.field->is_constant()) {
            auto series = s_series(cfg.field->param_B0(), *cfg.function, tol, cache);
            json terms = json::array();
            for (const auto& t : series.terms)
                terms.push_back(json{{"k", t.k},
                                     {"s_k", t.value},
                                     {"err_est", t.err_est},
                                     {"window_lo", t.window.lo},
                                     {"window_hi", t.window.hi}});
            j["s_terms"] = terms;
            j["s_series"] = {{"value", series.value},
                             {"err_est", series.err_est},
                             {"k_used", series.k_used}};
        }
        write_file(resolve_path(cfg), j.dump(2) + "\n");
    }
    std::cout << "coeffs: c0 = " << r0.value << " (err " << r0.err_est << "), c1 = "
              << r1.value << " (err " << r1.err_est << ") -> " << resolve_path(cfg) << "\n";
    return 0;
}

int run_model1d(const RunConfig& cfg) {
    struct Row {
        double xi;
        int k;
        double e, dpsi0_sq, err;
    };
    std::vector<Row> rows;
    for (double xi : cfg.xi_list) {
        auto grid = ModelGrid::for_problem(xi, cfg.k_max, cfg.spacing);
        auto pairs = model_eigensystem_refined(xi, cfg.k_max, grid, true);
        for (const auto& p : pairs)
            rows.push_back({xi, p.k, p.e, p.dpsi0 * p.dpsi0, p.err_e});
    }
    if (cfg.format == "csv") {
        std::ostringstream os;
        os << "xi,k,e,dpsi0_sq,err_est\n";
        for (const auto& r : rows)
            os << csv_number(r.xi) << ',' << r.k << ',' << csv_number(r.e) << ','
               << csv_number(r.dpsi0_sq) << ',' << csv_number(r.err) << '\n';
        write_file(resolve_path(cfg), os.str());
    } else {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back(json{{"xi", r.xi},
                               {"k", r.k},
                               {"e", r.e},
                               {"dpsi0_sq", r.dpsi0_sq},
                               {"err_est", r.err}});
        json j{{"command", "model1d"},
               {"generated_at", timestamp_utc()},
               {"k_max", cfg.k_max},
               {"spacing", cfg.spacing},
               {"rows", arr}};
        write_file(resolve_path(cfg), j.dump(2) + "\n");
    }
    std::cout << "model1d: " << rows.size() << " eigenpairs -> " << resolve_path(cfg)
              << "\n";
    return 0;
}

int run_verify(const RunConfig& cfg) {
    ModelCache cache;
    if (cfg.mode == "trace") {
        double rel_tol = cfg.domain->kind() == DomainSpec::Kind::disk ? 0.05 : 0.25;
        auto rep = convergence_study(*cfg.domain, *cfg.field, *cfg.function, cfg.h_list,
                                     cache, rel_tol);
        if (cfg.format == "csv") {
            std::ostringstream os;
            os << "h,trace,residual,extracted_c1\n";
            for (std::size_t i = 0; i < rep.h_list.size(); ++i)
                os << csv_number(rep.h_list[i]) << ',' << csv_number(rep.traces[i]) << ','
                   << csv_number(rep.residuals[i]) << ','
                   << csv_number(rep.extracted_c1[i]) << '\n';
            write_file(resolve_path(cfg), os.str());
        } else {
            json j{{"command", "verify"},
                   {"mode", "trace"},
                   {"generated_at", timestamp_utc()},
                   {"geometry", geometry_echo(cfg)},
                   {"function", cfg.function->describe()},
                   {"h", rep.h_list},
                   {"trace", rep.traces},
                   {"c0", rep.c0},
                   {"c1", rep.c1},
                   {"residual", rep.residuals},
                   {"extracted_c1", rep.extracted_c1},
                   {"fit_slope", rep.fit_slope},
                   {"warnings", rep.warnings}};
            write_file(resolve_path(cfg), j.dump(2) + "\n");
        }
        std::cout << "verify(trace): c0 = " << rep.c0 << ", c1 = " << rep.c1
                  << ", extracted_c1 at smallest h = " << rep.extracted_c1.back() << " -> "
                  << resolve_path(cfg) << "\n";
    } else {
        auto rep = counting_vs_exact(*cfg.domain, *cfg.field, cfg.E, cfg.K, cfg.h_list,
                                     cache);
        if (cfg.format == "csv") {
            std::ostringstream os;
            os << "h,count,scaled_deficit,boundary_target\n";
            for (std::size_t i = 0; i < rep.h_list.size(); ++i)
                os << csv_number(rep.h_list[i]) << ',' << rep.counts[i] << ','
                   << csv_number(rep.scaled_deficit[i]) << ','
                   << csv_number(-rep.boundary) << '\n';
            write_file(resolve_path(cfg), os.str());
        } else {
            json j{{"command", "verify"},
                   {"mode", "count"},
                   {"generated_at", timestamp_utc()},
                   {"geometry", geometry_echo(cfg)},
                   {"E", cfg.E},
                   {"K", cfg.K},
                   {"h", rep.h_list},
                   {"count", rep.counts},
                   {"bulk", rep.bulk},
                   {"boundary", rep.boundary},
                   {"scaled_deficit", rep.scaled_deficit}};
            write_file(resolve_path(cfg), j.dump(2) + "\n");
        }
        std::cout << "verify(count): bulk = " << rep.bulk << ", boundary = " << rep.boundary
                  << " -> " << resolve_path(cfg) << "\n";
    }
    if (!cfg.spectrum_out.empty() && cfg.domain->kind() == DomainSpec::Kind::disk) {
        double h = *std::min_element(cfg.h_list.begin(), cfg.h_list.end());
        auto tr = semiclassical_trace_exact(*cfg.domain, *cfg.field, *cfg.function, h);
        if (cfg.spectrum_out.size() > 4 &&
            cfg.spectrum_out.substr(cfg.spectrum_out.size() - 4) == ".csv")
            write_file(cfg.spectrum_out, spectrum_csv(tr.spectrum));
        else {
            json j = spectrum_json(tr.spectrum);
            j["generated_at"] = timestamp_utc();
            write_file(cfg.spectrum_out, j.dump(2) + "\n");
        }
    }
    return 0;
}

int run_kunz(const RunConfig& cfg) {
    ModelCache cache;
    struct Row {
        double E, value, err;
    };
    std::vector<Row> rows;
    for (double E : cfg.E_list) {
        auto w = kunz_shift(cfg.B, E, cfg.K, cache);
        rows.push_back({E, w.value, w.err_est});
    }
    if (cfg.format == "csv") {
        std::ostringstream os;
        os << "E,kunz_shift,err_est\n";
        for (const auto& r : rows)
            os << csv_number(r.E) << ',' << csv_number(r.value) << ',' << csv_number(r.err)
               << '\n';
        write_file(resolve_path(cfg), os.str());
    } else {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back(json{{"E", r.E}, {"value", r.value}, {"err_est", r.err}});
        json j{{"command", "kunz"},
               {"generated_at", timestamp_utc()},
               {"B", cfg.B},
               {"K", cfg.K},
               {"rows", arr}};
        write_file(resolve_path(cfg), j.dump(2) + "\n");
    }
    std::cout << "kunz: " << rows.size() << " energies -> " << resolve_path(cfg) << "\n";
    return 0;
}

int run_thermo(const RunConfig& cfg) {
    ModelCache cache;
    auto dom = DomainSpec::disk(1.0);
    auto f = TestFunction::log_pressure(cfg.beta, cfg.mu);
    std::vector<ThermoResult> rows;
    for (double L : cfg.L_list) rows.push_back(thermo_density(cfg.B, f, L, dom, cache));
    if (cfg.format == "csv") {
        std::ostringstream os;
        os << "L,lhs,rhs,gap,gap_times_L\n";
        for (const auto& r : rows)
            os << csv_number(r.L) << ',' << csv_number(r.lhs) << ',' << csv_number(r.rhs)
               << ',' << csv_number(r.gap) << ',' << csv_number(r.gap * r.L) << '\n';
        write_file(resolve_path(cfg), os.str());
    } else {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back(json{{"L", r.L},
                               {"lhs", r.lhs},
                               {"rhs", r.rhs},
                               {"gap", r.gap},
                               {"gap_times_L", r.gap * r.L},
                               {"h", r.h},
                               {"trace", r.trace}});
        json j{{"command", "thermo"},
               {"generated_at", timestamp_utc()},
               {"B", cfg.B},
               {"beta", cfg.beta},
               {"mu", cfg.mu},
               {"rows", arr}};
        write_file(resolve_path(cfg), j.dump(2) + "\n");
    }
    std::cout << "thermo: " << rows.size() << " sizes -> " << resolve_path(cfg) << "\n";
    return 0;
}

} // namespace

int run(const RunConfig& cfg) {
    try {
        switch (cfg.command) {
        case RunConfig::Command::coeffs: return run_coeffs(cfg);
        case RunConfig::Command::model1d: return run_model1d(cfg);
        case RunConfig::Command::verify: return run_verify(cfg);
        case RunConfig::Command::kunz: return run_kunz(cfg);
        case RunConfig::Command::thermo: return run_thermo(cfg);
        }
    } catch (const numeric_error& e) {
        std::cerr << "magtrace: numeric: " << e.what() << "\n";
        return 2;
    } catch (const precondition_error& e) {
        std::cerr << "magtrace: config: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

} // namespace magtrace
