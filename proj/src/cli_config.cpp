#include "magtrace/cli_config.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "magtrace/errors.hpp"

namespace magtrace {

std::string command_name(RunConfig::Command c) {
    switch (c) {
    case RunConfig::Command::coeffs: return "coeffs";
    case RunConfig::Command::model1d: return "model1d";
    case RunConfig::Command::verify: return "verify";
    case RunConfig::Command::kunz: return "kunz";
    case RunConfig::Command::thermo: return "thermo";
    }
    return "?";
}

namespace {

struct RawValue {
    std::string text;
    int line = 0, col = 0;
};

using Section = std::map<std::string, RawValue>;

struct Document {
    std::map<std::string, Section> sections;
};

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

Document tokenize(const std::string& text, std::vector<ParseError>& errors) {
    Document doc;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string body = line;
        std::size_t hash = body.find('#');
        if (hash != std::string::npos) body = body.substr(0, hash);
        std::string t = trim(body);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') {
                errors.push_back({lineno, (int)line.find('[') + 1,
                                  "unterminated section header"});
                continue;
            }
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                errors.push_back({lineno, 1, "empty section name"});
            doc.sections[section]; // materialize even if empty
            continue;
        }
        std::size_t eq = body.find('=');
        if (eq == std::string::npos) {
            errors.push_back({lineno, (int)(body.find_first_not_of(" \t") + 1),
                              "expected 'key = value'"});
            continue;
        }
        std::string key = trim(body.substr(0, eq));
        std::string value = trim(body.substr(eq + 1));
        if (key.empty()) {
            errors.push_back({lineno, 1, "missing key before '='"});
            continue;
        }
        if (section.empty()) {
            errors.push_back({lineno, 1, "key '" + key + "' outside any [section]"});
            continue;
        }
        int col = (int)(body.find(key) + 1);
        if (doc.sections[section].count(key))
            errors.push_back({lineno, col, "duplicate key '" + key + "' in [" + section + "]"});
        doc.sections[section][key] = {value, lineno, col};
    }
    return doc;
}

// Field reader that tracks consumption so unknown keys can be rejected.
class Reader {
public:
    Reader(Document& doc, std::vector<ParseError>& errors) : doc_(doc), errors_(errors) {}

    bool has_section(const std::string& s) const { return doc_.sections.count(s) > 0; }

    const RawValue* get(const std::string& sec, const std::string& key) {
        used_[sec].insert(key);
        auto si = doc_.sections.find(sec);
        if (si == doc_.sections.end()) return nullptr;
        auto ki = si->second.find(key);
        if (ki == si->second.end()) return nullptr;
        return &ki->second;
    }

    std::optional<double> number(const std::string& sec, const std::string& key) {
        const RawValue* raw = get(sec, key);
        if (!raw) return std::nullopt;
        try {
            std::size_t pos = 0;
            double v = std::stod(raw->text, &pos);
            if (pos != raw->text.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (...) {
            errors_.push_back({raw->line, raw->col,
                               "key '" + key + "': '" + raw->text + "' is not a number"});
            return std::nullopt;
        }
    }

    std::optional<int> integer(const std::string& sec, const std::string& key) {
        auto v = number(sec, key);
        if (!v) return std::nullopt;
        if (*v != (double)(long long)*v) {
            const RawValue* raw = get(sec, key);
            errors_.push_back({raw->line, raw->col, "key '" + key + "' must be an integer"});
            return std::nullopt;
        }
        return (int)*v;
    }

    std::optional<std::string> word(const std::string& sec, const std::string& key) {
        const RawValue* raw = get(sec, key);
        if (!raw) return std::nullopt;
        return raw->text;
    }

    std::optional<std::vector<double>> array(const std::string& sec, const std::string& key) {
        const RawValue* raw = get(sec, key);
        if (!raw) return std::nullopt;
        std::vector<double> out;
        std::string s = raw->text;
        std::replace(s.begin(), s.end(), ',', ' ');
        std::istringstream in(s);
        std::string tok;
        while (in >> tok) {
            try {
                std::size_t pos = 0;
                out.push_back(std::stod(tok, &pos));
                if (pos != tok.size()) throw std::invalid_argument("trailing");
            } catch (...) {
                errors_.push_back({raw->line, raw->col,
                                   "key '" + key + "': '" + tok + "' is not a number"});
                return std::nullopt;
            }
        }
        return out;
    }

    void reject_unknown(const std::set<std::string>& known_sections) {
        for (const auto& [sec, kvs] : doc_.sections) {
            if (!known_sections.count(sec)) {
                int ln = kvs.empty() ? 0 : kvs.begin()->second.line;
                errors_.push_back({ln, 1, "unknown section [" + sec + "]"});
                continue;
            }
            for (const auto& [key, raw] : kvs)
                if (!used_[sec].count(key))
                    errors_.push_back({raw.line, raw.col,
                                       "unknown key '" + key + "' in [" + sec + "]"});
        }
    }

    void error_at(const std::string& sec, const std::string& key, const std::string& msg) {
        auto si = doc_.sections.find(sec);
        if (si != doc_.sections.end()) {
            auto ki = si->second.find(key);
            if (ki != si->second.end()) {
                errors_.push_back({ki->second.line, ki->second.col, msg});
                return;
            }
        }
        errors_.push_back({0, 0, msg});
    }

    void error(const std::string& msg) { errors_.push_back({0, 0, msg}); }

private:
    Document& doc_;
    std::vector<ParseError>& errors_;
    std::map<std::string, std::set<std::string>> used_;
};

std::optional<DomainSpec> read_domain(Reader& r) {
    auto type = r.word("domain", "type");
    if (!type) {
        if (r.has_section("domain")) r.error("[domain] section is missing 'type'");
        return std::nullopt;
    }
    try {
        if (*type == "disk") {
            auto R = r.number("domain", "R");
            if (!R) {
                r.error("[domain] disk requires R");
                return std::nullopt;
            }
            return DomainSpec::disk(*R);
        }
        if (*type == "rectangle") {
            auto Lx = r.number("domain", "Lx"), Ly = r.number("domain", "Ly");
            if (!Lx || !Ly) {
                r.error("[domain] rectangle requires Lx and Ly");
                return std::nullopt;
            }
            return DomainSpec::rectangle(*Lx, *Ly);
        }
        if (*type == "star") {
            auto rho0 = r.number("domain", "rho0");
            auto ac = r.array("domain", "cos_coeffs");
            auto as = r.array("domain", "sin_coeffs");
            if (!rho0) {
                r.error("[domain] star requires rho0");
                return std::nullopt;
            }
            return DomainSpec::star(*rho0, ac.value_or(std::vector<double>{}),
                                    as.value_or(std::vector<double>{}));
        }
        r.error_at("domain", "type", "unknown domain type '" + *type + "'");
    } catch (const precondition_error& e) {
        r.error_at("domain", "type", std::string("domain invariant: ") + e.what());
    }
    return std::nullopt;
}

std::optional<FieldSpec> read_field(Reader& r) {
    auto type = r.word("field", "type");
    if (!type) {
        if (r.has_section("field")) r.error("[field] section is missing 'type'");
        return std::nullopt;
    }
    try {
        if (*type == "constant") {
            auto B0 = r.number("field", "B0");
            if (!B0) {
                r.error("[field] constant requires B0");
                return std::nullopt;
            }
            if (*B0 <= 0) {
                r.error_at("field", "B0", "field must satisfy inf B > 0 (got B0 = " +
                                              std::to_string(*B0) + ")");
                return std::nullopt;
            }
            return FieldSpec::constant(*B0);
        }
        if (*type == "radial_bump") {
            auto B0 = r.number("field", "B0");
            auto a = r.number("field", "a");
            auto sigma = r.number("field", "sigma");
            if (!B0 || !a || !sigma) {
                r.error("[field] radial_bump requires B0, a, sigma");
                return std::nullopt;
            }
            return FieldSpec::radial_bump(*B0, *a, *sigma);
        }
        r.error_at("field", "type", "unknown field type '" + *type + "'");
    } catch (const precondition_error& e) {
        r.error_at("field", "type", std::string("field invariant: ") + e.what());
    }
    return std::nullopt;
}

std::optional<TestFunction> read_function(Reader& r) {
    auto type = r.word("function", "type");
    if (!type) {
        if (r.has_section("function")) r.error("[function] section is missing 'type'");
        return std::nullopt;
    }
    try {
        if (*type == "gaussian") {
            auto c = r.number("function", "center"), w = r.number("function", "width");
            if (!c || !w) {
                r.error("[function] gaussian requires center and width");
                return std::nullopt;
            }
            return TestFunction::gaussian(*c, *w);
        }
        if (*type == "fermi_dirac" || *type == "log_pressure") {
            auto beta = r.number("function", "beta"), mu = r.number("function", "mu");
            if (!beta || !mu) {
                r.error("[function] " + *type + " requires beta and mu");
                return std::nullopt;
            }
            return *type == "fermi_dirac" ? TestFunction::fermi_dirac(*beta, *mu)
                                          : TestFunction::log_pressure(*beta, *mu);
        }
        if (*type == "smoothed_step") {
            auto e0 = r.number("function", "E0"), eps = r.number("function", "eps");
            auto side = r.word("function", "side");
            if (!e0 || !eps || !side) {
                r.error("[function] smoothed_step requires E0, eps, side");
                return std::nullopt;
            }
            if (*side != "lower" && *side != "upper") {
                r.error_at("function", "side", "side must be 'lower' or 'upper'");
                return std::nullopt;
            }
            return TestFunction::smoothed_step(*e0, *eps,
                                               *side == "lower"
                                                   ? TestFunction::StepSide::lower
                                                   : TestFunction::StepSide::upper);
        }
        r.error_at("function", "type", "unknown function type '" + *type + "'");
    } catch (const precondition_error& e) {
        r.error_at("function", "type", std::string("function invariant: ") + e.what());
    }
    return std::nullopt;
}

} // namespace

ParseResult parse_config(const std::string& text, RunConfig::Command command) {
    ParseResult result;
    Document doc = tokenize(text, result.errors);
    Reader r(doc, result.errors);
    RunConfig cfg;
    cfg.command = command;

    std::set<std::string> known{"output", "run"};
    const bool wants_geometry = command == RunConfig::Command::coeffs ||
                                command == RunConfig::Command::verify;
    if (wants_geometry) {
        known.insert({"domain", "field", "function"});
        cfg.domain = read_domain(r);
        cfg.field = read_field(r);
        cfg.function = read_function(r);
        if (!cfg.domain) r.error("command '" + command_name(command) + "' needs a [domain]");
        if (!cfg.field) r.error("command '" + command_name(command) + "' needs a [field]");
        if (!cfg.function)
            r.error("command '" + command_name(command) + "' needs a [function]");
        if (cfg.domain && cfg.field) {
            try {
                require_field_positive(*cfg.domain, *cfg.field);
            } catch (const precondition_error& e) {
                r.error(std::string("field positivity: ") + e.what());
            }
        }
    }

    if (auto v = r.number("run", "abs_tol")) {
        if (*v < 1e-12) r.error_at("run", "abs_tol", "abs_tol must be >= 1e-12");
        else cfg.abs_tol = *v;
    }
    if (auto v = r.integer("run", "k_cap")) {
        if (*v < 1) r.error_at("run", "k_cap", "k_cap must be >= 1");
        else cfg.k_cap = *v;
    }

    switch (command) {
    case RunConfig::Command::coeffs:
        break;
    case RunConfig::Command::model1d: {
        auto xi = r.array("run", "xi_list");
        if (!xi || xi->empty()) r.error("model1d needs a nonempty run.xi_list");
        else cfg.xi_list = *xi;
        if (auto k = r.integer("run", "k_max")) {
            if (*k < 1) r.error_at("run", "k_max", "k_max must be >= 1");
            else cfg.k_max = *k;
        }
        if (auto s = r.number("run", "spacing")) {
            if (!(*s > 0) || *s > 0.1)
                r.error_at("run", "spacing", "spacing must lie in (0, 0.1]");
            else cfg.spacing = *s;
        }
        break;
    }
    case RunConfig::Command::verify: {
        auto hs = r.array("run", "h_list");
        auto Ls = r.array("run", "L_list");
        if (hs && Ls) r.error("verify takes h_list or L_list, not both");
        if (hs) cfg.h_list = *hs;
        if (Ls)
            for (double L : *Ls) {
                if (L < 1.0) r.error_at("run", "L_list", "L values must be >= 1");
                else cfg.h_list.push_back(1.0 / (L * L));
            }
        if (cfg.h_list.empty()) r.error("verify needs run.h_list or run.L_list");
        for (double h : cfg.h_list)
            if (!(h > 0)) r.error_at("run", "h_list", "h values must be > 0");
        if (auto m = r.word("run", "mode")) {
            if (*m != "trace" && *m != "count")
                r.error_at("run", "mode", "mode must be 'trace' or 'count'");
            else cfg.mode = *m;
        }
        if (auto e = r.number("run", "E")) cfg.E = *e;
        if (auto k = r.integer("run", "K")) {
            if (*k < 1) r.error_at("run", "K", "K must be >= 1");
            else cfg.K = *k;
        }
        if (cfg.mode == "count" && cfg.domain && cfg.field) {
            auto [bmin, bmax] = field_range(*cfg.domain, *cfg.field);
            double lo = (2.0 * cfg.K - 1.0) * bmax, hi = (2.0 * cfg.K + 1.0) * bmin;
            if (!(lo < hi))
                r.error("gap condition violated: K=" + std::to_string(cfg.K) +
                        ", B_min=" + std::to_string(bmin) + ", B_max=" + std::to_string(bmax));
            else if (!(cfg.E > lo) || !(cfg.E < hi))
                r.error_at("run", "E",
                           "E=" + std::to_string(cfg.E) + " outside the gap (" +
                               std::to_string(lo) + ", " + std::to_string(hi) + ")");
        }
        if (auto so = r.word("run", "spectrum_out")) cfg.spectrum_out = *so;
        break;
    }
    case RunConfig::Command::kunz: {
        if (auto b = r.number("run", "B")) {
            if (!(*b > 0)) r.error_at("run", "B", "B must be > 0");
            else cfg.B = *b;
        } else {
            r.error("kunz needs run.B");
        }
        if (auto k = r.integer("run", "K")) {
            if (*k < 1) r.error_at("run", "K", "K must be >= 1");
            else cfg.K = *k;
        }
        auto es = r.array("run", "E_list");
        if (!es || es->empty()) r.error("kunz needs a nonempty run.E_list");
        else {
            cfg.E_list = *es;
            double lo = (2.0 * cfg.K - 1.0) * cfg.B, hi = (2.0 * cfg.K + 1.0) * cfg.B;
            for (double e : cfg.E_list)
                if (!(e > lo) || !(e < hi))
                    r.error_at("run", "E_list",
                               "E=" + std::to_string(e) + " outside the gap (" +
                                   std::to_string(lo) + ", " + std::to_string(hi) + ")");
        }
        break;
    }
    case RunConfig::Command::thermo: {
        if (auto b = r.number("run", "B")) {
            if (!(*b > 0)) r.error_at("run", "B", "B must be > 0");
            else cfg.B = *b;
        } else {
            r.error("thermo needs run.B");
        }
        if (auto b = r.number("run", "beta")) {
            if (!(*b > 0)) r.error_at("run", "beta", "beta must be > 0");
            else cfg.beta = *b;
        } else {
            r.error("thermo needs run.beta");
        }
        if (auto m = r.number("run", "mu")) cfg.mu = *m;
        else r.error("thermo needs run.mu");
        auto Ls = r.array("run", "L_list");
        if (!Ls || Ls->empty()) r.error("thermo needs a nonempty run.L_list");
        else {
            cfg.L_list = *Ls;
            for (double L : cfg.L_list)
                if (L < 1.0) r.error_at("run", "L_list", "L values must be >= 1");
        }
        break;
    }
    }

    if (auto p = r.word("output", "path")) cfg.out_path = *p;
    if (auto fmt = r.word("output", "format")) {
        if (*fmt != "json" && *fmt != "csv")
            r.error_at("output", "format", "format must be 'json' or 'csv'");
        else cfg.format = *fmt;
    }
    if (command == RunConfig::Command::coeffs && cfg.format == "csv" && cfg.field &&
        !cfg.field->is_constant())
        r.error("coeffs csv output (per-k s table) needs a constant field");

    r.reject_unknown(known);

    if (result.errors.empty()) result.config = std::move(cfg);
    return result;
}

} // namespace magtrace
