#include "cli/config.hpp"

#include "cli/output.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace fracstep::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

const std::set<std::string> kScalarKeys = {
    "alpha", "nu", "c2", "L", "R", "M", "k", "N", "operator_mode", "corrector_iters",
    "eps_reg", "snapshot_stride", "f.time", "f.rate",
};

const std::set<std::string> kProfileFields = {"kind", "value", "amp", "center", "sigma", "mode",
                                              "values"};

bool is_profile_key(const std::string& key) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) return false;
    const auto prefix = key.substr(0, dot);
    return (prefix == "ic" || prefix == "a" || prefix == "b" || prefix == "f") &&
           kProfileFields.count(key.substr(dot + 1)) > 0;
}

std::optional<CoefficientProfile> profile_from(const KeyValues& kv, const std::string& prefix) {
    auto get = [&](const std::string& field) -> std::optional<std::string> {
        const auto it = kv.find(prefix + "." + field);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };
    auto number = [&](const std::string& field, double fallback) {
        const auto v = get(field);
        return v ? parse_number(prefix + "." + field, *v) : fallback;
    };

    const auto kind = get("kind");
    if (!kind) {
        for (const auto& f : kProfileFields) {
            if (get(f)) throw ConfigError(prefix + ".kind is required when " + prefix + "." + f + " is set");
        }
        return std::nullopt;
    }
    if (*kind == "zero") return ZeroProfile{};
    if (*kind == "constant") return ConstantProfile{number("value", 0.0)};
    if (*kind == "gaussian") {
        return GaussianProfile{number("amp", 1.0), number("center", 0.0), number("sigma", 1.0)};
    }
    if (*kind == "sine") {
        const auto mode = get("mode");
        return SineProfile{number("amp", 1.0), mode ? parse_int(prefix + ".mode", *mode) : 1};
    }
    if (*kind == "tabulated") {
        const auto values = get("values");
        if (!values) throw ConfigError(prefix + ".values is required for a tabulated profile");
        TabulatedProfile t;
        for (const auto& item : split(*values, ',')) t.values.push_back(parse_number(prefix + ".values", item));
        return t;
    }
    throw ConfigError("unknown profile kind '" + *kind + "' for " + prefix);
}

void write_profile(std::ostringstream& out, const std::string& prefix, const CoefficientProfile& p) {
    out << prefix << ".kind = " << profile_kind(p) << '\n';
    if (const auto* c = std::get_if<ConstantProfile>(&p)) {
        out << prefix << ".value = " << format_exact(c->value) << '\n';
    } else if (const auto* g = std::get_if<GaussianProfile>(&p)) {
        out << prefix << ".amp = " << format_exact(g->amp) << '\n'
            << prefix << ".center = " << format_exact(g->center) << '\n'
            << prefix << ".sigma = " << format_exact(g->sigma) << '\n';
    } else if (const auto* s = std::get_if<SineProfile>(&p)) {
        out << prefix << ".amp = " << format_exact(s->amp) << '\n'
            << prefix << ".mode = " << s->mode << '\n';
    } else if (const auto* t = std::get_if<TabulatedProfile>(&p)) {
        out << prefix << ".values = ";
        for (std::size_t i = 0; i < t->values.size(); ++i) {
            out << (i ? "," : "") << format_exact(t->values[i]);
        }
        out << '\n';
    }
}

} // namespace

KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (key.rfind("run.", 0) == 0) continue;
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

KeyValues read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_key_values(buf.str());
}

double parse_number(const std::string& key, const std::string& text) {
    const auto t = trim(text);
    if (t.find(',') != std::string::npos) {
        throw ConfigError(key + ": '" + t + "' uses a decimal comma; use a decimal point");
    }
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size()) {
        throw ConfigError(key + ": '" + t + "' is not a number");
    }
    return v;
}

int parse_int(const std::string& key, const std::string& text) {
    const auto t = trim(text);
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size()) {
        throw ConfigError(key + ": '" + t + "' is not an integer");
    }
    return static_cast<int>(v);
}

OperatorMode parse_operator_mode(const std::string& text) {
    if (text == "left-rl" || text == "left_rl") return OperatorMode::left_rl;
    if (text == "riesz") return OperatorMode::riesz;
    throw ConfigError("operator_mode must be left-rl or riesz, got '" + text + "'");
}

std::string to_string(OperatorMode mode) {
    return mode == OperatorMode::riesz ? "riesz" : "left-rl";
}

RunConfig apply_key_values(const KeyValues& kv, RunConfig base) {
    for (const auto& [key, value] : kv) {
        if (!kScalarKeys.count(key) && !is_profile_key(key)) {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    auto num = [&](const char* key, double& target) {
        if (const auto it = kv.find(key); it != kv.end()) target = parse_number(key, it->second);
    };
    auto integer = [&](const char* key, int& target) {
        if (const auto it = kv.find(key); it != kv.end()) target = parse_int(key, it->second);
    };

    ProblemSpec& spec = base.spec;
    num("alpha", spec.alpha);
    num("nu", spec.nu);
    num("c2", spec.c2);

    GridSpec& g = spec.grid;
    num("L", g.L);
    num("R", g.R);
    integer("M", g.M);
    num("k", g.k);
    integer("N", g.N);
    // Derived; validate() reports an inconsistent grid rather than throwing here.
    g.h = g.M > 0 ? (g.R - g.L) / g.M : 0.0;

    if (const auto it = kv.find("operator_mode"); it != kv.end()) {
        spec.operator_mode = parse_operator_mode(it->second);
    }
    integer("corrector_iters", base.corrector_iterations);
    num("eps_reg", base.eps_reg);
    integer("snapshot_stride", base.snapshot_stride);

    if (auto p = profile_from(kv, "ic")) spec.u0 = *p;
    if (auto p = profile_from(kv, "a")) spec.a = *p;
    if (auto p = profile_from(kv, "b")) spec.b = *p;
    if (auto p = profile_from(kv, "f")) spec.f = *p;

    if (const auto it = kv.find("f.time"); it != kv.end()) {
        if (it->second == "constant") {
            spec.f_time.kind = TimeProfile::Kind::constant;
        } else if (it->second == "exponential") {
            spec.f_time.kind = TimeProfile::Kind::exponential;
        } else {
            throw ConfigError("f.time must be constant or exponential");
        }
    }
    num("f.rate", spec.f_time.rate);
    return base;
}

void apply_profile_flag(KeyValues& kv, const std::string& prefix, const std::string& flag) {
    const auto colon = flag.find(':');
    const auto kind = trim(flag.substr(0, colon));
    for (auto it = kv.begin(); it != kv.end();) {
        it = it->first.rfind(prefix + ".", 0) == 0 && it->first != "f.time" && it->first != "f.rate"
                 ? kv.erase(it)
                 : std::next(it);
    }
    kv[prefix + ".kind"] = kind;
    if (colon == std::string::npos) return;
    for (const auto& item : split(flag.substr(colon + 1), ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("--" + prefix + ": expected field=value in '" + item + "'");
        const auto field = trim(item.substr(0, eq));
        if (!kProfileFields.count(field) || field == "kind" || field == "values") {
            throw ConfigError("--" + prefix + ": unknown field '" + field + "'");
        }
        kv[prefix + "." + field] = trim(item.substr(eq + 1));
    }
}

std::string to_config_text(const RunConfig& config) {
    const ProblemSpec& s = config.spec;
    std::ostringstream out;
    out << "alpha = " << format_exact(s.alpha) << '\n'
        << "nu = " << format_exact(s.nu) << '\n'
        << "c2 = " << format_exact(s.c2) << '\n'
        << "L = " << format_exact(s.grid.L) << '\n'
        << "R = " << format_exact(s.grid.R) << '\n'
        << "M = " << s.grid.M << '\n'
        << "k = " << format_exact(s.grid.k) << '\n'
        << "N = " << s.grid.N << '\n'
        << "operator_mode = " << to_string(s.operator_mode) << '\n'
        << "corrector_iters = " << config.corrector_iterations << '\n'
        << "eps_reg = " << format_exact(config.eps_reg) << '\n'
        << "snapshot_stride = " << config.snapshot_stride << '\n';
    write_profile(out, "ic", s.u0);
    write_profile(out, "a", s.a);
    if (s.b) write_profile(out, "b", *s.b);
    write_profile(out, "f", s.f);
    out << "f.time = " << (s.f_time.kind == TimeProfile::Kind::exponential ? "exponential" : "constant")
        << '\n'
        << "f.rate = " << format_exact(s.f_time.rate) << '\n';
    return out.str();
}

} // namespace fracstep::cli
