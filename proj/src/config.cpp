#include "iaw/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace iaw {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_length(const std::string& raw, const std::string& key) {
    std::string v = trim(raw);
    double factor = 1.0;
    if (v.size() > 2 && v.substr(v.size() - 2) == "pi") {
        factor = std::numbers::pi;
        v = trim(v.substr(0, v.size() - 2));
        if (v.empty() || v == "*") v = "1";
        if (!v.empty() && v.back() == '*') v = trim(v.substr(0, v.size() - 1));
    }
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x * factor;
    } catch (...) {
        throw ConfigError("config: cannot parse number for key '" + key + "': " + raw);
    }
}

double parse_number(const std::string& raw, const std::string& key) {
    return parse_length(raw, key);
}

int parse_int(const std::string& raw, const std::string& key) {
    try {
        size_t pos = 0;
        int x = std::stoi(trim(raw), &pos);
        if (pos != trim(raw).size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("config: cannot parse integer for key '" + key + "': " + raw);
    }
}

std::vector<double> parse_list(const std::string& raw, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_number(item, key));
    }
    return out;
}

}  // namespace

void RunConfig::validate() const {
    if (!(length > 0.0)) throw ConfigError("config: grid length must be positive");
    if (n < 8 || n % 2 != 0) throw ConfigError("config: n must be even and >= 8");
    if (kdv_init != "soliton" && kdv_init != "file")
        throw ConfigError("config: kdv init must be 'soliton' or 'file'");
    if (kdv_init == "file" && init_file.empty())
        throw ConfigError("config: kdv init = file requires init_file");
    if (kdv_init == "soliton" && !(soliton_k > 0.0))
        throw ConfigError("config: soliton_k must be positive");
    if (!(T > 0.0)) throw ConfigError("config: T must be positive");
    if (!(dt > 0.0)) throw ConfigError("config: dt must be positive");
    if (snapshot_stride < 1) throw ConfigError("config: snapshot_stride must be >= 1");
    if (epsilons.empty()) throw ConfigError("config: epsilon list is empty");
    for (double e : epsilons)
        if (!(e > 0.0 && e < 1.0)) throw ConfigError("config: every epsilon must lie in (0,1)");
    if (nu_rule != "beta" && nu_rule != "list")
        throw ConfigError("config: nu_rule must be 'beta' or 'list'");
    if (nu_rule == "beta" && betas.empty()) throw ConfigError("config: beta list is empty");
    if (nu_rule == "list") {
        if (nus.empty()) throw ConfigError("config: nu_rule = list requires nus");
        for (double nu : nus)
            if (!(nu > 0.0)) throw ConfigError("config: every nu must be positive");
    }
    if (transport != "constant" && transport != "sqrt_theta")
        throw ConfigError("config: transport must be 'constant' or 'sqrt_theta'");
    if (!(c0 > 0.0 && c0 < 0.5)) throw ConfigError("config: c0 must lie in (0, 1/2)");
    if (!(c1 > 0.0 && c1 < 1.0)) throw ConfigError("config: c1 must lie in (0, 1)");
    if (!(antideriv_mean_tol > 0.0)) throw ConfigError("config: antideriv_mean_tol must be > 0");
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": malformed section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string qual = section + "." + key;

        if (qual == "grid.length") cfg.length = parse_length(value, qual);
        else if (qual == "grid.n") cfg.n = parse_int(value, qual);
        else if (qual == "kdv.init") cfg.kdv_init = value;
        else if (qual == "kdv.soliton_k") cfg.soliton_k = parse_number(value, qual);
        else if (qual == "kdv.init_file") cfg.init_file = value;
        else if (qual == "time.T") cfg.T = parse_number(value, qual);
        else if (qual == "time.dt") cfg.dt = parse_number(value, qual);
        else if (qual == "time.snapshot_stride") cfg.snapshot_stride = parse_int(value, qual);
        else if (qual == "sweep.epsilons") cfg.epsilons = parse_list(value, qual);
        else if (qual == "sweep.nu_rule") cfg.nu_rule = value;
        else if (qual == "sweep.betas") cfg.betas = parse_list(value, qual);
        else if (qual == "sweep.nus") cfg.nus = parse_list(value, qual);
        else if (qual == "transport.coeffs") cfg.transport = value;
        else if (qual == "regime.c0") cfg.c0 = parse_number(value, qual);
        else if (qual == "regime.c1") cfg.c1 = parse_number(value, qual);
        else if (qual == "output.dir") cfg.out_dir = value;
        else if (qual == "output.antideriv_mean_tol")
            cfg.antideriv_mean_tol = parse_number(value, qual);
        else
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + qual +
                              "'");
    }
    cfg.validate();
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string canonical_config(const RunConfig& cfg) {
    std::map<std::string, std::string> kv;
    kv["grid.length"] = format_double(cfg.length);
    kv["grid.n"] = std::to_string(cfg.n);
    kv["kdv.init"] = cfg.kdv_init;
    kv["kdv.soliton_k"] = format_double(cfg.soliton_k);
    kv["kdv.init_file"] = cfg.init_file;
    kv["time.T"] = format_double(cfg.T);
    kv["time.dt"] = format_double(cfg.dt);
    kv["time.snapshot_stride"] = std::to_string(cfg.snapshot_stride);
    auto join = [](const std::vector<double>& v) {
        std::string s;
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += format_double(v[i]);
        }
        return s;
    };
    kv["sweep.epsilons"] = join(cfg.epsilons);
    kv["sweep.nu_rule"] = cfg.nu_rule;
    kv["sweep.betas"] = join(cfg.betas);
    kv["sweep.nus"] = join(cfg.nus);
    kv["transport.coeffs"] = cfg.transport;
    kv["regime.c0"] = format_double(cfg.c0);
    kv["regime.c1"] = format_double(cfg.c1);
    kv["output.antideriv_mean_tol"] = format_double(cfg.antideriv_mean_tol);

    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

uint64_t config_digest(const RunConfig& cfg) {
    const std::string text = canonical_config(cfg);
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace iaw
