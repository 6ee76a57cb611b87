#include "esnoise/cli/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "esnoise/cli/csv.hpp"

namespace esnoise::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line) {
    errno = 0;
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || errno == ERANGE)
        throw ParseError(line, "expected a real number, got '" + v + "'");
    return d;
}

long long parse_int(const std::string& v, int line) {
    errno = 0;
    char* end = nullptr;
    const long long i = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0' || errno == ERANGE)
        throw ParseError(line, "expected an integer, got '" + v + "'");
    return i;
}

uint64_t parse_u64(const std::string& v, int line) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long i = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0' || errno == ERANGE ||
        v.find('-') != std::string::npos)
        throw ParseError(line, "expected an unsigned integer, got '" + v + "'");
    return i;
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ParseError(line, "expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (true) {
        const size_t comma = v.find(',', start);
        parts.push_back(trim(v.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return parts;
}

std::vector<double> parse_double_list(const std::string& v, int line) {
    std::vector<double> out;
    for (const auto& p : split_list(v)) out.push_back(parse_double(p, line));
    return out;
}

std::vector<int> parse_int_list(const std::string& v, int line) {
    std::vector<int> out;
    for (const auto& p : split_list(v)) out.push_back(int(parse_int(p, line)));
    return out;
}

void expect_one_of(const std::string& key, const std::string& v,
                   std::initializer_list<const char*> allowed, int line) {
    for (const char* a : allowed)
        if (v == a) return;
    std::string msg = key + " must be one of {";
    bool first = true;
    for (const char* a : allowed) {
        if (!first) msg += ", ";
        msg += a;
        first = false;
    }
    throw ParseError(line, msg + "}, got '" + v + "'");
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    return out;
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value, int line) {
    const std::string v = trim(value);
    if (v.empty()) throw ParseError(line, "empty value for key '" + key + "'");

    if (key == "scenario") {
        scenario = v;
    } else if (key == "seed") {
        seed = parse_u64(v, line);
    } else if (key == "trials") {
        trials = int(parse_int(v, line));
    } else if (key == "threads") {
        threads = int(parse_int(v, line));
    } else if (key == "simd") {
        expect_one_of(key, v, {"auto", "scalar", "avx2", "neon"}, line);
        simd = v;
    } else if (key == "emit") {
        expect_one_of(key, v, {"csv", "svg", "both"}, line);
        emit = v;
    } else if (key == "n_reservoir") {
        n_reservoir = int(parse_int(v, line));
    } else if (key == "alpha") {
        alpha = parse_double(v, line);
    } else if (key == "beta") {
        beta = parse_double(v, line);
        has_beta = true;
    } else if (key == "gamma") {
        gamma = parse_double(v, line);
    } else if (key == "d_add") {
        d_add = parse_double(v, line);
    } else if (key == "d_mul") {
        d_mul = parse_double(v, line);
    } else if (key == "additive_enabled") {
        additive_enabled = parse_bool(v, line);
    } else if (key == "multiplicative_enabled") {
        multiplicative_enabled = parse_bool(v, line);
    } else if (key == "topology") {
        expect_one_of(key, v, {"uniform", "diagonal"}, line);
        topology = v;
    } else if (key == "zeta") {
        zeta = int(parse_int(v, line));
    } else if (key == "kernel") {
        expect_one_of(key, v, {"symmetric", "literal"}, line);
        kernel = v;
    } else if (key == "boundary") {
        expect_one_of(key, v, {"wrap", "truncate"}, line);
        boundary = v;
    } else if (key == "signal") {
        expect_one_of(key, v, {"uniform", "sine", "explicit"}, line);
        signal = v;
    } else if (key == "signal_lo") {
        signal_lo = parse_double(v, line);
    } else if (key == "signal_hi") {
        signal_hi = parse_double(v, line);
    } else if (key == "signal_amplitude") {
        signal_amplitude = parse_double(v, line);
    } else if (key == "signal_period") {
        signal_period = parse_double(v, line);
    } else if (key == "signal_phase") {
        signal_phase = parse_double(v, line);
    } else if (key == "signal_samples") {
        signal_samples = parse_double_list(v, line);
    } else if (key == "signal_length") {
        signal_length = int(parse_int(v, line));
    } else if (key == "signal_seed") {
        signal_seed = parse_u64(v, line);
    } else if (key == "transient_discard") {
        transient_discard = int(parse_int(v, line));
    } else if (key == "gamma_grid") {
        gamma_grid = parse_double_list(v, line);
    } else if (key == "alpha_grid") {
        alpha_grid = parse_double_list(v, line);
    } else if (key == "x_grid") {
        x_grid = parse_double_list(v, line);
    } else if (key == "zeta_grid") {
        zeta_grid = parse_int_list(v, line);
    } else if (key == "code_version") {
        // recorded in manifests; accepted so a manifest replays as a config
    } else {
        throw UnknownKey(key);
    }
    explicit_keys.insert(key);
}

void RunConfig::set_default(const std::string& key, const std::string& value) {
    if (is_explicit(key)) return;
    set(key, value, 0);
    explicit_keys.erase(key);  // stays overridable by later layers
}

bool RunConfig::is_explicit(const std::string& key) const {
    return explicit_keys.count(key) != 0;
}

int RunConfig::resolved_discard() const {
    if (transient_discard >= 0) return transient_discard;
    return default_transient_discard(signal_spec());
}

NoiseSpec RunConfig::noise_spec() const {
    return NoiseSpec{d_add, d_mul, additive_enabled, multiplicative_enabled};
}

EsnParams RunConfig::esn_params() const {
    return EsnParams{n_reservoir, resolved_beta(), gamma, Activation{alpha}};
}

SignalSpec RunConfig::signal_spec() const {
    SignalSpec s;
    s.length = signal_length;
    s.seed = signal_seed;
    if (signal == "uniform") {
        s.kind = SignalSpec::Kind::UniformRandom;
        s.lo = signal_lo;
        s.hi = signal_hi;
    } else if (signal == "sine") {
        s.kind = SignalSpec::Kind::Sine;
        s.amplitude = signal_amplitude;
        s.period = signal_period;
        s.phase = signal_phase;
    } else {
        s.kind = SignalSpec::Kind::Explicit;
        s.samples = signal_samples;
        s.length = int(signal_samples.size());
    }
    return s;
}

BlurKernel RunConfig::blur_kernel() const {
    return kernel == "literal" ? BlurKernel::LiteralEq7
                               : BlurKernel::SymmetricGaussian;
}

Boundary RunConfig::boundary_mode() const {
    return boundary == "truncate" ? Boundary::Truncate : Boundary::Wrap;
}

ReservoirTopology RunConfig::build_topology() const {
    if (topology == "uniform") return uniform_matrix(n_reservoir);
    return diagonal_blurred_matrix(n_reservoir, zeta, blur_kernel(),
                                   boundary_mode());
}

SimConfig RunConfig::to_sim_config() const {
    SimConfig cfg;
    cfg.params = esn_params();
    cfg.noise = noise_spec();
    cfg.signal = signal_spec();
    cfg.topology = build_topology();
    cfg.seed = seed;
    validate(cfg);
    return cfg;
}

std::vector<std::pair<std::string, std::string>> RunConfig::manifest_entries()
    const {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("scenario", scenario);
    kv.emplace_back("code_version", kCodeVersion);
    kv.emplace_back("seed", std::to_string(seed));
    kv.emplace_back("trials", std::to_string(trials));
    kv.emplace_back("threads", std::to_string(threads));
    kv.emplace_back("simd", simd);
    kv.emplace_back("emit", emit);
    kv.emplace_back("n_reservoir", std::to_string(n_reservoir));
    kv.emplace_back("alpha", format_double(alpha));
    kv.emplace_back("beta", format_double(resolved_beta()));
    kv.emplace_back("gamma", format_double(gamma));
    kv.emplace_back("d_add", format_double(d_add));
    kv.emplace_back("d_mul", format_double(d_mul));
    kv.emplace_back("additive_enabled", additive_enabled ? "true" : "false");
    kv.emplace_back("multiplicative_enabled",
                    multiplicative_enabled ? "true" : "false");
    kv.emplace_back("topology", topology);
    kv.emplace_back("zeta", std::to_string(zeta));
    kv.emplace_back("kernel", kernel);
    kv.emplace_back("boundary", boundary);
    kv.emplace_back("signal", signal);
    kv.emplace_back("signal_length", std::to_string(signal_length));
    kv.emplace_back("signal_seed", std::to_string(signal_seed));
    kv.emplace_back("signal_lo", format_double(signal_lo));
    kv.emplace_back("signal_hi", format_double(signal_hi));
    kv.emplace_back("signal_amplitude", format_double(signal_amplitude));
    kv.emplace_back("signal_phase", format_double(signal_phase));
    kv.emplace_back("signal_period", format_double(signal_period));
    if (!signal_samples.empty())
        kv.emplace_back("signal_samples", join_doubles(signal_samples));
    kv.emplace_back("transient_discard", std::to_string(transient_discard));
    kv.emplace_back("gamma_grid", join_doubles(gamma_grid));
    if (!alpha_grid.empty())
        kv.emplace_back("alpha_grid", join_doubles(alpha_grid));
    if (!x_grid.empty()) kv.emplace_back("x_grid", join_doubles(x_grid));
    kv.emplace_back("zeta_grid", join_ints(zeta_grid));
    return kv;
}

void apply_config(RunConfig& config, const std::string& text) {
    std::istringstream is(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line == "key,value") continue;  // manifest header

        std::string key, value;
        if (const auto eq = line.find('='); eq != std::string::npos) {
            key = trim(line.substr(0, eq));
            value = trim(line.substr(eq + 1));
        } else if (const auto comma = line.find(','); comma != std::string::npos) {
            key = trim(line.substr(0, comma));
            value = trim(line.substr(comma + 1));
        } else {
            throw ParseError(line_no, "expected 'key = value', got '" + line + "'");
        }
        if (key.empty()) throw ParseError(line_no, "missing key");
        config.set(key, value, line_no);
    }
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    apply_config(cfg, text);
    // surface bad values immediately, with the config-loading error types
    validate(cfg.esn_params(), cfg.noise_spec());
    validate(cfg.signal_spec());
    if (cfg.topology == "diagonal" && 2 * cfg.zeta + 1 > cfg.n_reservoir)
        throw BandTooWide(cfg.zeta, cfg.n_reservoir);
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IOError("cannot open config " + path.string());
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config(buf.str());
}

}  // namespace esnoise::cli
