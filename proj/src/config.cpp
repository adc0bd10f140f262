#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "floqlat/csv.hpp"
#include "floqlat/harness.hpp"

namespace floqlat {

std::string to_string(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::trace: return "trace";
    case ExperimentKind::spectrum: return "spectrum";
    case ExperimentKind::eigenstate: return "eigenstate";
    case ExperimentKind::derivative_sweep: return "derivative-sweep";
    case ExperimentKind::quasienergy_scan: return "quasienergy-scan";
    }
    return "trace";
}

ExperimentKind parse_kind(const std::string& name) {
    if (name == "trace") return ExperimentKind::trace;
    if (name == "spectrum") return ExperimentKind::spectrum;
    if (name == "eigenstate") return ExperimentKind::eigenstate;
    if (name == "derivative-sweep") return ExperimentKind::derivative_sweep;
    if (name == "quasienergy-scan") return ExperimentKind::quasienergy_scan;
    throw std::invalid_argument(
        "unknown experiment kind '" + name +
        "' (expected trace|spectrum|eigenstate|derivative-sweep|quasienergy-scan)");
}

bool ExperimentConfig::operator==(const ExperimentConfig& other) const {
    return qubit.omega_z == other.qubit.omega_z && drive.h_sum == other.drive.h_sum &&
           drive.alpha == other.drive.alpha && drive.cutoff_M == other.drive.cutoff_M &&
           drive.omega_p == other.drive.omega_p && trunc_N == other.trunc_N &&
           t_total_us == other.t_total_us && n_samples == other.n_samples &&
           steps_per_period == other.steps_per_period && shots == other.shots &&
           rng_seed == other.rng_seed && out_dir == other.out_dir && kind == other.kind &&
           alphas == other.alphas && Ms == other.Ms && h_sum_min == other.h_sum_min &&
           h_sum_max == other.h_sum_max && h_sum_count == other.h_sum_count &&
           m_max == other.m_max;
}

void ExperimentConfig::validate() const {
    drive.validate();
    if (!std::isfinite(qubit.omega_z))
        throw std::invalid_argument("omega_z must be finite");
    if (trunc_N < drive.cutoff_M)
        throw std::invalid_argument("trunc_N must be >= cutoff_M");
    if (!(t_total_us > 0.0))
        throw std::invalid_argument("t_total must be > 0");
    if (n_samples < 2)
        throw std::invalid_argument("n_samples must be >= 2");
    if (steps_per_period < 1)
        throw std::invalid_argument("steps_per_period must be >= 1");
    if (shots < 0)
        throw std::invalid_argument("shots must be >= 0");
    if (out_dir.empty())
        throw std::invalid_argument("out_dir must not be empty");
    for (double a : alphas)
        if (!std::isfinite(a) || a < 0.0)
            throw std::invalid_argument("alphas entries must be >= 0");
    for (int m : Ms)
        if (m < 0)
            throw std::invalid_argument("Ms entries must be >= 0");
    if (h_sum_min < 0.0)
        throw std::invalid_argument("h_sum_min must be >= 0");
    if (h_sum_max < h_sum_min)
        throw std::invalid_argument("h_sum_max must be >= h_sum_min");
    if (h_sum_count < 2)
        throw std::invalid_argument("h_sum_count must be >= 2");
    if (m_max < 0)
        throw std::invalid_argument("m_max must be >= 0");
}

ExperimentConfig default_config() {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    ExperimentConfig cfg;
    cfg.qubit.omega_z = two_pi * 0.25;  // rad/us
    cfg.drive.h_sum = two_pi * 1.2;
    cfg.drive.alpha = 0.0;
    cfg.drive.cutoff_M = 5;
    cfg.drive.omega_p = two_pi * 0.3;
    cfg.trunc_N = 40;                          // = max(4*M, 40)
    cfg.t_total_us = 5.0 * cfg.drive.period(); // T = 5 tau
    cfg.n_samples = 740;
    cfg.steps_per_period = 1024;
    cfg.shots = 8192;
    cfg.rng_seed = 12345;
    cfg.out_dir = "run_out";
    cfg.kind = ExperimentKind::trace;
    cfg.h_sum_min = 0.0;
    cfg.h_sum_max = two_pi * 2.0;
    cfg.h_sum_count = 200;
    cfg.m_max = 0;
    return cfg;
}

ExperimentConfig preset_config(const std::string& name) {
    if (name == "armonk-defaults")
        return default_config();
    throw std::invalid_argument("unknown preset '" + name + "' (available: armonk-defaults)");
}

namespace {

struct KeyInfo {
    const char* section;
};

// Every accepted key with its home section. Lookup is global (keys are
// unique), but a key placed under a foreign section is rejected.
const std::vector<std::pair<std::string, KeyInfo>>& key_table() {
    static const std::vector<std::pair<std::string, KeyInfo>> table = {
        {"omega_z", {"qubit"}},
        {"h_sum", {"drive"}},
        {"alpha", {"drive"}},
        {"cutoff_M", {"drive"}},
        {"omega_p", {"drive"}},
        {"trunc_N", {"floquet"}},
        {"kind", {"run"}},
        {"t_total", {"run"}},
        {"n_samples", {"run"}},
        {"steps_per_period", {"run"}},
        {"shots", {"run"}},
        {"rng_seed", {"run"}},
        {"out_dir", {"run"}},
        {"alphas", {"grid"}},
        {"Ms", {"grid"}},
        {"h_sum_min", {"grid"}},
        {"h_sum_max", {"grid"}},
        {"h_sum_count", {"grid"}},
        {"m_max", {"grid"}},
    };
    return table;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(const std::string& origin, int line, const std::string& what) {
    std::ostringstream msg;
    msg << "config parse error at " << origin << ":" << line << ": " << what;
    throw std::runtime_error(msg.str());
}

double parse_double(const std::string& origin, int line, const std::string& key,
                    const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        parse_fail(origin, line, "key '" + key + "' expects a number, got '" + value + "'");
    }
    if (pos != value.size())
        parse_fail(origin, line, "trailing characters after number for key '" + key + "'");
    return v;
}

long long parse_int(const std::string& origin, int line, const std::string& key,
                    const std::string& value) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(value, &pos);
    } catch (const std::exception&) {
        parse_fail(origin, line, "key '" + key + "' expects an integer, got '" + value + "'");
    }
    if (pos != value.size())
        parse_fail(origin, line, "trailing characters after integer for key '" + key + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ','))
        out.push_back(trim(item));
    return out;
}

} // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& origin) {
    ExperimentConfig cfg = default_config();
    // t_total defaults to 5 tau of the *resolved* drive and trunc_N to
    // max(4*cutoff_M, 40); track whether the file pinned them.
    bool t_total_set = false, trunc_set = false;

    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                parse_fail(origin, line_no, "malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            const char* known[] = {"qubit", "drive", "floquet", "run", "grid"};
            if (std::find(std::begin(known), std::end(known), section) == std::end(known))
                parse_fail(origin, line_no, "unknown section '" + section + "'");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            parse_fail(origin, line_no, "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        const auto& table = key_table();
        const auto it = std::find_if(table.begin(), table.end(),
                                     [&](const auto& kv) { return kv.first == key; });
        if (it == table.end())
            parse_fail(origin, line_no, "unknown key '" + key + "'");
        if (!section.empty() && section != it->second.section)
            parse_fail(origin, line_no,
                       "key '" + key + "' belongs to section [" + it->second.section + "]");

        if (key == "omega_z") {
            cfg.qubit.omega_z = parse_double(origin, line_no, key, value);
        } else if (key == "h_sum") {
            cfg.drive.h_sum = parse_double(origin, line_no, key, value);
        } else if (key == "alpha") {
            cfg.drive.alpha = parse_double(origin, line_no, key, value);
        } else if (key == "cutoff_M") {
            cfg.drive.cutoff_M = static_cast<int>(parse_int(origin, line_no, key, value));
        } else if (key == "omega_p") {
            cfg.drive.omega_p = parse_double(origin, line_no, key, value);
        } else if (key == "trunc_N") {
            cfg.trunc_N = static_cast<int>(parse_int(origin, line_no, key, value));
            trunc_set = true;
        } else if (key == "kind") {
            try {
                cfg.kind = parse_kind(value);
            } catch (const std::exception& e) {
                parse_fail(origin, line_no, e.what());
            }
        } else if (key == "t_total") {
            cfg.t_total_us = parse_double(origin, line_no, key, value);
            t_total_set = true;
        } else if (key == "n_samples") {
            cfg.n_samples = static_cast<int>(parse_int(origin, line_no, key, value));
        } else if (key == "steps_per_period") {
            cfg.steps_per_period = static_cast<int>(parse_int(origin, line_no, key, value));
        } else if (key == "shots") {
            cfg.shots = static_cast<int>(parse_int(origin, line_no, key, value));
        } else if (key == "rng_seed") {
            cfg.rng_seed = static_cast<std::uint64_t>(parse_int(origin, line_no, key, value));
        } else if (key == "out_dir") {
            cfg.out_dir = value;
        } else if (key == "alphas") {
            cfg.alphas.clear();
            for (const std::string& s : split_csv(value))
                cfg.alphas.push_back(parse_double(origin, line_no, key, s));
        } else if (key == "Ms") {
            cfg.Ms.clear();
            for (const std::string& s : split_csv(value))
                cfg.Ms.push_back(static_cast<int>(parse_int(origin, line_no, key, s)));
        } else if (key == "h_sum_min") {
            cfg.h_sum_min = parse_double(origin, line_no, key, value);
        } else if (key == "h_sum_max") {
            cfg.h_sum_max = parse_double(origin, line_no, key, value);
        } else if (key == "h_sum_count") {
            cfg.h_sum_count = static_cast<int>(parse_int(origin, line_no, key, value));
        } else if (key == "m_max") {
            cfg.m_max = static_cast<int>(parse_int(origin, line_no, key, value));
        }
    }

    // Resolve derived defaults against the drive actually configured.
    if (!trunc_set || cfg.trunc_N <= 0)
        cfg.trunc_N = std::max(4 * cfg.drive.cutoff_M, 40);
    if (!t_total_set || cfg.t_total_us <= 0.0) {
        cfg.drive.validate();
        cfg.t_total_us = 5.0 * cfg.drive.period();
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    return parse_config(in, path);
}

std::string to_config_text(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "[qubit]\n";
    out << "omega_z = " << fmt_g17(cfg.qubit.omega_z) << "\n\n";
    out << "[drive]\n";
    out << "h_sum = " << fmt_g17(cfg.drive.h_sum) << "\n";
    out << "alpha = " << fmt_g17(cfg.drive.alpha) << "\n";
    out << "cutoff_M = " << cfg.drive.cutoff_M << "\n";
    out << "omega_p = " << fmt_g17(cfg.drive.omega_p) << "\n\n";
    out << "[floquet]\n";
    out << "trunc_N = " << cfg.trunc_N << "\n\n";
    out << "[run]\n";
    out << "kind = " << to_string(cfg.kind) << "\n";
    out << "t_total = " << fmt_g17(cfg.t_total_us) << "\n";
    out << "n_samples = " << cfg.n_samples << "\n";
    out << "steps_per_period = " << cfg.steps_per_period << "\n";
    out << "shots = " << cfg.shots << "\n";
    out << "rng_seed = " << cfg.rng_seed << "\n";
    out << "out_dir = " << cfg.out_dir << "\n\n";
    out << "[grid]\n";
    if (!cfg.alphas.empty()) {
        out << "alphas = ";
        for (std::size_t i = 0; i < cfg.alphas.size(); ++i)
            out << (i ? "," : "") << fmt_g17(cfg.alphas[i]);
        out << "\n";
    }
    if (!cfg.Ms.empty()) {
        out << "Ms = ";
        for (std::size_t i = 0; i < cfg.Ms.size(); ++i)
            out << (i ? "," : "") << cfg.Ms[i];
        out << "\n";
    }
    out << "h_sum_min = " << fmt_g17(cfg.h_sum_min) << "\n";
    out << "h_sum_max = " << fmt_g17(cfg.h_sum_max) << "\n";
    out << "h_sum_count = " << cfg.h_sum_count << "\n";
    out << "m_max = " << cfg.m_max << "\n";
    return out.str();
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
    std::ofstream out = open_output_file(path);
    out << to_config_text(cfg);
}

} // namespace floqlat
