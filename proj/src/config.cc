#include "fpsvqe/config.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <set>

namespace fpsvqe {

namespace {

std::string trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

[[noreturn]] void bad(const std::string &key, const std::string &value, const std::string &expected) {
    throw ConfigError("config: " + key + " = '" + value + "': expected " + expected);
}

double to_double(const std::string &key, const std::string &text) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        bad(key, text, "a number");
    }
    return v;
}

uint64_t to_uint(const std::string &key, const std::string &text) {
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        bad(key, text, "a non-negative integer");
    }
    return v;
}

bool to_bool(const std::string &key, const std::string &text) {
    if (text == "true" || text == "yes" || text == "on" || text == "1") {
        return true;
    }
    if (text == "false" || text == "no" || text == "off" || text == "0") {
        return false;
    }
    bad(key, text, "true or false");
}

std::vector<double> to_doubles(const std::string &key, const std::string &text) {
    std::vector<double> out;
    if (trim(text).empty()) {
        return out;
    }
    for (const auto &item : split(text, ',')) {
        out.push_back(to_double(key, item));
    }
    return out;
}

KeptCounts to_counts(const std::string &key, const std::string &text) {
    KeptCounts out;
    for (const auto &item : split(text, ',')) {
        out.push_back(to_uint(key, item));
    }
    return out;
}

std::vector<KeptCounts> to_count_list(const std::string &key, const std::string &text) {
    std::vector<KeptCounts> out;
    for (const auto &item : split(text, ';')) {
        out.push_back(to_counts(key, item));
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class Seq, class F>
std::string join(const Seq &seq, const char *sep, F &&each) {
    std::string out;
    bool first = true;
    for (const auto &x : seq) {
        if (!first) {
            out += sep;
        }
        out += each(x);
        first = false;
    }
    return out;
}

std::string counts_text(const KeptCounts &k) {
    return join(k, ",", [](size_t c) { return std::to_string(c); });
}

template <class F>
auto translate(const std::string &key, const std::string &value, F &&parse) {
    try {
        return parse(value);
    } catch (const std::invalid_argument &e) {
        throw ConfigError("config: " + key + " = '" + value + "': " + e.what());
    }
}

}  // namespace

EstimateMode parse_estimate_mode(std::string_view text) {
    if (text == "exact") {
        return EstimateMode::Exact;
    }
    if (text == "sampled") {
        return EstimateMode::Sampled;
    }
    if (text == "noisy") {
        return EstimateMode::Noisy;
    }
    throw std::invalid_argument("unknown estimator mode '" + std::string(text) + "' (exact, sampled, noisy)");
}

KeyValueConfig KeyValueConfig::parse(std::istream &in, const std::string &source) {
    KeyValueConfig kv;
    std::string line;
    for (size_t number = 1; std::getline(in, line); number++) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source + ":" + std::to_string(number) + ": expected 'key = value'");
        }
        std::string key = trim(std::string_view(t).substr(0, eq));
        if (key.empty()) {
            throw ConfigError(source + ":" + std::to_string(number) + ": empty key");
        }
        kv.values_[key] = trim(std::string_view(t).substr(eq + 1));
    }
    return kv;
}

KeyValueConfig KeyValueConfig::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    return parse(in, path);
}

void KeyValueConfig::set(const std::string &key, const std::string &value) {
    values_[key] = value;
}

void KeyValueConfig::assign(std::string_view assignment) {
    size_t eq = assignment.find('=');
    if (eq == std::string_view::npos || trim(assignment.substr(0, eq)).empty()) {
        throw ConfigError("override '" + std::string(assignment) + "': expected key=value");
    }
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::optional<std::string> KeyValueConfig::get(const std::string &key) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void KeyValueConfig::write(std::ostream &out) const {
    for (const auto &[k, v] : values_) {
        out << k << " = " << v << '\n';
    }
}

const std::vector<std::pair<std::string, std::string>> &config_keys() {
    static const std::vector<std::pair<std::string, std::string>> keys = {
        {"chain.dihedrals", "number of dihedrals of the rotor chain (first bistable, rest monostable)"},
        {"chain.reactive_barrier", "bistable barrier in k_BT"},
        {"chain.nonreactive_barrier", "monostable barrier in k_BT"},
        {"chain.potentials", "explicit list kind:barrier, e.g. bistable:0.5, monostable:1"},
        {"chain.diffusion", "rotor diffusion coefficients, one more than dihedrals"},
        {"basis.kept", "retained eigenfunctions per dihedral, e.g. 4,2"},
        {"basis.ladder", "tier ladder for state ordering, e.g. 4,2; 4,4; 8,4"},
        {"basis.harmonics", "initial Fourier cutoff M"},
        {"basis.max_harmonics", "largest Fourier cutoff tried"},
        {"basis.tolerance", "eigenvalue convergence tolerance"},
        {"ansatz.depth", "entangler blocks d"},
        {"ansatz.entangler", "linear or full"},
        {"estimator.mode", "exact, sampled or noisy"},
        {"estimator.shots", "shots per measurement setting"},
        {"estimator.grouping", "measure qubit-wise commuting groups together"},
        {"noise.p1", "depolarizing probability after single-qubit gates"},
        {"noise.p2", "depolarizing probability after CNOT"},
        {"noise.readout", "flip probability p, or p(1|0)/p(0|1), optionally one per qubit separated by commas"},
        {"noise.mitigate", "invert the readout confusion matrix"},
        {"optimizer.kind", "spsa or nelder-mead"},
        {"optimizer.budget", "SPSA iterations or Nelder-Mead evaluations"},
        {"spsa.gains", "framework, calibrated or fixed"},
        {"spsa.a", "step gain a (fixed gains, or the base for calibration)"},
        {"spsa.c", "perturbation gain c"},
        {"spsa.A", "stability constant A"},
        {"spsa.alpha", "step decay exponent"},
        {"spsa.gamma", "perturbation decay exponent"},
        {"spsa.calibration_trials", "gradient samples used to calibrate a"},
        {"nm.step", "initial simplex step in radians"},
        {"nm.tolerance", "simplex diameter at which to stop"},
        {"run.restarts", "independent runs per ensemble"},
        {"run.seed", "master seed"},
        {"run.workers", "concurrent runs"},
        {"scan.barriers", "reactive barriers for barrier-scan"},
        {"scan.bases", "kept counts for qubit-scan and hierarchical, e.g. 4,2; 4,4; 8,4"},
        {"dist.repetitions", "estimates per mode in dist-study"},
        {"dist.shots", "shots per setting in dist-study"},
        {"dist.modes", "modes compared in dist-study"},
        {"dist.params", "ansatz parameters for dist-study (empty: optimize first)"},
    };
    return keys;
}

ExperimentConfig experiment_from(const KeyValueConfig &kv) {
    std::set<std::string> known;
    for (const auto &[k, _] : config_keys()) {
        known.insert(k);
    }
    for (const auto &[k, _] : kv.values()) {
        if (!known.count(k)) {
            throw ConfigError("config: unknown key '" + k + "'");
        }
    }

    ExperimentConfig cfg;
    VqeConfig &v = cfg.vqe;
    auto with = [&](const char *key, auto &&apply) {
        if (auto value = kv.get(key)) {
            const std::string name = key;
            apply(name, *value);
        }
    };

    // Chain: either the rotor-chain shorthand or an explicit potential list.
    bool shorthand = kv.has("chain.dihedrals") || kv.has("chain.reactive_barrier") || kv.has("chain.nonreactive_barrier");
    if (kv.has("chain.potentials")) {
        if (shorthand) {
            throw ConfigError("config: chain.potentials cannot be combined with the rotor-chain shorthand keys");
        }
        std::string key = "chain.potentials";
        std::string text = *kv.get(key);
        v.chain.dihedrals.clear();
        for (const auto &item : split(text, ',')) {
            auto parts = split(item, ':');
            if (parts.size() != 2) {
                bad(key, text, "kind:barrier entries");
            }
            PotentialKind kind = translate(key, text, [&](auto &) { return parse_potential_kind(parts[0]); });
            v.chain.dihedrals.push_back({kind, to_double(key, parts[1])});
        }
        v.chain.diffusion.assign(v.chain.dihedrals.size() + 1, 1.0);
    } else {
        size_t n = v.chain.num_dihedrals();
        double reactive = v.chain.dihedrals[0].barrier;
        double nonreactive = v.chain.dihedrals.size() > 1 ? v.chain.dihedrals[1].barrier : 1.0;
        with("chain.dihedrals", [&](const std::string &k, const std::string &t) { n = to_uint(k, t); });
        with("chain.reactive_barrier", [&](const std::string &k, const std::string &t) { reactive = to_double(k, t); });
        with("chain.nonreactive_barrier", [&](const std::string &k, const std::string &t) { nonreactive = to_double(k, t); });
        if (n < 1) {
            throw ConfigError("config: chain.dihedrals must be >= 1");
        }
        v.chain = ChainSpec::rotor_chain(n, reactive, nonreactive);
    }
    with("chain.diffusion", [&](const std::string &k, const std::string &t) { v.chain.diffusion = to_doubles(k, t); });

    bool kept_given = kv.has("basis.kept");
    with("basis.kept", [&](const std::string &k, const std::string &t) { v.kept = to_counts(k, t); });
    if (!kept_given && v.kept.size() != v.chain.num_dihedrals()) {
        v.kept.resize(v.chain.num_dihedrals(), 2);
    }
    with("basis.ladder", [&](const std::string &k, const std::string &t) { v.ordering_ladder = to_count_list(k, t); });
    with("basis.harmonics", [&](const std::string &k, const std::string &t) { v.solve.harmonics = to_uint(k, t); });
    with("basis.max_harmonics", [&](const std::string &k, const std::string &t) { v.solve.max_harmonics = to_uint(k, t); });
    with("basis.tolerance", [&](const std::string &k, const std::string &t) { v.solve.convergence_tolerance = to_double(k, t); });

    with("ansatz.depth", [&](const std::string &k, const std::string &t) { v.depth = to_uint(k, t); });
    with("ansatz.entangler", [&](const std::string &k, const std::string &t) {
        v.entangler = translate(k, t, [](auto &s) { return parse_entangler(s); });
    });

    auto &est = v.estimator;
    with("estimator.mode", [&](const std::string &k, const std::string &t) {
        est.mode = translate(k, t, [](auto &s) { return parse_estimate_mode(s); });
    });
    with("estimator.shots", [&](const std::string &k, const std::string &t) { est.shots = to_uint(k, t); });
    with("estimator.grouping", [&](const std::string &k, const std::string &t) { est.grouping = to_bool(k, t); });
    with("noise.p1", [&](const std::string &k, const std::string &t) { est.noise.p1 = to_double(k, t); });
    with("noise.p2", [&](const std::string &k, const std::string &t) { est.noise.p2 = to_double(k, t); });
    with("noise.readout", [&](const std::string &k, const std::string &t) {
        est.noise.readout.clear();
        if (trim(t).empty()) {
            return;
        }
        for (const auto &item : split(t, ',')) {
            auto parts = split(item, '/');
            if (parts.size() == 1) {
                double p = to_double(k, parts[0]);
                est.noise.readout.push_back({p, p});
            } else if (parts.size() == 2) {
                est.noise.readout.push_back({to_double(k, parts[0]), to_double(k, parts[1])});
            } else {
                bad(k, t, "p or p10/p01 entries");
            }
        }
    });
    with("noise.mitigate", [&](const std::string &k, const std::string &t) { est.mitigate_readout = to_bool(k, t); });

    auto &opt = v.optimizer;
    with("optimizer.kind", [&](const std::string &k, const std::string &t) {
        opt.kind = translate(k, t, [](auto &s) { return parse_optimizer_kind(s); });
    });
    with("optimizer.budget", [&](const std::string &k, const std::string &t) { opt.budget = to_uint(k, t); });
    with("spsa.gains", [&](const std::string &k, const std::string &t) { opt.gains = translate(k, t, [](auto &s) { return parse_gain_mode(s); }); });
    with("spsa.a", [&](const std::string &k, const std::string &t) { opt.spsa.a = to_double(k, t); });
    with("spsa.c", [&](const std::string &k, const std::string &t) { opt.spsa.c = to_double(k, t); });
    with("spsa.A", [&](const std::string &k, const std::string &t) { opt.spsa.A = to_double(k, t); });
    with("spsa.alpha", [&](const std::string &k, const std::string &t) { opt.spsa.alpha = to_double(k, t); });
    with("spsa.gamma", [&](const std::string &k, const std::string &t) { opt.spsa.gamma = to_double(k, t); });
    with("spsa.calibration_trials", [&](const std::string &k, const std::string &t) { opt.calibration_trials = to_uint(k, t); });
    with("nm.step", [&](const std::string &k, const std::string &t) { opt.nelder_mead.initial_step = to_double(k, t); });
    with("nm.tolerance", [&](const std::string &k, const std::string &t) { opt.nelder_mead.diameter_tolerance = to_double(k, t); });

    with("run.restarts", [&](const std::string &k, const std::string &t) { v.restarts = to_uint(k, t); });
    with("run.seed", [&](const std::string &k, const std::string &t) { v.seed = to_uint(k, t); });
    with("run.workers", [&](const std::string &k, const std::string &t) { v.workers = to_uint(k, t); });

    with("scan.barriers", [&](const std::string &k, const std::string &t) { cfg.barriers = to_doubles(k, t); });
    with("scan.bases", [&](const std::string &k, const std::string &t) { cfg.bases = to_count_list(k, t); });
    with("dist.repetitions", [&](const std::string &k, const std::string &t) { cfg.dist_repetitions = to_uint(k, t); });
    with("dist.shots", [&](const std::string &k, const std::string &t) { cfg.dist_shots = to_uint(k, t); });
    with("dist.params", [&](const std::string &k, const std::string &t) { cfg.dist_params = to_doubles(k, t); });
    with("dist.modes", [&](const std::string &k, const std::string &t) {
        cfg.dist_modes.clear();
        for (const auto &m : split(t, ',')) {
            cfg.dist_modes.push_back(translate(k, t, [&](auto &) { return parse_estimate_mode(m); }));
        }
    });
    return cfg;
}

KeyValueConfig to_key_values(const ExperimentConfig &cfg) {
    const VqeConfig &v = cfg.vqe;
    KeyValueConfig kv;
    kv.set("chain.potentials", join(v.chain.dihedrals, ", ", [](const DihedralSpec &d) {
        return std::string(to_string(d.kind)) + ":" + fmt(d.barrier);
    }));
    kv.set("chain.diffusion", join(v.chain.diffusion, ", ", fmt));
    kv.set("basis.kept", counts_text(v.kept));
    kv.set("basis.ladder", join(v.ordering_ladder, "; ", counts_text));
    kv.set("basis.harmonics", std::to_string(v.solve.harmonics));
    kv.set("basis.max_harmonics", std::to_string(v.solve.max_harmonics));
    kv.set("basis.tolerance", fmt(v.solve.convergence_tolerance));
    kv.set("ansatz.depth", std::to_string(v.depth));
    kv.set("ansatz.entangler", std::string(to_string(v.entangler)));
    const auto &est = v.estimator;
    kv.set("estimator.mode", std::string(to_string(est.mode)));
    kv.set("estimator.shots", std::to_string(est.shots));
    kv.set("estimator.grouping", est.grouping ? "true" : "false");
    kv.set("noise.p1", fmt(est.noise.p1));
    kv.set("noise.p2", fmt(est.noise.p2));
    kv.set("noise.readout", join(est.noise.readout, ", ", [](const ReadoutError &r) {
        return fmt(r.p1_given0) + "/" + fmt(r.p0_given1);
    }));
    kv.set("noise.mitigate", est.mitigate_readout ? "true" : "false");
    const auto &opt = v.optimizer;
    kv.set("optimizer.kind", std::string(to_string(opt.kind)));
    kv.set("optimizer.budget", std::to_string(opt.budget));
    kv.set("spsa.gains", std::string(to_string(opt.gains)));
    kv.set("spsa.a", fmt(opt.spsa.a));
    kv.set("spsa.c", fmt(opt.spsa.c));
    kv.set("spsa.A", fmt(opt.spsa.A));
    kv.set("spsa.alpha", fmt(opt.spsa.alpha));
    kv.set("spsa.gamma", fmt(opt.spsa.gamma));
    kv.set("spsa.calibration_trials", std::to_string(opt.calibration_trials));
    kv.set("nm.step", fmt(opt.nelder_mead.initial_step));
    kv.set("nm.tolerance", fmt(opt.nelder_mead.diameter_tolerance));
    kv.set("run.restarts", std::to_string(v.restarts));
    kv.set("run.seed", std::to_string(v.seed));
    kv.set("run.workers", std::to_string(v.workers));
    kv.set("scan.barriers", join(cfg.barriers, ", ", fmt));
    kv.set("scan.bases", join(cfg.bases, "; ", counts_text));
    kv.set("dist.repetitions", std::to_string(cfg.dist_repetitions));
    kv.set("dist.shots", std::to_string(cfg.dist_shots));
    kv.set("dist.modes", join(cfg.dist_modes, ",", [](EstimateMode m) { return std::string(to_string(m)); }));
    kv.set("dist.params", join(cfg.dist_params, ", ", fmt));
    return kv;
}

}  // namespace fpsvqe
