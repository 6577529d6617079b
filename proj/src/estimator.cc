#include "fpsvqe/estimator.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace fpsvqe {

NoiseSpec NoiseSpec::santiago_like() {
    NoiseSpec n;
    n.p1 = 2e-4;
    n.p2 = 7e-3;
    n.readout = {ReadoutError{2e-2, 2e-2}};
    return n;
}

void NoiseSpec::validate() const {
    auto prob = [](double p, const char *what) {
        if (!(p >= 0 && p <= 1)) {
            throw std::invalid_argument(std::string("noise: ") + what + " must lie in [0, 1]");
        }
    };
    prob(p1, "p1");
    prob(p2, "p2");
    for (const auto &r : readout) {
        prob(r.p1_given0, "readout p1_given0");
        prob(r.p0_given1, "readout p0_given1");
    }
}

ReadoutError NoiseSpec::readout_for(size_t qubit) const {
    if (readout.empty()) {
        return {};
    }
    if (readout.size() == 1) {
        return readout[0];
    }
    if (qubit >= readout.size()) {
        throw std::invalid_argument("noise: no readout error given for qubit " + std::to_string(qubit));
    }
    return readout[qubit];
}

std::string_view to_string(EstimateMode mode) {
    switch (mode) {
        case EstimateMode::Exact:
            return "exact";
        case EstimateMode::Sampled:
            return "sampled";
        case EstimateMode::Noisy:
            return "noisy";
    }
    return "unknown";
}

double exact_expectation(const StateVector &state, const PauliOperator &op) {
    if (state.num_qubits() != op.num_qubits()) {
        throw std::invalid_argument("exact_expectation: qubit count mismatch");
    }
    double total = 0;
    for (const auto &t : op.sorted_terms()) {
        if (t.string.is_identity()) {
            total += t.coefficient.real();
            continue;
        }
        total += (t.coefficient * state.pauli_expectation(t.string)).real();
    }
    return total;
}

Circuit measurement_rotation(PauliString basis, size_t num_qubits) {
    Circuit c;
    for (size_t q = 0; q < num_qubits; q++) {
        char k = basis.at(num_qubits, q);
        if (k == 'X') {
            c.push_back({GateKind::Ry, q, 0, -std::numbers::pi / 2});
        } else if (k == 'Y') {
            c.push_back({GateKind::Rx, q, 0, std::numbers::pi / 2});
        }
    }
    return c;
}

namespace {

double eigenvalue(uint64_t outcome, uint64_t support) {
    return (std::popcount(outcome & support) & 1) ? -1.0 : 1.0;
}

}  // namespace

double grouped_exact_expectation(const StateVector &state, const std::vector<MeasurementGroup> &groups) {
    double total = 0;
    const size_t q = state.num_qubits();
    for (const auto &g : groups) {
        StateVector rotated = state;
        for (const auto &gate : measurement_rotation(g.basis, q)) {
            apply_gate(rotated, gate);
        }
        auto probs = rotated.probabilities();
        for (const auto &t : g.terms) {
            double e = 0;
            for (size_t b = 0; b < probs.size(); b++) {
                e += probs[b] * eigenvalue(b, t.string.support());
            }
            total += t.coefficient.real() * e;
        }
    }
    return total;
}

ExpectationEvaluator::ExpectationEvaluator(AnsatzSpec ansatz, PauliOperator op, EstimatorConfig config)
    : ansatz_(ansatz), op_(std::move(op)), config_(std::move(config)) {
    if (ansatz_.num_qubits != op_.num_qubits()) {
        throw std::invalid_argument(
            "ExpectationEvaluator: ansatz has " + std::to_string(ansatz_.num_qubits) + " qubits, operator " +
            std::to_string(op_.num_qubits()));
    }
    if (config_.mode != EstimateMode::Exact && config_.shots == 0) {
        throw std::invalid_argument("ExpectationEvaluator: shots must be >= 1");
    }
    if (config_.mode == EstimateMode::Noisy) {
        config_.noise.validate();
    }
    // Measured coefficients must be real.
    for (const auto &t : op_.sorted_terms()) {
        if (std::abs(t.coefficient.imag()) > 1e-10) {
            throw std::invalid_argument("ExpectationEvaluator: operator is not Hermitian");
        }
    }
    PauliOperator measured(op_.num_qubits());
    for (const auto &t : op_.sorted_terms()) {
        if (t.string.is_identity()) {
            identity_coefficient_ += t.coefficient.real();
        } else {
            measured.add(t.string, t.coefficient.real());
        }
    }
    auto groups = config_.grouping ? group_qubitwise_commuting(measured) : ungrouped_settings(measured);
    for (const auto &g : groups) {
        Setting s{g.basis, {}};
        for (const auto &t : g.terms) {
            s.terms.emplace_back(t.string.support(), t.coefficient.real());
        }
        settings_.push_back(std::move(s));
    }
}

double ExpectationEvaluator::exact(std::span<const double> params) const {
    return exact_expectation(prepare_state(ansatz_, params), op_);
}

ExpectationEstimate ExpectationEvaluator::evaluate(std::span<const double> params, Rng &rng) const {
    switch (config_.mode) {
        case EstimateMode::Exact:
            return {exact(params), 0.0, 0, EstimateMode::Exact};
        case EstimateMode::Sampled:
            return sampled(params, rng);
        case EstimateMode::Noisy:
            return noisy(params, rng);
    }
    throw std::logic_error("unreachable");
}

namespace {

struct SettingResult {
    double value = 0;
    double variance_of_mean = 0;
};

/// Mean and variance of the mean of v(b) = Σ_j γ_j e_j(b) under a distribution normalized over `shots`.
SettingResult reduce_setting(
    std::span<const double> distribution, const std::vector<std::pair<uint64_t, double>> &terms, uint64_t shots) {
    double mean = 0;
    double second = 0;
    for (size_t b = 0; b < distribution.size(); b++) {
        if (distribution[b] == 0) {
            continue;
        }
        double v = 0;
        for (const auto &[support, coef] : terms) {
            v += coef * eigenvalue(b, support);
        }
        mean += distribution[b] * v;
        second += distribution[b] * v * v;
    }
    double var = std::max(second - mean * mean, 0.0);
    if (shots > 1) {
        var *= double(shots) / double(shots - 1);
    }
    return {mean, var / double(shots)};
}

}  // namespace

ExpectationEstimate ExpectationEvaluator::sampled(std::span<const double> params, Rng &rng) const {
    const size_t q = ansatz_.num_qubits;
    StateVector base = prepare_state(ansatz_, params);
    ExpectationEstimate est{identity_coefficient_, 0, 0, EstimateMode::Sampled};
    double variance = 0;
    for (const auto &s : settings_) {
        StateVector rotated = base;
        for (const auto &g : measurement_rotation(s.basis, q)) {
            apply_gate(rotated, g);
        }
        auto counts = sample_counts(rotated.probabilities(), config_.shots, rng);
        std::vector<double> freq(counts.size());
        for (size_t b = 0; b < counts.size(); b++) {
            freq[b] = double(counts[b]) / double(config_.shots);
        }
        auto r = reduce_setting(freq, s.terms, config_.shots);
        est.value += r.value;
        variance += r.variance_of_mean;
        est.shots_used += config_.shots;
    }
    est.std_error = std::sqrt(variance);
    return est;
}

namespace {

/// Floyd's algorithm: `k` distinct values from [0, n).
std::vector<uint32_t> distinct_sample(uint32_t n, uint32_t k, Rng &rng) {
    std::unordered_set<uint32_t> chosen;
    std::vector<uint32_t> out;
    out.reserve(k);
    for (uint32_t j = n - k; j < n; j++) {
        uint32_t t = uint32_t(std::uniform_int_distribution<uint32_t>(0, j)(rng));
        uint32_t pick = chosen.insert(t).second ? t : j;
        if (pick == j) {
            chosen.insert(j);
        }
        out.push_back(pick);
    }
    return out;
}

PauliString single_pauli(size_t num_qubits, size_t qubit, unsigned kind) {
    uint64_t bit = qubit_bit(num_qubits, qubit);
    // 1 = X, 2 = Y, 3 = Z
    return {(kind == 1 || kind == 2) ? bit : 0, (kind == 2 || kind == 3) ? bit : 0};
}

/// An inserted error: after gate `location`, Pauli number `kind` (1..3 or 1..15).
struct ErrorEvent {
    uint32_t location;
    uint32_t kind;
    auto operator<=>(const ErrorEvent &) const = default;
};

}  // namespace

std::vector<double> ExpectationEvaluator::measured_histogram(const Circuit &circuit, Rng &rng) const {
    const size_t q = ansatz_.num_qubits;
    const uint64_t shots = config_.shots;
    const auto &noise = config_.noise;

    // Independent Bernoulli(p_l) per (shot, location): draw the count per location, then the shots.
    std::unordered_map<uint32_t, std::vector<ErrorEvent>> per_shot;
    for (uint32_t loc = 0; loc < circuit.size(); loc++) {
        bool two = circuit[loc].two_qubit();
        double p = two ? noise.p2 : noise.p1;
        if (p <= 0) {
            continue;
        }
        uint64_t k = std::binomial_distribution<uint64_t>(shots, p)(rng);
        for (uint32_t shot : distinct_sample(uint32_t(shots), uint32_t(k), rng)) {
            uint32_t kind = std::uniform_int_distribution<uint32_t>(1, two ? 15 : 3)(rng);
            per_shot[shot].push_back({loc, kind});
        }
    }
    std::map<std::vector<ErrorEvent>, uint64_t> patterns;
    for (auto &[shot, events] : per_shot) {
        patterns[events]++;
    }
    uint64_t clean = shots - per_shot.size();
    if (clean > 0) {
        patterns[{}] += clean;
    }

    std::vector<double> histogram(size_t{1} << q, 0.0);
    for (const auto &[events, count] : patterns) {
        StateVector state(q);
        size_t next = 0;
        for (uint32_t loc = 0; loc < circuit.size(); loc++) {
            apply_gate(state, circuit[loc]);
            while (next < events.size() && events[next].location == loc) {
                const auto &g = circuit[loc];
                uint32_t kind = events[next].kind;
                if (g.two_qubit()) {
                    PauliString a = single_pauli(q, g.q0, kind / 4);
                    PauliString b = single_pauli(q, g.q1, kind % 4);
                    state.apply_pauli({a.x | b.x, a.z | b.z});
                } else {
                    state.apply_pauli(single_pauli(q, g.q0, kind));
                }
                next++;
            }
        }
        auto measured = apply_readout(state.probabilities(), noise, q);
        auto counts = sample_counts(measured, count, rng);
        for (size_t b = 0; b < counts.size(); b++) {
            histogram[b] += double(counts[b]);
        }
    }
    return histogram;
}

ExpectationEstimate ExpectationEvaluator::noisy(std::span<const double> params, Rng &rng) const {
    const size_t q = ansatz_.num_qubits;
    Circuit base = build_circuit(ansatz_, params);
    ExpectationEstimate est{identity_coefficient_, 0, 0, EstimateMode::Noisy};
    double variance = 0;
    for (const auto &s : settings_) {
        Circuit circuit = base;
        for (const auto &g : measurement_rotation(s.basis, q)) {
            circuit.push_back(g);
        }
        auto hist = measured_histogram(circuit, rng);
        std::vector<double> freq(hist.size());
        for (size_t b = 0; b < hist.size(); b++) {
            freq[b] = hist[b] / double(config_.shots);
        }
        if (config_.mitigate_readout && !config_.noise.readout.empty()) {
            freq = mitigate_readout(freq, config_.noise, q);
        }
        auto r = reduce_setting(freq, s.terms, config_.shots);
        est.value += r.value;
        variance += r.variance_of_mean;
        est.shots_used += config_.shots;
    }
    est.std_error = std::sqrt(variance);
    return est;
}

ExpectationEstimate sampled_expectation(
    const AnsatzSpec &ansatz,
    std::span<const double> params,
    const PauliOperator &op,
    uint64_t shots,
    bool grouping,
    uint64_t seed) {
    EstimatorConfig cfg;
    cfg.mode = EstimateMode::Sampled;
    cfg.shots = shots;
    cfg.grouping = grouping;
    ExpectationEvaluator ev(ansatz, op, cfg);
    Rng rng = make_rng(seed);
    return ev.evaluate(params, rng);
}

ExpectationEstimate noisy_expectation(
    const AnsatzSpec &ansatz,
    std::span<const double> params,
    const PauliOperator &op,
    uint64_t shots,
    const NoiseSpec &noise,
    bool mitigate,
    uint64_t seed,
    bool grouping) {
    EstimatorConfig cfg;
    cfg.mode = EstimateMode::Noisy;
    cfg.shots = shots;
    cfg.grouping = grouping;
    cfg.noise = noise;
    cfg.mitigate_readout = mitigate;
    ExpectationEvaluator ev(ansatz, op, cfg);
    Rng rng = make_rng(seed);
    return ev.evaluate(params, rng);
}

namespace {

/// out[b] = Σ_t m[t][b_q] over the digit of qubit q, other digits fixed; m indexed [from][to].
std::vector<double> apply_per_qubit(
    std::span<const double> p, size_t num_qubits, auto &&matrix_for /* qubit -> 2x2 [from][to] */) {
    std::vector<double> cur(p.begin(), p.end());
    for (size_t q = 0; q < num_qubits; q++) {
        auto m = matrix_for(q);
        uint64_t bit = qubit_bit(num_qubits, q);
        std::vector<double> next(cur.size(), 0.0);
        for (size_t b = 0; b < cur.size(); b++) {
            if (b & bit) {
                continue;
            }
            double p0 = cur[b];
            double p1 = cur[b | bit];
            next[b] = m[0][0] * p0 + m[1][0] * p1;
            next[b | bit] = m[0][1] * p0 + m[1][1] * p1;
        }
        cur = std::move(next);
    }
    return cur;
}

}  // namespace

std::vector<double> apply_readout(std::span<const double> probabilities, const NoiseSpec &noise, size_t num_qubits) {
    if (noise.readout.empty()) {
        return {probabilities.begin(), probabilities.end()};
    }
    return apply_per_qubit(probabilities, num_qubits, [&](size_t q) { return noise.readout_for(q).confusion(); });
}

std::vector<double> mitigate_readout(std::span<const double> frequencies, const NoiseSpec &noise, size_t num_qubits) {
    auto inverse_for = [&](size_t q) {
        auto c = noise.readout_for(q).confusion();
        double det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
        if (std::abs(det) < 1e-12) {
            throw std::domain_error("mitigate_readout: singular confusion matrix on qubit " + std::to_string(q));
        }
        // Inverse of the [from][to] map, itself in [from][to] form.
        std::array<std::array<double, 2>, 2> inv{{{c[1][1] / det, -c[0][1] / det}, {-c[1][0] / det, c[0][0] / det}}};
        return inv;
    };
    auto p = apply_per_qubit(frequencies, num_qubits, inverse_for);
    double total = 0;
    for (double &x : p) {
        x = std::max(x, 0.0);
        total += x;
    }
    if (total > 0) {
        for (double &x : p) {
            x /= total;
        }
    }
    return p;
}

std::vector<uint64_t> sample_bitstrings(
    const AnsatzSpec &ansatz, std::span<const double> params, PauliString basis, uint64_t shots, uint64_t seed) {
    Circuit c = build_circuit(ansatz, params);
    for (const auto &g : measurement_rotation(basis, ansatz.num_qubits)) {
        c.push_back(g);
    }
    StateVector s = run_circuit(ansatz.num_qubits, c);
    Rng rng = make_rng(seed);
    return sample_outcomes(s.probabilities(), shots, rng);
}

void write_bitstrings(std::ostream &out, std::span<const uint64_t> outcomes, size_t num_qubits) {
    std::string line(num_qubits, '0');
    for (uint64_t b : outcomes) {
        for (size_t q = 0; q < num_qubits; q++) {
            line[q] = (b & qubit_bit(num_qubits, q)) ? '1' : '0';
        }
        out << line << '\n';
    }
}

}  // namespace fpsvqe
