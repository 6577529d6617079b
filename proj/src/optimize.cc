#include "fpsvqe/optimize.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "fpsvqe/random.h"

namespace fpsvqe {

void ObjectiveSpec::validate() const {
    if (!evaluate) {
        throw std::invalid_argument("objective: no evaluator");
    }
    if (dimension < 1) {
        throw std::invalid_argument("objective: dimension must be >= 1");
    }
    if (!start.empty() && start.size() != dimension) {
        throw std::invalid_argument(
            "objective: start point has " + std::to_string(start.size()) + " entries, expected " +
            std::to_string(dimension));
    }
}

std::vector<double> ObjectiveSpec::initial_point() const {
    if (!start.empty()) {
        return start;
    }
    Rng rng = make_rng(derive_seed(seed, 0x5747));
    std::vector<double> x(dimension);
    for (double &v : x) {
        v = 2 * std::numbers::pi * uniform01(rng);
    }
    return x;
}

std::string_view to_string(Termination t) {
    return t == Termination::Budget ? "budget" : "converged";
}

std::vector<double> OptTrace::running_best() const {
    std::vector<double> out;
    double best = std::numeric_limits<double>::infinity();
    for (const auto &r : records) {
        best = std::min(best, r.value);
        out.push_back(best);
    }
    return out;
}

size_t OptTrace::evaluations_to_reach(double threshold) const {
    for (const auto &r : records) {
        if (r.value <= threshold) {
            return r.evaluations;
        }
    }
    return size_t(-1);
}

void write_trace_csv(std::ostream &out, const OptTrace &trace) {
    size_t dim = trace.records.empty() ? 0 : trace.records.front().params.size();
    out << "iteration,evaluations,value";
    for (size_t i = 0; i < dim; i++) {
        out << ",p" << i;
    }
    out << '\n';
    auto old = out.precision(17);
    for (const auto &r : trace.records) {
        out << r.iteration << ',' << r.evaluations << ',' << r.value;
        for (double p : r.params) {
            out << ',' << p;
        }
        out << '\n';
    }
    out.precision(old);
}

namespace {

void finish(OptTrace &trace) {
    auto best = std::min_element(trace.records.begin(), trace.records.end(), [](const auto &a, const auto &b) {
        return a.value < b.value;
    });
    trace.best_value = best->value;
    trace.best_params = best->params;
}

}  // namespace

void SpsaConfig::validate() const {
    if (!(a > 0) || !(c > 0)) {
        throw std::invalid_argument("spsa: gains a and c must be positive");
    }
    if (A < 0) {
        throw std::invalid_argument("spsa: stability constant A must be non-negative");
    }
}

double SpsaConfig::step_gain(size_t k) const {
    return a / std::pow(A + double(k) + 1, alpha);
}

double SpsaConfig::perturbation_gain(size_t k) const {
    return c / std::pow(double(k) + 1, gamma);
}

OptTrace spsa_minimize(const ObjectiveSpec &obj, const SpsaConfig &config) {
    obj.validate();
    config.validate();
    Rng rng = make_rng(obj.seed);
    std::bernoulli_distribution coin(0.5);

    OptTrace trace;
    std::vector<double> x = obj.initial_point();
    const size_t n = x.size();
    trace.records.push_back({0, ++trace.evaluations, obj.evaluate(x).value, x});

    std::vector<double> delta(n), plus(n), minus(n);
    for (size_t k = 0; k < obj.budget; k++) {
        const double ck = config.perturbation_gain(k);
        const double ak = config.step_gain(k);
        for (size_t i = 0; i < n; i++) {
            delta[i] = coin(rng) ? 1.0 : -1.0;
            plus[i] = x[i] + ck * delta[i];
            minus[i] = x[i] - ck * delta[i];
        }
        const double diff = obj.evaluate(plus).value - obj.evaluate(minus).value;
        trace.evaluations += 2;
        for (size_t i = 0; i < n; i++) {
            // Δ is ±1, so Δ⁻¹ = Δ.
            x[i] -= ak * diff / (2 * ck) * delta[i];
        }
        trace.records.push_back({k + 1, ++trace.evaluations, obj.evaluate(x).value, x});
    }
    trace.termination = Termination::Budget;
    finish(trace);
    return trace;
}

SpsaConfig calibrate_spsa_gains(
    const ObjectiveSpec &obj, size_t trials, const SpsaConfig &base, const CalibrationOptions &options) {
    obj.validate();
    if (trials < 1) {
        throw std::invalid_argument("calibrate_spsa_gains: trial count must be >= 1");
    }
    SpsaConfig out = base;
    std::vector<double> x = obj.initial_point();
    out.c = options.fixed_perturbation > 0 ? options.fixed_perturbation
                                           : std::max(obj.evaluate(x).std_error, options.min_perturbation);

    // Use a stream distinct from the one spsa_minimize draws from.
    Rng rng = make_rng(derive_seed(obj.seed, 0xCA11));
    std::bernoulli_distribution coin(0.5);
    const size_t n = x.size();
    std::vector<double> plus(n), minus(n);
    double magnitude = 0;
    for (size_t t = 0; t < trials; t++) {
        for (size_t i = 0; i < n; i++) {
            double d = coin(rng) ? 1.0 : -1.0;
            plus[i] = x[i] + out.c * d;
            minus[i] = x[i] - out.c * d;
        }
        magnitude += std::abs(obj.evaluate(plus).value - obj.evaluate(minus).value) / (2 * out.c);
    }
    magnitude /= double(trials);
    // Each coordinate moves by a_0·|g|; a_0 = a/(A+1)^α.
    if (magnitude > 0) {
        out.a = options.target_step * std::pow(out.A + 1, out.alpha) / magnitude;
    }
    return out;
}

namespace {

struct BudgetSpent {};

}  // namespace

OptTrace nelder_mead_minimize(const ObjectiveSpec &obj, const NelderMeadConfig &config) {
    obj.validate();
    const size_t n = obj.dimension;
    OptTrace trace;

    // Best point of any evaluation, so a budget cut mid-iteration loses nothing.
    std::vector<double> best_x;
    double best_f = std::numeric_limits<double>::infinity();
    auto f = [&](const std::vector<double> &x) {
        if (trace.evaluations >= std::max<size_t>(obj.budget, 1)) {
            throw BudgetSpent{};
        }
        trace.evaluations++;
        double v = obj.evaluate(x).value;
        if (v < best_f) {
            best_f = v;
            best_x = x;
        }
        return v;
    };

    struct Vertex {
        std::vector<double> x;
        double fx;
    };
    std::vector<Vertex> simplex;
    size_t iteration = 0;
    auto best_record = [&] {
        auto b = std::min_element(simplex.begin(), simplex.end(), [](auto &a, auto &c) { return a.fx < c.fx; });
        trace.records.push_back({iteration, trace.evaluations, b->fx, b->x});
    };

    try {
        std::vector<double> x0 = obj.initial_point();
        simplex.push_back({x0, f(x0)});
        best_record();
        for (size_t i = 0; i < n; i++) {
            std::vector<double> xi = x0;
            xi[i] += config.initial_step;
            simplex.push_back({xi, f(xi)});
        }

        std::vector<double> centroid(n);
        auto along = [&](double t, const std::vector<double> &towards) {
            std::vector<double> p(n);
            for (size_t i = 0; i < n; i++) {
                p[i] = centroid[i] + t * (towards[i] - centroid[i]);
            }
            return p;
        };

        while (true) {
            std::stable_sort(simplex.begin(), simplex.end(), [](auto &a, auto &b) { return a.fx < b.fx; });
            iteration++;
            best_record();

            double diameter = 0;
            for (size_t v = 1; v <= n; v++) {
                double d2 = 0;
                for (size_t i = 0; i < n; i++) {
                    double d = simplex[v].x[i] - simplex[0].x[i];
                    d2 += d * d;
                }
                diameter = std::max(diameter, std::sqrt(d2));
            }
            if (diameter < config.diameter_tolerance) {
                trace.termination = Termination::Converged;
                break;
            }

            std::fill(centroid.begin(), centroid.end(), 0.0);
            for (size_t v = 0; v < n; v++) {
                for (size_t i = 0; i < n; i++) {
                    centroid[i] += simplex[v].x[i] / double(n);
                }
            }
            Vertex &worst = simplex[n];
            auto xr = along(-config.reflection, worst.x);
            double fr = f(xr);

            if (fr < simplex[0].fx) {
                auto xe = along(-config.reflection * config.expansion, worst.x);
                double fe = f(xe);
                worst = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
                continue;
            }
            if (fr < simplex[n - 1].fx) {
                worst = {xr, fr};
                continue;
            }
            if (fr < worst.fx) {
                auto xc = along(-config.reflection * config.contraction, worst.x);
                double fc = f(xc);
                if (fc <= fr) {
                    worst = {xc, fc};
                    continue;
                }
            } else {
                auto xc = along(config.contraction, worst.x);
                double fc = f(xc);
                if (fc < worst.fx) {
                    worst = {xc, fc};
                    continue;
                }
            }
            for (size_t v = 1; v <= n; v++) {
                std::vector<double> xs(n);
                for (size_t i = 0; i < n; i++) {
                    xs[i] = simplex[0].x[i] + config.shrink * (simplex[v].x[i] - simplex[0].x[i]);
                }
                double fs = f(xs);
                simplex[v] = {std::move(xs), fs};
            }
        }
    } catch (const BudgetSpent &) {
        trace.termination = Termination::Budget;
        if (best_f < trace.records.back().value) {
            trace.records.push_back({iteration, trace.evaluations, best_f, best_x});
        }
    }
    finish(trace);
    return trace;
}

}  // namespace fpsvqe
