#include "vlc/simulate.hpp"

#include <cmath>

#include "vlc/rng.hpp"

namespace vlc {

namespace {

constexpr double kArPhi = 0.2;

std::vector<double> draw_series(Generator generator, std::size_t length, RngStream& rng) {
    std::vector<double> out(length);
    if (generator == Generator::normal) {
        for (double& v : out) v = rng.next_gaussian();
    } else {
        // Start at the stationary marginal so no burn-in is needed.
        out[0] = rng.next_gaussian() / std::sqrt(1.0 - kArPhi * kArPhi);
        for (std::size_t t = 1; t < length; ++t)
            out[t] = kArPhi * out[t - 1] + rng.next_gaussian();
    }
    return out;
}

}  // namespace

void PairwiseScenario::validate() const {
    if (length < 2) throw error(errc::bad_argument, "scenario length must be >= 2");
    if (delta < 1) throw error(errc::bad_argument, "scenario delta must be >= 1");
    if (freeze) {
        if (freeze_start > freeze_end || freeze_end >= length)
            throw error(errc::bad_interval, "freeze window out of range");
        if (freeze_source >= length)
            throw error(errc::bad_interval, "freeze source index out of range");
    }
}

std::pair<TimeSeries, TimeSeries> gen_pairwise(const PairwiseScenario& scenario) {
    scenario.validate();
    const std::size_t T = scenario.length;
    const auto d = static_cast<std::size_t>(scenario.delta);

    // The cause is drawn with `delta` extra leading steps so the effect can
    // copy x(t - delta) at every exported index.
    RngStream x_rng(scenario.seed, "sim-x");
    const std::vector<double> extended = draw_series(scenario.generator, T + d, x_rng);
    std::vector<double> x(extended.begin() + static_cast<long>(d), extended.end());

    std::vector<double> y(T);
    if (scenario.causal) {
        RngStream noise(scenario.seed, "sim-y-noise");
        bool frozen_ready = false;
        double frozen = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            const bool in_freeze =
                scenario.freeze && t >= scenario.freeze_start && t <= scenario.freeze_end;
            if (in_freeze) {
                if (!frozen_ready) {
                    frozen = extended[scenario.freeze_source + d] +
                             scenario.noise_scale * noise.next_gaussian();
                    frozen_ready = true;
                }
                y[t] = frozen;
            } else {
                y[t] = extended[t] + scenario.noise_scale * noise.next_gaussian();
            }
        }
    } else {
        RngStream y_rng(scenario.seed, "sim-y-indep");
        y = draw_series(scenario.y_generator, T, y_rng);
    }
    return {TimeSeries(std::move(x)), TimeSeries(std::move(y))};
}

GroupData gen_group(Generator generator, std::uint64_t seed, std::size_t length, int delta,
                    double noise_scale) {
    if (length < 2) throw error(errc::bad_argument, "group length must be >= 2");
    if (delta < 1) throw error(errc::bad_argument, "group delta must be >= 1");
    const auto d = static_cast<std::size_t>(delta);

    std::vector<std::vector<double>> extended(3);
    for (std::size_t i = 0; i < 3; ++i) {
        RngStream rng(seed, "group-x", i);
        extended[i] = draw_series(generator, length + d, rng);
    }

    GroupData group;
    for (std::size_t i = 0; i < 3; ++i) {
        std::vector<double> x(extended[i].begin() + static_cast<long>(d), extended[i].end());
        group.members.emplace_back("X" + std::to_string(i + 1), TimeSeries(std::move(x)));
    }

    const std::vector<std::pair<std::string, std::vector<std::size_t>>> subsets = {
        {"Y1", {0}},      {"Y2", {1}},      {"Y3", {2}},     {"Y12", {0, 1}},
        {"Y13", {0, 2}},  {"Y23", {1, 2}},  {"Y123", {0, 1, 2}},
    };
    for (std::size_t s = 0; s < subsets.size(); ++s) {
        const auto& [name, sources] = subsets[s];
        RngStream noise(seed, "group-y", s);
        std::vector<double> y(length);
        for (std::size_t t = 0; t < length; ++t) {
            double mean = 0.0;
            for (std::size_t i : sources) mean += extended[i][t];
            mean /= static_cast<double>(sources.size());
            y[t] = mean + noise_scale * noise.next_gaussian();
        }
        group.members.emplace_back(name, TimeSeries(std::move(y)));
    }
    return group;
}

std::vector<std::pair<std::string, std::string>> group_truth_edges() {
    return {
        {"X1", "Y1"},   {"X2", "Y2"},   {"X3", "Y3"},   {"X1", "Y12"},  {"X2", "Y12"},
        {"X1", "Y13"},  {"X3", "Y13"},  {"X2", "Y23"},  {"X3", "Y23"},  {"X1", "Y123"},
        {"X2", "Y123"}, {"X3", "Y123"},
    };
}

std::vector<LabeledPair> gen_benchmark_suite(std::uint64_t seed) {
    std::vector<LabeledPair> suite;
    suite.reserve(75);

    const auto add = [&suite](const std::string& name, std::size_t index,
                              const PairwiseScenario& scenario, bool causal) {
        auto [x, y] = gen_pairwise(scenario);
        suite.push_back({name + "_" + std::to_string(index), std::move(x), std::move(y), causal});
    };

    for (std::size_t i = 0; i < 15; ++i) {
        PairwiseScenario scenario;
        scenario.seed = RngStream(seed, "suite-seed", i).next_u64();

        scenario.generator = Generator::normal;
        scenario.y_generator = Generator::normal;
        scenario.causal = true;
        add("normal_pos", i, scenario, true);
        scenario.causal = false;
        add("normal_neg", i, scenario, false);

        scenario.generator = Generator::arma;
        scenario.y_generator = Generator::arma;
        scenario.causal = true;
        add("arma_pos", i, scenario, true);
        scenario.causal = false;
        add("arma_neg", i, scenario, false);

        scenario.generator = Generator::normal;
        scenario.y_generator = Generator::arma;
        scenario.causal = false;
        add("mixed_neg", i, scenario, false);
    }
    return suite;
}

}  // namespace vlc
