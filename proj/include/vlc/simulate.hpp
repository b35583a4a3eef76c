#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vlc/pipeline.hpp"
#include "vlc/types.hpp"

namespace vlc {

enum class Generator { normal, arma };

/// Benchmark pair recipe. The cause is drawn i.i.d. standard normal or from
/// the AR recursion x[t] = 0.2 x[t-1] + e. A causal effect copies the cause
/// with delay `delta` plus noise_scale * standard normal, and optionally
/// freezes over [freeze_start, freeze_end] (0-based, inclusive) at the value
/// it copied from cause step freeze_source, turning the constant delay into
/// a variable one. A non-causal effect is an independent draw from
/// y_generator.
struct PairwiseScenario {
    Generator generator = Generator::normal;
    Generator y_generator = Generator::normal;
    bool causal = true;
    std::size_t length = 200;
    int delta = 5;
    double noise_scale = 0.1;
    bool freeze = true;
    std::size_t freeze_start = 109;
    std::size_t freeze_end = 169;
    std::size_t freeze_source = 99;
    std::uint64_t seed = 0;

    void validate() const;
};

std::pair<TimeSeries, TimeSeries> gen_pairwise(const PairwiseScenario& scenario);

/// Ten-member group: independent sources X1..X3 and effects Y_S for every
/// non-empty subset S of the sources, each the mean of the delta-lagged
/// members of S plus noise. Column order X1,X2,X3,Y1,Y2,Y3,Y12,Y13,Y23,Y123.
GroupData gen_group(Generator generator, std::uint64_t seed, std::size_t length = 200,
                    int delta = 5, double noise_scale = 0.1);

/// Ground-truth edges of the group layout: X_i -> Y_S exactly when i is in S.
std::vector<std::pair<std::string, std::string>> group_truth_edges();

struct LabeledPair {
    std::string name;
    TimeSeries x;
    TimeSeries y;
    bool causal = false;
};

/// The 75-instance pairwise benchmark: 15 causal normal, 15 non-causal
/// normal, 15 causal AR, 15 non-causal AR, and 15 mixed non-causal pairs
/// (normal cause candidate, AR other series).
std::vector<LabeledPair> gen_benchmark_suite(std::uint64_t seed);

}  // namespace vlc
