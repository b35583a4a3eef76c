#pragma once

#include <optional>
#include <vector>

#include "vlc/simulate.hpp"
#include "vlc/types.hpp"

namespace vlc {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
};

/// Confusion metrics. Ratios with an empty denominator are reported as
/// nullopt rather than zero so averages do not silently absorb them.
struct Metrics {
    ConfusionCounts counts;
    double accuracy = 0.0;
    std::optional<double> tpr;
    std::optional<double> fpr;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
};

Metrics score(const std::vector<bool>& predicted, const std::vector<bool>& truth);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocResult {
    double auc = 0.0;
    std::vector<RocPoint> points;
};

/// ROC over a continuous decision score, higher meaning more causal.
/// Equal scores collapse into one sweep step, which makes the trapezoidal
/// area equal to the rank statistic (wins + ties/2) / (P*N).
RocResult roc_auc(const std::vector<double>& scores, const std::vector<bool>& truth);

enum class BenchMethod { vl_granger, granger, vl_transfer_entropy, transfer_entropy };

const char* bench_method_name(BenchMethod method);
std::optional<BenchMethod> bench_method_from_name(const std::string& name);

struct BenchDecision {
    bool predicted = false;
    double decision_score = 0.0;  // BIC difference ratio or TE ratio
};

/// One method's causal call on one pair: the method's cause flag plus its
/// continuous score (undefined TE ratios map to 0, the non-causal floor).
BenchDecision bench_decide(BenchMethod method, const TimeSeries& x, const TimeSeries& y,
                           const Config& cfg);

struct SweepRow {
    double fraction = 0.0;
    int delta_max = 0;
    double accuracy = 0.0;
};

/// Runs the chosen method over the suite once per delta_max fraction of the
/// series length and reports the mean accuracy of the causal calls.
std::vector<SweepRow> delta_max_sweep(const std::vector<LabeledPair>& suite, const Config& cfg,
                                      const std::vector<double>& fractions, BenchMethod method);

}  // namespace vlc
