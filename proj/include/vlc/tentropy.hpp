#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "vlc/rng.hpp"
#include "vlc/types.hpp"

namespace vlc {

struct SymbolSeries {
    std::vector<int> symbols;
    int alphabet_size = 0;
    std::vector<double> bin_edges;
    bool degenerate = false;  // constant input collapsed to a single symbol

    std::size_t size() const noexcept { return symbols.size(); }
};

/// Cut a series into symbols. The default is three symbols split at the 5%
/// and 95% empirical quantiles (linear-interpolation quantiles); equal-width
/// and explicit-edge specs are available through BinSpec.
SymbolSeries discretize(const TimeSeries& x, const BinSpec& bins);

/// Plug-in Shannon transfer entropy from x to y in bits, with history
/// lengths k (target) and l (source). Probabilities come from joint
/// empirical counts; 0 log 0 terms contribute nothing. Non-negative up to
/// rounding; tiny negatives clamp to zero.
double shannon_te(const SymbolSeries& sx, const SymbolSeries& sy, int k, int l);

/// te_xy / te_yx. A zero denominator with a positive numerator yields
/// +infinity; 0/0 yields NaN (the undefined sentinel).
double te_ratio(double te_xy, double te_yx);

/// One-sided bootstrap p-value for TE(cause -> target). The null resamples
/// the cause series as a first-order Markov chain fitted to its own
/// transitions, which breaks the cross-coupling while keeping within-series
/// dependence. p = (1 + #{replicate >= observed}) / (nboot + 1).
double block_bootstrap_pvalue(const SymbolSeries& cause, const SymbolSeries& target, int k, int l,
                              int nboot, std::uint64_t seed, std::string_view stream_tag);

/// Markov surrogate of a raw series: symbols follow a first-order chain
/// fitted to the discretized input, values are drawn from the observed
/// values of each bin. Keeps the marginal and coarse dynamics, breaks any
/// coupling to other series.
TimeSeries markov_value_surrogate(const TimeSeries& series, const BinSpec& bins, RngStream& rng);

struct TEReport {
    double te_xy = 0.0;
    double te_yx = 0.0;
    double ratio = 0.0;  // may be +inf or NaN, see te_ratio
    std::optional<double> pvalue_xy;
    std::optional<double> pvalue_yx;
    bool cause = false;
    double sim_value = 0.0;  // meaningful for variable-lag runs only
    bool variable_lag = false;
};

/// Fixed-lag or variable-lag transfer entropy test of x causing y.
/// Variable-lag runs estimate TE between the DTW-aligned feed of x and y;
/// their bootstrap replays the whole pipeline (surrogate, realign, estimate)
/// so the null distribution absorbs what alignment alone can explain.
/// cause requires ratio > 1 and, when nboot > 0, a bootstrap p-value for the
/// x -> y direction at or below cfg.alpha.
TEReport vl_transfer_entropy(const TimeSeries& x, const TimeSeries& y, const Config& cfg,
                             bool fix_lag);

/// Variable-lag transfer entropy for an externally supplied alignment.
/// With an all-zero path this reduces exactly to the fixed-lag estimate.
TEReport vl_transfer_entropy_with_path(const TimeSeries& x, const TimeSeries& y, const Config& cfg,
                                       const LagPath& path);

}  // namespace vlc
