#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "vlc/types.hpp"

namespace vlc {

/// Accumulated- and pointwise-cost matrices of a banded DTW run.
/// Storage covers only the Sakoe-Chiba band |i - j| <= window; cells outside
/// the band read as +infinity. Pointwise cost is |x[i] - y[j]|.
class DtwMatrix {
  public:
    DtwMatrix(const TimeSeries& x, const TimeSeries& y, int window);

    std::size_t rows() const noexcept { return nx_; }
    std::size_t cols() const noexcept { return ny_; }
    int window() const noexcept { return window_; }

    bool in_band(std::size_t i, std::size_t j) const noexcept;
    double cost(std::size_t i, std::size_t j) const noexcept;
    double point_cost(std::size_t i, std::size_t j) const noexcept;

    void set_cost(std::size_t i, std::size_t j, double value);

  private:
    std::size_t band_lo(std::size_t i) const noexcept;
    std::size_t band_hi(std::size_t i) const noexcept;

    std::size_t nx_ = 0;
    std::size_t ny_ = 0;
    int window_ = 0;
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<std::size_t> row_start_;
    std::vector<double> cells_;
};

/// Monotone, contiguous sequence of matched index pairs (0-based),
/// from (0,0) to (nx-1, ny-1).
struct WarpingPath {
    std::vector<std::pair<std::int32_t, std::int32_t>> pairs;

    std::size_t size() const noexcept { return pairs.size(); }
    bool valid(std::size_t nx, std::size_t ny) const noexcept;
};

struct DtwResult {
    DtwMatrix matrix;
    WarpingPath path;
    double distance = 0.0;
};

/// Banded DTW distance plus the optimal warping path found by backtracking.
/// Ties during backtracking prefer the diagonal step, then (i-1, j), then
/// (i, j-1).
DtwResult dtw_align(const TimeSeries& x, const TimeSeries& y, int window);

struct CrossCorr {
    int lag = 0;
    double correlation = 0.0;
    bool degenerate = false;  // no overlap had positive variance on both sides
};

/// Lag in [0, delta_max] maximising the Pearson correlation between
/// x[0..T-1-d] and y[d..T-1]; ties resolve toward the smallest lag.
/// Overlaps with zero variance are skipped; if every lag is skipped the
/// result is lag 0 with the degenerate flag set.
CrossCorr cross_correlation_lag(const TimeSeries& x, const TimeSeries& y, int delta_max);

/// Mean sign of a delay sequence, in [-1, 1]. Positive means the second
/// series trails the first.
double emulation_similarity(std::span<const int> delays);
double emulation_similarity(const LagPath& path);

struct AlignmentResult {
    TimeSeries reconstructed;    // reconstructed[t] = x[t - lag_path.delays[t]]
    LagPath lag_path;            // non-negative, capped at delta_max
    double sim_value = 0.0;      // mean sign of the raw selected delays
    std::vector<int> raw_delays; // selected delays before the causal clamp
    WarpingPath path;
    double distance = 0.0;
    int delta0 = 0;
    bool degenerate_xcorr = false;
};

/// DTW-based reconstruction of the cause series against the effect series.
/// Per step the DTW path delay competes with the cross-correlation lag; the
/// candidate whose source value lies strictly closer to y[t] wins, with the
/// cross-correlation lag as the default. sim_value is computed on the raw
/// winners so direction survives; reconstruction itself only admits delays
/// clamped to [0, delta_max].
AlignmentResult reconstruct(const TimeSeries& x, const TimeSeries& y, const Config& cfg);

/// Series fed to the lagged regressions and entropy estimates in place of x.
/// Slot s carries the x value the alignment matched to y[s+1], so lag-1
/// consumers see it; zero-delay steps pass x through unchanged, which makes
/// an all-zero delay sequence return x itself. Delays may be negative (the
/// alignment is free to match forward); the sequence must index within x.
TimeSeries variable_lag_feed(const TimeSeries& x, std::span<const int> delays);
TimeSeries variable_lag_feed(const TimeSeries& x, const LagPath& path);

}  // namespace vlc
