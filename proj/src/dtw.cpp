#include "vlc/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vlc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

DtwMatrix::DtwMatrix(const TimeSeries& x, const TimeSeries& y, int window)
    : nx_(x.size()), ny_(y.size()), window_(window), x_(x.data()), y_(y.data()) {
    row_start_.resize(nx_ + 1);
    std::size_t total = 0;
    for (std::size_t i = 0; i < nx_; ++i) {
        row_start_[i] = total;
        total += band_hi(i) - band_lo(i) + 1;
    }
    row_start_[nx_] = total;
    cells_.assign(total, kInf);
}

std::size_t DtwMatrix::band_lo(std::size_t i) const noexcept {
    const long lo = static_cast<long>(i) - window_;
    return lo > 0 ? static_cast<std::size_t>(lo) : 0;
}

std::size_t DtwMatrix::band_hi(std::size_t i) const noexcept {
    const std::size_t hi = i + static_cast<std::size_t>(window_);
    return std::min(hi, ny_ - 1);
}

bool DtwMatrix::in_band(std::size_t i, std::size_t j) const noexcept {
    if (i >= nx_ || j >= ny_) return false;
    return j >= band_lo(i) && j <= band_hi(i);
}

double DtwMatrix::cost(std::size_t i, std::size_t j) const noexcept {
    if (!in_band(i, j)) return kInf;
    return cells_[row_start_[i] + (j - band_lo(i))];
}

double DtwMatrix::point_cost(std::size_t i, std::size_t j) const noexcept {
    if (i >= nx_ || j >= ny_) return kInf;
    return std::abs(x_[i] - y_[j]);
}

void DtwMatrix::set_cost(std::size_t i, std::size_t j, double value) {
    cells_[row_start_[i] + (j - band_lo(i))] = value;
}

bool WarpingPath::valid(std::size_t nx, std::size_t ny) const noexcept {
    if (pairs.empty()) return false;
    if (pairs.front() != std::pair<std::int32_t, std::int32_t>{0, 0}) return false;
    const auto last = pairs.back();
    if (last.first != static_cast<std::int32_t>(nx) - 1 ||
        last.second != static_cast<std::int32_t>(ny) - 1)
        return false;
    for (std::size_t k = 1; k < pairs.size(); ++k) {
        const int di = pairs[k].first - pairs[k - 1].first;
        const int dj = pairs[k].second - pairs[k - 1].second;
        const bool step_ok = (di == 1 && dj == 0) || (di == 0 && dj == 1) || (di == 1 && dj == 1);
        if (!step_ok) return false;
    }
    return true;
}

DtwResult dtw_align(const TimeSeries& x, const TimeSeries& y, int window) {
    if (x.empty() || y.empty()) throw error(errc::bad_argument, "dtw over empty series");
    if (window < 1) throw error(errc::bad_argument, "dtw window must be >= 1");
    const std::size_t nx = x.size();
    const std::size_t ny = y.size();
    const std::size_t gap = nx > ny ? nx - ny : ny - nx;
    if (gap > static_cast<std::size_t>(window))
        throw error(errc::window_infeasible,
                    "window narrower than the length difference leaves no admissible path");

    DtwMatrix m(x, y, window);
    for (std::size_t i = 0; i < nx; ++i) {
        const std::size_t lo = i > static_cast<std::size_t>(window)
                                   ? i - static_cast<std::size_t>(window)
                                   : 0;
        const std::size_t hi = std::min(i + static_cast<std::size_t>(window), ny - 1);
        for (std::size_t j = lo; j <= hi; ++j) {
            const double d = m.point_cost(i, j);
            double acc;
            if (i == 0 && j == 0) {
                acc = d;
            } else {
                double best = kInf;
                if (i > 0) best = std::min(best, m.cost(i - 1, j));
                if (j > 0) best = std::min(best, m.cost(i, j - 1));
                if (i > 0 && j > 0) best = std::min(best, m.cost(i - 1, j - 1));
                acc = d + best;
            }
            m.set_cost(i, j, acc);
        }
    }

    const double distance = m.cost(nx - 1, ny - 1);
    if (!std::isfinite(distance))
        throw error(errc::window_infeasible, "no admissible path inside the band");

    WarpingPath path;
    std::size_t i = nx - 1;
    std::size_t j = ny - 1;
    path.pairs.emplace_back(static_cast<std::int32_t>(i), static_cast<std::int32_t>(j));
    while (i != 0 || j != 0) {
        double best = kInf;
        int move = -1;  // 0 = diagonal, 1 = (i-1, j), 2 = (i, j-1)
        if (i > 0 && j > 0 && m.cost(i - 1, j - 1) < best) {
            best = m.cost(i - 1, j - 1);
            move = 0;
        }
        if (i > 0 && m.cost(i - 1, j) < best) {
            best = m.cost(i - 1, j);
            move = 1;
        }
        if (j > 0 && m.cost(i, j - 1) < best) {
            best = m.cost(i, j - 1);
            move = 2;
        }
        if (move == 0) {
            --i;
            --j;
        } else if (move == 1) {
            --i;
        } else if (move == 2) {
            --j;
        } else {
            throw error(errc::window_infeasible, "backtracking left the band");
        }
        path.pairs.emplace_back(static_cast<std::int32_t>(i), static_cast<std::int32_t>(j));
    }
    std::reverse(path.pairs.begin(), path.pairs.end());

    return DtwResult{std::move(m), std::move(path), distance};
}

CrossCorr cross_correlation_lag(const TimeSeries& x, const TimeSeries& y, int delta_max) {
    if (delta_max < 0) throw error(errc::bad_delta_max, "delta_max must be >= 0");
    const std::size_t n = std::min(x.size(), y.size());
    CrossCorr result;
    result.degenerate = true;
    double best = -kInf;

    for (int d = 0; d <= delta_max; ++d) {
        if (static_cast<std::size_t>(d) + 2 > n) break;  // overlap too short for a variance
        const std::size_t len = n - static_cast<std::size_t>(d);
        double mx = 0.0, my = 0.0;
        for (std::size_t t = 0; t < len; ++t) {
            mx += x[t];
            my += y[t + static_cast<std::size_t>(d)];
        }
        mx /= static_cast<double>(len);
        my /= static_cast<double>(len);
        double sxx = 0.0, syy = 0.0, sxy = 0.0;
        for (std::size_t t = 0; t < len; ++t) {
            const double dx = x[t] - mx;
            const double dy = y[t + static_cast<std::size_t>(d)] - my;
            sxx += dx * dx;
            syy += dy * dy;
            sxy += dx * dy;
        }
        if (sxx <= 0.0 || syy <= 0.0) continue;  // flat overlap, no correlation defined
        const double r = sxy / std::sqrt(sxx * syy);
        if (result.degenerate || r > best) {
            best = r;
            result.lag = d;
            result.correlation = r;
            result.degenerate = false;
        }
    }
    if (result.degenerate) {
        result.lag = 0;
        result.correlation = 0.0;
    }
    return result;
}

double emulation_similarity(std::span<const int> delays) {
    if (delays.empty()) throw error(errc::bad_argument, "empty delay sequence");
    long sum = 0;
    for (int d : delays) sum += (d > 0) - (d < 0);
    return static_cast<double>(sum) / static_cast<double>(delays.size());
}

double emulation_similarity(const LagPath& path) {
    return emulation_similarity(std::span<const int>(path.delays));
}

AlignmentResult reconstruct(const TimeSeries& x, const TimeSeries& y, const Config& cfg) {
    validate_pair(x, y, cfg);
    const std::size_t n = y.size();
    const int dmax = cfg.delta_max;

    DtwResult aligned = dtw_align(x, y, dmax);
    const CrossCorr xc = cross_correlation_lag(x, y, dmax);

    // Delay at effect step t comes from the pair through which the path first
    // enters column t, i.e. the earliest matched x index.
    std::vector<int> path_delay(n, 0);
    std::vector<char> seen(n, 0);
    for (const auto& [i, j] : aligned.path.pairs) {
        if (!seen[static_cast<std::size_t>(j)]) {
            seen[static_cast<std::size_t>(j)] = 1;
            path_delay[static_cast<std::size_t>(j)] = j - i;
        }
    }

    AlignmentResult result;
    result.raw_delays.resize(n);
    result.lag_path.delays.resize(n);
    result.lag_path.source_length = x.size();
    result.reconstructed.data().resize(n);

    const auto dist_at = [&](long t, long delay) {
        const long src = t - delay;
        if (src < 0 || src >= static_cast<long>(x.size())) return kInf;
        return std::abs(x[static_cast<std::size_t>(src)] - y[static_cast<std::size_t>(t)]);
    };

    for (std::size_t t = 0; t < n; ++t) {
        const long tt = static_cast<long>(t);
        const int d_dtw = path_delay[t];
        const int d_xc = xc.lag;
        int chosen;
        if (dist_at(tt, d_dtw) < dist_at(tt, d_xc)) {
            chosen = d_dtw;
        } else if (std::isfinite(dist_at(tt, d_xc))) {
            chosen = d_xc;
        } else {
            chosen = d_dtw;
        }
        result.raw_delays[t] = chosen;
        const int clamped = std::clamp(chosen, 0, std::min<int>(dmax, static_cast<int>(t)));
        result.lag_path.delays[t] = clamped;
        result.reconstructed[t] = x[t - static_cast<std::size_t>(clamped)];
    }

    result.sim_value = emulation_similarity(std::span<const int>(result.raw_delays));
    result.distance = aligned.distance;
    result.path = std::move(aligned.path);
    result.delta0 = xc.lag;
    result.degenerate_xcorr = xc.degenerate;
    return result;
}

TimeSeries variable_lag_feed(const TimeSeries& x, std::span<const int> delays) {
    const std::size_t n = delays.size();
    if (n == 0) throw error(errc::bad_argument, "empty delay sequence");
    if (x.size() < n) throw error(errc::length_mismatch, "delay sequence longer than the series");
    std::vector<double> feed(n);
    const long last = static_cast<long>(n) - 1;
    for (long s = 0; s <= last; ++s) {
        const int delay = delays[static_cast<std::size_t>(std::min(s + 1, last))];
        long src = delay == 0 ? s : s + 1 - delay;
        src = std::clamp(src, 0L, static_cast<long>(x.size()) - 1);
        feed[static_cast<std::size_t>(s)] = x[static_cast<std::size_t>(src)];
    }
    return TimeSeries(std::move(feed));
}

TimeSeries variable_lag_feed(const TimeSeries& x, const LagPath& path) {
    return variable_lag_feed(x, std::span<const int>(path.delays));
}

}  // namespace vlc
