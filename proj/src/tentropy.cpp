#include "vlc/tentropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "vlc/dtw.hpp"
#include "vlc/rng.hpp"

namespace vlc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Linear-interpolation quantile of a sorted sample (the common "type 7").
double quantile_sorted(const std::vector<double>& sorted, double q) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = q * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return sorted[n - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

SymbolSeries discretize(const TimeSeries& x, const BinSpec& bins) {
    if (x.empty()) throw error(errc::bad_argument, "cannot discretize an empty series");
    if (!x.all_finite()) throw error(errc::non_finite, "series contains NaN or infinite values");

    const auto [min_it, max_it] = std::minmax_element(x.begin(), x.end());
    if (*min_it == *max_it) {
        SymbolSeries flat;
        flat.symbols.assign(x.size(), 0);
        flat.alphabet_size = 1;
        flat.degenerate = true;
        return flat;
    }

    std::vector<double> edges;
    switch (bins.kind) {
        case BinSpec::Kind::quantile: {
            if (bins.bins < 2) throw error(errc::bad_argument, "need at least 2 bins");
            std::vector<double> sorted = x.data();
            std::sort(sorted.begin(), sorted.end());
            if (bins.bins == 3) {
                edges = {quantile_sorted(sorted, bins.q_low), quantile_sorted(sorted, bins.q_high)};
            } else {
                for (int i = 1; i < bins.bins; ++i)
                    edges.push_back(
                        quantile_sorted(sorted, static_cast<double>(i) / bins.bins));
            }
            break;
        }
        case BinSpec::Kind::width: {
            if (bins.bins < 2) throw error(errc::bad_argument, "need at least 2 bins");
            const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
            const double lo = *lo_it;
            const double width = (*hi_it - lo) / bins.bins;
            for (int i = 1; i < bins.bins; ++i) edges.push_back(lo + width * i);
            break;
        }
        case BinSpec::Kind::edges:
            edges = bins.explicit_edges;
            if (!std::is_sorted(edges.begin(), edges.end()))
                throw error(errc::bad_argument, "explicit edges must be increasing");
            break;
    }

    // Collapse non-increasing edges so bin_edges stays strictly increasing.
    std::vector<double> clean;
    for (double e : edges) {
        if (clean.empty() || e > clean.back()) clean.push_back(e);
    }

    SymbolSeries out;
    out.bin_edges = clean;
    out.alphabet_size = static_cast<int>(clean.size()) + 1;
    out.symbols.resize(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
        int s = 0;
        while (s < static_cast<int>(clean.size()) && x[t] >= clean[static_cast<std::size_t>(s)]) ++s;
        out.symbols[t] = s;
    }

    if (clean.empty()) {
        out.degenerate = true;
        out.alphabet_size = 1;
    }
    return out;
}

double shannon_te(const SymbolSeries& sx, const SymbolSeries& sy, int k, int l) {
    if (sx.size() != sy.size())
        throw error(errc::length_mismatch, "symbol series lengths differ");
    if (k < 1 || l < 1) throw error(errc::bad_argument, "history lengths must be >= 1");
    const std::size_t T = sy.size();
    const std::size_t m = static_cast<std::size_t>(std::max(k, l));
    if (T <= m + 1) throw error(errc::too_short, "series shorter than the histories require");

    const std::uint64_t ay = static_cast<std::uint64_t>(std::max(sy.alphabet_size, 1));
    const std::uint64_t ax = static_cast<std::uint64_t>(std::max(sx.alphabet_size, 1));
    if ((k + 1) * std::log2(static_cast<double>(ay)) +
            l * std::log2(static_cast<double>(ax)) > 40.0)
        throw error(errc::bad_argument, "history state space too large to estimate");

    std::unordered_map<std::uint64_t, int> n_full;    // (y_t, y_hist, x_hist)
    std::unordered_map<std::uint64_t, int> n_hist;    // (y_hist, x_hist)
    std::unordered_map<std::uint64_t, int> n_y_yh;    // (y_t, y_hist)
    std::unordered_map<std::uint64_t, int> n_yh;      // (y_hist)

    std::uint64_t pow_yh = 1;
    for (int i = 0; i < k; ++i) pow_yh *= ay;
    std::uint64_t pow_xh = 1;
    for (int i = 0; i < l; ++i) pow_xh *= ax;

    const std::size_t samples = T - m;
    for (std::size_t t = m; t < T; ++t) {
        std::uint64_t yh = 0;
        for (int i = 1; i <= k; ++i)
            yh = yh * ay + static_cast<std::uint64_t>(sy.symbols[t - static_cast<std::size_t>(i)]);
        std::uint64_t xh = 0;
        for (int i = 1; i <= l; ++i)
            xh = xh * ax + static_cast<std::uint64_t>(sx.symbols[t - static_cast<std::size_t>(i)]);
        const auto yt = static_cast<std::uint64_t>(sy.symbols[t]);

        ++n_full[(yt * pow_yh + yh) * pow_xh + xh];
        ++n_hist[yh * pow_xh + xh];
        ++n_y_yh[yt * pow_yh + yh];
        ++n_yh[yh];
    }

    double te = 0.0;
    const double inv_n = 1.0 / static_cast<double>(samples);
    for (const auto& [key, c_full] : n_full) {
        const std::uint64_t xh = key % pow_xh;
        const std::uint64_t rest = key / pow_xh;
        const std::uint64_t yh = rest % pow_yh;
        const std::uint64_t yt = rest / pow_yh;

        const int c_hist = n_hist.at(yh * pow_xh + xh);
        const int c_y_yh = n_y_yh.at(yt * pow_yh + yh);
        const int c_yh = n_yh.at(yh);

        const double log_ratio =
            std::log2((static_cast<double>(c_full) * static_cast<double>(c_yh)) /
                      (static_cast<double>(c_hist) * static_cast<double>(c_y_yh)));
        te += static_cast<double>(c_full) * inv_n * log_ratio;
    }
    return te > 0.0 ? te : 0.0;
}

double te_ratio(double te_xy, double te_yx) {
    const double a = std::max(te_xy, 0.0);
    const double b = std::max(te_yx, 0.0);
    if (b > 0.0) return a / b;
    if (a > 0.0) return kInf;
    return kNaN;
}

double block_bootstrap_pvalue(const SymbolSeries& cause, const SymbolSeries& target, int k, int l,
                              int nboot, std::uint64_t seed, std::string_view stream_tag) {
    if (nboot < 1) throw error(errc::bad_argument, "nboot must be >= 1");
    const double observed = shannon_te(cause, target, k, l);

    const int alphabet = std::max(cause.alphabet_size, 1);
    const std::size_t n = cause.size();

    // First-order transition counts of the cause series, plus its marginal
    // as the fallback and initial distribution.
    std::vector<std::vector<std::uint32_t>> transitions(
        static_cast<std::size_t>(alphabet), std::vector<std::uint32_t>(static_cast<std::size_t>(alphabet), 0));
    std::vector<std::uint32_t> marginal(static_cast<std::size_t>(alphabet), 0);
    for (std::size_t t = 0; t < n; ++t) {
        ++marginal[static_cast<std::size_t>(cause.symbols[t])];
        if (t + 1 < n)
            ++transitions[static_cast<std::size_t>(cause.symbols[t])]
                         [static_cast<std::size_t>(cause.symbols[t + 1])];
    }

    const auto draw_from = [](const std::vector<std::uint32_t>& weights, RngStream& rng) {
        std::uint64_t total = 0;
        for (std::uint32_t w : weights) total += w;
        std::uint64_t pick = rng.next_below(total);
        for (std::size_t s = 0; s < weights.size(); ++s) {
            if (pick < weights[s]) return static_cast<int>(s);
            pick -= weights[s];
        }
        return static_cast<int>(weights.size() - 1);
    };

    int exceed = 0;
    SymbolSeries surrogate = cause;
    for (int rep = 0; rep < nboot; ++rep) {
        RngStream rng(seed, stream_tag, static_cast<std::uint64_t>(rep));
        int state = draw_from(marginal, rng);
        surrogate.symbols[0] = state;
        for (std::size_t t = 1; t < n; ++t) {
            const auto& row = transitions[static_cast<std::size_t>(state)];
            std::uint64_t row_total = 0;
            for (std::uint32_t w : row) row_total += w;
            state = row_total > 0 ? draw_from(row, rng) : draw_from(marginal, rng);
            surrogate.symbols[t] = state;
        }
        if (shannon_te(surrogate, target, k, l) >= observed) ++exceed;
    }
    return (1.0 + static_cast<double>(exceed)) / (static_cast<double>(nboot) + 1.0);
}

TimeSeries markov_value_surrogate(const TimeSeries& series, const BinSpec& bins, RngStream& rng) {
    const SymbolSeries sym = discretize(series, bins);
    const auto alphabet = static_cast<std::size_t>(std::max(sym.alphabet_size, 1));
    const std::size_t n = series.size();

    std::vector<std::vector<double>> buckets(alphabet);
    std::vector<std::vector<std::uint32_t>> transitions(alphabet,
                                                        std::vector<std::uint32_t>(alphabet, 0));
    std::vector<std::uint32_t> marginal(alphabet, 0);
    for (std::size_t t = 0; t < n; ++t) {
        const auto s = static_cast<std::size_t>(sym.symbols[t]);
        buckets[s].push_back(series[t]);
        ++marginal[s];
        if (t + 1 < n) ++transitions[s][static_cast<std::size_t>(sym.symbols[t + 1])];
    }

    const auto draw_from = [&rng](const std::vector<std::uint32_t>& weights) {
        std::uint64_t total = 0;
        for (std::uint32_t w : weights) total += w;
        std::uint64_t pick = rng.next_below(total);
        for (std::size_t s = 0; s < weights.size(); ++s) {
            if (pick < weights[s]) return s;
            pick -= weights[s];
        }
        return weights.size() - 1;
    };

    std::vector<double> out(n);
    std::size_t state = draw_from(marginal);
    out[0] = buckets[state][rng.next_below(buckets[state].size())];
    for (std::size_t t = 1; t < n; ++t) {
        const auto& row = transitions[state];
        std::uint64_t row_total = 0;
        for (std::uint32_t w : row) row_total += w;
        state = row_total > 0 ? draw_from(row) : draw_from(marginal);
        out[t] = buckets[state][rng.next_below(buckets[state].size())];
    }
    return TimeSeries(std::move(out));
}

namespace {

struct TePair {
    double te_xy = 0.0;
    double te_yx = 0.0;
};

TePair aligned_te(const TimeSeries& x, const TimeSeries& y, const Config& cfg) {
    const AlignmentResult alignment = reconstruct(x, y, cfg);
    const TimeSeries feed = variable_lag_feed(x, std::span<const int>(alignment.raw_delays));
    const SymbolSeries sx = discretize(feed, cfg.te_bins);
    const SymbolSeries sy = discretize(y, cfg.te_bins);
    return {shannon_te(sx, sy, cfg.te_k, cfg.te_l), shannon_te(sy, sx, cfg.te_k, cfg.te_l)};
}

TEReport report_from(const TePair& te, bool variable_lag) {
    TEReport report;
    report.variable_lag = variable_lag;
    report.te_xy = te.te_xy;
    report.te_yx = te.te_yx;
    report.ratio = te_ratio(report.te_xy, report.te_yx);
    report.cause = report.ratio > 1.0;  // NaN compares false
    return report;
}

}  // namespace

TEReport vl_transfer_entropy(const TimeSeries& x, const TimeSeries& y, const Config& cfg,
                             bool fix_lag) {
    validate_pair(x, y, cfg);

    if (fix_lag) {
        const SymbolSeries sx = discretize(x, cfg.te_bins);
        const SymbolSeries sy = discretize(y, cfg.te_bins);
        TEReport report = report_from(
            {shannon_te(sx, sy, cfg.te_k, cfg.te_l), shannon_te(sy, sx, cfg.te_k, cfg.te_l)},
            false);
        if (cfg.nboot > 0) {
            report.pvalue_xy = block_bootstrap_pvalue(sx, sy, cfg.te_k, cfg.te_l, cfg.nboot,
                                                      cfg.seed, "te-boot-xy");
            report.pvalue_yx = block_bootstrap_pvalue(sy, sx, cfg.te_k, cfg.te_l, cfg.nboot,
                                                      cfg.seed, "te-boot-yx");
            report.cause = report.cause && *report.pvalue_xy <= cfg.alpha;
        }
        return report;
    }

    const AlignmentResult alignment = reconstruct(x, y, cfg);
    const TimeSeries feed = variable_lag_feed(x, std::span<const int>(alignment.raw_delays));
    const SymbolSeries sx = discretize(feed, cfg.te_bins);
    const SymbolSeries sy = discretize(y, cfg.te_bins);
    TEReport report = report_from(
        {shannon_te(sx, sy, cfg.te_k, cfg.te_l), shannon_te(sy, sx, cfg.te_k, cfg.te_l)}, true);
    report.sim_value = alignment.sim_value;

    if (cfg.nboot > 0) {
        // The aligned estimate is optimistic by construction, so each
        // replicate rebuilds the alignment on a surrogate cause. Whatever TE
        // the alignment alone can manufacture ends up in the null.
        int exceed_xy = 0;
        int exceed_yx = 0;
        for (int rep = 0; rep < cfg.nboot; ++rep) {
            RngStream rng_x(cfg.seed, "te-vlboot-xy", static_cast<std::uint64_t>(rep));
            const TimeSeries x_sur = markov_value_surrogate(x, cfg.te_bins, rng_x);
            if (aligned_te(x_sur, y, cfg).te_xy >= report.te_xy) ++exceed_xy;

            RngStream rng_y(cfg.seed, "te-vlboot-yx", static_cast<std::uint64_t>(rep));
            const TimeSeries y_sur = markov_value_surrogate(y, cfg.te_bins, rng_y);
            if (aligned_te(x, y_sur, cfg).te_yx >= report.te_yx) ++exceed_yx;
        }
        report.pvalue_xy = (1.0 + exceed_xy) / (cfg.nboot + 1.0);
        report.pvalue_yx = (1.0 + exceed_yx) / (cfg.nboot + 1.0);
        report.cause = report.cause && *report.pvalue_xy <= cfg.alpha;
    }
    return report;
}

TEReport vl_transfer_entropy_with_path(const TimeSeries& x, const TimeSeries& y, const Config& cfg,
                                       const LagPath& path) {
    validate_pair(x, y, cfg);
    if (path.size() != y.size())
        throw error(errc::length_mismatch, "lag path length must match the series");
    if (!path.valid()) throw error(errc::bad_argument, "lag path indexes outside the series");
    const TimeSeries feed = variable_lag_feed(x, path);
    const SymbolSeries sx = discretize(feed, cfg.te_bins);
    const SymbolSeries sy = discretize(y, cfg.te_bins);
    TEReport report = report_from(
        {shannon_te(sx, sy, cfg.te_k, cfg.te_l), shannon_te(sy, sx, cfg.te_k, cfg.te_l)}, true);
    if (cfg.nboot > 0) {
        // With an externally fixed alignment the null conditions on it, so
        // the plain symbol-level resampling applies.
        report.pvalue_xy = block_bootstrap_pvalue(sx, sy, cfg.te_k, cfg.te_l, cfg.nboot, cfg.seed,
                                                  "te-boot-path-xy");
        report.pvalue_yx = block_bootstrap_pvalue(sy, sx, cfg.te_k, cfg.te_l, cfg.nboot, cfg.seed,
                                                  "te-boot-path-yx");
        report.cause = report.cause && *report.pvalue_xy <= cfg.alpha;
    }
    return report;
}

}  // namespace vlc
