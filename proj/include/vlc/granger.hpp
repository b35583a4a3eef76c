#pragma once

#include <vector>

#include "vlc/types.hpp"

namespace vlc {

struct RegressionFit {
    std::vector<double> coefficients;  // lag coefficients, blocks back to back
    double intercept = 0.0;
    std::vector<double> residuals;     // over t in [delta_max, T)
    double rss = 0.0;
    bool rank_deficient = false;
};

/// Ordinary least squares of target[t] on an intercept plus lags 1..delta_max
/// of each predictor block, fitted over t in [delta_max, T). Rank-deficient
/// designs resolve to the minimum-norm solution; sample counts at or below
/// the parameter count raise TooShort.
RegressionFit lag_regress(const TimeSeries& target, const std::vector<const TimeSeries*>& predictors,
                          int delta_max);

double bic_restricted(double rss, std::size_t T, int delta_max);
double bic_unrestricted(double rss, std::size_t T, int delta_max);

/// (bic0 - bic1) / bic0, in [-inf, 1]. bic0 == 0 maps to -inf unless bic1 is
/// also 0, which maps to 0.
double bic_diff_ratio(double bic0, double bic1);

/// Nested-model F test p-value. A non-positive F statistic clamps to p = 1.
double f_test(double rss_restricted, double rss_unrestricted, std::size_t T, int p_restricted,
              int p_unrestricted);

struct GrangerReport {
    double rss_restricted = 0.0;
    double rss_unrestricted = 0.0;
    double bic0 = 0.0;
    double bic1 = 0.0;
    double bic_ratio = 0.0;
    double f_pvalue = 1.0;
    bool cause = false;
    double sim_value = 0.0;  // meaningful for variable-lag runs only
    bool variable_lag = false;
    int lag_order = 0;       // regression order actually fitted
    bool rank_deficient = false;
};

/// Largest regression order that keeps the two-block model comfortably
/// overdetermined; the DTW window and cross-correlation search still use the
/// full delta_max.
int effective_lag_order(std::size_t T, int delta_max);

/// Fixed-lag or variable-lag Granger test of x causing y. The decision uses
/// the BIC difference ratio against cfg.gamma by default; the F-test p-value
/// is always computed and can be selected through cfg.granger_criterion.
GrangerReport vl_granger(const TimeSeries& x, const TimeSeries& y, const Config& cfg,
                         bool fix_lag);

}  // namespace vlc
