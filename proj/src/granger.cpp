#include "vlc/granger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vlc/dtw.hpp"
#include "vlc/linalg.hpp"

namespace vlc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Regularized incomplete beta via Lentz's continued fraction.
double beta_cont_frac(double a, double b, double x) {
    constexpr int max_iter = 300;
    constexpr double eps = 1e-15;
    constexpr double tiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

double reg_inc_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_bt =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(log_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cont_frac(a, b, x) / a;
    return 1.0 - bt * beta_cont_frac(b, a, 1.0 - x) / b;
}

// Gram entries for lagged blocks are windowed lag products; consecutive
// (i+1, j+1) cells differ from (i, j) by one term at each window edge, which
// lets the whole matrix fill in O(p^2) after the first row and column.
struct LagGram {
    linalg::SymMatrix gram{0};
    std::vector<double> rhs;
};

LagGram build_lag_gram(const std::vector<double>& y, const std::vector<const std::vector<double>*>& blocks,
                       int delta) {
    const std::size_t T = y.size();
    const std::size_t d = static_cast<std::size_t>(delta);
    const std::size_t n = T - d;
    const std::size_t nblocks = blocks.size();
    const std::size_t p = 1 + nblocks * d;

    LagGram out;
    out.gram = linalg::SymMatrix(p);
    out.rhs.assign(p, 0.0);

    const auto col = [&](std::size_t b, std::size_t lag) { return 1 + b * d + (lag - 1); };

    out.gram.at(0, 0) = static_cast<double>(n);
    {
        double sy = 0.0;
        for (std::size_t t = d; t < T; ++t) sy += y[t];
        out.rhs[0] = sy;
    }

    // Prefix sums give every intercept cross term in O(1).
    std::vector<std::vector<double>> prefix(nblocks);
    for (std::size_t b = 0; b < nblocks; ++b) {
        const auto& s = *blocks[b];
        prefix[b].resize(T + 1, 0.0);
        for (std::size_t t = 0; t < T; ++t) prefix[b][t + 1] = prefix[b][t] + s[t];
    }
    for (std::size_t b = 0; b < nblocks; ++b) {
        for (std::size_t lag = 1; lag <= d; ++lag) {
            const double sum = prefix[b][T - lag] - prefix[b][d - lag];
            out.gram.at(0, col(b, lag)) = sum;
            out.gram.at(col(b, lag), 0) = sum;
        }
    }

    for (std::size_t b = 0; b < nblocks; ++b) {
        const auto& s = *blocks[b];
        for (std::size_t lag = 1; lag <= d; ++lag) {
            double sum = 0.0;
            for (std::size_t t = d; t < T; ++t) sum += y[t] * s[t - lag];
            out.rhs[col(b, lag)] = sum;
        }
    }

    for (std::size_t a = 0; a < nblocks; ++a) {
        for (std::size_t b = a; b < nblocks; ++b) {
            const auto& sa = *blocks[a];
            const auto& sb = *blocks[b];
            // M(i, j) = sum over the fit window of sa[t-i] * sb[t-j].
            std::vector<double> m(d * d, 0.0);
            const auto idx = [&](std::size_t i, std::size_t j) { return (i - 1) * d + (j - 1); };
            for (std::size_t j = 1; j <= d; ++j) {
                double sum = 0.0;
                for (std::size_t t = d; t < T; ++t) sum += sa[t - 1] * sb[t - j];
                m[idx(1, j)] = sum;
            }
            for (std::size_t i = 2; i <= d; ++i) {
                double sum = 0.0;
                for (std::size_t t = d; t < T; ++t) sum += sa[t - i] * sb[t - 1];
                m[idx(i, 1)] = sum;
            }
            for (std::size_t i = 1; i < d; ++i) {
                for (std::size_t j = 1; j < d; ++j) {
                    m[idx(i + 1, j + 1)] = m[idx(i, j)] + sa[d - 1 - i] * sb[d - 1 - j] -
                                           sa[T - 1 - i] * sb[T - 1 - j];
                }
            }
            for (std::size_t i = 1; i <= d; ++i) {
                for (std::size_t j = 1; j <= d; ++j) {
                    out.gram.at(col(a, i), col(b, j)) = m[idx(i, j)];
                    out.gram.at(col(b, j), col(a, i)) = m[idx(i, j)];
                }
            }
        }
    }
    return out;
}

}  // namespace

RegressionFit lag_regress(const TimeSeries& target,
                          const std::vector<const TimeSeries*>& predictors, int delta_max) {
    if (predictors.empty() || predictors.size() > 2)
        throw error(errc::bad_argument, "lag_regress expects 1 or 2 predictor blocks");
    if (delta_max < 1) throw error(errc::bad_delta_max, "delta_max must be >= 1");
    const std::size_t T = target.size();
    for (const TimeSeries* block : predictors) {
        if (block->size() != T)
            throw error(errc::length_mismatch, "predictor length differs from the target");
    }
    if (static_cast<std::size_t>(delta_max) >= T)
        throw error(errc::bad_delta_max, "delta_max must be smaller than the series length");

    const std::size_t d = static_cast<std::size_t>(delta_max);
    const std::size_t n = T - d;
    const std::size_t p = 1 + predictors.size() * d;
    if (n <= p)
        throw error(errc::too_short,
                    "sample window of " + std::to_string(n) + " cannot identify " +
                        std::to_string(p) + " parameters");

    std::vector<const std::vector<double>*> blocks;
    blocks.reserve(predictors.size());
    for (const TimeSeries* block : predictors) blocks.push_back(&block->data());

    LagGram sys = build_lag_gram(target.data(), blocks, delta_max);
    linalg::SolveResult sol = linalg::solve_spd(std::move(sys.gram), std::move(sys.rhs));

    RegressionFit fit;
    fit.rank_deficient = sol.rank_deficient;
    fit.intercept = sol.coef[0];
    fit.coefficients.assign(sol.coef.begin() + 1, sol.coef.end());
    fit.residuals.resize(n);
    double rss = 0.0;
    for (std::size_t t = d; t < T; ++t) {
        double pred = fit.intercept;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const auto& s = *blocks[b];
            const double* beta = fit.coefficients.data() + b * d;
            for (std::size_t lag = 1; lag <= d; ++lag) pred += beta[lag - 1] * s[t - lag];
        }
        const double r = target[t] - pred;
        fit.residuals[t - d] = r;
        rss += r * r;
    }
    fit.rss = rss;
    return fit;
}

double bic_restricted(double rss, std::size_t T, int delta_max) {
    const double t = static_cast<double>(T);
    return rss / t * std::pow(t, (static_cast<double>(delta_max) + 1.0) / t);
}

double bic_unrestricted(double rss, std::size_t T, int delta_max) {
    const double t = static_cast<double>(T);
    return rss / t * std::pow(t, (2.0 * static_cast<double>(delta_max) + 1.0) / t);
}

double bic_diff_ratio(double bic0, double bic1) {
    if (bic0 < 0.0) throw error(errc::bad_argument, "bic0 must be >= 0");
    if (bic0 == 0.0) return bic1 == 0.0 ? 0.0 : -kInf;
    return (bic0 - bic1) / bic0;
}

double f_test(double rss_restricted, double rss_unrestricted, std::size_t T, int p_restricted,
              int p_unrestricted) {
    if (p_unrestricted <= p_restricted)
        throw error(errc::bad_argument, "unrestricted model must add parameters");
    const double dof2 = static_cast<double>(T) - static_cast<double>(p_unrestricted);
    if (dof2 <= 0.0) throw error(errc::degenerate_dof, "no residual degrees of freedom");
    const double dof1 = static_cast<double>(p_unrestricted - p_restricted);

    if (rss_unrestricted <= 0.0) return rss_restricted <= 0.0 ? 1.0 : 0.0;
    const double f = ((rss_restricted - rss_unrestricted) / dof1) / (rss_unrestricted / dof2);
    if (f <= 0.0) return 1.0;
    // Survival of the F distribution through the incomplete beta.
    const double x = dof2 / (dof2 + dof1 * f);
    return reg_inc_beta(dof2 / 2.0, dof1 / 2.0, x);
}

int effective_lag_order(std::size_t T, int delta_max) {
    // The regression order follows delta_max up to a fifth of the series,
    // saturating at 200 lags so the dense solve stays tractable on long
    // series, and never past the point where the two-block model runs out
    // of samples: T - delta >= 2*delta + 1 + 20.
    const long fifth = std::min<long>(static_cast<long>(T), 1000) / 5;
    const long identifiable = (static_cast<long>(T) - 21) / 3;
    const long cap = std::max(1L, std::min(fifth, identifiable));
    return static_cast<int>(std::min<long>(delta_max, cap));
}

GrangerReport vl_granger(const TimeSeries& x, const TimeSeries& y, const Config& cfg,
                         bool fix_lag) {
    validate_pair(x, y, cfg);
    const std::size_t T = y.size();
    const int order = effective_lag_order(T, cfg.delta_max);

    GrangerReport report;
    report.variable_lag = !fix_lag;
    report.lag_order = order;

    RegressionFit restricted = lag_regress(y, {&y}, order);

    RegressionFit unrestricted;
    if (fix_lag) {
        unrestricted = lag_regress(y, {&y, &x}, order);
    } else {
        const AlignmentResult alignment = reconstruct(x, y, cfg);
        const TimeSeries feed =
            variable_lag_feed(x, std::span<const int>(alignment.raw_delays));
        unrestricted = lag_regress(y, {&y, &feed}, order);
        report.sim_value = alignment.sim_value;
    }

    report.rss_restricted = restricted.rss;
    report.rss_unrestricted = unrestricted.rss;
    report.rank_deficient = restricted.rank_deficient || unrestricted.rank_deficient;
    report.bic0 = bic_restricted(restricted.rss, T, order);
    report.bic1 = bic_unrestricted(unrestricted.rss, T, order);
    report.bic_ratio = bic_diff_ratio(report.bic0, report.bic1);
    report.f_pvalue = f_test(restricted.rss, unrestricted.rss, T, order + 1, 2 * order + 1);

    // A perfect restricted fit leaves nothing for x to explain; "perfect"
    // allows for rounding noise relative to the target's energy.
    double target_energy = 0.0;
    for (std::size_t t = static_cast<std::size_t>(order); t < T; ++t) target_energy += y[t] * y[t];
    if (restricted.rss <= 1e-13 * (1.0 + target_energy)) {
        report.cause = false;
        return report;
    }
    if (cfg.granger_criterion == GrangerCriterion::f_test) {
        report.cause = report.f_pvalue <= cfg.alpha;
    } else {
        report.cause = report.bic_ratio >= cfg.gamma;
    }
    if (!fix_lag && cfg.sim_gate) report.cause = report.cause && report.sim_value >= cfg.sigma;
    return report;
}

}  // namespace vlc
