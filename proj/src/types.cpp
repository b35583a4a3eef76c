#include "vlc/types.hpp"

#include <cmath>

namespace vlc {

const char* errc_name(errc code) {
    switch (code) {
        case errc::length_mismatch: return "LengthMismatch";
        case errc::non_finite: return "NonFinite";
        case errc::bad_delta_max: return "BadDeltaMax";
        case errc::window_infeasible: return "WindowInfeasible";
        case errc::degenerate_series: return "DegenerateSeries";
        case errc::too_short: return "TooShort";
        case errc::degenerate_dof: return "DegenerateDof";
        case errc::bad_interval: return "BadInterval";
        case errc::unknown_member: return "UnknownMember";
        case errc::single_class: return "SingleClass";
        case errc::bad_argument: return "BadArgument";
    }
    return "UnknownError";
}

const char* verdict_name(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::true_variable: return "TRUE-VARIABLE";
        case VerdictKind::true_fixed: return "TRUE-FIXED";
        case VerdictKind::none: return "NONE";
    }
    return "NONE";
}

const char* method_name(Method method) {
    return method == Method::granger ? "GRANGER" : "TRANSFER_ENTROPY";
}

bool TimeSeries::all_finite() const noexcept {
    for (double v : values_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

bool LagPath::valid() const noexcept {
    const auto n = static_cast<long>(delays.size());
    for (long t = 0; t < n; ++t) {
        const long i = t - delays[static_cast<std::size_t>(t)];
        if (i < 0 || i >= static_cast<long>(source_length)) return false;
    }
    return true;
}

void Config::validate() const {
    if (delta_max < 1) throw error(errc::bad_delta_max, "delta_max must be >= 1");
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw error(errc::bad_argument, "gamma must lie in [0,1]");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw error(errc::bad_argument, "alpha must lie in (0,1)");
    if (!(sigma > 0.0 && sigma <= 1.0))
        throw error(errc::bad_argument, "sigma must lie in (0,1]");
    if (te_k < 1 || te_l < 1) throw error(errc::bad_argument, "te history lengths must be >= 1");
    if (nboot < 0) throw error(errc::bad_argument, "nboot must be >= 0");
}

void validate_pair(const TimeSeries& x, const TimeSeries& y, const Config& cfg) {
    cfg.validate();
    if (x.size() != y.size())
        throw error(errc::length_mismatch,
                    "series lengths differ (" + std::to_string(x.size()) + " vs " +
                        std::to_string(y.size()) + ")");
    if (x.size() < 2) throw error(errc::too_short, "series must hold at least 2 observations");
    if (!x.all_finite() || !y.all_finite())
        throw error(errc::non_finite, "series contain NaN or infinite values");
    if (static_cast<std::size_t>(cfg.delta_max) >= x.size())
        throw error(errc::bad_delta_max, "delta_max must be smaller than the series length");
}

}  // namespace vlc
