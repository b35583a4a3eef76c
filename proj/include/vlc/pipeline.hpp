#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vlc/granger.hpp"
#include "vlc/tentropy.hpp"
#include "vlc/types.hpp"

namespace vlc {

struct CausalVerdict {
    VerdictKind kind = VerdictKind::none;
    Method method = Method::granger;
    bool vl_flag = false;
    std::optional<GrangerReport> fixed_granger;
    std::optional<GrangerReport> variable_granger;
    std::optional<TEReport> fixed_te;
    std::optional<TEReport> variable_te;
};

/// The four-way verdict table: both detectors firing defers to vl_flag,
/// a single detector names its own lag mode, neither yields NONE.
VerdictKind verdict_from(bool fixed_cause, bool variable_cause, bool vl_flag);

/// Runs the fixed-lag and variable-lag variants of the chosen method and
/// combines them. For Granger the vl_flag asks the variable-lag BIC ratio to
/// beat both the fixed-lag ratio and gamma; for transfer entropy it asks the
/// variable-lag TE ratio to beat the fixed-lag one.
CausalVerdict time_lag_test(const TimeSeries& x, const TimeSeries& y, const Config& cfg,
                            Method method);

struct GroupData {
    std::vector<std::pair<std::string, TimeSeries>> members;

    void validate() const;
    const TimeSeries& member(const std::string& name) const;
};

/// Element-wise mean across the named subset.
TimeSeries aggregate(const GroupData& group, const std::vector<std::string>& subset);

/// True when dist(q[t], u[t]) <= eps for every t in the inclusive window
/// [t0, t1] (0-based). The supplied metric must map into [0, 1].
bool epsilon_converged(const TimeSeries& q, const TimeSeries& u, double eps, std::size_t t0,
                       std::size_t t1, const std::function<double(double, double)>& dist);

/// Same with the default metric min(1, |a - b| / scale).
bool epsilon_converged(const TimeSeries& q, const TimeSeries& u, double eps, std::size_t t0,
                       std::size_t t1, double scale);

struct GraphEdge {
    std::string from;
    std::string to;
    VerdictKind kind = VerdictKind::none;
};

struct GraphResult {
    std::vector<GraphEdge> evaluated;  // every ordered pair, with its verdict

    /// Pairs whose verdict is not NONE.
    std::vector<GraphEdge> edges() const;
};

/// Pairwise causal graph over the group: time_lag_test on every ordered pair.
GraphResult infer_causal_graph(const GroupData& group, const Config& cfg, Method method);

}  // namespace vlc
