#include "vlc/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace vlc {

VerdictKind verdict_from(bool fixed_cause, bool variable_cause, bool vl_flag) {
    if (fixed_cause && variable_cause)
        return vl_flag ? VerdictKind::true_variable : VerdictKind::true_fixed;
    if (fixed_cause) return VerdictKind::true_fixed;
    if (variable_cause) return VerdictKind::true_variable;
    return VerdictKind::none;
}

CausalVerdict time_lag_test(const TimeSeries& x, const TimeSeries& y, const Config& cfg,
                            Method method) {
    validate_pair(x, y, cfg);
    CausalVerdict verdict;
    verdict.method = method;

    if (method == Method::granger) {
        GrangerReport fixed = vl_granger(x, y, cfg, true);
        GrangerReport variable = vl_granger(x, y, cfg, false);
        verdict.vl_flag =
            variable.bic_ratio > fixed.bic_ratio && variable.bic_ratio > cfg.gamma;
        verdict.kind = verdict_from(fixed.cause, variable.cause, verdict.vl_flag);
        verdict.fixed_granger = std::move(fixed);
        verdict.variable_granger = std::move(variable);
    } else {
        TEReport fixed = vl_transfer_entropy(x, y, cfg, true);
        TEReport variable = vl_transfer_entropy(x, y, cfg, false);
        // NaN ratios compare false, so an undefined side never raises the flag.
        verdict.vl_flag = fixed.ratio < variable.ratio;
        verdict.kind = verdict_from(fixed.cause, variable.cause, verdict.vl_flag);
        verdict.fixed_te = std::move(fixed);
        verdict.variable_te = std::move(variable);
    }
    return verdict;
}

void GroupData::validate() const {
    if (members.size() < 2) throw error(errc::bad_argument, "group needs at least 2 members");
    const std::size_t T = members.front().second.size();
    for (const auto& [name, series] : members) {
        if (series.size() != T)
            throw error(errc::length_mismatch, "group member '" + name + "' has a different length");
    }
}

const TimeSeries& GroupData::member(const std::string& name) const {
    for (const auto& [member_name, series] : members) {
        if (member_name == name) return series;
    }
    throw error(errc::unknown_member, "no group member named '" + name + "'");
}

TimeSeries aggregate(const GroupData& group, const std::vector<std::string>& subset) {
    if (subset.empty()) throw error(errc::bad_argument, "empty aggregation subset");
    group.validate();

    const std::size_t T = group.members.front().second.size();
    std::vector<double> mean(T, 0.0);
    for (const std::string& name : subset) {
        const TimeSeries& series = group.member(name);
        for (std::size_t t = 0; t < T; ++t) mean[t] += series[t];
    }
    const double inv = 1.0 / static_cast<double>(subset.size());
    for (double& v : mean) v *= inv;
    return TimeSeries(std::move(mean));
}

bool epsilon_converged(const TimeSeries& q, const TimeSeries& u, double eps, std::size_t t0,
                       std::size_t t1, const std::function<double(double, double)>& dist) {
    if (!(eps > 0.0 && eps <= 0.5))
        throw error(errc::bad_argument, "eps must lie in (0, 1/2]");
    if (q.size() != u.size()) throw error(errc::length_mismatch, "series lengths differ");
    if (t0 > t1 || t1 >= q.size()) throw error(errc::bad_interval, "window out of range");
    for (std::size_t t = t0; t <= t1; ++t) {
        if (dist(q[t], u[t]) > eps) return false;
    }
    return true;
}

bool epsilon_converged(const TimeSeries& q, const TimeSeries& u, double eps, std::size_t t0,
                       std::size_t t1, double scale) {
    if (!(scale > 0.0)) throw error(errc::bad_argument, "scale must be positive");
    return epsilon_converged(q, u, eps, t0, t1, [scale](double a, double b) {
        return std::min(1.0, std::abs(a - b) / scale);
    });
}

std::vector<GraphEdge> GraphResult::edges() const {
    std::vector<GraphEdge> present;
    std::copy_if(evaluated.begin(), evaluated.end(), std::back_inserter(present),
                 [](const GraphEdge& e) { return e.kind != VerdictKind::none; });
    return present;
}

GraphResult infer_causal_graph(const GroupData& group, const Config& cfg, Method method) {
    group.validate();
    GraphResult result;
    for (const auto& [from_name, from_series] : group.members) {
        for (const auto& [to_name, to_series] : group.members) {
            if (from_name == to_name) continue;
            const CausalVerdict verdict = time_lag_test(from_series, to_series, cfg, method);
            result.evaluated.push_back({from_name, to_name, verdict.kind});
        }
    }
    return result;
}

}  // namespace vlc
