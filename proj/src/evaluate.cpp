#include "vlc/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vlc/granger.hpp"
#include "vlc/tentropy.hpp"

namespace vlc {

Metrics score(const std::vector<bool>& predicted, const std::vector<bool>& truth) {
    if (predicted.size() != truth.size())
        throw error(errc::length_mismatch, "prediction and truth counts differ");
    if (predicted.empty()) throw error(errc::bad_argument, "nothing to score");

    Metrics m;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (truth[i] && predicted[i]) ++m.counts.tp;
        else if (truth[i] && !predicted[i]) ++m.counts.fn;
        else if (!truth[i] && predicted[i]) ++m.counts.fp;
        else ++m.counts.tn;
    }
    const auto total = static_cast<double>(predicted.size());
    m.accuracy = static_cast<double>(m.counts.tp + m.counts.tn) / total;

    const auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(den);
    };
    m.tpr = ratio(m.counts.tp, m.counts.tp + m.counts.fn);
    m.fpr = ratio(m.counts.fp, m.counts.fp + m.counts.tn);
    m.precision = ratio(m.counts.tp, m.counts.tp + m.counts.fp);
    m.recall = m.tpr;
    if (m.precision && m.recall && (*m.precision + *m.recall) > 0.0)
        m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
    return m;
}

RocResult roc_auc(const std::vector<double>& scores, const std::vector<bool>& truth) {
    if (scores.size() != truth.size())
        throw error(errc::length_mismatch, "score and truth counts differ");
    const std::size_t positives = static_cast<std::size_t>(
        std::count(truth.begin(), truth.end(), true));
    const std::size_t negatives = truth.size() - positives;
    if (positives == 0 || negatives == 0)
        throw error(errc::single_class, "ROC needs both classes present");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&scores](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocResult out;
    out.points.push_back({0.0, 0.0});
    std::size_t tp = 0, fp = 0;
    double auc = 0.0;
    double prev_fpr = 0.0, prev_tpr = 0.0;

    std::size_t i = 0;
    while (i < order.size()) {
        // Consume the whole tie group at once so ties earn half credit.
        const double s = scores[order[i]];
        while (i < order.size() && scores[order[i]] == s) {
            if (truth[order[i]]) ++tp;
            else ++fp;
            ++i;
        }
        const double fpr = static_cast<double>(fp) / static_cast<double>(negatives);
        const double tpr = static_cast<double>(tp) / static_cast<double>(positives);
        auc += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
        out.points.push_back({fpr, tpr});
        prev_fpr = fpr;
        prev_tpr = tpr;
    }
    out.auc = auc;
    return out;
}

const char* bench_method_name(BenchMethod method) {
    switch (method) {
        case BenchMethod::vl_granger: return "vlg";
        case BenchMethod::granger: return "g";
        case BenchMethod::vl_transfer_entropy: return "vlte";
        case BenchMethod::transfer_entropy: return "te";
    }
    return "?";
}

std::optional<BenchMethod> bench_method_from_name(const std::string& name) {
    if (name == "vlg") return BenchMethod::vl_granger;
    if (name == "g") return BenchMethod::granger;
    if (name == "vlte") return BenchMethod::vl_transfer_entropy;
    if (name == "te") return BenchMethod::transfer_entropy;
    return std::nullopt;
}

BenchDecision bench_decide(BenchMethod method, const TimeSeries& x, const TimeSeries& y,
                           const Config& cfg) {
    BenchDecision out;
    switch (method) {
        case BenchMethod::vl_granger:
        case BenchMethod::granger: {
            const bool fixed = method == BenchMethod::granger;
            const GrangerReport report = vl_granger(x, y, cfg, fixed);
            out.predicted = report.cause;
            out.decision_score = report.bic_ratio;
            break;
        }
        case BenchMethod::vl_transfer_entropy:
        case BenchMethod::transfer_entropy: {
            const bool fixed = method == BenchMethod::transfer_entropy;
            const TEReport report = vl_transfer_entropy(x, y, cfg, fixed);
            out.predicted = report.cause;
            out.decision_score = std::isnan(report.ratio) ? 0.0 : report.ratio;
            break;
        }
    }
    return out;
}

std::vector<SweepRow> delta_max_sweep(const std::vector<LabeledPair>& suite, const Config& cfg,
                                      const std::vector<double>& fractions, BenchMethod method) {
    if (suite.empty()) throw error(errc::bad_argument, "empty benchmark suite");
    std::vector<SweepRow> rows;
    for (double fraction : fractions) {
        std::vector<bool> predicted;
        std::vector<bool> truth;
        int used_delta = 0;
        for (const LabeledPair& pair : suite) {
            Config local = cfg;
            local.delta_max =
                std::max(1, static_cast<int>(fraction * static_cast<double>(pair.x.size())));
            used_delta = local.delta_max;
            predicted.push_back(bench_decide(method, pair.x, pair.y, local).predicted);
            truth.push_back(pair.causal);
        }
        rows.push_back({fraction, used_delta, score(predicted, truth).accuracy});
    }
    return rows;
}

}  // namespace vlc
