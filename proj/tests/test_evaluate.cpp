#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "vlc/evaluate.hpp"
#include "vlc/rng.hpp"

using namespace vlc;

TEST_CASE("perfect predictions score perfectly") {
    std::vector<bool> truth(20, false);
    std::fill(truth.begin(), truth.begin() + 10, true);
    const Metrics m = score(truth, truth);
    CHECK(m.accuracy == 1.0);
    CHECK(*m.tpr == 1.0);
    CHECK(*m.fpr == 0.0);
    CHECK(*m.f1 == 1.0);
}

TEST_CASE("confusion metrics match hand arithmetic") {
    // tp=9 fn=1 fp=2 tn=13
    std::vector<bool> truth, predicted;
    for (int i = 0; i < 9; ++i) { truth.push_back(true); predicted.push_back(true); }
    truth.push_back(true); predicted.push_back(false);
    for (int i = 0; i < 2; ++i) { truth.push_back(false); predicted.push_back(true); }
    for (int i = 0; i < 13; ++i) { truth.push_back(false); predicted.push_back(false); }

    const Metrics m = score(predicted, truth);
    CHECK(m.counts.tp == 9);
    CHECK(m.counts.fn == 1);
    CHECK(m.counts.fp == 2);
    CHECK(m.counts.tn == 13);
    CHECK(*m.tpr == doctest::Approx(0.9));
    CHECK(*m.fpr == doctest::Approx(2.0 / 15.0));
    CHECK(*m.precision == doctest::Approx(9.0 / 11.0));
    CHECK(*m.f1 == doctest::Approx(6.0 / 7.0));
}

TEST_CASE("empty denominators surface as missing metrics") {
    const std::vector<bool> truth{true, true, false};
    const std::vector<bool> predicted{false, false, false};
    const Metrics m = score(predicted, truth);
    CHECK_FALSE(m.precision.has_value());  // no predicted positives
    CHECK(m.tpr.has_value());
    CHECK(*m.tpr == 0.0);
}

TEST_CASE("scores are invariant to instance order") {
    vlc::RngStream rng(1, "perm");
    std::vector<bool> truth, predicted;
    for (int i = 0; i < 40; ++i) {
        truth.push_back(rng.next_below(2) == 1);
        predicted.push_back(rng.next_below(2) == 1);
    }
    const Metrics base = score(predicted, truth);

    std::vector<std::size_t> order(truth.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i-- > 1;) std::swap(order[i], order[rng.next_below(i + 1)]);
    std::vector<bool> truth_p, predicted_p;
    for (std::size_t idx : order) {
        truth_p.push_back(truth[idx]);
        predicted_p.push_back(predicted[idx]);
    }
    const Metrics shuffled = score(predicted_p, truth_p);
    CHECK(base.accuracy == shuffled.accuracy);
    CHECK(base.counts.tp == shuffled.counts.tp);
}

TEST_CASE("roc handles separation, ties, and the worked example") {
    CHECK(roc_auc({0.9, 0.8, 0.2, 0.1}, {true, true, false, false}).auc == doctest::Approx(1.0));
    CHECK(roc_auc({0.5, 0.5, 0.5, 0.5}, {true, true, false, false}).auc == doctest::Approx(0.5));
    CHECK(roc_auc({0.9, 0.8, 0.7, 0.85}, {true, true, false, false}).auc ==
          doctest::Approx(0.75));
}

TEST_CASE("roc area equals the rank statistic on random scores") {
    vlc::RngStream rng(2, "roc");
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> scores;
        std::vector<bool> truth;
        const std::size_t n = 10 + rng.next_below(30);
        for (std::size_t i = 0; i < n; ++i) {
            // coarse grid forces plenty of ties
            scores.push_back(static_cast<double>(rng.next_below(6)) / 5.0);
            truth.push_back(rng.next_below(2) == 1);
        }
        if (std::count(truth.begin(), truth.end(), true) == 0 ||
            std::count(truth.begin(), truth.end(), false) == 0)
            continue;
        const RocResult mine = roc_auc(scores, truth);
        CHECK(mine.auc == doctest::Approx(oracles::brute_auc(scores, truth)).epsilon(1e-12));

        // the curve never steps backwards
        for (std::size_t i = 1; i < mine.points.size(); ++i) {
            CHECK(mine.points[i].fpr >= mine.points[i - 1].fpr);
            CHECK(mine.points[i].tpr >= mine.points[i - 1].tpr);
        }
    }
}

TEST_CASE("roc rejects single-class inputs") {
    CHECK_THROWS_AS(roc_auc({0.1, 0.2}, {true, true}), error);
}

TEST_CASE("delta sweep reports one accuracy per fraction") {
    const auto suite = gen_benchmark_suite(11);
    std::vector<LabeledPair> small(suite.begin(), suite.begin() + 10);
    Config cfg;
    cfg.delta_max = 1;  // overridden per fraction
    cfg.nboot = 0;
    const auto rows = delta_max_sweep(small, cfg, {0.05, 0.1}, BenchMethod::granger);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].fraction == 0.05);
    CHECK(rows[0].delta_max == 10);
    CHECK(rows[1].delta_max == 20);
    for (const auto& row : rows) {
        CHECK(row.accuracy >= 0.0);
        CHECK(row.accuracy <= 1.0);
    }
}

TEST_CASE("delta sweep propagates an oversized fraction as BadDeltaMax") {
    const auto suite = gen_benchmark_suite(12);
    std::vector<LabeledPair> small(suite.begin(), suite.begin() + 4);
    Config cfg;
    cfg.delta_max = 1;
    cfg.nboot = 0;
    try {
        delta_max_sweep(small, cfg, {1.0}, BenchMethod::granger);
        FAIL("expected BadDeltaMax");
    } catch (const error& e) {
        CHECK(e.code() == errc::bad_delta_max);
    }
}

TEST_CASE("bench decisions expose the continuous score") {
    PairwiseScenario s;
    s.seed = 31337;
    const auto [x, y] = gen_pairwise(s);
    Config cfg;
    cfg.delta_max = 40;
    cfg.nboot = 0;
    const BenchDecision vlg = bench_decide(BenchMethod::vl_granger, x, y, cfg);
    CHECK(vlg.decision_score <= 1.0);
    const BenchDecision vlte = bench_decide(BenchMethod::vl_transfer_entropy, x, y, cfg);
    CHECK(std::isfinite(vlte.decision_score));
    CHECK(vlte.decision_score >= 0.0);
}

TEST_CASE("method names round-trip") {
    for (BenchMethod m : {BenchMethod::vl_granger, BenchMethod::granger,
                          BenchMethod::vl_transfer_entropy, BenchMethod::transfer_entropy}) {
        const auto parsed = bench_method_from_name(bench_method_name(m));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == m);
    }
    CHECK_FALSE(bench_method_from_name("nope").has_value());
}
