#include "doctest.h"

#include <cmath>
#include <vector>

#include "crl/error.hpp"
#include "crl/metrics.hpp"
#include "crl/rng.hpp"
#include "support/oracles.hpp"

using namespace crl;

TEST_CASE("confusion_matrix: standard orientation") {
    const std::vector<std::uint8_t> y_true{0, 0, 1, 1};
    const std::vector<std::uint8_t> y_pred{0, 1, 0, 1};
    const auto cm = confusion_matrix(y_true, y_pred);
    CHECK(cm.tn == 1);
    CHECK(cm.fp == 1);
    CHECK(cm.fn == 1);
    CHECK(cm.tp == 1);
    CHECK(cm.total() == 4);
    CHECK(cm.actual_negatives() == 2);
    CHECK(cm.actual_positives() == 2);
}

TEST_CASE("confusion_matrix: perfect predictions have empty off-diagonal") {
    const std::vector<std::uint8_t> y{0, 1, 1, 0, 1};
    const auto cm = confusion_matrix(y, y);
    CHECK(cm.fp == 0);
    CHECK(cm.fn == 0);
    CHECK(cm.tn == 2);
    CHECK(cm.tp == 3);
}

TEST_CASE("confusion_matrix: error contracts") {
    const std::vector<std::uint8_t> a{0, 1};
    const std::vector<std::uint8_t> b{0};
    CHECK_THROWS_AS(confusion_matrix(a, b), Error);

    const std::vector<std::uint8_t> bad{0, 2};
    try {
        confusion_matrix(bad, a);
        FAIL("expected NonBinaryLabels");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonBinaryLabels);
    }
}

TEST_CASE("classification_metrics: hand-computed two-thirds case") {
    // tn=2 fp=1 / fn=1 tp=2
    const auto m = classification_metrics({2, 1, 1, 2});
    CHECK(m.accuracy == doctest::Approx(2.0 / 3.0));
    CHECK(m.no_risk.precision == doctest::Approx(2.0 / 3.0));
    CHECK(m.risk.precision == doctest::Approx(2.0 / 3.0));
    CHECK(m.weighted_precision == doctest::Approx(2.0 / 3.0));
    CHECK(m.risk.recall == doctest::Approx(2.0 / 3.0));
    CHECK(m.no_risk.support == 3);
    CHECK(m.risk.support == 3);
    CHECK_FALSE(m.any_undefined);
}

TEST_CASE("classification_metrics: asymmetric hand case") {
    // tn=50 fp=10 / fn=5 tp=35
    const auto m = classification_metrics({50, 10, 5, 35});
    CHECK(m.accuracy == doctest::Approx(85.0 / 100.0));
    // class 1 as positive
    CHECK(m.risk.precision == doctest::Approx(35.0 / 45.0));
    CHECK(m.risk.recall == doctest::Approx(35.0 / 40.0));
    CHECK(m.risk.specificity == doctest::Approx(50.0 / 60.0));
    const double p1 = 35.0 / 45.0, r1 = 35.0 / 40.0;
    CHECK(m.risk.f1 == doctest::Approx(2 * p1 * r1 / (p1 + r1)));
    // class 0 as positive
    CHECK(m.no_risk.precision == doctest::Approx(50.0 / 55.0));
    CHECK(m.no_risk.recall == doctest::Approx(50.0 / 60.0));
    CHECK(m.no_risk.specificity == doctest::Approx(35.0 / 40.0));
    // weighted by supports 60 and 40
    const double p0 = 50.0 / 55.0;
    CHECK(m.weighted_precision == doctest::Approx((60 * p0 + 40 * p1) / 100.0));
    CHECK(m.weighted_recall == doctest::Approx(m.accuracy));
}

TEST_CASE("classification_metrics: perfect matrix scores 1.0 everywhere") {
    const auto m = classification_metrics({5, 0, 0, 5});
    CHECK(m.accuracy == 1.0);
    CHECK(m.no_risk.precision == 1.0);
    CHECK(m.no_risk.recall == 1.0);
    CHECK(m.no_risk.specificity == 1.0);
    CHECK(m.no_risk.f1 == 1.0);
    CHECK(m.risk.f1 == 1.0);
    CHECK(m.weighted_precision == 1.0);
    CHECK(m.weighted_recall == 1.0);
    CHECK(m.weighted_specificity == 1.0);
    CHECK(m.weighted_f1 == 1.0);
}

TEST_CASE("classification_metrics: 0/0 ratios report zero and raise the flag") {
    // nothing predicted positive and no actual positives
    const auto m = classification_metrics({4, 0, 0, 0});
    CHECK(m.risk.precision == 0.0);
    CHECK(m.risk.recall == 0.0);
    CHECK(m.risk.f1 == 0.0);
    CHECK(m.risk.undefined);
    CHECK(m.any_undefined);
    CHECK(m.accuracy == 1.0);

    CHECK_THROWS_AS(classification_metrics({0, 0, 0, 0}), Error);
}

TEST_CASE("classification_metrics: scale-free in the counts") {
    const ConfusionMatrix base{13, 7, 4, 26};
    const ConfusionMatrix scaled{13 * 9, 7 * 9, 4 * 9, 26 * 9};
    const auto a = classification_metrics(base);
    const auto b = classification_metrics(scaled);
    CHECK(a.accuracy == doctest::Approx(b.accuracy).epsilon(1e-12));
    CHECK(a.weighted_precision == doctest::Approx(b.weighted_precision).epsilon(1e-12));
    CHECK(a.weighted_f1 == doctest::Approx(b.weighted_f1).epsilon(1e-12));
    CHECK(a.risk.specificity == doctest::Approx(b.risk.specificity).epsilon(1e-12));
}

TEST_CASE("weighted recall equals accuracy on 1000 random matrices") {
    Rng rng(97);
    for (int trial = 0; trial < 1000; ++trial) {
        ConfusionMatrix cm{rng.below(10000), rng.below(10000), rng.below(10000),
                           rng.below(10000)};
        if (cm.total() == 0) cm.tp = 1;
        const auto m = classification_metrics(cm);
        CHECK(std::fabs(m.weighted_recall - m.accuracy) <= 1e-12);
    }
}

TEST_CASE("roc_curve: perfect separation, ties, and a hand-worked case") {
    const std::vector<std::uint8_t> y{0, 0, 1, 1};

    SUBCASE("separable scores") {
        const std::vector<double> s{0.1, 0.2, 0.7, 0.9};
        const auto roc = roc_curve(y, s);
        CHECK(roc.auc == doctest::Approx(1.0));
    }

    SUBCASE("all scores equal collapse to the diagonal") {
        const std::vector<double> s{0.4, 0.4, 0.4, 0.4};
        const auto roc = roc_curve(y, s);
        CHECK(roc.auc == doctest::Approx(0.5));
        REQUIRE(roc.fpr.size() == 2); // (0,0) then (1,1)
        CHECK(roc.fpr.front() == 0.0);
        CHECK(roc.tpr.front() == 0.0);
        CHECK(roc.fpr.back() == 1.0);
        CHECK(roc.tpr.back() == 1.0);
    }

    SUBCASE("three of four pairs ordered") {
        const std::vector<double> s{0.1, 0.8, 0.4, 0.9};
        const auto roc = roc_curve(y, s);
        CHECK(roc.auc == doctest::Approx(0.75));
    }
}

TEST_CASE("roc_curve: endpoints and monotonicity always hold") {
    Rng rng(55);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng.below(49);
        std::vector<std::uint8_t> y(n);
        std::vector<double> s(n);
        bool pos = false, neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = rng.bernoulli(0.5) ? 1 : 0;
            (y[i] == 1 ? pos : neg) = true;
            // quantized scores force ties regularly
            s[i] = rng.bernoulli(0.5) ? rng.uniform01()
                                      : static_cast<double>(rng.below(5)) / 4.0;
        }
        if (!pos || !neg) continue;
        const auto roc = roc_curve(y, s);
        REQUIRE(roc.fpr.size() == roc.tpr.size());
        CHECK(roc.fpr.front() == 0.0);
        CHECK(roc.tpr.front() == 0.0);
        CHECK(roc.fpr.back() == 1.0);
        CHECK(roc.tpr.back() == 1.0);
        for (std::size_t i = 1; i < roc.fpr.size(); ++i) {
            CHECK(roc.fpr[i] >= roc.fpr[i - 1]);
            CHECK(roc.tpr[i] >= roc.tpr[i - 1]);
        }
        CHECK(roc.auc >= 0.0);
        CHECK(roc.auc <= 1.0);
    }
}

TEST_CASE("roc_curve AUC matches the pair-ordering oracle (1000 trials)") {
    Rng rng(101);
    int tested = 0;
    while (tested < 1000) {
        const std::size_t n = 2 + rng.below(49);
        std::vector<std::uint8_t> y(n);
        std::vector<double> s(n);
        bool pos = false, neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = rng.bernoulli(0.4) ? 1 : 0;
            (y[i] == 1 ? pos : neg) = true;
            s[i] = rng.bernoulli(0.3) ? static_cast<double>(rng.below(4)) / 3.0
                                      : rng.uniform01();
        }
        if (!pos || !neg) continue;
        ++tested;
        const auto roc = roc_curve(y, s);
        const double expect = oracles::pair_ordering_auc(y, s);
        CHECK(std::fabs(roc.auc - expect) < 1e-10);
    }
}

TEST_CASE("roc_curve: AUC invariant under strictly increasing transforms") {
    Rng rng(202);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 4 + rng.below(40);
        std::vector<std::uint8_t> y(n);
        std::vector<double> s(n), warped(n);
        bool pos = false, neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = rng.bernoulli(0.5) ? 1 : 0;
            (y[i] == 1 ? pos : neg) = true;
            s[i] = rng.uniform(-4, 4);
            warped[i] = std::exp(0.5 * s[i]) + 3.0; // strictly increasing
        }
        if (!pos || !neg) continue;
        CHECK(roc_curve(y, s).auc == doctest::Approx(roc_curve(y, warped).auc).epsilon(1e-12));
    }
}

TEST_CASE("roc_curve: single-class input is an error") {
    const std::vector<std::uint8_t> ones{1, 1, 1};
    const std::vector<double> s{0.1, 0.5, 0.9};
    try {
        roc_curve(ones, s);
        FAIL("expected OneClassOnly");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OneClassOnly);
    }
}

TEST_CASE("hard_label_auc: (TPR + TNR) / 2") {
    CHECK(hard_label_auc({5, 0, 0, 5}) == doctest::Approx(1.0));
    CHECK(hard_label_auc({0, 10, 10, 0}) == doctest::Approx(0.0));
    // tn=3 fp=1 fn=1 tp=1 -> (1/2 + 3/4)/2 = 0.625
    CHECK(hard_label_auc({3, 1, 1, 1}) == doctest::Approx(0.625));
    CHECK_THROWS_AS(hard_label_auc({3, 1, 0, 0}), Error);
}

TEST_CASE("hard_label_auc equals roc_curve on the hard labels") {
    Rng rng(303);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 4 + rng.below(60);
        std::vector<std::uint8_t> y(n), pred(n);
        bool pos = false, neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = rng.bernoulli(0.5) ? 1 : 0;
            pred[i] = rng.bernoulli(0.5) ? 1 : 0;
            (y[i] == 1 ? pos : neg) = true;
        }
        if (!pos || !neg) continue;
        std::vector<double> as_scores(pred.begin(), pred.end());
        const auto cm = confusion_matrix(y, pred);
        CHECK(std::fabs(hard_label_auc(cm) - roc_curve(y, as_scores).auc) <= 1e-12);
    }
}

TEST_CASE("r2_score: identity, zero, and the inverted case") {
    const std::vector<std::uint8_t> y{0, 0, 1, 1};
    CHECK(r2_score(y, y) == doctest::Approx(1.0));

    const std::vector<std::uint8_t> y2{0, 1, 0, 1};
    const std::vector<std::uint8_t> pred2{0, 1, 0, 0}; // SS_res 1, SS_tot 1
    CHECK(r2_score(y2, pred2) == doctest::Approx(0.0));

    const std::vector<std::uint8_t> inverted{1, 1, 0, 0}; // SS_res 4, SS_tot 1
    CHECK(r2_score(y, inverted) == doctest::Approx(-3.0));
}

TEST_CASE("r2_score: degenerate target is an error") {
    const std::vector<std::uint8_t> flat{1, 1, 1};
    try {
        r2_score(flat, flat);
        FAIL("expected ZeroVariance");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroVariance);
    }
}
