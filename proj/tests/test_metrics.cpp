#include "ppbench/metrics.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ppbench;

TEST_CASE("compute_metrics on the worked examples") {
    const MetricSet perfect = compute_metrics({5, 0, 0, 45});
    CHECK(perfect.precision == 1.0);
    CHECK(perfect.recall == 1.0);
    CHECK(perfect.f_score == 1.0);
    CHECK(perfect.accuracy == 1.0);
    CHECK(perfect.degenerate_flags.empty());

    // hand evaluation: P=3/4, R=3/5, F=2*0.75*0.6/1.35, A=47/50
    const MetricSet hand = compute_metrics({3, 1, 2, 44});
    CHECK(hand.precision == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(hand.recall == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(hand.f_score == doctest::Approx(2.0 * 0.75 * 0.6 / 1.35).epsilon(1e-12));
    CHECK(hand.f_score == doctest::Approx(0.6666666666666666).epsilon(1e-9));
    CHECK(hand.accuracy == doctest::Approx(0.94).epsilon(1e-12));
}

TEST_CASE("zero denominators flag and report zero instead of throwing") {
    const MetricSet m = compute_metrics({0, 0, 0, 50});
    CHECK(m.precision == 0.0);
    CHECK(m.recall == 0.0);
    CHECK(m.f_score == 0.0);
    CHECK(m.accuracy == 1.0);
    CHECK(m.degenerate_flags.count(MetricFlag::PrecisionUndefined) == 1);
    CHECK(m.degenerate_flags.count(MetricFlag::RecallUndefined) == 1);
    CHECK(m.degenerate_flags.count(MetricFlag::FUndefined) == 1);

    CHECK_THROWS_AS(compute_metrics({0, 0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(compute_metrics({-1, 0, 0, 5}), std::invalid_argument);
}

TEST_CASE("f-score is zero whenever precision or recall is zero, and bounded by the max") {
    std::mt19937 gen(7);
    std::uniform_int_distribution<long long> d(0, 60);
    for (int i = 0; i < 500; ++i) {
        const ConfusionCounts c{d(gen), d(gen), d(gen), d(gen)};
        if (c.total() == 0) continue;
        const MetricSet m = compute_metrics(c);
        if (m.precision == 0.0 || m.recall == 0.0) CHECK(m.f_score == 0.0);
        CHECK(m.f_score <= std::max(m.precision, m.recall) + 1e-15);
        CHECK(m.precision <= 1.0);
        CHECK(m.recall <= 1.0);
        CHECK(m.accuracy <= 1.0);
    }
}

TEST_CASE("trace accuracy is monotone in tn with other counts fixed") {
    for (long long tn = 0; tn < 50; ++tn) {
        const double a1 = compute_metrics({2, 3, 4, tn}).accuracy;
        const double a2 = compute_metrics({2, 3, 4, tn + 1}).accuracy;
        CHECK(a2 >= a1);
    }
}

TEST_CASE("score_classification identity, degenerate predictor, and truth mismatch") {
    std::map<std::string, ReqClass> truth;
    ClassificationPrediction perfect;
    for (int i = 0; i < 50; ++i) {
        const std::string id = std::to_string(i);
        const ReqClass cls = i < 20 ? ReqClass::NF : ReqClass::F;
        truth[id] = cls;
        perfect.labels[id] = cls;
    }
    CHECK(score_classification(perfect, truth) == ConfusionCounts{20, 0, 0, 30});

    ClassificationPrediction all_f;
    for (int i = 0; i < 50; ++i) all_f.labels[std::to_string(i)] = ReqClass::F;
    CHECK(score_classification(all_f, truth) == ConfusionCounts{0, 0, 20, 30});

    // unparsed ids score as predicted-F
    ClassificationPrediction partial;
    partial.labels["0"] = ReqClass::NF;
    for (int i = 1; i < 50; ++i) partial.unparsed_ids.push_back(std::to_string(i));
    CHECK(score_classification(partial, truth) == ConfusionCounts{1, 0, 19, 30});

    ClassificationPrediction stray;
    stray.labels["999"] = ReqClass::F;
    CHECK_THROWS_AS(score_classification(stray, truth), Error);
}

TEST_CASE("score_trace identity, empty prediction, and universe check") {
    std::set<std::string> universe;
    for (int i = 0; i < 40; ++i) universe.insert("3.2." + std::to_string(i));

    TracePrediction hit;
    hit.linked_ids = {"3.2.1"};
    CHECK(score_trace(hit, {"3.2.1"}, universe) == ConfusionCounts{1, 0, 0, 39});

    TracePrediction empty;
    const ConfusionCounts c = score_trace(empty, {"3.2.1", "3.2.2"}, universe);
    CHECK(c == ConfusionCounts{0, 0, 2, 38});
    const MetricSet m = compute_metrics(c);
    CHECK(m.recall == 0.0);
    CHECK(m.accuracy == doctest::Approx(0.95).epsilon(1e-12));

    TracePrediction stray;
    stray.linked_ids = {"9.9.9"};
    CHECK_THROWS_AS(score_trace(stray, {}, universe), Error);
}

TEST_CASE("randomized scorers match the brute-force oracles exactly") {
    std::mt19937 gen(99);
    std::uniform_int_distribution<int> size(1, 40);
    std::uniform_int_distribution<int> coin(0, 2);
    for (int round = 0; round < 1000; ++round) {
        // classification
        std::map<std::string, ReqClass> truth;
        ClassificationPrediction pred;
        const int n = size(gen);
        for (int i = 0; i < n; ++i) {
            const std::string id = std::to_string(i);
            truth[id] = coin(gen) == 0 ? ReqClass::F : ReqClass::NF;
            switch (coin(gen)) {
            case 0: pred.labels[id] = ReqClass::F; break;
            case 1: pred.labels[id] = ReqClass::NF; break;
            default: pred.unparsed_ids.push_back(id); break;
            }
        }
        CHECK(score_classification(pred, truth) == testoracle::classification_tally(pred, truth));

        // traceability
        std::set<std::string> universe;
        std::set<std::string> truth_links;
        TracePrediction trace;
        const int u = size(gen);
        for (int i = 0; i < u; ++i) {
            const std::string id = "4." + std::to_string(i);
            universe.insert(id);
            if (coin(gen) == 0) truth_links.insert(id);
            if (coin(gen) == 0) trace.linked_ids.insert(id);
        }
        CHECK(score_trace(trace, truth_links, universe) ==
              testoracle::trace_set_tally(trace.linked_ids, truth_links, universe));
    }
}

TEST_CASE("aggregate means per temperature and population stdev across them") {
    auto ms = [](double v) {
        MetricSet m;
        m.precision = m.recall = m.f_score = m.accuracy = v;
        return m;
    };
    const std::vector<double> grid = {0.0, 0.4, 1.0};

    // constant series -> zero stdev
    const AggregateStats flat =
        aggregate({{0.0, ms(0.8)}, {0.4, ms(0.8)}, {1.0, ms(0.8)}}, grid);
    CHECK(flat.cross_temperature_stdev.precision == 0.0);
    CHECK(flat.cross_temperature_stdev.f_score == 0.0);
    CHECK_FALSE(flat.single_temperature);

    // frozen expected value: population stdev of {0.70, 0.73, 0.76}
    const AggregateStats spread =
        aggregate({{0.0, ms(0.70)}, {0.4, ms(0.73)}, {1.0, ms(0.76)}}, grid);
    CHECK(spread.cross_temperature_stdev.precision ==
          doctest::Approx(0.024494897427831781).epsilon(1e-9));

    // repetition means feed the stdev
    const AggregateStats reps = aggregate(
        {{0.0, ms(0.6)}, {0.0, ms(0.8)}, {0.4, ms(0.7)}, {1.0, ms(0.7)}}, grid);
    CHECK(reps.per_temperature_mean.at(0.0).precision == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(reps.cross_temperature_stdev.precision == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(reps.all_runs_stdev.precision > 0.0); // secondary estimator sees the spread

    // single temperature -> stdev zero plus warning
    const AggregateStats single = aggregate({{0.4, ms(0.9)}}, grid);
    CHECK(single.single_temperature);
    CHECK(single.cross_temperature_stdev.recall == 0.0);

    CHECK_THROWS_AS(aggregate({}, grid), std::invalid_argument);
}

TEST_CASE("aggregation is permutation invariant") {
    auto ms = [](double p, double r) {
        MetricSet m;
        m.precision = p;
        m.recall = r;
        m.f_score = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
        m.accuracy = (p + r) / 2;
        return m;
    };
    const std::vector<double> grid = {0.0, 1.0};
    std::vector<std::pair<double, MetricSet>> runs = {
        {0.0, ms(0.5, 0.6)}, {1.0, ms(0.7, 0.2)}, {0.0, ms(0.9, 0.9)}, {1.0, ms(0.3, 0.8)}};
    const AggregateStats a = aggregate(runs, grid);
    std::reverse(runs.begin(), runs.end());
    const AggregateStats b = aggregate(runs, grid);
    CHECK(a.per_temperature_mean.at(0.0).precision == b.per_temperature_mean.at(0.0).precision);
    CHECK(a.cross_temperature_stdev.f_score == b.cross_temperature_stdev.f_score);
    CHECK(a.all_runs_stdev.recall == b.all_runs_stdev.recall);
}

TEST_CASE("randomized confusion matrices match the independent formulas") {
    std::mt19937 gen(2024);
    std::uniform_int_distribution<long long> d(0, 200);
    int checked = 0;
    while (checked < 1000) {
        const ConfusionCounts c{d(gen), d(gen), d(gen), d(gen)};
        if (c.total() == 0) continue;
        ++checked;
        const MetricSet m = compute_metrics(c);
        const testoracle::Metrics o = testoracle::metrics_from_counts(c.tp, c.fp, c.fn, c.tn);
        CHECK(std::abs(m.precision - o.precision) <= 1e-12);
        CHECK(std::abs(m.recall - o.recall) <= 1e-12);
        CHECK(std::abs(m.f_score - o.f_score) <= 1e-12);
        CHECK(std::abs(m.accuracy - o.accuracy) <= 1e-12);
    }
}
