#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "pot/error.hpp"
#include "pot/evaluation.hpp"
#include "pot/random.hpp"

using namespace pot;

namespace {

std::vector<int> balanced_labels(std::size_t classes, std::size_t per_class) {
    std::vector<int> labels;
    for (std::size_t c = 0; c < classes; ++c)
        for (std::size_t i = 0; i < per_class; ++i) labels.push_back(static_cast<int>(c));
    return labels;
}

}  // namespace

TEST_CASE("train counts") {
    CHECK(train_count(10) == 5);
    CHECK(train_count(11) == 5);
    CHECK(train_count(2) == 1);
    CHECK(train_count(3) == 1);
    CHECK(train_count(10, 0.75) == 7);
    CHECK(train_count(4, 0.99) == 3);
    CHECK(train_count(4, 0.01) == 1);
}

TEST_CASE("splits partition every class with the requested sizes") {
    for (std::size_t s = 2; s <= 50; ++s) {
        std::vector<int> labels(s, 4);
        labels.push_back(1);
        labels.push_back(1);
        const auto plans = make_splits(labels, 3, 99);
        for (const auto& plan : plans) {
            REQUIRE(plan.classes.size() == 2);
            CHECK(plan.classes[0].label == 1);
            const auto& big = plan.classes[1];
            CHECK(big.label == 4);
            CHECK(big.train.size() == s / 2);
            CHECK(big.test.size() == s - s / 2);
            std::set<std::size_t> seen(big.train.begin(), big.train.end());
            seen.insert(big.test.begin(), big.test.end());
            CHECK(seen.size() == s);
            for (std::size_t i : seen) CHECK(labels[i] == 4);
        }
    }
}

TEST_CASE("odd class sizes put the extra video in the test side") {
    const auto labels = balanced_labels(2, 11);
    const auto plan = make_splits(labels, 1, 5).front();
    for (const auto& c : plan.classes) {
        CHECK(c.train.size() == 5);
        CHECK(c.test.size() == 6);
    }
    const auto even = make_splits(balanced_labels(2, 10), 1, 5).front();
    CHECK(even.classes[0].train.size() == 5);
    CHECK(even.classes[0].test.size() == 5);
}

TEST_CASE("splits are deterministic and trials are independent of the trial count") {
    const auto labels = balanced_labels(3, 9);
    const auto a = make_splits(labels, 5, 42);
    const auto b = make_splits(labels, 5, 42);
    const auto c = make_splits(labels, 2, 42);
    for (std::size_t t = 0; t < 5; ++t) {
        CHECK(a[t].train_indices() == b[t].train_indices());
        CHECK(a[t].seed == derive_seed(42, "split", t));
    }
    for (std::size_t t = 0; t < 2; ++t) CHECK(a[t].train_indices() == c[t].train_indices());
    CHECK(a[0].train_indices() != a[1].train_indices());
    CHECK(a[0].train_indices() != make_splits(labels, 1, 43)[0].train_indices());
}

TEST_CASE("train and test indices are disjoint and sorted") {
    const auto plan = make_splits(balanced_labels(4, 7), 1, 3).front();
    const auto train = plan.train_indices(), test = plan.test_indices();
    CHECK(std::is_sorted(train.begin(), train.end()));
    CHECK(std::is_sorted(test.begin(), test.end()));
    std::vector<std::size_t> both;
    std::set_intersection(train.begin(), train.end(), test.begin(), test.end(), std::back_inserter(both));
    CHECK(both.empty());
    CHECK(train.size() + test.size() == 28);
}

TEST_CASE("a class with a single video cannot be split") {
    const std::vector<int> labels{0, 0, 1};
    CHECK_THROWS_AS(make_splits(labels, 1, 1), InvalidArgument);
}

TEST_CASE("F1 from a confusion matrix") {
    const Confusion c{{5, 5}, {0, 10}};
    const auto s = f1_from_confusion(c);
    CHECK(s[0].precision == doctest::Approx(1.0));
    CHECK(s[0].recall == doctest::Approx(0.5));
    CHECK(s[0].f1 == doctest::Approx(2.0 / 3.0));
    CHECK(s[1].precision == doctest::Approx(10.0 / 15.0));
    CHECK(s[1].recall == doctest::Approx(1.0));
    CHECK(s[1].f1 == doctest::Approx(0.8));

    const auto id = f1_from_confusion({{3, 0}, {0, 4}});
    for (const auto& x : id) CHECK(x.f1 == 1.0);

    const auto never = f1_from_confusion({{0, 4}, {0, 4}});
    CHECK(never[0].precision == 0.0);
    CHECK(never[0].f1 == 0.0);
}

TEST_CASE("trial scoring and aggregation") {
    const std::vector<int> truth{0, 0, 1, 1, 2};
    const std::vector<int> pred{0, 1, 1, 1, 0};
    const auto t = score_trial(0, truth, pred, 3);
    CHECK(t.accuracy == doctest::Approx(0.6));
    std::size_t total = 0;
    for (const auto& row : t.confusion) total += std::accumulate(row.begin(), row.end(), std::size_t{0});
    CHECK(total == truth.size());
    CHECK(t.confusion[2][0] == 1);

    std::vector<TrialResult> trials;
    const double accs[] = {0.5, 0.7, 0.9};
    for (std::size_t i = 0; i < 3; ++i) {
        auto r = t;
        r.trial = i;
        r.accuracy = accs[i];
        trials.push_back(r);
    }
    const auto s = summarize(trials);
    CHECK(s.mean_accuracy == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(s.std_accuracy == doctest::Approx(0.2));
    CHECK(s.ci_low == doctest::Approx(0.7 - 1.96 * 0.2 / std::sqrt(3.0)));
    CHECK(s.ci_high == doctest::Approx(0.7 + 1.96 * 0.2 / std::sqrt(3.0)));
    CHECK(s.confusion[2][0] == 3);
    CHECK(s.mean_f1[1] == doctest::Approx(t.per_class[1].f1));
}

TEST_CASE("run spread") {
    const auto r = summarize_runs({0.6, 0.8, 0.7, 0.9});
    CHECK(r.median == doctest::Approx(0.75));
    CHECK(r.mean == doctest::Approx(0.75));
    CHECK(r.ci_low < r.mean);
    CHECK(r.ci_high > r.mean);
    CHECK(summarize_runs({0.4}).median == 0.4);
}

TEST_CASE("one-hot features classify perfectly") {
    const std::size_t classes = 4;
    const auto labels = balanced_labels(classes, 6);
    Matrix x(labels.size(), classes, 0.0);
    for (std::size_t i = 0; i < labels.size(); ++i) x(i, static_cast<std::size_t>(labels[i])) = 1.0;
    const auto plans = make_splits(labels, 4, 8);
    const auto s = run_experiment(std::span(&x, 1), labels, classes, plans, {});
    CHECK(s.mean_accuracy == 1.0);
    for (double f : s.mean_f1) CHECK(f == 1.0);
    REQUIRE(s.trials.size() == 4);
    for (const auto& t : s.trials) CHECK(t.gammas.size() == 1);
}

TEST_CASE("summary mean is the mean of trial accuracies") {
    Rng rng(derive_seed(12, "evaluation-test"));
    const auto labels = balanced_labels(3, 8);
    Matrix x(labels.size(), 5);
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t d = 0; d < 5; ++d) x(i, d) = uniform01(rng) + (d == static_cast<std::size_t>(labels[i]) ? 0.3 : 0.0);
    const auto plans = make_splits(labels, 6, 2);
    const auto s = run_experiment(std::span(&x, 1), labels, 3, plans, {});
    double mean = 0.0;
    for (const auto& t : s.trials) mean += t.accuracy;
    mean /= static_cast<double>(s.trials.size());
    CHECK(std::abs(s.mean_accuracy - mean) <= 1e-12);
    std::size_t total = 0;
    for (const auto& row : s.confusion) total += std::accumulate(row.begin(), row.end(), std::size_t{0});
    CHECK(total == 6 * plans[0].test_indices().size());

    SvmExperimentConfig par;
    par.jobs = 3;
    const auto p = run_experiment(std::span(&x, 1), labels, 3, plans, par);
    CHECK(p.mean_accuracy == s.mean_accuracy);
}

TEST_CASE("shuffled labels give chance accuracy") {
    const std::size_t classes = 10;
    auto labels = balanced_labels(classes, 10);
    Rng rng(derive_seed(13, "evaluation-test"));
    Matrix x(labels.size(), 8);
    for (double& v : x.data()) v = uniform01(rng);
    const auto plans = make_splits(labels, 20, 21);
    const auto s = run_experiment(std::span(&x, 1), labels, classes, plans, {});
    CHECK(s.mean_accuracy > 0.02);
    CHECK(s.mean_accuracy < 0.22);
    // The interval is around the observed mean; it should not exclude chance by much.
    CHECK(s.ci_low < 0.1 + 0.05);
    CHECK(s.ci_high > 0.1 - 0.05);
}

TEST_CASE("nearest neighbor on a distance matrix") {
    const auto labels = balanced_labels(2, 4);
    Matrix d(8, 8, 10.0);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j)
            if (labels[i] == labels[j]) d(i, j) = i == j ? 0.0 : 1.0;
    const auto plans = make_splits(labels, 3, 4);
    const auto s = run_nearest_neighbor(d, labels, 2, plans);
    CHECK(s.mean_accuracy == 1.0);
    for (const auto& t : s.trials) CHECK(t.gammas.empty());
}

TEST_CASE("labels outside the class range are rejected") {
    const std::vector<int> labels{0, 0, 3, 3};
    Matrix x(4, 2, 0.5);
    const auto plans = make_splits(labels, 1, 1);
    CHECK_THROWS_AS(run_experiment(std::span(&x, 1), labels, 2, plans, {}), InvalidArgument);
}
