#include "pot/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "pot/error.hpp"
#include "pot/parallel.hpp"
#include "pot/random.hpp"

namespace pot {
namespace {

constexpr double kZ95 = 1.96;

void mean_and_ci(std::span<const double> values, double& mean, double& sd, double& lo, double& hi) {
    mean = sd = lo = hi = 0.0;
    if (values.empty()) return;
    double sum = 0.0;
    for (double v : values) sum += v;
    mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    const double half = kZ95 * sd / std::sqrt(static_cast<double>(values.size()));
    lo = mean - half;
    hi = mean + half;
}

std::vector<int> labels_of(std::span<const int> labels, std::span<const std::size_t> idx) {
    std::vector<int> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = labels[idx[i]];
    return out;
}

void check_labels(std::span<const int> labels, std::size_t classes) {
    for (int l : labels)
        if (l < 0 || static_cast<std::size_t>(l) >= classes)
            throw InvalidArgument(fmt::format("label {} outside [0, {})", l, classes));
}

}  // namespace

std::vector<std::size_t> SplitPlan::train_indices() const {
    std::vector<std::size_t> out;
    for (const auto& c : classes) out.insert(out.end(), c.train.begin(), c.train.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> SplitPlan::test_indices() const {
    std::vector<std::size_t> out;
    for (const auto& c : classes) out.insert(out.end(), c.test.begin(), c.test.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t train_count(std::size_t size, double train_fraction) {
    if (size < 2) throw InvalidArgument(fmt::format("a class with {} video(s) cannot be split", size));
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw InvalidArgument(fmt::format("split fraction {} outside (0, 1)", train_fraction));
    const auto n = static_cast<std::size_t>(std::floor(static_cast<double>(size) * train_fraction));
    return std::clamp<std::size_t>(n, 1, size - 1);
}

std::vector<SplitPlan> make_splits(std::span<const int> labels, std::size_t trials, std::uint64_t seed,
                                   double train_fraction) {
    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);
    for (const auto& [label, idx] : members)
        if (idx.size() < 2)
            throw InvalidArgument(fmt::format("class {} has {} video(s); at least 2 are needed", label, idx.size()));

    std::vector<SplitPlan> plans(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        SplitPlan& plan = plans[t];
        plan.trial = t;
        plan.seed = derive_seed(seed, "split", t);
        Rng rng(plan.seed);
        for (const auto& [label, idx] : members) {
            std::vector<std::size_t> order = idx;
            shuffle(order.begin(), order.end(), rng);
            const std::size_t n_train = train_count(order.size(), train_fraction);
            ClassSplit split{label, {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train)},
                             {order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end()}};
            std::sort(split.train.begin(), split.train.end());
            std::sort(split.test.begin(), split.test.end());
            plan.classes.push_back(std::move(split));
        }
    }
    return plans;
}

std::vector<ClassScores> f1_from_confusion(const Confusion& confusion) {
    const std::size_t k = confusion.size();
    for (const auto& row : confusion)
        if (row.size() != k) throw InvalidArgument("confusion matrix is not square");
    std::vector<ClassScores> out(k);
    for (std::size_t c = 0; c < k; ++c) {
        double predicted = 0.0, actual = 0.0;
        for (std::size_t r = 0; r < k; ++r) predicted += static_cast<double>(confusion[r][c]);
        for (std::size_t p = 0; p < k; ++p) actual += static_cast<double>(confusion[c][p]);
        const double tp = static_cast<double>(confusion[c][c]);
        auto& s = out[c];
        s.precision = predicted > 0.0 ? tp / predicted : 0.0;
        s.recall = actual > 0.0 ? tp / actual : 0.0;
        s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    }
    return out;
}

TrialResult score_trial(std::size_t trial, std::span<const int> truth, std::span<const int> predicted,
                        std::size_t classes) {
    if (truth.size() != predicted.size()) throw InvalidArgument("truth and prediction lengths differ");
    if (truth.empty()) throw InvalidArgument("trial has no test samples");
    check_labels(truth, classes);
    check_labels(predicted, classes);
    TrialResult r;
    r.trial = trial;
    r.confusion.assign(classes, std::vector<std::size_t>(classes, 0));
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        ++r.confusion[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predicted[i])];
        if (truth[i] == predicted[i]) ++correct;
    }
    r.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
    r.per_class = f1_from_confusion(r.confusion);
    return r;
}

ExperimentSummary summarize(std::vector<TrialResult> trials) {
    ExperimentSummary s;
    s.trials = std::move(trials);
    if (s.trials.empty()) return s;
    const std::size_t k = s.trials.front().confusion.size();

    std::vector<double> acc;
    acc.reserve(s.trials.size());
    s.mean_f1.assign(k, 0.0);
    s.confusion.assign(k, std::vector<std::size_t>(k, 0));
    for (const auto& t : s.trials) {
        if (t.confusion.size() != k) throw InvalidArgument("trials disagree on the number of classes");
        acc.push_back(t.accuracy);
        for (std::size_t c = 0; c < k; ++c) {
            s.mean_f1[c] += t.per_class[c].f1;
            for (std::size_t p = 0; p < k; ++p) s.confusion[c][p] += t.confusion[c][p];
        }
    }
    for (double& f : s.mean_f1) f /= static_cast<double>(s.trials.size());
    mean_and_ci(acc, s.mean_accuracy, s.std_accuracy, s.ci_low, s.ci_high);
    return s;
}

ExperimentSummary run_experiment(std::span<const Matrix> channels, std::span<const int> labels, std::size_t classes,
                                 std::span<const SplitPlan> plans, const SvmExperimentConfig& config) {
    if (channels.empty()) throw InvalidArgument("no feature channels");
    for (const auto& ch : channels)
        if (ch.rows() != labels.size())
            throw InvalidArgument(fmt::format("channel has {} rows for {} labelled videos", ch.rows(), labels.size()));
    check_labels(labels, classes);

    std::vector<Matrix> distances;
    distances.reserve(channels.size());
    for (const auto& ch : channels) distances.push_back(pairwise_chi2(ch, choose_denominator(ch), config.jobs));

    std::vector<TrialResult> results(plans.size());
    parallel_for(plans.size(), config.jobs, [&](std::size_t p) {
        const auto train = plans[p].train_indices();
        const auto test = plans[p].test_indices();
        std::vector<double> gammas;
        for (const auto& d : distances) gammas.push_back(mean_pair_distance(d, train));

        const Matrix k_train = kernel_from_distances(distances, gammas, train, train);
        const Matrix k_test = kernel_from_distances(distances, gammas, test, train);
        SvmOptions svm = config.svm;
        svm.jobs = 1;
        const SvmModel model = train_svm(k_train, labels_of(labels, train), svm);

        std::vector<int> predicted(test.size());
        for (std::size_t i = 0; i < test.size(); ++i) predicted[i] = predict(model, k_test.row(i)).label;
        results[p] = score_trial(plans[p].trial, labels_of(labels, test), predicted, classes);
        results[p].gammas = std::move(gammas);
    });
    return summarize(std::move(results));
}

ExperimentSummary run_nearest_neighbor(const Matrix& distances, std::span<const int> labels, std::size_t classes,
                                       std::span<const SplitPlan> plans, unsigned jobs) {
    if (distances.rows() != labels.size() || distances.cols() != labels.size())
        throw InvalidArgument("distance matrix does not match the number of videos");
    check_labels(labels, classes);
    std::vector<TrialResult> results(plans.size());
    parallel_for(plans.size(), jobs, [&](std::size_t p) {
        const auto train = plans[p].train_indices();
        const auto test = plans[p].test_indices();
        std::vector<int> predicted(test.size());
        for (std::size_t i = 0; i < test.size(); ++i) {
            std::size_t best = train.front();
            for (std::size_t j : train)
                if (distances(test[i], j) < distances(test[i], best)) best = j;
            predicted[i] = labels[best];
        }
        results[p] = score_trial(plans[p].trial, labels_of(labels, test), predicted, classes);
    });
    return summarize(std::move(results));
}

RunSpread summarize_runs(std::vector<double> run_accuracies) {
    RunSpread r;
    r.accuracies = std::move(run_accuracies);
    if (r.accuracies.empty()) return r;
    double sd = 0.0;
    mean_and_ci(r.accuracies, r.mean, sd, r.ci_low, r.ci_high);
    std::vector<double> sorted = r.accuracies;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    r.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    return r;
}

}  // namespace pot
