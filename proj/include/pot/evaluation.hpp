#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pot/classify.hpp"
#include "pot/matrix.hpp"

namespace pot {

/// Train/test membership of one class in one trial (indices into the video list).
struct ClassSplit {
    int label = 0;
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

struct SplitPlan {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::vector<ClassSplit> classes;  ///< ascending label order

    /// All training (test) indices across classes, ascending.
    std::vector<std::size_t> train_indices() const;
    std::vector<std::size_t> test_indices() const;
};

/// Number of training videos for a class of `size` videos: floor(size * fraction)
/// clamped to [1, size-1]. With fraction 0.5 the test side gets the extra video
/// of an odd class.
std::size_t train_count(std::size_t size, double train_fraction = 0.5);

/// Stratified random splits. `labels[i]` is the class of video i. Trial t draws
/// from its own stream derive_seed(seed, "split", t), so plans do not depend on
/// how many trials are requested. Throws if a class has fewer than 2 videos.
std::vector<SplitPlan> make_splits(std::span<const int> labels, std::size_t trials, std::uint64_t seed,
                                   double train_fraction = 0.5);

/// Square matrix of counts, rows = true class, columns = predicted class.
using Confusion = std::vector<std::vector<std::size_t>>;

struct ClassScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Per-class precision, recall and F1. A zero denominator makes the
/// corresponding value 0, and F1 is 0 when P + R = 0.
std::vector<ClassScores> f1_from_confusion(const Confusion& confusion);

struct TrialResult {
    std::size_t trial = 0;
    double accuracy = 0.0;
    Confusion confusion;
    std::vector<ClassScores> per_class;
    /// Kernel gamma per channel (empty for nearest-neighbor runs).
    std::vector<double> gammas;
};

struct ExperimentSummary {
    std::vector<TrialResult> trials;  ///< in trial order
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;  ///< sample standard deviation over trials
    double ci_low = 0.0;        ///< mean -+ 1.96 * std / sqrt(trials)
    double ci_high = 0.0;
    std::vector<double> mean_f1;  ///< per class, averaged over trials
    Confusion confusion;          ///< summed over trials
};

/// Builds a TrialResult from true/predicted labels in [0, classes).
TrialResult score_trial(std::size_t trial, std::span<const int> truth, std::span<const int> predicted,
                        std::size_t classes);

/// Aggregates trial results. Trials must all use the same class count.
ExperimentSummary summarize(std::vector<TrialResult> trials);

struct SvmExperimentConfig {
    SvmOptions svm;
    unsigned jobs = 1;
};

/// Per-channel features: channels[c] holds one row per video.
/// For each plan: fit gamma_c on the training rows, train the one-vs-rest
/// SVM on the multi-channel chi2 kernel and classify the test rows.
/// Labels must lie in [0, classes).
ExperimentSummary run_experiment(std::span<const Matrix> channels, std::span<const int> labels, std::size_t classes,
                                 std::span<const SplitPlan> plans, const SvmExperimentConfig& config);

/// 1-NN under a precomputed symmetric distance matrix (e.g. DTW), same plans.
ExperimentSummary run_nearest_neighbor(const Matrix& distances, std::span<const int> labels, std::size_t classes,
                                       std::span<const SplitPlan> plans, unsigned jobs = 1);

/// Spread of mean accuracies across re-seeded runs (re-clustered BoW/IFV).
struct RunSpread {
    std::vector<double> accuracies;
    double median = 0.0;
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

RunSpread summarize_runs(std::vector<double> run_accuracies);

}  // namespace pot
