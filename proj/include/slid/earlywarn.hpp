#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slid/features.hpp"
#include "slid/validators.hpp"

namespace slid {

enum class ModelKind : std::uint8_t { LogisticRegression, RandomForest };
enum class Detector : std::uint8_t { Heuristic, LogisticRegression, RandomForest, GradientBoosted };

std::string_view to_string(ModelKind kind) noexcept;
std::string_view to_string(Detector detector) noexcept;
std::optional<ModelKind> parse_model_kind(std::string_view text) noexcept;
std::optional<Detector> parse_detector(std::string_view text) noexcept;

using HyperParams = std::map<std::string, double>;

// Row-major design matrix with binary labels.
struct TrainingSet {
    std::vector<std::string> feature_names;
    std::vector<double> values;
    std::vector<bool> labels;

    std::size_t cols() const noexcept { return feature_names.size(); }
    std::size_t rows() const noexcept { return labels.size(); }
    std::span<const double> row(std::size_t i) const { return {values.data() + i * cols(), cols()}; }

    void add(std::span<const double> x, bool label);

    static TrainingSet from(std::span<const FeatureVector> rows);
};

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;     // go left when x[feature] <= threshold
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;  // weighted positive fraction at the node

    bool operator==(const TreeNode&) const = default;
};

struct Tree {
    std::vector<TreeNode> nodes;

    bool operator==(const Tree&) const = default;
};

struct ClassifierModel {
    ModelKind kind = ModelKind::RandomForest;
    std::vector<std::string> feature_names;
    double weight_negative = 1.0;
    double weight_positive = 1.0;
    HyperParams hyperparameters;
    double threshold = 0.5;

    // Set when training saw no usable signal; every prediction returns it.
    std::optional<double> constant_score;
    std::vector<std::string> warnings;

    // Logistic regression, on z-scored inputs.
    std::vector<double> mean;
    std::vector<double> scale;
    std::vector<double> weights;
    double bias = 0.0;

    std::vector<Tree> trees;

    bool operator==(const ClassifierModel&) const = default;
};

struct HyperGrid {
    std::vector<HyperParams> candidates;

    // lr {0.01, 0.1} x l2 {0, 0.01, 0.1}, 500 epochs; or trees {50, 100} x
    // depth {8, 16} x min_leaf {1, 5}.
    static HyperGrid defaults(ModelKind kind);
};

struct TrainOptions {
    std::uint64_t seed = 1;
    std::optional<HyperGrid> grid;  // defaults for the kind when empty
    std::size_t folds = 5;
    bool class_weighting = true;
};

// Fits one model with fixed hyperparameters; no grid search.
ClassifierModel fit(const TrainingSet& data, ModelKind kind, const HyperParams& hyper, std::uint64_t seed,
                    bool class_weighting = true);

// Grid search by pooled F1 over stratified folds, then a refit on all rows.
ClassifierModel train(const TrainingSet& data, ModelKind kind, const TrainOptions& options = {});
ClassifierModel train(std::span<const FeatureVector> rows, ModelKind kind, const TrainOptions& options = {});

struct Prediction {
    bool label = false;
    double score = 0.0;

    bool operator==(const Prediction&) const = default;
};

Prediction predict(const ClassifierModel& model, std::span<const double> x);
Prediction predict(const ClassifierModel& model, const FeatureVector& v);

// Versioned, self-describing JSON container.
void save_model(std::ostream& out, const ClassifierModel& model);
ClassifierModel load_model(std::istream& in);

struct EvalMetrics {
    Detector detector = Detector::RandomForest;
    std::int64_t window_days = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    static EvalMetrics from_counts(Detector detector, std::int64_t window_days, std::int64_t tp, std::int64_t fp,
                                   std::int64_t tn, std::int64_t fn);

    bool operator==(const EvalMetrics&) const = default;
};

EvalMetrics evaluate(Detector detector, std::int64_t window_days, const std::vector<bool>& truth,
                     const std::vector<bool>& predicted);

// Stratified fold assignment, deterministic in the seed.
std::vector<std::size_t> stratified_folds(const std::vector<bool>& labels, std::size_t folds, std::uint64_t seed);

// Indices of the held-out rows of a stratified split.
std::vector<bool> stratified_test_mask(const std::vector<bool>& labels, double test_fraction, std::uint64_t seed);

// One pool reduced to what the sweep needs: the full-history label, the
// feature vector of every window and the heuristic's call on each window.
struct SweepPool {
    Address pool_address;
    bool label = false;
    std::vector<FeatureVector> windows;  // aligned with the sweep's d list
    std::vector<bool> heuristic;         // SLID verdict on the truncated window
};

SweepPool prepare_sweep_pool(const PoolRecord& pool, std::span<const DexOrder> orders,
                             const std::optional<SecurityProfile>& profile, std::span<const std::int64_t> d_list,
                             const HeuristicConfig& cfg = {}, const FeatureOptions& options = {});

struct SweepOptions {
    std::uint64_t seed = 1;
    double test_fraction = 0.2;
    std::size_t folds = 5;
    bool class_weighting = true;
    std::optional<HyperGrid> logistic_grid;
    std::optional<HyperGrid> forest_grid;
};

// For each d and detector: retrain on the training split of the window's
// features and score the held-out split.
std::vector<EvalMetrics> sweep(std::span<const SweepPool> corpus, std::span<const std::int64_t> d_list,
                               std::span<const Detector> detectors, const SweepOptions& options = {});

void write_sweep_csv(std::ostream& out, std::span<const EvalMetrics> rows);

// Smallest d at which the detector's F1 reaches `fraction` of its F1 at the
// largest d evaluated.
std::optional<std::int64_t> plateau_window(std::span<const EvalMetrics> rows, Detector detector,
                                           double fraction = 0.95);

// plateau_window(slow) / plateau_window(fast).
std::optional<double> window_speedup(std::span<const EvalMetrics> rows, Detector slow, Detector fast,
                                     double fraction = 0.95);

}  // namespace slid
