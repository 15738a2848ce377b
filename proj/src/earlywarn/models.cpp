#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include "slid/earlywarn.hpp"
#include "slid/error.hpp"

namespace slid {

namespace {

constexpr std::array<std::string_view, 2> kModelNames{"LogisticRegression", "RandomForest"};
constexpr std::array<std::string_view, 4> kDetectorNames{"Heuristic", "LogisticRegression", "RandomForest",
                                                         "GradientBoosted"};

std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double hyper(const HyperParams& h, const char* key, double fallback) {
    const auto it = h.find(key);
    return it == h.end() ? fallback : it->second;
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

struct ClassCounts {
    std::size_t positive = 0;
    std::size_t negative = 0;
};

ClassCounts count_classes(const std::vector<bool>& labels) {
    ClassCounts c;
    for (bool y : labels) (y ? c.positive : c.negative) += 1;
    return c;
}

bool rows_identical(const TrainingSet& data) {
    for (std::size_t i = 1; i < data.rows(); ++i) {
        if (!std::equal(data.row(i).begin(), data.row(i).end(), data.row(0).begin())) return false;
    }
    return true;
}

void fit_logistic(ClassifierModel& model, const TrainingSet& data, const std::vector<double>& w) {
    const std::size_t n = data.rows();
    const std::size_t m = data.cols();
    const double lr = hyper(model.hyperparameters, "learning_rate", 0.1);
    const double l2 = hyper(model.hyperparameters, "l2", 0.0);
    const auto epochs = static_cast<int>(hyper(model.hyperparameters, "epochs", 500));

    model.mean.assign(m, 0.0);
    model.scale.assign(m, 1.0);
    for (std::size_t j = 0; j < m; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += data.values[i * m + j];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = data.values[i * m + j] - mean;
            var += d * d;
        }
        const double sd = std::sqrt(var / static_cast<double>(n));
        model.mean[j] = mean;
        model.scale[j] = sd > 1e-12 ? sd : 1.0;
    }

    std::vector<double> z(n * m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) z[i * m + j] = (data.values[i * m + j] - model.mean[j]) / model.scale[j];
    }
    const double total_weight = std::accumulate(w.begin(), w.end(), 0.0);

    model.weights.assign(m, 0.0);
    model.bias = 0.0;
    std::vector<double> grad(m);
    for (int epoch = 0; epoch < epochs; ++epoch) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_bias = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double* x = &z[i * m];
            double s = model.bias;
            for (std::size_t j = 0; j < m; ++j) s += model.weights[j] * x[j];
            const double err = w[i] * (sigmoid(s) - (data.labels[i] ? 1.0 : 0.0));
            for (std::size_t j = 0; j < m; ++j) grad[j] += err * x[j];
            grad_bias += err;
        }
        for (std::size_t j = 0; j < m; ++j) {
            model.weights[j] -= lr * (grad[j] / total_weight + l2 * model.weights[j]);
        }
        model.bias -= lr * grad_bias / total_weight;
    }
}

class TreeBuilder {
public:
    TreeBuilder(const TrainingSet& data, const std::vector<double>& weights, int max_depth, std::size_t min_leaf,
                std::size_t max_features, std::uint64_t seed)
        : data_(data), w_(weights), max_depth_(max_depth), min_leaf_(std::max<std::size_t>(1, min_leaf)),
          max_features_(max_features), rng_(seed) {
        features_.resize(data.cols());
        std::iota(features_.begin(), features_.end(), 0);
    }

    Tree build() {
        const std::size_t n = data_.rows();
        boost::random::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::vector<std::size_t> sample(n);
        for (auto& s : sample) s = pick(rng_);
        Tree tree;
        grow(tree, sample, 0);
        return tree;
    }

private:
    struct Split {
        std::int32_t feature = -1;
        double threshold = 0.0;
        double score = 0.0;
    };

    std::int32_t grow(Tree& tree, std::vector<std::size_t>& idx, int depth) {
        double pos = 0.0;
        double total = 0.0;
        for (std::size_t i : idx) {
            total += w_[i];
            if (data_.labels[i]) pos += w_[i];
        }
        const auto id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.push_back({});
        tree.nodes[static_cast<std::size_t>(id)].value = total > 0.0 ? pos / total : 0.0;

        const bool pure = pos <= 0.0 || pos >= total;
        if (pure || depth >= max_depth_ || idx.size() < 2 * min_leaf_) return id;

        const double parent = (pos * pos + (total - pos) * (total - pos)) / total;
        const Split best = best_split(idx, parent);
        if (best.feature < 0) return id;

        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        const std::size_t m = data_.cols();
        for (std::size_t i : idx) {
            (data_.values[i * m + static_cast<std::size_t>(best.feature)] <= best.threshold ? left : right).push_back(i);
        }
        idx.clear();
        idx.shrink_to_fit();

        const std::int32_t l = grow(tree, left, depth + 1);
        const std::int32_t r = grow(tree, right, depth + 1);
        TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = l;
        node.right = r;
        return id;
    }

    // Maximizes sum over children of (p^2 + q^2) / w, which minimizes the
    // weighted Gini impurity.
    Split best_split(const std::vector<std::size_t>& idx, double parent) {
        const std::size_t m = data_.cols();
        const std::size_t k = std::min(max_features_, m);
        for (std::size_t i = 0; i < k; ++i) {
            boost::random::uniform_int_distribution<std::size_t> pick(i, m - 1);
            std::swap(features_[i], features_[pick(rng_)]);
        }

        Split best;
        best.score = parent + 1e-12 * std::max(1.0, parent);
        for (std::size_t fi = 0; fi < k; ++fi) {
            const std::size_t f = features_[fi];
            scratch_.clear();
            double pos_total = 0.0;
            double w_total = 0.0;
            for (std::size_t i : idx) {
                scratch_.push_back({data_.values[i * m + f], i});
                w_total += w_[i];
                if (data_.labels[i]) pos_total += w_[i];
            }
            std::sort(scratch_.begin(), scratch_.end());
            double pos_left = 0.0;
            double w_left = 0.0;
            const std::size_t n = scratch_.size();
            for (std::size_t s = 0; s + 1 < n; ++s) {
                const std::size_t i = scratch_[s].second;
                w_left += w_[i];
                if (data_.labels[i]) pos_left += w_[i];
                const double a = scratch_[s].first;
                const double b = scratch_[s + 1].first;
                if (!(a < b)) continue;
                if (s + 1 < min_leaf_ || n - s - 1 < min_leaf_) continue;
                const double w_right = w_total - w_left;
                const double pos_right = pos_total - pos_left;
                const double neg_left = w_left - pos_left;
                const double neg_right = w_right - pos_right;
                const double score = (pos_left * pos_left + neg_left * neg_left) / w_left +
                                     (pos_right * pos_right + neg_right * neg_right) / w_right;
                if (score > best.score) {
                    best.score = score;
                    best.feature = static_cast<std::int32_t>(f);
                    const double mid = a + (b - a) / 2.0;
                    best.threshold = mid < b ? mid : a;
                }
            }
        }
        return best;
    }

    const TrainingSet& data_;
    const std::vector<double>& w_;
    int max_depth_;
    std::size_t min_leaf_;
    std::size_t max_features_;
    boost::random::mt19937_64 rng_;
    std::vector<std::size_t> features_;
    std::vector<std::pair<double, std::size_t>> scratch_;
};

void fit_forest(ClassifierModel& model, const TrainingSet& data, const std::vector<double>& w, std::uint64_t seed) {
    const auto count = static_cast<std::size_t>(hyper(model.hyperparameters, "trees", 100));
    const auto depth = static_cast<int>(hyper(model.hyperparameters, "max_depth", 16));
    const auto min_leaf = static_cast<std::size_t>(hyper(model.hyperparameters, "min_leaf", 1));
    const auto default_features =
        std::max<double>(1.0, std::floor(std::sqrt(static_cast<double>(data.cols()))));
    const auto max_features = static_cast<std::size_t>(hyper(model.hyperparameters, "max_features", default_features));

    model.trees.clear();
    model.trees.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
        // Each tree owns its stream, so the forest does not depend on build order.
        TreeBuilder builder(data, w, depth, min_leaf, max_features, mix(seed ^ mix(t + 1)));
        model.trees.push_back(builder.build());
    }
}

double tree_score(const Tree& tree, std::span<const double> x) {
    std::size_t at = 0;
    while (tree.nodes[at].feature >= 0) {
        const TreeNode& node = tree.nodes[at];
        at = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                                                  : node.right);
    }
    return tree.nodes[at].value;
}

}  // namespace

std::string_view to_string(ModelKind kind) noexcept { return kModelNames[static_cast<std::size_t>(kind)]; }
std::string_view to_string(Detector detector) noexcept { return kDetectorNames[static_cast<std::size_t>(detector)]; }

std::optional<ModelKind> parse_model_kind(std::string_view text) noexcept {
    if (text == "logistic" || text == kModelNames[0]) return ModelKind::LogisticRegression;
    if (text == "forest" || text == "random_forest" || text == kModelNames[1]) return ModelKind::RandomForest;
    return std::nullopt;
}

std::optional<Detector> parse_detector(std::string_view text) noexcept {
    for (std::size_t i = 0; i < kDetectorNames.size(); ++i) {
        if (text == kDetectorNames[i]) return static_cast<Detector>(i);
    }
    if (text == "heuristic") return Detector::Heuristic;
    if (text == "logistic") return Detector::LogisticRegression;
    if (text == "forest") return Detector::RandomForest;
    return std::nullopt;
}

void TrainingSet::add(std::span<const double> x, bool label) {
    if (x.size() != cols()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "row has " + std::to_string(x.size()) + " values, expected " + std::to_string(cols()));
    }
    values.insert(values.end(), x.begin(), x.end());
    labels.push_back(label);
}

TrainingSet TrainingSet::from(std::span<const FeatureVector> rows) {
    TrainingSet set;
    for (auto name : slid::feature_names()) set.feature_names.emplace_back(name);
    set.values.reserve(rows.size() * kFeatureCount);
    for (const auto& r : rows) set.add(r.values, r.label);
    return set;
}

HyperGrid HyperGrid::defaults(ModelKind kind) {
    HyperGrid grid;
    if (kind == ModelKind::LogisticRegression) {
        for (double lr : {0.01, 0.1}) {
            for (double l2 : {0.0, 0.01, 0.1}) grid.candidates.push_back({{"learning_rate", lr}, {"l2", l2}, {"epochs", 500}});
        }
    } else {
        for (double trees : {50.0, 100.0}) {
            for (double depth : {8.0, 16.0}) {
                for (double leaf : {1.0, 5.0}) {
                    grid.candidates.push_back({{"trees", trees}, {"max_depth", depth}, {"min_leaf", leaf}});
                }
            }
        }
    }
    return grid;
}

ClassifierModel fit(const TrainingSet& data, ModelKind kind, const HyperParams& hyper_params, std::uint64_t seed,
                    bool class_weighting) {
    if (data.rows() == 0) throw Error(ErrorCode::SingleClassInput, "no training rows");
    if (data.values.size() != data.rows() * data.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "design matrix size does not match its shape");
    }
    ClassifierModel model;
    model.kind = kind;
    model.feature_names = data.feature_names;
    model.hyperparameters = hyper_params;

    const ClassCounts counts = count_classes(data.labels);
    const double n = static_cast<double>(data.rows());
    if (class_weighting && counts.positive > 0 && counts.negative > 0) {
        model.weight_negative = n / (2.0 * static_cast<double>(counts.negative));
        model.weight_positive = n / (2.0 * static_cast<double>(counts.positive));
    }
    if (counts.positive == 0 || counts.negative == 0 || rows_identical(data)) {
        // Nothing to separate: fall back to the majority class.
        model.constant_score = static_cast<double>(counts.positive) / n;
        if (counts.positive > 0 && counts.negative > 0) model.warnings.emplace_back("SingleSignal");
        return model;
    }

    std::vector<double> w(data.rows());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = data.labels[i] ? model.weight_positive : model.weight_negative;

    if (kind == ModelKind::LogisticRegression) {
        fit_logistic(model, data, w);
    } else {
        fit_forest(model, data, w, seed);
    }
    return model;
}

ClassifierModel train(const TrainingSet& data, ModelKind kind, const TrainOptions& options) {
    const ClassCounts counts = count_classes(data.labels);
    if (counts.positive == 0 || counts.negative == 0) {
        throw Error(ErrorCode::SingleClassInput, "training data holds a single class");
    }
    const HyperGrid grid = options.grid.value_or(HyperGrid::defaults(kind));
    if (grid.candidates.empty()) throw Error(ErrorCode::ConfigError, "empty hyperparameter grid");

    std::size_t chosen = 0;
    const std::size_t folds = std::min({options.folds, counts.positive, counts.negative});
    if (grid.candidates.size() > 1 && folds >= 2) {
        const std::vector<std::size_t> fold = stratified_folds(data.labels, folds, options.seed);
        double best_f1 = -1.0;
        for (std::size_t c = 0; c < grid.candidates.size(); ++c) {
            std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
            for (std::size_t k = 0; k < folds; ++k) {
                TrainingSet part;
                part.feature_names = data.feature_names;
                for (std::size_t i = 0; i < data.rows(); ++i) {
                    if (fold[i] != k) part.add(data.row(i), data.labels[i]);
                }
                const ClassifierModel m =
                    fit(part, kind, grid.candidates[c], mix(options.seed ^ mix(k + 101)), options.class_weighting);
                for (std::size_t i = 0; i < data.rows(); ++i) {
                    if (fold[i] != k) continue;
                    const bool p = predict(m, data.row(i)).label;
                    const bool y = data.labels[i];
                    tp += p && y;
                    fp += p && !y;
                    tn += !p && !y;
                    fn += !p && y;
                }
            }
            const double f1 = EvalMetrics::from_counts(Detector::RandomForest, 0, tp, fp, tn, fn).f1;
            if (f1 > best_f1) {
                best_f1 = f1;
                chosen = c;
            }
        }
    }
    return fit(data, kind, grid.candidates[chosen], options.seed, options.class_weighting);
}

ClassifierModel train(std::span<const FeatureVector> rows, ModelKind kind, const TrainOptions& options) {
    return train(TrainingSet::from(rows), kind, options);
}

Prediction predict(const ClassifierModel& model, std::span<const double> x) {
    if (x.size() != model.feature_names.size()) {
        throw Error(ErrorCode::DimensionMismatch, "input has " + std::to_string(x.size()) +
                                                      " features, model expects " +
                                                      std::to_string(model.feature_names.size()));
    }
    double score = 0.0;
    if (model.constant_score) {
        score = *model.constant_score;
    } else if (model.kind == ModelKind::LogisticRegression) {
        double s = model.bias;
        for (std::size_t j = 0; j < x.size(); ++j) s += model.weights[j] * (x[j] - model.mean[j]) / model.scale[j];
        score = sigmoid(s);
    } else {
        for (const Tree& tree : model.trees) score += tree_score(tree, x);
        score = model.trees.empty() ? 0.0 : score / static_cast<double>(model.trees.size());
    }
    return {score >= model.threshold, score};
}

Prediction predict(const ClassifierModel& model, const FeatureVector& v) {
    const auto& names = feature_names();
    if (model.feature_names.size() != names.size() ||
        !std::equal(names.begin(), names.end(), model.feature_names.begin())) {
        throw Error(ErrorCode::DimensionMismatch, "model features do not match the feature vector layout");
    }
    return predict(model, std::span<const double>(v.values));
}

std::vector<std::size_t> stratified_folds(const std::vector<bool>& labels, std::size_t folds, std::uint64_t seed) {
    std::vector<std::size_t> out(labels.size(), 0);
    boost::random::mt19937_64 rng(mix(seed ^ 0xF01D5ULL));
    for (bool cls : {false, true}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == cls) idx.push_back(i);
        }
        for (std::size_t i = idx.size(); i > 1; --i) {
            boost::random::uniform_int_distribution<std::size_t> pick(0, i - 1);
            std::swap(idx[i - 1], idx[pick(rng)]);
        }
        for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] = i % folds;
    }
    return out;
}

std::vector<bool> stratified_test_mask(const std::vector<bool>& labels, double test_fraction, std::uint64_t seed) {
    std::vector<bool> mask(labels.size(), false);
    boost::random::mt19937_64 rng(mix(seed ^ 0x5B117ULL));
    for (bool cls : {false, true}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == cls) idx.push_back(i);
        }
        for (std::size_t i = idx.size(); i > 1; --i) {
            boost::random::uniform_int_distribution<std::size_t> pick(0, i - 1);
            std::swap(idx[i - 1], idx[pick(rng)]);
        }
        const auto take = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(idx.size())));
        for (std::size_t i = 0; i < take && i < idx.size(); ++i) mask[idx[i]] = true;
    }
    return mask;
}

}  // namespace slid
