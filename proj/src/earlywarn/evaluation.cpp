#include <algorithm>
#include <ostream>

#include "slid/earlywarn.hpp"
#include "slid/error.hpp"
#include "slid/format.hpp"

namespace slid {

EvalMetrics EvalMetrics::from_counts(Detector detector, std::int64_t window_days, std::int64_t tp, std::int64_t fp,
                                     std::int64_t tn, std::int64_t fn) {
    EvalMetrics m;
    m.detector = detector;
    m.window_days = window_days;
    m.tp = tp;
    m.fp = fp;
    m.tn = tn;
    m.fn = fn;
    const auto ratio = [](std::int64_t num, std::int64_t den) {
        return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
    };
    m.accuracy = ratio(tp + tn, tp + fp + tn + fn);
    m.precision = ratio(tp, tp + fp);
    m.recall = ratio(tp, tp + fn);
    const double pr = m.precision + m.recall;
    m.f1 = pr > 0.0 ? 2.0 * m.precision * m.recall / pr : 0.0;
    return m;
}

EvalMetrics evaluate(Detector detector, std::int64_t window_days, const std::vector<bool>& truth,
                     const std::vector<bool>& predicted) {
    if (truth.size() != predicted.size()) {
        throw Error(ErrorCode::DimensionMismatch, "truth and prediction lengths differ");
    }
    std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        tp += predicted[i] && truth[i];
        fp += predicted[i] && !truth[i];
        tn += !predicted[i] && !truth[i];
        fn += !predicted[i] && truth[i];
    }
    return EvalMetrics::from_counts(detector, window_days, tp, fp, tn, fn);
}

SweepPool prepare_sweep_pool(const PoolRecord& pool, std::span<const DexOrder> orders,
                             const std::optional<SecurityProfile>& profile, std::span<const std::int64_t> d_list,
                             const HeuristicConfig& cfg, const FeatureOptions& options) {
    MetricsOptions metrics;
    metrics.first_month_seconds = cfg.first_month_seconds;
    metrics.attribute_linked = options.attribute_linked;
    metrics.keep_events = false;
    metrics.ledger.strict_pool_value = false;

    auto slid_verdict = [&](std::span<const DexOrder> prefix) {
        return classify_pool(pool, profile, compute_report(pool, prefix, metrics), cfg).label == Label::SLID;
    };

    SweepPool out;
    out.pool_address = pool.pool_address;
    out.label = slid_verdict(orders);
    for (const std::int64_t d : d_list) {
        const UnixTime end = pool.created_time_pool + d * kSecondsPerDay;
        const auto cut = std::partition_point(orders.begin(), orders.end(),
                                              [&](const DexOrder& o) { return o.timestamp < end; });
        const std::span<const DexOrder> prefix(orders.begin(), cut);
        FeatureVector v = extract_features(pool, prefix, d, options);
        v.label = out.label;
        out.windows.push_back(std::move(v));
        out.heuristic.push_back(slid_verdict(prefix));
    }
    return out;
}

std::vector<EvalMetrics> sweep(std::span<const SweepPool> corpus, std::span<const std::int64_t> d_list,
                               std::span<const Detector> detectors, const SweepOptions& options) {
    for (const auto& p : corpus) {
        if (p.windows.size() != d_list.size() || p.heuristic.size() != d_list.size()) {
            throw Error(ErrorCode::DimensionMismatch, "pool " + p.pool_address + " was prepared for another d list");
        }
    }
    std::vector<bool> labels;
    labels.reserve(corpus.size());
    for (const auto& p : corpus) labels.push_back(p.label);
    const std::vector<bool> test = stratified_test_mask(labels, options.test_fraction, options.seed);

    std::vector<bool> truth;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (test[i]) truth.push_back(labels[i]);
    }

    std::vector<EvalMetrics> out;
    for (std::size_t j = 0; j < d_list.size(); ++j) {
        TrainingSet train_set;
        for (auto name : feature_names()) train_set.feature_names.emplace_back(name);
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            if (!test[i]) train_set.add(corpus[i].windows[j].values, labels[i]);
        }
        for (const Detector detector : detectors) {
            std::vector<bool> predicted;
            if (detector == Detector::Heuristic) {
                for (std::size_t i = 0; i < corpus.size(); ++i) {
                    if (test[i]) predicted.push_back(corpus[i].heuristic[j]);
                }
            } else if (detector == Detector::GradientBoosted) {
                throw Error(ErrorCode::ConfigError, "gradient-boosted detector is not built into this release");
            } else {
                const ModelKind kind =
                    detector == Detector::LogisticRegression ? ModelKind::LogisticRegression : ModelKind::RandomForest;
                TrainOptions train_options;
                train_options.seed = options.seed;
                train_options.folds = options.folds;
                train_options.class_weighting = options.class_weighting;
                train_options.grid = kind == ModelKind::LogisticRegression ? options.logistic_grid : options.forest_grid;
                const ClassifierModel model = train(train_set, kind, train_options);
                for (std::size_t i = 0; i < corpus.size(); ++i) {
                    if (test[i]) predicted.push_back(predict(model, corpus[i].windows[j].values).label);
                }
            }
            out.push_back(evaluate(detector, d_list[j], truth, predicted));
        }
    }
    return out;
}

void write_sweep_csv(std::ostream& out, std::span<const EvalMetrics> rows) {
    out << "detector,d,accuracy,precision,recall,f1,tp,fp,tn,fn\n";
    std::string line;
    for (const auto& m : rows) {
        line.clear();
        line += to_string(m.detector);
        line += ',';
        line += std::to_string(m.window_days);
        for (double v : {m.accuracy, m.precision, m.recall, m.f1}) {
            line += ',';
            append_double(line, v);
        }
        for (std::int64_t v : {m.tp, m.fp, m.tn, m.fn}) {
            line += ',';
            line += std::to_string(v);
        }
        line += '\n';
        out << line;
    }
}

std::optional<std::int64_t> plateau_window(std::span<const EvalMetrics> rows, Detector detector, double fraction) {
    const EvalMetrics* widest = nullptr;
    for (const auto& m : rows) {
        if (m.detector == detector && (widest == nullptr || m.window_days > widest->window_days)) widest = &m;
    }
    if (widest == nullptr) return std::nullopt;
    std::optional<std::int64_t> best;
    for (const auto& m : rows) {
        if (m.detector != detector || m.f1 < fraction * widest->f1) continue;
        if (!best || m.window_days < *best) best = m.window_days;
    }
    return best;
}

std::optional<double> window_speedup(std::span<const EvalMetrics> rows, Detector slow, Detector fast,
                                     double fraction) {
    const auto s = plateau_window(rows, slow, fraction);
    const auto f = plateau_window(rows, fast, fraction);
    if (!s || !f || *f <= 0) return std::nullopt;
    return static_cast<double>(*s) / static_cast<double>(*f);
}

}  // namespace slid
