#include <istream>
#include <ostream>

#include "json.hpp"

#include "slid/earlywarn.hpp"
#include "slid/error.hpp"

namespace slid {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "slid-model";
constexpr int kVersion = 1;

json trees_to_json(const std::vector<Tree>& trees) {
    json out = json::array();
    for (const Tree& tree : trees) {
        json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(),
             value = json::array();
        for (const TreeNode& n : tree.nodes) {
            feature.push_back(n.feature);
            threshold.push_back(n.threshold);
            left.push_back(n.left);
            right.push_back(n.right);
            value.push_back(n.value);
        }
        out.push_back({{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right},
                       {"value", value}});
    }
    return out;
}

std::vector<Tree> trees_from_json(const json& in) {
    std::vector<Tree> trees;
    for (const json& t : in) {
        const auto& feature = t.at("feature");
        const std::size_t n = feature.size();
        if (t.at("threshold").size() != n || t.at("left").size() != n || t.at("right").size() != n ||
            t.at("value").size() != n) {
            throw Error(ErrorCode::SchemaError, "tree arrays differ in length");
        }
        Tree tree;
        tree.nodes.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            TreeNode& node = tree.nodes[i];
            node.feature = feature[i].get<std::int32_t>();
            node.threshold = t["threshold"][i].get<double>();
            node.left = t["left"][i].get<std::int32_t>();
            node.right = t["right"][i].get<std::int32_t>();
            node.value = t["value"][i].get<double>();
            const auto in_range = [n](std::int32_t c) { return c >= 0 && static_cast<std::size_t>(c) < n; };
            if (node.feature >= 0 && (!in_range(node.left) || !in_range(node.right))) {
                throw Error(ErrorCode::SchemaError, "tree child index out of range");
            }
        }
        if (n == 0) throw Error(ErrorCode::SchemaError, "empty tree");
        trees.push_back(std::move(tree));
    }
    return trees;
}

}  // namespace

void save_model(std::ostream& out, const ClassifierModel& model) {
    json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["kind"] = std::string(to_string(model.kind));
    j["feature_names"] = model.feature_names;
    j["class_weights"] = {model.weight_negative, model.weight_positive};
    j["hyperparameters"] = model.hyperparameters;
    j["threshold"] = model.threshold;
    j["constant_score"] = model.constant_score ? json(*model.constant_score) : json(nullptr);
    j["warnings"] = model.warnings;
    if (model.kind == ModelKind::LogisticRegression) {
        j["logistic"] = {{"mean", model.mean}, {"scale", model.scale}, {"weights", model.weights}, {"bias", model.bias}};
    } else {
        j["forest"] = {{"trees", trees_to_json(model.trees)}};
    }
    out << j.dump() << '\n';
}

ClassifierModel load_model(std::istream& in) {
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::SchemaError, std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != kFormat) throw Error(ErrorCode::SchemaError, "not a model file");
        if (j.at("version").get<int>() != kVersion) {
            throw Error(ErrorCode::SchemaError, "unsupported model version " + j["version"].dump());
        }
        ClassifierModel m;
        const auto kind = parse_model_kind(j.at("kind").get<std::string>());
        if (!kind) throw Error(ErrorCode::SchemaError, "unknown model kind");
        m.kind = *kind;
        m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        const auto weights = j.at("class_weights").get<std::vector<double>>();
        if (weights.size() != 2) throw Error(ErrorCode::SchemaError, "class_weights needs two entries");
        m.weight_negative = weights[0];
        m.weight_positive = weights[1];
        m.hyperparameters = j.at("hyperparameters").get<HyperParams>();
        m.threshold = j.at("threshold").get<double>();
        if (!j.at("constant_score").is_null()) m.constant_score = j["constant_score"].get<double>();
        m.warnings = j.value("warnings", std::vector<std::string>{});
        if (m.kind == ModelKind::LogisticRegression && j.contains("logistic")) {
            const json& l = j["logistic"];
            m.mean = l.at("mean").get<std::vector<double>>();
            m.scale = l.at("scale").get<std::vector<double>>();
            m.weights = l.at("weights").get<std::vector<double>>();
            m.bias = l.at("bias").get<double>();
        } else if (m.kind == ModelKind::RandomForest && j.contains("forest")) {
            m.trees = trees_from_json(j["forest"].at("trees"));
        }
        const std::size_t dims = m.feature_names.size();
        for (const Tree& t : m.trees) {
            for (const TreeNode& n : t.nodes) {
                if (n.feature >= static_cast<std::int32_t>(dims)) {
                    throw Error(ErrorCode::DimensionMismatch, "tree splits on a feature the model does not list");
                }
            }
        }
        if (!m.constant_score && m.kind == ModelKind::LogisticRegression &&
            (m.mean.size() != dims || m.scale.size() != dims || m.weights.size() != dims)) {
            throw Error(ErrorCode::DimensionMismatch, "logistic coefficients do not match the feature list");
        }
        return m;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::SchemaError, std::string("malformed model file: ") + e.what());
    }
}

}  // namespace slid
