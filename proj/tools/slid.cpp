// slid: command-line front end for generation, detection, features, training,
// the d-window sweep and the pool analyses.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "slid/earlywarn.hpp"
#include "slid/error.hpp"
#include "slid/format.hpp"
#include "slid/io.hpp"
#include "slid/synth.hpp"

namespace fs = std::filesystem;
using namespace slid;

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    return out;
}

HeuristicConfig heuristic_config(const std::string& path) {
    HeuristicConfig cfg = path.empty() ? HeuristicConfig{} : HeuristicConfig::load(path);
    cfg.validate();
    return cfg;
}

std::optional<std::set<std::string>> whitelist_from(const std::string& arg) {
    if (arg.empty()) return std::nullopt;
    if (arg == "default") return io::default_whitelist();
    return io::load_whitelist(arg);
}

// A profiles path that does not exist is treated as absent: the honeypot
// layer then reports Unknown instead of failing the run.
std::optional<fs::path> profiles_from(const std::string& arg) {
    if (arg.empty()) {
        std::cerr << "warning: no security profiles; honeypot layer reports unknown\n";
        return std::nullopt;
    }
    if (!fs::exists(arg)) {
        std::cerr << "warning: profiles file " << arg << " not found; honeypot layer reports unknown\n";
        return std::nullopt;
    }
    return fs::path(arg);
}

void print_stats(const io::IngestStats& s) {
    std::cerr << "pools=" << s.pools_read << " orders=" << s.orders_read << " kept=" << s.orders_kept
              << " profiles=" << s.profiles_read;
    for (const auto& [reason, n] : s.skipped) std::cerr << " skipped_" << reason << '=' << n;
    std::cerr << '\n';
}

std::vector<std::int64_t> parse_d_list(const std::string& text) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto v = parse_int(item);
        if (!v || *v <= 0) config_error("bad d value '" + item + "'");
        out.push_back(*v);
    }
    if (out.empty()) config_error("empty d list");
    return out;
}

// ---- generate ----------------------------------------------------------------

struct GenerateArgs {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
};

void run_generate(const GenerateArgs& a) {
    synth::CorpusConfig cfg;
    if (!a.config.empty()) cfg = synth::CorpusConfig::from(KeyValueConfig::load(a.config));
    if (a.seed) cfg.seed = *a.seed;

    const fs::path dir(a.out);
    fs::create_directories(dir);
    auto pools = open_out(dir / "pools.jsonl");
    auto orders = open_out(dir / "orders.jsonl");
    auto profiles = open_out(dir / "profiles.jsonl");
    auto truth = open_out(dir / "truth.csv");
    truth << "pool_address,kind,label,realized_profit_multiple,profile_missing\n";

    std::string line;
    std::size_t pool_count = 0;
    std::size_t order_count = 0;
    synth::generate_each(cfg, [&](synth::Scenario&& s) {
        line.clear();
        io::append_pool_json(line, s.pool);
        pools << line;
        line.clear();
        for (const auto& o : s.orders) io::append_order_json(line, o);
        orders << line;
        ++pool_count;
        order_count += s.orders.size();
        if (!s.profile_missing) {
            line.clear();
            io::append_profile_json(line, s.pool.paired_address, s.profile);
            profiles << line;
        }
        line.clear();
        append_double(line, s.realized_profit_multiple);
        truth << s.pool.pool_address << ',' << synth::to_string(s.kind) << ',' << to_string(s.label) << ',' << line
              << ',' << (s.profile_missing ? "true" : "false") << '\n';
    });
    std::cerr << "generated pools=" << pool_count << " orders=" << order_count << '\n';
}

// ---- detect --------------------------------------------------------------------

struct InputArgs {
    std::string pools;
    std::string orders;
    std::string profiles;
    std::string config;
    std::string whitelist;
    bool attribute_linked = false;
};

struct DetectArgs {
    InputArgs in;
    std::string out;
    bool anonymize = false;
};

void run_detect(const DetectArgs& a) {
    io::DetectOptions options;
    options.heuristic = heuristic_config(a.in.config);
    options.attribute_linked = a.in.attribute_linked;
    options.base_whitelist = whitelist_from(a.in.whitelist);
    io::FileSource source(a.in.pools, a.in.orders, profiles_from(a.in.profiles));
    const io::DetectResult result = io::detect(source, options);

    std::map<Label, std::int64_t> counts;
    std::int64_t unknown = 0;
    for (const auto& r : result.rows) {
        ++counts[r.verdict.label];
        unknown += r.verdict.honeypot_unknown;
    }
    auto out = open_out(a.out);
    io::write_verdicts_csv(out, result.rows, io::CsvOptions{a.anonymize});

    print_stats(result.stats);
    if (result.resorted_pools > 0) std::cerr << "resorted_pools=" << result.resorted_pools << '\n';
    if (unknown > 0) std::cerr << "warning: honeypot check unknown for " << unknown << " pools\n";
    for (const auto& [label, n] : counts) std::cerr << to_string(label) << '=' << n << '\n';
}

// ---- features -------------------------------------------------------------------

struct FeaturesArgs {
    InputArgs in;
    std::int64_t window = 0;
    std::string out;
};

void run_features(const FeaturesArgs& a) {
    if (a.window <= 0) config_error("--window must be positive");
    const HeuristicConfig cfg = heuristic_config(a.in.config);
    io::FileSource source(a.in.pools, a.in.orders, profiles_from(a.in.profiles));
    io::IngestStats stats;
    const std::vector<PoolRecord> pools = io::admit_pools(source.pools(), whitelist_from(a.in.whitelist), stats);
    const auto profiles = source.profiles();
    stats.profiles_read = static_cast<std::int64_t>(profiles.size());

    FeatureOptions fo;
    fo.alive_horizon_seconds = cfg.alive_horizon_seconds;
    fo.first_month_seconds = cfg.first_month_seconds;
    fo.attribute_linked = a.in.attribute_linked;
    const std::int64_t d_list[] = {a.window};

    std::vector<FeatureVector> rows;
    rows.reserve(pools.size());
    io::for_each_pool(
        source, pools,
        [&](const PoolRecord& pool, std::span<const DexOrder> orders) {
            std::optional<SecurityProfile> profile;
            if (source.has_profiles()) {
                const auto it = profiles.find(pool.paired_address);
                if (it != profiles.end()) profile = it->second;
            }
            SweepPool p = prepare_sweep_pool(pool, orders, profile, d_list, cfg, fo);
            rows.push_back(std::move(p.windows.front()));
        },
        &stats);
    std::sort(rows.begin(), rows.end(),
              [](const FeatureVector& x, const FeatureVector& y) { return x.pool_address < y.pool_address; });
    auto out = open_out(a.out);
    write_features_csv(out, rows);
    print_stats(stats);
}

// ---- train -------------------------------------------------------------------------

struct TrainArgs {
    std::string features;
    std::string model = "forest";
    std::string out;
    std::uint64_t seed = 1;
    bool no_class_weighting = false;
};

void run_train(const TrainArgs& a) {
    const auto kind = parse_model_kind(a.model);
    if (!kind) config_error("unknown model '" + a.model + "'");
    std::ifstream in(a.features, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + a.features);
    const std::vector<FeatureVector> rows = read_features_csv(in, a.features);
    if (rows.empty()) throw Error(ErrorCode::EmptyDataset, a.features + " holds no rows");

    TrainOptions options;
    options.seed = a.seed;
    options.class_weighting = !a.no_class_weighting;
    const ClassifierModel model = train(rows, *kind, options);
    auto out = open_out(a.out);
    save_model(out, model);
    for (const auto& w : model.warnings) std::cerr << "warning: " << w << '\n';
    std::cerr << "trained " << to_string(*kind) << " on " << rows.size() << " rows\n";
}

// ---- sweep -------------------------------------------------------------------------

struct SweepArgs {
    std::string corpus;
    std::string d_list = "267,150,100,60,59,58,57,56";
    std::string detectors = "heuristic,logistic,forest";
    std::string config;
    std::string out;
    std::uint64_t seed = 1;
    double test_fraction = 0.2;
    bool attribute_linked = false;
};

void run_sweep(const SweepArgs& a) {
    const std::vector<std::int64_t> d_list = parse_d_list(a.d_list);
    std::vector<Detector> detectors;
    {
        std::stringstream ss(a.detectors);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto d = parse_detector(item);
            if (!d) config_error("unknown detector '" + item + "'");
            detectors.push_back(*d);
        }
    }
    const HeuristicConfig cfg = heuristic_config(a.config);
    const fs::path dir(a.corpus);
    std::optional<fs::path> profiles;
    if (fs::exists(dir / "profiles.jsonl")) profiles = dir / "profiles.jsonl";
    io::FileSource source(dir / "pools.jsonl", dir / "orders.jsonl", profiles);
    io::IngestStats stats;
    const std::vector<PoolRecord> pools = io::admit_pools(source.pools(), std::nullopt, stats);
    const auto profile_map = source.profiles();
    stats.profiles_read = static_cast<std::int64_t>(profile_map.size());

    FeatureOptions fo;
    fo.alive_horizon_seconds = cfg.alive_horizon_seconds;
    fo.first_month_seconds = cfg.first_month_seconds;
    fo.attribute_linked = a.attribute_linked;

    std::vector<SweepPool> prepared;
    prepared.reserve(pools.size());
    io::for_each_pool(
        source, pools,
        [&](const PoolRecord& pool, std::span<const DexOrder> orders) {
            std::optional<SecurityProfile> profile;
            if (profiles) {
                const auto it = profile_map.find(pool.paired_address);
                if (it != profile_map.end()) profile = it->second;
            }
            prepared.push_back(prepare_sweep_pool(pool, orders, profile, d_list, cfg, fo));
        },
        &stats);
    std::sort(prepared.begin(), prepared.end(),
              [](const SweepPool& x, const SweepPool& y) { return x.pool_address < y.pool_address; });

    SweepOptions options;
    options.seed = a.seed;
    options.test_fraction = a.test_fraction;
    const std::vector<EvalMetrics> rows = sweep(prepared, d_list, detectors, options);
    auto out = open_out(a.out);
    write_sweep_csv(out, rows);
    print_stats(stats);
    for (const Detector d : detectors) {
        if (const auto w = plateau_window(rows, d)) std::cerr << "plateau " << to_string(d) << " d=" << *w << '\n';
    }
}

// ---- report ------------------------------------------------------------------------

struct ReportArgs {
    InputArgs in;
    std::string kind;
    std::string label;
    std::string out;
};

void run_report(const ReportArgs& a) {
    const auto which = io::parse_report_kind(a.kind);
    if (!which) config_error("unknown report kind '" + a.kind + "'");
    const HeuristicConfig cfg = heuristic_config(a.in.config);

    io::IngestOptions ingest_options;
    ingest_options.base_whitelist = whitelist_from(a.in.whitelist);
    // Profiles only matter when the verdicts are needed for a label filter.
    const auto profiles = a.label.empty() ? std::optional<fs::path>{} : profiles_from(a.in.profiles);
    io::Dataset dataset = io::ingest(a.in.pools, a.in.orders, profiles, ingest_options);

    io::AnalyzeOptions options;
    options.alive_horizon_seconds = cfg.alive_horizon_seconds;
    options.attribute_linked = a.in.attribute_linked;
    if (!a.label.empty()) {
        const auto label = parse_label(a.label);
        if (!label) config_error("unknown label '" + a.label + "'");
        options.only_label = *label;
        MetricsOptions metrics;
        metrics.first_month_seconds = cfg.first_month_seconds;
        metrics.attribute_linked = a.in.attribute_linked;
        metrics.keep_events = false;
        metrics.ledger.strict_pool_value = false;
        io::enrich(dataset, cfg, metrics);
    }
    const io::AnalysisReport report = io::analyze(dataset, *which, options);
    auto out = open_out(a.out);
    io::write_report_csv(out, report, *which);
    print_stats(dataset.stats);
    std::cerr << "pools_analyzed=" << report.pools_analyzed;
    if (*which == io::ReportKind::Age) std::cerr << " alive_after_month=" << report.alive_after_month_fraction();
    std::cerr << '\n';
}

void add_input_options(CLI::App* cmd, InputArgs& in) {
    cmd->add_option("--pools", in.pools, "pool rows (JSONL)")->required();
    cmd->add_option("--orders", in.orders, "order rows (JSONL)")->required();
    cmd->add_option("--profiles", in.profiles, "security rows (JSONL)");
    cmd->add_option("--config", in.config, "heuristic key=value config");
    cmd->add_option("--base-whitelist", in.whitelist, "base-token whitelist file, or 'default'");
    cmd->add_flag("--attribute-linked", in.attribute_linked, "count linked addresses as the owner");
}

int fail(ErrorCode code, const std::string& msg) {
    std::cerr << "error code=" << exit_status(code) << " kind=" << to_string(code) << " msg=" << msg << '\n';
    return exit_status(code);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SLID detection and analysis"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "write a synthetic corpus");
    generate->add_option("--config", gen.config, "corpus key=value config");
    generate->add_option("--out", gen.out, "output directory")->required();
    generate->add_option("--seed", gen.seed, "override the config seed");

    DetectArgs det;
    auto* detect = app.add_subcommand("detect", "classify every pool");
    add_input_options(detect, det.in);
    detect->add_option("--out", det.out, "verdicts CSV")->required();
    detect->add_flag("--anonymize", det.anonymize, "keep the first and last 5 address characters");

    FeaturesArgs feat;
    auto* features = app.add_subcommand("features", "export the feature matrix");
    add_input_options(features, feat.in);
    features->add_option("--window", feat.window, "observation window in days")->required();
    features->add_option("--out", feat.out, "features CSV")->required();

    TrainArgs tr;
    auto* train_cmd = app.add_subcommand("train", "fit a classifier on a feature CSV");
    train_cmd->add_option("--features", tr.features, "features CSV")->required();
    train_cmd->add_option("--model", tr.model, "logistic or forest");
    train_cmd->add_option("--out", tr.out, "model file")->required();
    train_cmd->add_option("--seed", tr.seed, "RNG seed");
    train_cmd->add_flag("--no-class-weighting", tr.no_class_weighting, "train unweighted");

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "evaluate detectors over observation windows");
    sweep_cmd->add_option("--corpus", sw.corpus, "directory with pools/orders/profiles JSONL")->required();
    sweep_cmd->add_option("--d-list", sw.d_list, "comma separated window days");
    sweep_cmd->add_option("--detectors", sw.detectors, "comma separated: heuristic,logistic,forest");
    sweep_cmd->add_option("--config", sw.config, "heuristic key=value config");
    sweep_cmd->add_option("--seed", sw.seed, "split and training seed");
    sweep_cmd->add_option("--test-fraction", sw.test_fraction, "held-out share");
    sweep_cmd->add_flag("--attribute-linked", sw.attribute_linked, "count linked addresses as the owner");
    sweep_cmd->add_option("--out", sw.out, "sweep CSV")->required();

    ReportArgs rep;
    auto* report = app.add_subcommand("report", "age, profit or trend analysis");
    add_input_options(report, rep.in);
    report->add_option("--kind", rep.kind, "age, profit or trend")->required();
    report->add_option("--label", rep.label, "only pools with this verdict");
    report->add_option("--out", rep.out, "report CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(ErrorCode::ConfigError, e.what());
    }

    try {
        if (*generate) run_generate(gen);
        else if (*detect) run_detect(det);
        else if (*features) run_features(feat);
        else if (*train_cmd) run_train(tr);
        else if (*sweep_cmd) run_sweep(sw);
        else if (*report) run_report(rep);
    } catch (const Error& e) {
        return fail(e.code(), e.what());
    } catch (const std::exception& e) {
        std::cerr << "error code=1 kind=Internal msg=" << e.what() << '\n';
        return 1;
    }
    return 0;
}
