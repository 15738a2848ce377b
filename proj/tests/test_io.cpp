#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "slid/error.hpp"
#include "slid/io.hpp"
#include "slid/synth.hpp"
#include "support.hpp"

using namespace slid;
namespace fs = std::filesystem;

namespace {

synth::Corpus mixed_corpus(std::uint64_t seed, std::int64_t per_kind = 4) {
    synth::CorpusConfig cfg;
    cfg.seed = seed;
    cfg.legitimate = per_kind;
    cfg.rugpull = per_kind;
    cfg.honeypot = per_kind;
    cfg.slid = per_kind;
    cfg.slid_slow = 2;
    cfg.slid_multi = 2;
    cfg.slid_drains_min = 10;
    cfg.slid_drains_max = 40;
    return synth::generate_corpus(cfg);
}

// Writes the corpus the way the CLI does: pools, then each pool's orders.
void write_corpus(const fs::path& dir, const synth::Corpus& corpus, bool interleave = false) {
    std::ofstream pools(dir / "pools.jsonl"), orders(dir / "orders.jsonl"), profiles(dir / "profiles.jsonl");
    std::string line;
    std::vector<const DexOrder*> all;
    for (const auto& s : corpus.scenarios) {
        line.clear();
        io::append_pool_json(line, s.pool);
        pools << line;
        line.clear();
        io::append_profile_json(line, s.pool.paired_address, s.profile);
        profiles << line;
        for (const auto& o : s.orders) all.push_back(&o);
    }
    if (interleave) {
        std::stable_sort(all.begin(), all.end(), [](const DexOrder* a, const DexOrder* b) {
            return a->timestamp < b->timestamp;
        });
        // Reverse a few neighbours so some pools arrive out of replay order.
        for (std::size_t i = 1; i + 1 < all.size(); i += 97) std::swap(all[i], all[i + 1]);
    }
    for (const auto* o : all) {
        line.clear();
        io::append_order_json(line, *o);
        orders << line;
    }
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> sorted_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    std::sort(lines.begin(), lines.end());
    return lines;
}

}  // namespace

TEST_CASE("JSONL rows round trip") {
    const auto corpus = mixed_corpus(1, 1);
    for (const auto& s : corpus.scenarios) {
        std::string line;
        io::append_pool_json(line, s.pool);
        CHECK(io::parse_pool_json(line) == s.pool);
        for (const auto& o : s.orders) {
            line.clear();
            io::append_order_json(line, o);
            REQUIRE(io::parse_order_json(line) == o);
        }
        line.clear();
        io::append_profile_json(line, s.pool.paired_address, s.profile);
        const auto [token, profile] = io::parse_profile_json(line);
        CHECK(token == s.pool.paired_address);
        CHECK(profile == s.profile);
    }
}

TEST_CASE("order amounts accept strings or numbers; optional fields default") {
    const auto o = io::parse_order_json(
        R"({"block":1,"timestamp":5,"hash":"0xa","category":"Buy","pool_address":"0xp","sender":"0xs",)"
        R"("y_paired":"12.5","y_base":3,"price_base":1})");
    CHECK(o.y_paired == 12.5);
    CHECK(o.y_base == 3);
    CHECK_FALSE(o.x_base.has_value());
    CHECK(o.gas_fee_usd == 0);
}

TEST_CASE("schema errors carry file and line") {
    const std::string bad_rows[] = {
        "not json",
        R"({"block":1})",
        R"({"block":1,"timestamp":5,"hash":"0xa","category":"Swap","pool_address":"0xp","sender":"0xs","y_paired":1,"y_base":1})",
        R"({"block":1,"timestamp":5,"hash":"0xa","category":"Buy","pool_address":"0xp","sender":"0xs","y_paired":-1,"y_base":1})",
        R"({"block":1,"timestamp":5,"hash":"0xa","category":"Buy","pool_address":"0xp","sender":"0xs","y_paired":1,"y_base":1,"price_base":0})",
    };
    for (const auto& row : bad_rows) {
        try {
            io::parse_order_json(row, "orders.jsonl", 7);
            FAIL("expected SchemaError for ", row);
        } catch (const SchemaError& e) {
            CHECK(e.line() == 7);
            CHECK(e.file() == "orders.jsonl");
            CHECK(std::string(e.what()).rfind("orders.jsonl:7:", 0) == 0);
        }
    }
    CHECK_THROWS_AS(io::parse_pool_json(
                        R"({"pool_address":"p","base_address":"a","paired_address":"a","owner_address":"o","created_time_pool":1})"),
                    SchemaError);
    CHECK_THROWS_AS(io::parse_profile_json(R"({"token_address":"t","buy_tax":2})"), SchemaError);
}

TEST_CASE("generate, ingest, re-emit is byte-identical") {
    const auto dir = testing::scratch_dir("roundtrip");
    write_corpus(dir, mixed_corpus(2));
    const auto d = io::ingest(dir / "pools.jsonl", dir / "orders.jsonl", dir / "profiles.jsonl");
    const auto out = dir / "again";
    io::write_dataset(out, d);
    CHECK(slurp(out / "pools.jsonl") == slurp(dir / "pools.jsonl"));
    CHECK(slurp(out / "orders.jsonl") == slurp(dir / "orders.jsonl"));
    // Profiles are re-emitted by token address rather than pool address.
    CHECK(sorted_lines(slurp(out / "profiles.jsonl")) == sorted_lines(slurp(dir / "profiles.jsonl")));

    // Idempotent.
    const auto d2 = io::ingest(out / "pools.jsonl", out / "orders.jsonl", out / "profiles.jsonl");
    CHECK(d2.pools == d.pools);
    CHECK(d2.orders == d.orders);
}

TEST_CASE("ingest edge cases") {
    const auto dir = testing::scratch_dir("ingest");
    const auto pool = testing::make_pool();
    {
        std::ofstream p(dir / "pools.jsonl");
        std::string line;
        io::append_pool_json(line, pool);
        p << line << "\n";  // trailing blank line is ignored
        std::ofstream(dir / "empty.jsonl");
    }
    SUBCASE("one pool, no orders") {
        const auto d = io::ingest(dir / "pools.jsonl", dir / "empty.jsonl", std::nullopt);
        CHECK(d.pools.size() == 1);
        CHECK(d.orders_of(pool.pool_address).empty());
        CHECK_FALSE(d.profiles_loaded);
    }
    SUBCASE("orders of unknown pools are counted and skipped") {
        std::ofstream o(dir / "orders.jsonl");
        std::string line;
        auto a = testing::make_order(Category::Deposit, testing::kOwner, 10, pool.created_time_pool, 10);
        io::append_order_json(line, a);
        for (int i = 0; i < 3; ++i) {
            auto stray = testing::make_order(Category::Buy, "0xu", 1, pool.created_time_pool + i, 1);
            stray.pool_address = "0xnowhere";
            io::append_order_json(line, stray);
        }
        o << line;
        o.close();
        const auto d = io::ingest(dir / "pools.jsonl", dir / "orders.jsonl", std::nullopt);
        CHECK(d.stats.skipped.at("unknown_pool") == 3);
        CHECK(d.stats.orders_kept == 1);
    }
    SUBCASE("empty pool file") {
        try {
            io::ingest(dir / "empty.jsonl", dir / "empty.jsonl", std::nullopt);
            FAIL("expected EmptyDataset");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::EmptyDataset);
        }
    }
    SUBCASE("base-token whitelist") {
        io::IngestOptions only_weth;
        only_weth.base_whitelist = std::set<std::string>{"WETH"};
        CHECK_THROWS_AS(io::ingest(dir / "pools.jsonl", dir / "empty.jsonl", std::nullopt, only_weth), Error);
        io::IngestOptions ours;
        ours.base_whitelist = std::set<std::string>{testing::kBase};
        CHECK(io::ingest(dir / "pools.jsonl", dir / "empty.jsonl", std::nullopt, ours).pools.size() == 1);
    }
}

TEST_CASE("whitelist file") {
    const auto dir = testing::scratch_dir("whitelist");
    std::ofstream(dir / "wl.txt") << "# bases\nWETH\n  0xABCdef  # mixed case\n\n";
    const auto wl = io::load_whitelist(dir / "wl.txt");
    CHECK(wl == std::set<std::string>{"WETH", "0xabcdef"});
    std::ofstream(dir / "none.txt") << "# nothing\n";
    CHECK_THROWS_AS(io::load_whitelist(dir / "none.txt"), Error);
    CHECK(io::default_whitelist().count("USDC") == 1);
}

TEST_CASE("streaming detect matches in-memory enrichment, sorted or not") {
    const auto corpus = mixed_corpus(3);
    for (const bool interleave : {false, true}) {
        const auto dir = testing::scratch_dir(interleave ? "detect_mixed" : "detect_sorted");
        write_corpus(dir, corpus, interleave);
        io::FileSource source(dir / "pools.jsonl", dir / "orders.jsonl", dir / "profiles.jsonl");
        const auto result = io::detect(source);

        auto d = io::ingest(dir / "pools.jsonl", dir / "orders.jsonl", dir / "profiles.jsonl");
        MetricsOptions m;
        m.keep_events = false;
        m.ledger.strict_pool_value = false;
        io::enrich(d, HeuristicConfig{}, m);
        REQUIRE(result.rows.size() == d.pools.size());
        for (const auto& row : result.rows) {
            const auto& e = d.enriched.at(row.pool_address);
            CHECK(row.verdict == e.verdict);
            CHECK(row.report == e.report);
        }
        CHECK(std::is_sorted(result.rows.begin(), result.rows.end(),
                             [](const io::DetectRow& a, const io::DetectRow& b) { return a.pool_address < b.pool_address; }));
        if (interleave) CHECK(result.resorted_pools > 0);
        else CHECK(result.resorted_pools == 0);
    }
}

TEST_CASE("detect without profiles marks the honeypot layer unknown") {
    const auto corpus = mixed_corpus(4, 2);
    const auto dir = testing::scratch_dir("noprofiles");
    write_corpus(dir, corpus);
    io::FileSource source(dir / "pools.jsonl", dir / "orders.jsonl");
    const auto result = io::detect(source);
    const auto unknown = std::count_if(result.rows.begin(), result.rows.end(),
                                       [](const io::DetectRow& r) { return r.verdict.honeypot_unknown; });
    CHECK(unknown > 0);
}

TEST_CASE("verdicts CSV") {
    io::DetectRow row;
    row.pool_address = "0x1234567890abcdef";
    row.verdict.label = Label::SLID;
    row.verdict.honeypot_pass = true;
    row.verdict.honeypot_unknown = true;
    row.verdict.profit_pass = true;
    row.verdict.owner_activity_pass = true;
    row.report.realized_profit_usd = 12.5;
    row.report.unrealized_first_month_usd = 3;
    row.report.max_impact = 0.25;
    row.report.profit_taking_count = 7;
    std::stringstream out;
    const io::DetectRow rows[] = {row};
    io::write_verdicts_csv(out, rows, {.anonymize = true});
    CHECK(out.str() ==
          "pool_address,label,honeypot_pass,profit_pass,owner_activity_pass,realized_usd,unrealized_1m_usd,max_impact,c\n"
          "0x123...bcdef,SLID,unknown,true,true,12.5,3,0.25,7\n");
    CHECK(io::anonymize("0xabcdef0123456789") == "0xabc...56789");
    CHECK(io::anonymize("short") == "short");
}

TEST_CASE("analyze") {
    const auto pool = testing::make_pool();
    const UnixTime t0 = pool.created_time_pool;
    io::Dataset d;
    d.pools = {pool};
    d.orders[pool.pool_address] = {
        testing::make_order(Category::Deposit, testing::kOwner, 1000, t0, 1000),
        testing::make_order(Category::Buy, "0xu", 100, t0 + 10, 10),
        testing::make_order(Category::Sell, testing::kOwner, 50, t0 + kSecondsPerDay + 5, 10),
        testing::make_order(Category::Withdraw, testing::kOwner, 30, t0 + 2 * kSecondsPerDay, 10),
        testing::make_order(Category::Buy, "0xv", 40, t0 + 90 * kSecondsPerDay, 4),
    };
    SUBCASE("age bucket") {
        const auto r = io::analyze(d, io::ReportKind::Age);
        REQUIRE(r.age_histogram.size() == 1);
        CHECK(r.age_histogram.begin()->first == 90);
        CHECK(r.age_histogram.begin()->second.count == 1);
        CHECK(r.age_histogram.begin()->second.alive_count == 1);
        CHECK(r.alive_after_month_fraction() == 1.0);
    }
    SUBCASE("profit by day since deployment") {
        const auto r = io::analyze(d, io::ReportKind::Profit);
        CHECK(r.daily_profit_taking.at(1).realized_usd == 50);
        CHECK(r.daily_profit_taking.at(2).realized_usd == 30);
        CHECK(r.daily_profit_taking.count(0) == 0);
    }
    SUBCASE("trend counts only non-owner activity") {
        const auto r = io::analyze(d, io::ReportKind::Trend);
        std::int64_t n = 0;
        double volume = 0;
        for (const auto& [day, t] : r.daily_trend) {
            n += t.user_activity_count;
            volume += t.volume_usd;
        }
        CHECK(n == 2);
        CHECK(volume == 140);
        std::stringstream csv;
        io::write_report_csv(csv, r, io::ReportKind::Trend);
        CHECK(csv.str().rfind("day,user_activity_count,volume_usd\n", 0) == 0);
    }
    SUBCASE("label filter needs verdicts") {
        io::AnalyzeOptions only;
        only.only_label = Label::SLID;
        CHECK_THROWS_AS(io::analyze(d, io::ReportKind::Age, only), Error);
    }
    CHECK(io::parse_report_kind("age") == io::ReportKind::Age);
    CHECK_FALSE(io::parse_report_kind("ages").has_value());
}
