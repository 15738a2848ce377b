#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slid/kv_config.hpp"
#include "slid/metrics.hpp"
#include "slid/types.hpp"

namespace slid::synth {

enum class ScenarioKind : std::uint8_t { Legitimate, RugPull, Honeypot, SLID, SlidSlow, SlidMultiAddress };

std::string_view to_string(ScenarioKind kind) noexcept;
std::optional<ScenarioKind> parse_scenario_kind(std::string_view text) noexcept;

// Label the heuristic is built to assign to a canonical scenario of this kind.
Label true_label(ScenarioKind kind) noexcept;

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::Legitimate;
    std::uint64_t seed = 1;
    // Distinguishes pools generated from the same seed inside one corpus.
    std::uint64_t pool_index = 0;
    UnixTime start_time = 1'600'000'000;

    double initial_deposit_usd = 10'000.0;
    double initial_paired_tokens = 1e9;

    std::int64_t investor_count = 5'000;  // distinct investor addresses
    double investor_arrival = 0.0;        // arrivals per day; 0 picks a kind default
    double investor_buy_fraction = 0.01;  // median buy, as a fraction of pool value
    double investor_seller_fraction = 0.3;
    double investor_deposit_probability = 0.02;

    std::int64_t lifetime_days = 120;

    std::int64_t slid_drain_count = 423;
    std::pair<double, double> slid_impact_range{0.0739, 0.4293};
    double slid_withdraw_probability = 0.2;
    double profit_multiple_target = 10.3;  // realized profit / invested
    std::int64_t slow_drain_start_day = 200;
    std::int64_t slow_drain_end_day = 260;
    std::int64_t linked_address_count = 3;

    std::int64_t rug_drain_day = 0;
    double rug_impact = 0.99;
    double rug_min_inflow_fraction = 0.25;  // investor inflow before the drain, vs. deposit

    double owner_noise_trades_per_day = -1.0;  // negative picks a kind default
    double owner_deposit_rate = 0.0;          // extra owner deposits per day (legitimate)

    void validate() const;
};

struct Scenario {
    PoolRecord pool;
    SecurityProfile profile;
    std::vector<DexOrder> orders;
    Label label = Label::Legitimate;
    ScenarioKind kind = ScenarioKind::Legitimate;
    double realized_profit_multiple = 0.0;  // owner-attributed, full history
    bool profile_missing = false;            // corpus drops the security record
};

// Deterministic in the config: the same seed yields a bit-identical stream.
Scenario generate(const ScenarioConfig& config);

// Independent recomputation of the profit metrics by naive summation and a
// liquidity-unit replay. Shares no code with the metrics module.
ProfitReport oracle_report(const std::vector<DexOrder>& orders, const PoolRecord& pool,
                           UnixTime first_month_seconds = kFirstMonthSeconds);

struct CorpusConfig {
    std::uint64_t seed = 7;
    std::int64_t legitimate = 100;
    std::int64_t rugpull = 0;
    std::int64_t honeypot = 0;
    std::int64_t slid = 0;
    std::int64_t slid_slow = 0;
    std::int64_t slid_multi = 0;

    UnixTime start_time = 1'600'000'000;
    double slid_alive_fraction = 1.0;  // share of SLID pools living past day 30
    std::int64_t slid_drains_min = 423;
    std::int64_t slid_drains_max = 423;
    double slid_profit_multiple = 10.3;
    std::int64_t slid_lifetime_min = 60;
    std::int64_t slid_lifetime_max = 400;
    std::int64_t slow_drains_min = 10;
    std::int64_t slow_drains_max = 40;
    double slid_noise_min = 0.3;  // owner noise trades per day
    double slid_noise_max = 3.0;
    double legit_noise_max = 0.5;
    double missing_profile_fraction = 0.0;

    static CorpusConfig from(const KeyValueConfig& config);
};

struct Corpus {
    std::vector<Scenario> scenarios;  // sorted by pool address
};

Corpus generate_corpus(const CorpusConfig& config);

// Streams the corpus scenario by scenario, in plan order rather than address
// order, so corpora larger than memory can be written out.
void generate_each(const CorpusConfig& config, const std::function<void(Scenario&&)>& visit);

// Per-pool scenario configs a corpus draws; exposed for inspection.
std::vector<ScenarioConfig> corpus_plan(const CorpusConfig& config);

}  // namespace slid::synth
