#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slid/kv_config.hpp"
#include "slid/ledger.hpp"
#include "slid/metrics.hpp"
#include "slid/types.hpp"

namespace slid {

// Lowest profit-taking impact treated as a rug pull; inclusive.
inline constexpr double kRugPullImpact = 0.95;

struct HeuristicConfig {
    std::int64_t t_count = 5;
    double t_impact = 0.95;
    double tax_threshold = 0.5;
    std::int64_t min_owner_actions_layer4 = 3;
    // Definition parameters; reported by assess_definition, never gating.
    double delta = 0.95;
    double beta = 0.0;
    double epsilon = 0.95;
    std::optional<double> theta_p;  // disabled when empty
    std::optional<double> theta_v;
    UnixTime first_month_seconds = kFirstMonthSeconds;
    // A pool is alive if it saw an order within this horizon of the
    // observation end.
    UnixTime alive_horizon_seconds = 30 * kSecondsPerDay;

    static HeuristicConfig from(const KeyValueConfig& config);
    static HeuristicConfig load(const std::filesystem::path& path);

    // Throws ConfigError on out-of-range thresholds.
    void validate() const;
};

struct HoneypotCheck {
    bool is_honeypot = false;
    bool pass = true;
    std::vector<std::string> triggers;
    std::vector<std::string> soft_signals;  // logged only
};

HoneypotCheck honeypot_validate(const SecurityProfile& profile, const HeuristicConfig& cfg);

bool profit_validate(const ProfitReport& report);

bool owner_activity_validate(const PoolRecord& pool, std::span<const ProfitTakingEvent> events,
                             const HeuristicConfig& cfg);
// Same rule over the aggregates of a report, for replays that do not keep events.
bool owner_activity_validate(const PoolRecord& pool, const ProfitReport& report,
                             const HeuristicConfig& cfg);

bool rugpull_detect(const PoolRecord& pool, std::span<const ProfitTakingEvent> events);
bool rugpull_detect(const PoolRecord& pool, const ProfitReport& report);

enum class LayerOutcome : std::uint8_t { Pass, Fail, Unknown };

std::string_view to_string(LayerOutcome outcome) noexcept;

struct LayerResult {
    std::string layer;
    LayerOutcome outcome = LayerOutcome::Pass;
    std::string reason;

    bool operator==(const LayerResult&) const = default;
};

// Validator flags are only set for the stages the pool reaches; a pool that
// leaves the pipeline early reports false for the stages after its exit.
struct Verdict {
    Label label = Label::Undetermined;
    bool honeypot_pass = false;
    bool honeypot_unknown = false;
    bool profit_pass = false;
    bool owner_activity_pass = false;
    std::vector<LayerResult> layer_trace;
    std::vector<std::string> warnings;

    bool operator==(const Verdict&) const = default;
};

// Four filtering layers (owner profit, honeypot, rug pull, owner activity)
// followed by the three SLID validators.
Verdict classify_pool(const PoolRecord& pool, const std::optional<SecurityProfile>& profile,
                      const ProfitReport& report, const HeuristicConfig& cfg);

struct StabilityResult {
    bool stable = true;
    bool evaluated = false;
    double price_cv = 0.0;
    double volume_cv = 0.0;
};

// Coefficient of variation of the price and volume series against theta_p
// and theta_v. Diagnostic only.
StabilityResult stability_check(const LedgerState& state, const HeuristicConfig& cfg);

// Which of the definition's conditions a replayed pool exhibits.
struct DefinitionAssessment {
    bool control_retained = false;
    bool small_inflated_sales = false;  // at least one sell with q < delta * B
    bool incremental_withdrawals = false;
    double withdrawn_fraction_total = 0.0;
    std::optional<StabilityResult> stability;
};

DefinitionAssessment assess_definition(const PoolRecord& pool, std::span<const ProfitTakingEvent> events,
                                       const LedgerState& state, const HeuristicConfig& cfg);

}  // namespace slid
