#include "slid/validators.hpp"

#include <algorithm>
#include <cmath>

#include "slid/error.hpp"

namespace slid {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct SeriesStats {
    double mean = 0.0;
    double stddev = 0.0;
};

SeriesStats stats(const std::vector<TimedValue>& series) {
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t n = 0;
    for (const auto& point : series) {
        ++n;
        const double d = point.value - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (point.value - mean);
    }
    return {mean, n > 0 ? std::sqrt(m2 / static_cast<double>(n)) : 0.0};
}

double relative_spread(const SeriesStats& s) {
    if (s.mean == 0.0) return s.stddev == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return s.stddev / std::abs(s.mean);
}

}  // namespace

HeuristicConfig HeuristicConfig::from(const KeyValueConfig& config) {
    config.require_known({"t_count", "t_impact", "tax_threshold", "min_owner_actions_layer4", "delta",
                          "beta", "epsilon", "theta_p", "theta_v", "first_month_seconds",
                          "alive_horizon_days"});
    HeuristicConfig cfg;
    cfg.t_count = config.get_int("t_count", cfg.t_count);
    cfg.t_impact = config.get_double("t_impact", cfg.t_impact);
    cfg.tax_threshold = config.get_double("tax_threshold", cfg.tax_threshold);
    cfg.min_owner_actions_layer4 = config.get_int("min_owner_actions_layer4", cfg.min_owner_actions_layer4);
    cfg.delta = config.get_double("delta", cfg.delta);
    cfg.beta = config.get_double("beta", cfg.beta);
    cfg.epsilon = config.get_double("epsilon", cfg.epsilon);
    if (config.contains("theta_p")) cfg.theta_p = config.get_double("theta_p", 0.0);
    if (config.contains("theta_v")) cfg.theta_v = config.get_double("theta_v", 0.0);
    cfg.first_month_seconds = config.get_int("first_month_seconds", cfg.first_month_seconds);
    cfg.alive_horizon_seconds =
        config.get_int("alive_horizon_days", cfg.alive_horizon_seconds / kSecondsPerDay) * kSecondsPerDay;
    cfg.validate();
    return cfg;
}

HeuristicConfig HeuristicConfig::load(const std::filesystem::path& path) {
    return from(KeyValueConfig::load(path));
}

void HeuristicConfig::validate() const {
    if (!(t_impact > 0.0 && t_impact <= 1.0)) {
        throw Error(ErrorCode::ConfigError, "t_impact must lie in (0, 1]");
    }
    if (t_count < 1) throw Error(ErrorCode::ConfigError, "t_count must be at least 1");
    if (!(tax_threshold >= 0.0 && tax_threshold <= 1.0)) {
        throw Error(ErrorCode::ConfigError, "tax_threshold must lie in [0, 1]");
    }
    if (first_month_seconds <= 0 || alive_horizon_seconds < 0) {
        throw Error(ErrorCode::ConfigError, "time horizons must be positive");
    }
}

HoneypotCheck honeypot_validate(const SecurityProfile& profile, const HeuristicConfig& cfg) {
    HoneypotCheck check;
    auto trigger = [&](bool condition, const char* name) {
        if (condition) check.triggers.emplace_back(name);
    };
    trigger(profile.buy_tax > cfg.tax_threshold, "buy_tax");
    trigger(profile.sell_tax > cfg.tax_threshold, "sell_tax");
    trigger(!profile.buyable, "cannot_buy");
    trigger(!profile.can_sell_all, "cannot_sell_all");
    trigger(profile.balance_change_by_owner, "balance_change_by_owner");
    trigger(profile.trading_pausable, "trading_pausable");
    trigger(profile.transfer_pausable, "transfer_pausable");
    trigger(profile.slippage_modifiable, "slippage_modifiable");
    trigger(profile.personal_slippage_modifiable, "personal_slippage_modifiable");

    if (profile.anti_whale) check.soft_signals.emplace_back("anti_whale");
    if (profile.trading_cooldown) check.soft_signals.emplace_back("trading_cooldown");
    if (profile.tax_modifiable) check.soft_signals.emplace_back("tax_modifiable");

    check.is_honeypot = !check.triggers.empty();
    check.pass = !check.is_honeypot;
    return check;
}

bool profit_validate(const ProfitReport& report) {
    return report.realized_profit_usd > 0.0 && report.unrealized_first_month_usd > 0.0;
}

bool owner_activity_validate(const PoolRecord& pool, std::span<const ProfitTakingEvent> events,
                             const HeuristicConfig& cfg) {
    if (pool.lpt_burned) return false;
    if (static_cast<std::int64_t>(events.size()) < cfg.t_count) return false;
    return std::all_of(events.begin(), events.end(), [&](const ProfitTakingEvent& e) {
        return !e.finite_impact() || e.impact < cfg.t_impact;
    });
}

bool owner_activity_validate(const PoolRecord& pool, const ProfitReport& report, const HeuristicConfig& cfg) {
    if (pool.lpt_burned) return false;
    if (report.profit_taking_count < cfg.t_count) return false;
    return report.finite_impacts == 0 || report.max_impact < cfg.t_impact;
}

bool rugpull_detect(const PoolRecord& pool, std::span<const ProfitTakingEvent> events) {
    if (pool.lpt_burned) return false;
    return std::any_of(events.begin(), events.end(), [](const ProfitTakingEvent& e) {
        return e.finite_impact() && e.impact >= kRugPullImpact;
    });
}

bool rugpull_detect(const PoolRecord& pool, const ProfitReport& report) {
    if (pool.lpt_burned) return false;
    return report.finite_impacts > 0 && report.max_impact >= kRugPullImpact;
}

std::string_view to_string(LayerOutcome outcome) noexcept {
    switch (outcome) {
        case LayerOutcome::Pass: return "pass";
        case LayerOutcome::Fail: return "fail";
        case LayerOutcome::Unknown: return "unknown";
    }
    return "unknown";
}

Verdict classify_pool(const PoolRecord& pool, const std::optional<SecurityProfile>& profile,
                      const ProfitReport& report, const HeuristicConfig& cfg) {
    Verdict verdict;
    auto& trace = verdict.layer_trace;

    // L1: owner profit.
    if (report.realized_profit_usd <= 0.0) {
        trace.push_back({"owner_profit", LayerOutcome::Fail,
                         "realized profit " + fmt_double(report.realized_profit_usd) + " <= 0"});
        verdict.label = Label::Legitimate;
        return verdict;
    }
    trace.push_back({"owner_profit", LayerOutcome::Pass,
                     "realized profit " + fmt_double(report.realized_profit_usd)});

    // L2: honeypot.
    if (!profile) {
        verdict.honeypot_pass = true;
        verdict.honeypot_unknown = true;
        verdict.warnings.push_back("missing security profile for " + pool.paired_address);
        trace.push_back({"honeypot", LayerOutcome::Unknown, "no security profile; treated as pass"});
    } else {
        const auto check = honeypot_validate(*profile, cfg);
        verdict.honeypot_pass = check.pass;
        if (check.is_honeypot) {
            std::string reason = "triggered:";
            for (const auto& t : check.triggers) reason += " " + t;
            trace.push_back({"honeypot", LayerOutcome::Fail, reason});
            verdict.label = Label::Honeypot;
            return verdict;
        }
        std::string reason = "no restriction";
        if (!check.soft_signals.empty()) {
            reason += "; soft:";
            for (const auto& s : check.soft_signals) reason += " " + s;
        }
        trace.push_back({"honeypot", LayerOutcome::Pass, reason});
    }

    // L3: rug pull baseline.
    if (rugpull_detect(pool, report)) {
        trace.push_back({"rug_pull", LayerOutcome::Fail,
                         "profit-taking impact " + fmt_double(report.max_impact) + " >= 0.95"});
        verdict.label = Label::RugPull;
        return verdict;
    }
    trace.push_back({"rug_pull", LayerOutcome::Pass, "max impact " + fmt_double(report.max_impact)});

    // L4: enough owner activity to judge.
    if (report.owner_activity_count < cfg.min_owner_actions_layer4) {
        trace.push_back({"owner_action", LayerOutcome::Fail,
                         std::to_string(report.owner_activity_count) + " owner activities"});
        verdict.label = Label::Undetermined;
        return verdict;
    }
    trace.push_back({"owner_action", LayerOutcome::Pass,
                     std::to_string(report.owner_activity_count) + " owner activities"});

    verdict.profit_pass = profit_validate(report);
    verdict.owner_activity_pass = owner_activity_validate(pool, report, cfg);
    trace.push_back({"profit_validator", verdict.profit_pass ? LayerOutcome::Pass : LayerOutcome::Fail,
                     "realized " + fmt_double(report.realized_profit_usd) + ", unrealized_1m " +
                         fmt_double(report.unrealized_first_month_usd)});
    trace.push_back({"owner_activity_validator",
                     verdict.owner_activity_pass ? LayerOutcome::Pass : LayerOutcome::Fail,
                     "count " + std::to_string(report.profit_taking_count) + ", max impact " +
                         fmt_double(report.max_impact) +
                         (pool.lpt_burned ? ", LP tokens burned" : "")});

    const bool slid = verdict.honeypot_pass && verdict.profit_pass && verdict.owner_activity_pass;
    verdict.label = slid ? Label::SLID : Label::Undetermined;
    return verdict;
}

StabilityResult stability_check(const LedgerState& state, const HeuristicConfig& cfg) {
    if (state.price_series.empty() || state.volume_series.empty()) {
        throw Error(ErrorCode::EmptySeries, "stability check needs recorded price and volume series");
    }
    StabilityResult result;
    result.price_cv = relative_spread(stats(state.price_series));
    result.volume_cv = relative_spread(stats(state.volume_series));
    if (!cfg.theta_p && !cfg.theta_v) return result;

    result.evaluated = true;
    result.stable = (!cfg.theta_p || result.price_cv < *cfg.theta_p) &&
                    (!cfg.theta_v || result.volume_cv < *cfg.theta_v);
    return result;
}

DefinitionAssessment assess_definition(const PoolRecord& pool, std::span<const ProfitTakingEvent> events,
                                       const LedgerState& state, const HeuristicConfig& cfg) {
    DefinitionAssessment out;
    out.control_retained = !pool.lpt_burned;

    bool withdrawals_small = true;
    bool any_withdrawal = false;
    for (const auto& e : events) {
        if (!e.finite_impact()) continue;
        if (e.kind == Category::Sell) {
            if (e.impact < cfg.delta) out.small_inflated_sales = true;
        } else {
            any_withdrawal = true;
            out.withdrawn_fraction_total += e.impact;
            if (e.impact >= cfg.epsilon) withdrawals_small = false;
        }
    }
    out.incremental_withdrawals =
        any_withdrawal && withdrawals_small && out.withdrawn_fraction_total > cfg.beta;
    if (!state.price_series.empty() && !state.volume_series.empty()) {
        out.stability = stability_check(state, cfg);
    }
    return out;
}

}  // namespace slid
