#pragma once

#include <limits>
#include <span>
#include <vector>

#include "slid/ledger.hpp"
#include "slid/types.hpp"

namespace slid {

inline constexpr UnixTime kFirstMonthSeconds = 30 * kSecondsPerDay;

struct ProfitTakingEvent {
    std::int64_t order_index = 0;
    UnixTime timestamp = 0;
    Category kind = Category::Sell;
    double value_usd = 0.0;
    double pool_value_before_usd = 0.0;
    // +infinity when the pool was empty before the order; such events are
    // excluded from the impact aggregates.
    double impact = 0.0;

    bool finite_impact() const noexcept { return impact != std::numeric_limits<double>::infinity(); }

    bool operator==(const ProfitTakingEvent&) const = default;
};

struct ProfitReport {
    double realized_profit_usd = 0.0;
    double invested_usd = 0.0;
    double returned_usd = 0.0;
    double gas_usd = 0.0;
    double unrealized_first_month_usd = 0.0;
    double unrealized_current_usd = 0.0;
    std::vector<ProfitTakingEvent> profit_taking;  // empty when events are not kept
    std::int64_t profit_taking_count = 0;
    double max_impact = 0.0;
    double min_impact = 0.0;
    double impact_sum = 0.0;         // over finite impacts
    std::int64_t finite_impacts = 0;
    std::int64_t inconsistent_impacts = 0;  // impact > 1
    std::int64_t owner_activity_count = 0;  // any owner order kind

    double mean_impact() const noexcept {
        return finite_impacts > 0 ? impact_sum / static_cast<double>(finite_impacts) : 0.0;
    }

    bool operator==(const ProfitReport&) const = default;
};

struct MetricsOptions {
    UnixTime first_month_seconds = kFirstMonthSeconds;
    bool attribute_linked = false;
    bool keep_events = true;
    LedgerOptions ledger{.record_series = false};
};

// Streaming computation of a pool's ProfitReport. Memory is constant in the
// number of orders unless events are kept.
class PoolAccumulator {
public:
    PoolAccumulator(const PoolRecord& pool, MetricsOptions options = {});

    void add(const DexOrder& order);
    ProfitReport report() const;

    const LedgerState& state() const noexcept { return state_; }
    const PoolRecord& pool() const noexcept { return pool_; }
    std::int64_t order_count() const noexcept { return state_.order_index; }

private:
    void add_owner_flow(const DexOrder& order, double pool_value_before);

    PoolRecord pool_;
    MetricsOptions options_;
    OwnerSet owners_;
    LedgerState state_;
    ProfitReport report_;
    bool month_snapshot_taken_ = false;
};

// Realized-profit fields over owner orders only.
ProfitReport realized_profit(std::span<const DexOrder> owner_orders, double deployment_gas_usd = 0.0);

// Owner's claim on the pool: pool value times owner share.
double unrealized_profit(const LedgerState& state) noexcept;

// Replays orders with timestamp <= at and returns the owner's claim.
double unrealized_profit_at(const PoolRecord& pool, std::span<const DexOrder> orders, UnixTime at);

std::vector<ProfitTakingEvent> impact_series(std::span<const DexOrder> orders, const Address& owner);

ProfitReport compute_report(const PoolRecord& pool, std::span<const DexOrder> orders,
                            const MetricsOptions& options = {});

}  // namespace slid
