#include "slid/metrics.hpp"

#include <algorithm>

namespace slid {

PoolAccumulator::PoolAccumulator(const PoolRecord& pool, MetricsOptions options)
    : pool_(pool), options_(options), owners_(pool, options.attribute_linked) {
    report_.gas_usd = pool.deployment_gas_usd;
}

void PoolAccumulator::add(const DexOrder& order) {
    if (!month_snapshot_taken_ &&
        order.timestamp > pool_.created_time_pool + options_.first_month_seconds) {
        report_.unrealized_first_month_usd = unrealized_profit(state_);
        month_snapshot_taken_ = true;
    }
    const double before = state_.pool_value_usd;
    const bool is_owner = owners_.contains(order.sender);
    apply(state_, order, is_owner, options_.ledger);
    if (is_owner) add_owner_flow(order, before);
}

void PoolAccumulator::add_owner_flow(const DexOrder& order, double pool_value_before) {
    ++report_.owner_activity_count;
    report_.gas_usd += order.gas_fee_usd;
    const double value = order.base_usd();
    if (!is_profit_taking(order.category)) {
        report_.invested_usd += value;
        return;
    }
    report_.returned_usd += value;

    ProfitTakingEvent event;
    event.order_index = state_.order_index - 1;
    event.timestamp = order.timestamp;
    event.kind = order.category;
    event.value_usd = value;
    event.pool_value_before_usd = pool_value_before;
    event.impact = pool_value_before > 0.0 ? value / pool_value_before
                                           : std::numeric_limits<double>::infinity();

    if (event.finite_impact()) {
        if (report_.finite_impacts == 0) {
            report_.max_impact = report_.min_impact = event.impact;
        } else {
            report_.max_impact = std::max(report_.max_impact, event.impact);
            report_.min_impact = std::min(report_.min_impact, event.impact);
        }
        report_.impact_sum += event.impact;
        ++report_.finite_impacts;
        if (event.impact > 1.0) ++report_.inconsistent_impacts;
    }
    ++report_.profit_taking_count;
    if (options_.keep_events) report_.profit_taking.push_back(event);
}

ProfitReport PoolAccumulator::report() const {
    ProfitReport out = report_;
    out.realized_profit_usd = out.returned_usd - out.invested_usd - out.gas_usd;
    out.unrealized_current_usd = unrealized_profit(state_);
    if (!month_snapshot_taken_) out.unrealized_first_month_usd = out.unrealized_current_usd;
    return out;
}

ProfitReport realized_profit(std::span<const DexOrder> owner_orders, double deployment_gas_usd) {
    ProfitReport report;
    report.gas_usd = deployment_gas_usd;
    for (const auto& order : owner_orders) {
        ++report.owner_activity_count;
        report.gas_usd += order.gas_fee_usd;
        if (is_profit_taking(order.category)) {
            report.returned_usd += order.base_usd();
            ++report.profit_taking_count;
        } else {
            report.invested_usd += order.base_usd();
        }
    }
    report.realized_profit_usd = report.returned_usd - report.invested_usd - report.gas_usd;
    return report;
}

double unrealized_profit(const LedgerState& state) noexcept {
    return state.pool_value_usd * state.owner_share;
}

double unrealized_profit_at(const PoolRecord& pool, std::span<const DexOrder> orders, UnixTime at) {
    const OwnerSet owners(pool);
    const LedgerOptions options{.record_series = false};
    LedgerState state;
    for (const auto& order : orders) {
        if (order.timestamp > at) break;
        apply(state, order, owners.contains(order.sender), options);
    }
    return unrealized_profit(state);
}

std::vector<ProfitTakingEvent> impact_series(std::span<const DexOrder> orders, const Address& owner) {
    PoolRecord pool;
    pool.owner_address = owner;
    if (!orders.empty()) pool.pool_address = orders.front().pool_address;
    PoolAccumulator acc(pool);
    for (const auto& order : orders) acc.add(order);
    return acc.report().profit_taking;
}

ProfitReport compute_report(const PoolRecord& pool, std::span<const DexOrder> orders,
                            const MetricsOptions& options) {
    PoolAccumulator acc(pool, options);
    for (const auto& order : orders) acc.add(order);
    return acc.report();
}

}  // namespace slid
