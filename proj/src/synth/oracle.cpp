// Reference implementation of the profit metrics, kept deliberately naive.
// Pool value is the plain running sum of signed base legs; the owner's claim
// comes from liquidity-unit bookkeeping instead of share rescaling.

#include <algorithm>
#include <limits>

#include "slid/synth.hpp"

namespace slid::synth {

namespace {

struct UnitBook {
    double pool_value = 0.0;
    double owner_units = 0.0;
    double total_units = 0.0;
    double frozen_share = 1.0;  // owner fraction before any liquidity exists

    double owner_share() const {
        return total_units > 0.0 ? std::clamp(owner_units / total_units, 0.0, 1.0) : frozen_share;
    }

    void step(const DexOrder& o, bool owner) {
        const double leg = o.y_base * o.price_base;
        const bool inflow = o.category == Category::Buy || o.category == Category::Deposit;
        const double before = pool_value;
        double after = inflow ? before + leg : before - leg;
        if (after < 0.0) after = 0.0;
        pool_value = after;

        if (o.category == Category::Buy || o.category == Category::Sell) return;
        if (after <= 0.0) {
            frozen_share = owner_share();
            owner_units = total_units = 0.0;
            return;
        }
        if (o.category == Category::Deposit) {
            if (before <= 0.0 || total_units <= 0.0) {
                // Fresh liquidity into an empty pool: the depositor owns it all.
                frozen_share = owner ? 1.0 : 0.0;
                total_units = leg;
                owner_units = owner ? leg : 0.0;
                if (before > 0.0) {
                    // Value present without units (only possible before the
                    // first deposit): carry the frozen split over to it.
                    total_units = before + leg;
                    owner_units = (owner ? leg : 0.0) + before * frozen_share;
                }
                return;
            }
            const double minted = total_units * leg / before;
            total_units += minted;
            if (owner) owner_units += minted;
        } else {
            if (total_units <= 0.0) {
                total_units = before;
                owner_units = before * frozen_share;
            }
            const double burned = total_units * leg / before;
            total_units -= burned;
            if (owner) owner_units -= burned;
        }
    }
};

}  // namespace

ProfitReport oracle_report(const std::vector<DexOrder>& orders, const PoolRecord& pool,
                           UnixTime first_month_seconds) {
    ProfitReport r;
    const UnixTime cutoff = pool.created_time_pool + first_month_seconds;

    double deposits = 0.0, buys = 0.0, sells = 0.0, withdraws = 0.0;
    double gas = pool.deployment_gas_usd;
    UnitBook book;
    UnitBook month_book;
    bool month_done = false;

    for (std::size_t i = 0; i < orders.size(); ++i) {
        const DexOrder& o = orders[i];
        const bool owner = o.sender == pool.owner_address;
        const double before = book.pool_value;
        book.step(o, owner);
        if (!month_done && o.timestamp <= cutoff) {
            month_book = book;
        } else {
            month_done = true;
        }
        if (!owner) continue;

        ++r.owner_activity_count;
        gas += o.gas_fee_usd;
        const double usd = o.y_base * o.price_base;
        switch (o.category) {
            case Category::Deposit: deposits += usd; break;
            case Category::Buy: buys += usd; break;
            case Category::Sell: sells += usd; break;
            case Category::Withdraw: withdraws += usd; break;
        }
        if (o.category != Category::Sell && o.category != Category::Withdraw) continue;

        ProfitTakingEvent e;
        e.order_index = static_cast<std::int64_t>(i);
        e.timestamp = o.timestamp;
        e.kind = o.category;
        e.value_usd = usd;
        e.pool_value_before_usd = before;
        e.impact = before > 0.0 ? usd / before : std::numeric_limits<double>::infinity();
        r.profit_taking.push_back(e);
    }

    r.invested_usd = deposits + buys;
    r.returned_usd = sells + withdraws;
    r.gas_usd = gas;
    r.realized_profit_usd = sells + withdraws - deposits - buys - gas;
    r.unrealized_current_usd = book.pool_value * book.owner_share();
    r.unrealized_first_month_usd = month_book.pool_value * month_book.owner_share();
    r.profit_taking_count = static_cast<std::int64_t>(r.profit_taking.size());

    bool first = true;
    for (const auto& e : r.profit_taking) {
        if (e.impact == std::numeric_limits<double>::infinity()) continue;
        r.max_impact = first ? e.impact : std::max(r.max_impact, e.impact);
        r.min_impact = first ? e.impact : std::min(r.min_impact, e.impact);
        first = false;
        r.impact_sum += e.impact;
        ++r.finite_impacts;
        if (e.impact > 1.0) ++r.inconsistent_impacts;
    }
    return r;
}

}  // namespace slid::synth
