#include "slid/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "slid/error.hpp"

namespace slid {

namespace {

bool differs(double recorded, double reconstructed, double tolerance) {
    const double scale = std::max({std::abs(recorded), std::abs(reconstructed), 1e-300});
    return std::abs(recorded - reconstructed) / scale > tolerance;
}

// Pool balances implied by the pure constant-product model.
std::pair<double, double> reconstruct_balances(const LedgerState& state, const DexOrder& order) {
    const Reserves<double> reserves{state.reserve_paired, state.reserve_base, state.k};
    switch (order.category) {
        case Category::Buy: {
            const auto r = swap_quote(reserves, SwapDirection::BuyPaired, order.y_base);
            return {r.reserves.paired, r.reserves.base};
        }
        case Category::Sell: {
            const auto r = swap_quote(reserves, SwapDirection::SellPaired, order.y_paired);
            return {r.reserves.paired, r.reserves.base};
        }
        case Category::Deposit:
            return {state.reserve_paired + order.y_paired, state.reserve_base + order.y_base};
        case Category::Withdraw:
            return {std::max(0.0, state.reserve_paired - order.y_paired),
                    std::max(0.0, state.reserve_base - order.y_base)};
    }
    return {state.reserve_paired, state.reserve_base};
}

void update_reserves(LedgerState& state, const DexOrder& order, const LedgerOptions& options) {
    const bool recorded = order.x_paired.has_value() && order.x_base.has_value();
    const bool can_swap = state.reserve_paired > 0.0 && state.reserve_base > 0.0 &&
                          ((order.category == Category::Buy && order.y_base > 0.0) ||
                           (order.category == Category::Sell && order.y_paired > 0.0));

    if (is_swap(order.category) && !can_swap) {
        if (!recorded) {
            // Let swap_quote raise the precise error.
            (void)reconstruct_balances(state, order);
        }
        state.reserve_paired = *order.x_paired;
        state.reserve_base = *order.x_base;
        state.k = state.reserve_paired * state.reserve_base;
        return;
    }

    const auto [paired, base] = reconstruct_balances(state, order);
    if (recorded) {
        if (differs(*order.x_paired, paired, options.balance_tolerance) ||
            differs(*order.x_base, base, options.balance_tolerance)) {
            ++state.balance_mismatches;
        }
        state.reserve_paired = *order.x_paired;
        state.reserve_base = *order.x_base;
        state.k = state.reserve_paired * state.reserve_base;
    } else {
        state.reserve_paired = paired;
        state.reserve_base = base;
        // Swaps keep k exactly; liquidity changes define a new one.
        if (!is_swap(order.category)) state.k = paired * base;
    }
}

double clamp_share(LedgerState& state, double share) {
    constexpr double kSlack = 1e-9;
    if (share < -kSlack || share > 1.0 + kSlack) ++state.clamped_shares;
    return std::clamp(share, 0.0, 1.0);
}

}  // namespace

OwnerSet::OwnerSet(const PoolRecord& pool, bool include_linked) : owner_(pool.owner_address) {
    if (include_linked) linked_ = pool.linked_addresses;
}

bool OwnerSet::contains(std::string_view sender) const noexcept {
    if (sender == owner_) return true;
    return std::find(linked_.begin(), linked_.end(), sender) != linked_.end();
}

void apply(LedgerState& state, const DexOrder& order, bool is_owner, const LedgerOptions& options) {
    if (state.order_index == 0) {
        state.pool_address = order.pool_address;
    } else {
        if (order.pool_address != state.pool_address) {
            throw Error(ErrorCode::PoolMismatch,
                        "order " + order.hash + " belongs to " + order.pool_address +
                            ", ledger replays " + state.pool_address);
        }
        if (order.timestamp < state.last_timestamp) {
            throw Error(ErrorCode::NonMonotonicTime,
                        "order " + order.hash + " precedes the last applied order");
        }
    }

    update_reserves(state, order, options);

    const double flow = order.signed_base_usd();
    const double previous = state.pool_value_usd;
    double current = previous + flow;
    const double tolerance = 1e-9 * std::max(1.0, std::abs(previous) + std::abs(flow));
    if (current < 0.0) {
        if (current < -tolerance) {
            if (options.strict_pool_value) {
                throw Error(ErrorCode::NegativePoolValue,
                            "order " + order.hash + " drives the pool value below zero");
            }
            ++state.clamped_pool_values;
        }
        current = 0.0;
    }
    state.pool_value_usd = current;

    if (!is_swap(order.category)) {
        if (current <= 0.0) {
            // Division by a zero pool value: shares stay where they were.
            ++state.frozen_share_updates;
        } else {
            // share * previous / current + flow / current, evaluated as claims
            // over their sum: the sum equals `current` exactly in exact
            // arithmetic and normalizing by it keeps rounding from compounding.
            const double owner_claim = state.owner_share * previous + (is_owner ? flow : 0.0);
            const double other_claim = state.other_share * previous + (is_owner ? 0.0 : flow);
            const double total = owner_claim + other_claim;
            const double denominator = total > 0.0 ? total : current;
            state.owner_share = clamp_share(state, owner_claim / denominator);
            state.other_share = clamp_share(state, other_claim / denominator);
        }
    }
    state.drained = current <= 0.0;

    switch (order.category) {
        case Category::Buy:
            if (!is_owner) state.cum_user_buys += order.y_paired;
            break;
        case Category::Sell:
            if (!is_owner) state.cum_user_sells += order.y_paired;
            break;
        case Category::Withdraw:
            if (is_owner) state.cum_owner_withdrawn_usd += order.base_usd();
            break;
        case Category::Deposit:
            break;
    }

    if (options.record_series) {
        state.price_series.push_back({order.timestamp, order.price_paired});
        state.volume_series.push_back({order.timestamp, order.base_usd()});
    }
    state.last_timestamp = order.timestamp;
    ++state.order_index;
}

LedgerState apply_order(LedgerState state, const DexOrder& order, bool is_owner,
                        const LedgerOptions& options) {
    apply(state, order, is_owner, options);
    return state;
}

LedgerState replay(const PoolRecord& pool, std::span<const DexOrder> orders,
                   const LedgerOptions& options, bool include_linked) {
    const OwnerSet owners(pool, include_linked);
    LedgerState state;
    for (const auto& order : orders) {
        if (order.pool_address != pool.pool_address) {
            throw Error(ErrorCode::PoolMismatch, "order " + order.hash + " is not in pool " +
                                                     pool.pool_address);
        }
        apply(state, order, owners.contains(order.sender), options);
    }
    return state;
}

bool verify_owner_guarantee(std::span<const DexOrder> scenario) {
    if (scenario.empty() || scenario.front().category != Category::Deposit) {
        throw Error(ErrorCode::PreconditionViolated, "scenario must open with the owner's deposit");
    }
    const DexOrder& deposit = scenario.front();
    const Address& owner = deposit.sender;

    // Exact path: the pool state is a function of the paired reserve alone,
    // base = k / paired.
    const Rational initial_paired = to_rational(deposit.y_paired);
    const Rational initial_base = to_rational(deposit.y_base);
    if (initial_paired <= 0 || initial_base <= 0) {
        throw Error(ErrorCode::ZeroReserve, "owner deposit must fund both reserves");
    }
    const Rational k = initial_paired * initial_base;
    Rational paired = initial_paired;

    // Floating path through the same swap routine the replay uses.
    auto reserves = Reserves<double>::from_deposit(deposit.y_paired, deposit.y_base);

    std::map<Address, Rational> holdings;
    for (const auto& order : scenario.subspan(1)) {
        if (!is_swap(order.category) || order.sender == owner) {
            throw Error(ErrorCode::PreconditionViolated,
                        "order " + order.hash + ": only investor swaps may follow the deposit");
        }
        const Rational amount = to_rational(order.y_paired);
        Rational& held = holdings[order.sender];
        if (order.category == Category::Buy) {
            if (amount >= paired) {
                throw Error(ErrorCode::PreconditionViolated,
                            "order " + order.hash + ": buys the entire paired reserve");
            }
            held += amount;
            paired -= amount;
            const double base_in =
                swap_input_for_output(reserves, SwapDirection::BuyPaired, order.y_paired);
            reserves = swap_quote(reserves, SwapDirection::BuyPaired, base_in).reserves;
        } else {
            if (amount > held) {
                throw Error(ErrorCode::PreconditionViolated,
                            "order " + order.hash + ": investor sells more paired tokens than acquired");
            }
            held -= amount;
            paired += amount;
            reserves = swap_quote(reserves, SwapDirection::SellPaired, order.y_paired).reserves;
        }
    }
    for (const auto& [sender, held] : holdings) {
        if (held != 0) {
            throw Error(ErrorCode::PreconditionViolated,
                        "investor " + sender + " still holds paired tokens");
        }
    }

    const Rational final_base = k / paired;
    const bool exact = final_base == initial_base;
    const bool floating =
        std::abs(reserves.base - deposit.y_base) <= 1e-9 * std::abs(deposit.y_base);
    return exact && floating;
}

}  // namespace slid
