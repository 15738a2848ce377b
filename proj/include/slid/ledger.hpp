#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "slid/amm.hpp"
#include "slid/types.hpp"

namespace slid {

struct TimedValue {
    UnixTime timestamp = 0;
    double value = 0.0;

    bool operator==(const TimedValue&) const = default;
};

// Evolving state of one pool during replay.
//
// pool_value_usd is the running base-token value of the pool: the sum of
// signed base-leg flows of every order applied so far. owner_share is the
// owner's fraction of that value; all other providers are aggregated in
// other_share. Swaps move the pool value but leave the shares untouched.
struct LedgerState {
    Address pool_address;  // bound by the first applied order
    double pool_value_usd = 0.0;
    double owner_share = 1.0;
    double other_share = 0.0;

    double reserve_base = 0.0;
    double reserve_paired = 0.0;
    double k = 0.0;

    double cum_user_buys = 0.0;            // paired units bought by non-owners
    double cum_user_sells = 0.0;           // paired units sold by non-owners
    double cum_owner_withdrawn_usd = 0.0;  // base-leg USD withdrawn by the owner

    std::int64_t order_index = 0;
    UnixTime last_timestamp = 0;
    bool drained = false;

    // Data-quality counters; none of these abort a replay.
    std::int64_t balance_mismatches = 0;
    std::int64_t frozen_share_updates = 0;
    std::int64_t clamped_shares = 0;
    std::int64_t clamped_pool_values = 0;

    std::vector<TimedValue> price_series;
    std::vector<TimedValue> volume_series;

    bool operator==(const LedgerState&) const = default;
};

struct LedgerOptions {
    bool record_series = true;
    // When false, a pool value below -tolerance is clamped to zero and
    // counted instead of raising NegativePoolValue.
    bool strict_pool_value = true;
    double balance_tolerance = 1e-6;
};

// Sender attribution for the pool owner.
class OwnerSet {
public:
    OwnerSet() = default;
    explicit OwnerSet(const PoolRecord& pool, bool include_linked = false);
    explicit OwnerSet(Address owner) : owner_(std::move(owner)) {}

    bool contains(std::string_view sender) const noexcept;
    const Address& owner() const noexcept { return owner_; }

private:
    Address owner_;
    std::vector<Address> linked_;
};

// In-place variant used by the streaming replay paths.
void apply(LedgerState& state, const DexOrder& order, bool is_owner,
           const LedgerOptions& options = {});

LedgerState apply_order(LedgerState state, const DexOrder& order, bool is_owner,
                        const LedgerOptions& options = {});

// Replays a pool's orders (sorted by timestamp, block, hash) from an empty state.
LedgerState replay(const PoolRecord& pool, std::span<const DexOrder> orders,
                   const LedgerOptions& options = {}, bool include_linked = false);

// Checks that the owner's base reserve returns to its initial value once
// investors have sold back every paired token they bought. The scenario must
// open with the owner's deposit and contain only investor swaps afterwards.
// Both an exact rational replay and the floating-point swap path are checked.
bool verify_owner_guarantee(std::span<const DexOrder> scenario);

}  // namespace slid
