#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace slid {

using Address = std::string;
using UnixTime = std::int64_t;

inline constexpr UnixTime kSecondsPerDay = 86'400;

enum class Dex : std::uint8_t {
    Uniswap,
    SushiSwap,
    Balancer,
    Curve,
    PancakeSwap,
    BancorSwap,
    Synthetic,
};

enum class Category : std::uint8_t { Buy, Sell, Deposit, Withdraw };

std::string_view to_string(Dex dex) noexcept;
std::string_view to_string(Category category) noexcept;
std::optional<Dex> parse_dex(std::string_view text) noexcept;
std::optional<Category> parse_category(std::string_view text) noexcept;

// Buy and Deposit move base tokens into the pool.
constexpr bool adds_base(Category c) noexcept {
    return c == Category::Buy || c == Category::Deposit;
}

constexpr bool is_swap(Category c) noexcept {
    return c == Category::Buy || c == Category::Sell;
}

constexpr bool is_profit_taking(Category c) noexcept {
    return c == Category::Sell || c == Category::Withdraw;
}

struct PoolRecord {
    Address pool_address;
    Address base_address;
    Address paired_address;
    Address owner_address;
    UnixTime created_time_pool = 0;
    UnixTime created_time_token = 0;
    Dex dex = Dex::Synthetic;
    std::string name;
    bool lpt_burned = false;
    double deployment_gas_usd = 0.0;
    // Addresses known to act on the owner's behalf. Only consulted when the
    // caller opts into linked attribution.
    std::vector<Address> linked_addresses;

    bool operator==(const PoolRecord&) const = default;
};

// Throws Error(PreconditionViolated) when a record invariant does not hold.
void validate(const PoolRecord& pool);

struct DexOrder {
    std::int64_t block = 0;
    UnixTime timestamp = 0;
    std::string hash;
    Category category = Category::Buy;
    Address pool_address;
    Address sender;
    // Post-order pool balances; absent when the source did not record them.
    std::optional<double> x_paired;
    std::optional<double> x_base;
    // Amounts moved, always non-negative; direction comes from category.
    double y_paired = 0.0;
    double y_base = 0.0;
    double price_paired = 0.0;
    double price_base = 1.0;
    double gas_fee_usd = 0.0;

    // Signed base-token flow into the pool, in USD.
    double signed_base_usd() const noexcept {
        const double v = y_base * price_base;
        return adds_base(category) ? v : -v;
    }

    double base_usd() const noexcept { return y_base * price_base; }

    bool operator==(const DexOrder&) const = default;
};

void validate(const DexOrder& order);

// Canonical replay order within a pool.
inline bool order_before(const DexOrder& a, const DexOrder& b) noexcept {
    return std::tie(a.timestamp, a.block, a.hash) < std::tie(b.timestamp, b.block, b.hash);
}

void sort_orders(std::vector<DexOrder>& orders);

struct SecurityProfile {
    double buy_tax = 0.0;
    double sell_tax = 0.0;
    bool tax_modifiable = false;
    bool buyable = true;
    bool can_sell_all = true;
    bool balance_change_by_owner = false;
    bool trading_cooldown = false;
    bool trading_pausable = false;
    bool anti_whale = false;
    bool slippage_modifiable = false;
    bool personal_slippage_modifiable = false;
    bool transfer_pausable = false;

    bool operator==(const SecurityProfile&) const = default;
};

void validate(const SecurityProfile& profile);

enum class Label : std::uint8_t { Legitimate, RugPull, Honeypot, SLID, Undetermined };

std::string_view to_string(Label label) noexcept;
std::optional<Label> parse_label(std::string_view text) noexcept;

}  // namespace slid
