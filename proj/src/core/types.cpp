#include "slid/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "slid/error.hpp"

namespace slid {

namespace {

constexpr std::array<std::string_view, 7> kDexNames = {
    "Uniswap", "SushiSwap", "Balancer", "Curve", "PancakeSwap", "BancorSwap", "Synthetic"};

constexpr std::array<std::string_view, 4> kCategoryNames = {"Buy", "Sell", "Deposit", "Withdraw"};

constexpr std::array<std::string_view, 5> kLabelNames = {
    "Legitimate", "RugPull", "Honeypot", "SLID", "Undetermined"};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view text) {
    for (std::size_t i = 0; i < N; ++i) {
        if (names[i] == text) return static_cast<Enum>(i);
    }
    return std::nullopt;
}

}  // namespace

std::string_view to_string(Dex dex) noexcept { return kDexNames[static_cast<std::size_t>(dex)]; }

std::string_view to_string(Category category) noexcept {
    return kCategoryNames[static_cast<std::size_t>(category)];
}

std::string_view to_string(Label label) noexcept {
    return kLabelNames[static_cast<std::size_t>(label)];
}

std::optional<Dex> parse_dex(std::string_view text) noexcept { return lookup<Dex>(kDexNames, text); }

std::optional<Category> parse_category(std::string_view text) noexcept {
    return lookup<Category>(kCategoryNames, text);
}

std::optional<Label> parse_label(std::string_view text) noexcept {
    return lookup<Label>(kLabelNames, text);
}

void validate(const PoolRecord& pool) {
    if (pool.created_time_token > pool.created_time_pool) {
        throw Error(ErrorCode::PreconditionViolated,
                    "pool " + pool.pool_address + ": token created after pool");
    }
    if (pool.base_address == pool.paired_address) {
        throw Error(ErrorCode::PreconditionViolated,
                    "pool " + pool.pool_address + ": base and paired token are identical");
    }
}

void validate(const DexOrder& order) {
    if (!(order.y_base >= 0.0) || !(order.y_paired >= 0.0)) {
        throw Error(ErrorCode::PreconditionViolated, "order " + order.hash + ": negative amount");
    }
    if (!(order.price_base > 0.0) || !(order.price_paired >= 0.0)) {
        throw Error(ErrorCode::PreconditionViolated, "order " + order.hash + ": invalid price");
    }
}

void sort_orders(std::vector<DexOrder>& orders) {
    if (!std::is_sorted(orders.begin(), orders.end(), order_before)) {
        std::stable_sort(orders.begin(), orders.end(), order_before);
    }
}

void validate(const SecurityProfile& profile) {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(profile.buy_tax) || !in_unit(profile.sell_tax)) {
        throw Error(ErrorCode::PreconditionViolated, "tax outside [0, 1]");
    }
}

}  // namespace slid
