#pragma once

#include <array>
#include <bitset>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "slid/metrics.hpp"
#include "slid/types.hpp"

namespace slid {

inline constexpr std::size_t kFeatureCount = 57;

// Canonical feature order; see docs/features.md for definitions.
const std::array<std::string_view, kFeatureCount>& feature_names() noexcept;

// Index of a feature name, or kFeatureCount when unknown.
std::size_t feature_index(std::string_view name) noexcept;

struct FeatureVector {
    Address pool_address;
    std::int64_t window_days = 0;
    bool label = false;
    std::array<double, kFeatureCount> values{};
    // Set where a ratio had a zero denominator or the quantity was undefined.
    std::bitset<kFeatureCount> missing;

    double operator[](std::string_view name) const;

    bool operator==(const FeatureVector&) const = default;
};

struct FeatureOptions {
    UnixTime alive_horizon_seconds = 30 * kSecondsPerDay;
    UnixTime first_month_seconds = kFirstMonthSeconds;
    bool attribute_linked = false;
};

// Ratios with a zero denominator: 0/0 -> 0, x/0 -> +-kRatioCap; both flagged.
inline constexpr double kRatioCap = 1e9;

// Features of the first `days` days after deployment. Orders at or after
// created_time_pool + days * 86400 are ignored.
FeatureVector extract_features(const PoolRecord& pool, std::span<const DexOrder> orders, std::int64_t days,
                               const FeatureOptions& options = {});

void write_features_csv(std::ostream& out, std::span<const FeatureVector> rows);
std::vector<FeatureVector> read_features_csv(std::istream& in, const std::string& origin = "<features>");

}  // namespace slid
