#include <algorithm>
#include <cmath>
#include <ostream>

#include "slid/error.hpp"
#include "slid/format.hpp"
#include "slid/io.hpp"
#include "slid/ledger.hpp"

namespace slid::io {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

bool selected(const Dataset& dataset, const PoolRecord& pool, const AnalyzeOptions& options) {
    if (!options.only_label) return true;
    const auto it = dataset.enriched.find(pool.pool_address);
    return it != dataset.enriched.end() && it->second.verdict.label == *options.only_label;
}

}  // namespace

std::optional<ReportKind> parse_report_kind(std::string_view text) noexcept {
    if (text == "age") return ReportKind::Age;
    if (text == "profit") return ReportKind::Profit;
    if (text == "trend") return ReportKind::Trend;
    return std::nullopt;
}

AnalysisReport analyze(const Dataset& dataset, ReportKind which, const AnalyzeOptions& options) {
    if (options.only_label && dataset.enriched.empty()) {
        throw Error(ErrorCode::PreconditionViolated, "label filter needs an enriched dataset");
    }
    AnalysisReport out;

    UnixTime observation_end = 0;
    for (const auto& [address, list] : dataset.orders) {
        if (!list.empty()) observation_end = std::max(observation_end, list.back().timestamp);
    }

    for (const auto& pool : dataset.pools) {
        if (!selected(dataset, pool, options)) continue;
        const auto orders = dataset.orders_of(pool.pool_address);
        if (orders.empty()) continue;
        ++out.pools_analyzed;

        switch (which) {
            case ReportKind::Age: {
                const auto [lo, hi] = std::minmax_element(
                    orders.begin(), orders.end(),
                    [](const DexOrder& a, const DexOrder& b) { return a.timestamp < b.timestamp; });
                const UnixTime age = hi->timestamp - lo->timestamp;
                AgeBucket& bucket = out.age_histogram[age / kSecondsPerDay];
                ++bucket.count;
                if (hi->timestamp >= observation_end - options.alive_horizon_seconds) ++bucket.alive_count;
                if (age > 30 * kSecondsPerDay) ++out.alive_after_month;
                break;
            }
            case ReportKind::Profit: {
                const OwnerSet owners(pool, options.attribute_linked);
                for (const auto& o : orders) {
                    if (!is_profit_taking(o.category) || !owners.contains(o.sender)) continue;
                    ProfitDay& day = out.daily_profit_taking[floor_div(o.timestamp - pool.created_time_pool,
                                                                       kSecondsPerDay)];
                    ++day.event_count;
                    day.realized_usd += o.base_usd();
                }
                break;
            }
            case ReportKind::Trend: {
                const OwnerSet owners(pool, options.attribute_linked);
                for (const auto& o : orders) {
                    if (owners.contains(o.sender)) continue;
                    TrendDay& day = out.daily_trend[floor_div(o.timestamp, kSecondsPerDay)];
                    ++day.user_activity_count;
                    day.volume_usd += o.base_usd();
                }
                break;
            }
        }
    }
    return out;
}

void write_report_csv(std::ostream& out, const AnalysisReport& report, ReportKind which) {
    std::string line;
    switch (which) {
        case ReportKind::Age:
            out << "age_days,count,alive_count\n";
            for (const auto& [age, b] : report.age_histogram) {
                out << age << ',' << b.count << ',' << b.alive_count << '\n';
            }
            break;
        case ReportKind::Profit:
            out << "day,event_count,realized_usd\n";
            for (const auto& [day, p] : report.daily_profit_taking) {
                line.clear();
                append_double(line, p.realized_usd);
                out << day << ',' << p.event_count << ',' << line << '\n';
            }
            break;
        case ReportKind::Trend:
            out << "day,user_activity_count,volume_usd\n";
            for (const auto& [day, t] : report.daily_trend) {
                line.clear();
                append_double(line, t.volume_usd);
                out << day << ',' << t.user_activity_count << ',' << line << '\n';
            }
            break;
    }
}

}  // namespace slid::io
