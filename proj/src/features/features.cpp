#include "slid/features.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "slid/error.hpp"
#include "slid/format.hpp"

namespace slid {

namespace {

constexpr std::array<std::string_view, kFeatureCount> kNames = {
    // owner activity
    "Owner_dep", "Owner_with", "Owner_buy", "Owner_sell", "Owner_profittaking",
    // user activity
    "User_dep", "User_with", "User_buy", "User_sell", "User_count", "User_countfirst", "User_counthigh",
    "User_countlast", "User_countlow", "RUser_firstonhigh", "RUser_lastonlow", "RUser_firstonlow",
    "RUser_firstonlast", "RUser_lastonhigh", "RUser_lowonhigh",
    // profit
    "Owner_i", "Owner_u", "Owner_r", "Owner_total", "ROwner_toni", "ROwner_roni", "ROwner_roi",
    "ROwner_uonr", "ROwner_uoni", "Impact_min", "Impact_max", "Impact_avg", "RImpact_minonavg",
    "RImpact_maxonavg", "RImpact_minonmax",
    // pool
    "Age", "IsAlive", "Vol_f", "Vol_l", "Vol_max", "Vol_min", "Pval_f", "Pval_l", "Pval_max", "Pval_min",
    "RVol_fonl", "RVol_fonmin", "RVol_fonmax", "RVol_lonmin", "RVol_lonmax", "RVol_minmax", "RPval_fonl",
    "RPval_fonmin", "RPval_fonmax", "RPval_lonmin", "RPval_lonmax", "RPval_minmax"};

// Writes features by name in canonical order and checks nothing is skipped.
class Builder {
public:
    explicit Builder(FeatureVector& out) : out_(out) {}

    void set(std::string_view name, double value, bool missing = false) {
        if (kNames[next_] != name) {
            throw Error(ErrorCode::DimensionMismatch,
                        "feature " + std::string(name) + " written out of order");
        }
        out_.values[next_] = value;
        out_.missing[next_] = missing;
        ++next_;
    }

    void ratio(std::string_view name, double num, double den) {
        if (den != 0.0) {
            set(name, num / den);
        } else if (num == 0.0) {
            set(name, 0.0, true);
        } else {
            set(name, num > 0.0 ? kRatioCap : -kRatioCap, true);
        }
    }

    std::size_t written() const noexcept { return next_; }

private:
    FeatureVector& out_;
    std::size_t next_ = 0;
};

struct DayBucket {
    double volume = 0.0;
    double pool_value_end = 0.0;
    std::int64_t users = 0;
    bool seen = false;
};

}  // namespace

const std::array<std::string_view, kFeatureCount>& feature_names() noexcept { return kNames; }

std::size_t feature_index(std::string_view name) noexcept {
    const auto it = std::find(kNames.begin(), kNames.end(), name);
    return static_cast<std::size_t>(it - kNames.begin());
}

double FeatureVector::operator[](std::string_view name) const {
    const auto i = feature_index(name);
    if (i >= kFeatureCount) throw Error(ErrorCode::DimensionMismatch, "unknown feature " + std::string(name));
    return values[i];
}

FeatureVector extract_features(const PoolRecord& pool, std::span<const DexOrder> input, std::int64_t days,
                               const FeatureOptions& options) {
    if (days < 1) throw Error(ErrorCode::PreconditionViolated, "window must be at least one day");

    std::vector<DexOrder> sorted;
    std::span<const DexOrder> orders = input;
    if (!std::is_sorted(input.begin(), input.end(), order_before)) {
        sorted.assign(input.begin(), input.end());
        sort_orders(sorted);
        orders = sorted;
    }

    const UnixTime start = pool.created_time_pool;
    const UnixTime window_end = start + days * kSecondsPerDay;
    const auto cut = std::partition_point(orders.begin(), orders.end(),
                                          [&](const DexOrder& o) { return o.timestamp < window_end; });
    orders = orders.first(static_cast<std::size_t>(cut - orders.begin()));

    FeatureVector fv;
    fv.pool_address = pool.pool_address;
    fv.window_days = days;
    if (orders.empty()) {
        fv.missing.set();
        return fv;
    }

    const OwnerSet owners(pool, options.attribute_linked);
    MetricsOptions metrics_options;
    metrics_options.first_month_seconds = options.first_month_seconds;
    metrics_options.attribute_linked = options.attribute_linked;
    metrics_options.keep_events = false;
    metrics_options.ledger.strict_pool_value = false;
    PoolAccumulator acc(pool, metrics_options);

    auto day_of = [&](UnixTime ts) {
        return static_cast<std::size_t>(std::max<UnixTime>(0, ts - start) / kSecondsPerDay);
    };
    const std::size_t n_days = day_of(orders.back().timestamp) + 1;
    std::vector<DayBucket> buckets(n_days);
    std::vector<std::pair<std::size_t, std::string_view>> user_days;
    std::array<std::int64_t, 4> owner_counts{};
    std::array<std::int64_t, 4> user_counts{};

    for (const auto& order : orders) {
        acc.add(order);
        const auto day = day_of(order.timestamp);
        buckets[day].volume += order.base_usd();
        buckets[day].pool_value_end = acc.state().pool_value_usd;
        buckets[day].seen = true;
        const auto cat = static_cast<std::size_t>(order.category);
        if (owners.contains(order.sender)) {
            ++owner_counts[cat];
        } else {
            ++user_counts[cat];
            user_days.emplace_back(day, order.sender);
        }
    }
    // Days without orders keep the previous closing value.
    for (std::size_t d = 1; d < n_days; ++d) {
        if (!buckets[d].seen) {
            buckets[d].pool_value_end = buckets[d - 1].pool_value_end;
        }
    }

    std::sort(user_days.begin(), user_days.end());
    user_days.erase(std::unique(user_days.begin(), user_days.end()), user_days.end());
    for (const auto& [day, sender] : user_days) ++buckets[day].users;
    std::vector<std::string_view> distinct_users;
    distinct_users.reserve(user_days.size());
    for (const auto& entry : user_days) distinct_users.push_back(entry.second);
    std::sort(distinct_users.begin(), distinct_users.end());
    const auto user_total =
        std::unique(distinct_users.begin(), distinct_users.end()) - distinct_users.begin();

    const ProfitReport report = acc.report();
    Builder b(fv);

    const auto idx = [](Category c) { return static_cast<std::size_t>(c); };
    b.set("Owner_dep", static_cast<double>(owner_counts[idx(Category::Deposit)]));
    b.set("Owner_with", static_cast<double>(owner_counts[idx(Category::Withdraw)]));
    b.set("Owner_buy", static_cast<double>(owner_counts[idx(Category::Buy)]));
    b.set("Owner_sell", static_cast<double>(owner_counts[idx(Category::Sell)]));
    b.set("Owner_profittaking", static_cast<double>(report.profit_taking_count));

    b.set("User_dep", static_cast<double>(user_counts[idx(Category::Deposit)]));
    b.set("User_with", static_cast<double>(user_counts[idx(Category::Withdraw)]));
    b.set("User_buy", static_cast<double>(user_counts[idx(Category::Buy)]));
    b.set("User_sell", static_cast<double>(user_counts[idx(Category::Sell)]));
    b.set("User_count", static_cast<double>(user_total));
    const double first = static_cast<double>(buckets.front().users);
    const double last = static_cast<double>(buckets.back().users);
    double high = first;
    double low = first;
    for (const auto& bucket : buckets) {
        high = std::max(high, static_cast<double>(bucket.users));
        low = std::min(low, static_cast<double>(bucket.users));
    }
    b.set("User_countfirst", first);
    b.set("User_counthigh", high);
    b.set("User_countlast", last);
    b.set("User_countlow", low);
    b.ratio("RUser_firstonhigh", first, high);
    b.ratio("RUser_lastonlow", last, low);
    b.ratio("RUser_firstonlow", first, low);
    b.ratio("RUser_firstonlast", first, last);
    b.ratio("RUser_lastonhigh", last, high);
    b.ratio("RUser_lowonhigh", low, high);

    const double invested = report.invested_usd;
    const double unrealized = report.unrealized_current_usd;
    const double returned = report.returned_usd;
    const double total = returned + unrealized - invested - report.gas_usd;
    b.set("Owner_i", invested);
    b.set("Owner_u", unrealized);
    b.set("Owner_r", returned);
    b.set("Owner_total", total);
    b.ratio("ROwner_toni", total, invested);
    b.ratio("ROwner_roni", returned, invested);
    b.ratio("ROwner_roi", returned - invested, invested);
    b.ratio("ROwner_uonr", unrealized, returned);
    b.ratio("ROwner_uoni", unrealized, invested);
    const bool no_impacts = report.finite_impacts == 0;
    const double imin = report.min_impact;
    const double imax = report.max_impact;
    const double iavg = report.mean_impact();
    b.set("Impact_min", imin, no_impacts);
    b.set("Impact_max", imax, no_impacts);
    b.set("Impact_avg", iavg, no_impacts);
    b.ratio("RImpact_minonavg", imin, iavg);
    b.ratio("RImpact_maxonavg", imax, iavg);
    b.ratio("RImpact_minonmax", imin, imax);

    const bool alive = orders.back().timestamp >= window_end - options.alive_horizon_seconds;
    b.set("Age", alive ? static_cast<double>(days) : static_cast<double>(n_days));
    b.set("IsAlive", alive ? 1.0 : 0.0);
    double vmax = buckets.front().volume;
    double vmin = vmax;
    double pmax = buckets.front().pool_value_end;
    double pmin = pmax;
    for (const auto& bucket : buckets) {
        vmax = std::max(vmax, bucket.volume);
        vmin = std::min(vmin, bucket.volume);
        pmax = std::max(pmax, bucket.pool_value_end);
        pmin = std::min(pmin, bucket.pool_value_end);
    }
    const double vf = buckets.front().volume;
    const double vl = buckets.back().volume;
    const double pf = buckets.front().pool_value_end;
    const double pl = buckets.back().pool_value_end;
    b.set("Vol_f", vf);
    b.set("Vol_l", vl);
    b.set("Vol_max", vmax);
    b.set("Vol_min", vmin);
    b.set("Pval_f", pf);
    b.set("Pval_l", pl);
    b.set("Pval_max", pmax);
    b.set("Pval_min", pmin);
    b.ratio("RVol_fonl", vf, vl);
    b.ratio("RVol_fonmin", vf, vmin);
    b.ratio("RVol_fonmax", vf, vmax);
    b.ratio("RVol_lonmin", vl, vmin);
    b.ratio("RVol_lonmax", vl, vmax);
    b.ratio("RVol_minmax", vmin, vmax);
    b.ratio("RPval_fonl", pf, pl);
    b.ratio("RPval_fonmin", pf, pmin);
    b.ratio("RPval_fonmax", pf, pmax);
    b.ratio("RPval_lonmin", pl, pmin);
    b.ratio("RPval_lonmax", pl, pmax);
    b.ratio("RPval_minmax", pmin, pmax);

    if (b.written() != kFeatureCount) {
        throw Error(ErrorCode::DimensionMismatch, "feature vector incomplete");
    }
    return fv;
}

void write_features_csv(std::ostream& out, std::span<const FeatureVector> rows) {
    std::string line = "pool_address,window_days,label";
    for (const auto name : kNames) {
        line += ',';
        line += name;
    }
    out << line << '\n';
    for (const auto& row : rows) {
        line = row.pool_address;
        line += ',';
        line += std::to_string(row.window_days);
        line += row.label ? ",1" : ",0";
        for (const double v : row.values) {
            line += ',';
            append_double(line, v);
        }
        out << line << '\n';
    }
}

std::vector<FeatureVector> read_features_csv(std::istream& in, const std::string& origin) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw SchemaError(origin, 1, "missing header");
    {
        std::string expected = "pool_address,window_days,label";
        for (const auto name : kNames) {
            expected += ',';
            expected += name;
        }
        if (line != expected) throw SchemaError(origin, 1, "unexpected feature header");
    }
    std::vector<FeatureVector> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string_view> cells;
        std::string_view rest = line;
        while (true) {
            const auto comma = rest.find(',');
            cells.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        if (cells.size() != kFeatureCount + 3) {
            throw SchemaError(origin, line_no, "expected " + std::to_string(kFeatureCount + 3) + " columns");
        }
        FeatureVector fv;
        fv.pool_address = std::string(cells[0]);
        const auto window = parse_int(cells[1]);
        if (!window || (cells[2] != "0" && cells[2] != "1")) {
            throw SchemaError(origin, line_no, "bad window_days or label");
        }
        fv.window_days = *window;
        fv.label = cells[2] == "1";
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            const auto v = parse_double(cells[i + 3]);
            if (!v) throw SchemaError(origin, line_no, "bad value for " + std::string(kNames[i]));
            fv.values[i] = *v;
            fv.missing[i] = false;
        }
        rows.push_back(std::move(fv));
    }
    return rows;
}

}  // namespace slid
