#include <ostream>
#include <unordered_map>

#include "slid/error.hpp"
#include "slid/format.hpp"
#include "slid/io.hpp"

namespace slid::io {

namespace {

struct Slot {
    explicit Slot(PoolAccumulator a) : acc(std::move(a)) {}

    PoolAccumulator acc;
    UnixTime last_timestamp = 0;
    std::int64_t last_block = 0;
    std::string last_hash;
    bool started = false;
    bool out_of_order = false;
};

bool precedes_last(const Slot& slot, const DexOrder& o) {
    if (!slot.started) return false;
    return std::tie(o.timestamp, o.block, o.hash) <
           std::tie(slot.last_timestamp, slot.last_block, slot.last_hash);
}

}  // namespace

DetectResult detect(ChainDataSource& source, const DetectOptions& options) {
    DetectResult result;
    const std::vector<PoolRecord> pools =
        admit_pools(source.pools(), options.base_whitelist, result.stats, nullptr);
    const std::map<Address, SecurityProfile> profiles = source.profiles();
    const bool have_profiles = source.has_profiles();
    result.stats.profiles_read = static_cast<std::int64_t>(profiles.size());

    MetricsOptions metrics;
    metrics.first_month_seconds = options.heuristic.first_month_seconds;
    metrics.attribute_linked = options.attribute_linked;
    metrics.keep_events = false;
    metrics.ledger.strict_pool_value = false;

    std::vector<Slot> slots;
    slots.reserve(pools.size());
    std::unordered_map<std::string, std::size_t> index;
    index.reserve(pools.size() * 2);
    for (std::size_t i = 0; i < pools.size(); ++i) {
        slots.emplace_back(PoolAccumulator(pools[i], metrics));
        index.emplace(pools[i].pool_address, i);
    }

    source.scan_orders([&](DexOrder&& o) {
        ++result.stats.orders_read;
        const auto it = index.find(o.pool_address);
        if (it == index.end()) {
            ++result.stats.skipped["unknown_pool"];
            return true;
        }
        ++result.stats.orders_kept;
        Slot& slot = slots[it->second];
        if (slot.out_of_order) return true;
        if (precedes_last(slot, o)) {
            slot.out_of_order = true;
            return true;
        }
        slot.acc.add(o);
        slot.started = true;
        slot.last_timestamp = o.timestamp;
        slot.last_block = o.block;
        slot.last_hash = std::move(o.hash);
        return true;
    });

    // Second pass only for pools whose rows were not in replay order.
    std::map<Address, std::vector<DexOrder>> late;
    for (std::size_t i = 0; i < pools.size(); ++i) {
        if (slots[i].out_of_order) late[pools[i].pool_address];
    }
    if (!late.empty()) {
        result.resorted_pools = static_cast<std::int64_t>(late.size());
        source.scan_orders([&](DexOrder&& o) {
            const auto it = late.find(o.pool_address);
            if (it != late.end()) it->second.push_back(std::move(o));
            return true;
        });
        for (auto& [address, list] : late) {
            sort_orders(list);
            Slot& slot = slots[index.at(address)];
            slot.acc = PoolAccumulator(pools[index.at(address)], metrics);
            for (const auto& o : list) slot.acc.add(o);
        }
    }

    result.rows.reserve(pools.size());
    for (std::size_t i = 0; i < pools.size(); ++i) {
        std::optional<SecurityProfile> profile;
        if (have_profiles) {
            const auto it = profiles.find(pools[i].paired_address);
            if (it != profiles.end()) profile = it->second;
        }
        DetectRow row;
        row.pool_address = pools[i].pool_address;
        row.report = slots[i].acc.report();
        row.verdict = classify_pool(pools[i], profile, row.report, options.heuristic);
        result.rows.push_back(std::move(row));
    }
    return result;
}

std::string anonymize(std::string_view address) {
    if (address.size() <= 10) return std::string(address);
    return std::string(address.substr(0, 5)) + "..." + std::string(address.substr(address.size() - 5));
}

void write_verdicts_csv(std::ostream& out, std::span<const DetectRow> rows, const CsvOptions& options) {
    out << "pool_address,label,honeypot_pass,profit_pass,owner_activity_pass,realized_usd,unrealized_1m_usd,"
           "max_impact,c\n";
    std::string line;
    auto flag = [](bool v) { return v ? "true" : "false"; };
    for (const auto& r : rows) {
        line.clear();
        line += options.anonymize ? anonymize(r.pool_address) : r.pool_address;
        line += ',';
        line += to_string(r.verdict.label);
        line += ',';
        line += r.verdict.honeypot_unknown ? "unknown" : flag(r.verdict.honeypot_pass);
        line += ',';
        line += flag(r.verdict.profit_pass);
        line += ',';
        line += flag(r.verdict.owner_activity_pass);
        line += ',';
        append_double(line, r.report.realized_profit_usd);
        line += ',';
        append_double(line, r.report.unrealized_first_month_usd);
        line += ',';
        append_double(line, r.report.max_impact);
        line += ',';
        line += std::to_string(r.report.profit_taking_count);
        line += '\n';
        out << line;
    }
}

}  // namespace slid::io
