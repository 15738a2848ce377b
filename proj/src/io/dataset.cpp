#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_set>

#include "slid/error.hpp"
#include "slid/io.hpp"
#include "slid/kv_config.hpp"

namespace slid::io {

namespace {

bool blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

template <typename F>
void read_lines(const std::filesystem::path& path, F&& visit) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::vector<char> buffer(1 << 20);
    in.rdbuf()->pubsetbuf(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (blank(line)) continue;
        if (!visit(std::string_view(line), line_no)) return;
    }
    if (in.bad()) throw Error(ErrorCode::IoError, "read failure on " + path.string());
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool whitelisted(const PoolRecord& pool, const std::set<std::string>& list) {
    return list.count(pool.base_address) != 0 || list.count(lower(pool.base_address)) != 0;
}

// Cheap check, without parsing JSON, that every pool's rows sit in one
// contiguous block of the orders file.
bool orders_grouped(const std::filesystem::path& path) {
    static constexpr std::string_view kKey = "\"pool_address\":\"";
    std::unordered_set<std::string> closed;
    std::string current;
    bool grouped = true;
    read_lines(path, [&](std::string_view line, std::size_t) {
        const auto at = line.find(kKey);
        if (at == std::string_view::npos) {
            grouped = false;
            return false;
        }
        const auto begin = at + kKey.size();
        const auto end = line.find('"', begin);
        if (end == std::string_view::npos) {
            grouped = false;
            return false;
        }
        const std::string_view pool = line.substr(begin, end - begin);
        if (pool != current) {
            if (closed.count(std::string(pool)) != 0) {
                grouped = false;
                return false;
            }
            if (!current.empty()) closed.insert(current);
            current.assign(pool);
        }
        return true;
    });
    return grouped;
}

}  // namespace

FileSource::FileSource(std::filesystem::path pools, std::filesystem::path orders,
                       std::optional<std::filesystem::path> profiles)
    : pools_(std::move(pools)), orders_(std::move(orders)), profiles_(std::move(profiles)) {}

std::vector<PoolRecord> FileSource::pools() {
    std::vector<PoolRecord> out;
    const std::string name = pools_.string();
    read_lines(pools_, [&](std::string_view line, std::size_t n) {
        out.push_back(parse_pool_json(line, name, n));
        return true;
    });
    return out;
}

void FileSource::scan_orders(const std::function<bool(DexOrder&&)>& visit) {
    const std::string name = orders_.string();
    read_lines(orders_, [&](std::string_view line, std::size_t n) { return visit(parse_order_json(line, name, n)); });
}

std::map<Address, SecurityProfile> FileSource::profiles() {
    std::map<Address, SecurityProfile> out;
    if (!profiles_) return out;
    const std::string name = profiles_->string();
    read_lines(*profiles_, [&](std::string_view line, std::size_t n) {
        auto [token, profile] = parse_profile_json(line, name, n);
        out.insert_or_assign(std::move(token), profile);
        return true;
    });
    return out;
}

std::int64_t IngestStats::skipped_total() const {
    std::int64_t total = 0;
    for (const auto& [reason, n] : skipped) total += n;
    return total;
}

const PoolRecord* Dataset::find_pool(const Address& address) const {
    const auto it = std::lower_bound(pools.begin(), pools.end(), address,
                                     [](const PoolRecord& p, const Address& a) { return p.pool_address < a; });
    return it != pools.end() && it->pool_address == address ? &*it : nullptr;
}

std::optional<SecurityProfile> Dataset::profile_for(const PoolRecord& pool) const {
    if (!profiles_loaded) return std::nullopt;
    const auto it = profiles.find(pool.paired_address);
    if (it == profiles.end()) return std::nullopt;
    return it->second;
}

std::span<const DexOrder> Dataset::orders_of(const Address& pool) const {
    const auto it = orders.find(pool);
    if (it == orders.end()) return {};
    return it->second;
}

std::vector<PoolRecord> admit_pools(std::vector<PoolRecord> raw, const std::optional<std::set<std::string>>& whitelist,
                                    IngestStats& stats, std::set<Address>* filtered) {
    stats.pools_read = static_cast<std::int64_t>(raw.size());
    if (raw.empty()) throw Error(ErrorCode::EmptyDataset, "pool file holds no rows");
    std::stable_sort(raw.begin(), raw.end(),
                     [](const PoolRecord& a, const PoolRecord& b) { return a.pool_address < b.pool_address; });
    std::vector<PoolRecord> pools;
    for (auto& p : raw) {
        if (!pools.empty() && pools.back().pool_address == p.pool_address) {
            ++stats.skipped["duplicate_pool"];
            continue;
        }
        if (whitelist && !whitelisted(p, *whitelist)) {
            ++stats.skipped["base_not_whitelisted"];
            if (filtered != nullptr) filtered->insert(p.pool_address);
            continue;
        }
        pools.push_back(std::move(p));
    }
    if (pools.empty()) throw Error(ErrorCode::EmptyDataset, "no pool passed the base-token whitelist");
    return pools;
}

Dataset ingest(ChainDataSource& source, const IngestOptions& options) {
    Dataset d;
    std::set<Address> filtered;
    d.pools = admit_pools(source.pools(), options.base_whitelist, d.stats, &filtered);
    for (const auto& p : d.pools) d.orders[p.pool_address];

    source.scan_orders([&](DexOrder&& o) {
        ++d.stats.orders_read;
        const auto it = d.orders.find(o.pool_address);
        if (it == d.orders.end()) {
            ++d.stats.skipped[filtered.count(o.pool_address) != 0 ? "pool_filtered" : "unknown_pool"];
            return true;
        }
        it->second.push_back(std::move(o));
        ++d.stats.orders_kept;
        return true;
    });
    for (auto& [pool, list] : d.orders) sort_orders(list);

    d.profiles_loaded = source.has_profiles();
    d.profiles = source.profiles();
    d.stats.profiles_read = static_cast<std::int64_t>(d.profiles.size());
    return d;
}

Dataset ingest(const std::filesystem::path& pools, const std::filesystem::path& orders,
               const std::optional<std::filesystem::path>& profiles, const IngestOptions& options) {
    FileSource source(pools, orders, profiles);
    return ingest(source, options);
}

void write_pools(std::ostream& out, std::span<const PoolRecord> pools) {
    std::string line;
    for (const auto& p : pools) {
        line.clear();
        append_pool_json(line, p);
        out << line;
    }
}

void write_orders(std::ostream& out, const Dataset& dataset) {
    std::string line;
    for (const auto& p : dataset.pools) {
        for (const auto& o : dataset.orders_of(p.pool_address)) {
            line.clear();
            append_order_json(line, o);
            out << line;
        }
    }
}

void write_profiles(std::ostream& out, const std::map<Address, SecurityProfile>& profiles) {
    std::string line;
    for (const auto& [token, profile] : profiles) {
        line.clear();
        append_profile_json(line, token, profile);
        out << line;
    }
}

void write_dataset(const std::filesystem::path& dir, const Dataset& dataset) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw Error(ErrorCode::IoError, "cannot write " + (dir / name).string());
        return f;
    };
    {
        auto f = open("pools.jsonl");
        write_pools(f, dataset.pools);
    }
    {
        auto f = open("orders.jsonl");
        write_orders(f, dataset);
    }
    if (dataset.profiles_loaded) {
        auto f = open("profiles.jsonl");
        write_profiles(f, dataset.profiles);
    }
}

const std::set<std::string>& default_whitelist() {
    // Symbols for readability plus the mainnet contract addresses they stand for.
    static const std::set<std::string> list{
        "WETH", "USDT", "USDC", "DAI",
        "0xc02aaa39b223fe8d0a0e5c4f27ead9083c756cc2",
        "0xdac17f958d2ee523a2206206994597c13d831ec7",
        "0xa0b86991c6218b36c1d19d4a2e9eb0ce3606eb48",
        "0x6b175474e89094c44da98b954eedeac495271d0f",
    };
    return list;
}

std::set<std::string> load_whitelist(const std::filesystem::path& path) {
    std::set<std::string> out;
    read_lines(path, [&](std::string_view line, std::size_t) {
        const auto hash = line.find('#');
        line = line.substr(0, hash);
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string_view::npos) return true;
        const auto last = line.find_last_not_of(" \t");
        const std::string entry(line.substr(first, last - first + 1));
        out.insert(entry.rfind("0x", 0) == 0 ? lower(entry) : entry);
        return true;
    });
    if (out.empty()) throw Error(ErrorCode::ConfigError, path.string() + ": whitelist is empty");
    return out;
}

void enrich(Dataset& dataset, const HeuristicConfig& cfg, const MetricsOptions& options) {
    dataset.enriched.clear();
    for (const auto& pool : dataset.pools) {
        EnrichedPool e;
        e.report = compute_report(pool, dataset.orders_of(pool.pool_address), options);
        e.verdict = classify_pool(pool, dataset.profile_for(pool), e.report, cfg);
        dataset.enriched.emplace(pool.pool_address, std::move(e));
    }
}

void for_each_pool(ChainDataSource& source, std::span<const PoolRecord> pools,
                   const std::function<void(const PoolRecord&, std::span<const DexOrder>)>& visit,
                   IngestStats* stats) {
    std::map<Address, const PoolRecord*> index;
    for (const auto& p : pools) index.emplace(p.pool_address, &p);
    IngestStats local;
    IngestStats& s = stats != nullptr ? *stats : local;

    auto* files = dynamic_cast<FileSource*>(&source);
    const bool grouped = files != nullptr && orders_grouped(files->orders_path());

    std::set<Address> seen;
    if (grouped) {
        std::vector<DexOrder> batch;
        const PoolRecord* current = nullptr;
        auto flush = [&] {
            if (current == nullptr) return;
            sort_orders(batch);
            visit(*current, batch);
            seen.insert(current->pool_address);
            batch.clear();
        };
        source.scan_orders([&](DexOrder&& o) {
            ++s.orders_read;
            if (current == nullptr || o.pool_address != current->pool_address) {
                const auto it = index.find(o.pool_address);
                if (it == index.end()) {
                    ++s.skipped["unknown_pool"];
                    return true;
                }
                flush();
                current = it->second;
            }
            ++s.orders_kept;
            batch.push_back(std::move(o));
            return true;
        });
        flush();
    } else {
        std::map<Address, std::vector<DexOrder>> all;
        source.scan_orders([&](DexOrder&& o) {
            ++s.orders_read;
            if (index.count(o.pool_address) == 0) {
                ++s.skipped["unknown_pool"];
                return true;
            }
            ++s.orders_kept;
            all[o.pool_address].push_back(std::move(o));
            return true;
        });
        for (auto& [address, list] : all) {
            sort_orders(list);
            visit(*index.at(address), list);
            seen.insert(address);
        }
    }
    for (const auto& p : pools) {
        if (seen.count(p.pool_address) == 0) visit(p, {});
    }
}

}  // namespace slid::io
