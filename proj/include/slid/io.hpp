#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "slid/metrics.hpp"
#include "slid/types.hpp"
#include "slid/validators.hpp"

namespace slid::io {

// ---- JSONL rows ----------------------------------------------------------

// One canonical line per row, newline included. Token amounts are written as
// decimal strings, USD values as JSON numbers, both in shortest round-trip form.
void append_pool_json(std::string& out, const PoolRecord& pool);
void append_order_json(std::string& out, const DexOrder& order);
void append_profile_json(std::string& out, const Address& token, const SecurityProfile& profile);

// Throw SchemaError carrying `file` and `line` on malformed rows.
PoolRecord parse_pool_json(std::string_view line, const std::string& file = "<pools>", std::size_t line_no = 0);
DexOrder parse_order_json(std::string_view line, const std::string& file = "<orders>", std::size_t line_no = 0);
std::pair<Address, SecurityProfile> parse_profile_json(std::string_view line, const std::string& file = "<profiles>",
                                                       std::size_t line_no = 0);

// ---- data sources ------------------------------------------------------------

// Where pool, order and security rows come from. Files are the only shipped
// source; a chain indexer would implement the same three calls.
class ChainDataSource {
public:
    virtual ~ChainDataSource() = default;

    virtual std::vector<PoolRecord> pools() = 0;
    // Visits orders in source order. Returning false stops the scan.
    virtual void scan_orders(const std::function<bool(DexOrder&&)>& visit) = 0;
    virtual std::map<Address, SecurityProfile> profiles() = 0;
    virtual bool has_profiles() const = 0;
};

class FileSource : public ChainDataSource {
public:
    FileSource(std::filesystem::path pools, std::filesystem::path orders,
               std::optional<std::filesystem::path> profiles = std::nullopt);

    std::vector<PoolRecord> pools() override;
    void scan_orders(const std::function<bool(DexOrder&&)>& visit) override;
    std::map<Address, SecurityProfile> profiles() override;
    bool has_profiles() const override { return profiles_.has_value(); }

    const std::filesystem::path& orders_path() const noexcept { return orders_; }

private:
    std::filesystem::path pools_;
    std::filesystem::path orders_;
    std::optional<std::filesystem::path> profiles_;
};

// ---- dataset -----------------------------------------------------------------

struct IngestStats {
    std::int64_t pools_read = 0;
    std::int64_t orders_read = 0;
    std::int64_t profiles_read = 0;
    std::int64_t orders_kept = 0;
    std::map<std::string, std::int64_t> skipped;  // reason -> rows

    std::int64_t skipped_total() const;
};

struct EnrichedPool {
    ProfitReport report;
    Verdict verdict;
};

struct IngestOptions {
    // When set, pools whose base token is not listed are dropped.
    std::optional<std::set<std::string>> base_whitelist;
};

struct Dataset {
    std::vector<PoolRecord> pools;                     // sorted by pool address
    std::map<Address, std::vector<DexOrder>> orders;   // per pool, replay order
    std::map<Address, SecurityProfile> profiles;       // keyed by token address
    bool profiles_loaded = false;
    std::map<Address, EnrichedPool> enriched;
    IngestStats stats;

    const PoolRecord* find_pool(const Address& address) const;
    std::optional<SecurityProfile> profile_for(const PoolRecord& pool) const;
    std::span<const DexOrder> orders_of(const Address& pool) const;
};

// Sorts by address, drops duplicates and non-whitelisted pools (counted in
// stats). Throws EmptyDataset when nothing is left.
std::vector<PoolRecord> admit_pools(std::vector<PoolRecord> raw, const std::optional<std::set<std::string>>& whitelist,
                                    IngestStats& stats, std::set<Address>* filtered = nullptr);

Dataset ingest(ChainDataSource& source, const IngestOptions& options = {});
Dataset ingest(const std::filesystem::path& pools, const std::filesystem::path& orders,
               const std::optional<std::filesystem::path>& profiles, const IngestOptions& options = {});

// Canonical re-emission: rows sorted by pool (and token) address, orders in
// replay order.
void write_pools(std::ostream& out, std::span<const PoolRecord> pools);
void write_orders(std::ostream& out, const Dataset& dataset);
void write_profiles(std::ostream& out, const std::map<Address, SecurityProfile>& profiles);
void write_dataset(const std::filesystem::path& dir, const Dataset& dataset);

// Base-token whitelist: one symbol or address per line, '#' comments.
std::set<std::string> load_whitelist(const std::filesystem::path& path);
const std::set<std::string>& default_whitelist();

// Runs metrics and the heuristic on every pool.
void enrich(Dataset& dataset, const HeuristicConfig& cfg, const MetricsOptions& options = {});

// ---- grouped order scan ----------------------------------------------------

// Visits each pool's orders as one sorted batch. Needs only one pool's orders
// in memory when the file keeps each pool's rows together; otherwise it falls
// back to loading the whole file. Pools without orders get an empty batch.
// Unknown-pool rows are skipped and counted.
void for_each_pool(ChainDataSource& source, std::span<const PoolRecord> pools,
                   const std::function<void(const PoolRecord&, std::span<const DexOrder>)>& visit,
                   IngestStats* stats = nullptr);

// ---- streaming detection ------------------------------------------------------

struct DetectRow {
    Address pool_address;
    Verdict verdict;
    ProfitReport report;
};

struct DetectOptions {
    HeuristicConfig heuristic;
    bool attribute_linked = false;
    std::optional<std::set<std::string>> base_whitelist;
};

struct DetectResult {
    std::vector<DetectRow> rows;  // sorted by pool address
    IngestStats stats;
    std::int64_t resorted_pools = 0;  // pools whose rows arrived out of order
};

// One pass over the orders with a constant-size accumulator per pool. Pools
// whose rows are not in replay order in the file are recomputed in a second,
// targeted pass.
DetectResult detect(ChainDataSource& source, const DetectOptions& options = {});

std::string anonymize(std::string_view address);

struct CsvOptions {
    bool anonymize = false;
};

void write_verdicts_csv(std::ostream& out, std::span<const DetectRow> rows, const CsvOptions& options = {});

// ---- pool reports ----------------------------------------------------------------

enum class ReportKind : std::uint8_t { Age, Profit, Trend };

std::optional<ReportKind> parse_report_kind(std::string_view text) noexcept;

struct AgeBucket {
    std::int64_t count = 0;
    std::int64_t alive_count = 0;
};

struct ProfitDay {
    std::int64_t event_count = 0;
    double realized_usd = 0.0;
};

struct TrendDay {
    std::int64_t user_activity_count = 0;
    double volume_usd = 0.0;
};

struct AnalysisReport {
    std::map<std::int64_t, AgeBucket> age_histogram;        // age in whole days
    std::map<std::int64_t, ProfitDay> daily_profit_taking;  // days since deployment
    std::map<std::int64_t, TrendDay> daily_trend;           // calendar day (unix days)
    std::int64_t pools_analyzed = 0;
    std::int64_t alive_after_month = 0;  // pools active for more than 30 days

    double alive_after_month_fraction() const {
        return pools_analyzed > 0 ? static_cast<double>(alive_after_month) / static_cast<double>(pools_analyzed) : 0.0;
    }
};

struct AnalyzeOptions {
    // Restrict to pools with this verdict; needs enrich() first.
    std::optional<Label> only_label;
    UnixTime alive_horizon_seconds = 30 * kSecondsPerDay;
    bool attribute_linked = false;
};

AnalysisReport analyze(const Dataset& dataset, ReportKind which, const AnalyzeOptions& options = {});

void write_report_csv(std::ostream& out, const AnalysisReport& report, ReportKind which);

}  // namespace slid::io
