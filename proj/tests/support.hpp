#pragma once

// Test-side helpers: a small deterministic generator, order builders and
// oracles that share no code with the library.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "slid/types.hpp"

namespace testing {

// splitmix64; hand-rolled so property tests do not depend on the library RNG.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    bool chance(double p) { return unit() < p; }
    // Log-uniform, for amounts spanning several orders of magnitude.
    double magnitude(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

private:
    std::uint64_t state_;
};

inline const std::string kPool = "0xpool000000000000000000000000000000000001";
inline const std::string kOwner = "0xowner00000000000000000000000000000000001";
inline const std::string kBase = "0xbase0000000000000000000000000000000000001";
inline const std::string kToken = "0xtoken000000000000000000000000000000000001";

inline slid::PoolRecord make_pool(bool burned = false, slid::UnixTime created = 1'000'000) {
    slid::PoolRecord p;
    p.pool_address = kPool;
    p.base_address = kBase;
    p.paired_address = kToken;
    p.owner_address = kOwner;
    p.created_time_pool = created;
    p.created_time_token = created;
    p.lpt_burned = burned;
    return p;
}

// Order moving `usd` of base token (price 1) and `paired` paired units.
inline slid::DexOrder make_order(slid::Category c, const std::string& sender, double usd, slid::UnixTime ts,
                                 double paired = 0.0, double gas = 0.0) {
    static std::int64_t seq = 0;
    slid::DexOrder o;
    o.block = ts / 12;
    o.timestamp = ts;
    o.hash = "0xh" + std::to_string(++seq);
    o.category = c;
    o.pool_address = kPool;
    o.sender = sender;
    o.y_base = usd;
    o.y_paired = paired;
    o.price_base = 1.0;
    o.price_paired = paired > 0.0 ? usd / paired : 0.0;
    o.gas_fee_usd = gas;
    return o;
}

// Owner share by direct liquidity-unit bookkeeping: deposits mint units at
// the current value per unit, withdrawals burn them, swaps only move value.
// Kept in long double so it is a tighter reference than the code under test.
class UnitOracle {
public:
    void apply(slid::Category c, long double usd, bool owner) {
        switch (c) {
            case slid::Category::Buy: value_ += usd; return;
            case slid::Category::Sell: value_ -= usd; return;
            case slid::Category::Deposit: {
                const long double minted = total_ == 0.0L || value_ <= 0.0L ? usd : usd * total_ / value_;
                total_ += minted;
                if (owner) owner_ += minted;
                value_ += usd;
                return;
            }
            case slid::Category::Withdraw: {
                const long double burned = usd * total_ / value_;
                total_ -= burned;
                if (owner) owner_ -= burned;
                value_ -= usd;
                return;
            }
        }
    }

    double share() const { return total_ > 0.0L ? static_cast<double>(owner_ / total_) : 0.0; }
    double value() const { return static_cast<double>(value_); }
    double owner_units() const { return static_cast<double>(owner_); }
    double total_units() const { return static_cast<double>(total_); }

private:
    long double value_ = 0.0L;
    long double owner_ = 0.0L;
    long double total_ = 0.0L;
};

inline double rel_diff(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1.0});
    return std::abs(a - b) / scale;
}

// Fresh scratch directory under the build tree's temp area.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("slid_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testing
