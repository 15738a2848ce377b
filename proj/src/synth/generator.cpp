#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/lognormal_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "slid/amm.hpp"
#include "slid/error.hpp"
#include "slid/synth.hpp"

namespace slid::synth {

namespace {

constexpr std::array<std::string_view, 6> kKindNames{"Legitimate", "RugPull",    "Honeypot",
                                                     "SLID",       "SlidSlow",   "SlidMultiAddress"};

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Boost distributions give the same stream on every platform, unlike <random>'s.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return boost::random::uniform_real_distribution<double>(lo, hi)(engine_); }
    bool chance(double p) { return uniform(0.0, 1.0) < p; }
    double lognormal(double sigma) {
        return boost::random::lognormal_distribution<double>(-0.5 * sigma * sigma, sigma)(engine_);
    }
    double exponential(double mean) { return boost::random::exponential_distribution<double>(1.0 / mean)(engine_); }
    std::int64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        return boost::random::poisson_distribution<std::int64_t, double>(mean)(engine_);
    }
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return boost::random::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
    }
    std::uint64_t bits() { return engine_(); }

private:
    boost::random::mt19937_64 engine_;
};

enum class Role : std::uint64_t { Pool = 1, Owner, Base, Paired, Investor, Linked, Hash };

std::string hex(std::uint64_t v, int digits) {
    std::string out(static_cast<std::size_t>(digits), '0');
    for (int i = digits - 1; i >= 0 && v != 0; --i, v >>= 4) {
        out[static_cast<std::size_t>(i)] = "0123456789abcdef"[v & 0xF];
    }
    return out;
}

std::string address(std::uint64_t seed, std::uint64_t pool_index, Role role, std::uint64_t index = 0) {
    std::uint64_t h = splitmix(seed ^ splitmix(pool_index + 0x51D));
    h = splitmix(h ^ (static_cast<std::uint64_t>(role) << 56) ^ index);
    const std::uint64_t a = splitmix(h);
    const std::uint64_t b = splitmix(a);
    const std::uint64_t c = splitmix(b);
    return "0x" + hex(a, 16) + hex(b, 16) + hex(c >> 32, 8);
}

bool is_slid_kind(ScenarioKind kind) {
    return kind == ScenarioKind::SLID || kind == ScenarioKind::SlidSlow || kind == ScenarioKind::SlidMultiAddress;
}

enum class Action : std::uint8_t {
    OwnerDeposit,
    InvestorBuy,
    InvestorSell,
    InvestorDeposit,
    InvestorWithdraw,
    NoiseBuy,
    OwnerExtraDeposit,
    Drain,
};

// One planned event. All randomness is drawn while planning, so replaying the
// plan at a different investor scale consumes no further random numbers.
struct Planned {
    double t = 0.0;  // seconds after deployment
    Action action = Action::InvestorBuy;
    std::int64_t actor = 0;
    double a = 0.0;
    double b = 0.0;
    double gas = 0.0;
};

struct Plan {
    std::vector<Planned> events;
    double deployment_gas = 0.0;
    std::int64_t investors = 0;
};

double default_arrival(const ScenarioConfig& c) {
    switch (c.kind) {
        case ScenarioKind::Legitimate: return 5.0;
        case ScenarioKind::RugPull: return 60.0;
        case ScenarioKind::Honeypot: return 20.0;
        default: break;
    }
    const double span = c.kind == ScenarioKind::SlidSlow
                            ? static_cast<double>(c.lifetime_days)
                            : std::max<double>(1.0, static_cast<double>(c.lifetime_days));
    return std::max(5.0, 25.0 * static_cast<double>(c.slid_drain_count) / span);
}

double default_noise(const ScenarioConfig& c) {
    return is_slid_kind(c.kind) ? 1.0 : (c.kind == ScenarioKind::Legitimate ? 0.05 : 0.0);
}

// Time at which the pool's scripted activity ends, in seconds after deployment.
double horizon_seconds(const ScenarioConfig& c, Rng& rng, double& rug_time) {
    const double day = static_cast<double>(kSecondsPerDay);
    switch (c.kind) {
        case ScenarioKind::RugPull:
            rug_time = (static_cast<double>(c.rug_drain_day) + rng.uniform(0.6, 0.95)) * day;
            return rug_time;
        default:
            return static_cast<double>(c.lifetime_days) * day;
    }
}

Plan make_plan(const ScenarioConfig& c, Rng& rng) {
    const double day = static_cast<double>(kSecondsPerDay);
    Plan plan;
    plan.deployment_gas = rng.uniform(20.0, 150.0);
    auto gas = [&] { return rng.uniform(1.0, 15.0); };

    double rug_time = 0.0;
    const double horizon = horizon_seconds(c, rng, rug_time);
    plan.events.push_back({0.0, Action::OwnerDeposit, 0, 0.0, 0.0, gas()});

    // Investors.
    const double rate = c.investor_arrival > 0.0 ? c.investor_arrival : default_arrival(c);
    const double first_arrival = 60.0;
    const double arrival_span = std::max(0.0, horizon - first_arrival - 120.0);
    std::int64_t arrivals = rng.poisson(rate * arrival_span / day);
    std::vector<double> times(static_cast<std::size_t>(arrivals));
    for (auto& t : times) t = first_arrival + rng.uniform(0.0, arrival_span);
    std::sort(times.begin(), times.end());
    // A last buy near the end of the lifetime pins the pool's observed age.
    if (c.kind != ScenarioKind::RugPull) times.push_back(std::max(first_arrival, horizon - 60.0));

    const bool sells_allowed = c.kind != ScenarioKind::Honeypot;
    const bool deposits_allowed = c.kind != ScenarioKind::Honeypot && c.kind != ScenarioKind::RugPull;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto n = static_cast<std::int64_t>(i);
        const std::int64_t investor =
            n < c.investor_count ? n : rng.integer(0, std::max<std::int64_t>(0, c.investor_count - 1));
        plan.investors = std::max(plan.investors, investor + 1);
        const double size = rng.lognormal(0.5);
        if (deposits_allowed && rng.chance(c.investor_deposit_probability)) {
            plan.events.push_back({times[i], Action::InvestorDeposit, investor, size, 0.0, gas()});
            if (rng.chance(0.5)) {
                const double later = times[i] + rng.exponential(10.0 * day);
                if (later < horizon) plan.events.push_back({later, Action::InvestorWithdraw, investor, 1.0, 0.0, gas()});
            }
            continue;
        }
        plan.events.push_back({times[i], Action::InvestorBuy, investor, size, 0.0, gas()});
        if (sells_allowed && rng.chance(c.investor_seller_fraction)) {
            const double later = times[i] + rng.exponential(5.0 * day);
            const double fraction = rng.uniform(0.1, 1.0);
            if (later < horizon) plan.events.push_back({later, Action::InvestorSell, investor, fraction, 0.0, gas()});
        }
    }

    // Owner noise trades: small buys that never take profit.
    const double noise_rate = c.owner_noise_trades_per_day >= 0.0 ? c.owner_noise_trades_per_day : default_noise(c);
    const double noise_end = c.kind == ScenarioKind::RugPull ? rug_time : horizon;
    const std::int64_t noise = rng.poisson(noise_rate * noise_end / day);
    const std::int64_t linked = std::max<std::int64_t>(1, c.linked_address_count);
    for (std::int64_t i = 0; i < noise; ++i) {
        const double t = rng.uniform(30.0, std::max(31.0, noise_end - 30.0));
        const std::int64_t actor = c.kind == ScenarioKind::SlidMultiAddress ? rng.integer(0, linked - 1) : -1;
        plan.events.push_back({t, Action::NoiseBuy, actor, rng.uniform(0.002, 0.01), 0.0, gas()});
    }

    if (c.kind == ScenarioKind::Legitimate) {
        const std::int64_t extra = rng.poisson(c.owner_deposit_rate * horizon / day);
        for (std::int64_t i = 0; i < extra; ++i) {
            plan.events.push_back(
                {rng.uniform(60.0, std::max(61.0, horizon - 60.0)), Action::OwnerExtraDeposit, -1,
                 rng.uniform(0.05, 0.2), 0.0, gas()});
        }
    }

    // Profit taking.
    switch (c.kind) {
        case ScenarioKind::RugPull:
            plan.events.push_back({rug_time, Action::Drain, -1, c.rug_impact, 0.0, gas()});
            break;
        case ScenarioKind::Honeypot:
            plan.events.push_back({horizon - 30.0, Action::Drain, -1, rng.uniform(0.9, 0.99), 0.0, gas()});
            break;
        case ScenarioKind::SLID:
        case ScenarioKind::SlidSlow:
        case ScenarioKind::SlidMultiAddress: {
            double lo = 0.02 * horizon;
            double hi = horizon - 120.0;
            if (c.kind == ScenarioKind::SlidSlow) {
                lo = static_cast<double>(c.slow_drain_start_day) * day;
                hi = std::min(hi, static_cast<double>(c.slow_drain_end_day) * day);
            }
            for (std::int64_t i = 0; i < c.slid_drain_count; ++i) {
                const double t = rng.uniform(lo, hi);
                const double impact = rng.uniform(c.slid_impact_range.first, c.slid_impact_range.second);
                const std::int64_t actor = c.kind == ScenarioKind::SlidMultiAddress ? rng.integer(0, linked - 1) : -1;
                plan.events.push_back({t, Action::Drain, actor, impact, rng.uniform(0.0, 1.0), gas()});
            }
            break;
        }
        case ScenarioKind::Legitimate:
            break;
    }

    std::stable_sort(plan.events.begin(), plan.events.end(),
                     [](const Planned& x, const Planned& y) { return x.t < y.t; });
    return plan;
}

struct SimOutcome {
    double invested = 0.0;
    double returned = 0.0;
    double gas = 0.0;
    double inflow_before_drain = 0.0;
    bool drained_once = false;
    std::vector<DexOrder> orders;

    double multiple() const { return invested > 0.0 ? (returned - invested - gas) / invested : 0.0; }
};

struct Identity {
    std::string pool;
    std::string owner;
    std::string hash_prefix;
    std::vector<std::string> investors;
    std::vector<std::string> linked;
};

class Simulator {
public:
    Simulator(const ScenarioConfig& c, const Plan& plan, const Identity* ids)
        : c_(c), plan_(plan), ids_(ids) {}

    SimOutcome run(double scale) {
        out_ = SimOutcome{};
        out_.gas = plan_.deployment_gas;
        holdings_.assign(static_cast<std::size_t>(plan_.investors), 0.0);
        units_.assign(static_cast<std::size_t>(plan_.investors), 0.0);
        owner_units_ = total_units_ = 0.0;
        reserves_ = Reserves<double>{};
        last_ts_ = c_.start_time - 1;
        sequence_ = 0;
        if (ids_ != nullptr) out_.orders.reserve(plan_.events.size());

        const double deposit = c_.initial_deposit_usd;
        for (const auto& e : plan_.events) {
            switch (e.action) {
                case Action::OwnerDeposit:
                    liquidity_add(e, true, -1, c_.initial_paired_tokens, deposit);
                    break;
                case Action::OwnerExtraDeposit:
                    if (reserves_.base > 0.0) {
                        const double y = e.a * deposit;
                        liquidity_add(e, true, -1, y * reserves_.paired / reserves_.base, y);
                    }
                    break;
                case Action::InvestorDeposit:
                    if (reserves_.base > 0.0) {
                        const double y = scale * c_.investor_buy_fraction * deposit * e.a;
                        liquidity_add(e, false, e.actor, y * reserves_.paired / reserves_.base, y);
                    }
                    break;
                case Action::InvestorWithdraw: {
                    const double u = units_[static_cast<std::size_t>(e.actor)];
                    if (u > 0.0 && total_units_ > 0.0) liquidity_remove(e, false, e.actor, u / total_units_);
                    break;
                }
                case Action::InvestorBuy: {
                    const double y = scale * c_.investor_buy_fraction * deposit * e.a;
                    const double got = swap(e, Category::Buy, false, e.actor, y);
                    holdings_[static_cast<std::size_t>(e.actor)] += got;
                    if (!out_.drained_once) out_.inflow_before_drain += y;
                    break;
                }
                case Action::InvestorSell: {
                    double& held = holdings_[static_cast<std::size_t>(e.actor)];
                    const double amount = held * e.a;
                    if (amount > 1e-9 * reserves_.paired) {
                        swap(e, Category::Sell, false, e.actor, amount);
                        held -= amount;
                    }
                    break;
                }
                case Action::NoiseBuy:
                    if (reserves_.base > 0.0) swap(e, Category::Buy, true, e.actor, e.a * deposit);
                    break;
                case Action::Drain:
                    drain(e);
                    break;
            }
        }
        return std::move(out_);
    }

private:
    void drain(const Planned& e) {
        if (reserves_.base <= 0.0 || reserves_.paired <= 0.0) return;
        const double impact = e.a;
        const double share = total_units_ > 0.0 ? owner_units_ / total_units_ : 0.0;
        bool withdraw = false;
        switch (c_.kind) {
            case ScenarioKind::RugPull:
            case ScenarioKind::Honeypot:
                withdraw = share >= impact;
                break;
            case ScenarioKind::SLID:
            case ScenarioKind::SlidSlow:
                withdraw = e.b < c_.slid_withdraw_probability && share - impact >= 0.05;
                break;
            default:
                break;
        }
        if (withdraw) {
            liquidity_remove(e, true, e.actor, impact);
        } else {
            // Selling q = R_p * I / (1 - I) paired tokens takes exactly I of the base reserve.
            const double q = reserves_.paired * impact / (1.0 - impact);
            swap(e, Category::Sell, true, e.actor, q);
        }
        out_.drained_once = true;
    }

    void account_owner(bool owner, Category category, double base, double gas) {
        if (!owner) return;
        out_.gas += gas;
        if (is_profit_taking(category)) {
            out_.returned += base;
        } else {
            out_.invested += base;
        }
    }

    double swap(const Planned& e, Category category, bool owner, std::int64_t actor, double amount) {
        const auto dir = category == Category::Buy ? SwapDirection::BuyPaired : SwapDirection::SellPaired;
        const auto r = swap_quote(reserves_, dir, amount);
        reserves_ = r.reserves;
        const double y_paired = category == Category::Buy ? r.amount_out : amount;
        const double y_base = category == Category::Buy ? amount : r.amount_out;
        account_owner(owner, category, y_base, e.gas);
        emit(e, category, owner, actor, y_paired, y_base);
        return r.amount_out;
    }

    void liquidity_add(const Planned& e, bool owner, std::int64_t actor, double paired, double base) {
        const double minted = total_units_ > 0.0 && reserves_.base > 0.0 ? total_units_ * base / reserves_.base : base;
        total_units_ += minted;
        if (owner) {
            owner_units_ += minted;
        } else if (actor >= 0) {
            units_[static_cast<std::size_t>(actor)] += minted;
        }
        reserves_ = Reserves<double>::from_deposit(reserves_.paired + paired, reserves_.base + base);
        account_owner(owner, Category::Deposit, base, e.gas);
        emit(e, Category::Deposit, owner, actor, paired, base);
    }

    void liquidity_remove(const Planned& e, bool owner, std::int64_t actor, double fraction) {
        const double burned = total_units_ * fraction;
        const double paired = reserves_.paired * fraction;
        const double base = reserves_.base * fraction;
        total_units_ -= burned;
        if (owner) {
            owner_units_ -= burned;
        } else if (actor >= 0) {
            units_[static_cast<std::size_t>(actor)] -= burned;
        }
        reserves_ = Reserves<double>::from_deposit(reserves_.paired - paired, reserves_.base - base);
        account_owner(owner, Category::Withdraw, base, e.gas);
        emit(e, Category::Withdraw, owner, actor, paired, base);
    }

    void emit(const Planned& e, Category category, bool owner, std::int64_t actor, double y_paired, double y_base) {
        if (ids_ == nullptr) return;
        DexOrder o;
        o.timestamp = std::max(last_ts_ + 1, c_.start_time + static_cast<UnixTime>(e.t));
        last_ts_ = o.timestamp;
        o.block = o.timestamp / 12;
        o.hash = ids_->hash_prefix + hex(sequence_++, 16);
        o.category = category;
        o.pool_address = ids_->pool;
        if (owner) {
            o.sender = actor >= 0 ? ids_->linked[static_cast<std::size_t>(actor)] : ids_->owner;
        } else {
            o.sender = ids_->investors[static_cast<std::size_t>(actor)];
        }
        o.x_paired = reserves_.paired;
        o.x_base = reserves_.base;
        o.y_paired = y_paired;
        o.y_base = y_base;
        o.price_base = 1.0;
        o.price_paired = reserves_.paired > 0.0 ? reserves_.base / reserves_.paired : 0.0;
        o.gas_fee_usd = e.gas;
        out_.orders.push_back(std::move(o));
    }

    const ScenarioConfig& c_;
    const Plan& plan_;
    const Identity* ids_;

    SimOutcome out_;
    Reserves<double> reserves_;
    std::vector<double> holdings_;
    std::vector<double> units_;
    double owner_units_ = 0.0;
    double total_units_ = 0.0;
    UnixTime last_ts_ = 0;
    std::uint64_t sequence_ = 0;
};

SecurityProfile draw_profile(ScenarioKind kind, Rng& rng) {
    SecurityProfile p;
    p.buy_tax = rng.uniform(0.0, 0.1);
    p.sell_tax = rng.uniform(0.0, 0.1);
    // Soft signals appear on every kind and must never decide a verdict.
    p.anti_whale = rng.chance(0.1);
    p.trading_cooldown = rng.chance(0.1);
    p.tax_modifiable = rng.chance(0.1);
    if (kind != ScenarioKind::Honeypot) return p;
    switch (rng.integer(0, 6)) {
        case 0: p.sell_tax = rng.uniform(0.55, 0.99); break;
        case 1: p.buy_tax = rng.uniform(0.55, 0.99); break;
        case 2: p.can_sell_all = false; break;
        case 3: p.balance_change_by_owner = true; break;
        case 4: p.trading_pausable = true; break;
        case 5: p.transfer_pausable = true; break;
        default: p.personal_slippage_modifiable = true; break;
    }
    return p;
}

// Investor scale that brings the owner's realized multiple to the target.
double fit_scale(const ScenarioConfig& c, const Plan& plan) {
    Simulator sim(c, plan, nullptr);
    const double target = c.profit_multiple_target;
    auto f = [&](double s) { return sim.run(s).multiple() - target; };
    auto good = [&](double err) { return std::abs(err) <= 0.005 * std::max(1.0, target); };

    double s0 = 1.0;
    double f0 = f(s0);
    if (good(f0)) return s0;
    double s1 = s0 * (target + 1.0) / std::max(0.05, f0 + target + 1.0);
    double f1 = f(s1);
    for (int i = 0; i < 40 && !good(f1); ++i) {
        double next = s1 - f1 * (s1 - s0) / (f1 - f0);
        if (!std::isfinite(next) || next <= 0.0 || next > 10.0 * s1 || next < 0.1 * s1) {
            next = s1 * (target + 1.0) / std::max(0.05, f1 + target + 1.0);
        }
        s0 = s1;
        f0 = f1;
        s1 = next;
        f1 = f(s1);
    }
    if (std::abs(f1) > 0.05 * std::max(1.0, target)) {
        throw Error(ErrorCode::InfeasibleConfig,
                    "profit multiple " + std::to_string(target) + " is out of reach for this drain schedule");
    }
    return s1;
}

}  // namespace

std::string_view to_string(ScenarioKind kind) noexcept {
    return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view text) noexcept {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == text) return static_cast<ScenarioKind>(i);
    }
    return std::nullopt;
}

Label true_label(ScenarioKind kind) noexcept {
    switch (kind) {
        case ScenarioKind::Legitimate: return Label::Legitimate;
        case ScenarioKind::RugPull: return Label::RugPull;
        case ScenarioKind::Honeypot: return Label::Honeypot;
        default: return Label::SLID;
    }
}

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::InfeasibleConfig, what); };
    if (!(initial_deposit_usd > 0.0) || !(initial_paired_tokens > 0.0)) fail("initial deposit must be positive");
    if (investor_count < 1) fail("investor_count must be at least 1");
    if (investor_arrival < 0.0) fail("investor_arrival must be non-negative");
    if (!(investor_buy_fraction > 0.0)) fail("investor_buy_fraction must be positive");
    if (lifetime_days < 1) fail("lifetime_days must be at least 1");
    const auto [lo, hi] = slid_impact_range;
    if (!(lo > 0.0 && lo <= hi && hi < 0.95)) fail("slid_impact_range must lie inside (0, 0.95)");
    if (!(rug_impact >= 0.95 && rug_impact < 1.0)) fail("rug_impact must lie in [0.95, 1)");
    if (rug_drain_day < 0) fail("rug_drain_day must be non-negative");
    if (is_slid_kind(kind)) {
        if (slid_drain_count < 1) fail("slid_drain_count must be at least 1");
        if (!(profit_multiple_target > 0.0)) fail("profit_multiple_target must be positive");
    }
    if (kind == ScenarioKind::SlidSlow) {
        if (slow_drain_start_day < 57 || slow_drain_end_day <= slow_drain_start_day) {
            fail("slow drains must start after day 57 and end after they start");
        }
        if (lifetime_days <= slow_drain_end_day) fail("lifetime must extend past the slow drain window");
    }
    if (kind == ScenarioKind::SlidMultiAddress && linked_address_count < 1) fail("need at least one linked address");
}

Scenario generate(const ScenarioConfig& config) {
    config.validate();
    Rng rng(splitmix(config.seed) ^ splitmix(config.pool_index + 0xC0FFEE) ^
            static_cast<std::uint64_t>(config.kind));

    Scenario s;
    s.kind = config.kind;
    s.label = true_label(config.kind);
    s.profile = draw_profile(config.kind, rng);

    Identity ids;
    ids.pool = address(config.seed, config.pool_index, Role::Pool);
    ids.owner = address(config.seed, config.pool_index, Role::Owner);
    ids.hash_prefix = "0x" + address(config.seed, config.pool_index, Role::Hash).substr(2) + "00000000";

    const Plan plan = make_plan(config, rng);
    for (std::int64_t i = 0; i < plan.investors; ++i) {
        ids.investors.push_back(address(config.seed, config.pool_index, Role::Investor, static_cast<std::uint64_t>(i)));
    }
    const std::int64_t linked = config.kind == ScenarioKind::SlidMultiAddress ? config.linked_address_count : 0;
    for (std::int64_t i = 0; i < linked; ++i) {
        ids.linked.push_back(address(config.seed, config.pool_index, Role::Linked, static_cast<std::uint64_t>(i)));
    }

    const double scale = is_slid_kind(config.kind) ? fit_scale(config, plan) : 1.0;
    Simulator sim(config, plan, &ids);
    SimOutcome outcome = sim.run(scale);

    if (config.kind == ScenarioKind::RugPull || config.kind == ScenarioKind::Honeypot) {
        const double needed = config.rug_min_inflow_fraction * config.initial_deposit_usd;
        if (outcome.inflow_before_drain < needed || outcome.multiple() <= 0.0) {
            throw Error(ErrorCode::InfeasibleConfig, "investor inflow before the drain is too small to profit");
        }
    }

    PoolRecord& pool = s.pool;
    pool.pool_address = ids.pool;
    pool.owner_address = ids.owner;
    pool.base_address = address(config.seed, config.pool_index, Role::Base);
    pool.paired_address = address(config.seed, config.pool_index, Role::Paired);
    pool.created_time_pool = config.start_time;
    pool.created_time_token = config.start_time - static_cast<UnixTime>(rng.integer(60, 86'400));
    pool.dex = Dex::Synthetic;
    pool.name = std::string(to_string(config.kind)) + "-" + std::to_string(config.pool_index);
    pool.lpt_burned = config.kind == ScenarioKind::Legitimate;
    pool.deployment_gas_usd = plan.deployment_gas;
    pool.linked_addresses = ids.linked;

    s.realized_profit_multiple = outcome.multiple();
    s.orders = std::move(outcome.orders);
    return s;
}

}  // namespace slid::synth
