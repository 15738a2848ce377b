#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "slid/error.hpp"
#include "slid/synth.hpp"

namespace slid::synth {

namespace {

class Draw {
public:
    explicit Draw(std::uint64_t seed) : engine_(seed) {}

    double real(double lo, double hi) {
        return lo >= hi ? lo : boost::random::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return lo >= hi ? lo : boost::random::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
    }
    // Log-uniform over [median / spread, median * spread].
    double around(double median, double spread) {
        return median * std::exp(real(-std::log(spread), std::log(spread)));
    }

private:
    boost::random::mt19937_64 engine_;
};

}  // namespace

CorpusConfig CorpusConfig::from(const KeyValueConfig& config) {
    config.require_known({"seed", "legitimate", "rugpull", "honeypot", "slid", "slid_slow", "slid_multi",
                          "start_time", "slid_alive_fraction", "slid_drains_min", "slid_drains_max",
                          "slid_profit_multiple", "slid_lifetime_min", "slid_lifetime_max", "slow_drains_min",
                          "slow_drains_max", "slid_noise_min", "slid_noise_max", "legit_noise_max",
                          "missing_profile_fraction"});
    CorpusConfig c;
    c.seed = static_cast<std::uint64_t>(config.get_int("seed", static_cast<long long>(c.seed)));
    c.legitimate = config.get_int("legitimate", c.legitimate);
    c.rugpull = config.get_int("rugpull", c.rugpull);
    c.honeypot = config.get_int("honeypot", c.honeypot);
    c.slid = config.get_int("slid", c.slid);
    c.slid_slow = config.get_int("slid_slow", c.slid_slow);
    c.slid_multi = config.get_int("slid_multi", c.slid_multi);
    c.start_time = config.get_int("start_time", c.start_time);
    c.slid_alive_fraction = config.get_double("slid_alive_fraction", c.slid_alive_fraction);
    c.slid_drains_min = config.get_int("slid_drains_min", c.slid_drains_min);
    c.slid_drains_max = config.get_int("slid_drains_max", c.slid_drains_max);
    c.slid_profit_multiple = config.get_double("slid_profit_multiple", c.slid_profit_multiple);
    c.slid_lifetime_min = config.get_int("slid_lifetime_min", c.slid_lifetime_min);
    c.slid_lifetime_max = config.get_int("slid_lifetime_max", c.slid_lifetime_max);
    c.slow_drains_min = config.get_int("slow_drains_min", c.slow_drains_min);
    c.slow_drains_max = config.get_int("slow_drains_max", c.slow_drains_max);
    c.slid_noise_min = config.get_double("slid_noise_min", c.slid_noise_min);
    c.slid_noise_max = config.get_double("slid_noise_max", c.slid_noise_max);
    c.legit_noise_max = config.get_double("legit_noise_max", c.legit_noise_max);
    c.missing_profile_fraction = config.get_double("missing_profile_fraction", c.missing_profile_fraction);

    auto fail = [](const char* what) { throw Error(ErrorCode::ConfigError, what); };
    if (std::min({c.legitimate, c.rugpull, c.honeypot, c.slid, c.slid_slow, c.slid_multi}) < 0) {
        fail("scenario counts must be non-negative");
    }
    if (!(c.slid_alive_fraction >= 0.0 && c.slid_alive_fraction <= 1.0)) fail("slid_alive_fraction must lie in [0, 1]");
    if (c.slid_drains_min < 1 || c.slid_drains_max < c.slid_drains_min) fail("bad slid drain range");
    if (c.slow_drains_min < 1 || c.slow_drains_max < c.slow_drains_min) fail("bad slow drain range");
    if (c.slid_lifetime_min < 31 || c.slid_lifetime_max < c.slid_lifetime_min) fail("bad slid lifetime range");
    if (!(c.missing_profile_fraction >= 0.0 && c.missing_profile_fraction <= 1.0)) {
        fail("missing_profile_fraction must lie in [0, 1]");
    }
    return c;
}

std::vector<ScenarioConfig> corpus_plan(const CorpusConfig& config) {
    Draw draw(config.seed);
    std::vector<ScenarioConfig> plan;
    std::uint64_t index = 0;

    auto base = [&](ScenarioKind kind) {
        ScenarioConfig s;
        s.kind = kind;
        s.seed = config.seed;
        s.pool_index = index++;
        // Deployments spread over a year, one pool every few hours.
        s.start_time = config.start_time + draw.integer(0, 365 * kSecondsPerDay);
        return s;
    };

    for (std::int64_t i = 0; i < config.legitimate; ++i) {
        ScenarioConfig s = base(ScenarioKind::Legitimate);
        s.initial_deposit_usd = draw.around(20'000.0, 5.0);
        s.lifetime_days = draw.integer(30, 400);
        s.investor_arrival = draw.real(1.0, 10.0);
        s.owner_noise_trades_per_day = draw.real(0.0, config.legit_noise_max);
        s.owner_deposit_rate = draw.real(0.0, 0.02);
        plan.push_back(s);
    }
    for (std::int64_t i = 0; i < config.rugpull; ++i) {
        ScenarioConfig s = base(ScenarioKind::RugPull);
        s.initial_deposit_usd = draw.around(5'000.0, 4.0);
        s.investor_arrival = draw.real(40.0, 100.0);
        s.investor_buy_fraction = 0.02;
        s.rug_impact = draw.real(0.95, 0.999);
        s.rug_drain_day = 0;
        s.lifetime_days = 1;
        plan.push_back(s);
    }
    for (std::int64_t i = 0; i < config.honeypot; ++i) {
        ScenarioConfig s = base(ScenarioKind::Honeypot);
        s.initial_deposit_usd = draw.around(3'000.0, 4.0);
        s.lifetime_days = draw.integer(3, 30);
        s.investor_arrival = draw.real(10.0, 40.0);
        plan.push_back(s);
    }
    // Exactly round(fraction * n) long-lived SLID pools, picked by selection
    // sampling so the survival share is set by the config, not by chance.
    std::int64_t alive_left = std::llround(config.slid_alive_fraction * static_cast<double>(config.slid));
    for (std::int64_t i = 0; i < config.slid; ++i) {
        ScenarioConfig s = base(ScenarioKind::SLID);
        s.initial_deposit_usd = draw.around(10'000.0, 5.0);
        s.slid_drain_count = draw.integer(config.slid_drains_min, config.slid_drains_max);
        const bool alive = draw.real(0.0, 1.0) * static_cast<double>(config.slid - i) < static_cast<double>(alive_left);
        alive_left -= alive;
        s.lifetime_days = alive ? draw.integer(config.slid_lifetime_min, config.slid_lifetime_max) : draw.integer(10, 29);
        s.owner_noise_trades_per_day = draw.real(config.slid_noise_min, config.slid_noise_max);
        s.profit_multiple_target = config.slid_profit_multiple;
        plan.push_back(s);
    }
    for (std::int64_t i = 0; i < config.slid_slow; ++i) {
        ScenarioConfig s = base(ScenarioKind::SlidSlow);
        s.initial_deposit_usd = draw.around(10'000.0, 5.0);
        s.slid_drain_count = draw.integer(config.slow_drains_min, config.slow_drains_max);
        s.lifetime_days = draw.integer(280, 360);
        s.owner_noise_trades_per_day = draw.real(config.slid_noise_min, config.slid_noise_max);
        s.profit_multiple_target = 3.0;
        plan.push_back(s);
    }
    for (std::int64_t i = 0; i < config.slid_multi; ++i) {
        ScenarioConfig s = base(ScenarioKind::SlidMultiAddress);
        s.initial_deposit_usd = draw.around(10'000.0, 5.0);
        s.slid_drain_count = draw.integer(config.slid_drains_min, config.slid_drains_max);
        s.lifetime_days = draw.integer(config.slid_lifetime_min, config.slid_lifetime_max);
        s.owner_noise_trades_per_day = draw.real(config.slid_noise_min, config.slid_noise_max);
        s.profit_multiple_target = config.slid_profit_multiple;
        plan.push_back(s);
    }
    return plan;
}

void generate_each(const CorpusConfig& config, const std::function<void(Scenario&&)>& visit) {
    Draw missing(config.seed ^ 0x5EC0DA7AULL);
    for (ScenarioConfig s : corpus_plan(config)) {
        // A handful of random draws cannot fund the drain; redraw the pool.
        for (int attempt = 0;; ++attempt) {
            try {
                Scenario scenario = generate(s);
                scenario.profile_missing =
                    config.missing_profile_fraction > 0.0 && missing.real(0.0, 1.0) < config.missing_profile_fraction;
                visit(std::move(scenario));
                break;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::InfeasibleConfig || attempt >= 8) throw;
                s.seed += 0x1000003ULL;
            }
        }
    }
}

Corpus generate_corpus(const CorpusConfig& config) {
    Corpus corpus;
    generate_each(config, [&](Scenario&& s) { corpus.scenarios.push_back(std::move(s)); });
    std::sort(corpus.scenarios.begin(), corpus.scenarios.end(),
              [](const Scenario& a, const Scenario& b) { return a.pool.pool_address < b.pool.pool_address; });
    return corpus;
}

}  // namespace slid::synth
