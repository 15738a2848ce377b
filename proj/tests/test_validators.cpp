#include "doctest.h"

#include "slid/error.hpp"
#include "slid/synth.hpp"
#include "slid/validators.hpp"
#include "support.hpp"

using namespace slid;

namespace {

std::vector<ProfitTakingEvent> events(std::initializer_list<double> impacts) {
    std::vector<ProfitTakingEvent> out;
    for (const double i : impacts) {
        ProfitTakingEvent e;
        e.impact = i;
        e.value_usd = i * 100;
        e.pool_value_before_usd = 100;
        out.push_back(e);
    }
    return out;
}

ProfitReport report_from(const std::vector<ProfitTakingEvent>& ev, double realized, double unrealized_1m,
                         std::int64_t owner_actions) {
    ProfitReport r;
    r.realized_profit_usd = realized;
    r.unrealized_first_month_usd = unrealized_1m;
    r.profit_taking = ev;
    r.profit_taking_count = static_cast<std::int64_t>(ev.size());
    r.owner_activity_count = owner_actions;
    for (const auto& e : ev) {
        if (!e.finite_impact()) continue;
        r.max_impact = r.finite_impacts == 0 ? e.impact : std::max(r.max_impact, e.impact);
        r.min_impact = r.finite_impacts == 0 ? e.impact : std::min(r.min_impact, e.impact);
        r.impact_sum += e.impact;
        ++r.finite_impacts;
    }
    return r;
}

}  // namespace

TEST_CASE("honeypot_validate") {
    const HeuristicConfig cfg;
    SecurityProfile p;
    CHECK_FALSE(honeypot_validate(p, cfg).is_honeypot);
    CHECK(honeypot_validate(p, cfg).pass);

    p.buy_tax = 0.6;
    CHECK(honeypot_validate(p, cfg).is_honeypot);
    CHECK_FALSE(honeypot_validate(p, cfg).pass);

    p = {};
    p.buy_tax = 0.5;  // the cutoff is strict
    CHECK_FALSE(honeypot_validate(p, cfg).is_honeypot);

    p = {};
    p.can_sell_all = false;
    CHECK(honeypot_validate(p, cfg).is_honeypot);

    SUBCASE("every hard restriction triggers on its own") {
        const std::vector<void (*)(SecurityProfile&)> flips{
            [](SecurityProfile& s) { s.sell_tax = 0.9; },
            [](SecurityProfile& s) { s.buyable = false; },
            [](SecurityProfile& s) { s.balance_change_by_owner = true; },
            [](SecurityProfile& s) { s.trading_pausable = true; },
            [](SecurityProfile& s) { s.transfer_pausable = true; },
            [](SecurityProfile& s) { s.slippage_modifiable = true; },
            [](SecurityProfile& s) { s.personal_slippage_modifiable = true; },
        };
        for (const auto flip : flips) {
            SecurityProfile s;
            flip(s);
            CHECK(honeypot_validate(s, cfg).is_honeypot);
        }
    }
    SUBCASE("soft signals never trigger") {
        SecurityProfile s;
        s.anti_whale = true;
        s.trading_cooldown = true;
        s.tax_modifiable = true;
        const auto check = honeypot_validate(s, cfg);
        CHECK_FALSE(check.is_honeypot);
        CHECK(check.soft_signals.size() == 3);
    }
}

TEST_CASE("profit_validate") {
    ProfitReport r;
    r.realized_profit_usd = -101;
    r.unrealized_first_month_usd = 500;
    CHECK_FALSE(profit_validate(r));
    r.realized_profit_usd = 35;
    r.unrealized_first_month_usd = 0;
    CHECK_FALSE(profit_validate(r));
    r.unrealized_first_month_usd = 1e-14;
    CHECK(profit_validate(r));
}

TEST_CASE("owner_activity_validate") {
    const HeuristicConfig cfg;
    const auto burned = testing::make_pool(true);
    const auto open = testing::make_pool(false);
    const auto ten = events({0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3});
    CHECK_FALSE(owner_activity_validate(burned, ten, cfg));
    CHECK(owner_activity_validate(open, events({0.3, 0.3, 0.3, 0.3, 0.3, 0.3}), cfg));
    CHECK_FALSE(owner_activity_validate(open, events({0.3, 0.3, 0.3, 0.3, 0.3, 0.95}), cfg));
    CHECK_FALSE(owner_activity_validate(open, events({0.3, 0.3, 0.3, 0.3}), cfg));

    // The aggregate overload agrees with the event overload.
    const auto ev = events({0.1, 0.2, 0.3, 0.4, 0.5});
    CHECK(owner_activity_validate(open, ev, cfg) == owner_activity_validate(open, report_from(ev, 1, 1, 5), cfg));
}

TEST_CASE("rugpull_detect") {
    const auto open = testing::make_pool(false);
    CHECK(rugpull_detect(open, events({0.999})));
    CHECK_FALSE(rugpull_detect(open, events({0.1, 0.42, 0.3, 0.0739, 0.2, 0.4293})));
    CHECK_FALSE(rugpull_detect(open, events({})));
    CHECK(rugpull_detect(open, events({0.95})));  // the boundary belongs to rug pulls
    CHECK_FALSE(rugpull_detect(testing::make_pool(true), events({0.999})));
}

TEST_CASE("classify_pool: layer order") {
    const HeuristicConfig cfg;
    const auto pool = testing::make_pool(false);
    const SecurityProfile benign;
    SecurityProfile honeypot;
    honeypot.sell_tax = 0.99;

    SUBCASE("L1: no realized profit is legitimate") {
        const auto v = classify_pool(testing::make_pool(true), benign, report_from({}, -10, 5, 1), cfg);
        CHECK(v.label == Label::Legitimate);
        CHECK(v.layer_trace.size() == 1);
        CHECK_FALSE(v.profit_pass);
    }
    SUBCASE("L2: honeypot") {
        const auto v = classify_pool(pool, honeypot, report_from(events({0.99}), 10, 5, 2), cfg);
        CHECK(v.label == Label::Honeypot);
        CHECK_FALSE(v.honeypot_pass);
    }
    SUBCASE("L3: rug pull") {
        const auto v = classify_pool(pool, benign, report_from(events({0.99}), 10, 5, 2), cfg);
        CHECK(v.label == Label::RugPull);
    }
    SUBCASE("L4: too little owner activity") {
        const auto v = classify_pool(pool, benign, report_from(events({0.2}), 10, 5, 2), cfg);
        CHECK(v.label == Label::Undetermined);
    }
    SUBCASE("validators: SLID") {
        const auto ev = events({0.1, 0.2, 0.3, 0.2, 0.1, 0.4});
        const auto v = classify_pool(pool, benign, report_from(ev, 10, 5, 7), cfg);
        CHECK(v.label == Label::SLID);
        CHECK(v.honeypot_pass);
        CHECK(v.profit_pass);
        CHECK(v.owner_activity_pass);
    }
    SUBCASE("validators: zero month-one unrealized profit is undetermined") {
        const auto ev = events({0.1, 0.2, 0.3, 0.2, 0.1, 0.4});
        const auto v = classify_pool(pool, benign, report_from(ev, 10, 0, 7), cfg);
        CHECK(v.label == Label::Undetermined);
    }
    SUBCASE("missing profile: unknown, treated as a pass, with a warning") {
        const auto ev = events({0.1, 0.2, 0.3, 0.2, 0.1, 0.4});
        const auto v = classify_pool(pool, std::nullopt, report_from(ev, 10, 5, 7), cfg);
        CHECK(v.label == Label::SLID);
        CHECK(v.honeypot_unknown);
        CHECK(v.warnings.size() == 1);
        CHECK(v.layer_trace[1].outcome == LayerOutcome::Unknown);
    }
}

TEST_CASE("property: SLID iff all three validators pass, never both rug pull and SLID") {
    testing::Gen g(31);
    for (int i = 0; i < 2000; ++i) {
        HeuristicConfig cfg;
        cfg.t_count = g.integer(1, 10);
        const auto pool = testing::make_pool(g.chance(0.2));
        SecurityProfile p;
        p.sell_tax = g.uniform(0, 0.7);
        std::vector<ProfitTakingEvent> ev;
        const auto n = g.integer(0, 12);
        for (int k = 0; k < n; ++k) ev.push_back(events({g.uniform(0, 1)}).front());
        const auto r = report_from(ev, g.uniform(-50, 50), g.uniform(-1, 5), g.integer(0, 15));
        const auto v = classify_pool(pool, p, r, cfg);
        CHECK((v.label == Label::SLID) == (v.honeypot_pass && v.profit_pass && v.owner_activity_pass));
        if (v.label == Label::SLID) CHECK_FALSE(rugpull_detect(pool, r));

        // Raising t_count never turns a non-SLID verdict into SLID.
        HeuristicConfig stricter = cfg;
        stricter.t_count += g.integer(1, 5);
        if (v.label != Label::SLID) CHECK(classify_pool(pool, p, r, stricter).label != Label::SLID);
        CHECK(classify_pool(pool, p, r, cfg) == v);
    }
}

TEST_CASE("stability_check") {
    LedgerState s;
    HeuristicConfig cfg;
    CHECK_THROWS_AS(stability_check(s, cfg), Error);
    for (int i = 0; i < 10; ++i) {
        s.price_series.push_back({i, 2.0});
        s.volume_series.push_back({i, 5.0});
    }
    const auto off = stability_check(s, cfg);
    CHECK(off.stable);
    CHECK_FALSE(off.evaluated);

    cfg.theta_p = 0.1;
    cfg.theta_v = 0.1;
    CHECK(stability_check(s, cfg).stable);
    CHECK(stability_check(s, cfg).evaluated);

    s.price_series.push_back({11, 1.0});
    HeuristicConfig price_only;
    price_only.theta_p = 0.1;
    CHECK_FALSE(stability_check(s, price_only).stable);
}

TEST_CASE("HeuristicConfig from key=value text") {
    const auto cfg = HeuristicConfig::from(KeyValueConfig::parse("t_count = 7\nt_impact=0.9\ntheta_p = 0.2\n"));
    CHECK(cfg.t_count == 7);
    CHECK(cfg.t_impact == 0.9);
    CHECK(cfg.theta_p == 0.2);
    CHECK_FALSE(cfg.theta_v.has_value());
    try {
        HeuristicConfig::from(KeyValueConfig::parse("t_cont = 7\n"));
        FAIL("expected ConfigError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigError);
    }
    CHECK_THROWS_AS(HeuristicConfig::from(KeyValueConfig::parse("t_impact = 0\n")), Error);
    CHECK_THROWS_AS(HeuristicConfig::from(KeyValueConfig::parse("t_count = 0\n")), Error);
}

TEST_CASE("definition assessment on a generated SLID pool") {
    synth::ScenarioConfig c;
    c.kind = synth::ScenarioKind::SLID;
    c.seed = 4;
    c.slid_drain_count = 100;
    const auto s = synth::generate(c);
    const auto r = compute_report(s.pool, s.orders);
    const auto state = replay(s.pool, s.orders);
    const auto a = assess_definition(s.pool, r.profit_taking, state, HeuristicConfig{});
    CHECK(a.control_retained);
    CHECK(a.small_inflated_sales);
    REQUIRE(a.stability.has_value());
    CHECK_FALSE(a.stability->evaluated);
}
