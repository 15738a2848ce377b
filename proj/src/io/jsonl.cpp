#include <cmath>
#include <cstdio>

#include <rapidjson/document.h>
#include <rapidjson/error/en.h>

#include "slid/error.hpp"
#include "slid/format.hpp"
#include "slid/io.hpp"

namespace slid::io {

namespace {

using Value = rapidjson::Value;

void append_string(std::string& out, std::string_view s) {
    out += '"';
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

void key(std::string& out, const char* name, bool first = false) {
    if (!first) out += ',';
    out += '"';
    out += name;
    out += "\":";
}

void number(std::string& out, double v) {
    if (!std::isfinite(v)) {
        out += "null";
        return;
    }
    append_double(out, v);
}

void amount(std::string& out, double v) {
    out += '"';
    append_double(out, v);
    out += '"';
}

void boolean(std::string& out, bool v) { out += v ? "true" : "false"; }

// Field access that turns every shape problem into a row-level SchemaError.
// rapidjson keeps the order scan fast enough for tens of millions of rows.
class Row {
public:
    Row(std::string_view line, const std::string& file, std::size_t line_no) : file_(file), line_(line_no) {
        doc_.Parse<rapidjson::kParseFullPrecisionFlag>(line.data(), line.size());
        if (doc_.HasParseError()) {
            fail(std::string("invalid JSON at offset ") + std::to_string(doc_.GetErrorOffset()) + ": " +
                 rapidjson::GetParseError_En(doc_.GetParseError()));
        }
        if (!doc_.IsObject()) fail("row is not a JSON object");
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw SchemaError(file_, line_, file_ + ":" + std::to_string(line_) + ": " + what);
    }

    const Value* find(const char* name) const {
        const auto it = doc_.FindMember(name);
        return it == doc_.MemberEnd() ? nullptr : &it->value;
    }

    const Value& need(const char* name) const {
        const Value* v = find(name);
        if (v == nullptr) fail(std::string("missing field '") + name + "'");
        return *v;
    }

    std::string text(const char* name) const {
        const Value& v = need(name);
        if (!v.IsString()) fail(std::string("field '") + name + "' must be a string");
        return std::string(v.GetString(), v.GetStringLength());
    }

    std::string text_or(const char* name, const std::string& fallback) const {
        return find(name) == nullptr ? fallback : text(name);
    }

    std::int64_t integer(const char* name) const {
        const Value& v = need(name);
        if (v.IsInt64()) return v.GetInt64();
        if (v.IsString()) {
            if (const auto p = parse_int(std::string_view(v.GetString(), v.GetStringLength()))) return *p;
        }
        fail(std::string("field '") + name + "' must be an integer");
    }

    std::int64_t integer_or(const char* name, std::int64_t fallback) const {
        return find(name) == nullptr ? fallback : integer(name);
    }

    // Accepts a JSON number or a decimal string.
    double real(const char* name) const { return real_value(need(name), name); }

    double real_or(const char* name, double fallback) const {
        const Value* v = find(name);
        return v == nullptr || v->IsNull() ? fallback : real_value(*v, name);
    }

    std::optional<double> optional_real(const char* name) const {
        const Value* v = find(name);
        if (v == nullptr || v->IsNull()) return std::nullopt;
        return real_value(*v, name);
    }

    bool flag_or(const char* name, bool fallback) const {
        const Value* v = find(name);
        if (v == nullptr) return fallback;
        if (!v->IsBool()) fail(std::string("field '") + name + "' must be a boolean");
        return v->GetBool();
    }

private:
    double real_value(const Value& v, const char* name) const {
        if (v.IsNumber()) return v.GetDouble();
        if (v.IsString()) {
            if (const auto p = parse_double(std::string_view(v.GetString(), v.GetStringLength()))) return *p;
        }
        fail(std::string("field '") + name + "' must be a number");
    }

    rapidjson::Document doc_;
    const std::string& file_;
    std::size_t line_;
};

}  // namespace

void append_pool_json(std::string& out, const PoolRecord& p) {
    out += '{';
    key(out, "pool_address", true);
    append_string(out, p.pool_address);
    key(out, "base_address");
    append_string(out, p.base_address);
    key(out, "paired_address");
    append_string(out, p.paired_address);
    key(out, "owner_address");
    append_string(out, p.owner_address);
    key(out, "created_time_pool");
    out += std::to_string(p.created_time_pool);
    key(out, "created_time_token");
    out += std::to_string(p.created_time_token);
    key(out, "dex");
    append_string(out, to_string(p.dex));
    key(out, "name");
    append_string(out, p.name);
    key(out, "lpt_burned");
    boolean(out, p.lpt_burned);
    key(out, "deployment_gas_usd");
    number(out, p.deployment_gas_usd);
    if (!p.linked_addresses.empty()) {
        key(out, "linked_addresses");
        out += '[';
        for (std::size_t i = 0; i < p.linked_addresses.size(); ++i) {
            if (i > 0) out += ',';
            append_string(out, p.linked_addresses[i]);
        }
        out += ']';
    }
    out += "}\n";
}

void append_order_json(std::string& out, const DexOrder& o) {
    out += '{';
    key(out, "block", true);
    out += std::to_string(o.block);
    key(out, "timestamp");
    out += std::to_string(o.timestamp);
    key(out, "hash");
    append_string(out, o.hash);
    key(out, "category");
    append_string(out, to_string(o.category));
    key(out, "pool_address");
    append_string(out, o.pool_address);
    key(out, "sender");
    append_string(out, o.sender);
    key(out, "x_paired");
    if (o.x_paired) amount(out, *o.x_paired); else out += "null";
    key(out, "x_base");
    if (o.x_base) amount(out, *o.x_base); else out += "null";
    key(out, "y_paired");
    amount(out, o.y_paired);
    key(out, "y_base");
    amount(out, o.y_base);
    key(out, "price_paired");
    number(out, o.price_paired);
    key(out, "price_base");
    number(out, o.price_base);
    key(out, "gas_fee_usd");
    number(out, o.gas_fee_usd);
    out += "}\n";
}

void append_profile_json(std::string& out, const Address& token, const SecurityProfile& p) {
    out += '{';
    key(out, "token_address", true);
    append_string(out, token);
    key(out, "buy_tax");
    number(out, p.buy_tax);
    key(out, "sell_tax");
    number(out, p.sell_tax);
    const std::pair<const char*, bool> flags[] = {
        {"tax_modifiable", p.tax_modifiable},
        {"buyable", p.buyable},
        {"can_sell_all", p.can_sell_all},
        {"balance_change_by_owner", p.balance_change_by_owner},
        {"trading_cooldown", p.trading_cooldown},
        {"trading_pausable", p.trading_pausable},
        {"anti_whale", p.anti_whale},
        {"slippage_modifiable", p.slippage_modifiable},
        {"personal_slippage_modifiable", p.personal_slippage_modifiable},
        {"transfer_pausable", p.transfer_pausable},
    };
    for (const auto& [name, value] : flags) {
        key(out, name);
        boolean(out, value);
    }
    out += "}\n";
}

PoolRecord parse_pool_json(std::string_view line, const std::string& file, std::size_t line_no) {
    const Row row(line, file, line_no);
    PoolRecord p;
    p.pool_address = row.text("pool_address");
    p.base_address = row.text("base_address");
    p.paired_address = row.text("paired_address");
    p.owner_address = row.text("owner_address");
    p.created_time_pool = row.integer("created_time_pool");
    p.created_time_token = row.integer_or("created_time_token", p.created_time_pool);
    const std::string dex = row.text_or("dex", "Synthetic");
    const auto parsed = parse_dex(dex);
    if (!parsed) row.fail("unknown dex '" + dex + "'");
    p.dex = *parsed;
    p.name = row.text_or("name", "");
    p.lpt_burned = row.flag_or("lpt_burned", false);
    p.deployment_gas_usd = row.real_or("deployment_gas_usd", 0.0);
    if (const Value* linked = row.find("linked_addresses")) {
        if (!linked->IsArray()) row.fail("field 'linked_addresses' must be an array");
        for (const Value& a : linked->GetArray()) {
            if (!a.IsString()) row.fail("linked addresses must be strings");
            p.linked_addresses.emplace_back(a.GetString(), a.GetStringLength());
        }
    }
    try {
        validate(p);
    } catch (const Error& e) {
        row.fail(e.what());
    }
    return p;
}

DexOrder parse_order_json(std::string_view line, const std::string& file, std::size_t line_no) {
    const Row row(line, file, line_no);
    DexOrder o;
    o.block = row.integer("block");
    o.timestamp = row.integer("timestamp");
    o.hash = row.text("hash");
    const std::string category = row.text("category");
    const auto parsed = parse_category(category);
    if (!parsed) row.fail("unknown category '" + category + "'");
    o.category = *parsed;
    o.pool_address = row.text("pool_address");
    o.sender = row.text("sender");
    o.x_paired = row.optional_real("x_paired");
    o.x_base = row.optional_real("x_base");
    o.y_paired = row.real("y_paired");
    o.y_base = row.real("y_base");
    o.price_paired = row.real_or("price_paired", 0.0);
    o.price_base = row.real_or("price_base", 1.0);
    o.gas_fee_usd = row.real_or("gas_fee_usd", 0.0);
    try {
        validate(o);
    } catch (const Error& e) {
        row.fail(e.what());
    }
    return o;
}

std::pair<Address, SecurityProfile> parse_profile_json(std::string_view line, const std::string& file,
                                                       std::size_t line_no) {
    const Row row(line, file, line_no);
    SecurityProfile p;
    const Address token = row.text("token_address");
    p.buy_tax = row.real_or("buy_tax", 0.0);
    p.sell_tax = row.real_or("sell_tax", 0.0);
    p.tax_modifiable = row.flag_or("tax_modifiable", false);
    p.buyable = row.flag_or("buyable", true);
    p.can_sell_all = row.flag_or("can_sell_all", true);
    p.balance_change_by_owner = row.flag_or("balance_change_by_owner", false);
    p.trading_cooldown = row.flag_or("trading_cooldown", false);
    p.trading_pausable = row.flag_or("trading_pausable", false);
    p.anti_whale = row.flag_or("anti_whale", false);
    p.slippage_modifiable = row.flag_or("slippage_modifiable", false);
    p.personal_slippage_modifiable = row.flag_or("personal_slippage_modifiable", false);
    p.transfer_pausable = row.flag_or("transfer_pausable", false);
    try {
        validate(p);
    } catch (const Error& e) {
        row.fail(e.what());
    }
    return {token, p};
}

}  // namespace slid::io
