#include "slid/kv_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "slid/error.hpp"

namespace slid {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(const std::string& origin, const std::string& key, const std::string& value) {
    throw Error(ErrorCode::ConfigError, origin + ": invalid value '" + value + "' for key '" + key + "'");
}

double to_double(const std::string& origin, const std::string& key, std::string_view text) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) bad_value(origin, key, std::string(text));
    return value;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text, const std::string& origin) {
    KeyValueConfig config;
    config.origin_ = origin;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::ConfigError,
                        origin + ":" + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key(trim(line.substr(0, eq)));
        std::string_view value = trim(line.substr(eq + 1));
        if (const auto hash = value.find(" #"); hash != std::string_view::npos) {
            value = trim(value.substr(0, hash));
        }
        if (key.empty()) {
            throw Error(ErrorCode::ConfigError, origin + ":" + std::to_string(line_no) + ": empty key");
        }
        config.values_[key] = std::string(value);
    }
    return config;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path.string());
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    const auto value = get(key);
    if (!value) return fallback;
    return to_double(origin_, key, *value);
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
    const auto value = get(key);
    if (!value) return fallback;
    long long out = 0;
    const auto* end = value->data() + value->size();
    const auto [ptr, ec] = std::from_chars(value->data(), end, out);
    if (ec != std::errc{} || ptr != end) bad_value(origin_, key, *value);
    return out;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
    const auto value = get(key);
    if (!value) return fallback;
    if (*value == "true" || *value == "1" || *value == "yes") return true;
    if (*value == "false" || *value == "0" || *value == "no") return false;
    bad_value(origin_, key, *value);
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key) const {
    std::vector<double> out;
    const auto value = get(key);
    if (!value) return out;
    std::string_view rest = *value;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        out.push_back(to_double(origin_, key, trim(rest.substr(0, comma))));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    return out;
}

void KeyValueConfig::require_known(const std::vector<std::string_view>& known) const {
    for (const auto& [key, value] : values_) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw Error(ErrorCode::ConfigError, origin_ + ": unknown key '" + key + "'");
        }
    }
}

}  // namespace slid
