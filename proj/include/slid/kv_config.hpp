#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slid {

// Plain-text `key = value` configuration. Blank lines and lines starting
// with '#' are ignored. Unknown keys are reported by the consumer.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::string_view text, const std::string& origin = "<string>");
    static KeyValueConfig load(const std::filesystem::path& path);

    bool contains(const std::string& key) const { return values_.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;

    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::vector<double> get_doubles(const std::string& key) const;

    const std::map<std::string, std::string>& values() const noexcept { return values_; }
    const std::string& origin() const noexcept { return origin_; }

    // Throws ConfigError naming the first key not in `known`.
    void require_known(const std::vector<std::string_view>& known) const;

private:
    std::map<std::string, std::string> values_;
    std::string origin_;
};

}  // namespace slid
