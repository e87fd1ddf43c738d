#pragma once

#include <map>
#include <string>
#include <vector>

namespace roughheat::config {

/// key = value configuration with [section] headers; keys are stored as
/// "section.key".  '#' starts a comment.
struct Config {
    std::map<std::string, std::string> kv;

    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& key) const { return kv.count(key) > 0; }
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;

    /// Canonical echo (sorted keys) embedded into run manifests.
    std::string echo_json() const;
};

}  // namespace roughheat::config
