#pragma once

#include <map>
#include <string>
#include <vector>

namespace qcc::cli {

/// Sectioned plain-text configuration: top-level "key = value" lines are
/// global; "[iteration]" sections repeat (one per iQCC round); any other
/// "[name]" section appears at most once. '#' starts a comment.
struct ConfigFile {
    std::map<std::string, std::string> globals;
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::vector<std::map<std::string, std::string>> iterations;

    bool has(const std::string& key) const { return globals.count(key) > 0; }
    /// Global value or fallback.
    std::string get(const std::string& key, const std::string& fallback = "") const {
        const auto it = globals.find(key);
        return it == globals.end() ? fallback : it->second;
    }
};

ConfigFile parse_config(const std::string& path);

}  // namespace qcc::cli
