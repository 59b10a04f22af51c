#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace epimob {

/// Flat `key = value` config file: one pair per line, `#` comments,
/// whitespace-insensitive. Consumers `take` the keys they know;
/// finish() rejects leftovers so typos surface instead of being ignored.
class KeyValues {
public:
    static KeyValues from_file(const std::filesystem::path& path);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    /// Removes and returns the raw value; empty optional when absent.
    bool take(const std::string& key, std::string& out);

    double take_number(const std::string& key, double fallback);
    int take_int(const std::string& key, int fallback);
    std::string take_string(const std::string& key, const std::string& fallback);
    bool take_bool(const std::string& key, bool fallback);

    /// Throws input_error listing any unconsumed keys.
    void finish() const;

    const std::string& path() const { return path_; }
    size_t line_of(const std::string& key) const;

private:
    std::string path_;
    std::map<std::string, std::pair<std::string, size_t>> entries_; // key -> (value, line)
};

} // namespace epimob
