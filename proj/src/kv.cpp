#include "epimob/kv.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "epimob/error.hpp"
#include "epimob/load.hpp"

namespace epimob {

KeyValues KeyValues::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw input_error("cannot open config '" + path.string() + "'");
    }
    KeyValues kv;
    kv.path_ = path.string();

    auto is_space = [](unsigned char c) { return std::isspace(c); };
    auto trim = [&](std::string& s) {
        s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), is_space));
        s.erase(std::find_if_not(s.rbegin(), s.rend(), is_space).base(), s.end());
    };

    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw input_error("'" + kv.path_ + "' line " + std::to_string(line_no) +
                              ": expected key = value");
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        trim(key);
        trim(value);
        if (kv.entries_.count(key)) {
            throw input_error("'" + kv.path_ + "' line " + std::to_string(line_no) +
                              ": duplicate key '" + key + "'");
        }
        kv.entries_.emplace(key, std::make_pair(value, line_no));
    }
    return kv;
}

bool KeyValues::take(const std::string& key, std::string& out) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return false;
    out = it->second.first;
    entries_.erase(it);
    return true;
}

size_t KeyValues::line_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.second;
}

double KeyValues::take_number(const std::string& key, double fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    double v = parse_number(it->second.first, path_, it->second.second);
    entries_.erase(it);
    return v;
}

int KeyValues::take_int(const std::string& key, int fallback) {
    return int(take_number(key, double(fallback)));
}

std::string KeyValues::take_string(const std::string& key, const std::string& fallback) {
    std::string out;
    if (take(key, out)) return out;
    return fallback;
}

bool KeyValues::take_bool(const std::string& key, bool fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const std::string& v = it->second.first;
    bool result;
    if (v == "true" || v == "1" || v == "yes") result = true;
    else if (v == "false" || v == "0" || v == "no") result = false;
    else {
        throw input_error("'" + path_ + "' line " + std::to_string(it->second.second) +
                          ": expected a boolean for '" + key + "'");
    }
    entries_.erase(it);
    return result;
}

void KeyValues::finish() const {
    if (entries_.empty()) return;
    std::string keys;
    for (const auto& [k, v] : entries_) keys += (keys.empty() ? "" : ", ") + k;
    throw input_error("'" + path_ + "': unknown keys: " + keys);
}

} // namespace epimob
