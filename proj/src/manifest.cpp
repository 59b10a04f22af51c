#include "epimob/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "epimob/error.hpp"

namespace epimob {

uint64_t fnv1a64(const void* data, size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    uint64_t h = 0xcbf29ce484222325ULL;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t fnv1a64_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw input_error("cannot open '" + path.string() + "' for digesting");
    }
    uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

namespace {

std::string hex64(uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string utc_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

void RunManifest::add_input(const std::filesystem::path& path) {
    inputs[path.string()] = hex64(fnv1a64_file(path));
}

void RunManifest::add_outputs(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().filename() == "manifest.json") continue;
        files.push_back(entry.path());
    }
    for (const auto& f : files) {
        outputs[std::filesystem::relative(f, dir).string()] = hex64(fnv1a64_file(f));
    }
}

void RunManifest::write(const std::filesystem::path& dir) const {
    nlohmann::json j;
    j["command"] = command;
    j["config_hash"] = hex64(config_hash);
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["version"] = version;
    j["timestamp"] = timestamp.empty() ? utc_now() : timestamp;
    std::ofstream out(dir / "manifest.json");
    if (!out) {
        throw input_error("cannot write manifest to '" + dir.string() + "'");
    }
    out << j.dump(2) << "\n";
}

} // namespace epimob
