#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace epimob {

inline constexpr const char* kVersion = "0.1.0";

/// FNV-1a 64-bit content fingerprint (reproducibility, not security).
uint64_t fnv1a64(const void* data, size_t len);
uint64_t fnv1a64_file(const std::filesystem::path& path);

/// Reproducibility record written once per output directory. Reruns with
/// identical inputs produce identical digests; the timestamp is
/// informational only.
struct RunManifest {
    std::string command;
    uint64_t config_hash = 0;
    std::map<std::string, std::string> inputs;  // path -> digest (hex)
    std::map<std::string, std::string> outputs; // relative path -> digest (hex)
    std::string version = kVersion;
    std::string timestamp;

    void add_input(const std::filesystem::path& path);
    /// Digests every regular file under dir except manifest.json itself.
    void add_outputs(const std::filesystem::path& dir);
    void write(const std::filesystem::path& dir) const;
};

} // namespace epimob
