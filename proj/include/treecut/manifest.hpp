#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace treecut {

// Reproducibility record written next to every output file: re-running the
// recorded command line with the recorded seed reproduces the outputs
// byte-for-byte, checkable against the stored checksums.
struct RunManifest {
    std::string version;
    std::string generator;
    std::string command_line;
    std::uint64_t seed = 0;
    double wall_time_ms = 0;
    std::vector<std::pair<std::string, std::string>> outputs;  // (path, fnv1a64 hex)
};

// FNV-1a 64-bit digest, as a 16-digit hex string.
std::string fnv1a64_hex(const std::string& bytes);
std::string fnv1a64_hex_of_file(const std::string& path);

std::string manifest_path_for(const std::string& output_path);
void write_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace treecut
