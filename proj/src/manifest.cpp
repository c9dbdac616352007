#include "treecut/manifest.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "treecut/errors.hpp"

namespace treecut {

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

std::string fnv1a64_hex_of_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open file for checksum: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return fnv1a64_hex(buffer.str());
}

std::string manifest_path_for(const std::string& output_path) {
    return output_path + ".manifest.json";
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    nlohmann::json j;
    j["version"] = manifest.version;
    j["generator"] = manifest.generator;
    j["command_line"] = manifest.command_line;
    j["seed"] = manifest.seed;
    j["wall_time_ms"] = manifest.wall_time_ms;
    j["outputs"] = nlohmann::json::array();
    for (auto& [file, digest] : manifest.outputs)
        j["outputs"].push_back({{"path", file}, {"fnv1a64", digest}});
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write manifest: " + path);
    out << j.dump(2) << '\n';
}

}  // namespace treecut
