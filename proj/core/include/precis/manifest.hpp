#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace precis {

// Record of one CLI run: enough to rerun the command and regenerate every
// output file byte-for-byte. argv holds the original tokens verbatim (one
// per line in the text form), args the resolved settings for human readers.
struct RunManifest {
    std::string command;
    std::vector<std::string> argv;
    std::vector<std::pair<std::string, std::string>> args;
    std::uint64_t master_seed = 0;
    std::string version;
    std::string wall_clock_utc;
    std::vector<std::string> outputs;
};

// Plain-text form: a fixed first line "precis-manifest-v1", then "key = value"
// lines. Keys: version, command, seed, wall_clock_utc, argv (repeated, one
// token each), arg.<name> (repeated), output (repeated).
std::string format_manifest(const RunManifest& m);

// Inverse of format_manifest; malformed text raises DataError.
RunManifest parse_manifest(const std::string& text);

void save_manifest(const std::string& path, const RunManifest& m);
RunManifest load_manifest(const std::string& path);

} // namespace precis
