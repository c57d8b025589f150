#include "precis/manifest.hpp"

#include <fstream>
#include <sstream>

#include "precis/errors.hpp"
#include "precis/format.hpp"

namespace precis {

namespace {

constexpr const char* kMagic = "precis-manifest-v1";

void append_line(std::string& out, const std::string& key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
}

} // namespace

std::string format_manifest(const RunManifest& m) {
    std::string out = kMagic;
    out += '\n';
    append_line(out, "version", m.version);
    append_line(out, "command", m.command);
    append_line(out, "seed", std::to_string(m.master_seed));
    append_line(out, "wall_clock_utc", m.wall_clock_utc);
    for (const auto& token : m.argv) append_line(out, "argv", token);
    for (const auto& [key, value] : m.args) append_line(out, "arg." + key, value);
    for (const auto& path : m.outputs) append_line(out, "output", path);
    return out;
}

RunManifest parse_manifest(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kMagic)
        throw DataError("manifest: missing 'precis-manifest-v1' header line");

    RunManifest m;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::size_t sep = line.find(" = ");
        if (sep == std::string::npos)
            throw DataError("manifest: line " + std::to_string(line_no) +
                            ": expected 'key = value'");
        const std::string key = line.substr(0, sep);
        const std::string value = line.substr(sep + 3);
        if (key == "version") m.version = value;
        else if (key == "command") m.command = value;
        else if (key == "seed") {
            try {
                m.master_seed = parse_u64(value, "seed");
            } catch (const ConfigError&) {
                throw DataError("manifest: line " + std::to_string(line_no) +
                                ": seed is not an integer");
            }
        }
        else if (key == "wall_clock_utc") m.wall_clock_utc = value;
        else if (key == "argv") m.argv.push_back(value);
        else if (key == "output") m.outputs.push_back(value);
        else if (key.rfind("arg.", 0) == 0) m.args.emplace_back(key.substr(4), value);
        else throw DataError("manifest: line " + std::to_string(line_no) + ": unknown key '" +
                             key + "'");
    }
    if (m.command.empty()) throw DataError("manifest: no command recorded");
    return m;
}

void save_manifest(const std::string& path, const RunManifest& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(path + ": cannot open file for writing");
    out << format_manifest(m);
    if (!out) throw DataError(path + ": write failed");
}

RunManifest load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_manifest(buf.str());
}

} // namespace precis
