#include "edsf/manifest.hpp"

#include <chrono>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "edsf/serialize.hpp"

namespace edsf {

using nlohmann::json;

namespace {

std::string now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

} // namespace

std::string manifest_to_json(const RunManifest& m) {
    json j;
    j["command"] = m.command;
    j["args"] = m.args;
    j["config"] = m.config_json.empty() ? json::object() : json::parse(m.config_json);
    j["seed"] = m.seed;
    j["version"] = m.version;
    j["status"] = m.status;
    j["started_at"] = m.started_at;
    j["finished_at"] = m.finished_at;
    j["wall_seconds"] = m.wall_seconds;
    j["outputs"] = m.outputs;
    j["summary"] = m.summary;
    return j.dump(2);
}

RunManifest manifest_from_json(const std::string& text) {
    const json j = json::parse(text);
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.args = j.at("args").get<std::vector<std::string>>();
    m.config_json = j.at("config").dump();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.version = j.at("version").get<std::string>();
    m.status = j.at("status").get<std::string>();
    m.started_at = j.at("started_at").get<std::string>();
    m.finished_at = j.at("finished_at").get<std::string>();
    m.wall_seconds = j.at("wall_seconds").get<double>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.summary = j.at("summary").get<std::map<std::string, double>>();
    return m;
}

void manifest_begin(const std::filesystem::path& dir, RunManifest& m) {
    std::filesystem::create_directories(dir);
    m.status = "running";
    m.started_at = now_iso8601();
    m.finished_at.clear();
    m.wall_seconds = 0.0;
    m.t0 = std::chrono::steady_clock::now();
    write_text_file(dir / "manifest.json", manifest_to_json(m));
}

void manifest_complete(const std::filesystem::path& dir, RunManifest& m) {
    for (const std::string& rel : m.outputs)
        if (!std::filesystem::exists(dir / rel))
            throw std::runtime_error("manifest: listed output missing: " + rel);
    m.status = "complete";
    m.finished_at = now_iso8601();
    m.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - m.t0).count();
    write_text_file(dir / "manifest.json", manifest_to_json(m));
}

} // namespace edsf
