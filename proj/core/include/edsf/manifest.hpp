#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace edsf {

// Every CLI run writes manifest.json into its output directory before doing
// any work (status "running") and rewrites it on success (status "complete"),
// so an interrupted run is detectable by its stale status.
struct RunManifest {
    std::string command;            // subcommand name
    std::vector<std::string> args;  // raw argv tail, for the record
    std::string config_json;        // embedded config snapshot (raw JSON)
    std::uint64_t seed = 0;
    std::string version;
    std::string status;             // "running" | "complete"
    std::string started_at;         // ISO-8601 UTC
    std::string finished_at;
    double wall_seconds = 0.0;
    std::vector<std::string> outputs; // files written, relative to the run dir
    std::map<std::string, double> summary; // aggregate statistics (mean/std/...)

    // not serialized; set by manifest_begin for precise wall-clock accounting
    std::chrono::steady_clock::time_point t0{};
};

std::string manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const std::string& text);

// Stamps started_at/status and writes manifest.json under dir (creating it).
void manifest_begin(const std::filesystem::path& dir, RunManifest& m);

// Verifies every listed output exists, stamps finish fields, rewrites the file.
void manifest_complete(const std::filesystem::path& dir, RunManifest& m);

} // namespace edsf
