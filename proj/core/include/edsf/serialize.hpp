#pragma once

#include <filesystem>
#include <string>

#include "edsf/construct.hpp"
#include "edsf/coverage.hpp"
#include "edsf/dataset.hpp"
#include "edsf/dsf.hpp"
#include "edsf/edsf.hpp"
#include "edsf/graph.hpp"
#include "edsf/set_function.hpp"
#include "edsf/train.hpp"

namespace edsf {

// JSON text formats. Numbers round-trip exactly (shortest-representation
// printing), so a reloaded model evaluates bit-identically. Loaders validate
// and throw std::invalid_argument on malformed or invariant-breaking input
// (negative weights, bad dimensions, wrong "kind", ...).

std::string coverage_to_json(const CoverageSpec& spec);
CoverageSpec coverage_from_json(const std::string& text);

std::string graph_to_json(const GraphSpec& g);
GraphSpec graph_from_json(const std::string& text);

std::string tabulated_to_json(const TabulatedFunction& f);
TabulatedFunction tabulated_from_json(const std::string& text);

std::string dsf_to_json(const DsfNetwork& net);
DsfNetwork dsf_from_json(const std::string& text);

std::string edsf_to_json(const EdsfModel& model);
EdsfModel edsf_from_json(const std::string& text);

// Accepts either kind: a "dsf" file loads as a one-component model.
EdsfModel model_from_json(const std::string& text);

std::string report_to_json(const ConstructionReport& report);

std::string train_config_to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const std::string& text);

// Datasets are JSON-lines: one {"x":[...],"y":...} object per sample.
std::string dataset_to_jsonl(const SampleDataset& ds);
SampleDataset dataset_from_jsonl(const std::string& text);

// Metrics files: per-epoch CSV ("epoch,train_loss") and a summary JSON.
std::string metrics_to_csv(const Metrics& m);
std::string metrics_summary_to_json(const Metrics& m);

// Small file helpers shared by the CLI and tests.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

} // namespace edsf
