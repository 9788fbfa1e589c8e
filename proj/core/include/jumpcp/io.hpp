#pragma once

#include <string>

#include "jumpcp/harness.hpp"
#include "jumpcp/sample_path.hpp"

namespace jumpcp {

// Observation CSV with header "i,t,x": one row per observation time, origin
// included, 17 significant digits so a round trip reproduces every bit.
void write_path_csv(const std::string& file, const SamplePath& path);

// Strict reader for the same layout: contiguous indices from 0, an evenly
// spaced time column, finite values. Violations throw std::runtime_error.
SamplePath read_path_csv(const std::string& file);

// Jump log CSV with header "time,size,level_time" (level_time is the rescaled
// position in [0, 1] whose kernel produced the jump).
void write_jumps_csv(const std::string& file, const SamplePath& path);

// Long-format results: scenario,n,kn,procedure,t0,metric,value,se,replications.
// Deterministic byte-for-byte given the same ExperimentResult rows.
void write_metrics_csv(const std::string& file, const ExperimentResult& result);

// Companion manifest: config echo, seed, diagnostics, wall time, version.
void write_manifest_json(const std::string& file, const ExperimentConfig& config,
                         const ExperimentResult& result);

// Experiment configuration from JSON; absent keys keep their defaults.
ExperimentConfig read_experiment_config(const std::string& file);

}  // namespace jumpcp
