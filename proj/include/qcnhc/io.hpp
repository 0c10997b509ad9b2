#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qcnhc/ensemble.hpp"

// Plain-text key=value configuration, figure presets, and CSV/manifest
// serialization.

namespace qcnhc {

// One "key = value" pair per line, '#' comments, unknown keys rejected.
// A "preset = figN" line expands first and later lines override it.
// Errors carry the line number and offending key.
EnsembleConfig parse_config(const std::string& text);
EnsembleConfig parse_config_file(const std::string& path);

// Every field materialized; parse_config(serialize_config(c)) == c.
std::string serialize_config(const EnsembleConfig& cfg);

// fig1..fig5 parameter sets.  Throws on unknown names.
void apply_preset(EnsembleConfig& cfg, const std::string& name);

// The back-end variants a figure compares (label, config); e.g. fig1 runs
// nve with 200 oscillators against nhc and bd with one.
std::vector<std::pair<std::string, EnsembleConfig>> preset_variants(
    const std::string& name);

// Manifest: resolved config plus '# key: value' diagnostic comments, itself
// a parseable config.
std::string make_manifest(const EnsembleConfig& cfg, const ObservableSeries& series,
                          double wall_seconds);

// CSV "t,mean,stderr,n_effective", full precision; manifest written to
// path with extension replaced by ".manifest".
void write_series(const ObservableSeries& series, const std::string& manifest,
                  const std::string& path);

// Reads back t/mean/stderr/n_effective columns.
ObservableSeries read_series(const std::string& path);

std::string manifest_path_for(const std::string& csv_path);

}  // namespace qcnhc
