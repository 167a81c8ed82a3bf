#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pocketeval/geometry.hpp"
#include "pocketeval/interactions.hpp"
#include "pocketeval/perception.hpp"
#include "pocketeval/report.hpp"

namespace pocketeval {

struct PocketEntry {
  std::string id;
  std::string pocket_path;     // PDB
  std::string reference_path;  // single-record SDF
  std::string generated_path;  // multi-record SDF
  std::optional<std::array<double, 3>> box_center;  // docking box; defaults to ligand centroid
};

struct EvalManifest {
  std::string method;
  std::vector<PocketEntry> entries;
};

// JSON: {"method": ..., "pockets": [{"id", "pocket", "reference", "generated",
// "center"?}]}. id and reference are required; pocket and generated may be
// omitted for consumers that do not need them (task building), but eval fails
// the affected pocket. Duplicate ids and unknown keys throw Error.
EvalManifest parse_eval_manifest(const std::string& json_text);

// Rebase relative pocket/reference/generated paths onto base_dir (the
// manifest's own directory, so a manifest can sit next to its files).
void resolve_manifest_paths(EvalManifest& manifest, const std::string& base_dir);

// Overlay pocket/reference paths from a second manifest keyed by id; entries
// present only in the overlay are ignored.
void merge_reference_manifest(EvalManifest& manifest, const std::string& json_text);

struct EvalThresholds {
  PerceptionOptions perception;
  InteractionOptions interactions;
  GeometryOptions geometry;
  ClashOptions clash;
  double validity_ratio = 0.85;  // largest-fragment ratio gate
};

struct EvalSettings {
  std::vector<std::string> aspects;  // subset of report aspect names; empty = all
  int jobs = 1;
  std::string vina_cmd;        // docking command template; empty disables live docking
  std::string vina_mode = "dock";  // mode label for live-docked energies
  double vina_timeout = 300;   // seconds per docking run, 0 = none
  std::string scores_file;     // precomputed energy CSV, alternative to vina_cmd
  std::string ref_scores_file; // reference-ligand energies, same CSV schema, ordinal 1
  std::string props_file;      // external QED/SA CSV
  std::string out_dir;
  EvalThresholds thresholds;
};

// Config file mirror of the CLI flags. Flags win over config values.
struct EvalConfig {
  std::string manifest_path;
  std::string reference_manifest_path;
  EvalSettings settings;
};

EvalConfig parse_eval_config(const std::string& json_text);

struct PocketOutcome {
  std::string id;
  bool ok = false;
  std::string error;  // set when ok is false
  MetricReport report;
  int generated_records = 0;
  int valid_molecules = 0;
};

struct EvalResult {
  MetricReport aggregate;
  std::vector<PocketOutcome> pockets;
  int pockets_succeeded = 0;
};

// Full pipeline: parse each pocket's files, reconstruct every generated
// record from its atom positions, gate on the validity ratio, then run the
// enabled aspect modules over the valid molecules and pool across pockets.
// Per-pocket failures are isolated into their outcome; the aggregate's
// summary carries molecule/validity counts.
EvalResult run_eval(const EvalManifest& manifest, const EvalSettings& settings);

}  // namespace pocketeval
