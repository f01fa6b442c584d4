#pragma once
// Command implementations behind the CLI binary, exposed as a library
// so tests can drive whole pipelines in-process. Every command writes
// files under RunConfig::out_dir and is byte-deterministic for a fixed
// config and seed.
//
// Error contract (mapped to exit codes by the CLI): std::invalid_argument
// for usage problems, DataError for unreadable or malformed inputs,
// ModelError for training and model-file failures.

#include <cstdint>
#include <iosfwd>
#include <string>

#include "ties/core.hpp"
#include "ties/models.hpp"
#include "ties/synth.hpp"

namespace ties {

struct RunConfig {
  // Input paths. Commands that read communication data require cdr_path
  // and surveys_path.
  std::string cdr_path;
  std::string surveys_path;
  std::string model_path;  // saved model to load (signals/analyze) or write (train)
  std::string out_dir = ".";

  std::uint64_t seed = 0;
  bool seed_set = false;

  // Model selection; empty picks the per-command default (train and
  // signals: ensemble, analyze: volume).
  std::string model;

  double rbo_p = 0.9;
  int folds = 3;
  MlOptions ml;

  // Analysis knobs.
  double epsilon = 0.1;
  int min_events = 3;
  int sample_days = 7;   // signal sampling cadence
  int warmup_days = 90;  // skip samples until this much history exists

  int threads = 0;  // 0 keeps the current library setting

  WorldConfig world = WorldConfig::defaults();
};

// Applies `key = value` lines onto an existing config. '#' starts a
// comment; blank lines are ignored. Unknown keys and malformed values
// throw DataError naming the line. The documented schema lives in the
// README.
void apply_config_file(RunConfig& config, std::istream& in);
void apply_config_file(RunConfig& config, const std::string& path);

// synth: writes cdr.csv, surveys.json, truth.json.
void cmd_synth(const RunConfig& config);

// train: fits the selected trainable model on all egos and saves it to
// model_path (default out_dir/model.json).
void cmd_train(const RunConfig& config);

// evaluate: temporal cross-validation of the eight standard models;
// writes leaderboard.csv and report.json.
void cmd_evaluate(const RunConfig& config);

// signals: continuous tie signals for one ego; when a trainable model
// is selected without a saved model file, it is trained on the fly with
// the target ego's surveys and events excluded. Writes
// signals_<ego>.csv with survey-time rank-correctness flags.
void cmd_signals(const RunConfig& config, const PersonId& ego);

// analyze: relation-class series, transition-difference KDE curves,
// triadic gender asymmetry, and motif counts over all egos' signals.
// Writes relations.csv, transitions.csv, genders.csv, motifs.csv.
void cmd_analyze(const RunConfig& config);

}  // namespace ties
