#include "ties/commands.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "ties/baselines.hpp"
#include "ties/cross_validation.hpp"
#include "ties/dynamics.hpp"
#include "ties/format.hpp"
#include "ties/parallel.hpp"
#include "ties/rng.hpp"
#include "ties/serialize.hpp"
#include "ties/tournament.hpp"

namespace ties {
namespace {

namespace fs = std::filesystem;

void require_seed(const RunConfig& cfg) {
  if (!cfg.seed_set) throw std::invalid_argument("this command requires a seed");
}

void apply_threads(const RunConfig& cfg) {
  if (cfg.threads > 0) parallel::set_max_threads(cfg.threads);
}

std::ifstream open_input(const std::string& path, const char* what) {
  if (path.empty())
    throw std::invalid_argument(std::string("missing ") + what + " path");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + std::string(what) + " file: " + path);
  return in;
}

// Binary mode keeps output bytes platform-independent.
std::ofstream open_path(const fs::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw DataError("cannot create directory " + path.parent_path().string());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
  fs::path dir(cfg.out_dir.empty() ? "." : cfg.out_dir);
  return open_path(dir / name);
}

void finish(std::ofstream& out, const std::string& name) {
  out.flush();
  if (!out) throw DataError("write failed: " + name);
}

struct Dataset {
  EventStore store;
  std::vector<SurveyResponse> surveys;
  std::vector<PersonId> egos;  // distinct survey egos, sorted
};

Dataset load_dataset(const RunConfig& cfg) {
  Dataset d;
  {
    auto in = open_input(cfg.surveys_path, "surveys");
    d.surveys = load_surveys(in);
  }
  if (d.surveys.empty()) throw DataError("survey file contains no records");
  std::set<PersonId> egos;
  for (const auto& s : d.surveys) egos.insert(s.ego);
  d.egos.assign(egos.begin(), egos.end());
  auto in = open_input(cfg.cdr_path, "cdr");
  LoadResult loaded = load_events(in, d.egos);
  if (!loaded.rejects.empty()) {
    const auto& r = loaded.rejects.front();
    std::ostringstream msg;
    msg << "cdr file " << cfg.cdr_path << ": " << loaded.rejects.size()
        << " rejected line(s); first at line " << r.line_number << ": " << r.reason;
    throw DataError(msg.str());
  }
  if (loaded.store.total_events() == 0)
    throw DataError("cdr file contains no events");
  d.store = std::move(loaded.store);
  return d;
}

std::vector<TieRanking> survey_truths(const std::vector<SurveyResponse>& surveys) {
  std::vector<TieRanking> out;
  out.reserve(surveys.size());
  const TournamentConfig tc = TournamentConfig::standard();
  for (const auto& s : surveys) out.push_back(rank_alters(s, tc));
  return out;
}

std::pair<Timestamp, Timestamp> event_span(const EventStore& store) {
  auto first = store.view().first_event_time();
  if (!first) throw DataError("no events available");
  Timestamp last = *first;
  for (const auto& e : store.all_events()) last = std::max(last, e.timestamp);
  return {*first, last};
}

// Count-based ranks over the first few days are mostly ties and noise,
// so sampling starts after a warmup (at least one step) and runs one
// step past the last event so the final state is captured.
std::vector<Timestamp> sample_grid(Timestamp first, Timestamp last, int sample_days,
                                   int warmup_days) {
  if (sample_days < 1) throw std::invalid_argument("sample_days must be positive");
  if (warmup_days < 0) throw std::invalid_argument("warmup_days must be non-negative");
  std::vector<Timestamp> grid;
  const Timestamp step = static_cast<Timestamp>(sample_days) * kSecondsPerDay;
  const Timestamp offset =
      std::max(step, static_cast<Timestamp>(warmup_days) * kSecondsPerDay);
  for (Timestamp t = first + offset; t <= last + step; t += step) grid.push_back(t);
  return grid;
}

bool is_trainable_kind(const std::string& kind) {
  return kind == "ensemble" || kind == "lstm";
}

std::unique_ptr<PairwiseComparator> train_comparator(
    const std::string& kind, const StoreView& view,
    const std::vector<SurveyResponse>& surveys, const MlOptions& ml,
    std::uint64_t seed, const std::vector<PersonId>& excluded_egos) {
  TrainingPairs pairs = generate_training_pairs(survey_truths(surveys), view);
  if (pairs.examples.empty())
    throw ModelError("no usable training pairs in the provided surveys");
  auto examples = subsample_examples(std::move(pairs.examples),
                                     ml.max_training_examples,
                                     derive_seed(seed, "cap"));
  assert_ego_disjoint(examples, excluded_egos);
  if (kind == "ensemble") {
    auto result = train_forest_model(examples, view, ml.forest,
                                     derive_seed(seed, "forest"));
    return std::make_unique<ForestComparator>(std::move(result.model));
  }
  auto result = train_recurrent_model(examples, view, ml.recurrent,
                                      derive_seed(seed, "recurrent"));
  return std::make_unique<RecurrentComparator>(std::move(result.net));
}

// Baselines come straight from their kind; trainable kinds prefer a
// saved model file and otherwise train on the provided surveys.
std::unique_ptr<PairwiseComparator> make_comparator(
    const RunConfig& cfg, const std::string& kind, const StoreView& train_view,
    const std::vector<SurveyResponse>& train_surveys,
    const std::vector<PersonId>& excluded_egos) {
  if (auto baseline = baseline_kind_from_name(kind)) {
    if (!cfg.model_path.empty())
      throw std::invalid_argument("a model file cannot be combined with baseline " + kind);
    if (*baseline == BaselineKind::Random) require_seed(cfg);
    return std::make_unique<ScoreComparator>(*baseline, cfg.seed);
  }
  if (!is_trainable_kind(kind))
    throw std::invalid_argument("unknown model: " + kind);
  if (!cfg.model_path.empty()) {
    auto in = open_input(cfg.model_path, "model");
    return comparator_of(load_model(in));
  }
  require_seed(cfg);
  return train_comparator(kind, train_view, train_surveys, cfg.ml, cfg.seed,
                          excluded_egos);
}

std::int64_t parse_i64(const std::string& value, std::size_t line_no) {
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw DataError("config line " + std::to_string(line_no) +
                    ": expected an integer, got '" + value + "'");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& value, std::size_t line_no) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw DataError("config line " + std::to_string(line_no) +
                    ": expected a non-negative integer, got '" + value + "'");
  }
  return out;
}

int parse_int(const std::string& value, std::size_t line_no) {
  auto v = parse_i64(value, line_no);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw DataError("config line " + std::to_string(line_no) + ": integer out of range");
  return static_cast<int>(v);
}

double parse_real(const std::string& value, std::size_t line_no) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw DataError("config line " + std::to_string(line_no) +
                    ": expected a number, got '" + value + "'");
  }
  return out;
}

std::string trim_copy(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void assign_key(RunConfig& cfg, const std::string& key, const std::string& value,
                std::size_t line_no) {
  if (key == "cdr") cfg.cdr_path = value;
  else if (key == "surveys") cfg.surveys_path = value;
  else if (key == "model_file") cfg.model_path = value;
  else if (key == "out") cfg.out_dir = value;
  else if (key == "model") cfg.model = value;
  else if (key == "seed") {
    cfg.seed = parse_u64(value, line_no);
    cfg.seed_set = true;
  } else if (key == "threads") cfg.threads = parse_int(value, line_no);
  else if (key == "folds") cfg.folds = parse_int(value, line_no);
  else if (key == "rbo_p") cfg.rbo_p = parse_real(value, line_no);
  else if (key == "epsilon") cfg.epsilon = parse_real(value, line_no);
  else if (key == "min_events") cfg.min_events = parse_int(value, line_no);
  else if (key == "sample_days") cfg.sample_days = parse_int(value, line_no);
  else if (key == "warmup_days") cfg.warmup_days = parse_int(value, line_no);
  else if (key == "max_training_examples")
    cfg.ml.max_training_examples = parse_u64(value, line_no);
  else if (key == "forest.trees") cfg.ml.forest.tree_count = parse_int(value, line_no);
  else if (key == "forest.max_depth") cfg.ml.forest.max_depth = parse_int(value, line_no);
  else if (key == "forest.min_leaf") cfg.ml.forest.min_leaf = parse_int(value, line_no);
  else if (key == "forest.feature_candidates")
    cfg.ml.forest.feature_candidates = parse_int(value, line_no);
  else if (key == "lstm.hidden") cfg.ml.recurrent.hidden = parse_int(value, line_no);
  else if (key == "lstm.epochs") cfg.ml.recurrent.epochs = parse_int(value, line_no);
  else if (key == "lstm.batch") cfg.ml.recurrent.batch_size = parse_int(value, line_no);
  else if (key == "lstm.learning_rate")
    cfg.ml.recurrent.learning_rate = parse_real(value, line_no);
  else if (key == "lstm.clip") cfg.ml.recurrent.clip_norm = parse_real(value, line_no);
  else if (key == "world.egos") cfg.world.egos = parse_int(value, line_no);
  else if (key == "world.waves") cfg.world.waves = parse_int(value, line_no);
  else if (key == "world.wave_spacing_days")
    cfg.world.wave_spacing_days = parse_int(value, line_no);
  else if (key == "world.start") cfg.world.start = parse_i64(value, line_no);
  else if (key == "world.so_probability")
    cfg.world.so_probability = parse_real(value, line_no);
  else if (key == "world.close_friends")
    cfg.world.close_friends = parse_int(value, line_no);
  else if (key == "world.acquaintances")
    cfg.world.acquaintances = parse_int(value, line_no);
  else if (key == "world.chatty_contacts")
    cfg.world.chatty_contacts = parse_int(value, line_no);
  else if (key == "world.weak_contacts")
    cfg.world.weak_contacts = parse_int(value, line_no);
  else if (key == "world.listing_floor")
    cfg.world.listing_floor = parse_real(value, line_no);
  else if (key == "world.list_cap") cfg.world.list_cap = parse_int(value, line_no);
  else
    throw DataError("config line " + std::to_string(line_no) + ": unknown key '" +
                    key + "'");
}

}  // namespace

void apply_config_file(RunConfig& config, std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string trimmed = trim_copy(line);
    if (trimmed.empty()) continue;
    std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw DataError("config line " + std::to_string(line_no) +
                      ": expected 'key = value'");
    std::string key = trim_copy(trimmed.substr(0, eq));
    std::string value = trim_copy(trimmed.substr(eq + 1));
    if (key.empty() || value.empty())
      throw DataError("config line " + std::to_string(line_no) +
                      ": empty key or value");
    assign_key(config, key, value, line_no);
  }
}

void apply_config_file(RunConfig& config, const std::string& path) {
  auto in = open_input(path, "config");
  apply_config_file(config, in);
}

void cmd_synth(const RunConfig& config) {
  apply_threads(config);
  require_seed(config);
  SynthWorld world = generate_world(config.world, config.seed);
  {
    auto out = open_output(config, "cdr.csv");
    write_cdr(world.store, out);
    finish(out, "cdr.csv");
  }
  {
    auto out = open_output(config, "surveys.json");
    write_surveys(world.surveys, out);
    finish(out, "surveys.json");
  }
  {
    auto out = open_output(config, "truth.json");
    write_truth(world, out);
    finish(out, "truth.json");
  }
}

void cmd_train(const RunConfig& config) {
  apply_threads(config);
  require_seed(config);
  const std::string kind = config.model.empty() ? "ensemble" : config.model;
  if (!is_trainable_kind(kind))
    throw std::invalid_argument("model " + kind + " is not trainable");
  Dataset d = load_dataset(config);
  const StoreView view = d.store.view();

  TrainingPairs pairs = generate_training_pairs(survey_truths(d.surveys), view);
  if (pairs.examples.empty())
    throw ModelError("no usable training pairs in the provided surveys");
  auto examples = subsample_examples(std::move(pairs.examples),
                                     config.ml.max_training_examples,
                                     derive_seed(config.seed, "cap"));

  auto out = config.model_path.empty() ? open_output(config, "model.json")
                                       : open_path(fs::path(config.model_path));
  if (kind == "ensemble") {
    auto result = train_forest_model(examples, view, config.ml.forest,
                                     derive_seed(config.seed, "forest"));
    save_model(result.model, out);
  } else {
    auto result = train_recurrent_model(examples, view, config.ml.recurrent,
                                        derive_seed(config.seed, "recurrent"));
    save_model(result.net, out);
  }
  finish(out, "model file");
}

void cmd_evaluate(const RunConfig& config) {
  apply_threads(config);
  require_seed(config);
  Dataset d = load_dataset(config);

  auto models = standard_models(config.ml);
  std::vector<RankingModel*> pointers;
  pointers.reserve(models.size());
  for (const auto& m : models) pointers.push_back(m.get());

  CvOptions options;
  options.folds = config.folds;
  options.rbo.p = config.rbo_p;
  ScoreReport report = temporal_cv(d.store, d.surveys, pointers, options, config.seed);

  {
    auto out = open_output(config, "leaderboard.csv");
    write_report_csv(report, out);
    finish(out, "leaderboard.csv");
  }
  {
    auto out = open_output(config, "report.json");
    write_report_json(report, out);
    finish(out, "report.json");
  }
}

void cmd_signals(const RunConfig& config, const PersonId& ego) {
  apply_threads(config);
  if (ego.empty()) throw std::invalid_argument("an ego id is required");
  Dataset d = load_dataset(config);
  if (!std::binary_search(d.egos.begin(), d.egos.end(), ego))
    throw DataError("no surveys for ego " + ego);

  const std::string kind = config.model.empty() ? "ensemble" : config.model;

  // Training on the fly must not see the target ego: neither their
  // surveys nor any event they took part in.
  std::unique_ptr<PairwiseComparator> comparator;
  std::optional<EventStore> holdout;
  if (is_trainable_kind(kind) && config.model_path.empty()) {
    require_seed(config);
    EventStore::Builder builder;
    std::vector<PersonId> rest;
    for (const auto& id : d.egos)
      if (id != ego) rest.push_back(id);
    builder.set_participants(rest);
    for (const auto& e : d.store.all_events())
      if (e.sender != ego && e.receiver != ego) builder.add(e);
    holdout = std::move(builder).build();
    std::vector<SurveyResponse> others;
    for (const auto& s : d.surveys)
      if (s.ego != ego) others.push_back(s);
    comparator = train_comparator(kind, holdout->view(), others, config.ml,
                                  config.seed, {ego});
  } else {
    comparator = make_comparator(config, kind, d.store.view(), d.surveys, {});
  }

  auto [first, last] = event_span(d.store);
  std::set<Timestamp> grid_times;
  for (Timestamp t : sample_grid(first, last, config.sample_days, config.warmup_days))
    grid_times.insert(t);
  std::set<Timestamp> survey_times;
  for (const auto& s : d.surveys)
    if (s.ego == ego) {
      survey_times.insert(s.time);
      grid_times.insert(s.time);
    }
  std::vector<Timestamp> grid(grid_times.begin(), grid_times.end());

  const StoreView view = d.store.view();
  auto signals = signal_series(*comparator, view, ego, grid);

  // Rank-correctness at each survey time: does the comparator place the
  // alter at the same position the survey tournament does?
  std::map<std::pair<PersonId, Timestamp>, int> correct;
  const TournamentConfig tc = TournamentConfig::standard();
  for (const auto& s : d.surveys) {
    if (s.ego != ego) continue;
    TieRanking truth = rank_alters(s, tc);
    TieRanking pred = comparator_ranking(*comparator, view, ego, s.time);
    std::map<PersonId, std::size_t> pred_pos;
    for (std::size_t i = 0; i < pred.alters.size(); ++i) pred_pos[pred.alters[i]] = i;
    for (std::size_t i = 0; i < truth.alters.size(); ++i) {
      auto it = pred_pos.find(truth.alters[i]);
      bool hit = it != pred_pos.end() && it->second == i;
      correct[{truth.alters[i], s.time}] = hit ? 1 : 0;
    }
  }

  auto out = open_output(config, "signals_" + ego + ".csv");
  out << "alter,time,value,survey,rank_correct\n";
  for (const auto& [alter, signal] : signals) {
    for (const auto& sample : signal.samples) {
      bool at_survey = survey_times.count(sample.time) > 0;
      out << alter << ',' << sample.time << ',' << format_double(sample.value)
          << ',' << (at_survey ? 1 : 0) << ',';
      if (auto it = correct.find({alter, sample.time}); it != correct.end())
        out << it->second;
      out << '\n';
    }
  }
  finish(out, "signals csv");
}

void cmd_analyze(const RunConfig& config) {
  apply_threads(config);
  Dataset d = load_dataset(config);
  const std::string kind = config.model.empty() ? "volume" : config.model;
  auto comparator = make_comparator(config, kind, d.store.view(), d.surveys, {});

  auto [first, last] = event_span(d.store);
  std::vector<Timestamp> grid =
      sample_grid(first, last, config.sample_days, config.warmup_days);
  const StoreView view = d.store.view();

  SignalTable table;
  for (const auto& ego : d.egos) {
    auto series = signal_series(*comparator, view, ego, grid);
    for (auto& [alter, signal] : series)
      table.emplace(std::make_pair(ego, alter), std::move(signal));
  }

  const auto labels = relation_labels(d.surveys);

  {
    auto out = open_output(config, "relations.csv");
    out << "relation,time,mean,count\n";
    for (const auto& series : relation_class_series(table, labels, grid)) {
      for (std::size_t i = 0; i < series.times.size(); ++i) {
        if (series.count[i] == 0) continue;
        out << relation_name(series.relation) << ',' << series.times[i] << ','
            << format_double(series.mean[i]) << ',' << series.count[i] << '\n';
      }
    }
    finish(out, "relations.csv");
  }

  {
    // Transition-difference KDE per relation class. Classes with fewer
    // than two measurable edges, or zero spread, emit no curve.
    std::map<Relation, std::vector<double>> differences;
    for (const auto& [edge, signal] : table) {
      auto label = labels.find(edge);
      if (label == labels.end()) continue;
      if (auto stat = transition_stat(signal))
        differences[label->second].push_back(stat->difference);
    }
    auto out = open_output(config, "transitions.csv");
    out << "relation,x,density\n";
    for (auto& [relation, diffs] : differences) {
      if (diffs.size() < 2) continue;
      GaussianKde kde(std::move(diffs));
      if (kde.degenerate()) continue;
      for (int k = 0; k <= 100; ++k) {
        double x = -1.0 + 0.02 * k;
        out << relation_name(relation) << ',' << format_double(x) << ','
            << format_double(kde.evaluate(x)) << '\n';
      }
    }
    finish(out, "transitions.csv");
  }

  // Semesters: from the first event to each survey wave in turn.
  std::set<Timestamp> wave_set;
  for (const auto& s : d.surveys) wave_set.insert(s.time);
  std::vector<std::pair<Timestamp, Timestamp>> semesters;
  Timestamp begin = first;
  for (Timestamp wave : wave_set) {
    semesters.emplace_back(begin, wave);
    begin = wave;
  }
  auto triads = extract_stable_triads(view, semesters, config.min_events);

  // Genders come from survey answers; on conflict the latest wave wins.
  std::map<PersonId, std::pair<Timestamp, Gender>> seen;
  for (const auto& s : d.surveys) {
    for (const auto& a : s.answers) {
      auto it = seen.find(a.alter);
      if (it == seen.end() || s.time >= it->second.first)
        seen[a.alter] = {s.time, a.gender};
    }
  }
  std::map<PersonId, Gender> genders;
  for (const auto& [id, tg] : seen) genders[id] = tg.second;

  {
    auto out = open_output(config, "genders.csv");
    out << "type,time,mean,count\n";
    for (const auto& series : gender_asymmetry(triads, table, genders, grid)) {
      for (std::size_t i = 0; i < series.times.size(); ++i) {
        if (series.count[i] == 0) continue;
        out << triad_gender_type_name(series.type) << ',' << series.times[i]
            << ',' << format_double(series.mean[i]) << ',' << series.count[i]
            << '\n';
      }
    }
    finish(out, "genders.csv");
  }

  {
    auto counts = motif_counts(triads, table, grid, config.epsilon);
    auto out = open_output(config, "motifs.csv");
    out << "time,two_against_one,weak_link,equalist,classified\n";
    for (std::size_t i = 0; i < counts.times.size(); ++i) {
      out << counts.times[i] << ',' << counts.two_against_one[i] << ','
          << counts.weak_link[i] << ',' << counts.equalist[i] << ','
          << counts.classified[i] << '\n';
    }
    finish(out, "motifs.csv");
  }
}

}  // namespace ties
