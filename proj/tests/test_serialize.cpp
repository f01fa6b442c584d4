#include "doctest.h"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "ties/models.hpp"
#include "ties/rng.hpp"
#include "ties/serialize.hpp"

using namespace ties;

namespace {

ForestModel trained_forest(std::uint64_t seed) {
  Rng rng(seed);
  ForestTrainData data;
  for (int i = 0; i < 120; ++i) {
    FeatureVector x{};
    for (std::size_t f = 0; f < kFeatureCount; ++f) x[f] = rng.uniform(-3.0, 3.0);
    data.x.push_back(x);
    data.y.push_back(x[kCallVolume] + x[kTextVolume] > 0.0 ? 1 : 0);
  }
  return train_forest(data, ForestConfig{15, 6, 2, 3}, seed).model;
}

RecurrentNet awkward_net(int hidden) {
  RecurrentNet net;
  net.hidden = hidden;
  net.params.resize(RecurrentNet::param_count(hidden));
  Rng rng(5151);
  for (double& p : net.params) p = rng.normal() / 3.0;  // non-terminating decimals
  net.params[0] = 1.0 / 3.0;
  net.params[1] = 1e-15;
  net.params[2] = -0.1;
  return net;
}

StackedSeries probe_series(std::uint64_t seed, std::size_t steps) {
  Rng rng(seed);
  StackedSeries s;
  s.end = 1;
  for (std::size_t t = 0; t < steps; ++t) {
    s.steps.push_back({rng.uniform(0.0, 9.0), rng.uniform(0.0, 9.0), rng.uniform(0.0, 9.0),
                       rng.uniform(0.0, 9.0)});
  }
  return s;
}

LoadedModel reload(const std::string& text) {
  std::istringstream in(text);
  return load_model(in);
}

}  // namespace

TEST_CASE("forest models survive a round trip bit-exactly") {
  const ForestModel model = trained_forest(40);
  std::ostringstream out;
  save_model(model, out);

  const LoadedModel loaded = reload(out.str());
  REQUIRE(loaded.forest.has_value());
  CHECK_FALSE(loaded.recurrent.has_value());
  CHECK(loaded.forest->config.tree_count == model.config.tree_count);
  CHECK(loaded.forest->config.max_depth == model.config.max_depth);
  CHECK(loaded.forest->config.min_leaf == model.config.min_leaf);
  CHECK(loaded.forest->config.feature_candidates == model.config.feature_candidates);
  REQUIRE(loaded.forest->trees.size() == model.trees.size());

  Rng rng(7);
  for (int probe = 0; probe < 50; ++probe) {
    FeatureVector x{};
    for (std::size_t f = 0; f < kFeatureCount; ++f) x[f] = rng.uniform(-4.0, 4.0);
    CHECK(loaded.forest->predict(x) == model.predict(x));
  }

  std::ostringstream again;
  save_model(*loaded.forest, again);
  CHECK(again.str() == out.str());
}

TEST_CASE("recurrent nets survive a round trip bit-exactly") {
  const RecurrentNet net = awkward_net(5);
  std::ostringstream out;
  save_model(net, out);

  const LoadedModel loaded = reload(out.str());
  REQUIRE(loaded.recurrent.has_value());
  CHECK_FALSE(loaded.forest.has_value());
  CHECK(loaded.recurrent->hidden == net.hidden);
  CHECK(loaded.recurrent->params == net.params);  // shortest-round-trip doubles

  const StackedSeries series = probe_series(3, 6);
  CHECK(loaded.recurrent->forward(series) == net.forward(series));

  std::ostringstream again;
  save_model(*loaded.recurrent, again);
  CHECK(again.str() == out.str());
}

TEST_CASE("loaded comparators behave like freshly wrapped models") {
  EventStore::Builder b;
  Timestamp ts = 1000;
  for (int i = 0; i < 9; ++i) b.add({ts += 50'000, "e", "a", ChannelKind::Text, 3});
  for (int i = 0; i < 2; ++i) b.add({ts += 50'000, "e", "b", ChannelKind::Call, 60});
  const EventStore store = std::move(b).build();
  const StoreView v = store.view();
  const Timestamp t = ts + 1000;

  const ForestModel forest = trained_forest(9);
  std::ostringstream fo;
  save_model(forest, fo);
  const auto forest_cmp = comparator_of(reload(fo.str()));
  CHECK(forest_cmp->compare(v, "e", "a", "b", t) ==
        ForestComparator(forest).compare(v, "e", "a", "b", t));

  const RecurrentNet net = awkward_net(4);
  std::ostringstream ro;
  save_model(net, ro);
  const auto net_cmp = comparator_of(reload(ro.str()));
  CHECK(net_cmp->compare(v, "e", "a", "b", t) ==
        RecurrentComparator(net).compare(v, "e", "a", "b", t));

  CHECK_THROWS_AS(comparator_of(LoadedModel{}), ModelError);
}

TEST_CASE("malformed model files are data errors") {
  CHECK_THROWS_AS(reload("this is not json"), DataError);
  CHECK_THROWS_AS(reload("[1, 2, 3]"), DataError);
  CHECK_THROWS_AS(reload(R"({"format": "something-else", "version": 1})"), DataError);
  CHECK_THROWS_AS(reload(R"({"version": 1, "kind": "forest"})"), DataError);
  CHECK_THROWS_AS(reload(R"({"format": "ties-model", "version": 2, "kind": "forest"})"),
                  DataError);
  CHECK_THROWS_AS(reload(R"({"format": "ties-model", "version": 1, "kind": "svm"})"), DataError);
  CHECK_THROWS_AS(reload(R"({"format": "ties-model", "version": 1})"), DataError);
}

TEST_CASE("structurally broken forests are data errors") {
  const char* no_trees = R"({
    "format": "ties-model", "version": 1, "kind": "forest",
    "config": {"tree_count": 1, "max_depth": 1, "min_leaf": 1, "feature_candidates": 1},
    "trees": []
  })";
  CHECK_THROWS_AS(reload(no_trees), DataError);

  const char* bad_feature = R"({
    "format": "ties-model", "version": 1, "kind": "forest",
    "config": {"tree_count": 1, "max_depth": 1, "min_leaf": 1, "feature_candidates": 1},
    "trees": [{"feature": 99, "threshold": 0.0,
               "left": {"value": 0.0}, "right": {"value": 1.0}}]
  })";
  CHECK_THROWS_AS(reload(bad_feature), DataError);

  const char* missing_config = R"({
    "format": "ties-model", "version": 1, "kind": "forest",
    "trees": [{"value": 0.5}]
  })";
  CHECK_THROWS_AS(reload(missing_config), DataError);
}

TEST_CASE("structurally broken recurrent files are data errors") {
  const char* zero_hidden = R"({
    "format": "ties-model", "version": 1, "kind": "recurrent",
    "input": 4, "hidden": 0, "params": []
  })";
  CHECK_THROWS_AS(reload(zero_hidden), DataError);

  const char* short_params = R"({
    "format": "ties-model", "version": 1, "kind": "recurrent",
    "input": 4, "hidden": 2, "params": [0.1, 0.2, 0.3]
  })";
  CHECK_THROWS_AS(reload(short_params), DataError);

  const char* missing_params = R"({
    "format": "ties-model", "version": 1, "kind": "recurrent",
    "input": 4, "hidden": 2
  })";
  CHECK_THROWS_AS(reload(missing_params), DataError);
}
