#include "ties/serialize.hpp"

#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "ties/core.hpp"
#include "ties/models.hpp"

namespace ties {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "ties-model";
constexpr int kVersion = 1;

json node_to_json(const DecisionTree& tree, std::int32_t at) {
  const TreeNode& node = tree.nodes[static_cast<std::size_t>(at)];
  if (node.feature < 0) return json{{"value", node.value}};
  return json{{"feature", node.feature},
              {"threshold", node.threshold},
              {"left", node_to_json(tree, node.left)},
              {"right", node_to_json(tree, node.right)}};
}

std::int32_t node_from_json(const json& j, DecisionTree& tree) {
  const std::int32_t id = static_cast<std::int32_t>(tree.nodes.size());
  tree.nodes.emplace_back();
  if (j.contains("value")) {
    tree.nodes[id].value = j.at("value").get<double>();
    return id;
  }
  const int feature = j.at("feature").get<int>();
  if (feature < 0 || feature >= static_cast<int>(kFeatureCount)) {
    throw DataError("model file: tree feature index out of range");
  }
  tree.nodes[id].feature = static_cast<std::int16_t>(feature);
  tree.nodes[id].threshold = j.at("threshold").get<double>();
  const std::int32_t left = node_from_json(j.at("left"), tree);
  tree.nodes[id].left = left;
  const std::int32_t right = node_from_json(j.at("right"), tree);
  tree.nodes[id].right = right;
  return id;
}

json header(const char* kind) {
  return json{{"format", kFormat}, {"version", kVersion}, {"kind", kind}};
}

json parse_checked(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(std::string("model file: invalid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != kFormat) {
    throw DataError("model file: missing or wrong format tag");
  }
  if (j.value("version", -1) != kVersion) {
    throw DataError("model file: unsupported version");
  }
  return j;
}

}  // namespace

void save_model(const ForestModel& model, std::ostream& out) {
  json j = header("forest");
  j["config"] = {{"tree_count", model.config.tree_count},
                 {"max_depth", model.config.max_depth},
                 {"min_leaf", model.config.min_leaf},
                 {"feature_candidates", model.config.feature_candidates}};
  json trees = json::array();
  for (const DecisionTree& tree : model.trees) trees.push_back(node_to_json(tree, 0));
  j["trees"] = std::move(trees);
  out << j.dump(2) << '\n';
}

void save_model(const RecurrentNet& net, std::ostream& out) {
  json j = header("recurrent");
  j["input"] = 4;
  j["hidden"] = net.hidden;
  j["params"] = net.params;
  out << j.dump(2) << '\n';
}

LoadedModel load_model(std::istream& in) {
  const json j = parse_checked(in);
  const std::string kind = j.value("kind", "");
  LoadedModel loaded;
  try {
    if (kind == "forest") {
      ForestModel model;
      const json& config = j.at("config");
      model.config.tree_count = config.at("tree_count").get<int>();
      model.config.max_depth = config.at("max_depth").get<int>();
      model.config.min_leaf = config.at("min_leaf").get<int>();
      model.config.feature_candidates = config.at("feature_candidates").get<int>();
      for (const json& t : j.at("trees")) {
        DecisionTree tree;
        node_from_json(t, tree);
        model.trees.push_back(std::move(tree));
      }
      if (model.trees.empty()) throw DataError("model file: forest has no trees");
      loaded.forest = std::move(model);
    } else if (kind == "recurrent") {
      RecurrentNet net;
      net.hidden = j.at("hidden").get<int>();
      if (net.hidden <= 0) throw DataError("model file: non-positive hidden width");
      net.params = j.at("params").get<std::vector<double>>();
      if (net.params.size() != RecurrentNet::param_count(net.hidden)) {
        throw DataError("model file: parameter count does not match hidden width");
      }
      loaded.recurrent = std::move(net);
    } else {
      throw DataError("model file: unknown kind '" + kind + "'");
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
  return loaded;
}

std::unique_ptr<PairwiseComparator> comparator_of(const LoadedModel& model) {
  if (model.forest) return std::make_unique<ForestComparator>(*model.forest);
  if (model.recurrent) return std::make_unique<RecurrentComparator>(*model.recurrent);
  throw ModelError("comparator_of: empty model");
}

}  // namespace ties
