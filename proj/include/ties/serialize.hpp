#pragma once
// Versioned JSON model files. Trees serialize as nested node objects,
// the recurrent net as a flat parameter array with a shape header.
// Doubles are written in shortest round-trip form, so load(save(m))
// reproduces inference outputs bit-exactly.

#include <iosfwd>
#include <memory>
#include <optional>

#include "ties/forest.hpp"
#include "ties/pairwise.hpp"
#include "ties/recurrent.hpp"

namespace ties {

void save_model(const ForestModel& model, std::ostream& out);
void save_model(const RecurrentNet& net, std::ostream& out);

struct LoadedModel {
  std::optional<ForestModel> forest;
  std::optional<RecurrentNet> recurrent;
};

// Throws DataError on malformed JSON, wrong format tag, or unsupported
// version.
LoadedModel load_model(std::istream& in);

// Adapts whichever model is present to the pairwise-comparator
// interface.
std::unique_ptr<PairwiseComparator> comparator_of(const LoadedModel& model);

}  // namespace ties
