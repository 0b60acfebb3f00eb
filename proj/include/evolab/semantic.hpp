#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "evolab/mlp.hpp"
#include "evolab/rng.hpp"

namespace evolab {

// Items x prepositions -> attributes truth table plus the two-level
// category hierarchy (superordinate -> subordinate -> item) used by the
// representational analyses.
struct SemanticDataset {
  std::vector<std::string> items;
  std::vector<std::string> prepositions;
  std::vector<std::string> attributes;
  // Binary targets, row-major [item][preposition][attribute].
  std::vector<double> targets;
  std::vector<std::string> super_of;  // per item
  std::vector<std::string> sub_of;    // per item

  std::size_t num_items() const { return items.size(); }
  std::size_t num_prepositions() const { return prepositions.size(); }
  std::size_t num_attributes() const { return attributes.size(); }
  std::size_t num_cells() const { return targets.size(); }
  // Network input width: one-hot item concatenated with one-hot preposition.
  std::size_t input_size() const { return items.size() + prepositions.size(); }

  double target(std::size_t item, std::size_t prep, std::size_t attr) const;
  std::vector<double> input_for(std::size_t item, std::size_t prep) const;
  // Index of a named item; throws std::invalid_argument if absent.
  std::size_t item_index(const std::string& name) const;

  // Checks every structural invariant (binary targets, sizes, hierarchy
  // coverage, each item active somewhere); throws std::invalid_argument.
  void validate() const;

  bool operator==(const SemanticDataset& other) const = default;
};

// The canonical eight-item living-things dataset: plants {trees {pine,
// oak}, flowers {rose, daisy}} and animals {birds {robin, canary}, fish
// {salmon, sunfish}}, prepositions {ISA, is, can, has}, 36 attributes.
SemanticDataset default_dataset();

// CSV persistence, one row per (item, preposition, attribute) cell:
// header `item,preposition,attribute,target,super,sub`.
void save_dataset(const std::filesystem::path& path, const SemanticDataset& ds);
SemanticDataset load_dataset(const std::filesystem::path& path);

// SVD of the attribute-by-item matrix. Rows are (preposition, attribute)
// pairs flattened preposition-major, columns are items; each row is
// centered across items before decomposition so the leading modes carry
// category contrasts rather than overall attribute frequency. vt row m
// holds the per-item loadings of mode m.
struct SvdModes {
  std::size_t rows = 0;         // prepositions * attributes
  std::size_t cols = 0;         // items
  std::vector<double> matrix;   // centered input, row-major rows x cols
  std::vector<double> s;        // singular values, non-increasing
  std::vector<double> u;        // row-major rows x cols, orthonormal columns
  std::vector<double> vt;       // row-major cols x cols, orthonormal rows
};
// One-sided Jacobi; sign convention: the largest-magnitude entry of each
// vt row is positive (u flipped in tandem).
SvdModes svd_modes(const SemanticDataset& ds);

// input -> hidden -> attributes, sigmoid everywhere, weights uninitialized
// (call init_uniform). Throws if hidden < 1.
Mlp make_semantic_net(const SemanticDataset& ds, int hidden = 64);

// Squared error summed over every (item, preposition, attribute) cell.
double semantic_loss(const Mlp& net, const SemanticDataset& ds);

// One epoch of stochastic gradient descent: all (item, preposition) pairs
// in a freshly shuffled order, one update per pair on that pair's summed
// squared error. Fused implementation; requires the make_semantic_net
// shape (one sigmoid hidden layer, sigmoid output).
void semantic_epoch(Mlp& net, const SemanticDataset& ds, double lr, Rng& rng);

struct SemanticSgdConfig {
  int hidden = 64;
  double init_scale = 0.1;
  double lr = 0.1;
  int epochs = 2000;
};

struct SemanticTrainResult {
  Mlp net;
  // epochs + 1 entries; loss_history[0] is the initialization loss.
  std::vector<double> loss_history;
};

SemanticTrainResult train_sgd_semantic(const SemanticSgdConfig& config,
                                       const SemanticDataset& ds,
                                       std::uint64_t seed);

// Hidden-layer activity for one item, averaged over all prepositions.
std::vector<double> hidden_representation(const Mlp& net, std::size_t item,
                                          const SemanticDataset& ds);

}  // namespace evolab
