#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "evolab/mlp.hpp"

namespace evolab {

// Plain-text network snapshot. `kind` is "mlp" for a bare network or
// "gaussian_policy" for a policy, in which case the final parameter is
// log_sigma and the preceding ones are the body network's flat parameters.
struct Checkpoint {
  std::string kind;
  std::vector<int> layer_sizes;
  std::vector<Activation> activations;
  std::vector<double> params;
};

// Values are written with 17 significant digits so a save/load round trip
// reproduces every double bit-for-bit.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::filesystem::path& path);

Checkpoint checkpoint_from_mlp(const Mlp& net);
Mlp mlp_from_checkpoint(const Checkpoint& ck);

}  // namespace evolab
