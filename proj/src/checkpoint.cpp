#include "evolab/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace evolab {

namespace {

constexpr const char* kMagic = "evolab-checkpoint";
constexpr int kVersion = 1;

std::string format_param(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
  throw std::runtime_error("checkpoint " + path.string() + ": " + what);
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck) {
  if (ck.kind != "mlp" && ck.kind != "gaussian_policy")
    throw std::invalid_argument("save_checkpoint: unknown kind '" + ck.kind + "'");
  std::ofstream out(path);
  if (!out) fail(path, "cannot open for writing");
  out << kMagic << ' ' << kVersion << '\n';
  out << "kind " << ck.kind << '\n';
  out << "layer_sizes";
  for (int s : ck.layer_sizes) out << ' ' << s;
  out << '\n';
  out << "activations";
  for (Activation a : ck.activations) out << ' ' << activation_name(a);
  out << '\n';
  out << "param_count " << ck.params.size() << '\n';
  for (double p : ck.params) out << format_param(p) << '\n';
  if (!out) fail(path, "write failed");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open for reading");

  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kMagic)
    fail(path, "not a checkpoint file");
  if (version != kVersion)
    fail(path, "unsupported version " + std::to_string(version));

  Checkpoint ck;
  std::string key, line;
  if (!(in >> key >> ck.kind) || key != "kind") fail(path, "missing kind");
  if (ck.kind != "mlp" && ck.kind != "gaussian_policy")
    fail(path, "unknown kind '" + ck.kind + "'");

  std::getline(in, line);
  if (!std::getline(in, line) || line.rfind("layer_sizes", 0) != 0)
    fail(path, "missing layer_sizes");
  {
    std::istringstream ls(line.substr(std::string("layer_sizes").size()));
    int s;
    while (ls >> s) ck.layer_sizes.push_back(s);
  }
  if (ck.layer_sizes.size() < 2) fail(path, "layer_sizes needs >= 2 entries");

  if (!std::getline(in, line) || line.rfind("activations", 0) != 0)
    fail(path, "missing activations");
  {
    std::istringstream as(line.substr(std::string("activations").size()));
    std::string name;
    while (as >> name) ck.activations.push_back(activation_from_name(name));
  }
  if (ck.activations.size() != ck.layer_sizes.size() - 1)
    fail(path, "activation count does not match layer_sizes");

  std::size_t count = 0;
  if (!(in >> key >> count) || key != "param_count") fail(path, "missing param_count");

  std::size_t expected = ck.kind == "gaussian_policy" ? 1 : 0;
  for (std::size_t l = 0; l + 1 < ck.layer_sizes.size(); ++l) {
    if (ck.layer_sizes[l] <= 0 || ck.layer_sizes[l + 1] <= 0)
      fail(path, "layer sizes must be positive");
    expected += static_cast<std::size_t>(ck.layer_sizes[l]) * ck.layer_sizes[l + 1] +
                ck.layer_sizes[l + 1];
  }
  if (count != expected)
    fail(path, "param_count " + std::to_string(count) + " does not match layers (expected " +
                   std::to_string(expected) + ")");

  ck.params.reserve(count);
  double value = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    if (!(in >> value)) fail(path, "truncated at param " + std::to_string(i));
    ck.params.push_back(value);
  }
  return ck;
}

Checkpoint checkpoint_from_mlp(const Mlp& net) {
  Checkpoint ck;
  ck.kind = "mlp";
  ck.layer_sizes = net.layer_sizes();
  ck.activations = net.activations();
  ck.params = net.to_flat();
  return ck;
}

Mlp mlp_from_checkpoint(const Checkpoint& ck) {
  if (ck.kind != "mlp")
    throw std::invalid_argument("mlp_from_checkpoint: checkpoint kind is '" + ck.kind + "'");
  Mlp net(ck.layer_sizes, ck.activations);
  net.set_from_flat(ck.params);
  return net;
}

}  // namespace evolab
