#include "evolab/semantic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

#include "evolab/csvio.hpp"

namespace evolab {

double SemanticDataset::target(std::size_t item, std::size_t prep,
                               std::size_t attr) const {
  return targets[(item * prepositions.size() + prep) * attributes.size() + attr];
}

std::vector<double> SemanticDataset::input_for(std::size_t item,
                                               std::size_t prep) const {
  if (item >= items.size() || prep >= prepositions.size()) {
    throw std::invalid_argument("input_for: item/preposition index out of range");
  }
  std::vector<double> x(input_size(), 0.0);
  x[item] = 1.0;
  x[items.size() + prep] = 1.0;
  return x;
}

std::size_t SemanticDataset::item_index(const std::string& name) const {
  auto it = std::find(items.begin(), items.end(), name);
  if (it == items.end()) {
    throw std::invalid_argument("unknown item: " + name);
  }
  return static_cast<std::size_t>(it - items.begin());
}

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_unique(const std::vector<std::string>& names, const char* what) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    require(!n.empty(), std::string(what) + " name must be non-empty");
    require(seen.insert(n).second, std::string("duplicate ") + what + " name: " + n);
  }
}

}  // namespace

void SemanticDataset::validate() const {
  require(!items.empty(), "dataset has no items");
  require(!prepositions.empty(), "dataset has no prepositions");
  require(!attributes.empty(), "dataset has no attributes");
  check_unique(items, "item");
  check_unique(prepositions, "preposition");
  check_unique(attributes, "attribute");
  require(targets.size() == items.size() * prepositions.size() * attributes.size(),
          "target tensor size does not match items x prepositions x attributes");
  require(super_of.size() == items.size() && sub_of.size() == items.size(),
          "hierarchy must cover all items");
  for (std::size_t i = 0; i < items.size(); ++i) {
    require(!super_of[i].empty() && !sub_of[i].empty(),
            "item " + items[i] + " has an empty hierarchy label");
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    double active = 0.0;
    for (std::size_t p = 0; p < prepositions.size(); ++p) {
      for (std::size_t a = 0; a < attributes.size(); ++a) {
        double t = target(i, p, a);
        require(t == 0.0 || t == 1.0,
                "non-binary target for item " + items[i]);
        active += t;
      }
    }
    require(active > 0.0, "item " + items[i] + " has no active attributes");
  }
}

SemanticDataset default_dataset() {
  SemanticDataset ds;
  ds.items = {"pine", "oak", "rose", "daisy", "robin", "canary", "salmon", "sunfish"};
  ds.prepositions = {"ISA", "is", "can", "has"};
  ds.attributes = {
      "living_thing", "plant", "animal", "tree", "flower", "bird", "fish",
      "pine", "oak", "rose", "daisy", "robin", "canary", "salmon", "sunfish",
      "pretty", "big", "living", "green", "red", "yellow",
      "grow", "move", "swim", "fly", "sing",
      "skin", "roots", "leaves", "bark", "branches", "petals", "wings",
      "feathers", "scales", "gills"};
  ds.super_of = {"plant", "plant", "plant", "plant",
                 "animal", "animal", "animal", "animal"};
  ds.sub_of = {"tree", "tree", "flower", "flower",
               "bird", "bird", "fish", "fish"};
  ds.targets.assign(ds.items.size() * ds.prepositions.size() * ds.attributes.size(),
                    0.0);

  auto attr_index = [&](const std::string& name) {
    auto it = std::find(ds.attributes.begin(), ds.attributes.end(), name);
    if (it == ds.attributes.end()) {
      throw std::logic_error("default_dataset: unknown attribute " + name);
    }
    return static_cast<std::size_t>(it - ds.attributes.begin());
  };
  auto set_row = [&](const std::string& item, const std::string& prep,
                     const std::vector<std::string>& actives) {
    std::size_t i = ds.item_index(item);
    auto pit = std::find(ds.prepositions.begin(), ds.prepositions.end(), prep);
    std::size_t p = static_cast<std::size_t>(pit - ds.prepositions.begin());
    for (const auto& a : actives) {
      ds.targets[(i * ds.prepositions.size() + p) * ds.attributes.size() +
                 attr_index(a)] = 1.0;
    }
  };

  // ISA: living_thing, superordinate, subordinate, the item itself.
  for (std::size_t i = 0; i < ds.items.size(); ++i) {
    set_row(ds.items[i], "ISA",
            {"living_thing", ds.super_of[i], ds.sub_of[i], ds.items[i]});
  }
  set_row("pine", "is", {"big", "living", "green"});
  set_row("oak", "is", {"big", "living"});
  set_row("rose", "is", {"pretty", "living", "red"});
  set_row("daisy", "is", {"pretty", "living", "yellow"});
  set_row("robin", "is", {"living", "red"});
  set_row("canary", "is", {"living", "yellow"});
  set_row("salmon", "is", {"living", "red"});
  set_row("sunfish", "is", {"living", "yellow"});
  for (const char* plant : {"pine", "oak", "rose", "daisy"}) {
    set_row(plant, "can", {"grow"});
  }
  set_row("robin", "can", {"grow", "move", "fly"});
  set_row("canary", "can", {"grow", "move", "fly", "sing"});
  for (const char* f : {"salmon", "sunfish"}) {
    set_row(f, "can", {"grow", "move", "swim"});
  }
  set_row("pine", "has", {"bark", "branches", "roots"});
  set_row("oak", "has", {"bark", "branches", "leaves", "roots"});
  set_row("rose", "has", {"leaves", "roots", "petals"});
  set_row("daisy", "has", {"leaves", "roots", "petals"});
  for (const char* bird : {"robin", "canary"}) {
    set_row(bird, "has", {"skin", "wings", "feathers"});
  }
  for (const char* f : {"salmon", "sunfish"}) {
    set_row(f, "has", {"skin", "scales", "gills"});
  }

  ds.validate();
  return ds;
}

void save_dataset(const std::filesystem::path& path, const SemanticDataset& ds) {
  CsvTable table;
  table.header = {"item", "preposition", "attribute", "target", "super", "sub"};
  table.rows.reserve(ds.num_cells());
  for (std::size_t i = 0; i < ds.num_items(); ++i) {
    for (std::size_t p = 0; p < ds.num_prepositions(); ++p) {
      for (std::size_t a = 0; a < ds.num_attributes(); ++a) {
        table.rows.push_back({ds.items[i], ds.prepositions[p], ds.attributes[a],
                              ds.target(i, p, a) == 1.0 ? "1" : "0",
                              ds.super_of[i], ds.sub_of[i]});
      }
    }
  }
  write_csv(path, table);
}

namespace {

// Index of `name` in `names`, appending it first if new.
std::size_t intern(std::vector<std::string>& names, const std::string& name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
  names.push_back(name);
  return names.size() - 1;
}

}  // namespace

SemanticDataset load_dataset(const std::filesystem::path& path) {
  CsvTable table = read_csv(path);
  const std::size_t c_item = table.column("item");
  const std::size_t c_prep = table.column("preposition");
  const std::size_t c_attr = table.column("attribute");
  const std::size_t c_target = table.column("target");
  const std::size_t c_super = table.column("super");
  const std::size_t c_sub = table.column("sub");

  SemanticDataset ds;
  struct Cell {
    std::size_t item, prep, attr;
    double value;
  };
  std::vector<Cell> cells;
  cells.reserve(table.rows.size());
  auto fail = [&](std::size_t row, const std::string& msg) {
    throw std::invalid_argument(path.string() + " row " + std::to_string(row + 1) +
                                ": " + msg);
  };
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    std::size_t i = intern(ds.items, row[c_item]);
    std::size_t p = intern(ds.prepositions, row[c_prep]);
    std::size_t a = intern(ds.attributes, row[c_attr]);
    const std::string& raw = row[c_target];
    char* end = nullptr;
    double value = std::strtod(raw.c_str(), &end);
    if (raw.empty() || end != raw.c_str() + raw.size()) {
      fail(r, "target is not a number: '" + raw + "'");
    }
    if (value != 0.0 && value != 1.0) {
      fail(r, "target must be 0 or 1, got " + raw);
    }
    if (ds.super_of.size() < ds.items.size()) {
      ds.super_of.push_back(row[c_super]);
      ds.sub_of.push_back(row[c_sub]);
    } else {
      if (ds.super_of[i] != row[c_super]) {
        fail(r, "item " + row[c_item] + " super changed from " + ds.super_of[i] +
                    " to " + row[c_super]);
      }
      if (ds.sub_of[i] != row[c_sub]) {
        fail(r, "item " + row[c_item] + " sub changed from " + ds.sub_of[i] +
                    " to " + row[c_sub]);
      }
    }
    cells.push_back({i, p, a, value});
  }

  const std::size_t np = ds.prepositions.size();
  const std::size_t na = ds.attributes.size();
  ds.targets.assign(ds.items.size() * np * na, -1.0);
  for (std::size_t r = 0; r < cells.size(); ++r) {
    const Cell& c = cells[r];
    double& slot = ds.targets[(c.item * np + c.prep) * na + c.attr];
    if (slot != -1.0) {
      fail(r, "duplicate cell (" + ds.items[c.item] + ", " +
                  ds.prepositions[c.prep] + ", " + ds.attributes[c.attr] + ")");
    }
    slot = c.value;
  }
  for (std::size_t i = 0; i < ds.items.size(); ++i) {
    for (std::size_t p = 0; p < np; ++p) {
      for (std::size_t a = 0; a < na; ++a) {
        if (ds.targets[(i * np + p) * na + a] == -1.0) {
          throw std::invalid_argument(
              path.string() + ": missing cell (" + ds.items[i] + ", " +
              ds.prepositions[p] + ", " + ds.attributes[a] + ")");
        }
      }
    }
  }
  ds.validate();
  return ds;
}

namespace {

double column_dot(const std::vector<double>& a, std::size_t rows, std::size_t n,
                  std::size_t p, std::size_t q) {
  double s = 0.0;
  for (std::size_t r = 0; r < rows; ++r) s += a[r * n + p] * a[r * n + q];
  return s;
}

}  // namespace

SvdModes svd_modes(const SemanticDataset& ds) {
  SvdModes out;
  const std::size_t np = ds.num_prepositions();
  const std::size_t na = ds.num_attributes();
  const std::size_t rows = np * na;
  const std::size_t n = ds.num_items();
  out.rows = rows;
  out.cols = n;
  out.matrix.resize(rows * n);
  for (std::size_t p = 0; p < np; ++p) {
    for (std::size_t a = 0; a < na; ++a) {
      const std::size_t r = p * na + a;
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += ds.target(i, p, a);
      mean /= static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) {
        out.matrix[r * n + i] = ds.target(i, p, a) - mean;
      }
    }
  }

  // One-sided Jacobi: rotate column pairs of A until all are mutually
  // orthogonal; the same rotations accumulate into V.
  std::vector<double> a = out.matrix;
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  const double tol = 1e-14;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = column_dot(a, rows, n, p, p);
        double beta = column_dot(a, rows, n, q, q);
        double gamma = column_dot(a, rows, n, p, q);
        if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta)) {
          continue;
        }
        rotated = true;
        double zeta = (beta - alpha) / (2.0 * gamma);
        double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        for (std::size_t r = 0; r < rows; ++r) {
          double ap = a[r * n + p], aq = a[r * n + q];
          a[r * n + p] = c * ap - s * aq;
          a[r * n + q] = s * ap + c * aq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          double vp = v[r * n + p], vq = v[r * n + q];
          v[r * n + p] = c * vp - s * vq;
          v[r * n + q] = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    sigma[j] = std::sqrt(column_dot(a, rows, n, j, j));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  out.s.resize(n);
  out.u.assign(rows * n, 0.0);
  out.vt.assign(n * n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t j = order[m];
    out.s[m] = sigma[j];
    for (std::size_t i = 0; i < n; ++i) out.vt[m * n + i] = v[i * n + j];
    if (sigma[j] > 1e-12) {
      for (std::size_t r = 0; r < rows; ++r) {
        out.u[r * n + m] = a[r * n + j] / sigma[j];
      }
    } else {
      // Null-space mode: complete U with any unit vector orthogonal to the
      // columns already placed (Gram-Schmidt over basis vectors).
      for (std::size_t k = 0; k < rows; ++k) {
        std::vector<double> cand(rows, 0.0);
        cand[k] = 1.0;
        for (std::size_t prev = 0; prev < m; ++prev) {
          double proj = 0.0;
          for (std::size_t r = 0; r < rows; ++r) {
            proj += cand[r] * out.u[r * n + prev];
          }
          for (std::size_t r = 0; r < rows; ++r) {
            cand[r] -= proj * out.u[r * n + prev];
          }
        }
        double norm = 0.0;
        for (double x : cand) norm += x * x;
        norm = std::sqrt(norm);
        if (norm > 1e-6) {
          for (std::size_t r = 0; r < rows; ++r) {
            out.u[r * n + m] = cand[r] / norm;
          }
          break;
        }
      }
    }
  }

  // Sign convention: largest-magnitude item loading of each mode positive.
  for (std::size_t m = 0; m < n; ++m) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs(out.vt[m * n + i]) > std::abs(out.vt[m * n + arg])) arg = i;
    }
    if (out.vt[m * n + arg] < 0.0) {
      for (std::size_t i = 0; i < n; ++i) out.vt[m * n + i] = -out.vt[m * n + i];
      for (std::size_t r = 0; r < rows; ++r) out.u[r * n + m] = -out.u[r * n + m];
    }
  }
  return out;
}

Mlp make_semantic_net(const SemanticDataset& ds, int hidden) {
  if (hidden < 1) throw std::invalid_argument("semantic net needs hidden >= 1");
  return Mlp({static_cast<int>(ds.input_size()), hidden,
              static_cast<int>(ds.num_attributes())},
             {Activation::Sigmoid, Activation::Sigmoid});
}

namespace {

bool canonical_semantic_shape(const Mlp& net, const SemanticDataset& ds) {
  return net.num_layers() == 2 &&
         net.layer_sizes()[0] == static_cast<int>(ds.input_size()) &&
         net.layer_sizes()[2] == static_cast<int>(ds.num_attributes()) &&
         net.activations()[0] == Activation::Sigmoid &&
         net.activations()[1] == Activation::Sigmoid;
}

void check_semantic_shape(const Mlp& net, const SemanticDataset& ds) {
  if (net.layer_sizes().front() != static_cast<int>(ds.input_size()) ||
      net.layer_sizes().back() != static_cast<int>(ds.num_attributes())) {
    throw std::invalid_argument(
        "semantic net shape mismatch: expected input " +
        std::to_string(ds.input_size()) + " and output " +
        std::to_string(ds.num_attributes()));
  }
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Forward pass for the one-hot (item, preposition) input on the canonical
// one-hidden-layer net; writes hidden and output activities in place.
void fused_forward(const Mlp& net, const SemanticDataset& ds, std::size_t item,
                   std::size_t prep, std::vector<double>& hid,
                   std::vector<double>& outp) {
  const std::size_t in = ds.input_size();
  const std::size_t nh = hid.size();
  const std::size_t na = outp.size();
  const std::vector<double>& w1 = net.weights(0);
  const std::vector<double>& b1 = net.biases(0);
  const std::vector<double>& w2 = net.weights(1);
  const std::vector<double>& b2 = net.biases(1);
  const std::size_t prep_col = ds.num_items() + prep;
  for (std::size_t h = 0; h < nh; ++h) {
    hid[h] = sigmoid(b1[h] + w1[h * in + item] + w1[h * in + prep_col]);
  }
  for (std::size_t o = 0; o < na; ++o) {
    double z = b2[o];
    const double* row = &w2[o * nh];
    for (std::size_t h = 0; h < nh; ++h) z += row[h] * hid[h];
    outp[o] = sigmoid(z);
  }
}

}  // namespace

double semantic_loss(const Mlp& net, const SemanticDataset& ds) {
  check_semantic_shape(net, ds);
  const std::size_t np = ds.num_prepositions();
  const std::size_t na = ds.num_attributes();
  double loss = 0.0;
  if (canonical_semantic_shape(net, ds)) {
    std::vector<double> hid(static_cast<std::size_t>(net.layer_sizes()[1]));
    std::vector<double> outp(na);
    for (std::size_t i = 0; i < ds.num_items(); ++i) {
      for (std::size_t p = 0; p < np; ++p) {
        fused_forward(net, ds, i, p, hid, outp);
        const double* y = &ds.targets[(i * np + p) * na];
        for (std::size_t o = 0; o < na; ++o) {
          double d = outp[o] - y[o];
          loss += d * d;
        }
      }
    }
    return loss;
  }
  for (std::size_t i = 0; i < ds.num_items(); ++i) {
    for (std::size_t p = 0; p < np; ++p) {
      std::vector<double> outp = net.forward(ds.input_for(i, p));
      const double* y = &ds.targets[(i * np + p) * na];
      for (std::size_t o = 0; o < na; ++o) {
        double d = outp[o] - y[o];
        loss += d * d;
      }
    }
  }
  return loss;
}

void semantic_epoch(Mlp& net, const SemanticDataset& ds, double lr, Rng& rng) {
  check_semantic_shape(net, ds);
  const std::size_t np = ds.num_prepositions();
  const std::size_t na = ds.num_attributes();
  std::vector<std::size_t> order(ds.num_items() * np);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  if (canonical_semantic_shape(net, ds)) {
    const std::size_t in = ds.input_size();
    const std::size_t nh = static_cast<std::size_t>(net.layer_sizes()[1]);
    std::vector<double> hid(nh), outp(na), back(nh);
    std::vector<double>& w1 = net.weights(0);
    std::vector<double>& b1 = net.biases(0);
    std::vector<double>& w2 = net.weights(1);
    std::vector<double>& b2 = net.biases(1);
    for (std::size_t pair : order) {
      const std::size_t item = pair / np;
      const std::size_t prep = pair % np;
      fused_forward(net, ds, item, prep, hid, outp);
      const double* y = &ds.targets[(item * np + prep) * na];
      std::fill(back.begin(), back.end(), 0.0);
      for (std::size_t o = 0; o < na; ++o) {
        // d(sum (o-y)^2)/dz through the output sigmoid.
        double d2 = 2.0 * (outp[o] - y[o]) * outp[o] * (1.0 - outp[o]);
        double* row = &w2[o * nh];
        for (std::size_t h = 0; h < nh; ++h) {
          back[h] += row[h] * d2;
          row[h] -= lr * d2 * hid[h];
        }
        b2[o] -= lr * d2;
      }
      const std::size_t prep_col = ds.num_items() + prep;
      for (std::size_t h = 0; h < nh; ++h) {
        double d1 = back[h] * hid[h] * (1.0 - hid[h]);
        w1[h * in + item] -= lr * d1;
        w1[h * in + prep_col] -= lr * d1;
        b1[h] -= lr * d1;
      }
    }
    return;
  }

  for (std::size_t pair : order) {
    const std::size_t item = pair / np;
    const std::size_t prep = pair % np;
    ActivationRecord rec = net.forward_record(ds.input_for(item, prep));
    const double* y = &ds.targets[(item * np + prep) * na];
    std::vector<double> dloss(na);
    for (std::size_t o = 0; o < na; ++o) {
      dloss[o] = 2.0 * (rec.post.back()[o] - y[o]);
    }
    net.sgd_step(net.backward(rec, dloss), lr);
  }
}

SemanticTrainResult train_sgd_semantic(const SemanticSgdConfig& config,
                                       const SemanticDataset& ds,
                                       std::uint64_t seed) {
  if (config.epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (config.lr <= 0.0) throw std::invalid_argument("lr must be positive");
  Mlp net = make_semantic_net(ds, config.hidden);
  Rng init_rng(derive_seed(seed, "sgd_init"));
  net.init_uniform(config.init_scale, init_rng);
  SemanticTrainResult out{std::move(net), {}};
  out.loss_history.reserve(static_cast<std::size_t>(config.epochs) + 1);
  out.loss_history.push_back(semantic_loss(out.net, ds));
  Rng train_rng(derive_seed(seed, "sgd_train"));
  for (int e = 0; e < config.epochs; ++e) {
    semantic_epoch(out.net, ds, config.lr, train_rng);
    out.loss_history.push_back(semantic_loss(out.net, ds));
  }
  return out;
}

std::vector<double> hidden_representation(const Mlp& net, std::size_t item,
                                          const SemanticDataset& ds) {
  if (item >= ds.num_items()) {
    throw std::invalid_argument("unknown item index " + std::to_string(item));
  }
  check_semantic_shape(net, ds);
  const std::size_t np = ds.num_prepositions();
  std::vector<double> rep;
  for (std::size_t p = 0; p < np; ++p) {
    ActivationRecord rec = net.forward_record(ds.input_for(item, p));
    const std::vector<double>& h = rec.post.front();
    if (rep.empty()) rep.assign(h.size(), 0.0);
    for (std::size_t k = 0; k < h.size(); ++k) rep[k] += h[k];
  }
  for (double& x : rep) x /= static_cast<double>(np);
  return rep;
}

}  // namespace evolab
