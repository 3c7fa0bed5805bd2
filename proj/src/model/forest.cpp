#include "txguard/model/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <thread>

#include "txguard/kernels/kernels.hpp"
#include "txguard/util/error.hpp"
#include "txguard/util/hash.hpp"
#include "txguard/util/rng.hpp"

namespace txguard::model {

nlohmann::json ForestConfig::to_json() const {
  return {{"n_trees", n_trees},     {"max_depth", max_depth}, {"mtry", mtry},
          {"min_node_size", min_node_size}, {"class_balanced", class_balanced}, {"seed", seed}};
}

ForestConfig ForestConfig::from_json(const nlohmann::json& j) {
  ForestConfig c;
  c.n_trees = j.value("n_trees", c.n_trees);
  c.max_depth = j.value("max_depth", c.max_depth);
  c.mtry = j.value("mtry", c.mtry);
  c.min_node_size = j.value("min_node_size", c.min_node_size);
  c.class_balanced = j.value("class_balanced", c.class_balanced);
  c.seed = j.value("seed", c.seed);
  return c;
}

namespace {

struct Sample {
  std::uint32_t row;
  int label;
};

class TreeBuilder {
 public:
  TreeBuilder(const MatrixView& x, const ForestConfig& config, std::size_t mtry, util::Rng& rng)
      : x_(x), config_(config), mtry_(mtry), rng_(rng), kernels_(kernels::active()) {
    features_.resize(x.cols);
    for (std::size_t i = 0; i < x.cols; ++i) features_[i] = i;
  }

  Forest::Tree build(std::vector<Sample> samples) {
    samples_ = std::move(samples);
    tree_.clear();
    struct Pending {
      std::int32_t node;
      std::size_t begin, end;
      int depth;
    };
    std::vector<Pending> stack;
    tree_.emplace_back();
    stack.push_back({0, 0, samples_.size(), 0});
    while (!stack.empty()) {
      Pending p = stack.back();
      stack.pop_back();
      std::size_t mid = 0;
      if (!split(p.node, p.begin, p.end, p.depth, mid)) continue;
      const auto left = static_cast<std::int32_t>(tree_.size());
      tree_.emplace_back();
      tree_.emplace_back();
      tree_[static_cast<std::size_t>(p.node)].left = left;
      tree_[static_cast<std::size_t>(p.node)].right = left + 1;
      stack.push_back({left + 1, mid, p.end, p.depth + 1});
      stack.push_back({left, p.begin, mid, p.depth + 1});
    }
    return std::move(tree_);
  }

 private:
  // Returns false and makes `node` a leaf when no split is taken.
  bool split(std::int32_t node, std::size_t begin, std::size_t end, int depth, std::size_t& mid) {
    double pos = 0, neg = 0;
    for (std::size_t i = begin; i < end; ++i) (samples_[i].label ? pos : neg) += 1.0;
    Forest::Node& n = tree_[static_cast<std::size_t>(node)];
    n.value = pos / (pos + neg);
    const std::size_t size = end - begin;
    if (pos == 0 || neg == 0 || size <= static_cast<std::size_t>(config_.min_node_size) ||
        (config_.max_depth > 0 && depth >= config_.max_depth))
      return false;

    // Partial Fisher-Yates: the first mtry_ entries become this node's candidates.
    for (std::size_t i = 0; i < mtry_; ++i) {
      auto j = static_cast<std::size_t>(rng_.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(features_.size()) - 1));
      std::swap(features_[i], features_[j]);
    }

    double best_score = -1.0;
    std::int32_t best_feature = -1;
    double best_threshold = 0.0;
    for (std::size_t f = 0; f < mtry_; ++f) {
      const std::size_t feature = features_[f];
      values_.clear();
      for (std::size_t i = begin; i < end; ++i)
        values_.push_back({x_.data[samples_[i].row * x_.cols + feature], samples_[i].label});
      std::sort(values_.begin(), values_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

      left_pos_.clear();
      left_neg_.clear();
      cut_.clear();
      double lp = 0, ln = 0;
      for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
        (values_[i].second ? lp : ln) += 1.0;
        if (values_[i].first < values_[i + 1].first) {
          left_pos_.push_back(lp);
          left_neg_.push_back(ln);
          cut_.push_back(i);
        }
      }
      if (cut_.empty()) continue;
      scores_.resize(cut_.size());
      kernels_.gini_split_scores(left_pos_.data(), left_neg_.data(), cut_.size(), pos, neg, scores_.data());
      for (std::size_t c = 0; c < cut_.size(); ++c) {
        if (scores_[c] > best_score) {
          best_score = scores_[c];
          best_feature = static_cast<std::int32_t>(feature);
          const double a = values_[cut_[c]].first, b = values_[cut_[c] + 1].first;
          double t = a + (b - a) / 2.0;
          best_threshold = (t >= b || t < a) ? a : t;
        }
      }
    }
    if (best_feature < 0) return false;

    n.feature = best_feature;
    n.threshold = best_threshold;
    auto first = samples_.begin() + static_cast<std::ptrdiff_t>(begin);
    auto last = samples_.begin() + static_cast<std::ptrdiff_t>(end);
    auto pivot = std::stable_partition(first, last, [&](const Sample& s) {
      return x_.data[s.row * x_.cols + static_cast<std::size_t>(best_feature)] <= best_threshold;
    });
    mid = static_cast<std::size_t>(pivot - samples_.begin());
    return true;
  }

  const MatrixView& x_;
  const ForestConfig& config_;
  std::size_t mtry_;
  util::Rng& rng_;
  const kernels::KernelTable& kernels_;
  std::vector<std::size_t> features_;
  std::vector<Sample> samples_;
  Forest::Tree tree_;
  std::vector<std::pair<double, int>> values_;
  std::vector<double> left_pos_, left_neg_, scores_;
  std::vector<std::size_t> cut_;
};

std::vector<Sample> draw_bootstrap(util::Rng& rng, std::span<const std::uint32_t> positives,
                                   std::span<const std::uint32_t> negatives, std::size_t n, bool balanced) {
  std::vector<Sample> out;
  out.reserve(n);
  if (balanced) {
    const std::size_t n_pos = n / 2;
    for (std::size_t i = 0; i < n_pos; ++i)
      out.push_back({positives[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(positives.size()) - 1))], 1});
    for (std::size_t i = n_pos; i < n; ++i)
      out.push_back({negatives[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(negatives.size()) - 1))], 0});
  } else {
    const std::size_t total = positives.size() + negatives.size();
    for (std::size_t i = 0; i < n; ++i) {
      auto k = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(total) - 1));
      out.push_back(k < positives.size() ? Sample{positives[k], 1} : Sample{negatives[k - positives.size()], 0});
    }
  }
  return out;
}

}  // namespace

Forest Forest::train(const MatrixView& x, std::span<const int> labels, const ForestConfig& config) {
  if (x.cols == 0) throw ValidationError("forest needs at least one feature");
  if (x.data.size() != x.rows * x.cols) throw ValidationError("feature matrix shape mismatch");
  if (labels.size() != x.rows) throw ValidationError("label count does not match feature rows");
  if (config.n_trees < 1) throw ValidationError("n_trees must be positive");
  std::vector<std::uint32_t> positives, negatives;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw ValidationError("labels must be 0 or 1");
    (labels[i] ? positives : negatives).push_back(static_cast<std::uint32_t>(i));
  }
  if (positives.empty() || negatives.empty()) throw ValidationError("degenerate training set: only one class present");

  const std::size_t mtry = config.mtry > 0 ? std::min<std::size_t>(static_cast<std::size_t>(config.mtry), x.cols)
                                           : std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(x.cols)))));

  Forest forest;
  forest.n_features_ = x.cols;
  forest.trees_.resize(static_cast<std::size_t>(config.n_trees));

  // Each tree owns a seed derived from its index, so thread scheduling
  // cannot change the result.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < forest.trees_.size(); t = next++) {
      util::Rng rng(util::mix64(config.seed ^ util::mix64(t + 1)));
      auto sample = draw_bootstrap(rng, positives, negatives, x.rows, config.class_balanced);
      TreeBuilder builder(x, config, mtry, rng);
      forest.trees_[t] = builder.build(std::move(sample));
    }
  };
  unsigned threads = config.n_threads > 0 ? static_cast<unsigned>(config.n_threads) : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(forest.trees_.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return forest;
}

double Forest::predict(std::span<const double> row) const {
  if (row.size() != n_features_)
    throw ValidationError("row has " + std::to_string(row.size()) + " features, model expects " + std::to_string(n_features_));
  double sum = 0.0;
  for (const Tree& tree : trees_) {
    std::size_t i = 0;
    while (tree[i].feature >= 0)
      i = static_cast<std::size_t>(row[static_cast<std::size_t>(tree[i].feature)] <= tree[i].threshold ? tree[i].left : tree[i].right);
    sum += tree[i].value;
  }
  return trees_.empty() ? 0.0 : sum / static_cast<double>(trees_.size());
}

std::vector<double> Forest::predict(const MatrixView& x) const {
  std::vector<double> out;
  out.reserve(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) out.push_back(predict(x.row(r)));
  return out;
}

namespace {

constexpr char kMagic[4] = {'T', 'X', 'G', 'F'};
constexpr std::uint32_t kFormatVersion = 1;

// Fixed little-endian encoding independent of host byte order.
void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}
void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}
void put_f64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}
std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw ValidationError("truncated model blob");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}
std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw ValidationError("truncated model blob");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}
double get_f64(std::istream& in) {
  std::uint64_t bits = get_u64(in);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void Forest::serialize(std::ostream& out) const {
  out.write(kMagic, 4);
  put_u32(out, kFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(n_features_));
  put_u32(out, static_cast<std::uint32_t>(trees_.size()));
  for (const Tree& tree : trees_) {
    put_u32(out, static_cast<std::uint32_t>(tree.size()));
    for (const Node& n : tree) {
      put_u32(out, static_cast<std::uint32_t>(n.feature));
      put_f64(out, n.threshold);
      put_u32(out, static_cast<std::uint32_t>(n.left));
      put_u32(out, static_cast<std::uint32_t>(n.right));
      put_f64(out, n.value);
    }
  }
}

Forest Forest::deserialize(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw ValidationError("not a forest model blob");
  if (get_u32(in) != kFormatVersion) throw ValidationError("unsupported forest format version");
  Forest f;
  f.n_features_ = get_u32(in);
  const std::uint32_t n_trees = get_u32(in);
  f.trees_.resize(n_trees);
  for (Tree& tree : f.trees_) {
    const std::uint32_t n_nodes = get_u32(in);
    if (n_nodes == 0) throw ValidationError("empty tree in model blob");
    tree.resize(n_nodes);
    for (std::uint32_t idx = 0; idx < n_nodes; ++idx) {
      Node& n = tree[idx];
      n.feature = static_cast<std::int32_t>(get_u32(in));
      n.threshold = get_f64(in);
      n.left = static_cast<std::int32_t>(get_u32(in));
      n.right = static_cast<std::int32_t>(get_u32(in));
      n.value = get_f64(in);
      // Children always follow their parent, which also rules out cycles.
      if (n.feature >= 0 && (static_cast<std::size_t>(n.feature) >= f.n_features_ ||
                             n.left <= static_cast<std::int32_t>(idx) || n.right <= static_cast<std::int32_t>(idx) ||
                             static_cast<std::uint32_t>(n.left) >= n_nodes || static_cast<std::uint32_t>(n.right) >= n_nodes))
        throw ValidationError("corrupt tree node in model blob");
    }
  }
  return f;
}

}  // namespace txguard::model
