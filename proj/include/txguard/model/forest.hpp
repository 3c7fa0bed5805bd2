#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

namespace txguard::model {

struct ForestConfig {
  int n_trees = 500;
  int max_depth = 0;      // 0 = grow until pure
  int mtry = 0;           // 0 = floor(sqrt(n_features))
  int min_node_size = 1;  // nodes at or below this size become leaves
  bool class_balanced = true;
  std::uint64_t seed = 42;
  int n_threads = 0;      // 0 = hardware concurrency; results do not depend on it

  nlohmann::json to_json() const;
  static ForestConfig from_json(const nlohmann::json& j);
};

// Row-major feature matrix view.
struct MatrixView {
  std::span<const double> data;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::span<const double> row(std::size_t r) const { return data.subspan(r * cols, cols); }
};

// Gini random forest producing the mean positive-class leaf fraction.
class Forest {
 public:
  struct Node {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;     // x[feature] <= threshold goes left
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;         // positive fraction of the in-bag samples (leaves)

    bool operator==(const Node&) const = default;
  };
  using Tree = std::vector<Node>;

  // labels are 0/1. Throws ValidationError on shape problems or a single class.
  static Forest train(const MatrixView& x, std::span<const int> labels, const ForestConfig& config);

  double predict(std::span<const double> row) const;
  std::vector<double> predict(const MatrixView& x) const;

  std::size_t n_features() const { return n_features_; }
  const std::vector<Tree>& trees() const { return trees_; }

  void serialize(std::ostream& out) const;
  static Forest deserialize(std::istream& in);  // throws ValidationError on corrupt input

  bool operator==(const Forest&) const = default;

 private:
  std::size_t n_features_ = 0;
  std::vector<Tree> trees_;
};

}  // namespace txguard::model
