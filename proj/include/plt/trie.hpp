// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "plt/distribution.hpp"
#include "plt/model.hpp"
#include "plt/rational.hpp"

namespace plt {

/// Sparse probabilistic language trie: explicit nodes for the visited or
/// high-probability prefixes of a model, each carrying its exact prefix
/// probability. Unmaterialized prefixes fall back to the model.
///
/// Readers may share a Plt across threads; update() and record_visit()
/// need exclusive access.
class Plt {
 public:
  struct Node {
    Sequence prefix;
    Rational prefix_prob;
    std::uint64_t visit_count = 0;
    std::map<Token, std::unique_ptr<Node>> children;
    std::optional<Distribution> edges;  // set once update() has touched this node
  };

  /// Breadth-first expansion of every prefix with P(prefix) >= prune_threshold,
  /// down to max_depth tokens.
  static Plt materialize(ModelPtr model, std::size_t max_depth, const Rational& prune_threshold);

  const Node& root() const noexcept { return *root_; }
  const ModelPtr& model() const noexcept { return model_; }
  const Rational& prune_threshold() const noexcept { return threshold_; }

  const Node* find(std::span<const Token> prefix) const;
  std::size_t node_count() const;

  /// Distribution on the edges leaving `prefix`: the updated one if present, else the model's.
  Distribution edge_distribution(std::span<const Token> prefix) const;

  /// Chain-rule product of edge probabilities along x. P(empty) = 1.
  Rational prefix_probability(std::span<const Token> x) const;

  /// P_{t+1}(. | x) = (1 - alpha) P_t(. | x) + alpha * observed. `x` must be
  /// materialized. Descendant probabilities are recomputed before returning and
  /// descendants that fall below the prune threshold are dropped.
  void update(std::span<const Token> x, const Distribution& observed, const Rational& alpha);

  /// Increments visit counts along the materialized part of x's path (root included).
  void record_visit(std::span<const Token> x);

  /// `prefix<TAB>num/den<TAB>visit_count` per node, depth-first by level then
  /// by token order within a level.
  std::string dump() const;

 private:
  Plt(ModelPtr model, Rational threshold);
  void refresh(Node& node);

  ModelPtr model_;
  Rational threshold_;
  std::unique_ptr<Node> root_;
};

Sequence longest_common_prefix(std::span<const Token> s, std::span<const Token> s2);

/// -log2 P(s ^ s2) where s ^ s2 is the longest common prefix.
double prefix_information(const Plt& plt, std::span<const Token> s, std::span<const Token> s2);

/// The covered sequence sharing the longest common prefix with s. Ties go to
/// the larger prefix probability, then to the lexicographically smallest.
Sequence nearest_covered(const Plt& plt, std::span<const Sequence> covered, std::span<const Token> s);

}  // namespace plt
