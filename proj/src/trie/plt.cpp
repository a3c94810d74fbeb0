// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include "plt/trie.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "plt/error.hpp"

namespace plt {

Plt::Plt(ModelPtr model, Rational threshold)
    : model_(std::move(model)), threshold_(std::move(threshold)), root_(std::make_unique<Node>()) {
  root_->prefix_prob = 1;
}

Plt Plt::materialize(ModelPtr model, std::size_t max_depth, const Rational& prune_threshold) {
  if (!model) throw InvalidArgument("materialize needs a model");
  if (sgn(prune_threshold) < 0 || prune_threshold > 1) {
    throw InvalidArgument("prune threshold must lie in [0, 1]");
  }
  Plt plt(std::move(model), prune_threshold);
  std::deque<Node*> frontier{plt.root_.get()};
  while (!frontier.empty()) {
    Node* node = frontier.front();
    frontier.pop_front();
    if (node->prefix.size() >= max_depth) continue;
    Distribution d = plt.model_->conditional(node->prefix);
    for (const auto& e : d.entries()) {
      if (!plt.model_->vocabulary().is_user(e.token)) continue;
      Rational p = node->prefix_prob * Rational(e.weight, d.denominator());
      p.canonicalize();
      if (p < prune_threshold) continue;
      auto child = std::make_unique<Node>();
      child->prefix = node->prefix;
      child->prefix.push_back(e.token);
      child->prefix_prob = std::move(p);
      frontier.push_back(child.get());
      node->children.emplace(e.token, std::move(child));
    }
  }
  return plt;
}

const Plt::Node* Plt::find(std::span<const Token> prefix) const {
  const Node* node = root_.get();
  for (Token t : prefix) {
    auto it = node->children.find(t);
    if (it == node->children.end()) return nullptr;
    node = it->second.get();
  }
  return node;
}

std::size_t Plt::node_count() const {
  std::size_t count = 0;
  std::deque<const Node*> todo{root_.get()};
  while (!todo.empty()) {
    const Node* n = todo.front();
    todo.pop_front();
    ++count;
    for (const auto& [t, c] : n->children) todo.push_back(c.get());
  }
  return count;
}

Distribution Plt::edge_distribution(std::span<const Token> prefix) const {
  if (const Node* node = find(prefix); node && node->edges) return *node->edges;
  return model_->conditional(prefix);
}

Rational Plt::prefix_probability(std::span<const Token> x) const {
  // Use the deepest materialized node, then continue with edge distributions.
  const Node* node = root_.get();
  std::size_t depth = 0;
  while (depth < x.size()) {
    auto it = node->children.find(x[depth]);
    if (it == node->children.end()) break;
    node = it->second.get();
    ++depth;
  }
  Rational p = node->prefix_prob;
  for (std::size_t i = depth; i < x.size() && sgn(p) > 0; ++i) {
    Distribution d = edge_distribution(x.first(i));
    const BigInt* w = d.weight(x[i]);
    if (!w) return Rational(0);
    p *= Rational(*w, d.denominator());
  }
  p.canonicalize();
  return p;
}

void Plt::refresh(Node& node) {
  Distribution d = node.edges ? *node.edges : model_->conditional(node.prefix);
  for (auto it = node.children.begin(); it != node.children.end();) {
    Node& child = *it->second;
    child.prefix_prob = node.prefix_prob * d.probability(it->first);
    child.prefix_prob.canonicalize();
    if (sgn(child.prefix_prob) == 0 || child.prefix_prob < threshold_) {
      it = node.children.erase(it);
      continue;
    }
    refresh(child);
    ++it;
  }
}

void Plt::update(std::span<const Token> x, const Distribution& observed, const Rational& alpha) {
  if (sgn(alpha) < 0 || alpha > 1) throw InvalidArgument("update weight must lie in [0, 1]");
  Node* node = root_.get();
  for (Token t : x) {
    auto it = node->children.find(t);
    if (it == node->children.end()) throw InvalidArgument("update target prefix is not materialized");
    node = it->second.get();
  }
  Distribution current = node->edges ? *node->edges : model_->conditional(x);
  node->edges = current.mix(observed, alpha);
  refresh(*node);
}

void Plt::record_visit(std::span<const Token> x) {
  Node* node = root_.get();
  ++node->visit_count;
  for (Token t : x) {
    auto it = node->children.find(t);
    if (it == node->children.end()) return;
    node = it->second.get();
    ++node->visit_count;
  }
}

std::string Plt::dump() const {
  std::string out;
  const Vocabulary& vocab = model_->vocabulary();
  std::deque<const Node*> todo{root_.get()};
  while (!todo.empty()) {
    const Node* n = todo.front();
    todo.pop_front();
    out += vocab.format_sequence(n->prefix);
    out += '\t';
    out += to_string(n->prefix_prob);
    out += '\t';
    out += std::to_string(n->visit_count);
    out += '\n';
    for (const auto& [t, c] : n->children) todo.push_back(c.get());
  }
  return out;
}

Sequence longest_common_prefix(std::span<const Token> s, std::span<const Token> s2) {
  auto [a, b] = std::mismatch(s.begin(), s.end(), s2.begin(), s2.end());
  return Sequence(s.begin(), a);
}

double prefix_information(const Plt& plt, std::span<const Token> s, std::span<const Token> s2) {
  Rational p = plt.prefix_probability(longest_common_prefix(s, s2));
  if (sgn(p) == 0) return std::numeric_limits<double>::infinity();
  return p == 1 ? 0.0 : neg_log2(p);
}

Sequence nearest_covered(const Plt& plt, std::span<const Sequence> covered, std::span<const Token> s) {
  if (covered.empty()) throw InvalidArgument("nearest_covered needs a non-empty covered set");
  const Sequence* best = nullptr;
  std::size_t best_len = 0;
  Rational best_prob;
  for (const auto& candidate : covered) {
    std::size_t len = static_cast<std::size_t>(
        std::mismatch(s.begin(), s.end(), candidate.begin(), candidate.end()).first - s.begin());
    if (best && len < best_len) continue;
    Rational prob = plt.prefix_probability(candidate);
    bool better = !best || len > best_len || prob > best_prob || (prob == best_prob && candidate < *best);
    if (better) {
      best = &candidate;
      best_len = len;
      best_prob = std::move(prob);
    }
  }
  return *best;
}

}  // namespace plt
