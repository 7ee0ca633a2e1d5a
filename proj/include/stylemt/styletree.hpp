#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "stylemt/errors.hpp"

namespace stylemt {

// Ordered rooted tree with string labels, stored in postorder (ids
// contiguous from 0, root last). `lexical` marks terminal tokens from
// bracketed parses so leaf-level pruning knows what to drop.
class LabeledTree {
 public:
  struct Node {
    std::string label;
    std::vector<int> children;  // ascending postorder ids
    int parent = -1;
    bool lexical = false;
  };

  LabeledTree() = default;

  // Validates single-rootedness and the postorder numbering.
  static LabeledTree from_nodes(std::vector<Node> nodes);

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  const Node& node(int i) const { return nodes_[std::size_t(i)]; }
  int root() const { return int(nodes_.size()) - 1; }
  const std::vector<Node>& nodes() const { return nodes_; }

  friend bool operator==(const LabeledTree& a, const LabeledTree& b);

 private:
  std::vector<Node> nodes_;
};

// Recursive construction helper (parsers, tests, generators).
struct TreeSpec {
  std::string label;
  std::vector<TreeSpec> children;
  bool lexical = false;

  TreeSpec(std::string l = "", std::vector<TreeSpec> c = {},
           bool lex = false)
      : label(std::move(l)), children(std::move(c)), lexical(lex) {}
};

LabeledTree build_tree(const TreeSpec& spec);

struct EditCosts {
  double insert_cost = 1.0;
  double delete_cost = 1.0;
  double relabel_cost = 1.0;  // for differing labels; relabel(a,a) == 0

  double relabel(const std::string& a, const std::string& b) const {
    return a == b ? 0.0 : relabel_cost;
  }
  void validate() const;
};

// Penn-style bracketed tree: "(LABEL child child ...)" with bare tokens as
// terminals; "(LABEL)" is a childless nonterminal. Throws ParseError with
// the byte offset on imbalance or empty labels.
LabeledTree parse_bracketed(const std::string& text);

// Canonical single-space serialization; inverse of parse_bracketed on
// canonical-form trees.
std::string serialize_bracketed(const LabeledTree& tree);

struct ConlluConfig {
  bool label_with_upos = false;  // DEPREL by default, "DEPREL/UPOS" when set
};

// One CoNLL-U sentence block: 10 tab-separated columns per token line,
// comments and multiword/empty-node lines skipped. Node label = DEPREL,
// children ordered by surface token index, an artificial ROOT node anchors
// the head-0 token. Throws ParseError with the 0-based block line number
// for bad column counts, cycles, zero or multiple roots.
LabeledTree parse_conllu(const std::string& block,
                         const ConlluConfig& config = {});

// Canonical block whose parse reproduces the tree (surface order =
// preorder). The tree root must be the artificial ROOT with one child.
std::string serialize_conllu(const LabeledTree& tree);

// Whole files: blank-line separated blocks / one bracketed tree per line.
std::vector<LabeledTree> read_conllu_file(const std::string& path,
                                          const ConlluConfig& config = {});
std::vector<LabeledTree> read_bracketed_file(const std::string& path);

// Removes lexical terminal leaves so edit distance ignores word identity;
// preterminals become leaves. Never removes the root; idempotent.
LabeledTree prune_leaf_level(const LabeledTree& tree);

// Zhang-Shasha ordered tree edit distance (keyroots + leftmost-leaf DP
// over the postorder numbering).
double ted(const LabeledTree& t1, const LabeledTree& t2,
           const EditCosts& costs = {});

struct AvgTedResult {
  double mean = 0.0;
  double normalized_mean = 0.0;  // each distance divided by |t1| + |t2|
};

AvgTedResult avg_ted(const std::vector<std::pair<LabeledTree, LabeledTree>>& pairs,
                     const EditCosts& costs = {});

}  // namespace stylemt
