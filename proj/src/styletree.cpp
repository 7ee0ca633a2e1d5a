#include "stylemt/styletree.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace stylemt {

namespace {

void append_postorder(const TreeSpec& spec,
                      std::vector<LabeledTree::Node>& out) {
  std::vector<int> child_ids;
  for (const TreeSpec& child : spec.children) {
    append_postorder(child, out);
    child_ids.push_back(int(out.size()) - 1);
  }
  LabeledTree::Node node;
  node.label = spec.label;
  node.children = std::move(child_ids);
  node.lexical = spec.lexical;
  out.push_back(std::move(node));
}

}  // namespace

LabeledTree build_tree(const TreeSpec& spec) {
  std::vector<LabeledTree::Node> nodes;
  append_postorder(spec, nodes);
  return LabeledTree::from_nodes(std::move(nodes));
}

LabeledTree LabeledTree::from_nodes(std::vector<Node> nodes) {
  if (nodes.empty()) throw ParseError(0, "tree has no nodes");

  // Re-derive parents from children lists, then verify the numbering is a
  // genuine postorder by walking from the root.
  for (Node& n : nodes) n.parent = -1;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (int c : nodes[i].children) {
      if (c < 0 || std::size_t(c) >= nodes.size() || c >= int(i)) {
        throw ParseError(i, "child id out of postorder range");
      }
      if (nodes[std::size_t(c)].parent != -1) {
        throw ParseError(std::size_t(c), "node has two parents");
      }
      nodes[std::size_t(c)].parent = int(i);
    }
  }
  int root = int(nodes.size()) - 1;
  if (nodes[std::size_t(root)].parent != -1) {
    throw ParseError(std::size_t(root), "last postorder node is not the root");
  }
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (nodes[i].parent == -1) {
      throw ParseError(i, "multiple roots");
    }
  }

  int expect = 0;
  auto dfs = [&](auto&& self, int id) -> void {
    for (int c : nodes[std::size_t(id)].children) self(self, c);
    if (id != expect) {
      throw ParseError(std::size_t(id), "node ids are not postorder");
    }
    ++expect;
  };
  dfs(dfs, root);

  LabeledTree tree;
  tree.nodes_ = std::move(nodes);
  return tree;
}

bool operator==(const LabeledTree& a, const LabeledTree& b) {
  if (a.nodes_.size() != b.nodes_.size()) return false;
  for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
    const auto& x = a.nodes_[i];
    const auto& y = b.nodes_[i];
    if (x.label != y.label || x.children != y.children ||
        x.parent != y.parent || x.lexical != y.lexical) {
      return false;
    }
  }
  return true;
}

void EditCosts::validate() const {
  if (insert_cost < 0 || delete_cost < 0 || relabel_cost < 0) {
    throw ConfigError("edit costs must be non-negative");
  }
}

// --- bracketed parse -------------------------------------------------------

namespace {

struct BracketedParser {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(uchar(text[pos]))) ++pos;
  }
  static unsigned char uchar(char c) { return static_cast<unsigned char>(c); }

  std::string read_atom() {
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace(uchar(text[pos])) &&
           text[pos] != '(' && text[pos] != ')') {
      ++pos;
    }
    return text.substr(start, pos - start);
  }

  TreeSpec parse_node() {
    skip_ws();
    if (pos >= text.size()) throw ParseError(pos, "unexpected end of input");
    if (text[pos] != '(') {
      std::string token = read_atom();
      if (token.empty()) {
        throw ParseError(pos, "expected token or '('");
      }
      return TreeSpec(token, {}, true);
    }
    std::size_t open_pos = pos;
    ++pos;  // consume '('
    skip_ws();
    std::string label = read_atom();
    if (label.empty()) throw ParseError(open_pos, "empty node label");

    TreeSpec node(label);
    node.lexical = false;
    while (true) {
      skip_ws();
      if (pos >= text.size()) {
        throw ParseError(open_pos, "unbalanced '(': missing ')'");
      }
      if (text[pos] == ')') {
        ++pos;
        return node;
      }
      node.children.push_back(parse_node());
    }
  }
};

}  // namespace

LabeledTree parse_bracketed(const std::string& text) {
  BracketedParser parser{text};
  TreeSpec root = parser.parse_node();
  parser.skip_ws();
  if (parser.pos != text.size()) {
    throw ParseError(parser.pos, "trailing content after tree");
  }
  return build_tree(root);
}

namespace {

void serialize_node(const LabeledTree& tree, int id, std::string& out) {
  const auto& node = tree.node(id);
  if (node.lexical && node.children.empty()) {
    out += node.label;
    return;
  }
  out += '(';
  out += node.label;
  for (int c : node.children) {
    out += ' ';
    serialize_node(tree, c, out);
  }
  out += ')';
}

}  // namespace

std::string serialize_bracketed(const LabeledTree& tree) {
  std::string out;
  serialize_node(tree, tree.root(), out);
  return out;
}

// --- CoNLL-U ---------------------------------------------------------------

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

bool is_plain_index(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

LabeledTree parse_conllu(const std::string& block, const ConlluConfig& config) {
  struct Token {
    int index;  // surface index, 1-based
    int head;
    std::string label;
  };
  std::vector<Token> tokens;

  std::istringstream lines(block);
  std::string line;
  std::size_t line_no = 0;
  for (; std::getline(lines, line); ++line_no) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols = split_tabs(line);
    if (cols.size() != 10) {
      throw ParseError(line_no, "expected 10 tab-separated columns, got " +
                                    std::to_string(cols.size()));
    }
    // Multiword ranges ("3-4") and empty nodes ("5.1") carry no tree edges.
    if (!is_plain_index(cols[0])) continue;

    Token tok;
    tok.index = std::stoi(cols[0]);
    if (!is_plain_index(cols[6])) {
      throw ParseError(line_no, "HEAD column is not an integer");
    }
    tok.head = std::stoi(cols[6]);
    tok.label = cols[7];
    if (config.label_with_upos) tok.label += "/" + cols[3];
    tokens.push_back(std::move(tok));
  }

  if (tokens.empty()) throw ParseError(0, "empty block: no root");

  int n = int(tokens.size());
  std::vector<int> index_to_slot(std::size_t(n + 1), -1);
  for (int i = 0; i < n; ++i) {
    int idx = tokens[std::size_t(i)].index;
    if (idx < 1 || idx > n || index_to_slot[std::size_t(idx)] != -1) {
      throw ParseError(std::size_t(i), "token indices are not 1..n");
    }
    index_to_slot[std::size_t(idx)] = i;
  }

  int root_slot = -1;
  std::vector<std::vector<int>> children(std::size_t(n));  // by slot
  for (int i = 0; i < n; ++i) {
    int head = tokens[std::size_t(i)].head;
    if (head == 0) {
      if (root_slot != -1) throw ParseError(std::size_t(i), "multiple roots");
      root_slot = i;
    } else {
      if (head < 1 || head > n) {
        throw ParseError(std::size_t(i), "HEAD out of range");
      }
      children[std::size_t(index_to_slot[std::size_t(head)])].push_back(i);
    }
  }
  if (root_slot == -1) throw ParseError(0, "no root (HEAD 0) token");

  // Cycle check: every token must reach the root.
  for (int i = 0; i < n; ++i) {
    int steps = 0;
    int cur = i;
    while (tokens[std::size_t(cur)].head != 0) {
      cur = index_to_slot[std::size_t(tokens[std::size_t(cur)].head)];
      if (++steps > n) throw ParseError(std::size_t(i), "cyclic HEAD chain");
    }
  }

  // Children are already in ascending surface order because slots follow
  // file order and indices are 1..n.
  auto to_spec = [&](auto&& self, int slot) -> TreeSpec {
    TreeSpec spec(tokens[std::size_t(slot)].label);
    for (int c : children[std::size_t(slot)]) {
      spec.children.push_back(self(self, c));
    }
    return spec;
  };
  TreeSpec root("ROOT");
  root.children.push_back(to_spec(to_spec, root_slot));
  return build_tree(root);
}

std::string serialize_conllu(const LabeledTree& tree) {
  const auto& root = tree.node(tree.root());
  if (root.label != "ROOT" || root.children.size() != 1) {
    throw ParseError(std::size_t(tree.root()),
                     "tree is not an artificial-ROOT dependency tree");
  }

  // Assign surface indices in preorder so each node's children come out in
  // ascending index order.
  std::vector<int> surface(tree.size(), 0);
  int next = 0;
  auto number = [&](auto&& self, int id) -> void {
    surface[std::size_t(id)] = ++next;
    for (int c : tree.node(id).children) self(self, c);
  };
  number(number, root.children[0]);

  struct Line {
    int index;
    int head;
    const std::string* label;
  };
  std::vector<Line> lines;
  auto emit = [&](auto&& self, int id, int head_index) -> void {
    const auto& node = tree.node(id);
    lines.push_back({surface[std::size_t(id)], head_index, &node.label});
    for (int c : node.children) self(self, c, surface[std::size_t(id)]);
  };
  emit(emit, root.children[0], 0);
  std::sort(lines.begin(), lines.end(),
            [](const Line& a, const Line& b) { return a.index < b.index; });

  std::ostringstream out;
  for (const Line& l : lines) {
    out << l.index << "\tw" << l.index << "\t_\t_\t_\t_\t" << l.head << '\t'
        << *l.label << "\t_\t_\n";
  }
  return out.str();
}

std::vector<LabeledTree> read_conllu_file(const std::string& path,
                                          const ConlluConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open file");

  std::vector<LabeledTree> trees;
  std::string block;
  std::string line;
  auto flush = [&] {
    if (block.find_first_not_of(" \t\r\n") != std::string::npos) {
      trees.push_back(parse_conllu(block, config));
    }
    block.clear();
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
    } else {
      block += line;
      block += '\n';
    }
  }
  flush();
  return trees;
}

std::vector<LabeledTree> read_bracketed_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open file");

  std::vector<LabeledTree> trees;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    trees.push_back(parse_bracketed(line));
  }
  return trees;
}

// --- pruning ----------------------------------------------------------------

namespace {

TreeSpec prune_spec(const LabeledTree& tree, int id) {
  const auto& node = tree.node(id);
  TreeSpec spec(node.label, {}, node.lexical);
  for (int c : tree.node(id).children) {
    const auto& child = tree.node(c);
    if (child.lexical && child.children.empty()) continue;
    spec.children.push_back(prune_spec(tree, c));
  }
  return spec;
}

}  // namespace

LabeledTree prune_leaf_level(const LabeledTree& tree) {
  TreeSpec spec = prune_spec(tree, tree.root());
  return build_tree(spec);
}

// --- tree edit distance ------------------------------------------------------

namespace {

// Leftmost-leaf index per node, and the LR keyroots (root plus every node
// with a left sibling), both over the postorder numbering.
std::vector<int> leftmost_leaves(const LabeledTree& t) {
  std::vector<int> l(t.size());
  for (int i = 0; i < int(t.size()); ++i) {
    const auto& node = t.node(i);
    l[std::size_t(i)] =
        node.children.empty() ? i : l[std::size_t(node.children.front())];
  }
  return l;
}

std::vector<int> keyroots(const LabeledTree& t, const std::vector<int>& l) {
  std::vector<int> roots;
  for (int i = 0; i < int(t.size()); ++i) {
    int parent = t.node(i).parent;
    if (parent == -1 || l[std::size_t(i)] != l[std::size_t(parent)]) {
      roots.push_back(i);
    }
  }
  return roots;  // ascending, root last
}

}  // namespace

double ted(const LabeledTree& t1, const LabeledTree& t2,
           const EditCosts& costs) {
  costs.validate();
  const int n1 = int(t1.size());
  const int n2 = int(t2.size());
  std::vector<int> l1 = leftmost_leaves(t1);
  std::vector<int> l2 = leftmost_leaves(t2);

  std::vector<std::vector<double>> td(std::size_t(n1),
                                      std::vector<double>(std::size_t(n2), 0));
  std::vector<std::vector<double>> fd(
      std::size_t(n1 + 1), std::vector<double>(std::size_t(n2 + 1), 0));

  for (int x : keyroots(t1, l1)) {
    for (int y : keyroots(t2, l2)) {
      const int lx = l1[std::size_t(x)];
      const int ly = l2[std::size_t(y)];
      const int m = x - lx + 1;
      const int n = y - ly + 1;

      fd[0][0] = 0.0;
      for (int i = 1; i <= m; ++i) {
        fd[std::size_t(i)][0] = fd[std::size_t(i - 1)][0] + costs.delete_cost;
      }
      for (int j = 1; j <= n; ++j) {
        fd[0][std::size_t(j)] = fd[0][std::size_t(j - 1)] + costs.insert_cost;
      }

      for (int i = 1; i <= m; ++i) {
        const int node1 = lx + i - 1;
        for (int j = 1; j <= n; ++j) {
          const int node2 = ly + j - 1;
          const double del =
              fd[std::size_t(i - 1)][std::size_t(j)] + costs.delete_cost;
          const double ins =
              fd[std::size_t(i)][std::size_t(j - 1)] + costs.insert_cost;
          if (l1[std::size_t(node1)] == lx && l2[std::size_t(node2)] == ly) {
            const double rel =
                fd[std::size_t(i - 1)][std::size_t(j - 1)] +
                costs.relabel(t1.node(node1).label, t2.node(node2).label);
            double best = std::min({del, ins, rel});
            fd[std::size_t(i)][std::size_t(j)] = best;
            td[std::size_t(node1)][std::size_t(node2)] = best;
          } else {
            const int pi = l1[std::size_t(node1)] - lx;
            const int pj = l2[std::size_t(node2)] - ly;
            const double sub = fd[std::size_t(pi)][std::size_t(pj)] +
                               td[std::size_t(node1)][std::size_t(node2)];
            fd[std::size_t(i)][std::size_t(j)] = std::min({del, ins, sub});
          }
        }
      }
    }
  }
  return td[std::size_t(n1 - 1)][std::size_t(n2 - 1)];
}

AvgTedResult avg_ted(
    const std::vector<std::pair<LabeledTree, LabeledTree>>& pairs,
    const EditCosts& costs) {
  AvgTedResult result;
  if (pairs.empty()) return result;
  for (const auto& [a, b] : pairs) {
    double d = ted(a, b, costs);
    result.mean += d;
    result.normalized_mean += d / double(a.size() + b.size());
  }
  result.mean /= double(pairs.size());
  result.normalized_mean /= double(pairs.size());
  return result;
}

}  // namespace stylemt
