#include "inquest/taxonomy.hpp"

#include <fstream>
#include <sstream>

namespace inquest::taxonomy {

ActionTree::ActionTree(std::vector<ActionNode> nodes) : nodes_(std::move(nodes)) {
  for (size_t i = 0; i < nodes_.size(); ++i) {
    ActionNode& n = nodes_[i];
    if (n.id != static_cast<int>(i))
      throw TaxonomyError("node ids must be contiguous from 0; got id " + std::to_string(n.id) +
                          " at position " + std::to_string(i));
    if (n.level < 1 || n.level > 3)
      throw TaxonomyError("node " + std::to_string(n.id) + ": level must be 1..3");
    n.children.clear();
  }
  for (ActionNode& n : nodes_) {
    if (n.level == 1) {
      if (n.parent.has_value())
        throw TaxonomyError("level-1 node " + std::to_string(n.id) + " must not have a parent");
      roots_.push_back(n.id);
    } else {
      if (!n.parent.has_value())
        throw TaxonomyError("node " + std::to_string(n.id) + " needs a parent");
      int p = *n.parent;
      if (p < 0 || p >= size())
        throw TaxonomyError("node " + std::to_string(n.id) + ": unknown parent " + std::to_string(p));
      if (nodes_[static_cast<size_t>(p)].level != n.level - 1)
        throw TaxonomyError("node " + std::to_string(n.id) + ": parent must be one level above");
      nodes_[static_cast<size_t>(p)].children.push_back(n.id);
    }
  }
}

const ActionNode& ActionTree::node(int id) const {
  if (id < 0 || id >= size()) throw TaxonomyError("unknown node id " + std::to_string(id));
  return nodes_[static_cast<size_t>(id)];
}

const std::vector<int>& ActionTree::children(int id) const { return node(id).children; }

int ActionTree::level_count(int level) const {
  int c = 0;
  for (const auto& n : nodes_)
    if (n.level == level) ++c;
  return c;
}

int ActionTree::find(const std::string& label) const {
  for (const auto& n : nodes_)
    if (n.label == label) return n.id;
  return -1;
}

int ActionTree::max_branching() const {
  int m = static_cast<int>(roots_.size());
  for (const auto& n : nodes_) m = std::max(m, static_cast<int>(n.children.size()));
  return m;
}

std::uint64_t ActionTree::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& n : nodes_) {
    std::ostringstream row;
    row << n.id << '|' << n.level << '|' << (n.parent ? *n.parent : -1) << '|' << n.label << '\n';
    h = fnv1a(row.str(), h);
  }
  return h;
}

namespace {

struct RawNode {
  int level;
  int parent;  // -1 for none
  const char* label;
};

// Table order; ids are the positions below.
const RawNode kBuiltin[] = {
    {1, -1, "Question"},
    {2, 0, "Clarification question"},
    {3, 1, "Clarify important aspect of the case"},
    {3, 1, "Clarify legal arguments or issues"},
    {3, 1, "Clarify definition of concept"},
    {2, 0, "Probing question"},
    {3, 5, "Probe the consistency between the attorney's arguments and established legal principles or precedents"},
    {3, 5, "Probe the assumption underlying the attorney's arguments"},
    {2, 0, "Leading question"},
    {3, 8, "Ask for the attorney's position"},
    {3, 8, "Lead the attorney toward a particular conclusion"},
    {3, 8, "Lead the attorney to certain aspects"},
    {1, -1, "Make hypothesis"},
    {2, 12, "Present hypothesis"},
    {3, 13, "Present hypothetical situations to test legal limits"},
    {3, 13, "Present hypothetical situations to test legal issues in the case"},
    {2, 12, "Compare hypothesis"},
    {3, 16, "Compare to hypothetical situations to assess legal principles"},
    {3, 16, "Highlight key differences from hypothetical situations"},
    {2, 12, "Conclude hypothesis"},
    {3, 19, "Explore different types of consequences"},
    {1, -1, "Declaration"},
    {2, 21, "Confirmation"},
    {3, 22, "Acknowledge the attorney's arguments"},
    {3, 22, "Prompt for information that would support the attorney's arguments"},
    {2, 21, "Rejection"},
    {3, 25, "Oppose the attorney's arguments"},
    {3, 25, "Provide counterexample to challenge the attorney's arguments"},
    {2, 21, "Declaration (non-questions) for more details"},
    {3, 28, "Lead attorneys by examples (non-questions) for detailed explanation of a concept"},
    {2, 21, "Declaration with Time Pressure"},
    {3, 30, "Pressure a rash response from the attorney"},
};

}  // namespace

ActionTree builtin_tree() {
  std::vector<ActionNode> nodes;
  nodes.reserve(std::size(kBuiltin));
  int id = 0;
  for (const RawNode& raw : kBuiltin) {
    ActionNode n;
    n.id = id++;
    n.level = raw.level;
    n.label = raw.label;
    if (raw.parent >= 0) n.parent = raw.parent;
    nodes.push_back(std::move(n));
  }
  return ActionTree(std::move(nodes));
}

bool validate_path(const ActionTree& tree, const ActionPath& path) {
  if (path.nodes.empty() || path.nodes.size() > 3) return false;
  for (int id : path.nodes)
    if (id < 0 || id >= tree.size()) return false;
  if (tree.node(path.nodes.front()).level != 1) return false;
  for (size_t i = 1; i < path.nodes.size(); ++i) {
    const ActionNode& n = tree.node(path.nodes[i]);
    if (!n.parent.has_value() || *n.parent != path.nodes[i - 1]) return false;
  }
  return true;
}

bool is_full_path(const ActionTree& tree, const ActionPath& path) {
  return validate_path(tree, path) && tree.is_leaf(path.nodes.back());
}

std::vector<ActionPath> enumerate_full_paths(const ActionTree& tree) {
  std::vector<ActionPath> out;
  std::vector<int> stack;
  auto dfs = [&](auto&& self, int id) -> void {
    stack.push_back(id);
    if (tree.is_leaf(id)) {
      out.push_back(ActionPath{stack});
    } else {
      for (int c : tree.children(id)) self(self, c);
    }
    stack.pop_back();
  };
  for (int r : tree.roots()) dfs(dfs, r);
  return out;
}

ActionTree load_tree(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open taxonomy file: " + path);
  std::vector<ActionNode> nodes;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string id_s, level_s, parent_s, label;
    if (!std::getline(row, id_s, '\t') || !std::getline(row, level_s, '\t') ||
        !std::getline(row, parent_s, '\t') || !std::getline(row, label))
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected id\\tlevel\\tparent\\tlabel");
    ActionNode n;
    try {
      n.id = std::stoi(id_s);
      n.level = std::stoi(level_s);
      int p = std::stoi(parent_s);
      if (p >= 0) n.parent = p;
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": non-numeric id/level/parent");
    }
    n.label = label;
    nodes.push_back(std::move(n));
  }
  try {
    return ActionTree(std::move(nodes));
  } catch (const TaxonomyError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_tree(const ActionTree& tree, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write taxonomy file: " + path);
  out << "# id\tlevel\tparent\tlabel\n";
  for (const auto& n : tree.nodes())
    out << n.id << '\t' << n.level << '\t' << (n.parent ? *n.parent : -1) << '\t' << n.label << '\n';
}

const std::vector<std::string>& appraisal_labels() {
  static const std::vector<std::string> labels = {
      "Sense ambiguity", "Find deviates",     "Find redundancy",
      "Spot weakness",   "Identify flaws",    "Identify chances",
      "Keep challenging", "Dive deeper",      "Otherwise",
  };
  return labels;
}

const std::string& Appraisal::label() const {
  if (index < 0 || index >= kAppraisalCount)
    throw DimensionError("appraisal index out of range: " + std::to_string(index));
  return appraisal_labels()[static_cast<size_t>(index)];
}

int appraisal_index(const std::string& label) {
  const auto& labels = appraisal_labels();
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  return -1;
}

Vector appraisal_onehot(int index) {
  if (index < 0 || index >= kAppraisalCount)
    throw DimensionError("appraisal index out of range: " + std::to_string(index));
  Vector v = Vector::Zero(kAppraisalCount);
  v[index] = 1.0;
  return v;
}

}  // namespace inquest::taxonomy
