#pragma once

// A strict reader for the DOT subset the renderer emits.

#include <map>
#include <string>
#include <vector>

namespace yw::testing {

struct DotNode {
  std::string id;
  std::map<std::string, std::string> attrs;
  std::string cluster;  // innermost enclosing cluster, empty at top level
};

struct DotEdge {
  std::string from;
  std::string to;
  std::map<std::string, std::string> attrs;
};

struct DotGraph {
  bool ok = false;
  std::string error;
  std::string name;
  std::map<std::string, std::string> graph_attrs;
  std::vector<DotNode> nodes;
  std::vector<DotEdge> edges;
  std::vector<std::string> clusters;

  const DotNode* node(const std::string& id) const;
};

// Checks balanced braces, quoted identifiers, unique node ids and that
// every edge endpoint was declared before the edge.
DotGraph parse_dot(const std::string& text);

}  // namespace yw::testing
