#include "properties.hpp"

#include <set>
#include <sstream>

#include "dot_check.hpp"
#include "oracles.hpp"
#include "yw/error.hpp"
#include "yw/query.hpp"
#include "yw/render.hpp"

namespace yw::testing {
namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s = "[";
  for (const auto& x : v) s += (s.size() > 1 ? ", " : "") + x;
  return s + "]";
}

void collect(const Block& b, std::vector<const Block*>& out) {
  out.push_back(&b);
  for (const auto& c : b.children) collect(c, out);
}

std::string describe(const ChannelLink& l) {
  const auto& [scope, name, src, dst, role] = l;
  return scope + ":" + name + " " + src.block + "/" + std::string(to_string(src.port_direction)) +
         " -> " + dst.block + "/" + std::string(to_string(dst.port_direction)) + " " +
         std::string(to_string(role));
}

std::size_t descendant_workflows(const Block& b) {
  std::size_t n = 0;
  for (const auto& c : b.children) {
    if (c.is_workflow()) n += 1 + descendant_workflows(c);
  }
  return n;
}

std::size_t expected_process_edges(const WorkflowModel& m, const Block& focus) {
  std::size_t n = 0;
  for (const auto& ch : m.channels) {
    if (ch.scope != focus.qualified_name || ch.source.block == focus.qualified_name) continue;
    for (const auto& s : ch.sinks) {
      if (s.block != focus.qualified_name) ++n;
    }
  }
  return n;
}

std::size_t expected_data_nodes(const Block& focus) {
  std::set<std::string> names;
  for (const auto& p : focus.ports) names.insert(p.name);
  for (const auto& c : focus.children) {
    for (const auto& p : c.ports) names.insert(p.name);
  }
  return names.size();
}

bool is_block_class(const DotGraph& g, const std::string& id) {
  const auto* n = g.node(id);
  if (!n) return false;
  const auto it = n->attrs.find("class");
  return it != n->attrs.end() && (it->second == "program" || it->second == "workflow");
}

bool is_data_class(const DotGraph& g, const std::string& id) {
  const auto* n = g.node(id);
  if (!n) return false;
  const auto it = n->attrs.find("class");
  return it != n->attrs.end() && it->second == "data";
}

}  // namespace

Failure check_channels(const WorkflowModel& model) {
  const auto expected = brute_force_links(model.root);
  const auto actual = links_of(model.channels);
  if (expected == actual) return std::nullopt;
  std::ostringstream msg;
  for (const auto& l : expected) {
    if (!actual.count(l)) msg << "missing " << describe(l) << "\n";
  }
  for (const auto& l : actual) {
    if (!expected.count(l)) msg << "extra " << describe(l) << "\n";
  }
  return msg.str();
}

Failure check_reachability(const WorkflowModel& model) {
  const PortClosure oracle(model);
  std::vector<const Block*> blocks;
  collect(model.root, blocks);
  auto mismatch = [](const std::string& what, const std::string& name,
                     const std::vector<std::string>& got,
                     const std::vector<std::string>& want) -> Failure {
    if (got == want) return std::nullopt;
    return what + "(" + name + "): got " + join(got) + " want " + join(want);
  };
  try {
    std::set<std::string> names;
    for (const auto* b : blocks) {
      const auto& q = b->qualified_name;
      if (auto f = mismatch("nested", q, nested_blocks(model, q), oracle.nested(q))) return f;
      if (auto f = mismatch("containers", q, containing_blocks(model, q), oracle.containers(q))) {
        return f;
      }
      if (auto f = mismatch("downstream", q, downstream_blocks(model, q), oracle.downstream(q))) {
        return f;
      }
      for (const auto& p : b->ports) names.insert(p.name);
    }
    for (const auto& n : names) {
      const auto want = oracle.affected_by(n);
      if (want) {
        if (auto f = mismatch("affected-by", n, blocks_affected_by_input(model, n), *want)) {
          return f;
        }
      } else {
        try {
          blocks_affected_by_input(model, n);
          return "affected-by(" + n + ") accepted a non-input";
        } catch (const Error&) {
        }
      }
      if (auto f = mismatch("upstream-inputs", n, upstream_inputs(model, n),
                            oracle.upstream_inputs(n))) {
        return f;
      }
      if (auto f = mismatch("deriving-blocks", n, deriving_blocks(model, n), oracle.deriving(n))) {
        return f;
      }
    }
  } catch (const std::exception& e) {
    return std::string("threw: ") + e.what();
  }
  return std::nullopt;
}

Failure check_views(const WorkflowModel& model) {
  std::vector<const Block*> foci;
  for (const auto* b : [&] {
         std::vector<const Block*> all;
         collect(model.root, all);
         return all;
       }()) {
    if (b->is_workflow()) foci.push_back(b);
  }
  for (const auto* focus : foci) {
    for (const auto rankdir : {RankDir::LR, RankDir::TB}) {
      for (const bool nested : {false, true}) {
        for (const auto view : {GraphView::Process, GraphView::Data, GraphView::Combined}) {
          RenderOptions o;
          o.view = view;
          o.rankdir = rankdir;
          o.nested = nested;
          o.focus = focus->qualified_name;
          std::string text;
          try {
            text = render(model, o);
          } catch (const std::exception& e) {
            return std::string("render threw: ") + e.what();
          }
          const std::string where = "focus " + focus->qualified_name + " view " +
                                    std::to_string(static_cast<int>(view)) +
                                    (nested ? " nested" : " flat") +
                                    (rankdir == RankDir::LR ? " LR" : " TB");
          if (render(model, o) != text) return where + ": not deterministic";
          const auto g = parse_dot(text);
          if (!g.ok) return where + ": bad DOT: " + g.error + "\n" + text;
          const auto rd = g.graph_attrs.find("rankdir");
          if (rd == g.graph_attrs.end() || rd->second != (rankdir == RankDir::LR ? "LR" : "TB")) {
            return where + ": wrong rankdir";
          }
          if (nested && g.clusters.size() != descendant_workflows(*focus)) {
            return where + ": " + std::to_string(g.clusters.size()) + " clusters, want " +
                   std::to_string(descendant_workflows(*focus));
          }
          if (!nested && !g.clusters.empty()) return where + ": clusters in a flat view";
          if (view == GraphView::Process && !nested) {
            std::size_t edges = 0;
            for (const auto& e : g.edges) {
              if (is_block_class(g, e.from) && is_block_class(g, e.to)) ++edges;
            }
            const auto want = expected_process_edges(model, *focus);
            if (edges != want) {
              return where + ": " + std::to_string(edges) + " block edges, want " +
                     std::to_string(want);
            }
          }
          if (view == GraphView::Data && !nested) {
            const auto want = expected_data_nodes(*focus);
            if (g.nodes.size() != want) {
              return where + ": " + std::to_string(g.nodes.size()) + " data nodes, want " +
                     std::to_string(want);
            }
          }
          if (view == GraphView::Combined) {
            for (const auto& e : g.edges) {
              if (is_data_class(g, e.from) == is_data_class(g, e.to)) {
                return where + ": non-bipartite edge " + e.from + " -> " + e.to;
              }
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

Failure check_model_round_trip(const WorkflowModel& model) {
  const auto text = serialize_model(model);
  try {
    const auto back = parse_model(text);
    if (!(back == model)) return "model differs after round trip\n" + text;
    if (serialize_model(back) != text) return "model text differs after round trip";
  } catch (const std::exception& e) {
    return std::string("parse_model threw: ") + e.what() + "\n" + text;
  }
  return std::nullopt;
}

Failure check_annotation_round_trip(const AnnotationDocument& doc) {
  const auto text = serialize_annotations(doc);
  try {
    const auto back = parse_annotation_file(text);
    if (!(back == doc)) return "annotations differ after round trip\n" + text;
    if (serialize_annotations(back) != text) return "annotation text differs after round trip";
  } catch (const std::exception& e) {
    return std::string("parse_annotation_file threw: ") + e.what() + "\n" + text;
  }
  return std::nullopt;
}

}  // namespace yw::testing
