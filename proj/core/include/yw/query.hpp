#pragma once

// Workflow-structure and prospective-provenance queries over a model, plus
// file-lineage inference from a run manifest.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "yw/model.hpp"

namespace yw {

// Bipartite program/data graph over all scopes. Each channel is one data
// node; programs (leaf blocks) connect to the channels they read and write.
// Workflow boundaries are bridged by data->data pass-through edges.
class DependencyGraph {
 public:
  enum class NodeKind { Program, Data };

  struct Node {
    NodeKind kind;
    std::string block;         // program qualified name (Program nodes)
    const Channel* channel;    // Data nodes
  };

  explicit DependencyGraph(const WorkflowModel& model);

  const ModelIndex& index() const { return index_; }
  std::size_t size() const { return nodes_.size(); }
  const Node& node(std::size_t id) const { return nodes_[id]; }
  std::span<const std::size_t> successors(std::size_t id) const {
    return succ_[id];
  }
  std::span<const std::size_t> predecessors(std::size_t id) const {
    return pred_[id];
  }

  std::optional<std::size_t> program_node(std::string_view qualified_name) const;
  std::size_t data_node(const Channel& channel) const;

  // Root-scope channels written by the root's own In port `name`.
  std::vector<std::size_t> root_inputs(std::string_view name) const;
  // Root-scope channels read by the root's own Out port `name`.
  std::vector<std::size_t> root_outputs(std::string_view name) const;
  // Every channel carrying `name`, in any scope.
  std::vector<std::size_t> data_nodes_named(std::string_view name) const;

  std::vector<bool> reach_forward(std::span<const std::size_t> starts) const;
  std::vector<bool> reach_backward(std::span<const std::size_t> starts) const;

 private:
  void add_edge(std::size_t from, std::size_t to);

  ModelIndex index_;
  std::vector<Node> nodes_;
  std::vector<std::vector<std::size_t>> succ_;
  std::vector<std::vector<std::size_t>> pred_;
  std::map<std::string, std::size_t, std::less<>> program_ids_;
  std::map<const Channel*, std::size_t> data_ids_;
};

struct BlockSummary {
  std::string qualified_name;
  std::optional<std::string> description;

  bool operator==(const BlockSummary&) const = default;
};

// All blocks in pre-order.
std::vector<BlockSummary> list_blocks(const WorkflowModel& model);

// `block` may be a qualified name or a unique simple name. Results are
// qualified names in document (pre-order) order unless noted.
std::vector<std::string> nested_blocks(const WorkflowModel& model,
                                       std::string_view block);
// Ancestors, innermost first.
std::vector<std::string> containing_blocks(const WorkflowModel& model,
                                           std::string_view block);

std::vector<std::string> downstream_blocks(const WorkflowModel& model,
                                           std::string_view block);
std::vector<std::string> blocks_affected_by_input(const WorkflowModel& model,
                                                  std::string_view input_name);
// Root input names in declaration order.
std::vector<std::string> upstream_inputs(const WorkflowModel& model,
                                         std::string_view output_name);
std::vector<std::string> deriving_blocks(const WorkflowModel& model,
                                         std::string_view data_name);

enum class InputOrigin { ScriptInput, ProducedBy, Unbound };
std::string_view to_string(InputOrigin o);

struct InputSource {
  std::string port;
  PortRole role = PortRole::Data;
  InputOrigin origin = InputOrigin::Unbound;
  std::string from;  // script input name or producing block; empty if unbound
  int line = 0;

  bool operator==(const InputSource&) const = default;
};

// Where each In port of `block` gets its value, tracing through workflow
// boundaries. Ports in declaration order.
std::vector<InputSource> step_input_sources(const WorkflowModel& model,
                                            std::string_view block);

struct DerivationStep {
  std::string block;
  std::vector<std::string> consumed;
  std::vector<std::string> produced;

  bool operator==(const DerivationStep&) const = default;
};

struct Derivation {
  std::string target;
  std::vector<DerivationStep> steps;  // topological; last produces target
};

// Throws CyclicDerivation when the target depends on a feedback loop.
Derivation derivation(const WorkflowModel& model, std::string_view output_name);

// The model restricted to `blocks` and their ancestors, with channels
// re-inferred, for rendering a derivation.
WorkflowModel induced_submodel(const WorkflowModel& model,
                               std::span<const std::string> blocks);

struct UnboundDependency {
  std::string block;  // block owning the unbound port
  std::string port;
  PortDirection direction = PortDirection::In;
  int line = 0;
  std::string file;
};

// Ports on the derivation of root output `output_name` whose value cannot be
// traced to a script input or a producing program.
std::vector<UnboundDependency> unbound_dependencies(const WorkflowModel& model,
                                                    std::string_view output_name);

struct RunManifest {
  std::string run_id;
  std::map<std::string, std::vector<std::string>> bindings;

  bool operator==(const RunManifest&) const = default;
};

// JSON {"run_id": str, "bindings": {"<data name>": ["path", ...]}}.
RunManifest parse_manifest(std::string_view text);
std::string serialize_manifest(const RunManifest& manifest);
// Throws InvalidManifest if a bound name is not a root port.
void check_manifest(const WorkflowModel& model, const RunManifest& manifest);

enum class LineageDirection { Upstream, Downstream };

struct LineageFile {
  std::string path;
  std::string data_name;
  PortRole role = PortRole::Data;

  auto operator<=>(const LineageFile&) const = default;
};

// `name` is a root port name or a bound file path. Upstream maps an output
// to the input files it derives from; downstream maps an input to the output
// files it affects. Throws AmbiguousLineage when an upstream derivation has
// an unbound port.
std::vector<LineageFile> infer_file_lineage(const WorkflowModel& model,
                                            const RunManifest& manifest,
                                            LineageDirection direction,
                                            std::string_view name);

}  // namespace yw
