#include "yw/query.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <queue>
#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "yw/error.hpp"

namespace yw {
namespace {

using Json = nlohmann::ordered_json;

struct Trace {
  InputOrigin origin = InputOrigin::Unbound;
  std::string from;
  // Where tracing stopped when unbound: the sink endpoint with no writer.
  Endpoint dead_end;
  std::string dead_end_scope;
};

Trace trace_sink(const ModelIndex& index, const std::string& scope,
                 const Endpoint& sink, const std::string& name,
                 std::set<std::tuple<std::string, std::string, PortDirection>>& seen) {
  Trace t;
  t.dead_end = sink;
  t.dead_end_scope = scope;
  if (!seen.emplace(scope, sink.block, sink.port_direction).second) return t;

  const auto writers = index.writers_of(scope, name, sink);
  if (writers.empty()) return t;
  const auto& src = writers.front()->source;
  if (src.block == scope) {
    const auto* parent = index.parent_of(scope);
    if (!parent) {
      t.origin = InputOrigin::ScriptInput;
      t.from = name;
      return t;
    }
    return trace_sink(index, parent->qualified_name,
                      Endpoint{scope, PortDirection::In}, name, seen);
  }
  const auto& block = index.at(src.block);
  if (!block.is_workflow()) {
    t.origin = InputOrigin::ProducedBy;
    t.from = block.qualified_name;
    return t;
  }
  return trace_sink(index, block.qualified_name,
                    Endpoint{block.qualified_name, PortDirection::Out}, name,
                    seen);
}

Trace trace_sink(const ModelIndex& index, const std::string& scope,
                 const Endpoint& sink, const std::string& name) {
  std::set<std::tuple<std::string, std::string, PortDirection>> seen;
  return trace_sink(index, scope, sink, name, seen);
}

bool has_root_port(const Block& root, std::string_view name,
                   std::optional<PortDirection> dir = std::nullopt) {
  return std::any_of(root.ports.begin(), root.ports.end(), [&](const Port& p) {
    return p.name == name && (!dir || p.direction == *dir);
  });
}

// Start nodes for a data-name query: the channels feeding a script output,
// else every channel with that name, else programs that write the name to
// an unconnected Out port.
std::vector<std::size_t> resolve_data(const DependencyGraph& graph,
                                      std::string_view name) {
  if (has_root_port(graph.index().root(), name, PortDirection::Out)) {
    return graph.root_outputs(name);
  }
  if (auto any = graph.data_nodes_named(name); !any.empty()) return any;

  std::vector<std::size_t> producers;
  bool known = false;
  for (const auto* b : graph.index().preorder()) {
    for (const auto& p : b->ports) {
      if (p.name != name) continue;
      known = true;
      if (p.direction != PortDirection::Out) continue;
      if (const auto id = graph.program_node(b->qualified_name)) {
        producers.push_back(*id);
      }
    }
  }
  if (!known) {
    throw Error(ErrorCode::UnknownName,
                "no port or channel named '" + std::string(name) + "'");
  }
  return producers;
}

std::vector<std::string> programs_in(const DependencyGraph& graph,
                                     const std::vector<bool>& mask) {
  std::vector<std::string> out;
  for (const auto* b : graph.index().preorder()) {
    const auto id = graph.program_node(b->qualified_name);
    if (id && mask[*id]) out.push_back(b->qualified_name);
  }
  return out;
}

std::vector<bool> reach(const DependencyGraph& graph,
                        std::span<const std::size_t> starts, bool forward) {
  std::vector<bool> seen(graph.size(), false);
  std::deque<std::size_t> queue;
  for (const auto s : starts) {
    if (!seen[s]) {
      seen[s] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const auto n = queue.front();
    queue.pop_front();
    for (const auto m : forward ? graph.successors(n) : graph.predecessors(n)) {
      if (!seen[m]) {
        seen[m] = true;
        queue.push_back(m);
      }
    }
  }
  return seen;
}

bool prune(Block& block, const std::set<std::string>& keep) {
  std::vector<Block> kept;
  for (auto& child : block.children) {
    if (prune(child, keep)) kept.push_back(std::move(child));
  }
  const bool had_children = !block.children.empty();
  block.children = std::move(kept);
  if (keep.count(block.qualified_name)) return true;
  return had_children && !block.children.empty();
}

[[noreturn]] void bad_manifest(const std::string& what) {
  throw Error(ErrorCode::InvalidManifest, what);
}

}  // namespace

DependencyGraph::DependencyGraph(const WorkflowModel& model) : index_(model) {
  for (const auto* b : index_.preorder()) {
    if (b->is_workflow()) continue;
    program_ids_.emplace(b->qualified_name, nodes_.size());
    nodes_.push_back({NodeKind::Program, b->qualified_name, nullptr});
  }
  for (const auto& ch : model.channels) {
    data_ids_.emplace(&ch, nodes_.size());
    nodes_.push_back({NodeKind::Data, {}, &ch});
  }
  succ_.resize(nodes_.size());
  pred_.resize(nodes_.size());

  const auto& root_name = model.root.qualified_name;
  for (const auto& ch : model.channels) {
    const auto self = data_ids_.at(&ch);
    const auto& scope = ch.scope;
    if (ch.source.block == scope) {
      if (scope != root_name) {
        const auto* parent = index_.parent_of(scope);
        for (const auto* up : index_.writers_of(parent->qualified_name,
                                                ch.data_name,
                                                {scope, PortDirection::In})) {
          add_edge(data_ids_.at(up), self);
        }
      }
    } else if (const auto id = program_node(ch.source.block)) {
      add_edge(*id, self);
    }
    for (const auto& sink : ch.sinks) {
      if (sink.block == scope) {
        if (scope == root_name) continue;
        const auto* parent = index_.parent_of(scope);
        for (const auto* down : index_.readers_of(parent->qualified_name,
                                                  ch.data_name,
                                                  {scope, PortDirection::Out})) {
          add_edge(self, data_ids_.at(down));
        }
      } else if (const auto id = program_node(sink.block)) {
        add_edge(self, *id);
      }
    }
  }
}

void DependencyGraph::add_edge(std::size_t from, std::size_t to) {
  auto& out = succ_[from];
  if (std::find(out.begin(), out.end(), to) != out.end()) return;
  out.push_back(to);
  pred_[to].push_back(from);
}

std::optional<std::size_t> DependencyGraph::program_node(
    std::string_view qualified_name) const {
  const auto it = program_ids_.find(qualified_name);
  if (it == program_ids_.end()) return std::nullopt;
  return it->second;
}

std::size_t DependencyGraph::data_node(const Channel& channel) const {
  return data_ids_.at(&channel);
}

std::vector<std::size_t> DependencyGraph::root_inputs(std::string_view name) const {
  const auto& root = index_.root().qualified_name;
  std::vector<std::size_t> out;
  for (const auto* ch : index_.readers_of(root, name, {root, PortDirection::In})) {
    out.push_back(data_ids_.at(ch));
  }
  return out;
}

std::vector<std::size_t> DependencyGraph::root_outputs(std::string_view name) const {
  const auto& root = index_.root().qualified_name;
  std::vector<std::size_t> out;
  for (const auto* ch : index_.writers_of(root, name, {root, PortDirection::Out})) {
    out.push_back(data_ids_.at(ch));
  }
  return out;
}

std::vector<std::size_t> DependencyGraph::data_nodes_named(
    std::string_view name) const {
  std::vector<std::size_t> out;
  for (const auto& [ch, id] : data_ids_) {
    if (ch->data_name == name) out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<bool> DependencyGraph::reach_forward(
    std::span<const std::size_t> starts) const {
  return reach(*this, starts, true);
}

std::vector<bool> DependencyGraph::reach_backward(
    std::span<const std::size_t> starts) const {
  return reach(*this, starts, false);
}

std::vector<BlockSummary> list_blocks(const WorkflowModel& model) {
  const ModelIndex index(model);
  std::vector<BlockSummary> out;
  for (const auto* b : index.preorder()) {
    out.push_back({b->qualified_name, b->description});
  }
  return out;
}

std::vector<std::string> nested_blocks(const WorkflowModel& model,
                                       std::string_view block) {
  const ModelIndex index(model);
  const auto& b = index.resolve(block);
  std::vector<std::string> out;
  std::function<void(const Block&)> walk = [&](const Block& parent) {
    for (const auto& c : parent.children) {
      out.push_back(c.qualified_name);
      walk(c);
    }
  };
  walk(b);
  return out;
}

std::vector<std::string> containing_blocks(const WorkflowModel& model,
                                           std::string_view block) {
  const ModelIndex index(model);
  std::vector<std::string> out;
  for (const auto* p = index.parent_of(index.resolve(block).qualified_name); p;
       p = index.parent_of(p->qualified_name)) {
    out.push_back(p->qualified_name);
  }
  return out;
}

std::vector<std::string> downstream_blocks(const WorkflowModel& model,
                                           std::string_view block) {
  const DependencyGraph graph(model);
  const auto& b = graph.index().resolve(block);
  const auto* scope = graph.index().parent_of(b.qualified_name);
  if (!scope) return {};
  std::vector<std::size_t> starts;
  for (const auto& p : b.ports) {
    if (p.direction != PortDirection::Out) continue;
    for (const auto* ch : graph.index().readers_of(
             scope->qualified_name, p.name, {b.qualified_name, PortDirection::Out})) {
      starts.push_back(graph.data_node(*ch));
    }
  }
  return programs_in(graph, graph.reach_forward(starts));
}

std::vector<std::string> blocks_affected_by_input(const WorkflowModel& model,
                                                  std::string_view input_name) {
  if (!has_root_port(model.root, input_name, PortDirection::In)) {
    throw Error(ErrorCode::UnknownName,
                "'" + std::string(input_name) + "' is not a script input");
  }
  const DependencyGraph graph(model);
  const auto starts = graph.root_inputs(input_name);
  return programs_in(graph, graph.reach_forward(starts));
}

std::vector<std::string> upstream_inputs(const WorkflowModel& model,
                                         std::string_view output_name) {
  const DependencyGraph graph(model);
  const auto starts = resolve_data(graph, output_name);
  const auto seen = graph.reach_backward(starts);
  std::vector<std::string> out;
  for (const auto& p : model.root.ports) {
    if (p.direction != PortDirection::In) continue;
    const auto ids = graph.root_inputs(p.name);
    if (std::any_of(ids.begin(), ids.end(), [&](std::size_t id) { return seen[id]; })) {
      out.push_back(p.name);
    }
  }
  return out;
}

std::vector<std::string> deriving_blocks(const WorkflowModel& model,
                                         std::string_view data_name) {
  const DependencyGraph graph(model);
  const auto starts = resolve_data(graph, data_name);
  return programs_in(graph, graph.reach_backward(starts));
}

std::string_view to_string(InputOrigin o) {
  switch (o) {
    case InputOrigin::ScriptInput: return "script-input";
    case InputOrigin::ProducedBy: return "produced-by";
    case InputOrigin::Unbound: return "unbound";
  }
  return "unbound";
}

std::vector<InputSource> step_input_sources(const WorkflowModel& model,
                                            std::string_view block) {
  const ModelIndex index(model);
  const auto& b = index.resolve(block);
  const auto* scope = index.parent_of(b.qualified_name);
  std::vector<InputSource> out;
  for (const auto& p : b.ports) {
    if (p.direction != PortDirection::In) continue;
    InputSource src{p.name, p.role, InputOrigin::ScriptInput, p.name, p.line};
    if (scope) {
      const auto t = trace_sink(index, scope->qualified_name,
                                {b.qualified_name, PortDirection::In}, p.name);
      src.origin = t.origin;
      src.from = t.from;
    }
    out.push_back(std::move(src));
  }
  return out;
}

Derivation derivation(const WorkflowModel& model, std::string_view output_name) {
  const DependencyGraph graph(model);
  const auto& index = graph.index();
  const auto starts = resolve_data(graph, output_name);
  const auto in_scope = graph.reach_backward(starts);

  // Program-level edges: P -> Q when Q reads data written by P, following
  // data-only paths that stay inside the derivation.
  std::vector<std::size_t> programs;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    if (in_scope[i] && graph.node(i).kind == DependencyGraph::NodeKind::Program) {
      programs.push_back(i);
    }
  }
  std::map<std::size_t, std::set<std::size_t>> next;
  std::map<std::size_t, int> indegree;
  for (const auto p : programs) indegree[p] = 0;
  for (const auto p : programs) {
    std::vector<bool> seen(graph.size(), false);
    std::deque<std::size_t> queue(graph.successors(p).begin(),
                                  graph.successors(p).end());
    while (!queue.empty()) {
      const auto n = queue.front();
      queue.pop_front();
      if (seen[n] || !in_scope[n]) continue;
      seen[n] = true;
      if (graph.node(n).kind == DependencyGraph::NodeKind::Program) {
        if (next[p].insert(n).second) ++indegree[n];
        continue;
      }
      for (const auto m : graph.successors(n)) queue.push_back(m);
    }
  }

  auto order_key = [&](std::size_t id) {
    return index.order_of(graph.node(id).block);
  };
  auto later = [&](std::size_t a, std::size_t b) { return order_key(a) > order_key(b); };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(later)> ready(later);
  for (const auto& [p, deg] : indegree) {
    if (deg == 0) ready.push(p);
  }
  std::vector<std::size_t> sorted;
  while (!ready.empty()) {
    const auto p = ready.top();
    ready.pop();
    sorted.push_back(p);
    for (const auto q : next[p]) {
      if (--indegree[q] == 0) ready.push(q);
    }
  }
  if (sorted.size() != programs.size()) {
    throw Error(ErrorCode::CyclicDerivation,
                "'" + std::string(output_name) +
                    "' depends on a feedback loop; its derivation has no order");
  }

  const std::set<std::size_t> start_set(starts.begin(), starts.end());
  Derivation d;
  d.target = std::string(output_name);
  for (const auto id : sorted) {
    const auto& block = index.at(graph.node(id).block);
    const auto& scope = index.parent_of(block.qualified_name)->qualified_name;
    DerivationStep step;
    step.block = block.qualified_name;
    for (const auto& p : block.ports) {
      if (p.direction == PortDirection::In) {
        step.consumed.push_back(p.name);
        continue;
      }
      bool contributes = start_set.count(id) && p.name == output_name;
      for (const auto* ch : index.readers_of(scope, p.name,
                                             {block.qualified_name, PortDirection::Out})) {
        contributes = contributes || in_scope[graph.data_node(*ch)];
      }
      if (contributes) step.produced.push_back(p.name);
    }
    d.steps.push_back(std::move(step));
  }
  return d;
}

WorkflowModel induced_submodel(const WorkflowModel& model,
                               std::span<const std::string> blocks) {
  WorkflowModel sub;
  sub.root = model.root;
  sub.source_files = model.source_files;
  const std::set<std::string> keep(blocks.begin(), blocks.end());
  std::vector<Block> kept;
  for (auto& child : sub.root.children) {
    if (prune(child, keep)) kept.push_back(std::move(child));
  }
  if (kept.empty()) {
    throw Error(ErrorCode::NoBlocks, "derivation selects no blocks");
  }
  sub.root.children = std::move(kept);
  sub.channels = infer_channels(sub.root, WriterPolicy::Lenient);
  return sub;
}

std::vector<UnboundDependency> unbound_dependencies(const WorkflowModel& model,
                                                    std::string_view output_name) {
  if (!has_root_port(model.root, output_name, PortDirection::Out)) {
    throw Error(ErrorCode::UnknownName,
                "'" + std::string(output_name) + "' is not a script output");
  }
  const DependencyGraph graph(model);
  const auto& index = graph.index();
  const auto& root = model.root.qualified_name;
  const std::string name(output_name);

  std::vector<UnboundDependency> out;
  std::set<std::tuple<std::string, std::string, PortDirection>> reported;
  auto report = [&](const Trace& t, const std::string& data_name) {
    const auto& owner = index.at(t.dead_end.block);
    if (!reported.emplace(owner.qualified_name, data_name, t.dead_end.port_direction)
             .second) {
      return;
    }
    const auto* port = owner.find_port(data_name, t.dead_end.port_direction);
    out.push_back({owner.qualified_name, data_name, t.dead_end.port_direction,
                   port ? port->line : owner.span.begin_line, owner.file});
  };

  const auto head = trace_sink(index, root, {root, PortDirection::Out}, name);
  if (head.origin == InputOrigin::Unbound) {
    report(head, name);
    return out;
  }
  const auto seen = graph.reach_backward(graph.root_outputs(name));
  for (const auto& qname : programs_in(graph, seen)) {
    const auto& block = index.at(qname);
    const auto& scope = index.parent_of(qname)->qualified_name;
    for (const auto& p : block.ports) {
      if (p.direction != PortDirection::In) continue;
      const auto t = trace_sink(index, scope, {qname, PortDirection::In}, p.name);
      if (t.origin == InputOrigin::Unbound) report(t, p.name);
    }
  }
  return out;
}

RunManifest parse_manifest(std::string_view text) {
  const Json j = detail::parse_json(text, ErrorCode::InvalidManifest);
  if (!j.is_object()) bad_manifest("manifest must be a JSON object");
  RunManifest m;
  const auto run_id = j.find("run_id");
  if (run_id == j.end() || !run_id->is_string()) {
    bad_manifest("'run_id' must be a string");
  }
  m.run_id = run_id->get<std::string>();
  const auto bindings = j.find("bindings");
  if (bindings == j.end() || !bindings->is_object()) {
    bad_manifest("'bindings' must be an object");
  }
  for (const auto& [name, files] : bindings->items()) {
    if (!files.is_array()) bad_manifest("binding '" + name + "' must be an array");
    auto& list = m.bindings[name];
    for (const auto& f : files) {
      if (!f.is_string()) bad_manifest("binding '" + name + "' holds a non-string path");
      list.push_back(f.get<std::string>());
    }
  }
  return m;
}

std::string serialize_manifest(const RunManifest& manifest) {
  Json j;
  j["run_id"] = manifest.run_id;
  Json bindings = Json::object();
  for (const auto& [name, files] : manifest.bindings) bindings[name] = files;
  j["bindings"] = std::move(bindings);
  return j.dump(2) + "\n";
}

void check_manifest(const WorkflowModel& model, const RunManifest& manifest) {
  for (const auto& [name, files] : manifest.bindings) {
    if (!has_root_port(model.root, name)) {
      bad_manifest("bound name '" + name + "' is not a port of workflow '" +
                   model.root.qualified_name + "'");
    }
  }
}

std::vector<LineageFile> infer_file_lineage(const WorkflowModel& model,
                                            const RunManifest& manifest,
                                            LineageDirection direction,
                                            std::string_view name) {
  check_manifest(model, manifest);

  std::vector<std::string> keys;
  if (has_root_port(model.root, name)) {
    keys.emplace_back(name);
  } else {
    for (const auto& [key, files] : manifest.bindings) {
      if (std::find(files.begin(), files.end(), name) != files.end()) {
        keys.push_back(key);
      }
    }
  }
  if (keys.empty()) {
    throw Error(ErrorCode::UnknownName,
                "'" + std::string(name) + "' is neither a script port nor a bound file");
  }

  auto role_of = [&](const std::string& port) {
    for (const auto& p : model.root.ports) {
      if (p.name == port && p.direction == PortDirection::In) return p.role;
    }
    return PortRole::Data;
  };
  auto files_of = [&](const std::string& port) -> const std::vector<std::string>& {
    static const std::vector<std::string> none;
    const auto it = manifest.bindings.find(port);
    return it == manifest.bindings.end() ? none : it->second;
  };

  std::set<LineageFile> out;
  for (const auto& key : keys) {
    if (direction == LineageDirection::Upstream) {
      if (!has_root_port(model.root, key, PortDirection::Out)) {
        throw Error(ErrorCode::UnknownName, "'" + key + "' is not a script output");
      }
      const auto unbound = unbound_dependencies(model, key);
      if (!unbound.empty()) {
        std::string ports;
        for (const auto& u : unbound) {
          if (!ports.empty()) ports += ", ";
          ports += u.block + "." + u.port;
        }
        throw Error(ErrorCode::AmbiguousLineage,
                    "derivation of '" + key + "' has unbound ports: " + ports);
      }
      for (const auto& input : upstream_inputs(model, key)) {
        for (const auto& path : files_of(input)) {
          out.insert({path, input, role_of(input)});
        }
      }
    } else {
      if (!has_root_port(model.root, key, PortDirection::In)) {
        throw Error(ErrorCode::UnknownName, "'" + key + "' is not a script input");
      }
      for (const auto& p : model.root.ports) {
        if (p.direction != PortDirection::Out) continue;
        const auto inputs = upstream_inputs(model, p.name);
        if (std::find(inputs.begin(), inputs.end(), key) == inputs.end()) continue;
        for (const auto& path : files_of(p.name)) {
          out.insert({path, p.name, PortRole::Data});
        }
      }
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace yw
