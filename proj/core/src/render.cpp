#include "yw/render.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <tuple>
#include <vector>

#include "strings.hpp"
#include "yw/error.hpp"

namespace yw {
namespace {

constexpr std::array<std::pair<std::string_view, std::string_view>, 7>
    kDefaultStyle{{
        {"shape.program", "box"},
        {"shape.data", "oval"},
        {"shape.port_in", "circle"},
        {"shape.port_out", "doublecircle"},
        {"font.name", "Helvetica"},
        {"color.param", "gray50"},
        {"style.param", "dashed"},
    }};

constexpr std::array<std::string_view, kDefaultStyle.size()> kStyleKeys = [] {
  std::array<std::string_view, kDefaultStyle.size()> keys{};
  for (std::size_t i = 0; i < kDefaultStyle.size(); ++i) {
    keys[i] = kDefaultStyle[i].first;
  }
  return keys;
}();

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

using Attrs = std::vector<std::pair<std::string, std::string>>;

struct Edge {
  std::string from;
  std::string to;
  std::string label;
  bool param = false;

  bool operator<(const Edge& o) const {
    return std::tie(from, to, label) < std::tie(o.from, o.to, o.label);
  }
};

class DotWriter {
 public:
  DotWriter(const std::string& name, RankDir rankdir, const StyleTable& style)
      : style_(style) {
    out_ += "digraph " + quote(name) + " {\n";
    line("rankdir=" + quote(rankdir == RankDir::LR ? "LR" : "TB") + ";");
    const auto font = quote(style.get("font.name"));
    line("fontname=" + font + ";");
    line("node [fontname=" + font + "];");
    line("edge [fontname=" + font + "];");
  }

  void node(const std::string& id, const Attrs& attrs) {
    line(quote(id) + format(attrs) + ";");
  }

  void open_cluster(const Block& workflow) {
    line("subgraph " + quote("cluster_" + workflow.qualified_name) + " {");
    ++depth_;
    line("label=" + quote(workflow.name) + ";");
  }

  void close_cluster() {
    --depth_;
    line("}");
  }

  void edges(std::set<Edge> edges, bool mute_params) {
    for (const auto& e : edges) {
      Attrs attrs;
      if (!e.label.empty()) attrs.emplace_back("label", e.label);
      if (e.param && mute_params) append_muted(attrs);
      line(quote(e.from) + " -> " + quote(e.to) + format(attrs) + ";");
    }
  }

  void append_muted(Attrs& attrs) const {
    attrs.emplace_back("class", "param");
    attrs.emplace_back("style", style_.get("style.param"));
    attrs.emplace_back("color", style_.get("color.param"));
    attrs.emplace_back("fontcolor", style_.get("color.param"));
  }

  std::string finish() {
    out_ += "}\n";
    return std::move(out_);
  }

 private:
  static std::string format(const Attrs& attrs) {
    if (attrs.empty()) return {};
    std::string s = " [";
    for (std::size_t i = 0; i < attrs.size(); ++i) {
      if (i) s += ' ';
      s += attrs[i].first + "=" + quote(attrs[i].second);
    }
    return s + "]";
  }

  void line(const std::string& text) {
    out_.append(static_cast<std::size_t>(depth_ + 1) * 2, ' ');
    out_ += text;
    out_ += '\n';
  }

  const StyleTable& style_;
  std::string out_;
  int depth_ = 0;
};

const Block& focus_of(const ModelIndex& index, const RenderOptions& options) {
  if (!options.focus) return index.root();
  const auto* block = index.find(*options.focus);
  if (!block || !block->is_workflow()) {
    throw Error(ErrorCode::InvalidFocus,
                "'" + *options.focus + "' is not a workflow in this model");
  }
  return *block;
}

void descendant_workflows(const Block& b, std::vector<const Block*>& out) {
  for (const auto& c : b.children) {
    if (c.is_workflow()) {
      out.push_back(&c);
      descendant_workflows(c, out);
    }
  }
}

bool is_param_name(const Block& scope, std::string_view name) {
  auto param = [&](const Block& b) {
    return std::any_of(b.ports.begin(), b.ports.end(), [&](const Port& p) {
      return p.name == name && p.role == PortRole::Parameter;
    });
  };
  if (param(scope)) return true;
  return std::any_of(scope.children.begin(), scope.children.end(), param);
}

class Renderer {
 public:
  Renderer(const WorkflowModel& model, const RenderOptions& options,
           const StyleTable& style)
      : index_(model),
        options_(options),
        style_(style),
        focus_(focus_of(index_, options)),
        dot_(focus_.qualified_name, options.rankdir, style) {}

  std::string process() {
    port_terminals(focus_, PortDirection::In);
    for (const auto& child : focus_.children) process_block(child);
    port_terminals(focus_, PortDirection::Out);

    std::vector<const Block*> scopes{&focus_};
    if (options_.nested) descendant_workflows(focus_, scopes);
    std::set<Edge> edges;
    for (const auto* scope : scopes) {
      for (const auto* ch : index_.channels_in(scope->qualified_name)) {
        const auto from = process_endpoint(*scope, ch->source, ch->data_name);
        for (const auto& sink : ch->sinks) {
          edges.insert({from, process_endpoint(*scope, sink, ch->data_name),
                        ch->data_name, ch->role == PortRole::Parameter});
        }
      }
    }
    dot_.edges(std::move(edges), options_.de_emphasize_params);
    return dot_.finish();
  }

  std::string data() {
    place_data_names();
    if (options_.nested) {
      for (const auto& c : focus_.children) {
        if (c.is_workflow()) data_cluster(c);
      }
    }
    emit_data_nodes(focus_);

    std::set<Edge> edges;
    for (const auto* program : transformers()) {
      const auto* scope = index_.parent_of(program->qualified_name);
      for (const auto& in : program->ports) {
        if (in.direction != PortDirection::In) continue;
        for (const auto& out : program->ports) {
          if (out.direction != PortDirection::Out) continue;
          edges.insert({data_node_id(in.name), data_node_id(out.name),
                        program->name, is_param_name(*scope, in.name)});
        }
      }
    }
    dot_.edges(std::move(edges), options_.de_emphasize_params);
    return dot_.finish();
  }

  std::string combined() {
    place_data_names();
    for (const auto& child : focus_.children) combined_block(child);
    emit_data_nodes(focus_);

    std::set<Edge> edges;
    for (const auto* program : transformers()) {
      const auto& scope = *index_.parent_of(program->qualified_name);
      for (const auto& p : program->ports) {
        if (!participates(scope, p.name)) continue;
        const bool param = is_param_name(scope, p.name);
        if (p.direction == PortDirection::In) {
          edges.insert({data_node_id(p.name), program->qualified_name, {}, param});
        } else {
          edges.insert({program->qualified_name, data_node_id(p.name), {}, param});
        }
      }
    }
    dot_.edges(std::move(edges), options_.de_emphasize_params);
    return dot_.finish();
  }

 private:
  void port_terminals(const Block& workflow, PortDirection dir) {
    for (const auto& p : workflow.ports) {
      if (p.direction != dir) continue;
      Attrs attrs{{"shape", style_.get(dir == PortDirection::In ? "shape.port_in"
                                                                : "shape.port_out")},
                  {"label", p.name},
                  {"class", dir == PortDirection::In ? "port_in" : "port_out"}};
      if (p.role == PortRole::Parameter && options_.de_emphasize_params) {
        muted_node(attrs);
      }
      dot_.node(port_node_id(workflow.qualified_name, dir, p.name), attrs);
    }
  }

  void muted_node(Attrs& attrs) const {
    attrs.emplace_back("style", style_.get("style.param"));
    attrs.emplace_back("color", style_.get("color.param"));
    attrs.emplace_back("fontcolor", style_.get("color.param"));
  }

  void box(const Block& b) {
    dot_.node(b.qualified_name,
              {{"shape", style_.get("shape.program")},
               {"label", b.name},
               {"class", b.is_workflow() ? "workflow" : "program"}});
  }

  void process_block(const Block& b) {
    if (!(options_.nested && b.is_workflow())) {
      box(b);
      return;
    }
    dot_.open_cluster(b);
    port_terminals(b, PortDirection::In);
    for (const auto& child : b.children) process_block(child);
    port_terminals(b, PortDirection::Out);
    dot_.close_cluster();
  }

  std::string process_endpoint(const Block& scope, const Endpoint& e,
                               std::string_view data_name) const {
    if (e.block == scope.qualified_name) {
      return port_node_id(scope.qualified_name, e.port_direction, data_name);
    }
    const auto* block = index_.find(e.block);
    if (options_.nested && block && block->is_workflow()) {
      return port_node_id(e.block, e.port_direction, data_name);
    }
    return e.block;
  }

  void combined_block(const Block& b) {
    if (!(options_.nested && b.is_workflow())) {
      box(b);
      return;
    }
    dot_.open_cluster(b);
    for (const auto& child : b.children) combined_block(child);
    emit_data_nodes(b);
    dot_.close_cluster();
  }

  // Blocks whose ports are drawn as data transformations: the focus's
  // children, or every program below the focus when nesting.
  std::vector<const Block*> transformers() const {
    std::vector<const Block*> out;
    if (!options_.nested) {
      for (const auto& c : focus_.children) out.push_back(&c);
      return out;
    }
    const auto begin = index_.order_of(focus_.qualified_name);
    for (const auto* b : index_.preorder().subspan(static_cast<std::size_t>(begin) + 1)) {
      if (!b->qualified_name.starts_with(focus_.qualified_name + ".")) break;
      if (!b->is_workflow()) out.push_back(b);
    }
    return out;
  }

  bool participates(const Block& scope, std::string_view name) const {
    if (options_.view != GraphView::Combined) return true;
    for (const auto& p : scope.ports) {
      if (p.name == name) return true;
    }
    for (const auto* ch : index_.channels_in(scope.qualified_name)) {
      if (ch->data_name == name) return true;
    }
    return false;
  }

  // Assigns each data name to the outermost scope that mentions it.
  void place_data_names() {
    std::vector<const Block*> scopes{&focus_};
    if (options_.nested) descendant_workflows(focus_, scopes);
    std::set<std::string> placed;
    for (const auto* scope : scopes) {
      auto add = [&](const Port& p) {
        if (!participates(*scope, p.name)) return;
        if (!placed.insert(p.name).second) return;
        placement_[scope->qualified_name].push_back(
            {p.name, is_param_name(*scope, p.name)});
      };
      for (const auto& p : scope->ports) add(p);
      for (const auto& child : scope->children) {
        for (const auto& p : child.ports) add(p);
      }
    }
  }

  void emit_data_nodes(const Block& scope) {
    const auto it = placement_.find(scope.qualified_name);
    if (it == placement_.end()) return;
    for (const auto& [name, param] : it->second) {
      Attrs attrs{{"shape", style_.get("shape.data")},
                  {"label", name},
                  {"class", "data"}};
      if (param && options_.de_emphasize_params) muted_node(attrs);
      dot_.node(data_node_id(name), attrs);
    }
  }

  // Data view clusters hold only the data nodes placed in that workflow.
  void data_cluster(const Block& workflow) {
    dot_.open_cluster(workflow);
    for (const auto& c : workflow.children) {
      if (c.is_workflow()) data_cluster(c);
    }
    emit_data_nodes(workflow);
    dot_.close_cluster();
  }

  ModelIndex index_;
  const RenderOptions& options_;
  const StyleTable& style_;
  const Block& focus_;
  DotWriter dot_;
  std::map<std::string, std::vector<std::pair<std::string, bool>>> placement_;
};

}  // namespace

std::optional<GraphView> parse_view(std::string_view s) {
  if (s == "process") return GraphView::Process;
  if (s == "data") return GraphView::Data;
  if (s == "combined") return GraphView::Combined;
  return std::nullopt;
}

std::optional<RankDir> parse_rankdir(std::string_view s) {
  if (s == "LR") return RankDir::LR;
  if (s == "TB") return RankDir::TB;
  return std::nullopt;
}

StyleTable::StyleTable() {
  for (const auto& [k, v] : kDefaultStyle) values_.emplace(k, v);
}

StyleTable StyleTable::parse(std::string_view text) {
  StyleTable table;
  int line_no = 0;
  for (const auto raw : detail::split_lines(text)) {
    ++line_no;
    auto line = detail::trim(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = detail::trim(line.substr(0, hash));
    }
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::MalformedStyle, "expected key=value", {}, line_no);
    }
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    try {
      table.set(key, std::string(value));
    } catch (const Error& e) {
      throw Error(e.code(), e.detail(), {}, line_no);
    }
  }
  return table;
}

const std::string& StyleTable::get(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw Error(ErrorCode::MalformedStyle,
                "unknown style key '" + std::string(key) + "'");
  }
  return it->second;
}

void StyleTable::set(std::string_view key, std::string value) {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw Error(ErrorCode::MalformedStyle,
                "unknown style key '" + std::string(key) + "'");
  }
  if (value.empty()) {
    throw Error(ErrorCode::MalformedStyle,
                "style key '" + std::string(key) + "' needs a value");
  }
  it->second = std::move(value);
}

std::span<const std::string_view> StyleTable::keys() { return kStyleKeys; }

std::string render_process_view(const WorkflowModel& model,
                                const RenderOptions& options,
                                const StyleTable& style) {
  auto opts = options;
  opts.view = GraphView::Process;
  return Renderer(model, opts, style).process();
}

std::string render_data_view(const WorkflowModel& model,
                             const RenderOptions& options,
                             const StyleTable& style) {
  auto opts = options;
  opts.view = GraphView::Data;
  return Renderer(model, opts, style).data();
}

std::string render_combined_view(const WorkflowModel& model,
                                 const RenderOptions& options,
                                 const StyleTable& style) {
  auto opts = options;
  opts.view = GraphView::Combined;
  return Renderer(model, opts, style).combined();
}

std::string render(const WorkflowModel& model, const RenderOptions& options,
                   const StyleTable& style) {
  switch (options.view) {
    case GraphView::Process: return render_process_view(model, options, style);
    case GraphView::Data: return render_data_view(model, options, style);
    case GraphView::Combined: return render_combined_view(model, options, style);
  }
  return {};
}

std::string data_node_id(std::string_view data_name) {
  return "data:" + std::string(data_name);
}

std::string port_node_id(std::string_view workflow, PortDirection dir,
                         std::string_view data_name) {
  return std::string(workflow) + (dir == PortDirection::In ? "#in:" : "#out:") +
         std::string(data_name);
}

}  // namespace yw
