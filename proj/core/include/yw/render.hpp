#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "yw/model.hpp"

namespace yw {

enum class GraphView { Process, Data, Combined };
enum class RankDir { LR, TB };

std::optional<GraphView> parse_view(std::string_view s);
std::optional<RankDir> parse_rankdir(std::string_view s);

struct RenderOptions {
  GraphView view = GraphView::Process;
  RankDir rankdir = RankDir::LR;
  std::optional<std::string> focus;  // workflow qualified name; root if unset
  bool nested = false;               // sub-workflows as cluster subgraphs
  bool de_emphasize_params = false;
};

// Every visual constant the renderer uses. Defaults:
//   shape.program=box        shape.data=oval
//   shape.port_in=circle     shape.port_out=doublecircle
//   font.name=Helvetica      color.param=gray50
//   style.param=dashed
class StyleTable {
 public:
  StyleTable();

  // `key=value` lines applied over the defaults; '#' starts a comment.
  // Throws MalformedStyle for unknown keys or lines without '='.
  static StyleTable parse(std::string_view text);

  const std::string& get(std::string_view key) const;
  void set(std::string_view key, std::string value);

  static std::span<const std::string_view> keys();

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

// Throws InvalidFocus when `options.focus` is not a workflow.
std::string render_process_view(const WorkflowModel& model,
                                const RenderOptions& options,
                                const StyleTable& style = StyleTable{});
std::string render_data_view(const WorkflowModel& model,
                             const RenderOptions& options,
                             const StyleTable& style = StyleTable{});
std::string render_combined_view(const WorkflowModel& model,
                                 const RenderOptions& options,
                                 const StyleTable& style = StyleTable{});

// Dispatches on options.view.
std::string render(const WorkflowModel& model, const RenderOptions& options,
                   const StyleTable& style = StyleTable{});

// Node id conventions shared with tests and tools.
std::string data_node_id(std::string_view data_name);
std::string port_node_id(std::string_view workflow, PortDirection dir,
                         std::string_view data_name);

}  // namespace yw
