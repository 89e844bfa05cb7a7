#include "yw/validate.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

#include "strings.hpp"
#include "yw/error.hpp"
#include "yw/query.hpp"

namespace yw {
namespace {

Diagnostic make(DiagCode code, std::string message, std::string file, int line) {
  return {severity_of(code), code, std::move(message), std::move(file), line};
}

struct OpenBlock {
  std::string name;
  std::string path;
  std::string file;
  int line = 0;
  std::set<std::pair<std::string, PortDirection>> ports;
};

bool contains_word(std::string_view text, std::string_view word) {
  if (word.empty()) return false;
  for (auto pos = text.find(word); pos != std::string_view::npos;
       pos = text.find(word, pos + 1)) {
    const bool left_ok = pos == 0 || !detail::is_word_char(text[pos - 1]);
    const auto end = pos + word.size();
    const bool right_ok = end >= text.size() || !detail::is_word_char(text[end]);
    if (left_ok && right_ok) return true;
  }
  return false;
}

void collect_blocks(const Block& b, std::vector<const Block*>& out) {
  out.push_back(&b);
  for (const auto& c : b.children) collect_blocks(c, out);
}

struct Writer {
  const Block* owner;
  const Port* port;
};

void check_scope(const Block& scope, std::vector<Diagnostic>& out) {
  if (!scope.is_workflow()) return;
  std::map<std::string, std::vector<Writer>> writers;
  std::map<std::string, int> readers;
  for (const auto& p : scope.ports) {
    if (p.direction == PortDirection::In) {
      writers[p.name].push_back({&scope, &p});
    } else {
      ++readers[p.name];
    }
  }
  for (const auto& child : scope.children) {
    for (const auto& p : child.ports) {
      if (p.direction == PortDirection::Out) {
        writers[p.name].push_back({&child, &p});
      } else {
        ++readers[p.name];
      }
    }
  }
  for (const auto& [name, list] : writers) {
    if (list.size() > 1) {
      std::string who;
      for (const auto& w : list) {
        if (!who.empty()) who += ", ";
        who += w.owner->qualified_name;
      }
      out.push_back(make(DiagCode::AmbiguousWriter,
                         "'" + name + "' is written by " +
                             std::to_string(list.size()) + " blocks in workflow '" +
                             scope.qualified_name + "' (" + who + ")",
                         list[1].owner->file, list[1].port->line));
    }
    if (!readers.count(name)) {
      for (const auto& w : list) {
        const bool own = w.owner == &scope;
        out.push_back(make(DiagCode::UnreadValue,
                           own ? "input '" + name + "' of workflow '" +
                                     scope.qualified_name + "' is never read"
                               : "output '" + name + "' of block '" +
                                     w.owner->qualified_name + "' is never read",
                           w.owner->file, w.port->line));
      }
    }
  }
  for (const auto& child : scope.children) check_scope(child, out);
}

const Port* endpoint_port(const ModelIndex& index, const Endpoint& e,
                          const std::string& name) {
  const auto* b = index.find(e.block);
  return b ? b->find_port(name, e.port_direction) : nullptr;
}

}  // namespace

std::string code_id(DiagCode code) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "YW%03d", static_cast<int>(code));
  return buf;
}

std::string_view to_string(Severity s) {
  return s == Severity::Error ? "error" : "warning";
}

Severity severity_of(DiagCode code) {
  switch (code) {
    case DiagCode::PortNotInCode:
    case DiagCode::UnreadValue:
    case DiagCode::MixedRoles:
      return Severity::Warning;
    default:
      return Severity::Error;
  }
}

std::vector<Diagnostic> check_structure(std::span<const Annotation> annotations) {
  std::vector<Diagnostic> out;
  std::vector<OpenBlock> stack;
  std::set<std::string> closed;
  bool any_block = false;

  auto unclosed = [&](const OpenBlock& b, const char* why) {
    out.push_back(make(DiagCode::UnclosedBlock,
                       "block '" + b.name + "' is never closed" + why, b.file,
                       b.line));
  };
  auto close_top = [&] {
    const auto b = std::move(stack.back());
    stack.pop_back();
    if (!closed.insert(b.path).second) {
      out.push_back(make(DiagCode::DuplicateBlock,
                         "block '" + b.path + "' is defined twice", b.file,
                         b.line));
    }
  };

  for (const auto& a : annotations) {
    if (!stack.empty() && a.file != stack.front().file) {
      while (!stack.empty()) {
        unclosed(stack.back(), " before the end of its file");
        stack.pop_back();
      }
    }
    switch (a.tag) {
      case AnnotationTag::Begin: {
        OpenBlock b;
        b.name = a.value;
        b.path = stack.empty() ? a.value : stack.back().path + "." + a.value;
        b.file = a.file;
        b.line = a.line;
        stack.push_back(std::move(b));
        any_block = true;
        break;
      }
      case AnnotationTag::End: {
        if (stack.empty()) {
          out.push_back(make(DiagCode::UnbalancedEnd,
                             "@end without matching @begin", a.file, a.line));
          break;
        }
        if (a.value.empty() || a.value == stack.back().name) {
          close_top();
          break;
        }
        out.push_back(make(DiagCode::MismatchedEndName,
                           "@end " + a.value + " closes block '" +
                               stack.back().name + "'",
                           a.file, a.line));
        const auto match = std::find_if(stack.rbegin(), stack.rend(),
                                        [&](const OpenBlock& b) {
                                          return b.name == a.value;
                                        });
        if (match == stack.rend()) {
          close_top();
          break;
        }
        const auto keep = stack.size() - static_cast<std::size_t>(
                                             std::distance(stack.rbegin(), match)) - 1;
        while (stack.size() > keep + 1) {
          unclosed(stack.back(), "");
          stack.pop_back();
        }
        close_top();
        break;
      }
      case AnnotationTag::In:
      case AnnotationTag::Out:
      case AnnotationTag::Param: {
        const auto keyword = "@" + std::string(tag_keyword(a.tag)) + " " + a.value;
        if (stack.empty()) {
          out.push_back(make(DiagCode::PortOutsideBlock,
                             keyword + " is not inside any block", a.file, a.line));
          break;
        }
        const auto dir =
            a.tag == AnnotationTag::Out ? PortDirection::Out : PortDirection::In;
        if (!stack.back().ports.emplace(a.value, dir).second) {
          out.push_back(make(DiagCode::DuplicatePort,
                             keyword + " repeats a port of block '" +
                                 stack.back().name + "'",
                             a.file, a.line));
        }
        break;
      }
    }
  }
  while (!stack.empty()) {
    unclosed(stack.back(), "");
    stack.pop_back();
  }
  if (!any_block) {
    out.push_back(make(DiagCode::NoBlocks, "no @begin/@end blocks found",
                       annotations.empty() ? std::string() : annotations.front().file,
                       annotations.empty() ? 1 : annotations.front().line));
  }
  sort_diagnostics(out);
  return out;
}

std::vector<Diagnostic> check_port_names_in_code(const WorkflowModel& model,
                                                 std::span<const SourceText> sources) {
  std::map<std::string, std::vector<std::string_view>> code_lines;
  std::vector<std::string> stripped;
  stripped.reserve(sources.size());
  for (const auto& s : sources) {
    if (!s.syntax) continue;
    stripped.push_back(strip_comments(s.text, *s.syntax));
    code_lines[s.file] = detail::split_lines(stripped.back());
  }

  std::vector<const Block*> blocks;
  collect_blocks(model.root, blocks);
  std::vector<Diagnostic> out;
  for (const auto* b : blocks) {
    const auto it = code_lines.find(b->file);
    if (it == code_lines.end()) continue;
    const auto& lines = it->second;
    const auto first = std::max(b->span.begin_line, 1);
    const auto last = std::min<int>(b->span.end_line, static_cast<int>(lines.size()));
    for (const auto& p : b->ports) {
      bool found = false;
      for (int l = first; l <= last && !found; ++l) {
        found = contains_word(lines[static_cast<std::size_t>(l - 1)], p.name);
      }
      if (!found) {
        out.push_back(make(DiagCode::PortNotInCode,
                           std::string(to_string(p.direction)) + " port '" + p.name +
                               "' of block '" + b->qualified_name +
                               "' does not appear in its code",
                           b->file, p.line));
      }
    }
  }
  sort_diagnostics(out);
  return out;
}

std::vector<Diagnostic> check_dependency_chains(const WorkflowModel& model) {
  std::vector<Diagnostic> out;
  for (const auto& p : model.root.ports) {
    if (p.direction != PortDirection::Out) continue;
    for (const auto& u : unbound_dependencies(model, p.name)) {
      const bool self = u.block == model.root.qualified_name && u.port == p.name &&
                        u.direction == PortDirection::Out;
      out.push_back(make(DiagCode::BrokenChain,
                         self ? "output '" + p.name + "' has no producer"
                              : "output '" + p.name + "' depends on " +
                                    std::string(to_string(u.direction)) + " port '" +
                                    u.port + "' of block '" + u.block +
                                    "', which nothing writes",
                         u.file, u.line));
    }
  }
  sort_diagnostics(out);
  return out;
}

std::vector<Diagnostic> check_channel_sanity(const WorkflowModel& model) {
  std::vector<Diagnostic> out;
  check_scope(model.root, out);

  const ModelIndex index(model);
  for (const auto& ch : model.channels) {
    const auto* src = endpoint_port(index, ch.source, ch.data_name);
    bool data = src && src->role == PortRole::Data;
    bool param = src && src->role == PortRole::Parameter;
    for (const auto& s : ch.sinks) {
      if (const auto* p = endpoint_port(index, s, ch.data_name)) {
        (p->role == PortRole::Parameter ? param : data) = true;
      }
    }
    if (data && param && src) {
      out.push_back(make(DiagCode::MixedRoles,
                         "'" + ch.data_name + "' is both data and a parameter in workflow '" +
                             ch.scope + "'",
                         index.at(ch.source.block).file, src->line));
    }
  }
  sort_diagnostics(out);
  return out;
}

std::vector<Diagnostic> validate_annotations(std::span<const Annotation> annotations,
                                             std::span<const SourceText> sources) {
  auto out = check_structure(annotations);
  if (has_errors(out)) {
    if (!sources.empty()) {
      for (auto& d : out) {
        if (d.file.empty()) d.file = sources.front().file;
      }
    }
    return out;
  }
  const auto model = build_model(annotations, WriterPolicy::Lenient);
  if (!sources.empty()) {
    auto names = check_port_names_in_code(model, sources);
    out.insert(out.end(), names.begin(), names.end());
  }
  auto rest = validate_model(model);
  out.insert(out.end(), rest.begin(), rest.end());
  sort_diagnostics(out);
  return out;
}

std::vector<Diagnostic> validate_model(const WorkflowModel& model) {
  auto out = check_dependency_chains(model);
  auto sanity = check_channel_sanity(model);
  out.insert(out.end(), sanity.begin(), sanity.end());
  sort_diagnostics(out);
  return out;
}

void sort_diagnostics(std::vector<Diagnostic>& diagnostics) {
  std::stable_sort(diagnostics.begin(), diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     return std::tie(a.file, a.line, a.code) <
                            std::tie(b.file, b.line, b.code);
                   });
}

bool has_errors(std::span<const Diagnostic> diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) {
    return d.severity == Severity::Error;
  });
}

std::string format_diagnostics_text(std::span<const Diagnostic> diagnostics) {
  std::string out;
  for (const auto& d : diagnostics) {
    out += d.file + ":" + std::to_string(d.line) + ": " +
           std::string(to_string(d.severity)) + " " + code_id(d.code) + " " +
           d.message + "\n";
  }
  return out;
}

std::string diagnostics_to_json(std::span<const Diagnostic> diagnostics) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& d : diagnostics) {
    arr.push_back({{"file", d.file},
                   {"line", d.line},
                   {"severity", std::string(to_string(d.severity))},
                   {"code", code_id(d.code)},
                   {"message", d.message}});
  }
  return arr.dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::replace) +
         "\n";
}

}  // namespace yw
