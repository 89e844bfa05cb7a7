#include "yw/model.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

#include "yw/error.hpp"

namespace yw {
namespace {

std::string file_stem(const std::string& file) {
  auto stem = std::filesystem::path(file).stem().string();
  return stem.empty() ? std::string("script") : stem;
}

void assign_qualified_names(Block& block, const std::string& prefix,
                            std::set<std::string>& seen) {
  block.qualified_name =
      prefix.empty() ? block.name : prefix + "." + block.name;
  if (!seen.insert(block.qualified_name).second) {
    throw Error(ErrorCode::DuplicateBlock,
                "block '" + block.qualified_name + "' is defined twice",
                block.file, block.span.begin_line);
  }
  for (auto& child : block.children) {
    assign_qualified_names(child, block.qualified_name, seen);
  }
}

struct Candidate {
  Endpoint endpoint;
  PortRole role;
  int line;
};

struct NameCandidates {
  std::vector<Candidate> sources;
  std::vector<Candidate> sinks;
};

void infer_in_scope(const Block& scope, WriterPolicy policy,
                    std::vector<Channel>& out) {
  if (!scope.is_workflow()) return;

  std::map<std::string, NameCandidates> by_name;
  for (const auto& port : scope.ports) {
    auto& c = by_name[port.name];
    const Candidate cand{{scope.qualified_name, port.direction}, port.role,
                         port.line};
    (port.direction == PortDirection::In ? c.sources : c.sinks).push_back(cand);
  }
  for (const auto& child : scope.children) {
    for (const auto& port : child.ports) {
      auto& c = by_name[port.name];
      const Candidate cand{{child.qualified_name, port.direction}, port.role,
                           port.line};
      (port.direction == PortDirection::Out ? c.sources : c.sinks)
          .push_back(cand);
    }
  }

  for (const auto& [name, cands] : by_name) {
    if (cands.sources.empty() || cands.sinks.empty()) continue;
    if (cands.sources.size() > 1 && policy == WriterPolicy::Strict) {
      throw Error(ErrorCode::AmbiguousWriter,
                  "'" + name + "' has " +
                      std::to_string(cands.sources.size()) +
                      " writers in workflow '" + scope.qualified_name + "'",
                  scope.file, cands.sources[1].line);
    }
    const bool sink_is_param =
        std::any_of(cands.sinks.begin(), cands.sinks.end(),
                    [](const Candidate& c) { return c.role == PortRole::Parameter; });
    for (const auto& src : cands.sources) {
      Channel ch;
      ch.data_name = name;
      ch.scope = scope.qualified_name;
      ch.role = (sink_is_param || src.role == PortRole::Parameter)
                    ? PortRole::Parameter
                    : PortRole::Data;
      ch.source = src.endpoint;
      for (const auto& sink : cands.sinks) ch.sinks.push_back(sink.endpoint);
      out.push_back(std::move(ch));
    }
  }
  for (const auto& child : scope.children) infer_in_scope(child, policy, out);
}

void index_blocks(const Block& block, const Block* parent,
                  std::vector<const Block*>& order,
                  std::map<std::string, std::size_t, std::less<>>& position,
                  std::map<std::string, const Block*, std::less<>>& parents) {
  position.emplace(block.qualified_name, order.size());
  order.push_back(&block);
  parents.emplace(block.qualified_name, parent);
  for (const auto& child : block.children) {
    index_blocks(child, &block, order, position, parents);
  }
}

}  // namespace

std::string_view to_string(PortDirection d) {
  return d == PortDirection::In ? "in" : "out";
}

std::string_view to_string(PortRole r) {
  return r == PortRole::Data ? "data" : "parameter";
}

const Port* Block::find_port(std::string_view port_name,
                             PortDirection dir) const {
  for (const auto& p : ports) {
    if (p.name == port_name && p.direction == dir) return &p;
  }
  return nullptr;
}

Block build_blocks(std::span<const Annotation> annotations) {
  std::vector<Block> stack;
  std::vector<Block> top;

  for (const auto& a : annotations) {
    if (!stack.empty() && a.file != stack.front().file) {
      const auto& open = stack.back();
      throw Error(ErrorCode::UnclosedBlock,
                  "block '" + open.name + "' is not closed before end of file",
                  open.file, open.span.begin_line);
    }
    switch (a.tag) {
      case AnnotationTag::Begin: {
        Block b;
        b.name = a.value;
        b.description = a.description;
        b.file = a.file;
        b.span.begin_line = a.line;
        stack.push_back(std::move(b));
        break;
      }
      case AnnotationTag::End: {
        if (stack.empty()) {
          throw Error(ErrorCode::UnbalancedEnd, "@end without matching @begin",
                      a.file, a.line);
        }
        if (!a.value.empty() && a.value != stack.back().name) {
          throw Error(ErrorCode::MismatchedEndName,
                      "@end " + a.value + " closes block '" +
                          stack.back().name + "'",
                      a.file, a.line);
        }
        Block b = std::move(stack.back());
        stack.pop_back();
        b.span.end_line = a.line;
        (stack.empty() ? top : stack.back().children).push_back(std::move(b));
        break;
      }
      case AnnotationTag::In:
      case AnnotationTag::Out:
      case AnnotationTag::Param: {
        if (stack.empty()) {
          throw Error(ErrorCode::PortOutsideBlock,
                      "@" + std::string(tag_keyword(a.tag)) + " " + a.value +
                          " is not inside any block",
                      a.file, a.line);
        }
        Port p;
        p.name = a.value;
        p.direction =
            a.tag == AnnotationTag::Out ? PortDirection::Out : PortDirection::In;
        p.role = a.tag == AnnotationTag::Param ? PortRole::Parameter
                                               : PortRole::Data;
        p.line = a.line;
        p.description = a.description;
        auto& owner = stack.back();
        if (owner.find_port(p.name, p.direction)) {
          throw Error(ErrorCode::DuplicatePort,
                      "block '" + owner.name + "' already declares " +
                          std::string(to_string(p.direction)) + " port '" +
                          p.name + "'",
                      a.file, a.line);
        }
        owner.ports.push_back(std::move(p));
        break;
      }
    }
  }
  if (!stack.empty()) {
    const auto& open = stack.back();
    throw Error(ErrorCode::UnclosedBlock,
                "block '" + open.name + "' is never closed", open.file,
                open.span.begin_line);
  }
  if (top.empty()) {
    throw Error(ErrorCode::NoBlocks, "no @begin/@end blocks found",
                annotations.empty() ? std::string() : annotations.front().file);
  }

  Block root;
  if (top.size() == 1 && top.front().is_workflow()) {
    root = std::move(top.front());
  } else {
    root.name = file_stem(top.front().file);
    root.file = top.front().file;
    root.span.begin_line = top.front().span.begin_line;
    root.span.end_line = top.front().span.end_line;
    for (const auto& b : top) {
      if (b.file != root.file) continue;
      root.span.begin_line = std::min(root.span.begin_line, b.span.begin_line);
      root.span.end_line = std::max(root.span.end_line, b.span.end_line);
    }
    root.children = std::move(top);
  }
  std::set<std::string> seen;
  assign_qualified_names(root, {}, seen);
  return root;
}

std::vector<Channel> infer_channels(const Block& root, WriterPolicy policy) {
  std::vector<Channel> out;
  infer_in_scope(root, policy, out);
  return out;
}

WorkflowModel build_model(std::span<const Annotation> annotations,
                          WriterPolicy policy) {
  WorkflowModel model;
  model.root = build_blocks(annotations);
  model.channels = infer_channels(model.root, policy);
  for (const auto& a : annotations) {
    if (std::find(model.source_files.begin(), model.source_files.end(),
                  a.file) == model.source_files.end()) {
      model.source_files.push_back(a.file);
    }
  }
  return model;
}

ModelIndex::ModelIndex(const WorkflowModel& model) : model_(&model) {
  index_blocks(model.root, nullptr, preorder_, position_, parent_);
  for (const auto& ch : model.channels) by_scope_[ch.scope].push_back(&ch);
}

const Block* ModelIndex::find(std::string_view qualified_name) const {
  const auto it = position_.find(qualified_name);
  return it == position_.end() ? nullptr : preorder_[it->second];
}

const Block& ModelIndex::at(std::string_view qualified_name) const {
  if (const auto* b = find(qualified_name)) return *b;
  throw Error(ErrorCode::UnknownName,
              "no block named '" + std::string(qualified_name) + "'");
}

const Block* ModelIndex::parent_of(std::string_view qualified_name) const {
  const auto it = parent_.find(qualified_name);
  return it == parent_.end() ? nullptr : it->second;
}

const Block& ModelIndex::resolve(std::string_view name) const {
  if (const auto* b = find(name)) return *b;
  const Block* match = nullptr;
  for (const auto* b : preorder_) {
    if (b->name != name) continue;
    if (match) {
      throw Error(ErrorCode::UnknownName,
                  "block name '" + std::string(name) +
                      "' is ambiguous; use a qualified name");
    }
    match = b;
  }
  if (!match) {
    throw Error(ErrorCode::UnknownName,
                "no block named '" + std::string(name) + "'");
  }
  return *match;
}

int ModelIndex::order_of(std::string_view qualified_name) const {
  const auto it = position_.find(qualified_name);
  return it == position_.end() ? -1 : static_cast<int>(it->second);
}

std::span<const Channel* const> ModelIndex::channels_in(
    std::string_view scope) const {
  const auto it = by_scope_.find(scope);
  if (it == by_scope_.end()) return {};
  return it->second;
}

std::vector<const Channel*> ModelIndex::writers_of(std::string_view scope,
                                                   std::string_view data_name,
                                                   const Endpoint& sink) const {
  std::vector<const Channel*> out;
  for (const auto* ch : channels_in(scope)) {
    if (ch->data_name != data_name) continue;
    if (std::find(ch->sinks.begin(), ch->sinks.end(), sink) != ch->sinks.end()) {
      out.push_back(ch);
    }
  }
  return out;
}

std::vector<const Channel*> ModelIndex::readers_of(
    std::string_view scope, std::string_view data_name,
    const Endpoint& source) const {
  std::vector<const Channel*> out;
  for (const auto* ch : channels_in(scope)) {
    if (ch->data_name == data_name && ch->source == source) out.push_back(ch);
  }
  return out;
}

}  // namespace yw
