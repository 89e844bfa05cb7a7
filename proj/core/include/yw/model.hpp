#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "yw/annotation.hpp"

namespace yw {

enum class PortDirection { In, Out };
enum class PortRole { Data, Parameter };

std::string_view to_string(PortDirection d);
std::string_view to_string(PortRole r);

struct Port {
  std::string name;
  PortDirection direction = PortDirection::In;
  PortRole role = PortRole::Data;
  int line = 0;
  std::optional<std::string> description;

  bool operator==(const Port&) const = default;
};

struct LineSpan {
  int begin_line = 0;
  int end_line = 0;

  bool operator==(const LineSpan&) const = default;
};

// A program, or a workflow when it has children.
struct Block {
  std::string name;
  std::string qualified_name;  // dot-joined ancestor path
  std::optional<std::string> description;
  std::string file;
  std::vector<Port> ports;
  std::vector<Block> children;
  LineSpan span;

  bool is_workflow() const { return !children.empty(); }
  const Port* find_port(std::string_view port_name, PortDirection dir) const;

  bool operator==(const Block&) const = default;
};

struct Endpoint {
  std::string block;  // qualified name
  PortDirection port_direction = PortDirection::In;

  auto operator<=>(const Endpoint&) const = default;
};

// Dataflow edge inside one workflow scope: one writer, one or more readers.
// The source is a child's Out port or the scope's own In port; sinks are
// children's In ports or the scope's own Out port.
struct Channel {
  std::string data_name;
  std::string scope;
  PortRole role = PortRole::Data;
  Endpoint source;
  std::vector<Endpoint> sinks;

  bool operator==(const Channel&) const = default;
};

struct WorkflowModel {
  Block root;
  std::vector<Channel> channels;
  std::vector<std::string> source_files;

  bool operator==(const WorkflowModel&) const = default;
};

// Stack-based @begin/@end matching. A single top-level workflow becomes the
// root; anything else is wrapped in an implicit root named after the first
// source file's stem. Throws UnbalancedEnd, UnclosedBlock, MismatchedEndName,
// PortOutsideBlock, DuplicateBlock, DuplicatePort or NoBlocks.
Block build_blocks(std::span<const Annotation> annotations);

enum class WriterPolicy {
  Strict,   // several writers of one name in a scope throw AmbiguousWriter
  Lenient,  // emit one channel per writer; the validator reports them
};

std::vector<Channel> infer_channels(const Block& root,
                                    WriterPolicy policy = WriterPolicy::Strict);

WorkflowModel build_model(std::span<const Annotation> annotations,
                          WriterPolicy policy = WriterPolicy::Strict);

std::string serialize_model(const WorkflowModel& model);
// Throws MalformedModel.
WorkflowModel parse_model(std::string_view text);

// Lookup tables over a model. Holds pointers into `model`, which must
// outlive the index and stay unmodified.
class ModelIndex {
 public:
  explicit ModelIndex(const WorkflowModel& model);

  const WorkflowModel& model() const { return *model_; }
  const Block& root() const { return model_->root; }

  const Block* find(std::string_view qualified_name) const;
  const Block& at(std::string_view qualified_name) const;
  const Block* parent_of(std::string_view qualified_name) const;
  // Qualified name, or a simple name that is unique in the model.
  // Throws UnknownName.
  const Block& resolve(std::string_view name) const;

  std::span<const Block* const> preorder() const { return preorder_; }
  int order_of(std::string_view qualified_name) const;

  std::span<const Channel* const> channels_in(std::string_view scope) const;
  // Channels in `scope` carrying `data_name` that list `sink` as a reader.
  std::vector<const Channel*> writers_of(std::string_view scope,
                                         std::string_view data_name,
                                         const Endpoint& sink) const;
  // Channels in `scope` carrying `data_name` written by `source`.
  std::vector<const Channel*> readers_of(std::string_view scope,
                                         std::string_view data_name,
                                         const Endpoint& source) const;

 private:
  const WorkflowModel* model_;
  std::vector<const Block*> preorder_;
  std::map<std::string, std::size_t, std::less<>> position_;
  std::map<std::string, const Block*, std::less<>> parent_;
  std::map<std::string, std::vector<const Channel*>, std::less<>> by_scope_;
};

}  // namespace yw
