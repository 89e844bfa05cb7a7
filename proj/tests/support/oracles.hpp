#pragma once

// Naive reference implementations used to cross-check the library.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "yw/model.hpp"

namespace yw::testing {

// (scope, data name, source endpoint, sink endpoint, role)
using ChannelLink = std::tuple<std::string, std::string, Endpoint, Endpoint, PortRole>;

// Every (source, sink) pair found by matching port names over all blocks
// and all workflow scopes.
std::set<ChannelLink> brute_force_links(const Block& root);
// The same links read off inferred channels.
std::set<ChannelLink> links_of(const std::vector<Channel>& channels);

// Transitive closure over port nodes. Same-named ports are connected inside
// each workflow scope; each program connects all of its inputs to all of
// its outputs.
class PortClosure {
 public:
  explicit PortClosure(const WorkflowModel& model);

  std::vector<std::string> nested(const std::string& block) const;
  std::vector<std::string> containers(const std::string& block) const;
  std::vector<std::string> downstream(const std::string& block) const;
  // nullopt when the name is not a script input.
  std::optional<std::vector<std::string>> affected_by(const std::string& input) const;
  std::vector<std::string> upstream_inputs(const std::string& data) const;
  std::vector<std::string> deriving(const std::string& data) const;

 private:
  struct PortNode {
    std::string block;
    PortDirection direction;
    std::string name;
  };
  std::size_t id(const std::string& block, PortDirection dir, const std::string& name) const;
  bool reaches(std::size_t from, std::size_t to) const;  // reflexive
  std::vector<std::size_t> targets(const std::string& data) const;
  std::vector<std::string> programs_where(
      const std::function<bool(const Block&)>& keep) const;

  const WorkflowModel& model_;
  std::vector<const Block*> blocks_;  // pre-order
  std::vector<const Block*> parents_;
  std::vector<PortNode> nodes_;
  std::map<std::tuple<std::string, PortDirection, std::string>, std::size_t> ids_;
  std::set<ChannelLink> links_;
  std::vector<std::vector<bool>> reach_;
};

}  // namespace yw::testing
