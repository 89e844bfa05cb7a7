#include <set>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "yw/error.hpp"
#include "yw/model.hpp"

namespace yw {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedModel, what);
}

Json optional_text(const std::optional<std::string>& s) {
  return s ? Json(*s) : Json(nullptr);
}

Json endpoint_json(const Endpoint& e) {
  return {{"block", e.block},
          {"port_direction", std::string(to_string(e.port_direction))}};
}

Json block_json(const Block& b) {
  Json ports = Json::array();
  for (const auto& p : b.ports) {
    ports.push_back({{"name", p.name},
                     {"direction", std::string(to_string(p.direction))},
                     {"role", std::string(to_string(p.role))},
                     {"line", p.line},
                     {"description", optional_text(p.description)}});
  }
  Json children = Json::array();
  for (const auto& c : b.children) children.push_back(block_json(c));
  Json j;
  j["name"] = b.name;
  j["qualified_name"] = b.qualified_name;
  j["description"] = optional_text(b.description);
  j["file"] = b.file;
  j["ports"] = std::move(ports);
  j["children"] = std::move(children);
  j["span"] = Json::array({b.span.begin_line, b.span.end_line});
  return j;
}

const Json& member(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) malformed(where + " must be an object");
  const auto it = obj.find(key);
  if (it == obj.end()) malformed(where + " is missing '" + key + "'");
  return *it;
}

std::string text_member(const Json& obj, const char* key,
                        const std::string& where) {
  const auto& v = member(obj, key, where);
  if (!v.is_string()) malformed(where + "." + key + " must be a string");
  return v.get<std::string>();
}

std::optional<std::string> optional_text_member(const Json& obj,
                                                const char* key,
                                                const std::string& where) {
  const auto& v = member(obj, key, where);
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) malformed(where + "." + key + " must be a string or null");
  return v.get<std::string>();
}

int int_member(const Json& obj, const char* key, const std::string& where) {
  const auto& v = member(obj, key, where);
  if (!v.is_number_integer()) malformed(where + "." + key + " must be an integer");
  return v.get<int>();
}

PortDirection direction_of(const std::string& s, const std::string& where) {
  if (s == "in") return PortDirection::In;
  if (s == "out") return PortDirection::Out;
  malformed(where + ": unknown direction '" + s + "'");
}

PortRole role_of(const std::string& s, const std::string& where) {
  if (s == "data") return PortRole::Data;
  if (s == "parameter") return PortRole::Parameter;
  malformed(where + ": unknown role '" + s + "'");
}

Endpoint endpoint_of(const Json& j, const std::string& where) {
  return {text_member(j, "block", where),
          direction_of(text_member(j, "port_direction", where), where)};
}

Block block_of(const Json& j, const std::string& where) {
  Block b;
  b.name = text_member(j, "name", where);
  b.qualified_name = text_member(j, "qualified_name", where);
  const std::string here = "block '" + b.qualified_name + "'";
  b.description = optional_text_member(j, "description", here);
  if (const auto it = j.find("file"); it != j.end()) {
    if (!it->is_string()) malformed(here + ".file must be a string");
    b.file = it->get<std::string>();
  }
  const auto& ports = member(j, "ports", here);
  if (!ports.is_array()) malformed(here + ".ports must be an array");
  for (const auto& pj : ports) {
    Port p;
    p.name = text_member(pj, "name", here + " port");
    p.direction = direction_of(text_member(pj, "direction", here), here);
    p.role = role_of(text_member(pj, "role", here), here);
    p.line = int_member(pj, "line", here + " port");
    p.description = optional_text_member(pj, "description", here + " port");
    b.ports.push_back(std::move(p));
  }
  const auto& children = member(j, "children", here);
  if (!children.is_array()) malformed(here + ".children must be an array");
  for (const auto& cj : children) b.children.push_back(block_of(cj, here));
  const auto& span = member(j, "span", here);
  if (!span.is_array() || span.size() != 2 || !span[0].is_number_integer() ||
      !span[1].is_number_integer()) {
    malformed(here + ".span must be [begin, end]");
  }
  b.span = {span[0].get<int>(), span[1].get<int>()};
  return b;
}

void collect_workflows(const Block& b, std::set<std::string>& workflows,
                       std::set<std::string>& all) {
  if (!all.insert(b.qualified_name).second) {
    malformed("duplicate qualified name '" + b.qualified_name + "'");
  }
  if (b.is_workflow()) workflows.insert(b.qualified_name);
  for (const auto& c : b.children) collect_workflows(c, workflows, all);
}

}  // namespace

std::string serialize_model(const WorkflowModel& model) {
  Json channels = Json::array();
  for (const auto& ch : model.channels) {
    Json sinks = Json::array();
    for (const auto& s : ch.sinks) sinks.push_back(endpoint_json(s));
    Json c;
    c["data"] = ch.data_name;
    c["scope"] = ch.scope;
    c["role"] = std::string(to_string(ch.role));
    c["source"] = endpoint_json(ch.source);
    c["sinks"] = std::move(sinks);
    channels.push_back(std::move(c));
  }
  Json root;
  root["root"] = block_json(model.root);
  root["channels"] = std::move(channels);
  root["source_files"] = model.source_files;
  return root.dump(2, ' ', false, Json::error_handler_t::replace) + "\n";
}

WorkflowModel parse_model(std::string_view text) {
  const Json j = detail::parse_json(text, ErrorCode::MalformedModel);
  WorkflowModel model;
  model.root = block_of(member(j, "root", "model"), "model.root");
  if (!model.root.is_workflow()) malformed("root block has no children");

  std::set<std::string> workflows;
  std::set<std::string> all;
  collect_workflows(model.root, workflows, all);

  const auto& channels = member(j, "channels", "model");
  if (!channels.is_array()) malformed("model.channels must be an array");
  for (const auto& cj : channels) {
    Channel ch;
    ch.data_name = text_member(cj, "data", "channel");
    const std::string here = "channel '" + ch.data_name + "'";
    ch.scope = text_member(cj, "scope", here);
    if (!workflows.count(ch.scope)) {
      malformed(here + " names unknown workflow scope '" + ch.scope + "'");
    }
    ch.role = role_of(text_member(cj, "role", here), here);
    ch.source = endpoint_of(member(cj, "source", here), here);
    const auto& sinks = member(cj, "sinks", here);
    if (!sinks.is_array() || sinks.empty()) {
      malformed(here + ".sinks must be a non-empty array");
    }
    for (const auto& sj : sinks) ch.sinks.push_back(endpoint_of(sj, here));
    if (!all.count(ch.source.block)) {
      malformed(here + " source names unknown block '" + ch.source.block + "'");
    }
    for (const auto& s : ch.sinks) {
      if (!all.count(s.block)) {
        malformed(here + " sink names unknown block '" + s.block + "'");
      }
    }
    model.channels.push_back(std::move(ch));
  }
  if (const auto it = j.find("source_files"); it != j.end()) {
    if (!it->is_array()) malformed("model.source_files must be an array");
    for (const auto& f : *it) {
      if (!f.is_string()) malformed("model.source_files entries must be strings");
      model.source_files.push_back(f.get<std::string>());
    }
  }
  return model;
}

}  // namespace yw
