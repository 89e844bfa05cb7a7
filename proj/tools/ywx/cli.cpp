#include "ywx/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include <nlohmann/json.hpp>

#include "yw/error.hpp"
#include "yw/pipeline.hpp"
#include "yw/query.hpp"
#include "yw/render.hpp"
#include "yw/validate.hpp"

namespace ywx {
namespace {

using Json = nlohmann::ordered_json;

struct Options {
  std::vector<std::string> inputs;
  std::string language;
  std::string output;
  std::string view = "process";
  std::string rankdir = "LR";
  std::string focus;
  bool nested = false;
  bool de_emphasize_params = false;
  std::string name;
  std::string format;
  std::string manifest;
  std::string direction = "upstream";
  bool dot = false;
  bool dump_comments = false;
};

std::optional<std::string_view> language_of(const Options& o) {
  if (o.language.empty()) return std::nullopt;
  return o.language;
}

yw::LoadedInput load(const Options& o) {
  return yw::ingest_inputs(o.inputs, language_of(o));
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.output, std::ios::binary);
  if (!file) throw yw::Error(yw::ErrorCode::Io, "cannot write '" + o.output + "'");
  file << text;
}

std::string dump(const Json& j) {
  return j.dump(2, ' ', false, Json::error_handler_t::replace) + "\n";
}

bool text_format(const Options& o) { return o.format == "text"; }

std::string list_output(const Options& o, const std::vector<std::string>& items) {
  if (!text_format(o)) return dump(Json(items));
  std::string s;
  for (const auto& i : items) s += i + "\n";
  return s;
}

yw::StyleTable style_from_env() {
  const char* path = std::getenv("YWX_STYLE");
  if (!path || !*path) return {};
  try {
    return yw::StyleTable::parse(yw::read_file(path));
  } catch (const yw::Error& e) {
    throw yw::Error(e.code(), e.detail(), path, e.line());
  }
}

yw::RenderOptions render_options(const Options& o) {
  yw::RenderOptions r;
  const auto view = yw::parse_view(o.view);
  if (!view) throw yw::Error(yw::ErrorCode::UsageError, "unknown view '" + o.view + "'");
  const auto rankdir = yw::parse_rankdir(o.rankdir);
  if (!rankdir) {
    throw yw::Error(yw::ErrorCode::UsageError, "unknown rankdir '" + o.rankdir + "'");
  }
  r.view = *view;
  r.rankdir = *rankdir;
  if (!o.focus.empty()) r.focus = o.focus;
  r.nested = o.nested;
  r.de_emphasize_params = o.de_emphasize_params;
  return r;
}

void require_name(const Options& o, const char* what) {
  if (o.name.empty()) {
    throw yw::Error(yw::ErrorCode::UsageError, std::string("--name ") + what + " is required");
  }
}

int cmd_extract(const Options& o, std::ostream& out) {
  const auto input = load(o);
  if (input.kind != yw::InputKind::Script) {
    throw yw::Error(yw::ErrorCode::FormatMismatch,
                    "extract reads scripts, not " + std::string(to_string(input.kind)) +
                        " files",
                    input.files.front());
  }
  if (o.dump_comments) {
    std::string text;
    for (const auto& s : input.sources) {
      text += yw::format_comment_dump(yw::extract_comments(s.text, *s.syntax, s.file));
    }
    emit(o, text, out);
    return 0;
  }
  emit(o, yw::serialize_annotations(yw::document_of(input)), out);
  return 0;
}

int cmd_model(const Options& o, std::ostream& out) {
  const auto input = load(o);
  if (input.kind == yw::InputKind::Model) {
    throw yw::Error(yw::ErrorCode::FormatMismatch,
                    "model reads scripts or annotation files, not a model file",
                    input.files.front());
  }
  emit(o, yw::serialize_model(yw::model_of(input)), out);
  return 0;
}

int cmd_graph(const Options& o, std::ostream& out) {
  const auto options = render_options(o);
  const auto style = style_from_env();
  const auto model = yw::model_of(load(o));
  emit(o, yw::render(model, options, style), out);
  return 0;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const auto input = load(o);
  const auto diagnostics = input.model ? yw::validate_model(*input.model)
                                       : yw::validate_annotations(input.annotations,
                                                                  input.sources);
  emit(o,
       o.format == "json" ? yw::diagnostics_to_json(diagnostics)
                          : yw::format_diagnostics_text(diagnostics),
       out);
  return yw::has_errors(diagnostics) ? 1 : 0;
}

std::string query_blocks(const Options& o, const yw::WorkflowModel& m) {
  const auto blocks = yw::list_blocks(m);
  if (text_format(o)) {
    std::string s;
    for (const auto& b : blocks) {
      s += b.qualified_name;
      if (b.description) s += "\t" + *b.description;
      s += "\n";
    }
    return s;
  }
  Json arr = Json::array();
  for (const auto& b : blocks) {
    arr.push_back({{"qualified_name", b.qualified_name},
                   {"description", b.description ? Json(*b.description) : Json()}});
  }
  return dump(arr);
}

std::string query_derivation(const Options& o, const yw::WorkflowModel& m) {
  require_name(o, "OUTPUT");
  const auto d = yw::derivation(m, o.name);
  if (o.dot) {
    std::vector<std::string> blocks;
    for (const auto& s : d.steps) blocks.push_back(s.block);
    const auto sub = yw::induced_submodel(m, blocks);
    return yw::render(sub, render_options(o), style_from_env());
  }
  if (text_format(o)) {
    std::string s;
    for (const auto& step : d.steps) {
      s += step.block + ":";
      for (const auto& c : step.consumed) s += " " + c;
      s += " ->";
      for (const auto& p : step.produced) s += " " + p;
      s += "\n";
    }
    return s;
  }
  Json steps = Json::array();
  for (const auto& step : d.steps) {
    steps.push_back({{"block", step.block},
                     {"consumed", step.consumed},
                     {"produced", step.produced}});
  }
  return dump(Json{{"target", d.target}, {"steps", steps}});
}

std::string query_sources(const Options& o, const yw::WorkflowModel& m) {
  require_name(o, "BLOCK");
  const auto sources = yw::step_input_sources(m, o.name);
  if (text_format(o)) {
    std::string s;
    for (const auto& src : sources) {
      s += src.port + "\t" + std::string(to_string(src.origin));
      if (!src.from.empty()) s += "\t" + src.from;
      s += "\n";
    }
    return s;
  }
  Json arr = Json::array();
  for (const auto& src : sources) {
    arr.push_back({{"port", src.port},
                   {"role", std::string(to_string(src.role))},
                   {"origin", std::string(to_string(src.origin))},
                   {"from", src.from.empty() ? Json() : Json(src.from)},
                   {"line", src.line}});
  }
  return dump(arr);
}

std::string query_lineage(const Options& o, const yw::WorkflowModel& m) {
  require_name(o, "PORT_OR_FILE");
  if (o.manifest.empty()) {
    throw yw::Error(yw::ErrorCode::UsageError, "--manifest FILE is required");
  }
  yw::RunManifest manifest;
  try {
    manifest = yw::parse_manifest(yw::read_file(o.manifest));
  } catch (const yw::Error& e) {
    if (e.code() == yw::ErrorCode::Io) throw;
    throw yw::Error(e.code(), e.detail(), o.manifest, e.line());
  }
  yw::LineageDirection dir;
  if (o.direction == "upstream") {
    dir = yw::LineageDirection::Upstream;
  } else if (o.direction == "downstream") {
    dir = yw::LineageDirection::Downstream;
  } else {
    throw yw::Error(yw::ErrorCode::UsageError,
                    "unknown direction '" + o.direction + "'");
  }
  const auto files = yw::infer_file_lineage(m, manifest, dir, o.name);
  if (text_format(o)) {
    std::string s;
    for (const auto& f : files) s += f.path + "\t" + f.data_name + "\n";
    return s;
  }
  Json arr = Json::array();
  for (const auto& f : files) {
    arr.push_back({{"path", f.path},
                   {"data", f.data_name},
                   {"role", std::string(to_string(f.role))}});
  }
  return dump(arr);
}

using QueryFn = std::function<std::string(const Options&, const yw::WorkflowModel&)>;

QueryFn list_query(
    const char* what,
    std::vector<std::string> (*fn)(const yw::WorkflowModel&, std::string_view)) {
  return [what, fn](const Options& o, const yw::WorkflowModel& m) {
    require_name(o, what);
    return list_output(o, fn(m, o.name));
  };
}

struct QuerySpec {
  const char* name;
  const char* help;
  QueryFn fn;
};

std::vector<QuerySpec> query_specs() {
  return {
      {"blocks", "List every block in document order", query_blocks},
      {"nested", "Blocks nested inside --name BLOCK",
       list_query("BLOCK", yw::nested_blocks)},
      {"containers", "Blocks containing --name BLOCK, innermost first",
       list_query("BLOCK", yw::containing_blocks)},
      {"downstream", "Programs downstream of --name BLOCK",
       list_query("BLOCK", yw::downstream_blocks)},
      {"affected-by", "Programs affected by script input --name INPUT",
       list_query("INPUT", yw::blocks_affected_by_input)},
      {"upstream-inputs", "Script inputs that --name DATA depends on",
       list_query("DATA", yw::upstream_inputs)},
      {"deriving-blocks", "Programs that contribute to --name DATA",
       list_query("DATA", yw::deriving_blocks)},
      {"derivation", "Ordered steps deriving output --name OUTPUT", query_derivation},
      {"sources", "Where each input of --name BLOCK comes from", query_sources},
      {"lineage", "Files related to --name PORT_OR_FILE under --manifest",
       query_lineage},
  };
}

void add_inputs(CLI::App* app, Options& o) {
  app->add_option("inputs", o.inputs, "Scripts, annotation files or a model file")
      ->required();
  app->add_option("-l,--language", o.language, "Script language (python, r, matlab, generic)");
  app->add_option("-o,--output", o.output, "Write to FILE instead of standard output");
}

void add_render(CLI::App* app, Options& o) {
  app->add_option("--view", o.view, "process, data or combined")
      ->check(CLI::IsMember({"process", "data", "combined"}));
  app->add_option("--rankdir", o.rankdir, "LR or TB")->check(CLI::IsMember({"LR", "TB"}));
  app->add_option("--focus", o.focus, "Qualified name of the workflow to draw");
  app->add_flag("--nested", o.nested, "Draw sub-workflows as clusters");
  app->add_flag("--de-emphasize-params", o.de_emphasize_params,
                "Draw parameter flows muted");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recover, draw, query and check workflow annotations in scripts", "ywx"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ywx 0.3.0");

  Options o;
  std::function<int()> action;

  auto* extract = app.add_subcommand("extract", "Annotations of scripts as JSON");
  add_inputs(extract, o);
  extract->add_flag("--dump-comments", o.dump_comments, "Print FILE:LINE:TEXT per comment");
  extract->callback([&] { action = [&] { return cmd_extract(o, out); }; });

  auto* model = app.add_subcommand("model", "Workflow model as JSON");
  add_inputs(model, o);
  model->callback([&] { action = [&] { return cmd_model(o, out); }; });

  auto* graph = app.add_subcommand("graph", "Graphviz DOT rendering");
  add_inputs(graph, o);
  add_render(graph, o);
  graph->callback([&] { action = [&] { return cmd_graph(o, out); }; });

  auto* query = app.add_subcommand("query", "Structure and provenance queries");
  query->require_subcommand(1);
  const auto specs = query_specs();
  for (const auto& spec : specs) {
    auto* sub = query->add_subcommand(spec.name, spec.help);
    add_inputs(sub, o);
    sub->add_option("--name", o.name, "Block, data or file name");
    sub->add_option("--format", o.format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    if (std::string_view(spec.name) == "derivation") {
      sub->add_flag("--dot", o.dot, "Render the derivation as DOT");
      add_render(sub, o);
    }
    if (std::string_view(spec.name) == "lineage") {
      sub->add_option("--manifest", o.manifest, "Run manifest JSON");
      sub->add_option("--direction", o.direction, "upstream or downstream")
          ->check(CLI::IsMember({"upstream", "downstream"}));
    }
    const auto fn = spec.fn;
    sub->callback([&, fn] {
      action = [&, fn] {
        emit(o, fn(o, yw::model_of(load(o))), out);
        return 0;
      };
    });
  }
  auto* invokes = query->add_subcommand("invokes", "Blocks invoking a function");
  invokes->allow_extras();
  invokes->callback([&] {
    action = [&] {
      err << "unsupported: requires function annotations\n";
      return 2;
    };
  });

  auto* validate = app.add_subcommand("validate", "Check annotations against the code");
  add_inputs(validate, o);
  validate->add_option("--format", o.format, "text or json")
      ->check(CLI::IsMember({"json", "text"}));
  validate->callback([&] { action = [&] { return cmd_validate(o, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    return action ? action() : 2;
  } catch (const yw::Error& e) {
    err << "ywx: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace ywx
