#include "yw/pipeline.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "yw/error.hpp"

namespace yw {
namespace {

bool has_json_extension(std::string_view path) {
  return path.size() >= 5 && path.substr(path.size() - 5) == ".json";
}

[[noreturn]] void relocate(const Error& e, const std::string& file) {
  throw Error(e.code(), e.detail(), e.file().empty() ? file : e.file(), e.line());
}

}  // namespace

std::string_view to_string(InputKind k) {
  switch (k) {
    case InputKind::Script: return "script";
    case InputKind::Annotations: return "annotations";
    case InputKind::Model: return "model";
  }
  return "script";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
  return ss.str();
}

InputKind sniff_input(std::string_view path, std::string_view text) {
  if (!has_json_extension(path)) return InputKind::Script;
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_object()) {
    if (j.contains("annotations")) return InputKind::Annotations;
    if (j.contains("root")) return InputKind::Model;
  }
  throw Error(ErrorCode::FormatMismatch,
              "JSON input is neither an annotation file nor a model file",
              std::string(path));
}

LoadedInput ingest_inputs(std::span<const std::string> paths,
                          std::optional<std::string_view> language) {
  if (paths.empty()) throw Error(ErrorCode::UsageError, "no input files");
  LoadedInput out;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& path = paths[i];
    auto text = read_file(path);
    const auto kind = sniff_input(path, text);
    if (i == 0) {
      out.kind = kind;
    } else if (kind != out.kind || kind == InputKind::Model) {
      throw Error(ErrorCode::FormatMismatch,
                  "cannot combine " + std::string(to_string(out.kind)) + " input '" +
                      paths.front() + "' with " + std::string(to_string(kind)) +
                      " input",
                  path);
    }
    out.files.push_back(path);
    try {
      switch (kind) {
        case InputKind::Script: {
          const auto& syntax = detect_language(path, language);
          if (i == 0) out.language = syntax.language;
          auto anns = parse_source(text, syntax, path);
          out.annotations.insert(out.annotations.end(),
                                 std::make_move_iterator(anns.begin()),
                                 std::make_move_iterator(anns.end()));
          out.sources.push_back({path, std::move(text), &syntax});
          break;
        }
        case InputKind::Annotations: {
          auto doc = parse_annotation_file(text);
          if (i == 0) out.language = doc.language;
          out.annotations.insert(out.annotations.end(),
                                 std::make_move_iterator(doc.annotations.begin()),
                                 std::make_move_iterator(doc.annotations.end()));
          break;
        }
        case InputKind::Model:
          out.model = parse_model(text);
          break;
      }
    } catch (const Error& e) {
      relocate(e, path);
    }
  }
  return out;
}

WorkflowModel model_of(const LoadedInput& input, WriterPolicy policy) {
  if (input.model) return *input.model;
  return build_model(input.annotations, policy);
}

AnnotationDocument document_of(const LoadedInput& input) {
  if (input.kind == InputKind::Model) {
    throw Error(ErrorCode::FormatMismatch,
                "a model file holds no annotations", input.files.front());
  }
  AnnotationDocument doc;
  doc.file = input.annotations.empty() ? input.files.front()
                                       : input.annotations.front().file;
  doc.language = input.language;
  doc.annotations = input.annotations;
  return doc;
}

}  // namespace yw
