#pragma once

// Loading pipeline inputs: scripts, annotation files or model files, each
// recognised from its extension and content.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "yw/annotation.hpp"
#include "yw/model.hpp"
#include "yw/validate.hpp"

namespace yw {

enum class InputKind { Script, Annotations, Model };
std::string_view to_string(InputKind k);

// Throws Io.
std::string read_file(const std::string& path);

// `.json` files holding "annotations" are annotation files, holding "root"
// are model files; anything else is a script. Throws FormatMismatch for
// JSON that is neither.
InputKind sniff_input(std::string_view path, std::string_view text);

struct LoadedInput {
  InputKind kind = InputKind::Script;
  std::string language;  // of the first input
  std::vector<Annotation> annotations;
  std::vector<SourceText> sources;    // scripts only
  std::optional<WorkflowModel> model;  // model files only
  std::vector<std::string> files;
};

// Reads every path in argument order. All inputs must be of one kind and a
// model file must come alone; otherwise FormatMismatch. Annotation streams
// are concatenated, so block stacks may not span files.
LoadedInput ingest_inputs(std::span<const std::string> paths,
                          std::optional<std::string_view> language = {});

// The model for any input kind; scripts and annotation files are built with
// `policy`.
WorkflowModel model_of(const LoadedInput& input,
                       WriterPolicy policy = WriterPolicy::Strict);

// Annotations of a script or annotation-file input as one document.
AnnotationDocument document_of(const LoadedInput& input);

}  // namespace yw
