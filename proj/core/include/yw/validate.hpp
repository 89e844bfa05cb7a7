#pragma once

// Consistency checks between annotations, the model they describe and the
// code they annotate.
//
// Diagnostic codes:
//   YW001 error    @end without an open block
//   YW002 error    @end name does not match the open block
//   YW003 error    block never closed (or still open at a file boundary)
//   YW004 error    port annotation outside any block
//   YW005 error    two blocks with the same qualified name
//   YW006 error    block declares the same port twice
//   YW007 error    no blocks at all
//   YW010 warning  port name not found in the block's code
//   YW020 error    script output not traceable to script inputs
//   YW030 error    several writers of one name in a workflow
//   YW031 warning  value written but never read
//   YW032 warning  channel mixes data and parameter ports
//   YW040-YW049    reserved for function-name checks

#include <span>
#include <string>
#include <vector>

#include "yw/annotation.hpp"
#include "yw/comment_lexer.hpp"
#include "yw/model.hpp"

namespace yw {

enum class Severity { Error, Warning };

enum class DiagCode {
  UnbalancedEnd = 1,
  MismatchedEndName = 2,
  UnclosedBlock = 3,
  PortOutsideBlock = 4,
  DuplicateBlock = 5,
  DuplicatePort = 6,
  NoBlocks = 7,
  PortNotInCode = 10,
  BrokenChain = 20,
  AmbiguousWriter = 30,
  UnreadValue = 31,
  MixedRoles = 32,
};

std::string code_id(DiagCode code);  // "YW001"
std::string_view to_string(Severity s);
Severity severity_of(DiagCode code);

struct Diagnostic {
  Severity severity = Severity::Error;
  DiagCode code = DiagCode::UnbalancedEnd;
  std::string message;
  std::string file;
  int line = 0;

  bool operator==(const Diagnostic&) const = default;
};

struct SourceText {
  std::string file;
  std::string text;
  const CommentSyntax* syntax = nullptr;
};

// Bracketing errors, collected instead of thrown. When this returns no
// errors, build_blocks succeeds on the same input.
std::vector<Diagnostic> check_structure(std::span<const Annotation> annotations);

std::vector<Diagnostic> check_port_names_in_code(const WorkflowModel& model,
                                                 std::span<const SourceText> sources);

std::vector<Diagnostic> check_dependency_chains(const WorkflowModel& model);

std::vector<Diagnostic> check_channel_sanity(const WorkflowModel& model);

// Structure first; model-level checks only run on a well-formed block tree.
// `sources` may be empty (annotation or model input), which skips YW010.
std::vector<Diagnostic> validate_annotations(std::span<const Annotation> annotations,
                                             std::span<const SourceText> sources);
std::vector<Diagnostic> validate_model(const WorkflowModel& model);

// Stable sort by (file, line, code).
void sort_diagnostics(std::vector<Diagnostic>& diagnostics);
bool has_errors(std::span<const Diagnostic> diagnostics);

// One `FILE:LINE: severity CODE message` row per diagnostic.
std::string format_diagnostics_text(std::span<const Diagnostic> diagnostics);
std::string diagnostics_to_json(std::span<const Diagnostic> diagnostics);

}  // namespace yw
