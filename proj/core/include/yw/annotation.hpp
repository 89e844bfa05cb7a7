#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "yw/comment_lexer.hpp"

namespace yw {

enum class AnnotationTag { Begin, End, In, Out, Param };

// Lower-case keyword without the '@' ("begin", "param", ...).
std::string_view tag_keyword(AnnotationTag tag);

// Case-insensitive; `word` excludes the leading '@'.
std::optional<AnnotationTag> parse_tag_keyword(std::string_view word);

struct Annotation {
  AnnotationTag tag;
  std::string value;  // empty only for an unnamed @end
  std::optional<std::string> description;
  std::string file;
  int line = 0;

  bool operator==(const Annotation&) const = default;
};

// [A-Za-z_][A-Za-z0-9_.]*
bool is_identifier(std::string_view s);

// Scans each comment left to right. A recognized `@tag` takes the next
// whitespace-separated token as its value (optional for @end); text up to
// the next recognized tag becomes the description. Unknown `@words` are
// plain text. Throws MissingValue or InvalidValue with file:line.
std::vector<Annotation> parse_annotations(
    std::span<const SourceComment> comments);

// Convenience: extract_comments followed by parse_annotations.
std::vector<Annotation> parse_source(std::string_view source,
                                     const CommentSyntax& syntax,
                                     std::string_view file);

// The extract-stage interchange document.
struct AnnotationDocument {
  std::string file;
  std::string language;
  std::vector<Annotation> annotations;

  bool operator==(const AnnotationDocument&) const = default;
};

// JSON: {"source": {"file", "language"}, "annotations": [{"tag", "value",
// "description", "line"}]}. A record whose file differs from source.file
// carries an extra "file" member.
std::string serialize_annotations(const AnnotationDocument& doc);

// Throws MalformedRecord with the offending line of `text`.
AnnotationDocument parse_annotation_file(std::string_view text);

}  // namespace yw
