#pragma once

// Language-aware comment extraction. The scanner tracks string literals in a
// single pass so that comment markers inside quotes are not mistaken for
// comments; it never tokenizes the host language beyond that.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace yw {

struct CommentSyntax {
  std::string language;
  std::vector<std::string> line_markers;
  std::vector<std::pair<std::string, std::string>> block_delimiters;

  // Characters that open and close string literals.
  std::string quote_chars = "'\"";
  bool backslash_escapes = true;
  // Python-style """...""" and '''...''' strings that may span lines.
  bool triple_quoted_strings = false;
  // MATLAB: an apostrophe directly after an operand is the transpose operator.
  bool apostrophe_transpose = false;
  // MATLAB: %{ and %} only delimit a block when alone on their line.
  bool block_delimiters_own_line = false;
};

// Built-in table: python, r, matlab, generic. Throws UnknownLanguage.
const CommentSyntax& syntax_for(std::string_view language);
std::vector<std::string> known_languages();

// Picks the syntax from `override` if given, otherwise from the file
// extension (.py, .r/.R, .m). Throws UnknownLanguage.
const CommentSyntax& detect_language(
    std::string_view path, std::optional<std::string_view> override = {});

struct SourceComment {
  std::string text;  // body with markers and surrounding blanks stripped
  std::string file;
  int start_line = 1;
  int end_line = 1;

  bool operator==(const SourceComment&) const = default;
};

enum class SegmentKind { Code, LineComment, BlockComment };

// A contiguous slice of the source. Concatenating the `text` of all
// segments returned by partition_source reproduces the input exactly.
struct Segment {
  SegmentKind kind;
  std::string_view text;
  int line;  // line on which the segment starts
};

std::vector<Segment> partition_source(std::string_view source,
                                      const CommentSyntax& syntax);

// Comments in document order. Block comments yield one entry per enclosed
// non-blank line. Throws UnterminatedBlockComment at the opening line.
std::vector<SourceComment> extract_comments(std::string_view source,
                                            const CommentSyntax& syntax,
                                            std::string_view file = {});

// The source with every comment character replaced by a space (newlines are
// kept), so line numbers and columns are unchanged.
std::string strip_comments(std::string_view source,
                           const CommentSyntax& syntax);

// Debug dump, one `FILE:LINE:TEXT` row per comment.
std::string format_comment_dump(const std::vector<SourceComment>& comments);

int count_lines(std::string_view source);

}  // namespace yw
