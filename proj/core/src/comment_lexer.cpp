#include "yw/comment_lexer.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>

#include "strings.hpp"
#include "yw/error.hpp"

namespace yw {
namespace {

const std::vector<CommentSyntax>& builtin_syntaxes() {
  static const std::vector<CommentSyntax> table = [] {
    std::vector<CommentSyntax> t;

    CommentSyntax python;
    python.language = "python";
    python.line_markers = {"#"};
    python.triple_quoted_strings = true;
    t.push_back(python);

    CommentSyntax r;
    r.language = "r";
    r.line_markers = {"#"};
    t.push_back(r);

    CommentSyntax matlab;
    matlab.language = "matlab";
    matlab.line_markers = {"%"};
    matlab.block_delimiters = {{"%{", "%}"}};
    matlab.backslash_escapes = false;
    matlab.apostrophe_transpose = true;
    matlab.block_delimiters_own_line = true;
    t.push_back(matlab);

    CommentSyntax generic;
    generic.language = "generic";
    generic.line_markers = {"#"};
    t.push_back(generic);
    return t;
  }();
  return table;
}

bool blank_between(std::string_view s, std::size_t from, std::size_t to) {
  for (std::size_t i = from; i < to; ++i) {
    if (s[i] != ' ' && s[i] != '\t' && s[i] != '\r') return false;
  }
  return true;
}

class Scanner {
 public:
  Scanner(std::string_view src, const CommentSyntax& syntax)
      : src_(src), syntax_(syntax) {}

  std::vector<Segment> run() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
        last_ = '\n';
        continue;
      }
      if (try_block_comment() || try_line_comment()) continue;
      if (syntax_.quote_chars.find(c) != std::string::npos &&
          !is_transpose(c)) {
        skip_string();
        continue;
      }
      last_ = c;
      ++pos_;
    }
    flush_code(src_.size());
    return std::move(out_);
  }

 private:
  void flush_code(std::size_t end) {
    if (end > code_start_) {
      out_.push_back({SegmentKind::Code,
                      src_.substr(code_start_, end - code_start_), code_line_});
    }
  }

  void emit_comment(SegmentKind kind, std::size_t end) {
    flush_code(pos_);
    const auto text = src_.substr(pos_, end - pos_);
    out_.push_back({kind, text, line_});
    line_ += static_cast<int>(std::count(text.begin(), text.end(), '\n'));
    pos_ = end;
    code_start_ = end;
    code_line_ = line_;
    last_ = ' ';
  }

  bool try_block_comment() {
    for (const auto& [open, close] : syntax_.block_delimiters) {
      if (src_.compare(pos_, open.size(), open) != 0) continue;
      std::size_t end = std::string_view::npos;
      if (syntax_.block_delimiters_own_line) {
        std::size_t from = 0;
        if (pos_ > 0) {
          const auto nl = src_.rfind('\n', pos_ - 1);
          if (nl != std::string_view::npos) from = nl + 1;
        }
        auto eol = src_.find('\n', pos_);
        if (eol == std::string_view::npos) eol = src_.size();
        if (!blank_between(src_, from, pos_) ||
            !blank_between(src_, pos_ + open.size(), eol)) {
          continue;
        }
        end = find_own_line_close(eol, close);
      } else {
        const auto at = src_.find(close, pos_ + open.size());
        if (at != std::string_view::npos) end = at + close.size();
      }
      if (end == std::string_view::npos) {
        throw Error(ErrorCode::UnterminatedBlockComment,
                    "block comment opened with '" + open + "' is never closed",
                    {}, line_);
      }
      emit_comment(SegmentKind::BlockComment, end);
      return true;
    }
    return false;
  }

  // Searches the lines after `eol` for one holding only `close`; returns the
  // offset just past the delimiter.
  std::size_t find_own_line_close(std::size_t eol,
                                  const std::string& close) const {
    std::size_t begin = eol;
    while (begin < src_.size()) {
      ++begin;  // skip '\n'
      auto next = src_.find('\n', begin);
      if (next == std::string_view::npos) next = src_.size();
      const auto line = detail::trim(src_.substr(begin, next - begin));
      if (line == close) {
        return static_cast<std::size_t>(line.data() - src_.data()) +
               close.size();
      }
      begin = next;
    }
    return std::string_view::npos;
  }

  bool try_line_comment() {
    for (const auto& marker : syntax_.line_markers) {
      if (src_.compare(pos_, marker.size(), marker) != 0) continue;
      auto end = src_.find('\n', pos_);
      if (end == std::string_view::npos) end = src_.size();
      emit_comment(SegmentKind::LineComment, end);
      return true;
    }
    return false;
  }

  bool is_transpose(char c) const {
    if (!syntax_.apostrophe_transpose || c != '\'') return false;
    return std::isalnum(static_cast<unsigned char>(last_)) || last_ == '_' ||
           last_ == ')' || last_ == ']' || last_ == '}' || last_ == '.' ||
           last_ == '\'';
  }

  // Single-line strings end at the closing quote or at end of line;
  // triple-quoted strings may span lines.
  void skip_string() {
    const char q = src_[pos_];
    const std::string triple(3, q);
    const bool is_triple = syntax_.triple_quoted_strings &&
                           src_.compare(pos_, 3, triple) == 0;
    pos_ += is_triple ? 3 : 1;
    while (pos_ < src_.size()) {
      const char ch = src_[pos_];
      if (ch == '\n') {
        ++line_;
        ++pos_;
        if (!is_triple) {
          last_ = '\n';
          return;
        }
        continue;
      }
      if (syntax_.backslash_escapes && ch == '\\') {
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '\n') ++line_;
        pos_ += 2;
        continue;
      }
      if (is_triple) {
        if (src_.compare(pos_, 3, triple) == 0) {
          pos_ += 3;
          last_ = q;
          return;
        }
        ++pos_;
        continue;
      }
      if (ch == q) {
        // MATLAB-style doubled quote escape.
        if (!syntax_.backslash_escapes && pos_ + 1 < src_.size() &&
            src_[pos_ + 1] == q) {
          pos_ += 2;
          continue;
        }
        ++pos_;
        last_ = q;
        return;
      }
      ++pos_;
    }
    pos_ = std::min(pos_, src_.size());
  }

  std::string_view src_;
  const CommentSyntax& syntax_;
  std::vector<Segment> out_;
  std::size_t pos_ = 0;
  std::size_t code_start_ = 0;
  int line_ = 1;
  int code_line_ = 1;
  char last_ = '\n';
};

std::string_view strip_markers(std::string_view body,
                               const CommentSyntax& syntax) {
  body = detail::trim(body);
  bool stripped = true;
  while (stripped && !body.empty()) {
    stripped = false;
    for (const auto& marker : syntax.line_markers) {
      if (body.substr(0, marker.size()) == marker) {
        body.remove_prefix(marker.size());
        stripped = true;
      }
    }
  }
  return detail::trim(body);
}

}  // namespace

const CommentSyntax& syntax_for(std::string_view language) {
  const auto wanted = detail::to_lower(language);
  for (const auto& s : builtin_syntaxes()) {
    if (s.language == wanted) return s;
  }
  throw Error(ErrorCode::UnknownLanguage,
              "no comment syntax for language '" + std::string(language) +
                  "'");
}

std::vector<std::string> known_languages() {
  std::vector<std::string> names;
  for (const auto& s : builtin_syntaxes()) names.push_back(s.language);
  return names;
}

const CommentSyntax& detect_language(std::string_view path,
                                     std::optional<std::string_view> override) {
  if (override) return syntax_for(*override);
  const auto ext = std::filesystem::path(std::string(path)).extension().string();
  if (ext == ".py") return syntax_for("python");
  if (ext == ".r" || ext == ".R") return syntax_for("r");
  if (ext == ".m") return syntax_for("matlab");
  throw Error(ErrorCode::UnknownLanguage,
              "cannot infer language from extension '" + ext +
                  "'; pass a language explicitly",
              std::string(path));
}

std::vector<Segment> partition_source(std::string_view source,
                                      const CommentSyntax& syntax) {
  return Scanner(source, syntax).run();
}

std::vector<SourceComment> extract_comments(std::string_view source,
                                            const CommentSyntax& syntax,
                                            std::string_view file) {
  std::vector<Segment> segments;
  try {
    segments = partition_source(source, syntax);
  } catch (const Error& e) {
    throw Error(e.code(), e.detail(), std::string(file), e.line());
  }

  std::vector<SourceComment> out;
  for (const auto& seg : segments) {
    if (seg.kind == SegmentKind::LineComment) {
      const auto body = strip_markers(seg.text, syntax);
      if (!body.empty()) {
        out.push_back({std::string(body), std::string(file), seg.line, seg.line});
      }
    } else if (seg.kind == SegmentKind::BlockComment) {
      std::string_view inner = seg.text;
      for (const auto& [open, close] : syntax.block_delimiters) {
        if (inner.substr(0, open.size()) == open &&
            inner.size() >= open.size() + close.size() &&
            inner.substr(inner.size() - close.size()) == close) {
          inner = inner.substr(open.size(),
                               inner.size() - open.size() - close.size());
          break;
        }
      }
      int line = seg.line;
      for (const auto piece : detail::split_lines(inner)) {
        const auto body = strip_markers(piece, syntax);
        if (!body.empty()) {
          out.push_back({std::string(body), std::string(file), line, line});
        }
        ++line;
      }
    }
  }
  return out;
}

std::string strip_comments(std::string_view source,
                           const CommentSyntax& syntax) {
  std::string out;
  out.reserve(source.size());
  for (const auto& seg : partition_source(source, syntax)) {
    if (seg.kind == SegmentKind::Code) {
      out.append(seg.text);
    } else {
      for (const char c : seg.text) out.push_back(c == '\n' ? '\n' : ' ');
    }
  }
  return out;
}

std::string format_comment_dump(const std::vector<SourceComment>& comments) {
  std::string out;
  for (const auto& c : comments) {
    out += c.file + ':' + std::to_string(c.start_line) + ':' + c.text + '\n';
  }
  return out;
}

int count_lines(std::string_view source) {
  if (source.empty()) return 0;
  const auto newlines = std::count(source.begin(), source.end(), '\n');
  return static_cast<int>(newlines) + (source.back() == '\n' ? 0 : 1);
}

}  // namespace yw
