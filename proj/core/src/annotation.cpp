#include "yw/annotation.hpp"

#include <array>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "strings.hpp"
#include "yw/error.hpp"

namespace yw {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::array<std::pair<AnnotationTag, std::string_view>, 5> kTags{{
    {AnnotationTag::Begin, "begin"},
    {AnnotationTag::End, "end"},
    {AnnotationTag::In, "in"},
    {AnnotationTag::Out, "out"},
    {AnnotationTag::Param, "param"},
}};

struct Token {
  std::string_view text;
  std::size_t begin;
  std::size_t end;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && detail::is_space(s[i])) ++i;
    if (i >= s.size()) break;
    const auto start = i;
    while (i < s.size() && !detail::is_space(s[i])) ++i;
    tokens.push_back({s.substr(start, i - start), start, i});
  }
  return tokens;
}

std::optional<AnnotationTag> tag_of(const Token& t) {
  if (t.text.size() < 2 || t.text.front() != '@') return std::nullopt;
  return parse_tag_keyword(t.text.substr(1));
}

[[noreturn]] void malformed(int line, const std::string& what) {
  throw Error(ErrorCode::MalformedRecord, what, {}, line);
}

}  // namespace

std::string_view tag_keyword(AnnotationTag tag) {
  for (const auto& [t, name] : kTags) {
    if (t == tag) return name;
  }
  return "?";
}

std::optional<AnnotationTag> parse_tag_keyword(std::string_view word) {
  const auto lower = detail::to_lower(word);
  for (const auto& [t, name] : kTags) {
    if (lower == name) return t;
  }
  return std::nullopt;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  const auto first = static_cast<unsigned char>(s.front());
  if (!std::isalpha(first) && first != '_') return false;
  for (const char c : s.substr(1)) {
    if (!detail::is_word_char(c) && c != '.') return false;
  }
  return true;
}

std::vector<Annotation> parse_annotations(
    std::span<const SourceComment> comments) {
  std::vector<Annotation> out;
  for (const auto& comment : comments) {
    const std::string_view text = comment.text;
    const auto tokens = tokenize(text);
    std::size_t i = 0;
    while (i < tokens.size()) {
      const auto tag = tag_of(tokens[i]);
      if (!tag) {
        ++i;
        continue;
      }
      Annotation a{*tag, {}, std::nullopt, comment.file, comment.start_line};
      const bool needs_value = *tag != AnnotationTag::End;
      std::size_t desc_from = tokens[i].end;
      ++i;
      if (i < tokens.size() && !tag_of(tokens[i])) {
        if (is_identifier(tokens[i].text)) {
          a.value = std::string(tokens[i].text);
          desc_from = tokens[i].end;
          ++i;
        } else if (needs_value) {
          throw Error(ErrorCode::InvalidValue,
                      "'@" + std::string(tag_keyword(*tag)) + "' value '" +
                          std::string(tokens[i].text) +
                          "' is not a valid name",
                      comment.file, comment.start_line);
        }
      } else if (needs_value) {
        throw Error(ErrorCode::MissingValue,
                    "'@" + std::string(tag_keyword(*tag)) +
                        "' must be followed by a name",
                    comment.file, comment.start_line);
      }
      std::size_t j = i;
      while (j < tokens.size() && !tag_of(tokens[j])) ++j;
      const auto desc_to = j < tokens.size() ? tokens[j].begin : text.size();
      const auto desc = detail::trim(text.substr(desc_from, desc_to - desc_from));
      if (!desc.empty()) a.description = std::string(desc);
      out.push_back(std::move(a));
      i = j;
    }
  }
  return out;
}

std::vector<Annotation> parse_source(std::string_view source,
                                     const CommentSyntax& syntax,
                                     std::string_view file) {
  const auto comments = extract_comments(source, syntax, file);
  return parse_annotations(comments);
}

std::string serialize_annotations(const AnnotationDocument& doc) {
  Json records = Json::array();
  for (const auto& a : doc.annotations) {
    Json r;
    r["tag"] = tag_keyword(a.tag);
    r["value"] = a.value;
    r["description"] =
        a.description ? Json(*a.description) : Json(nullptr);
    r["line"] = a.line;
    if (a.file != doc.file) r["file"] = a.file;
    records.push_back(std::move(r));
  }
  Json root;
  root["source"] = {{"file", doc.file}, {"language", doc.language}};
  root["annotations"] = std::move(records);
  return root.dump(2, ' ', false, Json::error_handler_t::replace) + "\n";
}

AnnotationDocument parse_annotation_file(std::string_view text) {
  const Json root = detail::parse_json(text, ErrorCode::MalformedRecord);
  if (!root.is_object()) malformed(1, "document must be a JSON object");

  AnnotationDocument doc;
  const auto source = root.find("source");
  if (source == root.end() || !source->is_object()) {
    malformed(1, "missing 'source' object");
  }
  doc.file = detail::require_string(*source, "file", ErrorCode::MalformedRecord, 1);
  doc.language =
      detail::require_string(*source, "language", ErrorCode::MalformedRecord, 1);

  const auto records = root.find("annotations");
  if (records == root.end() || !records->is_array()) {
    malformed(1, "missing 'annotations' array");
  }
  const auto lines = detail::array_element_lines(text);
  for (std::size_t i = 0; i < records->size(); ++i) {
    const int at = i < lines.size() ? lines[i] : 1;
    const auto& r = (*records)[i];
    if (!r.is_object()) malformed(at, "annotation record must be an object");

    const auto tag_name =
        detail::require_string(r, "tag", ErrorCode::MalformedRecord, at);
    const auto tag = parse_tag_keyword(tag_name);
    if (!tag) malformed(at, "unknown tag '" + tag_name + "'");

    Annotation a;
    a.tag = *tag;
    a.value = detail::require_string(r, "value", ErrorCode::MalformedRecord, at);
    if (a.value.empty() ? *tag != AnnotationTag::End : !is_identifier(a.value)) {
      malformed(at, "invalid value '" + a.value + "'");
    }
    const auto desc = r.find("description");
    if (desc == r.end()) malformed(at, "missing 'description'");
    if (desc->is_string()) {
      a.description = desc->get<std::string>();
    } else if (!desc->is_null()) {
      malformed(at, "'description' must be a string or null");
    }
    const auto line = r.find("line");
    if (line == r.end() || !line->is_number_integer() || line->get<long long>() < 1) {
      malformed(at, "'line' must be a positive integer");
    }
    a.line = line->get<int>();
    const auto file = r.find("file");
    if (file != r.end()) {
      if (!file->is_string()) malformed(at, "'file' must be a string");
      a.file = file->get<std::string>();
    } else {
      a.file = doc.file;
    }
    doc.annotations.push_back(std::move(a));
  }
  return doc;
}

}  // namespace yw
