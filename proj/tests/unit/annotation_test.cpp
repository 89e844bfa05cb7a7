#include <gtest/gtest.h>

#include "yw/annotation.hpp"
#include "yw/error.hpp"

namespace {

using yw::Annotation;
using yw::AnnotationTag;

std::vector<Annotation> parse(const std::string& src, const std::string& lang = "python") {
  return yw::parse_source(src, yw::syntax_for(lang), "s");
}

TEST(Annotation, TagsValuesAndDescriptions) {
  const auto a = parse("# @begin Normalize quantile normalization\n# @in raw\n# @end Normalize\n");
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[0].tag, AnnotationTag::Begin);
  EXPECT_EQ(a[0].value, "Normalize");
  EXPECT_EQ(a[0].description, "quantile normalization");
  EXPECT_EQ(a[1].tag, AnnotationTag::In);
  EXPECT_FALSE(a[1].description.has_value());
  EXPECT_EQ(a[2].line, 3);
}

TEST(Annotation, TagsAreCaseInsensitive) {
  const auto a = parse("# @BEGIN x\n# @Param p\n# @OUT y\n");
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[1].tag, AnnotationTag::Param);
  EXPECT_EQ(a[2].tag, AnnotationTag::Out);
}

TEST(Annotation, SeveralTagsInOneComment) {
  const auto a = parse("# @in a first @in b @out c result file\n");
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[0].description, "first");
  EXPECT_FALSE(a[1].description.has_value());
  EXPECT_EQ(a[2].value, "c");
  EXPECT_EQ(a[2].description, "result file");
}

TEST(Annotation, UnknownWordsAreText) {
  const auto a = parse("# contact @author or @in x see @uri\n");
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].value, "x");
  EXPECT_EQ(a[0].description, "see @uri");
}

TEST(Annotation, EndNameIsOptional) {
  const auto a = parse("# @end\n# @end @begin b\n");
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[0].value, "");
  EXPECT_EQ(a[1].value, "");
  EXPECT_EQ(a[2].value, "b");
}

TEST(Annotation, DottedNamesAreValues) {
  const auto a = parse("% @out NEE.nc\n", "matlab");
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].value, "NEE.nc");
}

TEST(Annotation, MissingValue) {
  try {
    parse("\n# @in\n");
    FAIL();
  } catch (const yw::Error& e) {
    EXPECT_EQ(e.code(), yw::ErrorCode::MissingValue);
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.file(), "s");
  }
  EXPECT_THROW(parse("# @begin @in x\n"), yw::Error);
}

TEST(Annotation, InvalidValue) {
  try {
    parse("# @out 3d-plot\n");
    FAIL();
  } catch (const yw::Error& e) {
    EXPECT_EQ(e.code(), yw::ErrorCode::InvalidValue);
  }
}

TEST(Annotation, Identifier) {
  EXPECT_TRUE(yw::is_identifier("_a.b9"));
  EXPECT_FALSE(yw::is_identifier(""));
  EXPECT_FALSE(yw::is_identifier("9a"));
  EXPECT_FALSE(yw::is_identifier("a-b"));
}

TEST(Annotation, SerializationShape) {
  yw::AnnotationDocument doc{"w.py", "python",
                             {{AnnotationTag::Begin, "w", "desc", "w.py", 1},
                              {AnnotationTag::End, "", std::nullopt, "x.py", 4}}};
  const auto text = yw::serialize_annotations(doc);
  EXPECT_NE(text.find("\"source\": {\n    \"file\": \"w.py\""), std::string::npos);
  EXPECT_NE(text.find("\"description\": null"), std::string::npos);
  EXPECT_NE(text.find("\"file\": \"x.py\""), std::string::npos);
  EXPECT_EQ(yw::parse_annotation_file(text), doc);
}

TEST(Annotation, MalformedRecordCarriesItsLine) {
  const std::string text = R"({
  "source": {"file": "a", "language": "r"},
  "annotations": [
    {"tag": "begin", "value": "a", "description": null, "line": 1},
    {"tag": "bogus", "value": "a", "description": null, "line": 2}
  ]
})";
  try {
    yw::parse_annotation_file(text);
    FAIL();
  } catch (const yw::Error& e) {
    EXPECT_EQ(e.code(), yw::ErrorCode::MalformedRecord);
    EXPECT_EQ(e.line(), 5);
  }
}

TEST(Annotation, MalformedDocuments) {
  for (const std::string text :
       {"[]", "{", R"({"annotations": []})",
        R"({"source": {"file": "a", "language": "r"}, "annotations": [{"tag": "in", "value": "", "description": null, "line": 1}]})",
        R"({"source": {"file": "a", "language": "r"}, "annotations": [{"tag": "in", "value": "x", "line": 1}]})",
        R"({"source": {"file": "a", "language": "r"}, "annotations": [{"tag": "in", "value": "x", "description": 3, "line": 1}]})",
        R"({"source": {"file": "a", "language": "r"}, "annotations": [{"tag": "in", "value": "x", "description": null, "line": 0}]})"}) {
    EXPECT_THROW(yw::parse_annotation_file(text), yw::Error) << text;
  }
}

}  // namespace
