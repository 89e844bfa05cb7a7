#include "dot_check.hpp"

#include <cctype>
#include <set>
#include <stdexcept>

namespace yw::testing {
namespace {

struct Token {
  enum Kind { Quoted, Word, Punct, Arrow, End } kind;
  std::string text;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '"') {
      std::string v;
      ++i;
      while (true) {
        if (i >= s.size()) throw std::runtime_error("unterminated string");
        if (s[i] == '\\' && i + 1 < s.size()) {
          v += s[i + 1] == 'n' ? '\n' : s[i + 1];
          i += 2;
        } else if (s[i] == '"') {
          ++i;
          break;
        } else if (s[i] == '\n') {
          throw std::runtime_error("newline inside string");
        } else {
          v += s[i++];
        }
      }
      out.push_back({Token::Quoted, v});
    } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      out.push_back({Token::Arrow, "->"});
      i += 2;
    } else if (std::string_view("{}[];=").find(c) != std::string_view::npos) {
      out.push_back({Token::Punct, std::string(1, c)});
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string w;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
        w += s[i++];
      }
      out.push_back({Token::Word, w});
    } else {
      throw std::runtime_error(std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::End, {}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : t_(std::move(tokens)) {}

  void graph(DotGraph& g) {
    expect_word("digraph");
    g.name = quoted();
    expect("{");
    body(g, "");
    if (peek().kind != Token::End) fail("content after closing brace");
  }

 private:
  void body(DotGraph& g, const std::string& cluster) {
    while (true) {
      const auto& tok = peek();
      if (tok.kind == Token::End) fail("missing closing brace");
      if (tok.kind == Token::Punct && tok.text == "}") {
        ++pos_;
        return;
      }
      if (tok.kind == Token::Word) {
        const auto word = tok.text;
        ++pos_;
        if (word == "subgraph") {
          const auto name = quoted();
          if (name.rfind("cluster_", 0) != 0) fail("subgraph is not a cluster: " + name);
          g.clusters.push_back(name);
          expect("{");
          body(g, name);
          continue;
        }
        if (word == "node" || word == "edge") {
          attrs();
          expect(";");
          continue;
        }
        expect("=");
        const auto value = quoted();
        expect(";");
        if (cluster.empty()) g.graph_attrs[word] = value;
        continue;
      }
      const auto id = quoted();
      if (peek().kind == Token::Arrow) {
        ++pos_;
        DotEdge e{id, quoted(), {}};
        if (!declared_.count(e.from)) fail("edge from undeclared node " + e.from);
        if (!declared_.count(e.to)) fail("edge to undeclared node " + e.to);
        if (peek().kind == Token::Punct && peek().text == "[") e.attrs = attrs();
        expect(";");
        g.edges.push_back(std::move(e));
        continue;
      }
      if (!declared_.insert(id).second) fail("node declared twice: " + id);
      DotNode n{id, {}, cluster};
      if (peek().kind == Token::Punct && peek().text == "[") n.attrs = attrs();
      expect(";");
      g.nodes.push_back(std::move(n));
    }
  }

  std::map<std::string, std::string> attrs() {
    std::map<std::string, std::string> out;
    expect("[");
    while (!(peek().kind == Token::Punct && peek().text == "]")) {
      if (peek().kind != Token::Word) fail("attribute name expected");
      const auto key = t_[pos_++].text;
      expect("=");
      out[key] = quoted();
    }
    ++pos_;
    return out;
  }

  const Token& peek() const { return t_[pos_]; }

  std::string quoted() {
    if (peek().kind != Token::Quoted) fail("quoted identifier expected, got '" + peek().text + "'");
    return t_[pos_++].text;
  }

  void expect(const std::string& punct) {
    if (peek().kind != Token::Punct || peek().text != punct) {
      fail("expected '" + punct + "', got '" + peek().text + "'");
    }
    ++pos_;
  }

  void expect_word(const std::string& w) {
    if (peek().kind != Token::Word || peek().text != w) fail("expected " + w);
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const { throw std::runtime_error(what); }

  std::vector<Token> t_;
  std::size_t pos_ = 0;
  std::set<std::string> declared_;
};

}  // namespace

const DotNode* DotGraph::node(const std::string& id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

DotGraph parse_dot(const std::string& text) {
  DotGraph g;
  try {
    Parser(lex(text)).graph(g);
    g.ok = true;
  } catch (const std::exception& e) {
    g.ok = false;
    g.error = e.what();
  }
  return g;
}

}  // namespace yw::testing
