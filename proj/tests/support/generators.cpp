#include "generators.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace yw::testing {
namespace {

int uniform(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool chance(std::mt19937& rng, double p) {
  return std::bernoulli_distribution(p)(rng);
}

struct Node {
  Block block;
  int depth = 0;
  std::vector<std::size_t> children;
};

std::vector<std::string> pick_names(std::mt19937& rng, const GenOptions& o,
                                    const std::set<std::string>& excluded) {
  std::vector<std::string> pool;
  for (int i = 0; i < o.name_pool; ++i) {
    auto n = "d" + std::to_string(i);
    if (!excluded.count(n)) pool.push_back(std::move(n));
  }
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(std::min<std::size_t>(pool.size(),
                                    static_cast<std::size_t>(uniform(rng, 0, o.max_ports))));
  return pool;
}

void add_ins(std::mt19937& rng, const GenOptions& o, Block& b) {
  for (auto& n : pick_names(rng, o, {})) {
    Port p;
    p.name = std::move(n);
    p.direction = PortDirection::In;
    p.role = chance(rng, o.param_rate) ? PortRole::Parameter : PortRole::Data;
    b.ports.push_back(std::move(p));
  }
}

void add_outs(std::mt19937& rng, const GenOptions& o, Block& b,
              std::set<std::string>& writers) {
  for (auto& n : pick_names(rng, o, o.single_writer ? writers : std::set<std::string>{})) {
    writers.insert(n);
    Port p;
    p.name = std::move(n);
    p.direction = PortDirection::Out;
    b.ports.push_back(std::move(p));
  }
}

const char* const kWords[] = {"load", "fit",  "merge", "clean", "plot",
                              "the",  "grid", "model", "series", "of"};

std::optional<std::string> maybe_description(std::mt19937& rng) {
  if (!chance(rng, 0.4)) return std::nullopt;
  std::string s;
  for (int i = uniform(rng, 1, 4); i > 0; --i) {
    if (!s.empty()) s += ' ';
    s += kWords[uniform(rng, 0, 9)];
  }
  return s;
}

void emit(const Block& b, const std::string& file, int& line,
          std::vector<Annotation>& out) {
  out.push_back({AnnotationTag::Begin, b.name, b.description, file, line++});
  for (const auto& p : b.ports) {
    const auto tag = p.direction == PortDirection::Out ? AnnotationTag::Out
                     : p.role == PortRole::Parameter   ? AnnotationTag::Param
                                                       : AnnotationTag::In;
    out.push_back({tag, p.name, p.description, file, line++});
  }
  for (const auto& c : b.children) emit(c, file, line, out);
  out.push_back({AnnotationTag::End, b.name, std::nullopt, file, line++});
}

std::string awkward_text(std::mt19937& rng) {
  static const std::vector<std::string> pieces = {
      "plain", "with \"quotes\"", "back\\slash", "tab\there", "caf\xc3\xa9",
      "{braces}", "#hash", "%pct", "  padded  ", "\xe2\x86\x92 arrow", "@ alone"};
  std::string s;
  for (int i = uniform(rng, 1, 3); i > 0; --i) {
    s += pieces[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(pieces.size()) - 1))];
  }
  return s;
}

}  // namespace

Block random_tree(std::mt19937& rng, const GenOptions& o) {
  const int total = uniform(rng, 2, std::max(2, o.max_blocks));
  std::vector<Node> nodes(1);
  nodes[0].block.name = "root";
  while (static_cast<int>(nodes.size()) < total) {
    std::size_t parent = nodes.size() == 1 ? 0 : static_cast<std::size_t>(
                                                     uniform(rng, 0, static_cast<int>(nodes.size()) - 1));
    if (nodes[parent].depth >= o.max_depth) continue;
    Node child;
    child.depth = nodes[parent].depth + 1;
    std::set<std::string> sibling_names;
    for (const auto s : nodes[parent].children) sibling_names.insert(nodes[s].block.name);
    child.block.name = "b" + std::to_string(uniform(rng, 0, 7));
    if (sibling_names.count(child.block.name)) {
      child.block.name = "n" + std::to_string(nodes.size());
    }
    nodes[parent].children.push_back(nodes.size());
    nodes.push_back(std::move(child));
  }

  std::function<Block(std::size_t)> assemble = [&](std::size_t i) {
    Block b = nodes[i].block;
    b.description = maybe_description(rng);
    for (const auto c : nodes[i].children) b.children.push_back(assemble(c));
    return b;
  };
  Block root = assemble(0);

  // Ports top-down so that, with single_writer, every scope has at most one
  // writer per name: the scope's own In ports plus its children's Out ports.
  add_ins(rng, o, root);
  std::set<std::string> unused;
  add_outs(rng, o, root, unused);
  std::function<void(Block&)> fill = [&](Block& scope) {
    std::set<std::string> writers;
    for (const auto& p : scope.ports) {
      if (p.direction == PortDirection::In) writers.insert(p.name);
    }
    for (auto& c : scope.children) {
      add_ins(rng, o, c);
      add_outs(rng, o, c, writers);
    }
    for (auto& c : scope.children) fill(c);
  };
  fill(root);
  return root;
}

std::vector<Annotation> annotations_for(const Block& root, const std::string& file) {
  std::vector<Annotation> out;
  int line = 1;
  emit(root, file, line, out);
  return out;
}

std::string script_for(const Block& root, const std::string& language) {
  const std::string marker = language == "matlab" ? "%" : "#";
  const std::string assign = language == "r" ? " <- " : " = ";
  std::string out;
  for (const auto& a : annotations_for(root, "")) {
    out += marker + " @" + std::string(tag_keyword(a.tag));
    if (!a.value.empty()) out += " " + a.value;
    if (a.description) out += " " + *a.description;
    out += "\n";
    if (a.tag == AnnotationTag::Out || a.tag == AnnotationTag::In ||
        a.tag == AnnotationTag::Param) {
      out += a.value + assign + "step(\"" + marker + " not a comment\")\n";
    }
  }
  return out;
}

WorkflowModel random_model(std::mt19937& rng, const GenOptions& o,
                           const std::string& file) {
  const auto anns = annotations_for(random_tree(rng, o), file);
  return build_model(anns, o.single_writer ? WriterPolicy::Strict : WriterPolicy::Lenient);
}

AnnotationDocument random_document(std::mt19937& rng) {
  static const AnnotationTag tags[] = {AnnotationTag::Begin, AnnotationTag::End,
                                       AnnotationTag::In, AnnotationTag::Out,
                                       AnnotationTag::Param};
  AnnotationDocument doc;
  doc.file = chance(rng, 0.5) ? "scripts/run.py" : "a b/\xc3\xa9t\xc3\xa9.R";
  doc.language = chance(rng, 0.5) ? "python" : "r";
  int line = 1;
  for (int i = uniform(rng, 0, 30); i > 0; --i) {
    Annotation a;
    a.tag = tags[uniform(rng, 0, 4)];
    if (a.tag != AnnotationTag::End || chance(rng, 0.5)) {
      a.value = (chance(rng, 0.2) ? "_x." : "v") + std::to_string(uniform(rng, 0, 99));
    }
    if (chance(rng, 0.5)) a.description = awkward_text(rng);
    a.file = chance(rng, 0.8) ? doc.file : "other/file.m";
    line += uniform(rng, 0, 5);
    a.line = line;
    doc.annotations.push_back(std::move(a));
  }
  return doc;
}

}  // namespace yw::testing
