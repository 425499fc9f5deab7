#include "treedist/newick.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "treedist/error.hpp"

namespace treedist {

namespace {

bool is_delimiter(char c) {
  switch (c) {
    case '(': case ')': case '[': case ']': case '\'': case ':': case ';': case ',':
      return true;
    default:
      return std::isspace(static_cast<unsigned char>(c)) != 0;
  }
}

class Reader {
 public:
  Reader(std::string_view text, const ParseOptions& options)
      : text_(text), options_(options) {}

  NewickDocument run() {
    NewickDocument doc;
    skip_blank();
    if (pos_ >= text_.size()) fail_at(ErrorCode::EmptyInput, "no tree in input", pos_);
    while (pos_ < text_.size()) {
      doc.source_positions.push_back(pos_);
      doc.trees.push_back(read_tree(doc.warnings));
      skip_blank();
    }
    return doc;
  }

 private:
  [[noreturn]] void fail_at(ErrorCode code, const std::string& message,
                            std::size_t offset) const {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(code, message, line, column);
  }

  void skip_blank() {
    for (;;) {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      if (pos_ < text_.size() && text_[pos_] == '[') {
        const std::size_t open = pos_;
        const auto close = text_.find(']', pos_);
        if (close == std::string_view::npos)
          fail_at(ErrorCode::SyntaxError, "unterminated comment", open);
        pos_ = close + 1;
        continue;
      }
      return;
    }
  }

  char peek() {
    skip_blank();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  // Empty result when no label starts here.
  std::string read_label() {
    skip_blank();
    if (pos_ >= text_.size()) return {};
    if (text_[pos_] == '\'') {
      const std::size_t open = pos_++;
      std::string out;
      for (;;) {
        if (pos_ >= text_.size()) fail_at(ErrorCode::SyntaxError, "unterminated quoted label", open);
        const char c = text_[pos_++];
        if (c == '\'') {
          if (pos_ < text_.size() && text_[pos_] == '\'') {
            out.push_back('\'');
            ++pos_;
            continue;
          }
          break;
        }
        out.push_back(c);
      }
      if (out.empty()) fail_at(ErrorCode::SyntaxError, "empty quoted label", open);
      return out;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_delimiter(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  // Returns true and sets `w` when a ":weight" suffix is present.
  bool read_weight(double& w) {
    if (peek() != ':') return false;
    ++pos_;
    skip_blank();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_delimiter(text_[pos_])) ++pos_;
    const std::string_view token = text_.substr(start, pos_ - start);
    if (token.empty()) fail_at(ErrorCode::SyntaxError, "missing weight after ':'", start);
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, w);
    if (ec != std::errc{} || ptr != last || !std::isfinite(w))
      fail_at(ErrorCode::SyntaxError, "malformed weight '" + std::string(token) + "'", start);
    if (w < 0.0 || std::signbit(w)) {
      if (w == 0.0) {
        w = 0.0;
      } else {
        fail_at(ErrorCode::NegativeWeight, "negative weight " + std::string(token), start);
      }
    }
    return true;
  }

  Tree read_tree(std::vector<std::string>& warnings) {
    Tree tree;
    std::vector<VertexId> open;
    std::vector<std::size_t> open_at;
    std::vector<std::size_t> child_count;
    std::vector<EdgeId> parent_edge;
    std::vector<char> has_weight;
    std::unordered_set<std::string> seen;
    bool any_weight = false;
    bool single_child = false;
    std::size_t discarded_internal = 0;
    double root_weight = 0.0;
    bool root_weight_given = false;

    auto attach = [&](VertexId v) {
      parent_edge.push_back(npos);
      has_weight.push_back(0);
      if (!open.empty()) {
        parent_edge[v] = tree.add_edge(open.back(), v);
        ++child_count.back();
      }
    };

    for (;;) {
      // Expecting a subtree.
      VertexId done;
      const char c = peek();
      if (c == '(') {
        const VertexId v = tree.add_vertex();
        attach(v);
        open.push_back(v);
        open_at.push_back(pos_);
        child_count.push_back(0);
        ++pos_;
        continue;
      }
      {
        const std::size_t at = pos_;
        std::string label = read_label();
        if (label.empty()) {
          if (pos_ >= text_.size()) fail_at(ErrorCode::SyntaxError, "unexpected end of input", at);
          fail_at(ErrorCode::SyntaxError,
                  std::string("expected a label or '(' but found '") + text_[pos_] + "'", pos_);
        }
        if (label == kRootLabel)
          fail_at(ErrorCode::DomainError, "the label 'root' is reserved", at);
        if (!seen.insert(label).second)
          fail_at(ErrorCode::DuplicateLabel, "duplicate label '" + label + "'", at);
        done = tree.add_vertex(std::move(label));
        attach(done);
      }
      // After a subtree: optional weight, then ',' ')' or ';'.
      for (;;) {
        double w = 0.0;
        if (read_weight(w)) {
          if (parent_edge[done] == npos) {
            root_weight = w;
            root_weight_given = true;
          } else {
            tree.set_weight(parent_edge[done], w);
            has_weight[done] = 1;
            any_weight = true;
          }
        }
        const char d = peek();
        if (d == ',') {
          if (open.empty()) fail_at(ErrorCode::SyntaxError, "',' outside parentheses", pos_);
          ++pos_;
          break;
        }
        if (d == ')') {
          if (open.empty()) fail_at(ErrorCode::SyntaxError, "unbalanced ')'", pos_);
          ++pos_;
          done = open.back();
          if (child_count.back() < 2) {
            if (options_.strict)
              fail_at(ErrorCode::SyntaxError, "group with a single child", open_at.back());
            single_child = true;
          }
          open.pop_back();
          open_at.pop_back();
          child_count.pop_back();
          if (!read_label().empty()) ++discarded_internal;
          continue;
        }
        if (d == ';') {
          if (!open.empty())
            fail_at(ErrorCode::SyntaxError, "unbalanced '(' before ';'", open_at.back());
          ++pos_;
          return finish(std::move(tree), done, has_weight, any_weight, single_child,
                        discarded_internal, root_weight_given ? &root_weight : nullptr,
                        warnings);
        }
        if (d == '\0') {
          if (!open.empty())
            fail_at(ErrorCode::SyntaxError, "unbalanced '(' at end of input", open_at.back());
          fail_at(ErrorCode::SyntaxError, "missing ';'", pos_);
        }
        fail_at(ErrorCode::SyntaxError, std::string("unexpected '") + d + "'", pos_);
      }
    }
  }

  Tree finish(Tree tree, VertexId top, const std::vector<char>& has_weight, bool any_weight,
              bool single_child, std::size_t discarded_internal, const double* root_weight,
              std::vector<std::string>& warnings) {
    if (discarded_internal > 0)
      warnings.push_back(std::to_string(discarded_internal) + " internal node label(s) discarded");
    if (root_weight && *root_weight != 0.0) warnings.push_back("weight above the root discarded");
    if (any_weight) {
      std::size_t missing = 0;
      for (VertexId v = 0; v < tree.vertex_count(); ++v)
        if (v != top && !has_weight[v]) ++missing;
      if (missing > 0)
        warnings.push_back(std::to_string(missing) + " edge(s) without weight read as 0");
      tree.set_weighted(true);
    }
    tree.set_root(top);
    if (single_child) tree = suppress_unary(tree, true);
    const VertexId t = *tree.root();
    const std::size_t top_degree = tree.degree(t);
    switch (options_.rootedness) {
      case Rootedness::Auto:
        if (top_degree >= 3) tree.clear_root();
        break;
      case Rootedness::Rooted:
        break;
      case Rootedness::Unrooted:
        if (top_degree == 2) {
          tree = suppress_unary(tree, false);
        } else if (tree.vertex_count() > 1) {
          tree.clear_root();
        }
        break;
    }
    return tree;
  }

  std::string_view text_;
  ParseOptions options_;
  std::size_t pos_ = 0;
};

std::string quote_if_needed(const std::string& label) {
  bool plain = !label.empty();
  for (char c : label)
    if (is_delimiter(c)) plain = false;
  if (plain) return label;
  std::string out = "'";
  for (char c : label) {
    if (c == '\'') out.push_back('\'');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

// Unrooted trees are written from the first vertex of degree != 2 on the walk
// inward from the smallest-labelled tip.
VertexId unrooted_top(const Tree& tree) {
  VertexId tip = 0;
  const std::string* best = nullptr;
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (tree.is_tip(v) && tree.has_label(v) && (!best || tree.label(v) < *best)) {
      best = &tree.label(v);
      tip = v;
    }
  }
  if (tree.degree(tip) == 0) return tip;
  VertexId prev = tip;
  VertexId cur = tree.other_end(tree.incident(tip)[0], tip);
  while (tree.degree(cur) == 2) {
    const auto inc = tree.incident(cur);
    const VertexId next = tree.other_end(inc[0], cur) == prev ? tree.other_end(inc[1], cur)
                                                             : tree.other_end(inc[0], cur);
    prev = cur;
    cur = next;
  }
  return tree.degree(cur) == 1 ? tree.other_end(tree.incident(tip)[0], tip) : cur;
}

}  // namespace

NewickDocument parse(std::string_view text, const ParseOptions& options) {
  return Reader(text, options).run();
}

Tree parse_tree(std::string_view text, const ParseOptions& options) {
  NewickDocument doc = parse(text, options);
  if (doc.trees.size() != 1) {
    throw ParseError(ErrorCode::SyntaxError,
                     "expected one tree, found " + std::to_string(doc.trees.size()), 1, 1);
  }
  return std::move(doc.trees.front());
}

std::string serialize(const Tree& tree, int precision) {
  if (tree.vertex_count() == 0) return ";";
  const VertexId top = tree.rooted() ? *tree.root() : unrooted_top(tree);
  const RootedView view = canonical_view(tree, top);
  std::string out;
  char buf[64];
  auto emit_weight = [&](VertexId v) {
    if (!tree.weighted() || v == top) return;
    const double w = tree.weight(view.parent_edge[v]);
    if (precision < 0) {
      buf[0] = ':';
      const auto [end, ec] = std::to_chars(buf + 1, buf + sizeof buf, w);
      out.append(buf, end);
    } else {
      std::snprintf(buf, sizeof buf, ":%.*f", precision, w);
      out += buf;
    }
  };
  // (vertex, next child index)
  std::vector<std::pair<VertexId, std::size_t>> stack{{top, 0}};
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    const auto& ch = view.children[v];
    if (ch.empty()) {
      out += quote_if_needed(tree.label(v));
      emit_weight(v);
      stack.pop_back();
      continue;
    }
    if (next == ch.size()) {
      out.push_back(')');
      emit_weight(v);
      stack.pop_back();
      continue;
    }
    out.push_back(next == 0 ? '(' : ',');
    const VertexId c = ch[next++];
    stack.emplace_back(c, 0);
  }
  out.push_back(';');
  return out;
}

}  // namespace treedist
