// Minimal GML: a single `graph` list with `node` and `edge` records. Unknown
// keys are skipped, nested lists included, so files written by igraph or
// networkx load as long as they stay within this shape.

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "gz_stream.hpp"
#include "noderank/error.hpp"
#include "noderank/ingest.hpp"

namespace noderank {

namespace {

enum class TokenType { Key, Integer, Real, String, Open, Close, End };

struct Token {
  TokenType type = TokenType::End;
  std::string text;
  std::size_t offset = 0;
};

std::string decode_entities(const std::string& raw, std::size_t offset) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != '&') {
      out += raw[i];
      continue;
    }
    const auto semi = raw.find(';', i);
    if (semi == std::string::npos || semi - i > 10) {
      out += raw[i];
      continue;
    }
    const std::string entity = raw.substr(i + 1, semi - i - 1);
    if (entity == "quot") out += '"';
    else if (entity == "amp") out += '&';
    else if (entity == "lt") out += '<';
    else if (entity == "gt") out += '>';
    else if (entity == "apos") out += '\'';
    else if (entity.size() > 1 && entity[0] == '#') {
      unsigned long code = 0;
      const bool hex = entity[1] == 'x' || entity[1] == 'X';
      const char* first = entity.data() + (hex ? 2 : 1);
      auto [ptr, ec] = std::from_chars(first, entity.data() + entity.size(), code, hex ? 16 : 10);
      if (ec != std::errc() || ptr != entity.data() + entity.size() || code > 0x10FFFF) {
        throw offset_error(offset + i, "bad character reference '&" + entity + ";'");
      }
      // UTF-8 encode
      if (code < 0x80) {
        out += static_cast<char>(code);
      } else if (code < 0x800) {
        out += static_cast<char>(0xC0 | (code >> 6));
        out += static_cast<char>(0x80 | (code & 0x3F));
      } else if (code < 0x10000) {
        out += static_cast<char>(0xE0 | (code >> 12));
        out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (code & 0x3F));
      } else {
        out += static_cast<char>(0xF0 | (code >> 18));
        out += static_cast<char>(0x80 | ((code >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (code & 0x3F));
      }
    } else {
      out += raw[i];
      continue;
    }
    i = semi;
  }
  return out;
}

std::string encode_entities(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '"') out += "&quot;";
    else out += c;
  }
  return out;
}

class Lexer {
 public:
  explicit Lexer(detail::GzReader& in) : in_(in) {}

  Token next() {
    skip_space();
    Token tok;
    tok.offset = in_.offset();
    const int c = in_.peek();
    if (c == EOF) return tok;
    if (c == '[') {
      in_.get();
      tok.type = TokenType::Open;
      return tok;
    }
    if (c == ']') {
      in_.get();
      tok.type = TokenType::Close;
      return tok;
    }
    if (c == '"') {
      in_.get();
      std::string raw;
      for (;;) {
        const int ch = in_.get();
        if (ch == EOF) throw offset_error(tok.offset, "unterminated string");
        if (ch == '"') break;
        raw += static_cast<char>(ch);
      }
      tok.type = TokenType::String;
      tok.text = decode_entities(raw, tok.offset + 1);
      return tok;
    }
    if (std::isalpha(c) || c == '_') {
      while (std::isalnum(in_.peek()) || in_.peek() == '_') tok.text += static_cast<char>(in_.get());
      tok.type = TokenType::Key;
      return tok;
    }
    if (std::isdigit(c) || c == '-' || c == '+' || c == '.') {
      bool real = false;
      for (;;) {
        const int ch = in_.peek();
        if (std::isdigit(ch) || ch == '-' || ch == '+') {
        } else if (ch == '.' || ch == 'e' || ch == 'E') {
          real = true;
        } else {
          break;
        }
        tok.text += static_cast<char>(in_.get());
      }
      tok.type = real ? TokenType::Real : TokenType::Integer;
      return tok;
    }
    throw offset_error(tok.offset, std::string("unexpected character '") + static_cast<char>(c) + "'");
  }

 private:
  void skip_space() {
    for (;;) {
      const int c = in_.peek();
      if (c == '#') {
        while (in_.peek() != '\n' && in_.peek() != EOF) in_.get();
      } else if (c != EOF && std::isspace(c)) {
        in_.get();
      } else {
        return;
      }
    }
  }

  detail::GzReader& in_;
};

long long to_integer(const Token& tok) {
  if (tok.type != TokenType::Integer) throw offset_error(tok.offset, "expected an integer");
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
  if (ec != std::errc() || ptr != tok.text.data() + tok.text.size()) {
    throw offset_error(tok.offset, "malformed integer '" + tok.text + "'");
  }
  return v;
}

double to_number(const Token& tok) {
  if (tok.type == TokenType::Integer) return static_cast<double>(to_integer(tok));
  if (tok.type != TokenType::Real) throw offset_error(tok.offset, "expected a number");
  double v = 0.0;
  const char* first = tok.text.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.text.data() + tok.text.size(), v);
  if (ec != std::errc() || ptr != tok.text.data() + tok.text.size()) {
    throw offset_error(tok.offset, "malformed number '" + tok.text + "'");
  }
  return v;
}

struct PendingEdge {
  long long source = 0;
  long long target = 0;
  double weight = 0.0;
  std::size_t offset = 0;
};

class GmlReader {
 public:
  GmlReader(detail::GzReader& in, const GraphOptions& options) : lex_(in), builder_(options) {}

  SparseGraph read() {
    bool seen_graph = false;
    for (Token key = lex_.next(); key.type != TokenType::End; key = lex_.next()) {
      expect_key(key);
      if (key.text == "graph") {
        if (seen_graph) throw offset_error(key.offset, "more than one graph block");
        seen_graph = true;
        expect(TokenType::Open, "'[' after graph");
        read_graph();
      } else {
        skip_value();
      }
    }
    if (!seen_graph) throw offset_error(0, "no graph block found");

    std::vector<IndexedEdge> edges;
    for (const auto& e : edges_) {
      const auto s = ids_.find(e.source);
      const auto t = ids_.find(e.target);
      if (s == ids_.end() || t == ids_.end()) {
        throw offset_error(e.offset, "edge references missing node " +
                                         std::to_string(s == ids_.end() ? e.source : e.target));
      }
      builder_.add_edge(s->second, t->second, e.weight);
    }
    return std::move(builder_).build();
  }

 private:
  void expect_key(const Token& tok) {
    if (tok.type != TokenType::Key) throw offset_error(tok.offset, "expected a key");
  }

  Token expect(TokenType type, const char* what) {
    Token tok = lex_.next();
    if (tok.type != type) throw offset_error(tok.offset, std::string("expected ") + what);
    return tok;
  }

  void skip_value() {
    Token tok = lex_.next();
    switch (tok.type) {
      case TokenType::Integer:
      case TokenType::Real:
      case TokenType::String:
        return;
      case TokenType::Open:
        for (Token k = lex_.next(); k.type != TokenType::Close; k = lex_.next()) {
          if (k.type == TokenType::End) throw offset_error(k.offset, "unterminated list");
          expect_key(k);
          skip_value();
        }
        return;
      default:
        throw offset_error(tok.offset, "expected a value");
    }
  }

  void read_graph() {
    for (Token key = lex_.next(); key.type != TokenType::Close; key = lex_.next()) {
      if (key.type == TokenType::End) throw offset_error(key.offset, "unterminated graph block");
      expect_key(key);
      if (key.text == "node") {
        expect(TokenType::Open, "'[' after node");
        read_node(key.offset);
      } else if (key.text == "edge") {
        expect(TokenType::Open, "'[' after edge");
        read_edge(key.offset);
      } else {
        skip_value();
      }
    }
  }

  void read_node(std::size_t offset) {
    std::optional<long long> id;
    std::optional<std::string> label;
    for (Token key = lex_.next(); key.type != TokenType::Close; key = lex_.next()) {
      if (key.type == TokenType::End) throw offset_error(key.offset, "unterminated node block");
      expect_key(key);
      if (key.text == "id") {
        id = to_integer(lex_.next());
      } else if (key.text == "label") {
        label = expect(TokenType::String, "a quoted label").text;
      } else {
        skip_value();
      }
    }
    if (!id) throw offset_error(offset, "node without id");
    if (ids_.count(*id)) throw offset_error(offset, "duplicate node id " + std::to_string(*id));
    const std::string name = label.value_or(std::to_string(*id));
    if (name.empty()) throw offset_error(offset, "empty node label");
    const std::size_t before = builder_.num_nodes();
    const NodeId v = builder_.add_node(name);
    if (builder_.num_nodes() == before) {
      throw offset_error(offset, "duplicate node label '" + name + "'");
    }
    ids_.emplace(*id, v);
  }

  void read_edge(std::size_t offset) {
    PendingEdge edge;
    edge.offset = offset;
    bool has_source = false;
    bool has_target = false;
    for (Token key = lex_.next(); key.type != TokenType::Close; key = lex_.next()) {
      if (key.type == TokenType::End) throw offset_error(key.offset, "unterminated edge block");
      expect_key(key);
      if (key.text == "source") {
        edge.source = to_integer(lex_.next());
        has_source = true;
      } else if (key.text == "target") {
        edge.target = to_integer(lex_.next());
        has_target = true;
      } else if (key.text == "transitions") {
        const Token value = lex_.next();
        edge.weight = to_number(value);
        if (!std::isfinite(edge.weight) || edge.weight < 0.0) {
          throw offset_error(value.offset, "transitions must be finite and non-negative");
        }
      } else {
        skip_value();
      }
    }
    if (!has_source || !has_target) throw offset_error(offset, "edge without source or target");
    edges_.push_back(edge);
  }

  Lexer lex_;
  GraphBuilder builder_;
  std::unordered_map<long long, NodeId> ids_;
  std::vector<PendingEdge> edges_;
};

std::string format_transitions(double w) {
  if (w == std::floor(w) && std::fabs(w) < 9007199254740992.0) {
    return std::to_string(static_cast<long long>(w));
  }
  return format_score(w);
}

}  // namespace

SparseGraph read_gml(const std::string& path, bool gzipped, const GraphOptions& options) {
  detail::GzReader in(path);
  if (gzipped && in.is_plain() && in.peek() != EOF) {
    throw DataError("'" + path + "' is not gzip-compressed");
  }
  return GmlReader(in, options).read();
}

void write_gml(std::ostream& out, const SparseGraph& g) {
  out << "graph [\n  directed 1\n";
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    out << "  node [\n    id " << v << "\n    label \"" << encode_entities(g.label(v)) << "\"\n  ]\n";
  }
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    auto targets = g.out_neighbors(u);
    auto weights = g.out_weights(u);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      out << "  edge [\n    source " << u << "\n    target " << targets[i] << "\n    transitions "
          << format_transitions(weights[i]) << "\n  ]\n";
    }
  }
  out << "]\n";
}

void write_gml(const std::string& path, const SparseGraph& g, bool gzipped) {
  std::ostringstream text;
  write_gml(text, g);
  detail::GzWriter writer(path, gzipped);
  writer.write(text.str());
  writer.close();
}

}  // namespace noderank
