#include "scriptorium/rdf.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "scriptorium/error.hpp"
#include "scriptorium/text.hpp"

namespace scriptorium::rdf {

std::string rdf(std::string_view local) { return std::string(kRdf) + std::string(local); }
std::string rdfs(std::string_view local) { return std::string(kRdfs) + std::string(local); }
std::string xsd(std::string_view local) { return std::string(kXsd) + std::string(local); }
std::string skos(std::string_view local) { return std::string(kSkos) + std::string(local); }
std::string crm(std::string_view local) { return std::string(kCrm) + std::string(local); }

Term Term::literal(std::string lexical, std::string datatype, std::string language) {
  if (datatype == xsd("string")) datatype.clear();
  if (!language.empty()) {
    datatype.clear();
    language = text::casefold(language);
  }
  return {Kind::literal, std::move(lexical), std::move(datatype), std::move(language)};
}

void Graph::add(std::string subject, std::string predicate, Term object) {
  triples_.insert(Triple{std::move(subject), std::move(predicate), std::move(object)});
}

std::set<std::string> Graph::instances_of(std::string_view class_iri) const {
  std::set<std::string> out;
  const auto type = rdf("type");
  for (const auto& t : triples_)
    if (t.predicate == type && t.object.is_iri() && t.object.value == class_iri) out.insert(t.subject);
  return out;
}

std::set<Term> Graph::objects(std::string_view subject, std::string_view predicate) const {
  std::set<Term> out;
  for (const auto& t : triples_)
    if (t.subject == subject && t.predicate == predicate) out.insert(t.object);
  return out;
}

size_t Graph::count_predicate(std::string_view predicate) const {
  return static_cast<size_t>(std::count_if(triples_.begin(), triples_.end(),
                                           [&](const Triple& t) { return t.predicate == predicate; }));
}

namespace {

void append_uhex(std::string& out, unsigned cp) {
  static constexpr char hex[] = "0123456789ABCDEF";
  out += "\\u";
  for (int shift = 12; shift >= 0; shift -= 4) out += hex[(cp >> shift) & 0xF];
}

std::string escape_iri(std::string_view iri) {
  std::string out;
  for (char c : iri) {
    auto uc = static_cast<unsigned char>(c);
    if (uc <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
        c == '`' || c == '\\')
      append_uhex(out, uc);
    else
      out += c;
  }
  return out;
}

std::string escape_string(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20)
          append_uhex(out, static_cast<unsigned char>(c));
        else
          out += c;
    }
  }
  return out;
}

bool safe_local(std::string_view local) {
  if (local.empty()) return false;
  if (!(std::isalnum(static_cast<unsigned char>(local[0])) || local[0] == '_')) return false;
  return std::all_of(local.begin(), local.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

std::string turtle_iri(std::string_view iri, const Prefixes& prefixes) {
  auto curie = compact_iri(iri, prefixes);
  if (!curie.empty()) return curie;
  return "<" + escape_iri(iri) + ">";
}

std::string turtle_term(const Term& t, const Prefixes& prefixes) {
  if (t.is_iri()) return turtle_iri(t.value, prefixes);
  std::string out = "\"" + escape_string(t.value) + "\"";
  if (!t.language.empty())
    out += "@" + t.language;
  else if (!t.datatype.empty())
    out += "^^" + turtle_iri(t.datatype, prefixes);
  return out;
}

void encode_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

/// Shared cursor for both syntaxes.
class Reader {
 public:
  explicit Reader(std::string_view src) : src_(src) {}

  bool at_end() const { return pos_ >= src_.size(); }
  char peek(size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }
  void advance(size_t n = 1) { pos_ += n; }
  bool starts_with(std::string_view s) const { return src_.substr(pos_).starts_with(s); }

  [[noreturn]] void fail(const std::string& what, Errc code = Errc::syntax) const {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < pos_ && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(code, std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }

  void skip_ws(bool newlines = true) {
    while (!at_end()) {
      char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || (newlines && c == '\n')) {
        advance();
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  char32_t read_hex(int digits) {
    char32_t cp = 0;
    for (int i = 0; i < digits; ++i) {
      char c = peek();
      int v = std::isdigit(static_cast<unsigned char>(c)) ? c - '0'
              : (c >= 'a' && c <= 'f')                      ? c - 'a' + 10
              : (c >= 'A' && c <= 'F')                      ? c - 'A' + 10
                                                            : -1;
      if (v < 0) fail("bad hex escape");
      cp = cp * 16 + static_cast<char32_t>(v);
      advance();
    }
    return cp;
  }

  std::string read_iriref() {
    expect('<');
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated IRI");
      char c = peek();
      if (c == '>') {
        advance();
        break;
      }
      if (c == '\\') {
        advance();
        char k = peek();
        advance();
        if (k == 'u')
          encode_utf8(out, read_hex(4));
        else if (k == 'U')
          encode_utf8(out, read_hex(8));
        else
          fail("bad IRI escape");
        continue;
      }
      if (static_cast<unsigned char>(c) <= 0x20) fail("illegal character in IRI");
      out += c;
      advance();
    }
    return out;
  }

  std::string read_string() {
    char q = peek();
    bool long_form = (peek(1) == q && peek(2) == q);
    advance(long_form ? 3 : 1);
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated string");
      char c = peek();
      if (long_form) {
        if (c == q && peek(1) == q && peek(2) == q) {
          advance(3);
          break;
        }
      } else if (c == q) {
        advance();
        break;
      } else if (c == '\n' || c == '\r') {
        fail("newline in short string");
      }
      if (c == '\\') {
        advance();
        char k = peek();
        advance();
        switch (k) {
          case 't': out += '\t'; break;
          case 'b': out += '\b'; break;
          case 'n': out += '\n'; break;
          case 'r': out += '\r'; break;
          case 'f': out += '\f'; break;
          case '"': out += '"'; break;
          case '\'': out += '\''; break;
          case '\\': out += '\\'; break;
          case 'u': encode_utf8(out, read_hex(4)); break;
          case 'U': encode_utf8(out, read_hex(8)); break;
          default: fail("bad string escape");
        }
        continue;
      }
      out += c;
      advance();
    }
    return out;
  }

  std::string read_langtag() {
    expect('@');
    std::string out;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-') {
      out += peek();
      advance();
    }
    if (out.empty()) fail("empty language tag");
    return out;
  }

  size_t pos() const { return pos_; }
  std::string_view rest() const { return src_.substr(pos_); }

 private:
  std::string_view src_;
  size_t pos_ = 0;
};

class TurtleParser {
 public:
  explicit TurtleParser(std::string_view src) : r_(src) {}

  TurtleDocument run() {
    while (true) {
      r_.skip_ws();
      if (r_.at_end()) break;
      if (r_.starts_with("@prefix")) {
        r_.advance(7);
        prefix_directive(true);
      } else if (keyword("PREFIX")) {
        prefix_directive(false);
      } else if (r_.starts_with("@base")) {
        r_.advance(5);
        r_.skip_ws();
        base_ = r_.read_iriref();
        r_.skip_ws();
        r_.expect('.');
      } else if (keyword("BASE")) {
        r_.skip_ws();
        base_ = r_.read_iriref();
      } else {
        statement();
      }
    }
    return std::move(doc_);
  }

 private:
  bool keyword(std::string_view kw) {
    auto rest = r_.rest();
    if (rest.size() < kw.size()) return false;
    for (size_t i = 0; i < kw.size(); ++i)
      if (std::toupper(static_cast<unsigned char>(rest[i])) != kw[i]) return false;
    if (rest.size() > kw.size() && !std::isspace(static_cast<unsigned char>(rest[kw.size()]))) return false;
    r_.advance(kw.size());
    return true;
  }

  void prefix_directive(bool dotted) {
    r_.skip_ws();
    std::string name;
    while (r_.peek() != ':') {
      if (r_.at_end() || std::isspace(static_cast<unsigned char>(r_.peek()))) r_.fail("bad prefix name");
      name += r_.peek();
      r_.advance();
    }
    r_.advance();
    r_.skip_ws();
    doc_.prefixes[name] = resolve(r_.read_iriref());
    if (dotted) {
      r_.skip_ws();
      r_.expect('.');
    }
  }

  std::string resolve(std::string iri) const {
    if (base_.empty() || iri.find(':') != std::string::npos) return iri;
    return base_ + iri;
  }

  std::string pname() {
    std::string prefix;
    while (r_.peek() != ':') {
      char c = r_.peek();
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
        r_.fail("unexpected character");
      prefix += c;
      r_.advance();
    }
    r_.advance();
    std::string local;
    while (true) {
      char c = r_.peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' || c == '%' ||
          static_cast<unsigned char>(c) >= 0x80) {
        local += c;
        r_.advance();
      } else if (c == '.' && (std::isalnum(static_cast<unsigned char>(r_.peek(1))) || r_.peek(1) == '_' ||
                              r_.peek(1) == '-')) {
        local += c;
        r_.advance();
      } else if (c == '\\') {
        r_.advance();
        local += r_.peek();
        r_.advance();
      } else {
        break;
      }
    }
    auto it = doc_.prefixes.find(prefix);
    if (it == doc_.prefixes.end()) r_.fail("undeclared prefix '" + prefix + "'", Errc::undeclared_prefix);
    return it->second + local;
  }

  std::string iri() {
    if (r_.peek() == '<') return resolve(r_.read_iriref());
    if (r_.peek() == '_' && r_.peek(1) == ':') r_.fail("blank nodes are not supported");
    if (r_.peek() == '[') r_.fail("blank nodes are not supported");
    return pname();
  }

  Term object() {
    char c = r_.peek();
    if (c == '"' || c == '\'') {
      auto lex = r_.read_string();
      if (r_.peek() == '@') return Term::literal(std::move(lex), {}, r_.read_langtag());
      if (r_.peek() == '^' && r_.peek(1) == '^') {
        r_.advance(2);
        return Term::literal(std::move(lex), iri());
      }
      return Term::literal(std::move(lex));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(r_.peek(1)))))
      return number();
    if (keyword_token("true")) return Term::literal("true", xsd("boolean"));
    if (keyword_token("false")) return Term::literal("false", xsd("boolean"));
    return Term::iri(iri());
  }

  bool keyword_token(std::string_view kw) {
    auto rest = r_.rest();
    if (!rest.starts_with(kw)) return false;
    char after = rest.size() > kw.size() ? rest[kw.size()] : ' ';
    if (std::isalnum(static_cast<unsigned char>(after)) || after == ':') return false;
    r_.advance(kw.size());
    return true;
  }

  Term number() {
    std::string lex;
    bool dot = false, exp = false;
    if (r_.peek() == '+' || r_.peek() == '-') {
      lex += r_.peek();
      r_.advance();
    }
    while (true) {
      char c = r_.peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        lex += c;
      } else if (c == '.' && !dot && !exp && std::isdigit(static_cast<unsigned char>(r_.peek(1)))) {
        dot = true;
        lex += c;
      } else if ((c == 'e' || c == 'E') && !exp) {
        exp = true;
        lex += c;
        if (r_.peek(1) == '+' || r_.peek(1) == '-') {
          r_.advance();
          lex += r_.peek();
        }
      } else {
        break;
      }
      r_.advance();
    }
    return Term::literal(lex, xsd(exp ? "double" : dot ? "decimal" : "integer"));
  }

  void statement() {
    auto subject = iri();
    while (true) {
      r_.skip_ws();
      std::string predicate;
      if (r_.peek() == 'a' && (std::isspace(static_cast<unsigned char>(r_.peek(1))) || r_.peek(1) == '<')) {
        r_.advance();
        predicate = rdf("type");
      } else {
        predicate = iri();
      }
      while (true) {
        r_.skip_ws();
        doc_.graph.add(subject, predicate, object());
        r_.skip_ws();
        if (r_.peek() == ',') {
          r_.advance();
          continue;
        }
        break;
      }
      if (r_.peek() == ';') {
        while (r_.peek() == ';') {
          r_.advance();
          r_.skip_ws();
        }
        if (r_.peek() == '.') break;
        continue;
      }
      break;
    }
    r_.skip_ws();
    r_.expect('.');
  }

  Reader r_;
  TurtleDocument doc_;
  std::string base_;
};

}  // namespace

std::string ntriples_term(const Term& t) {
  if (t.is_iri()) return "<" + escape_iri(t.value) + ">";
  std::string out = "\"" + escape_string(t.value) + "\"";
  if (!t.language.empty())
    out += "@" + t.language;
  else if (!t.datatype.empty())
    out += "^^<" + escape_iri(t.datatype) + ">";
  return out;
}

std::string to_ntriples(const Graph& g) {
  std::vector<std::string> lines;
  lines.reserve(g.size());
  for (const auto& t : g)
    lines.push_back("<" + escape_iri(t.subject) + "> <" + escape_iri(t.predicate) + "> " + ntriples_term(t.object) +
                    " .\n");
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l;
  return out;
}

std::string to_turtle(const Graph& g, const Prefixes& prefixes) {
  std::string out;
  for (const auto& [name, ns] : prefixes) out += "@prefix " + name + ": <" + escape_iri(ns) + "> .\n";
  if (!g.empty() && !prefixes.empty()) out += "\n";
  const auto type = rdf("type");
  // std::set<Triple> is ordered by subject then predicate, which is the
  // grouping we need.
  auto it = g.begin();
  while (it != g.end()) {
    const auto& subject = it->subject;
    out += turtle_iri(subject, prefixes);
    bool first_predicate = true;
    while (it != g.end() && it->subject == subject) {
      const auto& predicate = it->predicate;
      out += first_predicate ? " " : " ;\n    ";
      first_predicate = false;
      out += predicate == type ? "a" : turtle_iri(predicate, prefixes);
      bool first_object = true;
      while (it != g.end() && it->subject == subject && it->predicate == predicate) {
        out += first_object ? " " : " , ";
        first_object = false;
        out += turtle_term(it->object, prefixes);
        ++it;
      }
    }
    out += " .\n";
  }
  return out;
}

std::string serialize_graph(const Graph& g, Format format, const Prefixes& prefixes) {
  return format == Format::ntriples ? to_ntriples(g) : to_turtle(g, prefixes);
}

Graph parse_ntriples(std::string_view src) {
  Graph g;
  Reader r(src);
  while (true) {
    r.skip_ws();
    if (r.at_end()) break;
    if (r.peek() != '<') r.fail("expected subject IRI");
    auto s = r.read_iriref();
    r.skip_ws(false);
    if (r.peek() != '<') r.fail("expected predicate IRI");
    auto p = r.read_iriref();
    r.skip_ws(false);
    Term o;
    if (r.peek() == '<') {
      o = Term::iri(r.read_iriref());
    } else if (r.peek() == '"') {
      auto lex = r.read_string();
      if (r.peek() == '@')
        o = Term::literal(std::move(lex), {}, r.read_langtag());
      else if (r.peek() == '^' && r.peek(1) == '^') {
        r.advance(2);
        o = Term::literal(std::move(lex), r.read_iriref());
      } else {
        o = Term::literal(std::move(lex));
      }
    } else {
      r.fail("expected object");
    }
    r.skip_ws(false);
    r.expect('.');
    g.add(std::move(s), std::move(p), std::move(o));
  }
  return g;
}

TurtleDocument parse_turtle(std::string_view text) { return TurtleParser(text).run(); }

std::string expand_curie(std::string_view curie, const Prefixes& prefixes) {
  auto colon = curie.find(':');
  if (colon == std::string_view::npos)
    throw Error(Errc::undeclared_prefix, "'" + std::string(curie) + "' is not a CURIE");
  auto prefix = std::string(curie.substr(0, colon));
  auto it = prefixes.find(prefix);
  if (it == prefixes.end()) throw Error(Errc::undeclared_prefix, "prefix '" + prefix + "' is not declared");
  return it->second + std::string(curie.substr(colon + 1));
}

std::string compact_iri(std::string_view iri, const Prefixes& prefixes) {
  std::string best;
  size_t best_len = 0;
  for (const auto& [name, ns] : prefixes) {
    if (ns.size() > best_len && iri.starts_with(ns) && safe_local(iri.substr(ns.size()))) {
      best = name + ":" + std::string(iri.substr(ns.size()));
      best_len = ns.size();
    }
  }
  return best;
}

Prefixes standard_prefixes() {
  return {
      {"crm", std::string(kCrm)},   {"rdf", std::string(kRdf)},   {"rdfs", std::string(kRdfs)},
      {"xsd", std::string(kXsd)},   {"skos", std::string(kSkos)}, {"geo", std::string(kGeo)},
  };
}

}  // namespace scriptorium::rdf
