#include "scriptorium/xml.hpp"

#include <expat.h>

#include <memory>

#include "scriptorium/error.hpp"

namespace scriptorium::xml {

std::optional<std::string_view> Element::attr(std::string_view key) const {
  for (const auto& [k, v] : attributes)
    if (k == key) return std::string_view(v);
  return std::nullopt;
}

std::string Element::attr_or(std::string_view key, std::string_view fallback) const {
  auto v = attr(key);
  return std::string(v ? *v : fallback);
}

Element& Element::set(std::string key, std::string value) {
  for (auto& [k, v] : attributes) {
    if (k == key) {
      v = std::move(value);
      return *this;
    }
  }
  attributes.emplace_back(std::move(key), std::move(value));
  return *this;
}

Element& Element::add(Element child) {
  children.push_back(std::move(child));
  return children.back();
}

Element& Element::add_text(std::string child_name, std::string child_text) {
  Element e(std::move(child_name));
  e.text = std::move(child_text);
  return add(std::move(e));
}

std::vector<const Element*> Element::all(std::string_view child_name) const {
  std::vector<const Element*> out;
  for (const auto& c : children)
    if (c.name == child_name) out.push_back(&c);
  return out;
}

const Element* Element::first(std::string_view child_name) const {
  for (const auto& c : children)
    if (c.name == child_name) return &c;
  return nullptr;
}

namespace {

struct ParseState {
  XML_Parser parser = nullptr;
  std::vector<Element> stack;
  std::optional<Element> root;
};

void XMLCALL on_start(void* data, const XML_Char* name, const XML_Char** atts) {
  auto* st = static_cast<ParseState*>(data);
  Element e(name);
  e.line = static_cast<int>(XML_GetCurrentLineNumber(st->parser));
  for (int i = 0; atts[i] != nullptr; i += 2) e.attributes.emplace_back(atts[i], atts[i + 1]);
  st->stack.push_back(std::move(e));
}

void XMLCALL on_end(void* data, const XML_Char* /*name*/) {
  auto* st = static_cast<ParseState*>(data);
  Element done = std::move(st->stack.back());
  st->stack.pop_back();
  if (!done.children.empty()) done.text.clear();
  if (st->stack.empty())
    st->root = std::move(done);
  else
    st->stack.back().children.push_back(std::move(done));
}

void XMLCALL on_chars(void* data, const XML_Char* s, int len) {
  auto* st = static_cast<ParseState*>(data);
  if (!st->stack.empty()) st->stack.back().text.append(s, static_cast<size_t>(len));
}

struct ParserDeleter {
  void operator()(XML_ParserStruct* p) const { XML_ParserFree(p); }
};

}  // namespace

Element parse(std::string_view document) {
  std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(XML_ParserCreate("UTF-8"));
  ParseState st;
  st.parser = parser.get();
  XML_SetUserData(parser.get(), &st);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_chars);
  if (XML_Parse(parser.get(), document.data(), static_cast<int>(document.size()), XML_TRUE) ==
      XML_STATUS_ERROR) {
    auto line = XML_GetCurrentLineNumber(parser.get());
    auto col = XML_GetCurrentColumnNumber(parser.get());
    throw Error(Errc::syntax, std::to_string(line) + ":" + std::to_string(col) + ": " +
                                  XML_ErrorString(XML_GetErrorCode(parser.get())));
  }
  if (!st.root) throw Error(Errc::syntax, "1:0: empty document");
  return std::move(*st.root);
}

std::string escape_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string escape_attribute(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      case '\t': out += "&#9;"; break;
      default: out += c;
    }
  }
  return out;
}

namespace {

void write_element(std::string& out, const Element& e, int depth, int indent) {
  out.append(static_cast<size_t>(depth * indent), ' ');
  out += '<';
  out += e.name;
  for (const auto& [k, v] : e.attributes) {
    out += ' ';
    out += k;
    out += "=\"";
    out += escape_attribute(v);
    out += '"';
  }
  if (e.children.empty()) {
    if (e.text.empty()) {
      out += "/>\n";
    } else {
      out += '>';
      out += escape_text(e.text);
      out += "</" + e.name + ">\n";
    }
    return;
  }
  out += ">\n";
  for (const auto& c : e.children) write_element(out, c, depth + 1, indent);
  out.append(static_cast<size_t>(depth * indent), ' ');
  out += "</" + e.name + ">\n";
}

}  // namespace

std::string write(const Element& root, const WriteOptions& options) {
  std::string out;
  if (options.declaration) out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  write_element(out, root, 0, options.indent);
  return out;
}

bool is_valid_xml_text(std::string_view s) {
  size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
      if (c < 0x20 && c != '\t' && c != '\n' && c != '\r') return false;
      ++i;
      continue;
    }
    int len = (c >= 0xF0) ? 4 : (c >= 0xE0) ? 3 : (c >= 0xC0) ? 2 : 0;
    if (len == 0 || i + static_cast<size_t>(len) > s.size()) return false;
    char32_t cp = c & (0x7F >> len);
    for (int k = 1; k < len; ++k) {
      auto cc = static_cast<unsigned char>(s[i + static_cast<size_t>(k)]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if ((cp >= 0xD800 && cp <= 0xDFFF) || cp == 0xFFFE || cp == 0xFFFF || cp > 0x10FFFF)
      return false;
    i += static_cast<size_t>(len);
  }
  return true;
}

}  // namespace scriptorium::xml
