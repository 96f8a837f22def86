#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scriptorium::xml {

/// Minimal element tree. Mixed content is not modelled: an element carries
/// either character data (`text`) or child elements. Whitespace between
/// child elements is dropped on parse.
struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  std::string text;
  int line = 0;

  explicit Element(std::string n = {}) : name(std::move(n)) {}

  std::optional<std::string_view> attr(std::string_view key) const;
  std::string attr_or(std::string_view key, std::string_view fallback) const;
  Element& set(std::string key, std::string value);
  Element& add(Element child);
  Element& add_text(std::string name, std::string text);

  std::vector<const Element*> all(std::string_view child_name) const;
  const Element* first(std::string_view child_name) const;
};

/// Parses a complete document and returns its root element. Throws
/// scriptorium::Error(Errc::syntax) whose message carries line:column.
Element parse(std::string_view document);

struct WriteOptions {
  bool declaration = true;
  int indent = 2;
};

std::string write(const Element& root, const WriteOptions& options = {});

std::string escape_text(std::string_view raw);
std::string escape_attribute(std::string_view raw);

/// True when every code point is allowed in XML 1.0 character data.
bool is_valid_xml_text(std::string_view utf8);

}  // namespace scriptorium::xml
