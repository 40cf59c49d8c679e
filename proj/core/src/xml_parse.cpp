// Copyright 2026 The Fixq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Recursive-descent parser for the supported XML subset: elements,
// attributes, text. Comments are skipped, an XML declaration and a DOCTYPE
// are tolerated and ignored, the five predefined entities are expanded.
// Namespaces, processing instructions, and CDATA are out of scope. Node ids
// are assigned in preorder while parsing, attributes directly after their
// owner element, so id order equals document order by construction.

#include <cctype>
#include <string>
#include <string_view>

#include "fixq/xdm.hpp"

namespace fixq {

class XmlParser {
 public:
  XmlParser(NodeStore& store, std::string_view input) : store_(store), input_(input) {}

  NodeId parse() {
    NodeId doc = store_.append_node(NodeKind::Document, "", "", std::nullopt);
    skip_prolog();
    if (eof() || peek() != '<') fail("expected root element");
    NodeId root = parse_element(doc);
    store_.nodes_[doc.value].children.push_back(root);
    skip_misc();
    if (!eof()) fail("content after root element");
    return doc;
  }

 private:
  bool eof() const { return pos_ >= input_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < input_.size() ? input_[pos_ + ahead] : '\0';
  }
  bool starts_with(std::string_view s) const { return input_.substr(pos_).starts_with(s); }
  void advance(std::size_t n = 1) { pos_ += n; }

  [[noreturn]] void fail(const std::string& reason) const {
    throw MalformedXmlError(pos_, reason);
  }

  void skip_whitespace() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  void skip_comment() {
    advance(4);  // "<!--"
    std::size_t end = input_.find("-->", pos_);
    if (end == std::string_view::npos) fail("unterminated comment");
    pos_ = end + 3;
  }

  void skip_doctype() {
    advance(2);  // "<!"
    int bracket_depth = 0;
    while (!eof()) {
      char c = peek();
      if (c == '[') ++bracket_depth;
      if (c == ']') --bracket_depth;
      if (c == '>' && bracket_depth <= 0) {
        advance();
        return;
      }
      advance();
    }
    fail("unterminated <!DOCTYPE ...>");
  }

  void skip_prolog() {
    skip_whitespace();
    if (starts_with("<?xml")) {
      std::size_t end = input_.find("?>", pos_);
      if (end == std::string_view::npos) fail("unterminated XML declaration");
      pos_ = end + 2;
    }
    skip_misc();
  }

  void skip_misc() {
    for (;;) {
      skip_whitespace();
      if (starts_with("<!--")) {
        skip_comment();
      } else if (starts_with("<!")) {
        skip_doctype();
      } else {
        return;
      }
    }
  }

  static bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  }

  std::string parse_name() {
    if (eof() || !is_name_start(peek())) fail("expected a name");
    std::size_t start = pos_;
    while (!eof() && is_name_char(peek())) advance();
    if (peek() == ':') fail("namespaces are not supported");
    return std::string(input_.substr(start, pos_ - start));
  }

  std::string decode_entity() {
    // caller consumed nothing; pos_ is at '&'
    std::size_t semi = input_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 6) fail("unterminated entity reference");
    std::string_view name = input_.substr(pos_ + 1, semi - pos_ - 1);
    pos_ = semi + 1;
    if (name == "amp") return "&";
    if (name == "lt") return "<";
    if (name == "gt") return ">";
    if (name == "quot") return "\"";
    if (name == "apos") return "'";
    fail("unsupported entity &" + std::string(name) + ";");
  }

  std::string parse_attribute_value() {
    char quote = peek();
    if (quote != '"' && quote != '\'') fail("expected quoted attribute value");
    advance();
    std::string value;
    while (!eof() && peek() != quote) {
      if (peek() == '&') {
        value += decode_entity();
      } else if (peek() == '<') {
        fail("'<' in attribute value");
      } else {
        value.push_back(peek());
        advance();
      }
    }
    if (eof()) fail("unterminated attribute value");
    advance();
    return value;
  }

  NodeId parse_element(NodeId parent) {
    advance();  // '<'
    std::string name = parse_name();
    NodeId elem = store_.append_node(NodeKind::Element, name, "", parent);
    for (;;) {
      skip_whitespace();
      if (eof()) fail("unterminated start tag");
      if (peek() == '/' || peek() == '>') break;
      std::string attr_name = parse_name();
      skip_whitespace();
      if (peek() != '=') fail("expected '=' after attribute name");
      advance();
      skip_whitespace();
      std::string attr_value = parse_attribute_value();
      for (NodeId existing : store_.nodes_[elem.value].attributes) {
        if (store_.nodes_[existing.value].name == attr_name)
          fail("duplicate attribute " + attr_name);
      }
      NodeId attr = store_.append_node(NodeKind::Attribute, attr_name, attr_value, elem);
      store_.nodes_[elem.value].attributes.push_back(attr);
    }
    if (peek() == '/') {
      advance();
      if (peek() != '>') fail("expected '>' after '/'");
      advance();
      return elem;
    }
    advance();  // '>'
    parse_content(elem);
    // parse_content stops at "</"
    advance(2);
    std::string closing = parse_name();
    if (closing != name) fail("mismatched end tag </" + closing + ">, expected </" + name + ">");
    skip_whitespace();
    if (peek() != '>') fail("expected '>' in end tag");
    advance();
    return elem;
  }

  void parse_content(NodeId parent) {
    std::string text;
    auto flush_text = [&] {
      if (text.empty()) return;
      NodeId t = store_.append_node(NodeKind::Text, "", text, parent);
      store_.nodes_[parent.value].children.push_back(t);
      text.clear();
    };
    while (!eof()) {
      char c = peek();
      if (c == '<') {
        if (starts_with("</")) {
          flush_text();
          return;
        }
        if (starts_with("<!--")) {
          flush_text();
          skip_comment();
          continue;
        }
        if (starts_with("<?") || starts_with("<!")) fail("unsupported markup in content");
        flush_text();
        NodeId child = parse_element(parent);
        store_.nodes_[parent.value].children.push_back(child);
      } else if (c == '&') {
        text += decode_entity();
      } else {
        text.push_back(c);
        advance();
      }
    }
    fail("unterminated element content");
  }

  NodeStore& store_;
  std::string_view input_;
  std::size_t pos_ = 0;
};

NodeId NodeStore::parse_document(std::string_view xml) {
  return XmlParser(*this, xml).parse();
}

}  // namespace fixq
