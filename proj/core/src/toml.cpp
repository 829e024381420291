#include "hintloop/toml.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "hintloop/errors.hpp"

namespace hintloop {

using nlohmann::json;

namespace {

[[noreturn]] void bad(std::size_t line, const std::string& what) {
  raise(ErrorCode::InvalidConfig, "toml line " + std::to_string(line) + ": " + what);
}

struct Cursor {
  std::string_view s;
  std::size_t i = 0;
  std::size_t line;

  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n')) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size() || s[i] == '#';
  }
  char peek() { return i < s.size() ? s[i] : '\0'; }
};

json parse_value(Cursor& c);

std::string parse_string(Cursor& c) {
  char quote = c.s[c.i];
  ++c.i;
  std::string out;
  while (c.i < c.s.size() && c.s[c.i] != quote) {
    char ch = c.s[c.i];
    if (quote == '"' && ch == '\\') {
      ++c.i;
      if (c.i >= c.s.size()) bad(c.line, "dangling escape");
      switch (c.s[c.i]) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: bad(c.line, "unsupported escape");
      }
    } else {
      out += ch;
    }
    ++c.i;
  }
  if (c.i >= c.s.size()) bad(c.line, "unterminated string");
  ++c.i;
  return out;
}

std::string parse_bare_key(Cursor& c) {
  c.skip_ws();
  if (c.peek() == '"' || c.peek() == '\'') return parse_string(c);
  std::string out;
  while (c.i < c.s.size()) {
    char ch = c.s[c.i];
    if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-') {
      out += ch;
      ++c.i;
    } else {
      break;
    }
  }
  if (out.empty()) bad(c.line, "expected a key");
  return out;
}

json parse_array(Cursor& c) {
  ++c.i;  // '['
  json arr = json::array();
  while (true) {
    c.skip_ws();
    if (c.peek() == ']') {
      ++c.i;
      return arr;
    }
    if (c.i >= c.s.size()) bad(c.line, "unterminated array");
    arr.push_back(parse_value(c));
    c.skip_ws();
    if (c.peek() == ',') {
      ++c.i;
      continue;
    }
    if (c.peek() == ']') {
      ++c.i;
      return arr;
    }
    bad(c.line, "expected ',' or ']' in array");
  }
}

json parse_inline_table(Cursor& c) {
  ++c.i;  // '{'
  json obj = json::object();
  c.skip_ws();
  if (c.peek() == '}') {
    ++c.i;
    return obj;
  }
  while (true) {
    std::string key = parse_bare_key(c);
    c.skip_ws();
    if (c.peek() != '=') bad(c.line, "expected '=' in inline table");
    ++c.i;
    c.skip_ws();
    obj[key] = parse_value(c);
    c.skip_ws();
    if (c.peek() == ',') {
      ++c.i;
      continue;
    }
    if (c.peek() == '}') {
      ++c.i;
      return obj;
    }
    bad(c.line, "expected ',' or '}' in inline table");
  }
}

json parse_value(Cursor& c) {
  c.skip_ws();
  char ch = c.peek();
  if (ch == '"' || ch == '\'') return parse_string(c);
  if (ch == '[') return parse_array(c);
  if (ch == '{') return parse_inline_table(c);

  std::string tok;
  while (c.i < c.s.size()) {
    char t = c.s[c.i];
    if (t == ',' || t == ']' || t == '}' || t == '#' || t == ' ' || t == '\t' ||
        t == '\n') {
      break;
    }
    tok += t;
    ++c.i;
  }
  if (tok == "true") return true;
  if (tok == "false") return false;
  if (tok.empty()) bad(c.line, "expected a value");

  bool is_float = tok.find_first_of(".eE") != std::string::npos &&
                  tok.find_first_not_of("+-0123456789.eE") == std::string::npos;
  try {
    if (is_float) return std::stod(tok);
    std::size_t used = 0;
    long long v = std::stoll(tok, &used);
    if (used == tok.size()) return v;
    return std::stod(tok);
  } catch (const std::exception&) {
    bad(c.line, "cannot parse value '" + tok + "'");
  }
}

json* descend(json& root, const std::vector<std::string>& path,
              std::size_t line) {
  json* node = &root;
  for (const auto& part : path) {
    if (node->is_array()) node = &node->back();
    if (!node->is_object()) bad(line, "key path crosses a non-table");
    if (!node->contains(part)) (*node)[part] = json::object();
    node = &(*node)[part];
  }
  if (node->is_array()) node = &node->back();
  return node;
}

std::vector<std::string> parse_key_path(const std::string& text,
                                        std::size_t line) {
  std::vector<std::string> parts;
  Cursor c{text, 0, line};
  while (true) {
    parts.push_back(parse_bare_key(c));
    c.skip_ws();
    if (c.peek() == '.') {
      ++c.i;
      continue;
    }
    break;
  }
  c.skip_ws();
  if (c.i < c.s.size()) bad(line, "trailing characters in table header");
  return parts;
}

// Strips comments (outside strings) and reports bracket balance so multiline
// arrays can be joined into one logical line.
std::string strip_comment(const std::string& line, std::size_t line_no,
                          int& depth) {
  std::string out;
  char quote = '\0';
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quote) {
      out += ch;
      if (ch == '\\' && quote == '"' && i + 1 < line.size()) {
        out += line[i + 1];
        ++i;
      } else if (ch == quote) {
        quote = '\0';
      }
      continue;
    }
    if (ch == '"' || ch == '\'') {
      quote = ch;
      out += ch;
      continue;
    }
    if (ch == '#') break;
    if (ch == '[' || ch == '{') ++depth;
    if (ch == ']' || ch == '}') --depth;
    out += ch;
  }
  if (quote) bad(line_no, "unterminated string");
  return out;
}

}  // namespace

json parse_toml(std::string_view text) {
  json root = json::object();
  json* current = &root;

  std::istringstream in{std::string(text)};
  std::string physical;
  std::size_t line_no = 0;
  while (std::getline(in, physical)) {
    ++line_no;
    std::size_t logical_start = line_no;
    int depth = 0;
    std::string line = strip_comment(physical, line_no, depth);
    while (depth > 0 && std::getline(in, physical)) {
      ++line_no;
      line += '\n';
      line += strip_comment(physical, line_no, depth);
    }
    if (depth > 0) bad(logical_start, "unbalanced brackets");

    std::string_view sv(line);
    std::size_t begin = sv.find_first_not_of(" \t");
    if (begin == std::string_view::npos) continue;
    std::size_t end = sv.find_last_not_of(" \t\r");
    sv = sv.substr(begin, end - begin + 1);
    if (sv.empty()) continue;

    if (sv.front() == '[') {
      bool is_array = sv.size() > 1 && sv[1] == '[';
      std::size_t close = sv.rfind(is_array ? "]]" : "]");
      if (close == std::string_view::npos) bad(logical_start, "unterminated table header");
      std::string header(sv.substr(is_array ? 2 : 1, close - (is_array ? 2 : 1)));
      auto path = parse_key_path(header, logical_start);
      if (is_array) {
        json* parent = &root;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
          if (parent->is_array()) parent = &parent->back();
          if (!parent->contains(path[i])) (*parent)[path[i]] = json::object();
          parent = &(*parent)[path[i]];
        }
        if (parent->is_array()) parent = &parent->back();
        json& slot = (*parent)[path.back()];
        if (slot.is_null()) slot = json::array();
        if (!slot.is_array()) bad(logical_start, "redefining key as array of tables");
        slot.push_back(json::object());
        current = &slot.back();
      } else {
        current = descend(root, path, logical_start);
      }
      continue;
    }

    Cursor c{std::string_view(line), begin, logical_start};
    std::string key = parse_bare_key(c);
    std::vector<std::string> path{key};
    c.skip_ws();
    while (c.peek() == '.') {
      ++c.i;
      path.push_back(parse_bare_key(c));
      c.skip_ws();
    }
    if (c.peek() != '=') bad(logical_start, "expected '=' after key");
    ++c.i;
    json value = parse_value(c);
    if (!c.done()) bad(logical_start, "trailing characters after value");

    json* node = current;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      if (!node->contains(path[i])) (*node)[path[i]] = json::object();
      node = &(*node)[path[i]];
    }
    (*node)[path.back()] = std::move(value);
  }
  return root;
}

json parse_toml_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    raise(ErrorCode::Io, "cannot read " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_toml(buf.str());
}

}  // namespace hintloop
