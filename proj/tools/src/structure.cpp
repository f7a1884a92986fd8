#include "srkit/cli/structure.hpp"

#include "srkit/error.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <variant>

namespace srkit::cli {

namespace {

struct Value {
  enum class Kind { string, number, boolean, array } kind = Kind::string;
  std::string text;
  bool flag = false;
  std::vector<Value> items;
  std::size_t line = 0, column = 0;
};

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

  char get() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, column_); }

  void skip_blanks() {
    while (!done() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) get();
  }

  /// Blanks, newlines and comments, as allowed inside arrays.
  void skip_space() {
    while (!done()) {
      if (peek() == '#') {
        while (!done() && peek() != '\n') get();
      } else if (std::isspace(static_cast<unsigned char>(peek()))) {
        get();
      } else {
        break;
      }
    }
  }

  void end_of_line() {
    skip_blanks();
    if (peek() == '#')
      while (!done() && peek() != '\n') get();
    if (!done() && peek() != '\n') fail(std::string("unexpected '") + peek() + "'");
    if (!done()) get();
  }

  std::string identifier() {
    std::string id;
    while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) id += get();
    if (id.empty()) fail("expected a key");
    return id;
  }

  Value value() {
    Value v;
    v.line = line_;
    v.column = column_;
    char c = peek();
    if (c == '"') {
      get();
      v.kind = Value::Kind::string;
      while (true) {
        if (done() || peek() == '\n') fail("unterminated string");
        char ch = get();
        if (ch == '"') break;
        if (ch == '\\') {
          if (done()) fail("unterminated string");
          ch = get();
        }
        v.text += ch;
      }
    } else if (c == '[') {
      get();
      v.kind = Value::Kind::array;
      skip_space();
      while (peek() != ']') {
        if (done()) fail("unterminated array");
        v.items.push_back(value());
        skip_space();
        if (peek() == ',') {
          get();
          skip_space();
        } else if (peek() != ']') {
          fail("expected ',' or ']'");
        }
      }
      get();
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string word = identifier();
      if (word == "true" || word == "false") {
        v.kind = Value::Kind::boolean;
        v.flag = word == "true";
      } else {
        throw ParseError("unquoted value '" + word + "'", v.line, v.column);
      }
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
      v.kind = Value::Kind::number;
      while (!done() && (std::isdigit(static_cast<unsigned char>(peek())) || std::string_view("+-./").find(peek()) != std::string_view::npos))
        v.text += get();
    } else {
      fail("expected a value");
    }
    return v;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

[[noreturn]] void fail_at(const Value& v, const std::string& msg) { throw ParseError(msg, v.line, v.column); }

std::string as_string(const Value& v, const std::string& key) {
  if (v.kind != Value::Kind::string) fail_at(v, "'" + key + "' must be a string");
  return v.text;
}

Rational as_rational(const Value& v, const std::string& key) {
  if (v.kind != Value::Kind::number && v.kind != Value::Kind::string) fail_at(v, "'" + key + "' must be a number");
  try {
    return parse_rational(v.text);
  } catch (const Error& e) {
    fail_at(v, "'" + key + "': " + e.what());
  }
}

std::vector<Value> as_array(const Value& v, const std::string& key) {
  if (v.kind != Value::Kind::array) fail_at(v, "'" + key + "' must be an array");
  return v.items;
}

/// Re-anchors an expression error at the string's position in the file.
template <class F>
auto parse_expression(const Value& v, F&& f) {
  try {
    return f(v.text);
  } catch (const ParseError& e) {
    // The expression starts one column after the opening quote.
    std::string msg = e.what();
    auto colon = msg.find(": ");
    throw ParseError(colon == std::string::npos ? msg : msg.substr(colon + 2), v.line, v.column + e.column());
  } catch (const Error& e) {
    fail_at(v, e.what());
  }
}

}  // namespace

Structure parse_structure_text(std::string_view text, const std::string& source) {
  Scanner sc(text);
  std::map<std::string, Value> top;
  std::map<std::string, Value> params;
  std::string table;
  while (true) {
    sc.skip_space();
    if (sc.done()) break;
    if (sc.peek() == '[') {
      sc.get();
      sc.skip_blanks();
      table = sc.identifier();
      sc.skip_blanks();
      if (sc.peek() != ']') sc.fail("expected ']'");
      sc.get();
      if (table != "params") throw ParseError("unknown table [" + table + "]", sc.line(), 1);
      sc.end_of_line();
      continue;
    }
    std::size_t key_line = sc.line(), key_col = sc.column();
    std::string key = sc.identifier();
    sc.skip_blanks();
    if (sc.peek() != '=') sc.fail("expected '='");
    sc.get();
    sc.skip_blanks();
    Value v = sc.value();
    sc.end_of_line();
    auto& dest = table.empty() ? top : params;
    if (dest.count(key)) throw ParseError("duplicate key '" + key + "'", key_line, key_col);
    dest.emplace(key, std::move(v));
  }

  static const std::vector<std::string> known{"name", "dimension", "fields", "weights", "density_log_grad", "base_point", "complete"};
  for (const auto& [k, v] : top)
    if (std::find(known.begin(), known.end(), k) == known.end()) fail_at(v, "unknown key '" + k + "'");

  Structure s;
  s.source = source;
  for (const auto& [k, v] : params) s.params[k] = as_rational(v, k);

  if (!top.count("dimension")) throw ParseError("missing key 'dimension'", 1, 1);
  {
    const Value& v = top.at("dimension");
    Rational d = as_rational(v, "dimension");
    if (d.get_den() != 1 || d < 1) fail_at(v, "'dimension' must be a positive integer");
    s.dimension = d.get_num().get_ui();
  }
  s.name = top.count("name") ? as_string(top.at("name"), "name") : std::filesystem::path(source).stem().string();

  if (!top.count("fields")) throw ParseError("missing key 'fields'", 1, 1);
  std::vector<VectorField> fields;
  for (const auto& item : as_array(top.at("fields"), "fields")) {
    std::string t = as_string(item, "fields");
    s.field_text.push_back(t);
    fields.push_back(parse_expression(item, [&](const std::string& e) { return parse_vector_field(e, s.dimension, s.params); }));
  }
  if (fields.empty()) fail_at(top.at("fields"), "'fields' must not be empty");
  s.frame = SRFrame(s.name, std::move(fields));

  if (top.count("weights")) {
    const Value& v = top.at("weights");
    std::vector<int> w;
    if (v.kind == Value::Kind::string) {
      try {
        w = parse_weights(v.text).values();
      } catch (const Error& e) {
        fail_at(v, e.what());
      }
    } else {
      for (const auto& item : as_array(v, "weights")) {
        Rational q = as_rational(item, "weights");
        if (q.get_den() != 1 || q < 1) fail_at(item, "weights must be positive integers");
        w.push_back(static_cast<int>(q.get_num().get_si()));
      }
    }
    if (w.size() != s.dimension) fail_at(v, "'weights' has " + std::to_string(w.size()) + " entries, expected " + std::to_string(s.dimension));
    try {
      s.weights = WeightVector(w);
    } catch (const Error& e) {
      fail_at(v, e.what());
    }
  }

  s.density = Density::lebesgue(s.dimension);
  if (top.count("density_log_grad")) {
    const Value& v = top.at("density_log_grad");
    auto items = as_array(v, "density_log_grad");
    if (items.size() != s.dimension) fail_at(v, "'density_log_grad' needs one entry per coordinate");
    for (std::size_t i = 0; i < items.size(); ++i) {
      s.density_text.push_back(as_string(items[i], "density_log_grad"));
      s.density.log_gradient[i] =
          parse_expression(items[i], [&](const std::string& e) { return parse_rational_function(e, s.dimension, s.params); });
    }
  }

  s.base_point = Point(s.dimension, Rational(0));
  if (top.count("base_point")) {
    const Value& v = top.at("base_point");
    Point p;
    if (v.kind == Value::Kind::string) {
      try {
        p = parse_point(v.text);
      } catch (const Error& e) {
        fail_at(v, e.what());
      }
    } else {
      for (const auto& item : as_array(v, "base_point")) p.push_back(as_rational(item, "base_point"));
    }
    if (p.size() != s.dimension) fail_at(v, "'base_point' has wrong dimension");
    s.base_point = p;
  }

  if (top.count("complete")) {
    const Value& v = top.at("complete");
    if (v.kind != Value::Kind::boolean) fail_at(v, "'complete' must be true or false");
    s.complete = v.flag;
  }
  return s;
}

Structure parse_structure(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open structure file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_structure_text(buf.str(), path.string());
}

}  // namespace srkit::cli
