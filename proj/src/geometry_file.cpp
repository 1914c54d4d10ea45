#include "spinlie/geometry_file.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace spinlie {

namespace {

/// Value on the right of `key =` or a metric row: scalars, quoted strings,
/// bare words and bracketed lists.
struct Value {
  enum class Kind { Number, Word, Quoted, List };
  Kind kind = Kind::Word;
  double number = 0.0;
  std::string text;
  std::vector<Value> items;
};

class LineError : public InputError {
 public:
  LineError(int line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what) {}
};

class ValueParser {
 public:
  ValueParser(std::string_view src, int line) : src_(src), line_(line) {}

  /// Comma-separated sequence up to the end of the line.
  std::vector<Value> parseSequence() {
    std::vector<Value> out;
    skip();
    if (done()) return out;
    for (;;) {
      out.push_back(parseValue());
      skip();
      if (done()) return out;
      expect(',');
    }
  }

  Value parseSingle() {
    Value v = parseValue();
    skip();
    if (!done()) fail("trailing characters");
    return v;
  }

 private:
  bool done() const { return pos_ >= src_.size(); }
  void skip() {
    while (!done() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw LineError(line_, what + " (column " + std::to_string(pos_ + 1) + ")");
  }
  void expect(char c) {
    skip();
    if (done() || src_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Value parseValue() {
    skip();
    if (done()) fail("expected a value");
    const char c = src_[pos_];
    Value v;
    if (c == '[') {
      ++pos_;
      v.kind = Value::Kind::List;
      skip();
      if (!done() && src_[pos_] == ']') {
        ++pos_;
        return v;
      }
      for (;;) {
        v.items.push_back(parseValue());
        skip();
        if (!done() && src_[pos_] == ']') {
          ++pos_;
          return v;
        }
        expect(',');
      }
    }
    if (c == '"') {
      ++pos_;
      const auto end = src_.find('"', pos_);
      if (end == std::string_view::npos) fail("unterminated string");
      v.kind = Value::Kind::Quoted;
      v.text = std::string(src_.substr(pos_, end - pos_));
      pos_ = end + 1;
      return v;
    }
    const std::size_t start = pos_;
    while (!done() && src_[pos_] != ',' && src_[pos_] != ']' &&
           !std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    v.text = std::string(src_.substr(start, pos_ - start));
    if (v.text.empty()) fail("expected a value");
    double number = 0.0;
    const auto [ptr, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), number);
    if (ec == std::errc() && ptr == v.text.data() + v.text.size()) {
      v.kind = Value::Kind::Number;
      v.number = number;
    }
    return v;
  }

  std::string_view src_;
  int line_;
  std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

/// Drops a trailing `# comment` that is not inside a quoted string.
std::string_view stripComment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

double asNumber(const Value& v, int line) {
  if (v.kind != Value::Kind::Number) throw LineError(line, "expected a number, got '" + v.text + "'");
  return v.number;
}

int asInt(const Value& v, int line) {
  const double d = asNumber(v, line);
  if (d != static_cast<int>(d)) throw LineError(line, "expected an integer");
  return static_cast<int>(d);
}

const std::vector<Value>& asList(const Value& v, int line) {
  if (v.kind != Value::Kind::List) throw LineError(line, "expected a [list]");
  return v.items;
}

std::vector<std::string> asStrings(const Value& v, int line) {
  std::vector<std::string> out;
  for (const auto& item : asList(v, line)) {
    if (item.kind == Value::Kind::List) throw LineError(line, "unexpected nested list");
    out.push_back(item.text);
  }
  return out;
}

/// Expression source: a quoted string, or a bare number as shorthand.
const std::string& asExpression(const Value& v, int line) {
  if (v.kind != Value::Kind::Quoted && v.kind != Value::Kind::Number)
    throw LineError(line, "expected a quoted expression, got '" + v.text + "'");
  return v.text;
}

std::vector<std::string> asExpressions(const Value& v, int line) {
  std::vector<std::string> out;
  for (const auto& item : asList(v, line)) out.push_back(asExpression(item, line));
  return out;
}

struct Section {
  std::string kind;  // "", "metric", "vector_field", "spinor_field", "density_field"
  std::string name;
  int line = 0;
  std::map<std::string, std::pair<Value, int>> keys;
  std::vector<std::pair<std::vector<Value>, int>> rows;  // metric table
};

const Value& require(const Section& s, const std::string& key) {
  const auto it = s.keys.find(key);
  if (it == s.keys.end())
    throw LineError(s.line, "section [" + s.kind + (s.name.empty() ? "" : " " + s.name) +
                                "] is missing '" + key + "'");
  return it->second.first;
}

int lineOf(const Section& s, const std::string& key) {
  const auto it = s.keys.find(key);
  return it == s.keys.end() ? s.line : it->second.second;
}

template <typename F>
auto atLine(int line, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const LineError&) {
    throw;
  } catch (const ParseError& e) {
    throw e.withContext("line " + std::to_string(line) + ": ");
  } catch (const InputError& e) {
    throw LineError(line, e.what());
  }
}

}  // namespace

GeometrySpec parseGeometry(std::string_view text) {
  std::vector<Section> sections(1);
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    const std::string_view line = trim(stripComment(raw));
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']' && line.find('"') == std::string_view::npos &&
        (sections.back().kind != "metric" || line.find(',') == std::string_view::npos)) {
      std::istringstream header{std::string(line.substr(1, line.size() - 2))};
      Section s;
      s.line = lineNo;
      header >> s.kind >> s.name;
      std::string extra;
      if (header >> extra) throw LineError(lineNo, "malformed section header");
      static const std::set<std::string> kinds{"metric", "vector_field", "spinor_field",
                                               "density_field"};
      if (!kinds.count(s.kind)) throw LineError(lineNo, "unknown section [" + s.kind + "]");
      if ((s.kind == "metric") != s.name.empty())
        throw LineError(lineNo, s.kind == "metric" ? "[metric] takes no name"
                                                   : "[" + s.kind + "] needs a name");
      sections.push_back(std::move(s));
      continue;
    }
    Section& current = sections.back();
    if (current.kind == "metric") {
      current.rows.emplace_back(ValueParser(line, lineNo).parseSequence(), lineNo);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw LineError(lineNo, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw LineError(lineNo, "empty key");
    if (current.keys.count(key)) throw LineError(lineNo, "duplicate key '" + key + "'");
    current.keys.emplace(key, std::make_pair(ValueParser(trim(line.substr(eq + 1)), lineNo).parseSingle(),
                                             lineNo));
  }

  const Section& head = sections.front();
  static const std::set<std::string> headerKeys{"dim", "signature", "coords", "domain"};
  for (const auto& [key, value] : head.keys)
    if (!headerKeys.count(key)) throw LineError(value.second, "unknown header key '" + key + "'");

  const int dim = asInt(require(head, "dim"), lineOf(head, "dim"));
  const auto& sigList = asList(require(head, "signature"), lineOf(head, "signature"));
  if (sigList.size() != 2) throw LineError(lineOf(head, "signature"), "signature must be [p, q]");
  const Signature sig{asInt(sigList[0], lineOf(head, "signature")),
                      asInt(sigList[1], lineOf(head, "signature"))};
  if (sig.p < 0 || sig.q < 0 || sig.dim() != dim)
    throw LineError(lineOf(head, "signature"), "signature does not add up to dim");
  const auto coords = asStrings(require(head, "coords"), lineOf(head, "coords"));

  const Section* metric = nullptr;
  for (const auto& s : sections)
    if (s.kind == "metric") {
      if (metric) throw LineError(s.line, "duplicate [metric] section");
      metric = &s;
    }
  if (!metric) throw InputError("missing [metric] section");
  if (static_cast<int>(metric->rows.size()) != dim)
    throw LineError(metric->line, "[metric] needs " + std::to_string(dim) + " rows");

  std::vector<std::string> upper;
  std::vector<std::pair<std::pair<int, int>, std::pair<std::string, int>>> lowerChecks;
  for (int mu = 0; mu < dim; ++mu) {
    const auto& [row, line] = metric->rows[mu];
    const int n = static_cast<int>(row.size());
    if (n != dim && n != dim - mu)
      throw LineError(line, "metric row " + std::to_string(mu) + " needs " + std::to_string(dim - mu) +
                                " (upper triangle) or " + std::to_string(dim) + " entries");
    const int offset = n == dim ? 0 : mu;
    for (int j = 0; j < n; ++j) {
      const std::string& src = asExpression(row[j], line);
      atLine(line, [&] { return parse(src, coords); });
      const int nu = j + offset;
      if (nu >= mu)
        upper.push_back(src);
      else
        lowerChecks.push_back({{mu, nu}, {src, line}});
    }
  }

  GeometrySpec spec = atLine(head.line, [&] { return makeGeometry(sig, coords, upper); });
  for (const auto& [idx, src] : lowerChecks) {
    const Expression lower = atLine(src.second, [&] { return spec.expr(src.first); });
    if (!structurallyEqual(lower, spec.metricEntry(idx.second, idx.first)))
      throw LineError(src.second, "metric is not symmetric in entry (" + std::to_string(idx.first) +
                                      "," + std::to_string(idx.second) + ")");
  }

  if (head.keys.count("domain")) {
    const int line = lineOf(head, "domain");
    const auto& boxes = asList(require(head, "domain"), line);
    if (static_cast<int>(boxes.size()) != dim) throw LineError(line, "domain needs one [lo, hi] per coordinate");
    for (int mu = 0; mu < dim; ++mu) {
      const auto& box = asList(boxes[mu], line);
      if (box.size() != 2) throw LineError(line, "domain entries are [lo, hi]");
      const double lo = asNumber(box[0], line), hi = asNumber(box[1], line);
      if (!(lo <= hi)) throw LineError(line, "domain entry has lo > hi");
      spec.domain[mu] = {lo, hi};
    }
  }

  std::set<std::string> names;
  for (const auto& s : sections) {
    if (s.kind.empty() || s.kind == "metric") continue;
    if (!names.insert(s.name).second) throw LineError(s.line, "duplicate field name '" + s.name + "'");
    auto allowOnly = [&](std::set<std::string> allowed) {
      for (const auto& [key, value] : s.keys)
        if (!allowed.count(key)) throw LineError(value.second, "unknown key '" + key + "'");
    };
    if (s.kind == "vector_field") {
      allowOnly({"components"});
      const int line = lineOf(s, "components");
      spec.vectors.push_back(atLine(line, [&] {
        return makeVectorField(spec, s.name, asExpressions(require(s, "components"), line));
      }));
    } else if (s.kind == "spinor_field") {
      allowOnly({"re", "im"});
      const int line = lineOf(s, "re");
      spec.spinors.push_back(atLine(line, [&] {
        return makeSpinorField(spec, s.name, asExpressions(require(s, "re"), line),
                               asExpressions(require(s, "im"), lineOf(s, "im")));
      }));
    } else {
      allowOnly({"rank", "weight", "components"});
      const int line = lineOf(s, "components");
      const auto& rank = asList(require(s, "rank"), lineOf(s, "rank"));
      if (rank.size() != 2) throw LineError(lineOf(s, "rank"), "rank must be [upper, lower]");
      const int up = asInt(rank[0], lineOf(s, "rank")), low = asInt(rank[1], lineOf(s, "rank"));
      const double weight =
          s.keys.count("weight") ? asNumber(require(s, "weight"), lineOf(s, "weight")) : 0.0;
      spec.densities.push_back(atLine(line, [&] {
        return makeDensityField(spec, s.name, up, low, weight,
                                asExpressions(require(s, "components"), line));
      }));
    }
  }
  validate(spec);
  return spec;
}

GeometrySpec loadGeometry(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open geometry file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parseGeometry(buf.str());
  } catch (const ParseError& e) {
    throw e.withContext(path.string() + ": ");
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace spinlie
