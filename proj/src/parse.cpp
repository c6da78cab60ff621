#include "logcartier/parse.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "logcartier/error.hpp"

namespace logcartier {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

int bracket_balance(const std::string& s) {
  int depth = 0;
  for (char c : s) {
    if (c == '[' || c == '(') ++depth;
    if (c == ']' || c == ')') --depth;
  }
  return depth;
}

[[noreturn]] void fail_at(const std::string& path, int line, const std::string& msg) {
  throw Error(ErrorKind::Parse, path + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

std::vector<std::string> split_top_level(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '[' || c == '(') ++depth;
    if (c == ']' || c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

ChartFile parse_chart_text(const std::string& text, const std::string& path) {
  ChartFile f;
  f.path = path;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  FileSection* current = nullptr;
  while (std::getline(in, raw)) {
    ++lineno;
    int start = lineno;
    auto strip = [](std::string s) {
      auto h = s.find('#');
      if (h != std::string::npos) s.erase(h);
      return s;
    };
    std::string line = strip(raw);
    while (bracket_balance(line) > 0) {
      if (!std::getline(in, raw)) fail_at(path, start, "unbalanced brackets");
      ++lineno;
      line += " " + strip(raw);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.find('=') == std::string::npos) {
      if (line.back() != ']') fail_at(path, start, "malformed section header");
      std::istringstream hs(line.substr(1, line.size() - 2));
      FileSection sec;
      hs >> sec.kind >> sec.name;
      sec.line = start;
      if (sec.kind != "connection" && sec.kind != "higgs" && sec.kind != "splitting")
        fail_at(path, start, "unknown section kind '" + sec.kind + "'");
      if (sec.name.empty()) fail_at(path, start, "section needs a name");
      for (const auto& s : f.sections)
        if (s.kind == sec.kind && s.name == sec.name) fail_at(path, start, "duplicate section " + sec.name);
      f.sections.push_back(std::move(sec));
      current = &f.sections.back();
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) fail_at(path, start, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail_at(path, start, "empty key");
    auto& target = current ? current->entries : f.top;
    if (target.count(key)) fail_at(path, start, key + ": duplicate key");
    target[key] = FileEntry{value, start};
  }
  return f;
}

ChartFile read_chart_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_chart_text(ss.str(), path);
}

namespace {

std::int64_t parse_int(const std::string& s) {
  std::string t = trim(s);
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, "expected an integer, got '" + t + "'");
  }
  if (used != t.size()) throw Error(ErrorKind::Parse, "expected an integer, got '" + t + "'");
  return v;
}

std::string unwrap(const std::string& s, char open, char close) {
  std::string t = trim(s);
  if (t.size() < 2 || t.front() != open || t.back() != close)
    throw Error(ErrorKind::Parse, std::string("expected ") + open + "..." + close + ", got '" + t + "'");
  return t.substr(1, t.size() - 2);
}

std::vector<std::int64_t> parse_vec(const std::string& s) {
  std::string t = trim(s);
  std::string body = t.front() == '(' ? unwrap(t, '(', ')') : unwrap(t, '[', ']');
  std::vector<std::int64_t> out;
  for (const auto& x : split_top_level(body, ',')) out.push_back(parse_int(x));
  return out;
}

}  // namespace

std::vector<LatticePoint> parse_points(const std::string& text, std::size_t ambient) {
  std::vector<LatticePoint> out;
  for (const auto& item : split_top_level(unwrap(text, '[', ']'), ',')) {
    if (item.empty()) continue;
    LatticePoint u;
    if (item.front() == '[' || item.front() == '(') {
      auto v = parse_vec(item);
      u = LatticePoint(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) u[i] = v[i];
    } else {
      u = LatticePoint{parse_int(item)};
    }
    if (u.size() != ambient)
      throw Error(ErrorKind::Parse, "point " + u.str() + " has length " + std::to_string(u.size()) +
                                        ", expected " + std::to_string(ambient));
    out.push_back(u);
  }
  return out;
}

namespace {

const FileEntry& require_entry(const ChartFile& f, const std::map<std::string, FileEntry>& m, const std::string& key,
                               int line) {
  auto it = m.find(key);
  if (it == m.end()) fail_at(f.path, line, key + ": missing field");
  return it->second;
}

template <class Fn>
auto at_entry(const ChartFile& f, const std::string& key, const FileEntry& e, Fn fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::Parse || err.kind() == ErrorKind::Dimension || err.kind() == ErrorKind::Precondition)
      fail_at(f.path, e.line, key + ": " + err.what());
    throw;
  }
}

}  // namespace

ChartSpec chart_spec_from(const ChartFile& f) {
  ChartSpec s;
  const auto& pe = require_entry(f, f.top, "p", 1);
  auto p = at_entry(f, "p", pe, [&] { return parse_int(pe.value); });
  if (p < 2 || p > 65521) fail_at(f.path, pe.line, "p: out of range");
  s.p = static_cast<std::uint32_t>(p);
  const auto& ne = require_entry(f, f.top, "ambient_rank", 1);
  auto n = at_entry(f, "ambient_rank", ne, [&] { return parse_int(ne.value); });
  if (n < 1 || n > 16) fail_at(f.path, ne.line, "ambient_rank: out of range");
  s.ambient_rank = static_cast<std::size_t>(n);
  const auto& ge = require_entry(f, f.top, "P_generators", 1);
  s.P_generators = at_entry(f, "P_generators", ge, [&] { return parse_points(ge.value, s.ambient_rank); });
  if (auto it = f.top.find("Q_generators"); it != f.top.end())
    s.Q_generators = at_entry(f, "Q_generators", it->second, [&] { return parse_points(it->second.value, s.ambient_rank); });
  const auto& le = require_entry(f, f.top, "log_coords", 1);
  s.log_coords = at_entry(f, "log_coords", le, [&] { return parse_points(le.value, s.ambient_rank); });
  for (const auto& [k, e] : f.top)
    if (k != "p" && k != "ambient_rank" && k != "P_generators" && k != "Q_generators" && k != "log_coords")
      fail_at(f.path, e.line, k + ": unknown field");
  return s;
}

Chart chart_from(const ChartFile& f) {
  ChartSpec s = chart_spec_from(f);
  try {
    return Chart(s);
  } catch (const ChartError& e) {
    int line = 1;
    if (auto it = f.top.find(e.field()); it != f.top.end()) line = it->second.line;
    throw Error(ErrorKind::ChartInvalid, f.path + ":" + std::to_string(line) + ": " + e.what());
  }
}

const FileSection& find_section(const ChartFile& f, const std::string& kind, const std::string& name) {
  for (const auto& s : f.sections)
    if (s.kind == kind && s.name == name) return s;
  throw Error(ErrorKind::Parse, f.path + ": no [" + kind + " " + name + "] section");
}

std::vector<std::string> section_names(const ChartFile& f, const std::string& kind) {
  std::vector<std::string> out;
  for (const auto& s : f.sections)
    if (s.kind == kind) out.push_back(s.name);
  return out;
}

namespace {

std::vector<PolyMatrix> read_matrices(const Chart& chart, const ChartFile& f, const FileSection& sec,
                                      const std::string& prefix, std::size_t& rank) {
  const auto& re = require_entry(f, sec.entries, "rank", sec.line);
  auto rk = at_entry(f, "rank", re, [&] { return parse_int(re.value); });
  if (rk < 1 || rk > 64) fail_at(f.path, re.line, "rank: out of range");
  rank = static_cast<std::size_t>(rk);
  std::vector<PolyMatrix> mats(chart.r(), PolyMatrix(chart.p(), chart.ambient_rank(), rank, rank));
  for (const auto& [key, e] : sec.entries) {
    if (key == "rank") continue;
    if (key.rfind(prefix, 0) != 0) fail_at(f.path, e.line, key + ": unknown field");
    auto k = at_entry(f, key, e, [&] { return parse_int(key.substr(prefix.size())); });
    if (k < 1 || k > chart.r()) fail_at(f.path, e.line, key + ": index out of range 1.." + std::to_string(chart.r()));
    at_entry(f, key, e, [&] {
      for (const auto& item : split_top_level(unwrap(e.value, '[', ']'), ',')) {
        if (item.empty()) continue;
        auto parts = split_top_level(unwrap(item, '(', ')'), ',');
        if (parts.size() != 3) throw Error(ErrorKind::Parse, "entries are (row, column, element)");
        auto i = parse_int(parts[0]), j = parse_int(parts[1]);
        if (i < 1 || j < 1 || i > rk || j > rk) throw Error(ErrorKind::Parse, "entry index out of range");
        auto& slot = mats[k - 1](i - 1, j - 1);
        slot += parse_element(chart, parts[2]);
      }
      return 0;
    });
  }
  return mats;
}

}  // namespace

ConnModule connection_from(const Chart& chart, const ChartFile& f, const std::string& name) {
  const auto& sec = find_section(f, "connection", name);
  ConnModule c;
  c.A = read_matrices(chart, f, sec, "A", c.rank);
  try {
    validate_connection(chart, c);
  } catch (const Error& e) {
    fail_at(f.path, sec.line, "connection " + name + ": " + e.what());
  }
  return c;
}

HiggsModule higgs_from(const Chart& chart, const ChartFile& f, const std::string& name) {
  const auto& sec = find_section(f, "higgs", name);
  HiggsModule h;
  h.theta = read_matrices(chart, f, sec, "Theta", h.rank);
  try {
    validate_higgs(chart, h);
  } catch (const Error& e) {
    fail_at(f.path, sec.line, "higgs " + name + ": " + e.what());
  }
  return h;
}

Splitting splitting_from(const Chart& chart, const ChartFile& f, const std::string& name) {
  const auto& sec = find_section(f, "splitting", name);
  std::vector<AlgElt> b(chart.r(), AlgElt(chart.p(), chart.ambient_rank()));
  for (const auto& [key, e] : sec.entries) {
    if (key != "zeta.b") fail_at(f.path, e.line, key + ": unknown field");
    at_entry(f, key, e, [&] {
      auto items = split_top_level(unwrap(e.value, '[', ']'), ',');
      if (items.size() != static_cast<std::size_t>(chart.r()))
        throw Error(ErrorKind::Parse, "expected " + std::to_string(chart.r()) + " perturbations");
      for (std::size_t k = 0; k < items.size(); ++k) b[k] = parse_element(chart, items[k]);
      return 0;
    });
  }
  try {
    return make_splitting(chart, b);
  } catch (const Error& e) {
    fail_at(f.path, sec.line, "splitting " + name + ": " + e.what());
  }
}

namespace {

// Linear combination of basis symbols (scalar, dlog[k], D^[I]) with coefficients in F_p[P^gp].
struct Lin {
  using Key = std::pair<int, std::vector<int>>;  // kind: 0 scalar, 1 dlog, 2 operator
  std::map<Key, AlgElt> terms;
  std::optional<LatticePoint> degree;
};

class LiteralParser {
 public:
  LiteralParser(const Chart& chart, const std::string& text) : chart_(chart), s_(text) {}

  Lin parse() {
    Lin v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + s_.substr(pos_, 1) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::Parse, "in literal '" + s_ + "' at offset " + std::to_string(pos_) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool eat_word(const std::string& w) {
    skip();
    if (s_.compare(pos_, w.size(), w) == 0) {
      std::size_t end = pos_ + w.size();
      if (end < s_.size() && std::isalpha(static_cast<unsigned char>(s_[end]))) return false;
      pos_ = end;
      return true;
    }
    return false;
  }
  std::int64_t integer() {
    skip();
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_ || !std::isdigit(static_cast<unsigned char>(s_[pos_ - 1]))) fail("expected an integer");
    return std::stoll(s_.substr(start, pos_ - start));
  }
  std::vector<std::int64_t> vec() {
    if (!eat('[')) fail("expected '['");
    std::vector<std::int64_t> out;
    if (eat(']')) return out;
    do out.push_back(integer());
    while (eat(','));
    if (!eat(']')) fail("expected ']'");
    return out;
  }
  LatticePoint point() {
    auto v = vec();
    if (v.size() != chart_.ambient_rank()) fail("exponent length differs from ambient rank");
    LatticePoint u(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) u[i] = v[i];
    return u;
  }
  Lin scalar(const AlgElt& a) {
    Lin v;
    v.terms[{0, {}}] = a;
    return v;
  }
  AlgElt one() const { return AlgElt::constant(chart_.p(), chart_.ambient_rank(), 1); }

  Lin factor() {
    skip();
    if (eat('(')) {
      Lin v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      return scalar(AlgElt::constant(chart_.p(), chart_.ambient_rank(), integer()));
    if (eat_word("dlog")) {
      auto v = vec();
      if (v.size() != 1 || v[0] < 1 || v[0] > chart_.r()) fail("dlog index out of range");
      Lin out;
      out.terms[{1, {static_cast<int>(v[0] - 1)}}] = one();
      return out;
    }
    if (eat_word("x")) {
      if (!eat('^')) fail("expected '^' after x");
      return scalar(AlgElt::monomial(chart_.p(), point()));
    }
    if (eat_word("e")) {
      Lin out = scalar(one());
      out.degree = point();
      return out;
    }
    if (eat_word("D")) {
      if (!eat('^')) fail("expected '^' after D");
      auto v = vec();
      if (v.size() != static_cast<std::size_t>(chart_.r())) fail("operator index length differs from r");
      std::vector<int> I;
      for (auto x : v) {
        if (x < 0) fail("negative operator index");
        I.push_back(static_cast<int>(x));
      }
      Lin out;
      out.terms[{2, I}] = one();
      return out;
    }
    fail("expected a factor");
  }

  static void merge_degree(std::optional<LatticePoint>& into, const std::optional<LatticePoint>& d,
                           LiteralParser* self) {
    if (!d) return;
    if (into && *into != *d) self->fail("conflicting indexed degrees");
    into = d;
  }

  Lin term() {
    Lin v = factor();
    while (eat('*')) {
      Lin w = factor();
      Lin out;
      out.degree = v.degree;
      merge_degree(out.degree, w.degree, this);
      for (const auto& [ka, a] : v.terms)
        for (const auto& [kb, b] : w.terms) {
          if (ka.first != 0 && kb.first != 0) fail("product of two basis symbols");
          Lin::Key k = ka.first != 0 ? ka : kb;
          auto it = out.terms.find(k);
          if (it == out.terms.end())
            out.terms.emplace(k, a * b);
          else
            it->second += a * b;
        }
      v = std::move(out);
    }
    return v;
  }

  Lin expr() {
    bool neg = false;
    skip();
    if (eat('-')) neg = true;
    else eat('+');
    Lin v = term();
    if (neg) negate(v);
    while (true) {
      skip();
      bool minus;
      if (eat('+')) minus = false;
      else if (eat('-')) minus = true;
      else break;
      Lin w = term();
      if (minus) negate(w);
      if (v.degree && w.degree && *v.degree != *w.degree) fail("summands have different indexed degrees");
      if (!v.degree) v.degree = w.degree;
      for (const auto& [k, a] : w.terms) {
        auto it = v.terms.find(k);
        if (it == v.terms.end())
          v.terms.emplace(k, a);
        else
          it->second += a;
      }
    }
    return v;
  }

  static void negate(Lin& v) {
    for (auto& [k, a] : v.terms) a = -a;
  }

  const Chart& chart_;
  std::string s_;
  std::size_t pos_ = 0;
};

Lin parse_lin(const Chart& chart, const std::string& text) {
  if (trim(text).empty()) throw Error(ErrorKind::Parse, "empty literal");
  return LiteralParser(chart, text).parse();
}

void require_kind(const Lin& v, int kind, const char* what) {
  for (const auto& [k, a] : v.terms)
    if (k.first != kind && !a.is_zero()) throw Error(ErrorKind::Parse, std::string("literal is not ") + what);
}

}  // namespace

IndexedElt parse_indexed(const Chart& chart, const std::string& text) {
  Lin v = parse_lin(chart, text);
  require_kind(v, 0, "an algebra element");
  IndexedElt x{v.degree.value_or(chart.zero()), AlgElt(chart.p(), chart.ambient_rank())};
  if (auto it = v.terms.find({0, {}}); it != v.terms.end()) x.coeff = it->second;
  return x;
}

AlgElt parse_element(const Chart& chart, const std::string& text) {
  IndexedElt x = parse_indexed(chart, text);
  if (!x.degree.is_zero()) throw Error(ErrorKind::Parse, "unexpected indexed degree in '" + text + "'");
  return x.coeff;
}

LogForm parse_form(const Chart& chart, const std::string& text) {
  Lin v = parse_lin(chart, text);
  require_kind(v, 1, "a 1-form");
  LogForm w;
  w.j = 1;
  w.degree = v.degree.value_or(chart.zero());
  for (const auto& [k, a] : v.terms)
    if (k.first == 1) w.add(k.second, a);
  return w;
}

PDOp parse_operator(const Chart& chart, const std::string& text, OpBasis basis, int order_bound) {
  Lin v = parse_lin(chart, text);
  require_kind(v, 2, "an operator");
  PDOp op = PDOp::zero(chart, v.degree.value_or(chart.zero()), order_bound, basis);
  for (const auto& [k, a] : v.terms)
    if (k.first == 2) op.add(k.second, a);
  return op;
}

}  // namespace logcartier
