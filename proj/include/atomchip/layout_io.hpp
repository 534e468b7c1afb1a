#ifndef ATOMCHIP_LAYOUT_IO_HPP
#define ATOMCHIP_LAYOUT_IO_HPP

// Line-oriented layout format.
//
//   # comment
//   substrate material=aln size=25000x25000um thickness=500um
//   wire id=w1 width=10um height=1um current=0.5A points=(0,0) (100,0)
//   arc id=ring width=3um height=3um current=1A center=(0,0) radius=10um from=0 to=360
//   bias bx=0G by=20G bz=0G
//   mirror gap=20um
//   pad id=p1 at=(0,9000) size=1000x1000um wire=w1
//
// Lengths are micrometres, currents amperes, fields gauss, angles degrees.
// Optional keys: substrate jmax=<A/m2> conductivity=<W/mK>; arc before=/after=
// (lead vertices); mirror at=(x,y) size=<w>x<h>um coating=<h>um; pad
// current=<A>. A wire's points list may contain arc(cx,cy,r,from,to) tokens.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "atomchip/errors.hpp"
#include "atomchip/layout.hpp"

namespace atomchip {

/// Sort paths and pads by id; the parser and generators emit this order.
inline void canonicalize(ChipLayout& layout) {
  std::sort(layout.paths.begin(), layout.paths.end(), [](const WirePath& a, const WirePath& b) { return a.id < b.id; });
  std::sort(layout.pads.begin(), layout.pads.end(), [](const PadSpec& a, const PadSpec& b) { return a.id < b.id; });
}

namespace io_detail {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

/// Splits on whitespace outside parentheses.
inline std::vector<Token> tokenize(std::string_view line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    int depth = 0;
    std::string text;
    while (i < line.size()) {
      const char c = line[i];
      if (static_cast<unsigned char>(c) > 127) throw ParseError(line_no, i + 1, "non-ASCII character");
      if (c == '(') ++depth;
      if (c == ')') {
        if (--depth < 0) throw ParseError(line_no, i + 1, "unbalanced ')'");
      }
      if (depth == 0 && (c == ' ' || c == '\t' || c == '\r')) break;
      if (!(depth > 0 && (c == ' ' || c == '\t'))) text.push_back(c);
      ++i;
    }
    if (depth != 0) throw ParseError(line_no, start + 1, "unbalanced '('");
    out.push_back({std::move(text), start + 1});
  }
  return out;
}

struct Entry {
  std::vector<Token> values;
  std::size_t column;
};

struct Block {
  std::string keyword;
  std::map<std::string, Entry> entries;
  std::size_t line;
};

class Reader {
 public:
  Reader(const Block& block) : block_(block) {}

  bool has(const std::string& key) const { return block_.entries.count(key) != 0; }

  const Token& single(const std::string& key) const {
    const auto& e = require(key);
    if (e.values.size() != 1) throw ParseError(block_.line, e.column, "'" + key + "' takes exactly one value");
    return e.values.front();
  }

  const Entry& require(const std::string& key) const {
    const auto it = block_.entries.find(key);
    if (it == block_.entries.end()) throw ParseError(block_.line, 1, block_.keyword + ": missing '" + key + "'");
    return it->second;
  }

  [[noreturn]] void fail(const Token& t, const std::string& what) const { throw ParseError(block_.line, t.column, what); }

  double number(const Token& t, std::string_view text) const {
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || first == last || !std::isfinite(v)) {
      fail(t, "invalid number '" + std::string(text) + "'");
    }
    return v;
  }

  /// Number followed by one of the accepted unit suffixes; returns value * scale.
  double quantity(const Token& t, std::string_view text, std::initializer_list<std::pair<std::string_view, double>> suffixes) const {
    for (const auto& [suffix, scale] : suffixes) {
      if (text.size() > suffix.size() && text.substr(text.size() - suffix.size()) == suffix) {
        const double v = number(t, text.substr(0, text.size() - suffix.size()));
        return scale == 1.0 ? v : v * scale;
      }
    }
    std::string expected;
    for (const auto& [suffix, scale] : suffixes) expected += (expected.empty() ? "" : " or ") + std::string(suffix);
    fail(t, "expected a value with unit " + expected + ", got '" + std::string(text) + "'");
  }

  double length(const std::string& key) const {
    const auto& t = single(key);
    return length_of(t, t.text);
  }
  double length_of(const Token& t, std::string_view text) const {
    if (text.size() > 2 && text.substr(text.size() - 2) == "mm") return units::from_um(number(t, text.substr(0, text.size() - 2)) * 1000.0);
    return units::from_um(quantity(t, text, {{"um", 1.0}}));
  }
  double current(const std::string& key) const {
    const auto& t = single(key);
    if (t.text.size() > 2 && t.text.substr(t.text.size() - 2) == "mA") return number(t, std::string_view(t.text).substr(0, t.text.size() - 2)) / 1000.0;
    return quantity(t, t.text, {{"A", 1.0}});
  }
  double gauss(const std::string& key) const {
    if (!has(key)) return 0.0;
    const auto& t = single(key);
    return units::from_gauss(quantity(t, t.text, {{"G", 1.0}}));
  }
  double angle(const std::string& key) const {
    const auto& t = single(key);
    std::string_view text = t.text;
    if (text.size() > 3 && text.substr(text.size() - 3) == "deg") text.remove_suffix(3);
    return number(t, text);
  }
  std::pair<double, double> size(const std::string& key) const {
    const auto& t = single(key);
    std::string_view text = t.text;
    if (text.size() < 3 || text.substr(text.size() - 2) != "um") fail(t, "expected <w>x<h>um");
    text.remove_suffix(2);
    const auto x = text.find('x');
    if (x == std::string_view::npos) fail(t, "expected <w>x<h>um");
    return {units::from_um(number(t, text.substr(0, x))), units::from_um(number(t, text.substr(x + 1)))};
  }

  std::vector<double> tuple(const Token& t, std::string_view text, std::size_t n) const {
    if (text.size() < 2 || text.front() != '(' || text.back() != ')') fail(t, "expected a parenthesised tuple");
    text = text.substr(1, text.size() - 2);
    std::vector<double> out;
    std::size_t pos = 0;
    while (true) {
      const auto comma = text.find(',', pos);
      out.push_back(number(t, text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (out.size() != n) fail(t, "expected " + std::to_string(n) + " components");
    return out;
  }

  Vec2 point_of(const Token& t) const {
    const auto v = tuple(t, t.text, 2);
    return {units::from_um(v[0]), units::from_um(v[1])};
  }
  Vec2 point(const std::string& key) const { return point_of(single(key)); }

  PathElement element_of(const Token& t) const {
    std::string_view text = t.text;
    if (text.substr(0, 3) == "arc") {
      const auto v = tuple(t, text.substr(3), 5);
      Arc arc;
      arc.center = {units::from_um(v[0]), units::from_um(v[1])};
      arc.radius = units::from_um(v[2]);
      arc.start_deg = v[3];
      arc.end_deg = v[4];
      return arc;
    }
    return point_of(t);
  }

  std::vector<PathElement> elements(const std::string& key) const {
    std::vector<PathElement> out;
    for (const auto& t : require(key).values) out.push_back(element_of(t));
    return out;
  }

  std::string word(const std::string& key) const { return single(key).text; }

  void only(std::initializer_list<std::string_view> allowed) const {
    for (const auto& [key, entry] : block_.entries) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        throw ParseError(block_.line, entry.column, "unknown key '" + key + "' in " + block_.keyword);
      }
    }
  }

 private:
  const Block& block_;
};

inline Block read_block(const std::vector<Token>& tokens, std::size_t line_no) {
  Block b{tokens.front().text, {}, line_no};
  std::string current_key;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    const auto eq = t.text.find('=');
    const auto paren = t.text.find('(');
    if (eq != std::string::npos && (paren == std::string::npos || eq < paren)) {
      current_key = t.text.substr(0, eq);
      if (current_key.empty()) throw ParseError(line_no, t.column, "missing key before '='");
      if (b.entries.count(current_key)) throw ParseError(line_no, t.column, "duplicate key '" + current_key + "'");
      Entry e{{}, t.column};
      const std::string value = t.text.substr(eq + 1);
      if (!value.empty()) e.values.push_back({value, t.column + eq + 1});
      b.entries.emplace(current_key, std::move(e));
    } else {
      if (current_key.empty()) throw ParseError(line_no, t.column, "expected key=value, got '" + t.text + "'");
      b.entries[current_key].values.push_back(t);
    }
  }
  for (const auto& [key, entry] : b.entries) {
    if (entry.values.empty()) throw ParseError(line_no, entry.column, "'" + key + "' has no value");
  }
  return b;
}

}  // namespace io_detail

/// Parses a layout document into a validated ChipLayout in canonical order.
/// Throws ParseError for malformed text and ValidationError for invariant
/// violations.
inline ChipLayout parse_layout(std::string_view text) {
  using namespace io_detail;
  ChipLayout layout;
  bool have_substrate = false;
  struct PendingPad {
    PadSpec pad;
    bool has_current;
    std::size_t line;
  };
  std::vector<PendingPad> pads;
  struct PendingMirror {
    std::optional<Rect> region;
    double gap;
    double coating;
  };
  std::optional<PendingMirror> mirror;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;
    const auto tokens = tokenize(line, line_no);
    const Block block = read_block(tokens, line_no);
    const Reader r(block);
    const std::string where = " (line " + std::to_string(line_no) + ")";

    if (block.keyword == "substrate") {
      if (have_substrate) throw ParseError(line_no, 1, "duplicate substrate block");
      r.only({"material", "size", "thickness", "jmax", "conductivity"});
      const auto& mat = r.single("material");
      SubstrateMaterial material;
      if (mat.text == "sapphire") material = SubstrateMaterial::sapphire;
      else if (mat.text == "aln") material = SubstrateMaterial::aluminum_nitride;
      else r.fail(mat, "unknown material '" + mat.text + "' (sapphire|aln)");
      const auto [w, h] = r.size("size");
      layout.substrate = SubstrateSpec::make(material, w, h, r.length("thickness"));
      if (r.has("jmax")) {
        const auto& t = r.single("jmax");
        layout.substrate.j_max = r.quantity(t, t.text, {{"A/m2", 1.0}});
      }
      if (r.has("conductivity")) {
        const auto& t = r.single("conductivity");
        layout.substrate.thermal_conductivity = r.quantity(t, t.text, {{"W/mK", 1.0}});
      }
      have_substrate = true;
    } else if (block.keyword == "wire" || block.keyword == "arc") {
      WirePath p;
      if (block.keyword == "wire") {
        r.only({"id", "width", "height", "current", "points"});
        p.centerline = r.elements("points");
      } else {
        r.only({"id", "width", "height", "current", "center", "radius", "from", "to", "before", "after"});
        if (r.has("before")) p.centerline = r.elements("before");
        Arc arc;
        arc.center = r.point("center");
        arc.radius = r.length("radius");
        arc.start_deg = r.angle("from");
        arc.end_deg = r.angle("to");
        p.centerline.push_back(arc);
        if (r.has("after")) {
          for (auto& e : r.elements("after")) p.centerline.push_back(e);
        }
      }
      p.id = r.word("id");
      p.width = r.length("width");
      p.height = r.length("height");
      p.current = r.current("current");
      if (layout.find_path(p.id)) throw ValidationError("wire '" + p.id + "'" + where, "duplicate id");
      if (!(p.width > 0.0)) throw ValidationError("wire '" + p.id + "'" + where, "width must be positive");
      if (!(p.height > 0.0)) throw ValidationError("wire '" + p.id + "'" + where, "height must be positive");
      layout.paths.push_back(std::move(p));
    } else if (block.keyword == "bias") {
      r.only({"bx", "by", "bz"});
      layout.bias_fields.push_back({Vec3(r.gauss("bx"), r.gauss("by"), r.gauss("bz"))});
    } else if (block.keyword == "mirror") {
      if (mirror) throw ParseError(line_no, 1, "duplicate mirror block");
      r.only({"gap", "at", "size", "coating"});
      PendingMirror m{std::nullopt, r.length("gap"), r.has("coating") ? r.length("coating") : 0.0};
      if (r.has("at") != r.has("size")) throw ParseError(line_no, 1, "mirror: 'at' and 'size' go together");
      if (r.has("at")) {
        const auto [w, h] = r.size("size");
        m.region = Rect::centered(r.point("at"), w, h);
      }
      mirror = m;
    } else if (block.keyword == "pad") {
      r.only({"id", "at", "size", "wire", "current"});
      PadSpec pad;
      pad.id = r.word("id");
      const auto [w, h] = r.size("size");
      pad.region = Rect::centered(r.point("at"), w, h);
      pad.connected_path = r.word("wire");
      const bool has_current = r.has("current");
      if (has_current) pad.current = r.current("current");
      pads.push_back({std::move(pad), has_current, line_no});
    } else {
      throw ParseError(line_no, tokens.front().column, "unknown block '" + block.keyword + "'");
    }
  }
  if (!have_substrate) throw ParseError(line_no, 1, "missing substrate block");

  if (mirror) {
    layout.mirror = MirrorSpec{mirror->region.value_or(layout.substrate.extent), mirror->gap, mirror->coating};
  }
  for (auto& pp : pads) {
    const auto* wire = layout.find_path(pp.pad.connected_path);
    if (!wire) {
      throw ValidationError("pad '" + pp.pad.id + "' (line " + std::to_string(pp.line) + ")",
                            "unknown wire '" + pp.pad.connected_path + "'");
    }
    if (!pp.has_current) pp.pad.current = std::abs(wire->current);
    layout.pads.push_back(std::move(pp.pad));
  }

  canonicalize(layout);
  validate_layout(layout);
  return layout;
}

namespace io_detail {

inline std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

/// Shortest decimal text t for which from_file(parse(t)) reproduces si exactly;
/// falls back to 17 significant digits when no such text exists.
template <typename ToFile, typename FromFile>
std::string format_exact(double si, ToFile to_file, FromFile from_file) {
  if (si == 0.0) return "0";
  const auto text = [](double v, int precision) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
    (void)ec;
    return std::string(buf, ptr);
  };
  const double u = to_file(si);
  for (int precision = 1; precision <= 17; ++precision) {
    const double candidate = parse_double(text(u, precision));
    if (from_file(candidate) == si) return shortest(candidate);
  }
  double cand = u;
  for (int k = 0; k < 4; ++k) cand = std::nextafter(cand, -std::numeric_limits<double>::infinity());
  for (int k = 0; k < 9; ++k, cand = std::nextafter(cand, std::numeric_limits<double>::infinity())) {
    if (from_file(cand) == si) return shortest(cand);
  }
  return text(u, 17);
}

inline std::string um(double meters) {
  return format_exact(meters, units::to_um, units::from_um);
}
inline std::string gauss(double tesla) {
  return format_exact(tesla, units::to_gauss, units::from_gauss);
}
inline std::string plain(double v) { return shortest(v); }

inline std::string point(const Vec2& p) { return "(" + um(p.x()) + "," + um(p.y()) + ")"; }

inline std::string element(const PathElement& e) {
  if (const auto* arc = std::get_if<Arc>(&e)) {
    return "arc(" + um(arc->center.x()) + "," + um(arc->center.y()) + "," + um(arc->radius) + "," +
           plain(arc->start_deg) + "," + plain(arc->end_deg) + ")";
  }
  return point(std::get<Vec2>(e));
}

inline std::string size(double w, double h) { return um(w) + "x" + um(h) + "um"; }

}  // namespace io_detail

/// Canonical text: substrate, bias, mirror, wires and pads (id order).
/// Byte-identical for equal layouts.
inline std::string serialize_layout(const ChipLayout& input) {
  using namespace io_detail;
  ChipLayout layout = input;
  canonicalize(layout);
  std::ostringstream os;
  const auto& s = layout.substrate;
  os << "substrate material=" << to_string(s.material) << " size=" << size(s.extent.width(), s.extent.height())
     << " thickness=" << um(s.thickness) << "um";
  if (s.j_max != materials::default_max_current_density(s.material)) os << " jmax=" << plain(s.j_max) << "A/m2";
  if (s.thermal_conductivity != materials::default_thermal_conductivity(s.material)) {
    os << " conductivity=" << plain(s.thermal_conductivity) << "W/mK";
  }
  os << "\n";

  for (const auto& b : layout.bias_fields) {
    os << "bias bx=" << gauss(b.vector.x()) << "G by=" << gauss(b.vector.y()) << "G bz=" << gauss(b.vector.z()) << "G\n";
  }

  if (layout.mirror) {
    const auto& m = *layout.mirror;
    os << "mirror gap=" << um(m.gap_to_wires) << "um";
    if (!(m.region == s.extent)) os << " at=" << point(m.region.center()) << " size=" << size(m.region.width(), m.region.height());
    if (m.coating_height != 0.0) os << " coating=" << um(m.coating_height) << "um";
    os << "\n";
  }

  for (const auto& p : layout.paths) {
    const auto arcs = std::count_if(p.centerline.begin(), p.centerline.end(),
                                    [](const PathElement& e) { return std::holds_alternative<Arc>(e); });
    const std::string common = " id=" + p.id + " width=" + um(p.width) + "um height=" + um(p.height) +
                               "um current=" + plain(p.current) + "A";
    if (arcs == 1) {
      const auto it = std::find_if(p.centerline.begin(), p.centerline.end(),
                                   [](const PathElement& e) { return std::holds_alternative<Arc>(e); });
      const auto& arc = std::get<Arc>(*it);
      os << "arc" << common << " center=" << point(arc.center) << " radius=" << um(arc.radius) << "um from="
         << plain(arc.start_deg) << " to=" << plain(arc.end_deg);
      if (it != p.centerline.begin()) {
        os << " before=";
        for (auto e = p.centerline.begin(); e != it; ++e) os << (e == p.centerline.begin() ? "" : " ") << element(*e);
      }
      if (std::next(it) != p.centerline.end()) {
        os << " after=";
        for (auto e = std::next(it); e != p.centerline.end(); ++e) os << (e == std::next(it) ? "" : " ") << element(*e);
      }
    } else {
      os << "wire" << common << " points=";
      for (std::size_t i = 0; i < p.centerline.size(); ++i) os << (i ? " " : "") << element(p.centerline[i]);
    }
    os << "\n";
  }

  for (const auto& pad : layout.pads) {
    os << "pad id=" << pad.id << " at=" << point(pad.region.center()) << " size="
       << size(pad.region.width(), pad.region.height()) << " wire=" << pad.connected_path << " current="
       << plain(pad.current) << "A\n";
  }
  return os.str();
}

}  // namespace atomchip

#endif  // ATOMCHIP_LAYOUT_IO_HPP
