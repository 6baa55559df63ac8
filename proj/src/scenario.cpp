#include "polyprop/scenario.hpp"

#include "polyprop/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace polyprop {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::vector<double> numbers(const std::string& value, std::size_t count, int line) {
  const auto toks = split_ws(value);
  if (toks.size() != count) throw ParseError(line, "expected " + std::to_string(count) + " numbers, got '" + value + "'");
  std::vector<double> out;
  for (const auto& t : toks) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size()) throw ParseError(line, "not a number: '" + t + "'");
    out.push_back(v);
  }
  return out;
}

double number(const std::string& value, int line) { return numbers(value, 1, line)[0]; }

int integer(const std::string& value, int line) {
  const std::string t = trim(value);
  int v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) throw ParseError(line, "not an integer: '" + t + "'");
  return v;
}

std::string fmt(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string fmt(const Vec2& v) { return fmt(v.x()) + " " + fmt(v.y()); }

}  // namespace

ConstraintSet Scenario::constraints() const {
  std::vector<WallSegment> faces;
  for (const auto& w : walls) {
    if (w.kind == WallSpec::Kind::thin) {
      for (auto& f : thin_panel(w.a, w.b)) faces.push_back(f);
    } else {
      faces.push_back(solid_wall(w.a, w.b, w.into));
    }
  }
  return ConstraintSet(std::move(faces), box);
}

double Scenario::nominal_wavelength() const {
  const Vec2 mid = 0.5 * (screen.a + screen.b);
  return constants.wavelength((mid - source).norm());
}

void Scenario::validate() const {
  constants.validate();
  if (screen.n_bins < 2) throw ValidationError("screen needs at least 2 bins");
  if (!((screen.b - screen.a).norm() > 0.0)) throw ValidationError("screen has zero length");
  if (!(box.hi.x() > box.lo.x() && box.hi.y() > box.lo.y())) throw ValidationError("bounding box has zero extent");
  for (const auto& w : walls) {
    if (!((w.b - w.a).norm() > 0.0)) throw ValidationError("wall '" + w.name + "' has zero length");
    if (w.kind == WallSpec::Kind::solid) {
      const Vec2 d = w.b - w.a;
      if (std::abs(d.x() * w.into.y() - d.y() * w.into.x()) == 0.0)
        throw ValidationError("solid wall '" + w.name + "' needs a side vector not parallel to the wall");
    }
  }
  if (run.max_corners < 0) throw ValidationError("max_corners must be >= 0");
  if (run.fan_size < 1) throw ValidationError("fan_size must be >= 1");
  if (!(run.restitution >= 0.0 && run.restitution <= 1.0)) throw ValidationError("restitution must lie in [0,1]");
  if (run.max_branches < 1) throw ValidationError("max_branches must be >= 1");
  if (run.oracle_grid < 8) throw ValidationError("oracle_grid must be >= 8");
  if (run.oracle_slices < 1) throw ValidationError("oracle_slices must be >= 1");
  if (!(run.oracle_sponge >= 0)) throw ValidationError("oracle_sponge must be >= 0");

  const ConstraintSet cs = constraints();
  if (!cs.feasible(source)) throw ValidationError("source is not feasible");
  for (int i = 0; i < screen.n_bins; ++i) {
    if (!cs.feasible(screen.bin_center(i))) throw ValidationError("screen bin " + std::to_string(i) + " is not feasible");
  }
}

bool Scenario::operator==(const Scenario& o) const {
  return constants.mass == o.constants.mass && constants.hbar == o.constants.hbar && constants.T == o.constants.T &&
         walls == o.walls && box.lo == o.box.lo && box.hi == o.box.hi && source == o.source &&
         velocity == o.velocity && screen.a == o.screen.a && screen.b == o.screen.b &&
         screen.n_bins == o.screen.n_bins && run == o.run;
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  std::set<std::string> seen_sections;
  std::string section;
  std::optional<double> T;
  std::optional<Vec2> source, velocity, screen_a, screen_b;
  std::optional<Box> box;
  bool has_bins = false;

  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "malformed section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      static const std::set<std::string> known{"constants", "walls", "source", "screen", "run"};
      if (!known.count(section)) throw ParseError(line_no, "unknown section [" + section + "]");
      if (!seen_sections.insert(section).second) throw ParseError(line_no, "duplicate section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (section.empty()) throw ParseError(line_no, "key outside of a section");

    if (section == "constants") {
      if (key == "mass") s.constants.mass = number(value, line_no);
      else if (key == "hbar") s.constants.hbar = number(value, line_no);
      else if (key == "time") T = number(value, line_no);
      else throw ParseError(line_no, "unknown key '" + key + "' in [constants]");
    } else if (section == "walls") {
      const auto head = split_ws(key);
      if (head.empty()) throw ParseError(line_no, "empty key");
      if (head[0] == "box" && head.size() == 1) {
        const auto v = numbers(value, 4, line_no);
        box = Box{Vec2(v[0], v[1]), Vec2(v[2], v[3])};
        continue;
      }
      if (head.size() > 2 || (head[0] != "thin" && head[0] != "solid"))
        throw ParseError(line_no, "wall entries are 'thin [name]' or 'solid [name]'");
      WallSpec w;
      w.name = head.size() == 2 ? head[1] : "";
      if (head[0] == "thin") {
        const auto v = numbers(value, 4, line_no);
        w.kind = WallSpec::Kind::thin;
        w.a = Vec2(v[0], v[1]);
        w.b = Vec2(v[2], v[3]);
      } else {
        const auto v = numbers(value, 6, line_no);
        w.kind = WallSpec::Kind::solid;
        w.a = Vec2(v[0], v[1]);
        w.b = Vec2(v[2], v[3]);
        w.into = Vec2(v[4], v[5]);
      }
      s.walls.push_back(std::move(w));
    } else if (section == "source") {
      const auto v = numbers(value, 2, line_no);
      if (key == "position") source = Vec2(v[0], v[1]);
      else if (key == "velocity") velocity = Vec2(v[0], v[1]);
      else throw ParseError(line_no, "unknown key '" + key + "' in [source]");
    } else if (section == "screen") {
      if (key == "from" || key == "to") {
        const auto v = numbers(value, 2, line_no);
        (key == "from" ? screen_a : screen_b) = Vec2(v[0], v[1]);
      } else if (key == "bins") {
        s.screen.n_bins = integer(value, line_no);
        has_bins = true;
      } else throw ParseError(line_no, "unknown key '" + key + "' in [screen]");
    } else if (section == "run") {
      if (key == "max_corners") s.run.max_corners = integer(value, line_no);
      else if (key == "fan_size") s.run.fan_size = integer(value, line_no);
      else if (key == "restitution") s.run.restitution = number(value, line_no);
      else if (key == "max_branches") s.run.max_branches = integer(value, line_no);
      else if (key == "oracle_grid") s.run.oracle_grid = integer(value, line_no);
      else if (key == "oracle_slices") s.run.oracle_slices = integer(value, line_no);
      else if (key == "oracle_sponge") s.run.oracle_sponge = number(value, line_no);
      else if (key == "output") s.run.output = value;
      else throw ParseError(line_no, "unknown key '" + key + "' in [run]");
    }
  }

  if (!T) throw ValidationError("missing [constants] time");
  s.constants.T = *T;
  if (!source) throw ValidationError("missing [source] position");
  s.source = *source;
  if (!screen_a || !screen_b || !has_bins) throw ValidationError("missing [screen] from/to/bins");
  s.screen.a = *screen_a;
  s.screen.b = *screen_b;
  if (!(s.constants.T > 0.0)) throw ValidationError("time must be positive");
  const Vec2 mid = 0.5 * (s.screen.a + s.screen.b);
  s.velocity = velocity ? *velocity : Vec2((mid - s.source) / s.constants.T);
  if (box) {
    s.box = *box;
  } else {
    Box b{s.source.cwiseMin(s.screen.a).cwiseMin(s.screen.b), s.source.cwiseMax(s.screen.a).cwiseMax(s.screen.b)};
    const double pad = 0.25 * std::max(b.extent().x(), b.extent().y());
    s.box = Box{b.lo - Vec2(pad, pad), b.hi + Vec2(pad, pad)};
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open scenario '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str());
}

std::string emit_scenario(const Scenario& s) {
  std::ostringstream o;
  o << "[constants]\n"
    << "mass = " << fmt(s.constants.mass) << "\n"
    << "hbar = " << fmt(s.constants.hbar) << "\n"
    << "time = " << fmt(s.constants.T) << "\n\n";
  o << "[walls]\n"
    << "box = " << fmt(s.box.lo) << " " << fmt(s.box.hi) << "\n";
  for (const auto& w : s.walls) {
    const bool thin = w.kind == WallSpec::Kind::thin;
    o << (thin ? "thin" : "solid") << (w.name.empty() ? "" : " " + w.name) << " = " << fmt(w.a) << " " << fmt(w.b);
    if (!thin) o << " " << fmt(w.into);
    o << "\n";
  }
  o << "\n[source]\n"
    << "position = " << fmt(s.source) << "\n"
    << "velocity = " << fmt(s.velocity) << "\n\n";
  o << "[screen]\n"
    << "from = " << fmt(s.screen.a) << "\n"
    << "to = " << fmt(s.screen.b) << "\n"
    << "bins = " << s.screen.n_bins << "\n\n";
  o << "[run]\n"
    << "max_corners = " << s.run.max_corners << "\n"
    << "fan_size = " << s.run.fan_size << "\n"
    << "restitution = " << fmt(s.run.restitution) << "\n"
    << "max_branches = " << s.run.max_branches << "\n"
    << "oracle_grid = " << s.run.oracle_grid << "\n"
    << "oracle_slices = " << s.run.oracle_slices << "\n"
    << "oracle_sponge = " << fmt(s.run.oracle_sponge) << "\n"
    << "output = " << s.run.output << "\n";
  return o.str();
}

}  // namespace polyprop
