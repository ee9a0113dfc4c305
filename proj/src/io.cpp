#include "cbs/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace cbs::io {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& name, std::size_t line, const std::string& what) {
  std::string where = name;
  if (line > 0) where += ":" + std::to_string(line);
  throw Error(ErrorCode::ParseError, where + ": " + what);
}

// Netpbm header tokens, honouring '#' comments. Returns the offset just past
// the single whitespace byte that terminates the last token.
struct HeaderReader {
  const std::string& bytes;
  const std::string& name;
  std::size_t pos = 0;

  std::string token() {
    for (;;) {
      while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
      if (pos < bytes.size() && bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos])) && bytes[pos] != '#') ++pos;
    if (start == pos) parse_fail(name, 0, "truncated header");
    return bytes.substr(start, pos - start);
  }

  int integer() {
    const std::string t = token();
    int v = 0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (r.ec != std::errc() || r.ptr != t.data() + t.size() || v <= 0) parse_fail(name, 0, "bad header value '" + t + "'");
    return v;
  }
};

double number(const std::string& name, std::size_t line, std::string_view tok) {
  double v = 0.0;
  const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (r.ec != std::errc() || r.ptr != tok.data() + tok.size()) {
    parse_fail(name, line, "expected a number, got '" + std::string(tok) + "'");
  }
  return v;
}

json points_json(std::span<const Point2> pts) {
  json a = json::array();
  for (const Point2& p : pts) a.push_back({p.x, p.y});
  return a;
}

std::vector<Point2> points_from(const json& a) {
  std::vector<Point2> pts;
  pts.reserve(a.size());
  for (const json& p : a) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return pts;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string svg_points(std::span<const Point2> pts, double height) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) os << ' ';
    os << pts[i].x << ',' << height - pts[i].y;
  }
  return os.str();
}

}  // namespace

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, path.string() + ": cannot open");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, path.string() + ": cannot write");
  out << text;
}

RasterMask parse_pbm(const std::string& bytes, const std::string& name) {
  HeaderReader h{bytes, name};
  const std::string magic = h.token();
  if (magic != "P1" && magic != "P4") parse_fail(name, 0, "not a portable bitmap (magic '" + magic + "')");
  const int w = h.integer();
  const int ht = h.integer();
  RasterMask mask(w, ht);
  if (magic == "P4") {
    std::size_t pos = h.pos + 1;
    const std::size_t stride = (static_cast<std::size_t>(w) + 7) / 8;
    if (bytes.size() < pos + stride * static_cast<std::size_t>(ht)) parse_fail(name, 0, "raster data is truncated");
    for (int r = 0; r < ht; ++r) {
      for (int c = 0; c < w; ++c) {
        const auto byte = static_cast<unsigned char>(bytes[pos + static_cast<std::size_t>(r) * stride + c / 8]);
        mask.set(c, r, (byte >> (7 - c % 8)) & 1u);
      }
    }
    return mask;
  }
  std::size_t pos = h.pos;
  for (int r = 0; r < ht; ++r) {
    for (int c = 0; c < w; ++c) {
      for (;;) {
        while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
        if (pos < bytes.size() && bytes[pos] == '#') {
          while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
          continue;
        }
        break;
      }
      if (pos >= bytes.size()) parse_fail(name, 0, "raster data is truncated");
      if (bytes[pos] != '0' && bytes[pos] != '1') parse_fail(name, 0, std::string("bad pixel '") + bytes[pos] + "'");
      mask.set(c, r, bytes[pos++] == '1');
    }
  }
  return mask;
}

RasterMask read_pbm(const fs::path& path) { return parse_pbm(read_text(path), path.string()); }

void write_pbm(const fs::path& path, const RasterMask& mask) {
  std::string out = "P4\n" + std::to_string(mask.width) + " " + std::to_string(mask.height) + "\n";
  const std::size_t stride = (static_cast<std::size_t>(mask.width) + 7) / 8;
  std::string raster(stride * static_cast<std::size_t>(mask.height), '\0');
  for (int r = 0; r < mask.height; ++r) {
    for (int c = 0; c < mask.width; ++c) {
      if (mask.get(c, r)) raster[static_cast<std::size_t>(r) * stride + c / 8] |= static_cast<char>(0x80u >> (c % 8));
    }
  }
  write_text(path, out + raster);
}

ContourSamples parse_points(const std::string& text, const std::string& name) {
  ContourSamples out;
  out.closed = true;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::vector<std::string_view> toks;
    std::string_view rest(line);
    while (!rest.empty()) {
      const auto b = rest.find_first_not_of(" \t\r,");
      if (b == std::string_view::npos) break;
      rest.remove_prefix(b);
      const auto e = rest.find_first_of(" \t\r,");
      toks.push_back(rest.substr(0, e));
      rest.remove_prefix(e == std::string_view::npos ? rest.size() : e);
    }
    if (toks.empty()) continue;
    if (toks.size() != 2) parse_fail(name, lineno, "expected two coordinates, got " + std::to_string(toks.size()));
    out.points.push_back({number(name, lineno, toks[0]), number(name, lineno, toks[1])});
  }
  if (out.points.size() < 8) parse_fail(name, 0, "closed outline needs at least 8 points");
  return out;
}

ContourSamples read_points(const fs::path& path) { return parse_points(read_text(path), path.string()); }

PieceFile read_piece_file(const fs::path& path) {
  PieceFile p;
  try {
    const json j = json::parse(read_text(path));
    p.id = j.at("id").get<std::string>();
    p.points = points_from(j.at("points"));
    p.closed = j.value("closed", true);
  } catch (const json::exception& e) {
    parse_fail(path.string(), 0, e.what());
  }
  if (p.closed && p.points.size() < 8) parse_fail(path.string(), 0, "closed outline needs at least 8 points");
  return p;
}

void write_piece_file(const fs::path& path, const PieceFile& piece) {
  json j{{"id", piece.id}, {"points", points_json(piece.points)}, {"closed", piece.closed}};
  write_text(path, j.dump(1) + "\n");
}

LoadedOutline load_outline(const fs::path& path) {
  LoadedOutline out;
  out.id = path.stem().string();
  const std::string ext = path.extension().string();
  if (ext == ".pbm") {
    out.outline = trace_boundary(read_pbm(path));
  } else if (ext == ".json") {
    PieceFile p = read_piece_file(path);
    out.id = p.id;
    out.outline.points = std::move(p.points);
    out.outline.closed = true;
  } else {
    out.outline = read_points(path);
  }
  // Point lists may come in either orientation.
  if (signed_area(out.outline.points) > 0.0) std::reverse(out.outline.points.begin(), out.outline.points.end());
  return out;
}

DescriptorFile describe(const std::string& id, const PieceFit& fit, double straight_energy) {
  DescriptorFile d;
  d.piece.id = id;
  for (std::size_t k = 0; k < 4; ++k) {
    d.piece.sides[k] = make_descriptor(id, static_cast<int>(k), fit.sides[k].profile, straight_energy);
    d.corners[k] = fit.contour.samples.points[fit.contour.corner_indices[k]];
    d.curves[k] = fit.sides[k].solution.sample(4);
  }
  return d;
}

Layout parse_layout(const std::string& text, const std::string& name) {
  Layout l;
  try {
    const json j = json::parse(text);
    l.rows = j.at("rows").get<int>();
    l.cols = j.at("cols").get<int>();
    for (const json& c : j.at("cells")) l.cells.emplace_back(c.at("piece").get<std::string>(), c.at("rotation").get<int>());
  } catch (const json::exception& e) {
    parse_fail(name, 0, e.what());
  }
  if (l.cells.size() != static_cast<std::size_t>(l.rows) * static_cast<std::size_t>(l.cols)) {
    parse_fail(name, 0, "cell count does not match rows * cols");
  }
  return l;
}

int layout_errors(const Layout& truth, const Layout& got) {
  const int total = static_cast<int>(truth.cells.size());
  int best = total;
  Layout cur = got;
  for (int turn = 0; turn < 4; ++turn) {
    if (cur.rows == truth.rows && cur.cols == truth.cols) {
      int errors = 0;
      for (std::size_t i = 0; i < truth.cells.size(); ++i) errors += cur.cells[i] != truth.cells[i];
      best = std::min(best, errors);
    }
    // Quarter turn clockwise: (r, c) -> (c, rows - 1 - r), each piece one more turn.
    Layout next;
    next.rows = cur.cols;
    next.cols = cur.rows;
    next.cells.resize(cur.cells.size());
    for (int r = 0; r < cur.rows; ++r) {
      for (int c = 0; c < cur.cols; ++c) {
        auto cell = cur.cells[static_cast<std::size_t>(r * cur.cols + c)];
        cell.second = (cell.second + 3) % 4;
        next.cells[static_cast<std::size_t>(c * next.cols + (cur.rows - 1 - r))] = cell;
      }
    }
    cur = std::move(next);
  }
  return best;
}

std::string descriptor_json(const DescriptorFile& d) {
  json sides = json::array();
  for (std::size_t k = 0; k < 4; ++k) {
    const SideDescriptor& s = d.piece.sides[k];
    sides.push_back({{"side", s.side},
                     {"class", std::string(to_string(s.cls))},
                     {"energy", s.energy},
                     {"length", s.length},
                     {"s", s.profile.s},
                     {"kappa", s.profile.kappa},
                     {"curve", points_json(d.curves[k])}});
  }
  json j{{"id", d.piece.id}, {"kind", std::string(to_string(d.piece.kind()))},
         {"corners", points_json(d.corners)}, {"sides", sides}};
  return j.dump(1) + "\n";
}

DescriptorFile parse_descriptor(const std::string& text, const std::string& name) {
  DescriptorFile d;
  try {
    const json j = json::parse(text);
    d.piece.id = j.at("id").get<std::string>();
    const auto corners = points_from(j.at("corners"));
    if (corners.size() != 4) parse_fail(name, 0, "expected 4 corners");
    std::copy(corners.begin(), corners.end(), d.corners.begin());
    const json& sides = j.at("sides");
    if (sides.size() != 4) parse_fail(name, 0, "expected 4 sides");
    for (std::size_t k = 0; k < 4; ++k) {
      const json& js = sides[k];
      SideDescriptor& s = d.piece.sides[k];
      s.piece = d.piece.id;
      s.side = js.at("side").get<int>();
      const auto cls = side_class_from_string(js.at("class").get<std::string>());
      if (!cls) parse_fail(name, 0, "unknown side class");
      s.cls = *cls;
      s.energy = js.at("energy").get<double>();
      s.length = js.at("length").get<double>();
      s.profile.s = js.at("s").get<std::vector<double>>();
      s.profile.kappa = js.at("kappa").get<std::vector<double>>();
      s.profile.length = s.length;
      if (s.profile.s.size() != s.profile.kappa.size() || s.profile.s.size() < 2) {
        parse_fail(name, 0, "side " + std::to_string(k + 1) + " has a malformed profile");
      }
      d.curves[k] = points_from(js.value("curve", json::array()));
    }
  } catch (const json::exception& e) {
    parse_fail(name, 0, e.what());
  }
  return d;
}

DescriptorFile read_descriptor(const fs::path& path) { return parse_descriptor(read_text(path), path.string()); }

void write_descriptor(const fs::path& path, const DescriptorFile& d) { write_text(path, descriptor_json(d)); }

std::string profile_csv(const CurvatureProfile& profile) {
  std::string out = "s,kappa\n";
  for (std::size_t i = 0; i < profile.size(); ++i) out += fmt(profile.s[i]) + "," + fmt(profile.kappa[i]) + "\n";
  return out;
}

std::string match_csv(std::span<const PieceDescriptor> pieces, const MatchParams& params) {
  std::vector<const SideDescriptor*> curved;
  for (const PieceDescriptor& p : pieces) {
    for (const SideDescriptor& s : p.sides) {
      if (s.cls != SideClass::Straight) curved.push_back(&s);
    }
  }
  std::string out = "a,b,class_a,class_b,length_ratio,shift,energy,rejected\n";
  for (std::size_t i = 0; i < curved.size(); ++i) {
    for (std::size_t j = i + 1; j < curved.size(); ++j) {
      const MatchScore m = pair_energy(*curved[i], *curved[j], params);
      out += m.a + "," + m.b + "," + std::string(to_string(curved[i]->cls)) + "," +
             std::string(to_string(curved[j]->cls)) + "," + fmt(m.length_ratio) + "," + fmt(m.shift) + "," +
             (m.rejected ? std::string("inf") : fmt(m.energy)) + "," + (m.rejected ? "1" : "0") + "\n";
    }
  }
  return out;
}

std::string layout_json(const PuzzleState& state, std::span<const PieceDescriptor> pieces) {
  json cells = json::array();
  for (const Placement& p : state.grid) cells.push_back({{"piece", pieces[p.piece].id}, {"rotation", p.rotation}});
  json j{{"rows", state.rows}, {"cols", state.cols}, {"cells", cells}};
  return j.dump(1) + "\n";
}

std::string piece_svg(const PieceFit& fit) {
  double xmin = 1e300, ymin = 1e300, xmax = -1e300, ymax = -1e300;
  for (const Point2& p : fit.contour.samples.points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double pad = 10.0;
  const double w = xmax - xmin + 2 * pad;
  const double h = ymax - ymin + 2 * pad;
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\""
     << xmin - pad << ' ' << -(ymax + pad) << ' ' << w << ' ' << h << "\">\n"
     << "<g transform=\"scale(1,-1)\">\n";
  os << "<g fill=\"#888\">\n";
  for (const Point2& p : fit.contour.samples.points) {
    os << "<circle cx=\"" << p.x << "\" cy=\"" << p.y << "\" r=\"0.4\"/>\n";
  }
  os << "</g>\n";
  for (const SideFit& side : fit.sides) {
    std::ostringstream ctrl;
    ctrl << std::fixed << std::setprecision(3);
    for (const Point2& p : side.state.control.points) ctrl << p.x << ',' << p.y << ' ';
    os << "<polyline fill=\"none\" stroke=\"#3a7\" stroke-width=\"0.3\" points=\"" << ctrl.str() << "\"/>\n";
    std::ostringstream spl;
    spl << std::fixed << std::setprecision(3);
    for (const Point2& p : side.solution.sample(8)) spl << p.x << ',' << p.y << ' ';
    os << "<polyline fill=\"none\" stroke=\"#c22\" stroke-width=\"0.6\" points=\"" << spl.str() << "\"/>\n";
  }
  for (std::size_t idx : fit.contour.corner_indices) {
    const Point2 p = fit.contour.samples.points[idx];
    os << "<circle cx=\"" << p.x << "\" cy=\"" << p.y << "\" r=\"2\" fill=\"#22c\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

std::string assembled_svg(const PuzzleState& state, std::span<const DescriptorFile> pieces) {
  double cell = 0.0;
  std::size_t count = 0;
  for (const DescriptorFile& d : pieces) {
    for (const SideDescriptor& s : d.piece.sides) {
      cell += distance(d.corners[static_cast<std::size_t>(s.side)], d.corners[static_cast<std::size_t>((s.side + 1) % 4)]);
      ++count;
    }
  }
  cell = count ? cell / static_cast<double>(count) : 1.0;
  const double pad = 0.5 * cell;
  const double width = state.cols * cell + 2 * pad;
  const double height = state.rows * cell + 2 * pad;
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  for (int r = 0; r < state.rows; ++r) {
    for (int c = 0; c < state.cols; ++c) {
      const Placement& pl = state.at(r, c);
      const DescriptorFile& d = pieces[pl.piece];
      Point2 center{};
      for (const Point2& p : d.corners) center = center + 0.25 * p;
      // Side r faces up, so the piece turns counter-clockwise by r quarters.
      const double angle = 0.5 * std::numbers::pi * pl.rotation;
      const Point2 target{pad + (c + 0.5) * cell, height - (pad + (r + 0.5) * cell)};
      std::vector<Point2> outline;
      for (const auto& curve : d.curves) {
        for (const Point2& p : curve) outline.push_back(rotate(p, angle, center) - center + target);
      }
      os << "<polygon fill=\"#eed\" stroke=\"#333\" stroke-width=\"1\" points=\"" << svg_points(outline, height)
         << "\"/>\n";
      os << "<text x=\"" << target.x << "\" y=\"" << height - target.y << "\" font-size=\"" << 0.15 * cell
         << "\" text-anchor=\"middle\">" << d.piece.id << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace cbs::io
