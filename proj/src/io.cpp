#include "polyprop/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>

namespace polyprop {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

void write_trajectories_csv(std::ostream& out, const SimulationResult& r) {
  out << "branch_id,t,q1,q2,v1,v2,event_flag\n";
  for (const auto& tr : r.trajectories) {
    for (const auto& p : tr.points) {
      const auto& s = p.state;
      out << tr.branch_id << ',' << format_number(s.t) << ',' << format_number(s.q.x()) << ','
          << format_number(s.q.y()) << ',' << format_number(s.v.x()) << ',' << format_number(s.v.y()) << ','
          << to_string(p.flag) << '\n';
    }
  }
}

void write_paths_csv(std::ostream& out, const std::vector<std::vector<PolygonalPath>>& per_bin) {
  out << "dst_index,path_index,n_corners,length,action,vertices\n";
  for (std::size_t d = 0; d < per_bin.size(); ++d) {
    for (std::size_t k = 0; k < per_bin[d].size(); ++k) {
      const auto& p = per_bin[d][k];
      out << d << ',' << k << ',' << p.n_corners() << ',' << format_number(p.length) << ','
          << format_number(p.action) << ',';
      for (std::size_t v = 0; v < p.vertices.size(); ++v) {
        out << (v ? " " : "") << format_number(p.vertices[v].x()) << ' ' << format_number(p.vertices[v].y());
      }
      out << '\n';
    }
  }
}

void write_intensity_csv(std::ostream& out, const IntensityProfile& p) {
  out << "bin_index,screen_coordinate,intensity,n_paths,shadow_flag\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    out << i << ',' << format_number(p.coordinate[i]) << ',' << format_number(p.intensity[i]) << ','
        << p.n_paths[i] << ',' << (p.shadow[i] ? 1 : 0) << '\n';
  }
}

void write_profile_svg(std::ostream& out, const std::string& title, const std::vector<Series>& series) {
  const double W = 800, H = 400, L = 60, R = 20, T = 40, B = 40;
  double x0 = 0, x1 = 1;
  if (!series.empty() && series[0].profile->size() > 0) {
    x0 = series[0].profile->coordinate.front();
    x1 = series[0].profile->coordinate.back();
    if (x1 == x0) x1 = x0 + 1;
  }
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - std::clamp(y, 0.0, 1.0) * (H - T - B); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << L << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n"
      << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << L << "\" y=\"" << H - 12 << "\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_number(x0) << "</text>\n"
      << "<text x=\"" << W - R - 40 << "\" y=\"" << H - 12 << "\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_number(x1) << "</text>\n";
  int row = 0;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < s.profile->size(); ++i) {
      out << format_number(px(s.profile->coordinate[i])) << ',' << format_number(py(s.profile->intensity[i])) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << W - R - 160 << "\" y=\"" << 24 + 14 * row++ << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
        << s.color << "\">" << s.label << "</text>\n";
  }
  out << "</svg>\n";
}

void write_scene_svg(std::ostream& out, const Scenario& s, const SimulationResult* r) {
  const double W = 800;
  const Vec2 ext = s.box.extent();
  const double scale = W / ext.x();
  const double H = ext.y() * scale;
  auto X = [&](double x) { return format_number((x - s.box.lo.x()) * scale); };
  auto Y = [&](double y) { return format_number((s.box.hi.y() - y) * scale); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << format_number(H) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& w : s.walls) {
    out << "<line x1=\"" << X(w.a.x()) << "\" y1=\"" << Y(w.a.y()) << "\" x2=\"" << X(w.b.x()) << "\" y2=\""
        << Y(w.b.y()) << "\" stroke=\"firebrick\" stroke-width=\"" << (w.kind == WallSpec::Kind::thin ? 2 : 5)
        << "\"/>\n";
  }
  out << "<line x1=\"" << X(s.screen.a.x()) << "\" y1=\"" << Y(s.screen.a.y()) << "\" x2=\"" << X(s.screen.b.x())
      << "\" y2=\"" << Y(s.screen.b.y()) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  if (r) {
    for (const auto& tr : r->trajectories) {
      out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"0.6\" points=\"";
      for (const auto& p : tr.points) out << X(p.state.q.x()) << ',' << Y(p.state.q.y()) << ' ';
      out << "\"/>\n";
    }
  }
  out << "<circle cx=\"" << X(s.source.x()) << "\" cy=\"" << Y(s.source.y()) << "\" r=\"3\" fill=\"black\"/>\n"
      << "</svg>\n";
}

std::string report_json(const SimilarityReport& r, const std::string& scenario) {
  nlohmann::ordered_json j;
  j["scenario"] = scenario;
  j["first_bin"] = r.first_bin;
  j["last_bin"] = r.last_bin;
  j["correlation"] = r.correlation;
  j["max_abs_deviation"] = r.max_abs_deviation;
  j["max_maxima_offset_bins"] = r.max_maxima_offset;
  j["maxima_polygon"] = r.maxima_a;
  j["maxima_oracle"] = r.maxima_b;
  j["maxima_offsets_bins"] = r.maxima_offsets;
  j["minima_polygon"] = r.minima_a;
  j["minima_oracle"] = r.minima_b;
  j["minima_offsets_bins"] = r.minima_offsets;
  return j.dump(2) + "\n";
}

}  // namespace polyprop
