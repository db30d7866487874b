#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "chainsim/trace.hpp"

namespace chainsim {

// Renders one round as a static SVG frame: chain edges, robots as dots,
// runner tokens highlighted with a direction arrowhead. Pure function of the
// record, so identical inputs give identical bytes.
inline void render_svg(const TraceRecord& rec, std::ostream& out, int cell = 24) {
  if (rec.positions.empty()) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1\" height=\"1\"/>\n";
    return;
  }
  GridPoint lo = rec.positions.front();
  GridPoint hi = lo;
  for (const auto& p : rec.positions) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  const int margin = cell;
  const auto width = (hi.x - lo.x) * cell + 2 * margin;
  const auto height = (hi.y - lo.y) * cell + 2 * margin;
  // SVG y grows downward; flip so the grid's +y points up.
  const auto sx = [&](const GridPoint& p) { return (p.x - lo.x) * cell + margin; };
  const auto sy = [&](const GridPoint& p) { return (hi.y - p.y) * cell + margin; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<!-- round " << rec.round << " -->\n";

  out << "<path fill=\"none\" stroke=\"#888\" stroke-width=\"2\" d=\"";
  for (std::size_t i = 0; i <= rec.positions.size(); ++i) {
    const auto& p = rec.positions[i % rec.positions.size()];
    out << (i == 0 ? 'M' : 'L') << sx(p) << ' ' << sy(p);
  }
  out << "Z\"/>\n";

  std::vector<int> run_dir(rec.positions.size(), 0);
  for (const auto& t : rec.tokens)
    if (t.owner < run_dir.size()) run_dir[t.owner] = t.dir;

  for (std::size_t i = 0; i < rec.positions.size(); ++i) {
    const auto& p = rec.positions[i];
    const bool runner = run_dir[i] != 0;
    out << "<circle cx=\"" << sx(p) << "\" cy=\"" << sy(p) << "\" r=\"" << (runner ? 7 : 5)
        << "\" fill=\"" << (runner ? "#d9480f" : "#222") << "\"/>\n";
    if (runner) {
      const auto& q = rec.positions[(i + rec.positions.size() + (run_dir[i] > 0 ? 1 : -1)) %
                                    rec.positions.size()];
      const auto mx = (sx(p) + sx(q)) / 2;
      const auto my = (sy(p) + sy(q)) / 2;
      out << "<line x1=\"" << sx(p) << "\" y1=\"" << sy(p) << "\" x2=\"" << mx << "\" y2=\"" << my
          << "\" stroke=\"#d9480f\" stroke-width=\"3\"/>\n";
    }
  }
  out << "</svg>\n";
}

// Writes one frame file per selected round index into `dir`; an empty
// selection renders every record. Returns the file names written.
inline std::vector<std::string> render_frames(const Trace& trace, const std::string& dir,
                                              const std::vector<std::size_t>& selection = {},
                                              int cell = 24) {
  std::vector<std::size_t> picks = selection;
  if (picks.empty())
    for (std::size_t i = 0; i < trace.records.size(); ++i) picks.push_back(i);
  std::vector<std::string> files;
  for (const auto i : picks) {
    if (i >= trace.records.size()) continue;
    std::ostringstream name;
    name << "frame_" << std::setw(6) << std::setfill('0') << trace.records[i].round << ".svg";
    const std::string path = dir + "/" + name.str();
    std::ofstream out(path, std::ios::binary);
    render_svg(trace.records[i], out, cell);
    files.push_back(name.str());
  }
  return files;
}

}  // namespace chainsim
