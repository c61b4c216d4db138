#include "bsched/gantt.hpp"

#include <algorithm>
#include <set>

namespace bsched {

namespace {

const char* kPalette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759",
                          "#76b7b2", "#edc948", "#b07aa1", "#ff9da7",
                          "#9c755f", "#bab0ac"};

std::string fmt(double x) { return format_num(x); }

}  // namespace

std::string gantt_svg(const Instance& inst, const Schedule& sched) {
  const double cmax = cmax_of(inst, sched);
  const double span = std::max(cmax, 1e-9);

  const double margin_left = 70, margin_right = 20, margin_top = 40, margin_bottom = 30;
  const double row_h = 34, bar_h = 24;
  const double plot_w = 820;
  const double width = margin_left + plot_w + margin_right;
  const double height = margin_top + inst.m * row_h + margin_bottom;
  const double sx = plot_w / span;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) +
         "\" height=\"" + fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " +
         fmt(height) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(width) + "\" height=\"" + fmt(height) +
         "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(margin_left) + "\" y=\"24\" font-family=\"sans-serif\" "
         "font-size=\"15\">makespan " + fmt(cmax) + "</text>\n";

  for (int mach = 0; mach < inst.m; ++mach) {
    const double y = margin_top + mach * row_h;
    svg += "<text x=\"8\" y=\"" + fmt(y + row_h / 2 + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">M" + std::to_string(mach) +
           "</text>\n";
    svg += "<line x1=\"" + fmt(margin_left) + "\" y1=\"" + fmt(y + row_h) + "\" x2=\"" +
           fmt(margin_left + plot_w) + "\" y2=\"" + fmt(y + row_h) +
           "\" stroke=\"#dddddd\"/>\n";
  }

  // one dashed marker per distinct release date
  std::set<double> releases;
  for (const auto& j : inst.jobs) releases.insert(j.r);
  for (double r : releases) {
    const double x = margin_left + r * sx;
    svg += "<line class=\"release\" x1=\"" + fmt(x) + "\" y1=\"" + fmt(margin_top) +
           "\" x2=\"" + fmt(x) + "\" y2=\"" + fmt(margin_top + inst.m * row_h) +
           "\" stroke=\"#555555\" stroke-dasharray=\"4 3\"/>\n";
  }

  std::vector<ScheduleEntry> rows = sched.entries;
  std::sort(rows.begin(), rows.end(),
            [](const ScheduleEntry& a, const ScheduleEntry& b) {
              return a.job_id < b.job_id;
            });
  for (const auto& e : rows) {
    const Job& job = inst.jobs[static_cast<size_t>(e.job_id)];
    const double x = margin_left + e.start * sx;
    const double w = std::max(job.p * sx, 1.0);
    const double y = margin_top + e.machine * row_h + (row_h - bar_h) / 2;
    const char* color = kPalette[static_cast<size_t>(e.job_id) % 10];
    svg += "<rect class=\"job\" x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" +
           fmt(w) + "\" height=\"" + fmt(bar_h) + "\" fill=\"" + color +
           "\" stroke=\"#333333\"/>\n";
    if (w > 22)
      svg += "<text x=\"" + fmt(x + 3) + "\" y=\"" + fmt(y + bar_h - 8) +
             "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"white\">J" +
             std::to_string(e.job_id) + "</text>\n";
  }

  // time axis ticks at 0, cmax
  svg += "<text x=\"" + fmt(margin_left) + "\" y=\"" + fmt(height - 10) +
         "\" font-family=\"sans-serif\" font-size=\"11\">0</text>\n";
  svg += "<text x=\"" + fmt(margin_left + plot_w - 30) + "\" y=\"" + fmt(height - 10) +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(cmax) + "</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace bsched
