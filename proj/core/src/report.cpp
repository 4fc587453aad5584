#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "pir/corpus_io.hpp"
#include "pir/error.hpp"
#include "pir/simulation.hpp"

namespace pir {
namespace {

std::string fixed6(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream ss(line);
  while (std::getline(ss, part, sep)) parts.push_back(part);
  if (!line.empty() && line.back() == sep) parts.emplace_back();
  return parts;
}

constexpr std::string_view kReportHeader = "task,method,n,trials,mean,stderr,skips";

// Distinct, readable colors for up to six series.
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

void write_report_csv(std::ostream& out, std::span<const ReportRow> rows) {
  out << kReportHeader << '\n';
  for (const auto& r : rows) {
    out << r.task << ',' << r.method << ',' << r.n << ',' << r.trials << ',' << fixed6(r.mean) << ','
        << fixed6(r.stderr_) << ',' << r.skips << '\n';
  }
}

std::vector<ReportRow> read_report_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kReportHeader) {
    throw Error(ErrorCode::kInvalidInput, "report.csv: unexpected header");
  }
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 7) throw Error(ErrorCode::kInvalidInput, "report.csv: expected 7 fields in '" + line + "'");
    ReportRow r;
    r.task = f[0];
    r.method = f[1];
    r.n = std::stoull(f[2]);
    r.trials = std::stoull(f[3]);
    r.mean = f[4] == "nan" ? std::nan("") : std::stod(f[4]);
    r.stderr_ = f[5] == "nan" ? std::nan("") : std::stod(f[5]);
    r.skips = std::stoull(f[6]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string render_svg(std::span<const ReportRow> rows, std::string_view task) {
  constexpr double kWidth = 640, kHeight = 400, kLeft = 60, kRight = 150, kTop = 30, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  std::map<std::string, std::vector<std::pair<std::size_t, double>>> series;
  std::set<std::size_t> xs;
  for (const auto& r : rows) {
    if (r.task != task || r.trials == 0 || std::isnan(r.mean)) continue;
    series[r.method].emplace_back(r.n, r.mean);
    xs.insert(r.n);
  }
  const double x_min = xs.empty() ? 0.0 : static_cast<double>(*xs.begin());
  const double x_max = xs.empty() ? 1.0 : static_cast<double>(*xs.rbegin());
  const auto px = [&](double x) {
    return x_max > x_min ? kLeft + (x - x_min) / (x_max - x_min) * plot_w : kLeft + plot_w / 2;
  };
  const auto py = [&](double y) { return kTop + (1.0 - y) * plot_h; };
  const auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"18\" text-anchor=\"middle\">" << task
      << ": mean vs context size n</text>\n";
  svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(kLeft + plot_w) << "\" y2=\""
      << num(py(0)) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(kLeft) << "\" y2=\""
      << num(py(1)) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double y = i / 5.0;
    svg << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(y) + 4) << "\" text-anchor=\"end\">" << num(y)
        << "</text>\n";
  }
  for (auto x : xs) {
    svg << "<text x=\"" << num(px(static_cast<double>(x))) << "\" y=\"" << num(py(0) + 18)
        << "\" text-anchor=\"middle\">" << x << "</text>\n";
  }
  svg << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 10)
      << "\" text-anchor=\"middle\">n</text>\n";

  std::size_t color = 0;
  for (auto& [method, points] : series) {
    std::sort(points.begin(), points.end());
    const char* stroke = kColors[color++ % std::size(kColors)];
    svg << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < points.size(); ++i) {
      svg << (i ? " " : "") << num(px(static_cast<double>(points[i].first))) << ',' << num(py(points[i].second));
    }
    svg << "\"/>\n";
    const double ly = kTop + 20.0 * static_cast<double>(color);
    svg << "<line x1=\"" << num(kLeft + plot_w + 15) << "\" y1=\"" << num(ly) << "\" x2=\""
        << num(kLeft + plot_w + 35) << "\" y2=\"" << num(ly) << "\" stroke=\"" << stroke
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << num(kLeft + plot_w + 40) << "\" y=\"" << num(ly + 4) << "\">" << method << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

SuiteResult run_suite(const SimulationContext& ctx, const SuiteConfig& config) {
  SuiteResult result;
  std::ostringstream windows;
  windows << "task,method,n,trial,doc_id,window,value\n";
  for (auto task : config.tasks) {
    for (auto method : config.methods) {
      for (auto n : config.n_grid) {
        ReportRow row;
        row.task = std::string(to_string(task));
        row.method = std::string(to_string(method));
        row.n = n;
        try {
          const auto cell = task == Task::kExploratory
                                ? exploratory_precision(ctx, method, n, config.trials, config.seed)
                                : known_item_found(ctx, method, n, config.trials, config.seed);
          row.trials = cell.completed;
          row.mean = cell.completed ? cell.mean : std::nan("");
          row.stderr_ = cell.completed ? cell.stderr_ : std::nan("");
          row.skips = cell.skips;
          for (const auto& t : cell.trials) {
            for (std::size_t w = 0; w < t.window_values.size(); ++w) {
              windows << row.task << ',' << row.method << ',' << n << ',' << t.trial << ','
                      << (*ctx.corpus)[t.doc].id << ',' << w << ',' << fixed6(t.window_values[w]) << '\n';
            }
          }
        } catch (const std::exception& e) {
          row.trials = 0;
          row.mean = std::nan("");
          row.stderr_ = std::nan("");
          result.errors.push_back(row.task + "/" + row.method + "/n=" + std::to_string(n) + ": " + e.what());
        }
        result.rows.push_back(std::move(row));
      }
    }
  }
  if (config.out_dir.empty()) return result;

  std::filesystem::create_directories(config.out_dir);
  {
    auto out = open_output(config.out_dir / "report.csv");
    write_report_csv(out, result.rows);
  }
  {
    auto out = open_output(config.out_dir / "windows.csv");
    out << windows.str();
  }
  {
    auto out = open_output(config.out_dir / "config.txt");
    out << "seed\t" << config.seed << '\n' << "trials\t" << config.trials << '\n' << "n_grid\t";
    for (std::size_t i = 0; i < config.n_grid.size(); ++i) out << (i ? "," : "") << config.n_grid[i];
    out << '\n' << "top_k\t" << ctx.top_k << '\n' << "n_exp\t" << ctx.query.n_exp << '\n';
    out << "score_weighting\t" << (ctx.query.score_weighting ? "on" : "off") << '\n';
    out << "beam\tb=" << ctx.beam.branching << " k=" << ctx.beam.width << " d=" << ctx.beam.depth << '\n';
    out << "intent\tc=" << ctx.intent.c << " tau=" << ctx.intent.tau;
    if (ctx.linrel != nullptr) out << " mu=" << ctx.linrel->mu() << " M=" << ctx.linrel->matrix().cols();
    out << '\n';
    if (ctx.model != nullptr) out << "model\t" << ctx.model->kind() << " V=" << ctx.model->vocab().size() << '\n';
  }
  if (!result.errors.empty()) {
    auto out = open_output(config.out_dir / "errors.txt");
    for (const auto& e : result.errors) out << e << '\n';
  }
  // Plots are drawn from the CSV as written, so a re-plot of the file is identical.
  std::vector<ReportRow> parsed;
  {
    auto in = open_input(config.out_dir / "report.csv");
    parsed = read_report_csv(in);
  }
  for (auto task : config.tasks) {
    auto out = open_output(config.out_dir / ("curve_" + std::string(to_string(task)) + ".svg"));
    out << render_svg(parsed, to_string(task));
  }
  return result;
}

}  // namespace pir
