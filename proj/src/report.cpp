#include "speclab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <limits>

#include "speclab/errors.hpp"

namespace speclab {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits = 2) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

ordered_json optional_number(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

std::optional<double> read_optional(const ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

ordered_json fit_json(const std::optional<ScalingFit>& fit) {
  if (!fit) return nullptr;
  ordered_json j;
  j["exponent"] = fit->exponent;
  j["log_constant"] = fit->log_constant;
  j["max_residual"] = fit->max_residual;
  j["points"] = fit->points;
  return j;
}

void require_rows(const ProbeResult& result) {
  if (result.rows.empty()) throw DomainError("probe result '" + result.probe + "' has no rows");
}

std::size_t fit_column_index(const ProbeResult& result) {
  const auto it = std::find(result.extra_columns.begin(), result.extra_columns.end(), result.fit_column);
  return static_cast<std::size_t>(it - result.extra_columns.begin());
}

double fit_abscissa(const ProbeResult& result, const ProbeRow& row) {
  if (result.fit_column.empty()) return row.abscissa;
  return row.extras.at(fit_column_index(result));
}

struct Panel {
  double left;
  double top;
  double width;
  double height;
  double xmin;
  double xmax;
  double ymin;
  double ymax;

  double px(double x) const { return left + (x - xmin) / (xmax - xmin) * width; }
  double py(double y) const { return top + height - (y - ymin) / (ymax - ymin) * height; }
};

void widen(double& lo, double& hi) {
  if (!(hi > lo)) {
    const double pad = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
    lo -= pad;
    hi += pad;
    return;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
}

std::string frame(const Panel& p, const std::string& title, const std::string& xlabel, const std::string& ylabel) {
  std::string s;
  s += "  <rect x=\"" + fixed(p.left) + "\" y=\"" + fixed(p.top) + "\" width=\"" + fixed(p.width) + "\" height=\"" +
       fixed(p.height) + "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
  s += "  <text x=\"" + fixed(p.left + p.width / 2) + "\" y=\"" + fixed(p.top - 12) +
       "\" text-anchor=\"middle\" font-size=\"14\">" + title + "</text>\n";
  s += "  <text x=\"" + fixed(p.left + p.width / 2) + "\" y=\"" + fixed(p.top + p.height + 36) +
       "\" text-anchor=\"middle\" font-size=\"12\">" + xlabel + "</text>\n";
  s += "  <text x=\"" + fixed(p.left - 48) + "\" y=\"" + fixed(p.top + p.height / 2) +
       "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 " + fixed(p.left - 48) + " " +
       fixed(p.top + p.height / 2) + ")\">" + ylabel + "</text>\n";
  // Tick labels at the corners of the data range.
  s += "  <text x=\"" + fixed(p.left) + "\" y=\"" + fixed(p.top + p.height + 16) +
       "\" text-anchor=\"start\" font-size=\"10\">" + g17(p.xmin).substr(0, 8) + "</text>\n";
  s += "  <text x=\"" + fixed(p.left + p.width) + "\" y=\"" + fixed(p.top + p.height + 16) +
       "\" text-anchor=\"end\" font-size=\"10\">" + g17(p.xmax).substr(0, 8) + "</text>\n";
  s += "  <text x=\"" + fixed(p.left - 4) + "\" y=\"" + fixed(p.top + p.height) +
       "\" text-anchor=\"end\" font-size=\"10\">" + g17(p.ymin).substr(0, 8) + "</text>\n";
  s += "  <text x=\"" + fixed(p.left - 4) + "\" y=\"" + fixed(p.top + 10) + "\" text-anchor=\"end\" font-size=\"10\">" +
       g17(p.ymax).substr(0, 8) + "</text>\n";
  return s;
}

std::string escape_xml(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string to_csv(const ProbeResult& result) {
  std::string out = "abscissa,raw,ratio,predicted";
  for (const std::string& c : result.extra_columns) out += "," + c;
  out += "\n";
  const std::string predicted = result.predicted_limit ? g17(*result.predicted_limit) : "";
  for (const ProbeRow& row : result.rows) {
    out += g17(row.abscissa) + "," + g17(row.raw) + "," + (row.ratio ? g17(*row.ratio) : "") + "," + predicted;
    for (double e : row.extras) out += "," + g17(e);
    out += "\n";
  }
  return out;
}

std::string to_json(const ProbeResult& result) {
  ordered_json j;
  j["probe"] = result.probe;
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : result.parameters) params[k] = v;
  j["parameters"] = params;
  j["extra_columns"] = result.extra_columns;
  j["fit_column"] = result.fit_column;
  ordered_json rows = ordered_json::array();
  for (const ProbeRow& row : result.rows) {
    ordered_json r;
    r["abscissa"] = row.abscissa;
    r["raw"] = row.raw;
    r["ratio"] = optional_number(row.ratio);
    r["extras"] = row.extras;
    rows.push_back(std::move(r));
  }
  j["rows"] = rows;
  j["predicted_limit"] = optional_number(result.predicted_limit);
  j["predicted_exponent"] = optional_number(result.predicted_exponent);
  j["fit"] = fit_json(result.fit);
  return j.dump(2) + "\n";
}

ProbeResult from_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("invalid probe JSON: ") + e.what());
  }
  ProbeResult r;
  r.probe = j.at("probe").get<std::string>();
  for (const auto& [k, v] : j.at("parameters").items()) r.parameters.emplace_back(k, v.get<std::string>());
  r.extra_columns = j.at("extra_columns").get<std::vector<std::string>>();
  r.fit_column = j.at("fit_column").get<std::string>();
  for (const auto& row : j.at("rows")) {
    ProbeRow pr;
    pr.abscissa = row.at("abscissa").get<double>();
    pr.raw = row.at("raw").get<double>();
    pr.ratio = read_optional(row.at("ratio"));
    pr.extras = row.at("extras").get<std::vector<double>>();
    r.rows.push_back(std::move(pr));
  }
  r.predicted_limit = read_optional(j.at("predicted_limit"));
  r.predicted_exponent = read_optional(j.at("predicted_exponent"));
  if (const auto& f = j.at("fit"); !f.is_null()) {
    r.fit = ScalingFit{f.at("exponent").get<double>(), f.at("log_constant").get<double>(),
                       f.at("max_residual").get<double>(), f.at("points").get<int>()};
  }
  return r;
}

std::string summary_json(const ProbeResult& result) {
  ordered_json j;
  j["probe"] = result.probe;
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : result.parameters) params[k] = v;
  j["parameters"] = params;
  j["rows"] = result.rows.size();
  j["fit"] = fit_json(result.fit);
  j["predicted_exponent"] = optional_number(result.predicted_exponent);
  if (result.fit && result.predicted_exponent)
    j["exponent_deviation"] = result.fit->exponent - *result.predicted_exponent;
  else
    j["exponent_deviation"] = nullptr;
  j["predicted_limit"] = optional_number(result.predicted_limit);
  std::optional<double> last_ratio;
  for (const ProbeRow& row : result.rows)
    if (row.ratio) last_ratio = row.ratio;
  j["final_ratio"] = optional_number(last_ratio);
  if (last_ratio && result.predicted_limit && *result.predicted_limit != 0.0)
    j["relative_deviation"] = (*last_ratio - *result.predicted_limit) / std::abs(*result.predicted_limit);
  else
    j["relative_deviation"] = nullptr;
  return j.dump(2) + "\n";
}

std::string render_svg(const ProbeResult& result) {
  if (result.rows.size() < 2) throw DomainError("render_plot needs at least 2 rows");
  constexpr double kWidth = 960;
  constexpr double kHeight = 420;
  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"960\" height=\"420\" viewBox=\"0 0 960 420\">\n";
  s += "  <title>" + escape_xml(result.probe) + "</title>\n";
  s += "  <rect x=\"0\" y=\"0\" width=\"" + fixed(kWidth) + "\" height=\"" + fixed(kHeight) + "\" fill=\"white\"/>\n";

  // Log-log panel.
  std::vector<std::pair<double, double>> pts;
  for (const ProbeRow& row : result.rows) {
    const double x = fit_abscissa(result, row);
    if (row.raw > 0.0 && x > 0.0) pts.emplace_back(std::log10(x), std::log10(row.raw));
  }
  const std::string xname = result.fit_column.empty() ? "abscissa" : result.fit_column;
  if (!pts.empty()) {
    double xmin = pts.front().first, xmax = xmin, ymin = pts.front().second, ymax = ymin;
    for (const auto& [x, y] : pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
    widen(xmin, xmax);
    widen(ymin, ymax);
    const Panel p{70, 40, 380, 320, xmin, xmax, ymin, ymax};
    s += frame(p, escape_xml(result.probe) + ": log10 raw vs log10 " + xname, "log10 " + xname, "log10 raw");
    for (const auto& [x, y] : pts)
      s += "  <circle cx=\"" + fixed(p.px(x)) + "\" cy=\"" + fixed(p.py(y)) + "\" r=\"3\" fill=\"#1f77b4\"/>\n";
    if (result.fit) {
      const double ln10 = std::log(10.0);
      const auto line_y = [&](double x) { return (result.fit->log_constant + result.fit->exponent * x * ln10) / ln10; };
      s += "  <line x1=\"" + fixed(p.px(xmin)) + "\" y1=\"" + fixed(p.py(std::clamp(line_y(xmin), ymin, ymax))) +
           "\" x2=\"" + fixed(p.px(xmax)) + "\" y2=\"" + fixed(p.py(std::clamp(line_y(xmax), ymin, ymax))) +
           "\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
      s += "  <text x=\"80\" y=\"58\" font-size=\"12\" fill=\"#d62728\">fitted exponent " +
           fixed(result.fit->exponent, 4) + "</text>\n";
    }
  } else {
    s += "  <text x=\"260\" y=\"200\" text-anchor=\"middle\" font-size=\"14\">no positive values</text>\n";
  }

  // Ratio panel.
  std::vector<std::pair<double, double>> ratios;
  for (const ProbeRow& row : result.rows)
    if (row.ratio && std::isfinite(*row.ratio)) ratios.emplace_back(row.abscissa, *row.ratio);
  if (!ratios.empty()) {
    double xmin = ratios.front().first, xmax = xmin, ymin = ratios.front().second, ymax = ymin;
    for (const auto& [x, y] : ratios) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
    if (result.predicted_limit) {
      ymin = std::min(ymin, *result.predicted_limit);
      ymax = std::max(ymax, *result.predicted_limit);
    }
    widen(xmin, xmax);
    widen(ymin, ymax);
    const Panel p{550, 40, 380, 320, xmin, xmax, ymin, ymax};
    s += frame(p, "normalized ratio", "abscissa", "ratio");
    if (result.predicted_limit) {
      const double y = p.py(*result.predicted_limit);
      s += "  <line x1=\"" + fixed(p.left) + "\" y1=\"" + fixed(y) + "\" x2=\"" + fixed(p.left + p.width) + "\" y2=\"" +
           fixed(y) + "\" class=\"reference\" stroke=\"#2ca02c\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n";
    }
    std::string path;
    for (const auto& [x, y] : ratios) {
      path += (path.empty() ? "M " : " L ") + fixed(p.px(x)) + " " + fixed(p.py(y));
      s += "  <circle cx=\"" + fixed(p.px(x)) + "\" cy=\"" + fixed(p.py(y)) + "\" r=\"3\" fill=\"#ff7f0e\"/>\n";
    }
    s += "  <path d=\"" + path + "\" fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"1\"/>\n";
  } else {
    s += "  <text x=\"740\" y=\"200\" text-anchor=\"middle\" font-size=\"14\">no normalized ratios</text>\n";
  }
  s += "</svg>\n";
  return s;
}

void write_text_file(const std::filesystem::path& file, std::string_view text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw ResourceError("cannot write " + file.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw ResourceError("failed while writing " + file.string());
}

void write_table(const ProbeResult& result, TableFormat format, const std::filesystem::path& file) {
  require_rows(result);
  write_text_file(file, format == TableFormat::csv ? to_csv(result) : to_json(result));
}

void render_plot(const ProbeResult& result, const std::filesystem::path& file) {
  write_text_file(file, render_svg(result));
}

}  // namespace speclab
