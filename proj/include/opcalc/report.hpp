/// Scenario results and artifact emission: index JSON, per-scenario CSV, and
/// hand-rolled SVG line plots with fitted/predicted slope annotations.
#pragma once

#include "opcalc/numerics.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace opcalc {

struct Check {
    std::string name;
    double measured = 0;
    double predicted = 0;
    double tolerance = 0;    // named tolerance the pass flag was decided with
    std::string anchor;      // provenance anchor for the predicted value
    bool pass = false;
    double margin = 0;       // tolerance - |deviation| (sign convention per check)
};

struct Series {
    std::vector<double> x, y;
    double fitted_slope = 0;
    double predicted_slope = 0;
    bool has_fit = false;
};

struct ScanResult {
    std::string scenario;
    std::map<std::string, double> values;
    std::vector<Check> checks;
    std::map<std::string, Series> series;
    double runtime_seconds = 0;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    Check& add_check(const std::string& name, double measured, double predicted,
                     double tolerance, const std::string& anchor) {
        Check c;
        c.name = name;
        c.measured = measured;
        c.predicted = predicted;
        c.tolerance = tolerance;
        c.anchor = anchor;
        c.margin = tolerance - std::abs(measured - predicted);
        c.pass = c.margin >= 0;
        checks.push_back(c);
        return checks.back();
    }

    Check& add_bound_check(const std::string& name, double measured, double bound,
                           const std::string& anchor) {
        Check c;
        c.name = name;
        c.measured = measured;
        c.predicted = bound;
        c.tolerance = 0;
        c.anchor = anchor;
        c.margin = bound - measured;
        c.pass = c.margin >= 0;
        checks.push_back(c);
        return checks.back();
    }
};

inline nlohmann::json to_json(const ScanResult& r) {
    nlohmann::json j;
    // runtime_seconds is deliberately not serialized: artifacts must be
    // byte-identical across reruns with the same seed
    j["scenario"] = r.scenario;
    j["pass"] = r.all_pass();
    j["values"] = r.values;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks) {
        j["checks"].push_back({{"name", c.name},
                               {"measured", c.measured},
                               {"predicted", c.predicted},
                               {"tolerance", c.tolerance},
                               {"anchor", c.anchor},
                               {"pass", c.pass},
                               {"margin", c.margin}});
    }
    for (const auto& [name, s] : r.series) {
        nlohmann::json js;
        js["x"] = s.x;
        js["y"] = s.y;
        if (s.has_fit) {
            js["fitted_slope"] = s.fitted_slope;
            js["predicted_slope"] = s.predicted_slope;
        }
        j["series"][name] = js;
    }
    return j;
}

inline void write_scenario_csv(const ScanResult& r, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_scenario_csv: cannot open " + path.string());
    out.precision(17);
    out << "kind,name,measured,predicted,tolerance,pass,margin,anchor\n";
    for (const auto& c : r.checks)
        out << "check," << c.name << ',' << c.measured << ',' << c.predicted << ','
            << c.tolerance << ',' << (c.pass ? 1 : 0) << ',' << c.margin << ",\""
            << c.anchor << "\"\n";
    for (const auto& [k, v] : r.values)
        out << "value," << k << ',' << v << ",,,,,\n";
    for (const auto& [name, s] : r.series)
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << "series:" << name << ',' << i << ',' << s.x[i] << ',' << s.y[i]
                << ",,,,\n";
}

// minimal SVG line plot; annotates fitted vs predicted slope when present
inline void write_series_svg(const std::string& title, const Series& s,
                             const std::filesystem::path& path) {
    if (s.x.size() < 2) return;
    const double W = 640, H = 420, ML = 60, MR = 20, MT = 40, MB = 50;
    double xmin = s.x.front(), xmax = s.x.front(), ymin = s.y.front(), ymax = s.y.front();
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        xmin = std::min(xmin, s.x[i]); xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, s.y[i]); ymax = std::max(ymax, s.y[i]);
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    auto px = [&](double x) { return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR); };
    auto py = [&](double y) { return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB); };
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_series_svg: cannot open " + path.string());
    out.precision(10);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
        << "</text>\n";
    out << "<line x1='" << ML << "' y1='" << H - MB << "' x2='" << W - MR << "' y2='"
        << H - MB << "' stroke='black'/>\n";
    out << "<line x1='" << ML << "' y1='" << MT << "' x2='" << ML << "' y2='" << H - MB
        << "' stroke='black'/>\n";
    out << "<polyline fill='none' stroke='steelblue' stroke-width='2' points='";
    for (std::size_t i = 0; i < s.x.size(); ++i) out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    out << "'/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
        out << "<circle cx='" << px(s.x[i]) << "' cy='" << py(s.y[i])
            << "' r='3' fill='navy'/>\n";
    if (s.has_fit) {
        out << "<text x='" << ML + 8 << "' y='" << MT + 16 << "' font-size='13'>fitted slope "
            << s.fitted_slope << ", predicted " << s.predicted_slope << "</text>\n";
    }
    out << "<text x='" << W / 2 << "' y='" << H - 14
        << "' text-anchor='middle' font-size='12'>x</text>\n";
    out << "</svg>\n";
}

// index JSON {scenario -> pass/fail/margin}, per-scenario JSON+CSV, SVGs for
// fitted series; the index is written last
inline void emit_report(const std::vector<ScanResult>& results,
                        const std::filesystem::path& out_dir) {
    if (results.empty()) throw std::invalid_argument("emit_report: need >= 1 result");
    std::filesystem::create_directories(out_dir);
    nlohmann::json index;
    for (const auto& r : results) {
        std::filesystem::path dir = out_dir / r.scenario;
        std::filesystem::create_directories(dir);
        {
            std::ofstream out(dir / "result.json");
            out << to_json(r).dump(2) << '\n';
        }
        write_scenario_csv(r, dir / "result.csv");
        for (const auto& [name, s] : r.series)
            if (s.has_fit) write_series_svg(r.scenario + ": " + name, s,
                                            dir / (name + ".svg"));
        double worst = INFINITY;
        for (const auto& c : r.checks) worst = std::min(worst, c.margin);
        index[r.scenario] = {{"pass", r.all_pass()},
                             {"margin", r.checks.empty() ? 0.0
                                                         : (std::isfinite(worst) ? worst : 0.0)}};
    }
    std::ofstream out(out_dir / "index.json");
    out << index.dump(2) << '\n';
}

} // namespace opcalc
