#pragma once

// Specification curves: configurations sorted by estimate with an aligned
// decision panel showing each configuration's decisions, rendered as
// deterministic SVG or lossless CSV.

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "silicon/decision_grid.hpp"
#include "silicon/feature_metrics.hpp"

namespace silicon::curve {

struct NoEligibleConfigurations : std::invalid_argument {
    explicit NoEligibleConfigurations(const std::string& metric)
        : std::invalid_argument("no eligible configurations for metric: " + metric) {}
};

struct UnsupportedFormat : std::invalid_argument {
    explicit UnsupportedFormat(const std::string& format)
        : std::invalid_argument("unsupported render format: " + format) {}
};

enum class Metric { f1_bjw, f1_gf, f2_bjw, f2_gf, f3 };

inline std::string to_string(Metric m) {
    switch (m) {
        case Metric::f1_bjw: return "f1_bjw";
        case Metric::f1_gf: return "f1_gf";
        case Metric::f2_bjw: return "f2_bjw";
        case Metric::f2_gf: return "f2_gf";
        default: return "f3";
    }
}

struct Column {
    std::string config_id;
    double estimate = 0.0;
    bool eligible = true;
};

struct PanelRow {
    std::string dimension;
    std::string value;
    std::vector<bool> ticks;  // one per column
};

struct ReferenceBand {
    double low = 0.0;
    double high = 0.0;
    double point = 0.0;
};

struct CurveModel {
    std::string metric_id;
    std::vector<Column> columns;        // sorted ascending by estimate
    std::vector<PanelRow> decision_panel;
    std::optional<ReferenceBand> reference_band;
};

namespace detail {

inline std::optional<double> metric_value(const metrics::ConfigScores& s, Metric m) {
    switch (m) {
        case Metric::f1_bjw: return s.f1_bjw;
        case Metric::f1_gf: return s.f1_gf;
        case Metric::f2_bjw: return s.f2_bjw;
        case Metric::f2_gf: return s.f2_gf;
        default: return s.f3_abs_error;
    }
}

struct Decisions {
    std::string model, setting, demographics, strategy;
};

inline Decisions decisions_of(const std::string& config_id) {
    const auto config = grid::parse_config_id(config_id);
    return {config.model.provider_id + "~" + config.model.model_id,
            grid::setting_token(config.sampling),
            grid::to_string(config.demographics_level),
            grid::to_string(config.strategy)};
}

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace detail

inline void rebuild_decision_panel(CurveModel& model) {
    model.decision_panel.clear();
    std::vector<detail::Decisions> decisions;
    decisions.reserve(model.columns.size());
    for (const auto& column : model.columns)
        decisions.push_back(detail::decisions_of(column.config_id));

    const std::vector<std::pair<std::string, std::string detail::Decisions::*>> dims = {
        {"model", &detail::Decisions::model},
        {"setting", &detail::Decisions::setting},
        {"demographics", &detail::Decisions::demographics},
        {"strategy", &detail::Decisions::strategy},
    };
    for (const auto& [dim_name, member] : dims) {
        std::vector<std::string> values;
        for (const auto& d : decisions)
            if (std::find(values.begin(), values.end(), d.*member) == values.end())
                values.push_back(d.*member);
        std::sort(values.begin(), values.end());
        for (const auto& value : values) {
            PanelRow row{dim_name, value, {}};
            row.ticks.reserve(decisions.size());
            for (const auto& d : decisions) row.ticks.push_back(d.*member == value);
            model.decision_panel.push_back(std::move(row));
        }
    }
}

inline CurveModel build_curve(const std::vector<metrics::ConfigScores>& scores,
                              Metric metric,
                              std::optional<ReferenceBand> reference = std::nullopt) {
    CurveModel model;
    model.metric_id = to_string(metric);
    for (const auto& s : scores)
        if (const auto value = detail::metric_value(s, metric))
            model.columns.push_back({s.config_id, *value, true});
    if (model.columns.empty()) throw NoEligibleConfigurations(model.metric_id);
    std::stable_sort(model.columns.begin(), model.columns.end(),
                     [](const Column& a, const Column& b) {
                         if (a.estimate != b.estimate) return a.estimate < b.estimate;
                         return a.config_id < b.config_id;
                     });
    model.reference_band = reference;
    rebuild_decision_panel(model);
    return model;
}

// ---- rendering ----

inline std::string render_curve_csv(const CurveModel& model) {
    std::string out = "#metric_id=" + model.metric_id + "\n";
    if (model.reference_band)
        out += "#reference_band=" + detail::fmt(model.reference_band->low) + "," +
               detail::fmt(model.reference_band->high) + "," +
               detail::fmt(model.reference_band->point) + "\n";
    out += "rank,config_id,estimate,eligible,model,setting,demographics,strategy\n";
    for (std::size_t i = 0; i < model.columns.size(); ++i) {
        const auto& column = model.columns[i];
        const auto d = detail::decisions_of(column.config_id);
        out += std::to_string(i + 1) + "," + column.config_id + "," +
               detail::fmt(column.estimate) + "," + (column.eligible ? "1" : "0") +
               "," + d.model + "," + d.setting + "," + d.demographics + "," +
               d.strategy + "\n";
    }
    return out;
}

inline CurveModel parse_curve_csv(const std::string& csv) {
    CurveModel model;
    std::istringstream in(csv);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("#metric_id=", 0) == 0) {
            model.metric_id = line.substr(11);
            continue;
        }
        if (line.rfind("#reference_band=", 0) == 0) {
            const auto rest = line.substr(16);
            ReferenceBand band;
            if (std::sscanf(rest.c_str(), "%lf,%lf,%lf", &band.low, &band.high,
                            &band.point) != 3)
                throw std::invalid_argument("bad reference_band line: " + line);
            model.reference_band = band;
            continue;
        }
        if (!header_seen) {
            header_seen = true;  // column header
            continue;
        }
        std::vector<std::string> fields;
        std::string field;
        std::istringstream fs(line);
        while (std::getline(fs, field, ',')) fields.push_back(field);
        if (fields.size() != 8)
            throw std::invalid_argument("bad curve CSV row: " + line);
        model.columns.push_back(
            {fields[1], std::stod(fields[2]), fields[3] == "1"});
    }
    rebuild_decision_panel(model);
    return model;
}

// Fixed-geometry SVG: estimate panel with optional shaded reference band
// above a decision-panel grid with one row per decision value. All text is
// plain <text> elements; output depends only on the model.
inline std::string render_curve_svg(const CurveModel& model) {
    const int col_w = 6;
    const int margin_left = 180;
    const int margin_right = 20;
    const int top = 20;
    const int panel_h = 260;
    const int gap = 24;
    const int row_h = 14;
    const int ncols = static_cast<int>(model.columns.size());
    const int plot_w = std::max(1, ncols * col_w);
    const int width = margin_left + plot_w + margin_right;
    const int panel_rows = static_cast<int>(model.decision_panel.size());
    const int height = top + panel_h + gap + panel_rows * row_h + 30;

    double lo = model.columns.front().estimate, hi = model.columns.back().estimate;
    if (model.reference_band) {
        lo = std::min(lo, model.reference_band->low);
        hi = std::max(hi, model.reference_band->high);
    }
    if (hi == lo) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
    auto y_of = [&](double v) {
        return top + panel_h - (v - lo) / (hi - lo) * panel_h;
    };
    auto x_of = [&](int i) { return margin_left + i * col_w + col_w / 2; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(width) + "\" height=\"" + std::to_string(height) +
           "\" font-family=\"monospace\" font-size=\"10\">\n";
    svg += "<text x=\"" + std::to_string(margin_left) + "\" y=\"12\">" +
           model.metric_id + " specification curve (" + std::to_string(ncols) +
           " configurations)</text>\n";

    if (model.reference_band) {
        svg += "<rect class=\"reference-band\" x=\"" + std::to_string(margin_left) +
               "\" y=\"" + detail::fmt(y_of(model.reference_band->high)) +
               "\" width=\"" + std::to_string(plot_w) + "\" height=\"" +
               detail::fmt(y_of(model.reference_band->low) -
                           y_of(model.reference_band->high)) +
               "\" fill=\"#9ecae1\" fill-opacity=\"0.5\"/>\n";
        svg += "<line class=\"reference-point\" x1=\"" + std::to_string(margin_left) +
               "\" x2=\"" + std::to_string(margin_left + plot_w) + "\" y1=\"" +
               detail::fmt(y_of(model.reference_band->point)) + "\" y2=\"" +
               detail::fmt(y_of(model.reference_band->point)) +
               "\" stroke=\"#3182bd\" stroke-width=\"1\"/>\n";
    }

    // axis and estimate points
    svg += "<line x1=\"" + std::to_string(margin_left) + "\" x2=\"" +
           std::to_string(margin_left) + "\" y1=\"" + std::to_string(top) +
           "\" y2=\"" + std::to_string(top + panel_h) + "\" stroke=\"black\"/>\n";
    for (double frac : {0.0, 0.5, 1.0}) {
        const double v = lo + frac * (hi - lo);
        svg += "<text x=\"" + std::to_string(margin_left - 45) + "\" y=\"" +
               detail::fmt(y_of(v) + 3) + "\">" + detail::fmt(v) + "</text>\n";
    }
    for (int i = 0; i < ncols; ++i) {
        svg += "<circle cx=\"" + std::to_string(x_of(i)) + "\" cy=\"" +
               detail::fmt(y_of(model.columns[i].estimate)) +
               "\" r=\"1.5\" fill=\"#444444\"/>\n";
    }

    // decision panel
    int y = top + panel_h + gap;
    for (const auto& row : model.decision_panel) {
        svg += "<text x=\"4\" y=\"" + std::to_string(y + row_h - 4) + "\">" +
               row.dimension + ": " + row.value + "</text>\n";
        for (int i = 0; i < ncols; ++i) {
            if (!row.ticks[static_cast<std::size_t>(i)]) continue;
            svg += "<line x1=\"" + std::to_string(x_of(i)) + "\" x2=\"" +
                   std::to_string(x_of(i)) + "\" y1=\"" + std::to_string(y + 2) +
                   "\" y2=\"" + std::to_string(y + row_h - 2) +
                   "\" stroke=\"#444444\" stroke-width=\"2\"/>\n";
        }
        y += row_h;
    }
    svg += "</svg>\n";
    return svg;
}

inline std::string render_curve(const CurveModel& model, const std::string& format) {
    if (format == "svg") return render_curve_svg(model);
    if (format == "csv") return render_curve_csv(model);
    throw UnsupportedFormat(format);
}

}  // namespace silicon::curve
