#include "ddc/svg.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>
#include <ostream>

#include "ddc/errors.hpp"

namespace ddc {

namespace {

constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

const char* colour(std::int32_t label) {
    if (label < 0) return "#b0b0b0";
    return kPalette[std::size_t(label) % kPalette.size()];
}

std::string fmt(const char* pattern, double a, double b, double c) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

/// Maps data coordinates to the canvas with y pointing up and equal scales.
struct View {
    double x0 = 0.0, y0 = 0.0, scale = 1.0, pad = 20.0;
    double height = 0.0;

    double x(const Point& p) const { return pad + (p[0] - x0) * scale; }
    double y(const Point& p) const { return height - pad - ((p.dim() > 1 ? p[1] : 0.0) - y0) * scale; }
};

}  // namespace

std::string render_svg(const SvgScene& scene, std::ostream* warnings) {
    std::vector<const Point*> all;
    for (const auto& p : scene.points) all.push_back(&p);
    for (const auto& b : scene.boundaries) {
        for (const auto& m : b.members) all.push_back(&m.point);
    }
    for (const auto& p : scene.regenerated) all.push_back(&p);
    if (!scene.labels.empty() && scene.labels.size() != scene.points.size()) {
        throw InvalidInput("label count does not match point count");
    }
    if (!scene.regenerated_labels.empty() && scene.regenerated_labels.size() != scene.regenerated.size()) {
        throw InvalidInput("label count does not match regenerated point count");
    }
    const bool projected = std::any_of(all.begin(), all.end(), [](const Point* p) { return p->dim() > 2; });
    if (projected && warnings) *warnings << "ddc: warning: projecting onto the first two coordinates\n";

    View view;
    view.height = scene.height;
    double extent = 1.0;
    if (!all.empty()) {
        double lo[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
        double hi[2] = {-lo[0], -lo[1]};
        for (const Point* p : all) {
            for (std::size_t a = 0; a < 2; ++a) {
                const double v = a < p->dim() ? (*p)[a] : 0.0;
                lo[a] = std::min(lo[a], v);
                hi[a] = std::max(hi[a], v);
            }
        }
        extent = std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-12});
        view.x0 = lo[0];
        view.y0 = lo[1];
        view.scale = (std::min(scene.width, scene.height) - 2.0 * view.pad) / extent;
    }

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(scene.width) + "\" height=\"" +
           std::to_string(scene.height) + "\" viewBox=\"0 0 " + std::to_string(scene.width) + " " +
           std::to_string(scene.height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!scene.title.empty()) out += "<title>" + escape(scene.title) + "</title>\n";

    out += "<g id=\"points\" fill-opacity=\"0.5\">\n";
    for (std::size_t i = 0; i < scene.points.size(); ++i) {
        const auto& p = scene.points[i];
        out += fmt("<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.1f\"", view.x(p), view.y(p), 1.5);
        out += std::string(" fill=\"") + colour(scene.labels.empty() ? 0 : scene.labels[i]) + "\"/>\n";
    }
    out += "</g>\n<g id=\"regenerated\" fill-opacity=\"0.6\">\n";
    for (std::size_t i = 0; i < scene.regenerated.size(); ++i) {
        const auto& p = scene.regenerated[i];
        out += fmt("<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.1f\"", view.x(p), view.y(p), 1.5);
        out += std::string(" fill=\"") +
               colour(scene.regenerated_labels.empty() ? 0 : scene.regenerated_labels[i]) + "\"/>\n";
    }
    out += "</g>\n<g id=\"boundaries\">\n";
    const double len = (scene.balance_length > 0.0 ? scene.balance_length : 0.03 * extent) * view.scale;
    for (std::size_t k = 0; k < scene.boundaries.size(); ++k) {
        const char* c = colour(std::int32_t(k));
        for (const auto& m : scene.boundaries[k].members) {
            const double cx = view.x(m.point), cy = view.y(m.point);
            out += fmt("<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.1f\"", cx, cy, 3.0);
            out += std::string(" fill=\"") + c + "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
            if (scene.draw_balance && m.balance.dim() >= 2) {
                out += fmt("<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\"", cx, cy, cx + len * m.balance[0]);
                char buf[96];
                std::snprintf(buf, sizeof buf, " y2=\"%.3f\" stroke=\"black\" stroke-width=\"0.8\"/>\n",
                              cy - len * m.balance[1]);
                out += buf;
            }
        }
    }
    out += "</g>\n</svg>\n";
    return out;
}

}  // namespace ddc
