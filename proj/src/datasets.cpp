#include "ddc/datasets.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "ddc/errors.hpp"

namespace ddc {

std::string_view to_string(ShapeKind k) {
    switch (k) {
        case ShapeKind::Blob: return "blob";
        case ShapeKind::Disk: return "disk";
        case ShapeKind::Annulus: return "annulus";
        case ShapeKind::Crescent: return "crescent";
        case ShapeKind::RectWithHole: return "rect-with-hole";
    }
    return "blob";
}

ShapeKind parse_shape_kind(std::string_view s) {
    for (auto k : {ShapeKind::Blob, ShapeKind::Disk, ShapeKind::Annulus, ShapeKind::Crescent, ShapeKind::RectWithHole}) {
        if (to_string(k) == s) return k;
    }
    throw InvalidParameter("unknown shape kind '" + std::string(s) + "'");
}

void ShapeSpec::validate() const {
    if (count < 1) throw InvalidParameter("shape count must be at least 1");
    if (!(scale > 0.0)) throw InvalidParameter("shape scale must be positive");
    if (center.dim() == 0) throw InvalidParameter("shape center must have a dimension");
    if (!(noise_stddev >= 0.0)) throw InvalidParameter("noise_stddev must be nonnegative");
    if ((kind == ShapeKind::Annulus || kind == ShapeKind::RectWithHole) && !(inner_ratio > 0.0 && inner_ratio < 1.0)) {
        throw InvalidParameter("inner_ratio must lie in (0, 1)");
    }
    if (kind == ShapeKind::Crescent && !(inner_ratio > 0.0)) throw InvalidParameter("inner_ratio must be positive");
    const bool planar = kind == ShapeKind::Annulus || kind == ShapeKind::Crescent || kind == ShapeKind::RectWithHole;
    if (planar && center.dim() != 2) {
        throw InvalidParameter(std::string(to_string(kind)) + " shapes are two-dimensional");
    }
}

namespace {

/// Membership in the local (unrotated, origin-centred) frame.
bool local_contains(const ShapeSpec& s, std::span<const double> x) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    const double R = s.scale;
    switch (s.kind) {
        case ShapeKind::Blob: return r2 <= 9.0 * R * R;
        case ShapeKind::Disk: return r2 <= R * R;
        case ShapeKind::Annulus: {
            const double ri = s.inner_ratio * R;
            return r2 <= R * R && r2 >= ri * ri;
        }
        case ShapeKind::Crescent: {
            const double ri = s.inner_ratio * R;
            const double dx = x[0] - s.offset_ratio * R;
            return r2 <= R * R && dx * dx + x[1] * x[1] > ri * ri;
        }
        case ShapeKind::RectWithHole: {
            const double hh = 0.6 * R;
            const double hole = s.inner_ratio * hh;
            return std::abs(x[0]) <= R && std::abs(x[1]) <= hh && r2 >= hole * hole;
        }
    }
    return false;
}

std::vector<double> to_world(const ShapeSpec& s, std::vector<double> local) {
    if (local.size() >= 2 && s.rotation != 0.0) {
        const double c = std::cos(s.rotation), sn = std::sin(s.rotation);
        const double x = local[0], y = local[1];
        local[0] = c * x - sn * y;
        local[1] = sn * x + c * y;
    }
    for (std::size_t a = 0; a < local.size(); ++a) local[a] += s.center[a];
    return local;
}

std::vector<double> to_local(const ShapeSpec& s, const Point& p) {
    std::vector<double> x(p.dim());
    for (std::size_t a = 0; a < x.size(); ++a) x[a] = p[a] - s.center[a];
    if (x.size() >= 2 && s.rotation != 0.0) {
        const double c = std::cos(s.rotation), sn = std::sin(s.rotation);
        const double u = x[0], v = x[1];
        x[0] = c * u + sn * v;
        x[1] = -sn * u + c * v;
    }
    return x;
}

std::vector<double> draw_local(const ShapeSpec& s, RandomSource& rng) {
    const std::size_t d = s.center.dim();
    std::vector<double> x(d);
    if (s.kind == ShapeKind::Blob) {
        for (double& c : x) c = rng.normal() * s.scale;
        return x;
    }
    std::vector<double> lo(d, -s.scale), hi(d, s.scale);
    if (s.kind == ShapeKind::RectWithHole) {
        lo[1] = -0.6 * s.scale;
        hi[1] = 0.6 * s.scale;
    }
    do {
        for (std::size_t a = 0; a < d; ++a) x[a] = rng.uniform(lo[a], hi[a]);
    } while (!local_contains(s, x));
    return x;
}

void append_number(std::string& out, double x) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    (void)ec;
    out.append(buf.data(), end);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

Dataset generate(std::span<const ShapeSpec> specs) {
    Dataset out;
    for (std::size_t k = 0; k < specs.size(); ++k) {
        const ShapeSpec& s = specs[k];
        s.validate();
        if (!out.points.empty() && out.points.front().dim() != s.center.dim()) {
            throw InvalidParameter("all shapes of one dataset must share a dimension");
        }
        RandomSource rng(s.seed);
        for (std::size_t i = 0; i < s.count; ++i) {
            std::vector<double> x = to_world(s, draw_local(s, rng));
            if (s.noise_stddev > 0.0) {
                for (double& c : x) c += rng.normal() * s.noise_stddev;
            }
            out.points.emplace_back(std::move(x));
            out.labels.push_back(std::int32_t(k));
        }
    }
    return out;
}

Dataset uniform_noise(const HyperRect& box, std::size_t count, std::uint64_t seed) {
    Dataset out;
    RandomSource rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        out.points.push_back(sample_uniform(box, rng));
        out.labels.push_back(-1);
    }
    return out;
}

bool shape_contains(const ShapeSpec& spec, const Point& p) {
    if (p.dim() != spec.center.dim()) throw InvalidInput("point dimension does not match the shape");
    return local_contains(spec, to_local(spec, p));
}

Circle crescent_bite(const ShapeSpec& spec) {
    if (spec.kind != ShapeKind::Crescent) throw InvalidInput("only crescents have a bite");
    return Circle{Point(to_world(spec, {spec.offset_ratio * spec.scale, 0.0})), spec.inner_ratio * spec.scale};
}

std::vector<std::string> preset_names() { return {"ds1-like", "ds9-like", "disk", "crescent", "annulus"}; }

std::vector<ShapeSpec> preset_specs(std::string_view name, std::uint64_t seed) {
    auto shape = [&](ShapeKind k, Point c, double scale, std::size_t n, std::uint64_t stream) {
        ShapeSpec s;
        s.kind = k;
        s.center = std::move(c);
        s.scale = scale;
        s.count = n;
        s.seed = RandomSource::derive(seed, stream).next_u64();
        return s;
    };
    std::vector<ShapeSpec> specs;
    if (name == "disk") {
        specs.push_back(shape(ShapeKind::Disk, {0.0, 0.0}, 1.0, 2000, 0));
    } else if (name == "crescent") {
        auto s = shape(ShapeKind::Crescent, {0.0, 0.0}, 1.0, 2000, 0);
        s.inner_ratio = 0.85;
        specs.push_back(s);
    } else if (name == "annulus") {
        auto s = shape(ShapeKind::Annulus, {0.0, 0.0}, 1.0, 2000, 0);
        s.inner_ratio = 0.4;
        specs.push_back(s);
    } else if (name == "ds1-like") {
        // Two neighbouring clusters at the upper left, two isolated ones.
        specs.push_back(shape(ShapeKind::Disk, {1.6, 8.2}, 1.1, 900, 0));
        auto hook = shape(ShapeKind::Crescent, {4.3, 8.0}, 1.3, 900, 1);
        hook.inner_ratio = 0.85;
        hook.rotation = std::numbers::pi / 2.0;
        specs.push_back(hook);
        auto ring = shape(ShapeKind::Annulus, {7.5, 3.0}, 1.5, 1000, 2);
        ring.inner_ratio = 0.4;
        specs.push_back(ring);
        specs.push_back(shape(ShapeKind::RectWithHole, {2.5, 2.5}, 1.6, 1000, 3));
    } else if (name == "ds9-like") {
        specs.push_back(shape(ShapeKind::Disk, {2.0, 7.5}, 1.5, 1500, 0));
        auto ring = shape(ShapeKind::Annulus, {7.5, 7.5}, 1.6, 1500, 1);
        ring.inner_ratio = 0.35;
        specs.push_back(ring);
        auto hook = shape(ShapeKind::Crescent, {2.5, 2.5}, 1.8, 1500, 2);
        hook.inner_ratio = 0.85;
        hook.rotation = -std::numbers::pi / 4.0;
        specs.push_back(hook);
        specs.push_back(shape(ShapeKind::Blob, {7.5, 2.5}, 0.6, 1200, 3));
    } else {
        throw InvalidParameter("unknown dataset preset '" + std::string(name) + "'");
    }
    return specs;
}

Dataset preset(std::string_view name, std::uint64_t seed) {
    const auto specs = preset_specs(name, seed);
    Dataset d = generate(specs);
    if (name == "ds9-like") {
        const Dataset noise =
            uniform_noise(HyperRect({0.0, 0.0}, {10.0, 10.0}), 150, RandomSource::derive(seed, 99).next_u64());
        d.points.insert(d.points.end(), noise.points.begin(), noise.points.end());
        d.labels.insert(d.labels.end(), noise.labels.begin(), noise.labels.end());
    }
    return d;
}

Dataset parse_csv(std::string_view text, const CsvOptions& options) {
    Dataset out;
    std::size_t line_no = 0;
    std::optional<std::size_t> columns;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;
        if (line_no == 1 && options.header) continue;
        line = trim(line);
        if (line.empty()) continue;

        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        const std::string where = "line " + std::to_string(line_no);
        if (!columns) columns = fields.size();
        if (fields.size() != *columns) {
            throw ParseError("expected " + std::to_string(*columns) + " fields, found " + std::to_string(fields.size()),
                             where);
        }
        const std::size_t ncoords = options.labels ? fields.size() - 1 : fields.size();
        if (ncoords == 0) throw ParseError("row has no coordinates", where);
        std::vector<double> coords(ncoords);
        for (std::size_t i = 0; i < ncoords; ++i) {
            const std::string_view f = fields[i];
            auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), coords[i]);
            if (ec != std::errc() || end != f.data() + f.size() || f.empty() || !std::isfinite(coords[i])) {
                throw ParseError("field " + std::to_string(i + 1) + " '" + std::string(f) + "' is not a finite number",
                                 where);
            }
        }
        if (options.labels) {
            const std::string_view f = fields.back();
            std::int32_t label = 0;
            auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), label);
            if (ec != std::errc() || end != f.data() + f.size() || f.empty()) {
                throw ParseError("label '" + std::string(f) + "' is not an integer", where);
            }
            out.labels.push_back(label);
        }
        out.points.emplace_back(std::move(coords));
    }
    return out;
}

std::string format_csv(std::span<const Point> points, std::span<const std::int32_t> labels,
                       const CsvOptions& options) {
    const bool with_labels = options.labels || !labels.empty();
    if (with_labels && labels.size() != points.size()) {
        throw InvalidInput("label column does not align with the points");
    }
    std::string out;
    if (options.header) {
        const std::size_t d = points.empty() ? 0 : points.front().dim();
        for (std::size_t a = 0; a < d; ++a) {
            if (a) out += ',';
            out += 'x' + std::to_string(a);
        }
        if (with_labels) out += d ? ",label" : "label";
        out += '\n';
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t a = 0; a < points[i].dim(); ++a) {
            if (a) out += ',';
            append_number(out, points[i][a]);
        }
        if (with_labels) {
            out += ',';
            out += std::to_string(labels[i]);
        }
        out += '\n';
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io-error", "cannot open " + path.string() + " for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io-error", "cannot open " + path.string() + " for writing");
    out.write(bytes.data(), std::streamsize(bytes.size()));
    if (!out) throw Error("io-error", "failed writing " + path.string());
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    return parse_csv(read_file(path), options);
}

void save_csv(const std::filesystem::path& path, std::span<const Point> points, std::span<const std::int32_t> labels,
              const CsvOptions& options) {
    write_file(path, format_csv(points, labels, options));
}

}  // namespace ddc
