// Copyright 2026 The radarbev Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "radarbev/io.hpp"

#include <png.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace radarbev::io {

using nlohmann::json;

void write_file_atomic(const fs::path& path, const std::string& contents) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw IoError("short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_number(double v) {
    if (v == 0.0) return "0";  // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, std::size_t line_no) {
    const std::string t = trim(field);
    if (t.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty field");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ParseError("line " + std::to_string(line_no) + ": not a finite number '" + t + "'");
    }
    return v;
}

// Non-empty data lines after the header, with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::vector<std::string>>> csv_rows(
    const std::string& text, const std::vector<std::string>& header, bool exact_width = true) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        auto fields = split(line, ',');
        if (!have_header) {
            for (auto& f : fields) f = trim(f);
            if (fields.size() < header.size() ||
                !std::equal(header.begin(), header.end(), fields.begin())) {
                std::string want;
                for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
                throw ParseError("expected CSV header '" + want + "'");
            }
            have_header = true;
            continue;
        }
        if (exact_width && fields.size() != header.size()) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields");
        }
        rows.emplace_back(line_no, std::move(fields));
    }
    if (!have_header) throw ParseError("missing CSV header");
    return rows;
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(what + ": " + e.what());
    }
}

template <class T>
T field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError(std::string("missing field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("field '") + key + "': " + e.what());
    }
}

// JSON number with 6 significant digits, matching the CSV codec.
json rounded(double v) { return json::parse(format_number(v)); }

}  // namespace

std::string cloud_to_csv(const RadarPointCloud& cloud) {
    std::string out = "x,y,rcs,doppler\n";
    for (const auto& p : cloud.points) {
        out += format_number(p.x) + ',' + format_number(p.y) + ',' + format_number(p.rcs) + ',' +
               format_number(p.doppler) + '\n';
    }
    return out;
}

RadarPointCloud cloud_from_csv(const std::string& text) {
    RadarPointCloud cloud;
    for (const auto& [line_no, f] : csv_rows(text, {"x", "y", "rcs", "doppler"})) {
        cloud.points.push_back({parse_number(f[0], line_no), parse_number(f[1], line_no),
                                parse_number(f[2], line_no), parse_number(f[3], line_no)});
    }
    return cloud;
}

std::string cloud_to_jsonl(const RadarPointCloud& cloud) {
    std::string out;
    for (const auto& p : cloud.points) {
        out += "{\"x\":" + format_number(p.x) + ",\"y\":" + format_number(p.y) +
               ",\"rcs\":" + format_number(p.rcs) + ",\"doppler\":" + format_number(p.doppler) +
               "}\n";
    }
    return out;
}

RadarPointCloud cloud_from_jsonl(const std::string& text) {
    RadarPointCloud cloud;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const json j = parse_json(line, "line " + std::to_string(line_no));
        RadarPoint p{field<double>(j, "x"), field<double>(j, "y"), field<double>(j, "rcs"),
                     field<double>(j, "doppler")};
        if (!is_finite(p)) throw ParseError("line " + std::to_string(line_no) + ": non-finite");
        cloud.points.push_back(p);
    }
    return cloud;
}

void write_cloud(const fs::path& path, const RadarPointCloud& cloud) {
    if (path.extension() == ".jsonl") {
        write_file_atomic(path, cloud_to_jsonl(cloud));
    } else {
        write_file_atomic(path, cloud_to_csv(cloud));
    }
}

RadarPointCloud read_cloud(const fs::path& path) {
    const auto text = read_file(path);
    RadarPointCloud cloud;
    try {
        cloud = path.extension() == ".jsonl" ? cloud_from_jsonl(text) : cloud_from_csv(text);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    cloud.frame_id = path.stem().string();
    return cloud;
}

std::string boxes_to_json(const std::vector<BoundingBox>& boxes) {
    json arr = json::array();
    for (const auto& b : boxes) {
        arr.push_back({{"cx", rounded(b.cx)},
                       {"cy", rounded(b.cy)},
                       {"length", rounded(b.length)},
                       {"width", rounded(b.width)},
                       {"yaw", rounded(b.yaw)},
                       {"class", std::string(to_string(b.cls))},
                       {"visibility", rounded(b.visibility)}});
    }
    return arr.dump(2) + "\n";
}

std::vector<BoundingBox> boxes_from_json(const std::string& text) {
    const json arr = parse_json(text, "boxes");
    if (!arr.is_array()) throw ParseError("boxes: expected a JSON array");
    std::vector<BoundingBox> boxes;
    for (const auto& j : arr) {
        BoundingBox b;
        b.cx = field<double>(j, "cx");
        b.cy = field<double>(j, "cy");
        b.length = field<double>(j, "length");
        b.width = field<double>(j, "width");
        b.yaw = field<double>(j, "yaw");
        b.cls = class_from_string(field<std::string>(j, "class"));
        b.visibility = field<double>(j, "visibility");
        try {
            b.validate();
        } catch (const PreconditionError& e) {
            throw ParseError(e.what());
        }
        boxes.push_back(b);
    }
    return boxes;
}

void write_boxes(const fs::path& path, const std::vector<BoundingBox>& boxes) {
    write_file_atomic(path, boxes_to_json(boxes));
}

std::vector<BoundingBox> read_boxes(const fs::path& path) {
    try {
        return boxes_from_json(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

namespace {

struct PngReader {
    const std::vector<std::uint8_t>* bytes;
    std::size_t offset = 0;
};

void png_read_cb(png_structp png, png_bytep out, png_size_t len) {
    auto* r = static_cast<PngReader*>(png_get_io_ptr(png));
    if (r->offset + len > r->bytes->size()) png_error(png, "truncated PNG");
    std::memcpy(out, r->bytes->data() + r->offset, len);
    r->offset += len;
}

void png_write_cb(png_structp png, png_bytep data, png_size_t len) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + len);
}

void png_flush_cb(png_structp) {}

[[noreturn]] void png_error_cb(png_structp, png_const_charp msg) { throw ParseError(msg); }
void png_warning_cb(png_structp, png_const_charp) {}

}  // namespace

std::vector<std::uint8_t> encode_png(const std::vector<std::uint8_t>& levels, int size) {
    if (size <= 0 || levels.size() != static_cast<std::size_t>(size) * size) {
        throw PreconditionError("encode_png: level buffer does not match size");
    }
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_cb, png_warning_cb);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng: cannot allocate write structures");
    }
    std::vector<std::uint8_t> out;
    try {
        png_set_write_fn(png, &out, png_write_cb, png_flush_cb);
        png_set_IHDR(png, info, static_cast<png_uint_32>(size), static_cast<png_uint_32>(size), 8,
                     PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                     PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        for (int r = 0; r < size; ++r) {
            png_write_row(png, const_cast<png_bytep>(levels.data() + static_cast<std::size_t>(r) * size));
        }
        png_write_end(png, nullptr);
    } catch (...) {
        png_destroy_write_struct(&png, &info);
        throw;
    }
    png_destroy_write_struct(&png, &info);
    return out;
}

std::vector<std::uint8_t> decode_png(const std::vector<std::uint8_t>& bytes, int& size) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
        throw ParseError("not a PNG file");
    }
    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_cb, png_warning_cb);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("libpng: cannot allocate read structures");
    }
    std::vector<std::uint8_t> levels;
    try {
        PngReader reader{&bytes, 0};
        png_set_read_fn(png, &reader, png_read_cb);
        png_read_info(png, info);
        const auto w = png_get_image_width(png, info);
        const auto h = png_get_image_height(png, info);
        if (png_get_bit_depth(png, info) != 8 || png_get_color_type(png, info) != PNG_COLOR_TYPE_GRAY ||
            w != h || w == 0) {
            throw ParseError("map PNG must be square 8-bit single-channel");
        }
        size = static_cast<int>(w);
        levels.resize(static_cast<std::size_t>(w) * h);
        for (png_uint_32 r = 0; r < h; ++r) png_read_row(png, levels.data() + r * w, nullptr);
        png_read_end(png, nullptr);
    } catch (...) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw;
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return levels;
}

fs::path sidecar_path(const fs::path& png_path) {
    fs::path p = png_path;
    p.replace_extension(".json");
    return p;
}

void write_map(const fs::path& png_path, const BevMap& map) {
    if (map.values.size() != map.grid.cell_count()) {
        throw PreconditionError("write_map: map size does not match its grid");
    }
    std::vector<std::uint8_t> levels(map.values.size());
    for (std::size_t i = 0; i < levels.size(); ++i) levels[i] = quantize_level(map.values[i]);
    const auto png = encode_png(levels, map.grid.size);
    write_file_atomic(png_path, std::string(png.begin(), png.end()));

    const json sidecar = {
        {"grid", {{"extent", map.grid.extent}, {"size", map.grid.size}}},
        {"channel", std::string(to_string(map.channel))},
        {"range", {{"min", map.range.min}, {"max", map.range.max}}},
        {"image", png_path.filename().string()},
    };
    write_file_atomic(sidecar_path(png_path), sidecar.dump(2) + "\n");
}

BevMap read_map(const fs::path& png_path) {
    try {
        const json side = parse_json(read_file(sidecar_path(png_path)), "sidecar");
        const json g = field<json>(side, "grid");
        const json r = field<json>(side, "range");
        BevMap map(GridSpec{field<double>(g, "extent"), field<int>(g, "size")},
                   channel_from_string(field<std::string>(side, "channel")),
                   ValueRange{field<double>(r, "min"), field<double>(r, "max")});
        map.grid.validate();
        map.range.validate();
        const auto raw = read_file(png_path);
        int size = 0;
        const auto levels = decode_png(std::vector<std::uint8_t>(raw.begin(), raw.end()), size);
        if (size != map.grid.size) {
            throw ParseError("PNG is " + std::to_string(size) + " px but the sidecar says " +
                             std::to_string(map.grid.size));
        }
        for (std::size_t i = 0; i < levels.size(); ++i) map.values[i] = dequantize_level(levels[i]);
        return map;
    } catch (const ParseError& e) {
        throw ParseError(png_path.string() + ": " + e.what());
    } catch (const PreconditionError& e) {
        throw ParseError(png_path.string() + ": " + e.what());
    }
}

std::vector<AttributedPoint3D> attributed_points_from_csv(const std::string& text,
                                                          PayloadKind kind) {
    std::vector<std::string> header{"x", "y", "z"};
    if (kind == PayloadKind::Color) {
        header.insert(header.end(), {"r", "g", "b"});
    } else if (kind == PayloadKind::Label) {
        header.push_back("label");
    } else {
        header.push_back("value");
    }
    std::vector<AttributedPoint3D> out;
    for (const auto& [line_no, f] : csv_rows(text, header)) {
        AttributedPoint3D p{parse_number(f[0], line_no), parse_number(f[1], line_no),
                            parse_number(f[2], line_no), 0.0};
        if (kind == PayloadKind::Color) {
            p.payload = Color{parse_number(f[3], line_no), parse_number(f[4], line_no),
                              parse_number(f[5], line_no)};
        } else if (kind == PayloadKind::Label) {
            const double v = parse_number(f[3], line_no);
            if (v != std::floor(v)) {
                throw ParseError("line " + std::to_string(line_no) + ": label must be an integer");
            }
            p.payload = Label{static_cast<int>(v)};
        } else {
            p.payload = parse_number(f[3], line_no);
        }
        out.push_back(p);
    }
    return out;
}

std::vector<Correspondence> correspondences_from_csv(const std::string& text) {
    std::vector<Correspondence> out;
    for (const auto& [line_no, f] :
         csv_rows(text, {"x", "y", "z", "x2", "y2", "z2", "dt"})) {
        Correspondence c;
        c.p_t = {parse_number(f[0], line_no), parse_number(f[1], line_no),
                 parse_number(f[2], line_no), 0.0};
        c.p_t_next = {parse_number(f[3], line_no), parse_number(f[4], line_no),
                      parse_number(f[5], line_no), 0.0};
        c.dt = parse_number(f[6], line_no);
        if (!(c.dt > 0.0)) throw ParseError("line " + std::to_string(line_no) + ": dt must be > 0");
        out.push_back(c);
    }
    return out;
}

std::string scene_config_to_json(const SceneConfig& cfg) {
    json classes = json::array();
    for (const auto& c : cfg.classes) {
        classes.push_back({{"class", std::string(to_string(c.cls))},
                           {"weight", c.weight},
                           {"length", {c.length.lo, c.length.hi}},
                           {"width", {c.width.lo, c.width.hi}},
                           {"rcs_mean", c.rcs_mean},
                           {"rcs_spread", c.rcs_spread},
                           {"speed", {c.speed.lo, c.speed.hi}}});
    }
    const json j = {
        {"seed", cfg.seed},
        {"n_objects", cfg.n_objects},
        {"n_clutter", cfg.n_clutter},
        {"min_separation", cfg.min_separation},
        {"grid", {{"extent", cfg.grid.extent}, {"size", cfg.grid.size}}},
        {"points_per_object", {cfg.points_per_object_min, cfg.points_per_object_max}},
        {"classes", classes},
        {"clutter_rcs_mean", cfg.clutter_rcs_mean},
        {"clutter_rcs_spread", cfg.clutter_rcs_spread},
        {"ego_clearance", cfg.ego_clearance},
        {"roi_margin", cfg.roi_margin},
        {"visibility", {cfg.visibility.lo, cfg.visibility.hi}},
        {"retry_budget", cfg.retry_budget},
    };
    return j.dump(2) + "\n";
}

namespace {

Interval interval(const json& j, const char* key) {
    const auto v = field<std::vector<double>>(j, key);
    if (v.size() != 2) throw ParseError(std::string("field '") + key + "' must be [lo, hi]");
    return {v[0], v[1]};
}

}  // namespace

SceneConfig scene_config_from_json(const std::string& text) {
    const json j = parse_json(text, "scene config");
    if (!j.is_object()) throw ParseError("scene config: expected a JSON object");
    SceneConfig cfg;
    // Every key is optional; absent keys keep their defaults.
    if (j.contains("seed")) cfg.seed = field<std::uint64_t>(j, "seed");
    if (j.contains("n_objects")) cfg.n_objects = field<int>(j, "n_objects");
    if (j.contains("n_clutter")) cfg.n_clutter = field<int>(j, "n_clutter");
    if (j.contains("min_separation")) cfg.min_separation = field<double>(j, "min_separation");
    if (j.contains("grid")) {
        const auto g = field<json>(j, "grid");
        cfg.grid = {field<double>(g, "extent"), field<int>(g, "size")};
    }
    if (j.contains("points_per_object")) {
        const auto iv = interval(j, "points_per_object");
        cfg.points_per_object_min = static_cast<int>(iv.lo);
        cfg.points_per_object_max = static_cast<int>(iv.hi);
    }
    if (j.contains("classes")) {
        cfg.classes.clear();
        for (const auto& c : field<json>(j, "classes")) {
            ClassProfile p;
            p.cls = class_from_string(field<std::string>(c, "class"));
            if (c.contains("weight")) p.weight = field<double>(c, "weight");
            if (c.contains("length")) p.length = interval(c, "length");
            if (c.contains("width")) p.width = interval(c, "width");
            if (c.contains("rcs_mean")) p.rcs_mean = field<double>(c, "rcs_mean");
            if (c.contains("rcs_spread")) p.rcs_spread = field<double>(c, "rcs_spread");
            if (c.contains("speed")) p.speed = interval(c, "speed");
            cfg.classes.push_back(p);
        }
    }
    if (j.contains("clutter_rcs_mean")) cfg.clutter_rcs_mean = field<double>(j, "clutter_rcs_mean");
    if (j.contains("clutter_rcs_spread")) {
        cfg.clutter_rcs_spread = field<double>(j, "clutter_rcs_spread");
    }
    if (j.contains("ego_clearance")) cfg.ego_clearance = field<double>(j, "ego_clearance");
    if (j.contains("roi_margin")) cfg.roi_margin = field<double>(j, "roi_margin");
    if (j.contains("visibility")) cfg.visibility = interval(j, "visibility");
    if (j.contains("retry_budget")) cfg.retry_budget = field<int>(j, "retry_budget");
    return cfg;
}

std::vector<ManifestEntry> manifest_from_json(const std::string& text, const fs::path& base_dir) {
    const json j = parse_json(text, "manifest");
    const json frames = field<json>(j, "frames");
    if (!frames.is_array()) throw ParseError("manifest: 'frames' must be an array");
    auto resolve = [&](const std::string& p) {
        const fs::path path(p);
        return path.is_absolute() ? path : base_dir / path;
    };
    std::vector<ManifestEntry> out;
    std::set<std::string> seen;
    for (const auto& f : frames) {
        ManifestEntry e;
        e.frame_id = field<std::string>(f, "frame_id");
        if (!seen.insert(e.frame_id).second) {
            throw ParseError("manifest: duplicate frame_id '" + e.frame_id + "'");
        }
        e.gt_cloud = resolve(field<std::string>(f, "gt"));
        if (f.contains("syn")) e.syn_cloud = resolve(field<std::string>(f, "syn"));
        if (f.contains("syn_maps")) {
            const auto m = field<json>(f, "syn_maps");
            e.syn_density = resolve(field<std::string>(m, "density"));
            e.syn_rcs = resolve(field<std::string>(m, "rcs"));
            e.syn_doppler = resolve(field<std::string>(m, "doppler"));
        }
        if (!e.syn_cloud && !e.syn_density) {
            throw ParseError("manifest: frame '" + e.frame_id + "' needs 'syn' or 'syn_maps'");
        }
        if (f.contains("boxes")) e.boxes = resolve(field<std::string>(f, "boxes"));
        out.push_back(std::move(e));
    }
    return out;
}

std::string manifest_to_json(const std::vector<ManifestEntry>& entries) {
    json frames = json::array();
    for (const auto& e : entries) {
        json f = {{"frame_id", e.frame_id}, {"gt", e.gt_cloud.generic_string()}};
        if (e.syn_cloud) f["syn"] = e.syn_cloud->generic_string();
        if (e.syn_density) {
            f["syn_maps"] = {{"density", e.syn_density->generic_string()},
                             {"rcs", e.syn_rcs ? e.syn_rcs->generic_string() : ""},
                             {"doppler", e.syn_doppler ? e.syn_doppler->generic_string() : ""}};
        }
        if (e.boxes) f["boxes"] = e.boxes->generic_string();
        frames.push_back(f);
    }
    return json{{"frames", frames}}.dump(2) + "\n";
}

namespace {

json optional_number(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

json stat_json(const Stat& s) {
    return {{"mean", s.count ? json(s.mean) : json(nullptr)},
            {"std", s.count ? json(s.std) : json(nullptr)},
            {"count", s.count},
            {"undefined", s.undefined}};
}

}  // namespace

std::string report_to_json(const MetricsReport& report, const EvalConfig& config) {
    json per_frame = json::array();
    for (const auto& row : report.per_frame) {
        json values = json::object();
        for (const auto& [name, v] : row.values) values[name] = optional_number(v);
        per_frame.push_back({{"frame_id", row.frame_id}, {"metrics", values}});
    }
    json entire = json::object();
    for (const auto& [name, s] : report.aggregate) entire[name] = stat_json(s);

    const auto& fg = report.foreground;
    json per_class = json::object();
    for (const auto& [cls, m] : fg.class_mmd) {
        per_class[std::string(to_string(cls))] = {{"mmd_loc", optional_number(m.loc)},
                                                  {"mmd_rcs", optional_number(m.rcs)},
                                                  {"mmd_doppler", optional_number(m.doppler)},
                                                  {"gt_points", m.gt_points},
                                                  {"syn_points", m.syn_points}};
    }
    json boxes = json::array();
    for (const auto& [frame, b] : fg.boxes) {
        boxes.push_back({{"frame_id", frame},
                         {"box_index", b.box_index},
                         {"class", std::string(to_string(b.cls))},
                         {"gt_count", b.gt_count},
                         {"syn_count", b.syn_count},
                         {"cd_loc", optional_number(b.cd_loc)},
                         {"cd_full", optional_number(b.cd_full)},
                         {"density_similarity", b.density_similarity}});
    }
    const json out = {
        {"config",
         {{"da_thresholds",
           {{"loc", config.da.loc}, {"rcs", config.da.rcs}, {"doppler", config.da.doppler}}},
          {"iou_delta", config.iou_delta},
          {"mmd", {{"num_kernels", config.mmd.num_kernels}, {"statistic", "biased_squared"}}},
          {"min_visibility", config.min_visibility}}},
        {"frames", report.per_frame.size()},
        {"entire_area", entire},
        {"foreground",
         {{"cd_loc", stat_json(fg.cd_loc)},
          {"cd_full", stat_json(fg.cd_full)},
          {"density_similarity", stat_json(fg.density_similarity)},
          {"hit_rate", optional_number(fg.hit_rate)},
          {"occupied_boxes", fg.occupied_boxes},
          {"hit_boxes", fg.hit_boxes},
          {"per_class_mmd", per_class},
          {"boxes", boxes}}},
        {"per_frame", per_frame},
    };
    return out.dump(2) + "\n";
}

std::string report_to_csv(const MetricsReport& report) {
    std::string out = "frame_id";
    if (!report.per_frame.empty()) {
        for (const auto& [name, v] : report.per_frame.front().values) out += "," + name;
    }
    out += "\n";
    for (const auto& row : report.per_frame) {
        out += row.frame_id;
        for (const auto& [name, v] : row.values) {
            out += ",";
            if (v) out += format_number(*v);
        }
        out += "\n";
    }
    return out;
}

std::string diagnostics_to_json(RecoveryMethod method, const DeconvParams& params,
                                const GaussianKernel& kernel, const RecoveryOutput& output,
                                double wall_seconds) {
    json j = {{"method", std::string(to_string(method))},
              {"sigma", kernel.sigma()},
              {"extracted_count", output.cells.size()}};
    if (output.deconv) {
        j["params"] = {{"lambda", params.lambda},
                       {"fista_iters", params.fista_iters},
                       {"irl1_iters", params.irl1_iters},
                       {"extract_threshold", params.extract_threshold},
                       {"reweight_epsilon", params.reweight_epsilon},
                       {"fit", params.fit == DataFit::Saturating ? "saturating" : "linear"}};
        j["round_objectives"] = output.deconv->round_objectives;
        j["zero_objective"] = output.deconv->zero_objective;
        j["fell_back_to_zero"] = output.deconv->fell_back_to_zero;
    }
    j["wall_seconds"] = std::isfinite(wall_seconds) ? json(wall_seconds) : json(nullptr);
    return j.dump(2) + "\n";
}

}  // namespace radarbev::io
