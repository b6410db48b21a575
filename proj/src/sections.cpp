#include "framefx/sections.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace framefx {

namespace {

const char* const kHeader = "name,area_cm2,ix_cm4,sx_cm3,zx_cm3,rx_cm,ry_cm,depth_cm";

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_number(const std::string& text, std::size_t line_no, const char* column) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw SectionError("section table line " + std::to_string(line_no) + ": column '" +
                           column + "' is not a number: '" + text + "'");
    }
    return value;
}

}  // namespace

double SectionShape::min_radius_of_gyration() const {
    return std::min(radius_of_gyration_x, radius_of_gyration_y);
}

void validate_shape(const SectionShape& s) {
    auto fail = [&](const std::string& what) {
        throw SectionError("section '" + s.name + "': " + what);
    };
    if (!(s.area > 0.0)) fail("area must be positive");
    if (!(s.moment_of_inertia_x > 0.0)) fail("moment of inertia must be positive");
    if (!(s.section_modulus_x > 0.0)) fail("elastic section modulus must be positive");
    if (!(s.plastic_modulus_x > 0.0)) fail("plastic section modulus must be positive");
    if (!(s.radius_of_gyration_x > 0.0) || !(s.radius_of_gyration_y > 0.0))
        fail("radii of gyration must be positive");
    if (!(s.depth > 0.0)) fail("depth must be positive");
    if (s.section_modulus_x > s.plastic_modulus_x)
        fail("elastic section modulus exceeds plastic modulus");
}

SectionPool::SectionPool(std::vector<SectionShape> shapes, std::string label)
    : shapes_(std::move(shapes)), label_(std::move(label)) {
    if (shapes_.empty()) throw SectionError("section pool '" + label_ + "' is empty");
    for (const auto& s : shapes_) validate_shape(s);
    std::stable_sort(shapes_.begin(), shapes_.end(), [](const SectionShape& a, const SectionShape& b) {
        if (a.area != b.area) return a.area < b.area;
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.name < b.name;
    });
}

std::size_t SectionPool::index_of_nearest_area(double target_area,
                                               std::optional<double> cap_area) const {
    // Candidates are [0, limit).
    auto by_area = [](const SectionShape& s, double a) { return s.area < a; };
    std::size_t limit = shapes_.size();
    if (cap_area) {
        auto it = std::upper_bound(shapes_.begin(), shapes_.end(), *cap_area,
                                   [](double a, const SectionShape& s) { return a < s.area; });
        limit = static_cast<std::size_t>(it - shapes_.begin());
        if (limit == 0) return 0;
    }
    const auto first = shapes_.begin();
    const auto last = first + static_cast<std::ptrdiff_t>(limit);
    auto it = std::lower_bound(first, last, target_area, by_area);
    std::size_t pick;
    if (it == last) {
        pick = limit - 1;
    } else if (it == first) {
        pick = 0;
    } else {
        const std::size_t hi = static_cast<std::size_t>(it - first);
        const std::size_t lo = hi - 1;
        const double d_hi = shapes_[hi].area - target_area;
        const double d_lo = target_area - shapes_[lo].area;
        pick = (d_lo <= d_hi) ? lo : hi;
    }
    // First shape of an equal-area run, so re-querying with its own area is stable.
    const auto run = std::lower_bound(first, last, shapes_[pick].area, by_area);
    return static_cast<std::size_t>(run - first);
}

SectionPool load_section_table(std::istream& in, std::string label) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<SectionShape> shapes;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
            static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF) {
            line.erase(0, 3);
        }
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        if (!have_header) {
            std::string compact;
            for (char c : stripped)
                if (c != ' ' && c != '\t') compact.push_back(c);
            if (compact != kHeader) {
                throw SectionError("section table line " + std::to_string(line_no) +
                                   ": expected header '" + kHeader + "'");
            }
            have_header = true;
            continue;
        }
        const auto f = split_csv_line(stripped);
        if (f.size() != 8) {
            throw SectionError("section table line " + std::to_string(line_no) + ": expected 8 fields, got " +
                               std::to_string(f.size()));
        }
        SectionShape s;
        s.name = f[0];
        if (s.name.empty())
            throw SectionError("section table line " + std::to_string(line_no) + ": empty name");
        s.area = parse_number(f[1], line_no, "area_cm2");
        s.moment_of_inertia_x = parse_number(f[2], line_no, "ix_cm4");
        s.section_modulus_x = parse_number(f[3], line_no, "sx_cm3");
        s.plastic_modulus_x = parse_number(f[4], line_no, "zx_cm3");
        s.radius_of_gyration_x = parse_number(f[5], line_no, "rx_cm");
        s.radius_of_gyration_y = parse_number(f[6], line_no, "ry_cm");
        s.depth = parse_number(f[7], line_no, "depth_cm");
        try {
            validate_shape(s);
        } catch (const SectionError& e) {
            throw SectionError("section table line " + std::to_string(line_no) + ": " + e.what());
        }
        shapes.push_back(std::move(s));
    }
    if (!have_header) throw SectionError("section table is empty (no header)");
    if (shapes.empty()) throw SectionError("section table has no rows");
    return SectionPool(std::move(shapes), std::move(label));
}

SectionPool load_section_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SectionError("cannot open section table " + path.string());
    return load_section_table(in, path.stem().string());
}

SectionShape circular_properties(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw SectionError("circular section radius must be positive");
    const double pi = std::numbers::pi;
    const double r2 = radius * radius;
    SectionShape s;
    std::ostringstream name;
    name << "R" << radius;
    s.name = name.str();
    s.area = pi * r2;
    s.moment_of_inertia_x = pi * r2 * r2 / 4.0;
    s.section_modulus_x = s.moment_of_inertia_x / radius;
    s.plastic_modulus_x = 4.0 * r2 * radius / 3.0;
    s.radius_of_gyration_x = radius / 2.0;
    s.radius_of_gyration_y = radius / 2.0;
    s.depth = 2.0 * radius;
    return s;
}

}  // namespace framefx
