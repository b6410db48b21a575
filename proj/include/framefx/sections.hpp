#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace framefx {

/// One standardized steel profile. Lengths in cm, areas in cm^2, moduli in
/// cm^3, inertia in cm^4.
struct SectionShape {
    std::string name;
    double area = 0.0;
    double moment_of_inertia_x = 0.0;
    double section_modulus_x = 0.0;
    double plastic_modulus_x = 0.0;
    double radius_of_gyration_x = 0.0;
    double radius_of_gyration_y = 0.0;
    double depth = 0.0;

    double min_radius_of_gyration() const;
};

class SectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws SectionError when a shape breaks the property invariants.
void validate_shape(const SectionShape& shape);

/// Immutable catalog of shapes ordered by ascending area (ties: depth, then
/// name). Defines the domain of one index-coded design variable.
class SectionPool {
public:
    SectionPool(std::vector<SectionShape> shapes, std::string label);

    std::size_t size() const { return shapes_.size(); }
    const SectionShape& operator[](std::size_t i) const { return shapes_[i]; }
    const std::vector<SectionShape>& shapes() const { return shapes_; }
    const std::string& label() const { return label_; }

    double min_area() const { return shapes_.front().area; }
    double max_area() const { return shapes_.back().area; }

    /// Index of the shape closest in area to `target_area`, restricted to
    /// shapes with area <= cap_area when a cap is given. Ties go to the
    /// smaller area. If nothing satisfies the cap, the smallest shape (index 0)
    /// is returned.
    std::size_t index_of_nearest_area(double target_area,
                                      std::optional<double> cap_area = std::nullopt) const;

private:
    std::vector<SectionShape> shapes_;
    std::string label_;
};

/// Parses the section CSV format:
///   name,area_cm2,ix_cm4,sx_cm3,zx_cm3,rx_cm,ry_cm,depth_cm
/// Errors carry the 1-based line number of the offending row.
SectionPool load_section_table(std::istream& in, std::string label);
SectionPool load_section_table(const std::filesystem::path& path);

/// Solid circular section of the given radius.
SectionShape circular_properties(double radius);

}  // namespace framefx
