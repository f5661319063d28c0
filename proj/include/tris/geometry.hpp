#pragma once

#include <cstddef>
#include <numbers>

namespace tris {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Reduces an angle to [0, 2pi).
double wrap_phase(double rad);

struct CartesianPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Position relative to the array center: distance, zenith from +z, azimuth from +x.
struct SphericalPose {
    double r = 1.0;
    double theta = 0.0;
    double phi = 0.0;

    /// Throws InvalidArgument unless r > 0, 0 <= theta <= pi, 0 <= phi < 2pi.
    void validate() const;
};

/// Pose on the transmission side (z < 0) given a zenith measured from the -z normal.
/// Negative zenith values mirror the point to azimuth + pi, which is how pattern cuts
/// sweep through boresight.
SphericalPose transmission_side_pose(double r, double local_zenith, double azimuth = 0.0);

/// Uniform planar array of n_rows x n_cols units centered on the origin in the z = 0 plane.
struct ArrayLayout {
    std::size_t n_rows = 1;  // N_x
    std::size_t n_cols = 1;  // N_y
    double pitch_x = 0.06;
    double pitch_y = 0.06;

    std::size_t size() const noexcept { return n_rows * n_cols; }
    double unit_area() const noexcept { return pitch_x * pitch_y; }
    void validate() const;
};

/// 1-based (row, col) as used in the array description.
struct ElementIndex {
    std::size_t row = 1;
    std::size_t col = 1;
};

/// Row-major enumeration: element n (0-based) sits at row n / N_y + 1, col n % N_y + 1.
ElementIndex element_index(const ArrayLayout& layout, std::size_t n);

CartesianPoint spherical_to_cartesian(const SphericalPose& pose);

/// Unit center (delta_y * d_x, delta_x * d_y, 0) with delta_y = col - (N_y+1)/2 and
/// delta_x = (N_x+1)/2 - row. The pitch pairing is kept exactly as in the model equations.
CartesianPoint element_position(const ArrayLayout& layout, ElementIndex idx);

double distance(const CartesianPoint& a, const CartesianPoint& b);

/// Angle between the array normal (+z or -z, whichever faces `point`) and the
/// element -> point direction, folded into [0, pi/2].
double departure_zenith(const CartesianPoint& point, const CartesianPoint& element);

}  // namespace tris
