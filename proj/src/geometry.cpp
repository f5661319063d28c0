#include "tris/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tris/error.hpp"

namespace tris {

double wrap_phase(double rad) {
    double w = std::fmod(rad, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    // fmod of a tiny negative value can round back up to exactly 2pi
    if (w >= kTwoPi) w = 0.0;
    return w;
}

void SphericalPose::validate() const {
    if (!(std::isfinite(r) && r > 0.0)) throw InvalidArgument("pose distance must be positive, got " + std::to_string(r));
    if (!(theta >= 0.0 && theta <= kPi)) throw InvalidArgument("pose zenith must lie in [0, pi], got " + std::to_string(theta));
    if (!(phi >= 0.0 && phi < kTwoPi)) throw InvalidArgument("pose azimuth must lie in [0, 2pi), got " + std::to_string(phi));
}

SphericalPose transmission_side_pose(double r, double local_zenith, double azimuth) {
    if (local_zenith < 0.0) {
        local_zenith = -local_zenith;
        azimuth += kPi;
    }
    return SphericalPose{r, kPi - local_zenith, wrap_phase(azimuth)};
}

void ArrayLayout::validate() const {
    if (n_rows < 1 || n_cols < 1) throw InvalidArgument("array layout needs at least one row and one column");
    if (!(pitch_x > 0.0 && pitch_y > 0.0)) throw InvalidArgument("array pitch must be positive");
}

ElementIndex element_index(const ArrayLayout& layout, std::size_t n) {
    if (n >= layout.size()) throw InvalidElement("element " + std::to_string(n) + " outside a " + std::to_string(layout.size()) + "-unit array");
    return ElementIndex{n / layout.n_cols + 1, n % layout.n_cols + 1};
}

CartesianPoint spherical_to_cartesian(const SphericalPose& pose) {
    const double s = std::sin(pose.theta);
    return CartesianPoint{pose.r * s * std::cos(pose.phi), pose.r * s * std::sin(pose.phi), pose.r * std::cos(pose.theta)};
}

CartesianPoint element_position(const ArrayLayout& layout, ElementIndex idx) {
    if (idx.row < 1 || idx.row > layout.n_rows || idx.col < 1 || idx.col > layout.n_cols) {
        throw InvalidElement("element (" + std::to_string(idx.row) + ", " + std::to_string(idx.col) + ") outside a " +
                             std::to_string(layout.n_rows) + "x" + std::to_string(layout.n_cols) + " array");
    }
    const double delta_y = static_cast<double>(idx.col) - (static_cast<double>(layout.n_cols) + 1.0) / 2.0;
    const double delta_x = (static_cast<double>(layout.n_rows) + 1.0) / 2.0 - static_cast<double>(idx.row);
    return CartesianPoint{delta_y * layout.pitch_x, delta_x * layout.pitch_y, 0.0};
}

double distance(const CartesianPoint& a, const CartesianPoint& b) {
    return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

double departure_zenith(const CartesianPoint& point, const CartesianPoint& element) {
    const double d = distance(point, element);
    if (d == 0.0) throw InvalidArgument("departure zenith undefined for coincident points");
    const double c = std::abs(point.z - element.z) / d;
    return std::acos(std::min(c, 1.0));
}

}  // namespace tris
