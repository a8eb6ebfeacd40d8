#pragma once

#include <functional>

#include "detproj/core.hpp"

namespace detproj::fields {

using Sampler = std::function<double(const Vec3&)>;

/// Zero-trace smooth product of sines on the unit box; in H^2 and beyond.
inline double smooth(int dim, const Vec3& x) {
    double v = std::sin(pi * x.x) * std::sin(pi * x.y);
    if (dim == 3) v *= std::sin(pi * x.z);
    return v;
}

/// r^{0.6} about an interior point with a C^1 cутoff: in H^1 but not H^2,
/// fractional smoothness ~ 1.6 in L2 terms.
inline double rough(int dim, const Vec3& x) {
    const Vec3 center{0.5, 0.5, dim == 3 ? 0.5 : 0.0};
    const double radius = 0.35;
    double r = distance(x, center);
    if (r >= radius) return 0.0;
    double q = 1.0 - (r / radius) * (r / radius);
    return std::pow(r, 0.6) * q * q;
}

inline double linear(int dim, const Vec3& x) {
    double v = 0.3 + 0.7 * x.x - 0.2 * x.y;
    if (dim == 3) v += 0.4 * x.z;
    return v;
}

inline Sampler by_name(const std::string& name, int dim) {
    if (name == "smooth") return [dim](const Vec3& x) { return smooth(dim, x); };
    if (name == "rough") return [dim](const Vec3& x) { return rough(dim, x); };
    if (name == "linear") return [dim](const Vec3& x) { return linear(dim, x); };
    throw std::invalid_argument("fields: unknown field '" + name + "'");
}

}  // namespace detproj::fields
