#pragma once

#include "formlab/rational.hpp"

#include <array>
#include <string>
#include <vector>

namespace formlab {

/// Finite rectangular sample grid: per-axis bounds and resolution.
struct GridSpec {
    struct Axis {
        Rational lo, hi;
        int count = 2;
    };
    std::vector<Axis> axes;

    static GridSpec cube(int dim, const Rational& lo, const Rational& hi, int count);

    /// Parse "lo:hi:n,lo:hi:n,..." with exact rational bounds.
    static GridSpec parse(const std::string& text);

    int dimension() const { return static_cast<int>(axes.size()); }
    long long total_points() const;

    std::vector<RatVector> points_rational() const;
    std::vector<std::vector<double>> points_double() const;

    std::string str() const;
};

}  // namespace formlab
