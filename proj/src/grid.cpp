#include "formlab/grid.hpp"

#include <sstream>
#include <stdexcept>

namespace formlab {

GridSpec GridSpec::cube(int dim, const Rational& lo, const Rational& hi, int count) {
    if (dim < 1 || count < 2 || lo >= hi) throw std::invalid_argument("bad grid cube");
    GridSpec g;
    g.axes.assign(static_cast<size_t>(dim), Axis{lo, hi, count});
    return g;
}

GridSpec GridSpec::parse(const std::string& text) {
    GridSpec g;
    std::istringstream in(text);
    std::string axis;
    while (std::getline(in, axis, ',')) {
        std::istringstream a(axis);
        std::string lo, hi, n;
        if (!std::getline(a, lo, ':') || !std::getline(a, hi, ':') || !std::getline(a, n, ':'))
            throw std::invalid_argument("grid axis must be lo:hi:n");
        Axis ax;
        ax.lo = parse_rational(lo);
        ax.hi = parse_rational(hi);
        ax.count = std::stoi(n);
        if (ax.count < 2 || ax.lo >= ax.hi) throw std::invalid_argument("bad grid axis " + axis);
        g.axes.push_back(std::move(ax));
    }
    if (g.axes.empty()) throw std::invalid_argument("empty grid spec");
    return g;
}

long long GridSpec::total_points() const {
    long long t = 1;
    for (const auto& a : axes) t *= a.count;
    return t;
}

std::vector<RatVector> GridSpec::points_rational() const {
    std::vector<RatVector> pts;
    pts.reserve(static_cast<size_t>(total_points()));
    std::vector<int> idx(axes.size(), 0);
    while (true) {
        RatVector p(axes.size());
        for (size_t i = 0; i < axes.size(); ++i) {
            const auto& a = axes[i];
            p[i] = a.lo + (a.hi - a.lo) * Rational(idx[i], a.count - 1);
        }
        pts.push_back(std::move(p));
        size_t i = 0;
        for (; i < axes.size(); ++i) {
            if (++idx[i] < axes[i].count) break;
            idx[i] = 0;
        }
        if (i == axes.size()) break;
    }
    return pts;
}

std::vector<std::vector<double>> GridSpec::points_double() const {
    std::vector<std::vector<double>> pts;
    pts.reserve(static_cast<size_t>(total_points()));
    for (const auto& p : points_rational()) {
        std::vector<double> q(p.size());
        for (size_t i = 0; i < p.size(); ++i) q[i] = to_double(p[i]);
        pts.push_back(std::move(q));
    }
    return pts;
}

std::string GridSpec::str() const {
    std::ostringstream out;
    for (size_t i = 0; i < axes.size(); ++i) {
        if (i) out << ",";
        out << to_string(axes[i].lo) << ":" << to_string(axes[i].hi) << ":" << axes[i].count;
    }
    return out.str();
}

}  // namespace formlab
