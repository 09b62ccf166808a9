#include "formlab/nearsym/convexity.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace formlab::nearsym {

namespace {

using EVec4 = Eigen::Vector4d;

/// Evaluate a compiled 1-form as the euclidean-dual vector.
EVec4 sharp(const ext::CompiledForm& lam, const EVec4& x) {
    std::array<double, 4> xi{x(0), x(1), x(2), x(3)};
    std::array<double, 4> v{};
    lam.eval(xi, v);
    return EVec4(v[0], v[1], v[2], v[3]);
}

/// Tangential part of the dual of lambda at a sphere point.
EVec4 tangential(const ext::CompiledForm& lam, const EVec4& x) {
    EVec4 l = sharp(lam, x);
    EVec4 n = x.normalized();
    return l - l.dot(n) * n;
}

/// Newton search for a zero of the tangential field from a seed; chart
/// coordinates in the tangent plane of the seed, renormalized each step.
bool newton_sphere_zero(const ext::CompiledForm& lam, double radius, EVec4& x, double tol = 1e-12) {
    for (int it = 0; it < 50; ++it) {
        x = radius * x.normalized();
        EVec4 f = tangential(lam, x);
        if (f.norm() < tol) return true;
        // orthonormal tangent basis at x
        Eigen::Matrix<double, 4, 3> b;
        int col = 0;
        for (int i = 0; i < 4 && col < 3; ++i) {
            EVec4 e = EVec4::Zero();
            e(i) = 1;
            EVec4 t = e - e.dot(x.normalized()) * x.normalized();
            for (int c = 0; c < col; ++c) t -= t.dot(b.col(c)) * b.col(c);
            if (t.norm() > 1e-6) {
                b.col(col++) = t.normalized();
            }
        }
        if (col < 3) return false;
        Eigen::Vector3d fb = b.transpose() * f;
        Eigen::Matrix3d j;
        const double h = 1e-7;
        for (int c = 0; c < 3; ++c) {
            EVec4 xp = radius * (x + h * b.col(c)).normalized();
            EVec4 xm = radius * (x - h * b.col(c)).normalized();
            j.col(c) = b.transpose() * (tangential(lam, xp) - tangential(lam, xm)) / (2 * h);
        }
        Eigen::Vector3d step = j.colPivHouseholderQr().solve(fb);
        if (!step.allFinite() || step.norm() > radius) return false;
        x -= b * step;
    }
    x = radius * x.normalized();
    return tangential(lam, x).norm() < tol;
}

}  // namespace

ConvexityReport convexity_check(const Form& w, const VectorField& v, const Rational& sphere_radius,
                                int samples, std::uint64_t seed) {
    if (w.num_vars() != 4 || w.degree() != 2)
        throw std::invalid_argument("convexity_check expects a 2-form on R^4");
    if (sphere_radius <= 0) throw std::invalid_argument("sphere radius must be positive");

    ConvexityReport rep;
    rep.liouville_exact = (ext::lie_derivative(v, w) == w);
    if (!rep.liouville_exact) rep.failure = "NotLiouville";

    rep.induced_lambda = ext::interior_product(v, w);

    const double radius = to_double(sphere_radius);
    SplitMix64 rng(seed);
    std::vector<EVec4> pts;
    pts.reserve(static_cast<size_t>(samples));
    while (static_cast<int>(pts.size()) < samples) {
        EVec4 x;
        for (int i = 0; i < 4; ++i) x(i) = rng.uniform(-1, 1);
        if (x.norm() < 1e-3) continue;
        pts.push_back(radius * x.normalized());
    }

    // outward transversality <V(x), x> > 0 (exact at the sampled points)
    for (const auto& x : pts) {
        RatVector xr;
        for (int i = 0; i < 4; ++i) xr.push_back(rational_from_double(x(i)));
        RatVector vx = v.eval(xr);
        Rational dot = 0;
        for (size_t i = 0; i < 4; ++i) dot += vx[i] * xr[i];
        ++rep.sphere_samples;
        if (dot <= 0) {
            rep.transverse = false;
            if (rep.failure.empty()) rep.failure = "NotTransverse";
        }
    }

    // induced near-contact data on the sphere
    const auto lam_c = ext::CompiledForm::from(rep.induced_lambda);
    const Form three_form = ext::wedge(rep.induced_lambda, ext::exterior_d(rep.induced_lambda));
    const auto three_c = ext::CompiledForm::from(three_form);  // components 012,013,023,123

    for (const auto& seed_pt : pts) {
        EVec4 x = seed_pt;
        if (!newton_sphere_zero(lam_c, radius, x)) continue;
        bool dup = false;
        for (const auto& z : rep.zeros_on_sphere) {
            double d2 = 0;
            for (int i = 0; i < 4; ++i) d2 += (z[static_cast<size_t>(i)] - x(i)) * (z[static_cast<size_t>(i)] - x(i));
            if (d2 < 1e-12) dup = true;
        }
        if (!dup) rep.zeros_on_sphere.push_back({x(0), x(1), x(2), x(3)});
    }

    rep.min_abs_f_off_zeros = std::numeric_limits<double>::infinity();
    for (const auto& x : pts) {
        double near_zero = std::numeric_limits<double>::infinity();
        for (const auto& z : rep.zeros_on_sphere) {
            double d2 = 0;
            for (int i = 0; i < 4; ++i) d2 += (z[static_cast<size_t>(i)] - x(i)) * (z[static_cast<size_t>(i)] - x(i));
            near_zero = std::min(near_zero, std::sqrt(d2));
        }
        if (near_zero < 0.35 * radius) continue;

        // f = (lambda ^ d lambda)(t1,t2,t3) / vol_Sigma(t1,t2,t3)
        EVec4 n = x.normalized();
        Eigen::Matrix<double, 4, 3> b;
        int col = 0;
        for (int i = 0; i < 4 && col < 3; ++i) {
            EVec4 e = EVec4::Zero();
            e(i) = 1;
            EVec4 t = e - e.dot(n) * n;
            for (int c = 0; c < col; ++c) t -= t.dot(b.col(c)) * b.col(c);
            if (t.norm() > 1e-6) b.col(col++) = t.normalized();
        }
        if (col < 3) continue;
        std::array<double, 4> xi{x(0), x(1), x(2), x(3)};
        std::array<double, 4> c3{};
        three_c.eval(xi, c3);
        // apply the 3-form with components on tuples 012,013,023,123
        auto apply3 = [&](const EVec4& a, const EVec4& bb, const EVec4& c) {
            auto det3 = [&](int i, int j, int k) {
                return a(i) * (bb(j) * c(k) - bb(k) * c(j)) - a(j) * (bb(i) * c(k) - bb(k) * c(i)) +
                       a(k) * (bb(i) * c(j) - bb(j) * c(i));
            };
            return c3[0] * det3(0, 1, 2) + c3[1] * det3(0, 1, 3) + c3[2] * det3(0, 2, 3) + c3[3] * det3(1, 2, 3);
        };
        const double num = apply3(b.col(0), b.col(1), b.col(2));
        Eigen::Matrix4d volm;
        volm.col(0) = n;
        for (int c = 0; c < 3; ++c) volm.col(c + 1) = b.col(c);
        const double den = volm.determinant();
        if (std::abs(den) < 1e-12) continue;
        const double f = num / den;
        const int sgn = f > 0 ? 1 : (f < 0 ? -1 : 0);
        if (rep.f_sign == 0) rep.f_sign = sgn;
        if (sgn != 0 && sgn != rep.f_sign) rep.f_sign_consistent = false;
        rep.min_abs_f_off_zeros = std::min(rep.min_abs_f_off_zeros, std::abs(f));
    }
    if (rep.f_sign == 0) rep.min_abs_f_off_zeros = 0;
    return rep;
}

}  // namespace formlab::nearsym
