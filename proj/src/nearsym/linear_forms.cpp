#include "formlab/nearsym/linear_forms.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace formlab::nearsym {

namespace {

void require_admissible(const RatMatrix& a) {
    if (a.rows() != 3 || a.cols() != 3) throw std::invalid_argument("matrix must be 3x3");
    if (!a.is_symmetric()) throw std::invalid_argument("matrix must be symmetric");
    if (a.trace() != 0) throw std::invalid_argument("matrix must be traceless");
    if (a.det() == 0) throw std::invalid_argument("matrix must be nondegenerate");
}

}  // namespace

Form linear_sd_form_from_matrix(const RatMatrix& a) {
    require_admissible(a);
    // Coefficient rows of (g1, g2, g3) against (x1, x2, x3):
    //   C(0,i) = -A(i,2), C(1,i) = A(i,1), C(2,i) = -A(i,0);
    // closedness of sum g_alpha omega_alpha is exactly A symmetric traceless.
    RatMatrix c(3, 4);
    for (int i = 0; i < 3; ++i) {
        c(0, i) = -a(i, 2);
        c(1, i) = a(i, 1);
        c(2, i) = -a(i, 0);
    }
    Form w(4, 2);
    for (int alpha = 0; alpha < 3; ++alpha) {
        Poly g(4);
        for (int i = 0; i < 3; ++i) {
            ext::Monomial m;
            m.e[static_cast<size_t>(i)] = 1;
            g.add_term(m, c(alpha, i));
        }
        w += sd_basis(alpha + 1) * g;
    }
    return w;
}

RatMatrix matrix_from_linear_sd_form(const Form& w) {
    RatVector origin{0, 0, 0, 0};
    RatVector axis{0, 0, 0, 1};
    auto of = canonical_orientation(w, origin, axis, ext::FlatFrame::standard(4));
    // At the origin with tangent e4 the normal basis is e1, e2, e3, so the
    // reported matrix already lives in the right coordinates.
    return of.a;
}

RatMatrix random_traceless_symmetric(SplitMix64& rng) {
    while (true) {
        RatMatrix a(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                Rational v(rng.int_in(-9, 9), rng.int_in(1, 3));
                a(i, j) = v;
                a(j, i) = v;
            }
        const Rational t = a.trace();
        for (int i = 0; i < 3; ++i) a(i, i) -= t / 3;
        if (a.det() != 0) return a;
    }
}

PathCheck connect_same_sign_pair(const RatMatrix& a0, const RatMatrix& a1, int samples) {
    require_admissible(a0);
    require_admissible(a1);
    const bool det_pos = a0.det() > 0;
    if ((a1.det() > 0) != det_pos)
        throw std::invalid_argument("connect_same_sign_pair: endpoints have opposite det signs");

    // Reduce to the det > 0 case (one positive, two negative eigenvalues,
    // and the positive one is determined by tracelessness).
    auto to_eigen = [det_pos](const RatMatrix& a) {
        Eigen::Matrix3d m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = to_double(a(i, j)) * (det_pos ? 1.0 : -1.0);
        return m;
    };
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> e0(to_eigen(a0)), e1(to_eigen(a1));

    // Eigen sorts ascending: (m1 <= m2 < 0 < p). Build right-handed frames.
    auto frame_of = [](const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>& e) {
        Eigen::Matrix3d q = e.eigenvectors();
        if (q.determinant() < 0) q.col(0) *= -1.0;
        return q;
    };
    Eigen::Matrix3d q0 = frame_of(e0), q1 = frame_of(e1);
    // align q1 with q0 where eigenvector signs are ambiguous
    for (int c = 0; c < 2; ++c)
        if (q0.col(c).dot(q1.col(c)) < 0) {
            q1.col(c) *= -1.0;
            q1.col(2) *= -1.0;  // keep det +1
        }
    Eigen::Quaterniond rot0(q0), rot1(q1);

    PathCheck out;
    out.samples = samples;
    out.min_abs_det = std::numeric_limits<double>::infinity();
    out.connected = true;

    for (int s = 0; s < samples; ++s) {
        const double t = samples == 1 ? 0.0 : static_cast<double>(s) / (samples - 1);
        const double m1 = (1 - t) * e0.eigenvalues()(0) + t * e1.eigenvalues()(0);
        const double m2 = (1 - t) * e0.eigenvalues()(1) + t * e1.eigenvalues()(1);
        if (!(m1 < 0) || !(m2 < 0)) {
            out.connected = false;
            break;
        }
        const double p = -(m1 + m2);
        Eigen::Matrix3d q = rot0.slerp(t, rot1).toRotationMatrix();
        Eigen::Vector3d diag(m1, m2, p);
        Eigen::Matrix3d m = q * diag.asDiagonal() * q.transpose();
        if (!det_pos) m = -m;

        // exact re-check through the form correspondence
        RatMatrix a(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                Rational v = rational_from_double(0.5 * (m(i, j) + m(j, i)));
                a(i, j) = v;
                a(j, i) = v;
            }
        const Rational tr = a.trace();
        for (int i = 0; i < 3; ++i) a(i, i) -= tr / 3;
        const Rational det = a.det();
        if (det == 0 || (det > 0) != det_pos) {
            out.connected = false;
            break;
        }
        out.min_abs_det = std::min(out.min_abs_det, std::abs(to_double(det)));
        Form w = linear_sd_form_from_matrix(a);
        if (!ext::exterior_d(w).is_zero() || ext::hodge_star(w, ext::FlatFrame::standard(4)) != w ||
            transversality_rank(w, RatVector{0, 0, 0, 0}) != 3) {
            out.connected = false;
            break;
        }
        if (s == 0 || s == samples - 1) {
            // endpoint frames reproduce the inputs to eigensolver accuracy
            const RatMatrix& target = (s == 0) ? a0 : a1;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    if (std::abs(to_double(a(i, j) - target(i, j))) > 1e-9) out.endpoints_match = false;
        }
    }
    return out;
}

}  // namespace formlab::nearsym
