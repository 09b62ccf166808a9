#include "formlab/nearsym/verify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace formlab::nearsym {

namespace {

using Mat64 = Eigen::Matrix<double, 6, 4>;
using EVec4 = Eigen::Vector4d;
using EVec6 = Eigen::Matrix<double, 6, 1>;

double norm4(const Vec4& x) { return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]); }

Mat64 jacobian_matrix(const Sampled2Form& f, const Vec4& x) {
    std::array<Comp6, 4> cols;
    f.jacobian_at(x, cols);
    Mat64 j;
    for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 6; ++r) j(r, c) = cols[static_cast<size_t>(c)][static_cast<size_t>(r)];
    return j;
}

EVec6 value_vector(const Sampled2Form& f, const Vec4& x) {
    Comp6 v;
    f.eval_at(x, v);
    EVec6 out;
    for (int r = 0; r < 6; ++r) out(r) = v[static_cast<size_t>(r)];
    return out;
}

/// Unit tangent of the zero curve: right singular vector of the smallest
/// singular value of the 6x4 jacobian.
EVec4 curve_tangent(const Sampled2Form& f, const Vec4& x) {
    Eigen::JacobiSVD<Mat64> svd(jacobian_matrix(f, x), Eigen::ComputeFullV);
    return svd.matrixV().col(3);
}

RatVector to_rational(const Vec4& x) {
    RatVector v;
    v.reserve(4);
    for (double c : x) v.push_back(rational_from_double(c));
    return v;
}

Vec4 to_vec4(const RatVector& x) {
    Vec4 v{};
    for (size_t i = 0; i < 4; ++i) v[i] = to_double(x[i]);
    return v;
}

double dist2(const Vec4& a, const Vec4& b) {
    double d = 0;
    for (int i = 0; i < 4; ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
    return d;
}

/// True if x is within (0.3 * segment length + tol) of some polyline segment.
bool near_polyline(const Vec4& x, const std::vector<Vec4>& poly, double tol) {
    for (size_t s = 0; s + 1 < poly.size(); ++s) {
        const Vec4& a = poly[s];
        const Vec4& b = poly[s + 1];
        double ab2 = dist2(a, b);
        double t = 0;
        if (ab2 > 0) {
            double dot = 0;
            for (int i = 0; i < 4; ++i) dot += (x[i] - a[i]) * (b[i] - a[i]);
            t = std::clamp(dot / ab2, 0.0, 1.0);
        }
        Vec4 proj;
        for (int i = 0; i < 4; ++i) proj[static_cast<size_t>(i)] = a[static_cast<size_t>(i)] +
                                                                   t * (b[static_cast<size_t>(i)] - a[static_cast<size_t>(i)]);
        const double lim = 0.3 * std::sqrt(ab2) + tol;
        if (dist2(x, proj) < lim * lim) return true;
    }
    return poly.size() == 1 && dist2(x, poly[0]) < tol * tol;
}

}  // namespace

Sampled2Form Sampled2Form::from_poly(const Form& w) {
    if (w.num_vars() != 4 || w.degree() != 2) throw std::invalid_argument("Sampled2Form expects a 2-form on R^4");
    auto compiled = std::make_shared<ext::CompiledForm>(ext::CompiledForm::from(w));
    auto partials = std::make_shared<std::array<ext::CompiledForm, 4>>();
    for (int i = 0; i < 4; ++i) {
        Form dwi(4, 2);
        for (const auto& [mask, p] : w.components()) dwi.add_mask_term(mask, p.derivative(i));
        (*partials)[static_cast<size_t>(i)] = ext::CompiledForm::from(dwi);
    }
    Sampled2Form s;
    s.eval = [compiled](const Vec4& x, Comp6& out) { compiled->eval(x, out); };
    s.jacobian = [partials](const Vec4& x, std::array<Comp6, 4>& out) {
        for (int i = 0; i < 4; ++i) (*partials)[static_cast<size_t>(i)].eval(x, out[static_cast<size_t>(i)]);
    };
    return s;
}

void Sampled2Form::jacobian_at(const Vec4& x, std::array<Comp6, 4>& out) const {
    if (jacobian) {
        jacobian(x, out);
        return;
    }
    const double h = 1e-6;
    for (int i = 0; i < 4; ++i) {
        Vec4 xp = x, xm = x;
        xp[static_cast<size_t>(i)] += h;
        xm[static_cast<size_t>(i)] -= h;
        Comp6 fp, fm;
        eval(xp, fp);
        eval(xm, fm);
        for (int r = 0; r < 6; ++r)
            out[static_cast<size_t>(i)][static_cast<size_t>(r)] =
                (fp[static_cast<size_t>(r)] - fm[static_cast<size_t>(r)]) / (2 * h);
    }
}

bool polish_zero(const Sampled2Form& f, Vec4& x, double tol, int max_iter) {
    for (int it = 0; it < max_iter; ++it) {
        EVec6 v = value_vector(f, x);
        if (v.norm() < tol) return true;
        Eigen::JacobiSVD<Mat64> svd(jacobian_matrix(f, x), Eigen::ComputeFullU | Eigen::ComputeFullV);
        svd.setThreshold(1e-8);
        EVec4 step = svd.solve(v);
        if (!step.allFinite()) return false;
        for (int i = 0; i < 4; ++i) x[static_cast<size_t>(i)] -= step(i);
        if (step.norm() > 1e3) return false;
    }
    return value_vector(f, x).norm() < tol;
}

namespace {

struct TraceResult {
    std::vector<Vec4> points;
    bool exited = false;
    bool looped = false;
    bool stalled = false;
};

TraceResult trace_direction(const Sampled2Form& f, const Vec4& start, EVec4 dir, const ContinuationParams& p) {
    TraceResult out;
    Vec4 x = start;
    double h = p.first_step;
    EVec4 prev_dir = dir.normalized();
    out.points.push_back(x);
    constexpr double kMaxTurn = 0.22;  // radians per step, bounds corner cutting
    int tiny_steps = 0;
    while (static_cast<int>(out.points.size()) < p.max_points) {
        EVec4 t = curve_tangent(f, x);
        if (t.dot(prev_dir) < 0) t = -t;
        Vec4 xn = x;
        for (int i = 0; i < 4; ++i) xn[static_cast<size_t>(i)] += h * t(i);
        bool ok = polish_zero(f, xn, p.corrector_tol, 25);
        EVec4 t_new;
        if (ok) {
            const double moved2 = dist2(xn, x);
            ok = moved2 < (2.0 * h) * (2.0 * h) && moved2 > 0;
        }
        if (ok) {
            t_new = curve_tangent(f, xn);
            if (t_new.dot(t) < 0) t_new = -t_new;
            const double cosang = std::clamp(t_new.dot(t), -1.0, 1.0);
            ok = std::acos(cosang) <= kMaxTurn;
        }
        if (!ok) {
            h *= 0.5;
            if (h < p.min_step) {
                out.stalled = true;
                break;
            }
            continue;
        }
        if (std::sqrt(dist2(xn, x)) < 8 * p.min_step) {
            if (++tiny_steps > 25) {
                out.stalled = true;
                break;
            }
        } else {
            tiny_steps = 0;
        }
        x = xn;
        prev_dir = t_new;
        out.points.push_back(x);
        h = std::min(h * 1.25, p.max_step);
        if (norm4(x) > p.ball_radius) {
            out.exited = true;
            break;
        }
        // closed loop: back near the start after some arc length
        if (out.points.size() > 12 && dist2(x, start) < (0.75 * h) * (0.75 * h)) {
            out.looped = true;
            break;
        }
    }
    return out;
}

}  // namespace

std::vector<TracedComponent> trace_zero_components(const Sampled2Form& f, const std::vector<Vec4>& seeds,
                                                   const ContinuationParams& params) {
    std::vector<Vec4> zeros;
    for (Vec4 s : seeds) {
        if (!polish_zero(f, s, params.corrector_tol, 60)) continue;
        if (norm4(s) > params.ball_radius) continue;
        bool dup = false;
        for (const auto& z : zeros) {
            double d = 0;
            for (int i = 0; i < 4; ++i) d += (s[static_cast<size_t>(i)] - z[static_cast<size_t>(i)]) *
                                             (s[static_cast<size_t>(i)] - z[static_cast<size_t>(i)]);
            if (std::sqrt(d) < params.merge_tol) {
                dup = true;
                break;
            }
        }
        if (!dup) zeros.push_back(s);
    }

    std::vector<TracedComponent> comps;
    std::vector<bool> used(zeros.size(), false);
    for (size_t i = 0; i < zeros.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        EVec4 t0 = curve_tangent(f, zeros[i]);
        TraceResult fwd = trace_direction(f, zeros[i], t0, params);
        TracedComponent comp;
        comp.noncompact = fwd.exited;
        if (!fwd.looped) {
            TraceResult bwd = trace_direction(f, zeros[i], -t0, params);
            comp.noncompact = comp.noncompact || bwd.exited;
            comp.points.assign(bwd.points.rbegin(), bwd.points.rend());
            comp.points.insert(comp.points.end(), fwd.points.begin() + 1, fwd.points.end());
            if (bwd.stalled) comp.stalled_ends.push_back(comp.points.front());
            if (fwd.stalled) comp.stalled_ends.push_back(comp.points.back());
        } else {
            comp.points = std::move(fwd.points);
            comp.closed_loop = true;
        }
        for (size_t j = i + 1; j < zeros.size(); ++j)
            if (!used[j] && near_polyline(zeros[j], comp.points, 10 * params.merge_tol)) used[j] = true;
        comps.push_back(std::move(comp));
    }
    return comps;
}

int transversality_rank(const Form& w, const RatVector& point) {
    auto d = sd_decompose(w);
    RatMatrix j(3, 4);
    for (int a = 0; a < 3; ++a)
        for (int i = 0; i < 4; ++i) j(a, i) = d.sd[static_cast<size_t>(a)].derivative(i).eval(point);
    // ASD part contributes rows too when present
    RatMatrix j_full(6, 4);
    bool has_asd = !d.is_self_dual();
    if (!has_asd) return j.rank();
    for (int a = 0; a < 3; ++a)
        for (int i = 0; i < 4; ++i) {
            j_full(a, i) = j(a, i);
            j_full(a + 3, i) = d.asd[static_cast<size_t>(a)].derivative(i).eval(point);
        }
    return j_full.rank();
}

std::vector<RatVector> zero_tangents(const Form& w, const RatVector& point) {
    auto d = sd_decompose(w);
    const int rows = d.is_self_dual() ? 3 : 6;
    RatMatrix j(rows, 4);
    for (int a = 0; a < 3; ++a)
        for (int i = 0; i < 4; ++i) {
            j(a, i) = d.sd[static_cast<size_t>(a)].derivative(i).eval(point);
            if (rows == 6) j(a + 3, i) = d.asd[static_cast<size_t>(a)].derivative(i).eval(point);
        }
    return j.kernel();
}

OrientationForm canonical_orientation(const Form& w, const RatVector& z_point, const RatVector& z_tangent,
                                      const ext::FlatFrame& frame, double tol) {
    frame.validate();
    if (z_point.size() != 4 || z_tangent.size() != 4)
        throw std::invalid_argument("canonical_orientation expects points in R^4");

    auto max_abs = [](const Form& constant_form) {
        double m = 0;
        for (const auto& [mask, p] : constant_form.components())
            m = std::max(m, std::abs(to_double(p.terms().begin()->second)));
        return m;
    };

    Form at_point = w.evaluate(z_point);
    if ((tol == 0.0 && !at_point.is_zero()) || (tol > 0.0 && max_abs(at_point) > tol))
        throw std::invalid_argument("NotOnZeroSet: form does not vanish at the given point");

    VectorField tangent_field = VectorField::constant(4, z_tangent);
    Form grad_t = ext::covariant_derivative(w, tangent_field).evaluate(z_point);
    if ((tol == 0.0 && !grad_t.is_zero()) || (tol > 0.0 && max_abs(grad_t) > tol))
        throw std::invalid_argument("TangentNotInKernel: grad of form along tangent is nonzero");

    OrientationForm of;
    of.base_point = z_point;
    of.tangent = z_tangent;

    // g-orthogonal complement of the tangent line (exact kernel computation).
    RatMatrix row(1, 4);
    for (int i = 0; i < 4; ++i) {
        Rational s = 0;
        for (int j = 0; j < 4; ++j) s += z_tangent[static_cast<size_t>(j)] * frame.metric(j, i);
        row(0, i) = s;
    }
    of.normal_basis = row.kernel();
    if (of.normal_basis.size() != 3) throw std::invalid_argument("tangent vector must be nonzero");

    // A(n_i, n_j) = (iota_tangent grad_{n_i} w)|_p (n_j)
    of.a = RatMatrix(3, 3);
    for (int i = 0; i < 3; ++i) {
        VectorField ni = VectorField::constant(4, of.normal_basis[static_cast<size_t>(i)]);
        Form one_form =
            ext::interior_product(tangent_field, ext::covariant_derivative(w, ni)).evaluate(z_point);
        for (int j = 0; j < 3; ++j) {
            Rational v = 0;
            for (int k = 0; k < 4; ++k) {
                const int idx[1] = {k};
                const Poly& c = one_form.component(std::span<const int>(idx, 1));
                if (!c.is_zero()) v += c.terms().begin()->second * of.normal_basis[static_cast<size_t>(j)][static_cast<size_t>(k)];
            }
            of.a(i, j) = v;
        }
    }

    of.symmetric = of.a.is_symmetric();

    of.gram = RatMatrix(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Rational s = 0;
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l)
                    s += of.normal_basis[static_cast<size_t>(i)][static_cast<size_t>(k)] * frame.metric(k, l) *
                         of.normal_basis[static_cast<size_t>(j)][static_cast<size_t>(l)];
            of.gram(i, j) = s;
        }

    // g-trace: tr(G^{-1} A); basis independent, vanishes in the orthonormal frame.
    auto gram_inv = of.gram.inverse();
    of.trace_g = (*gram_inv * of.a).trace();
    of.det = of.a.det();
    of.det_sign = of.det > 0 ? 1 : (of.det < 0 ? -1 : 0);

    of.canonical_tangent = z_tangent;
    if (of.det_sign < 0)
        for (auto& c : of.canonical_tangent) c = -c;
    return of;
}

namespace {

/// Restrict the Hessian of f = (w ^ w)/vol to the euclidean complement of
/// the tangent and report its eigenvalues.
MorseBottSample morse_bott_at(const Poly& f, const Form& w, const RatVector& point) {
    MorseBottSample s;
    s.point = to_vec4(point);
    auto tangents = zero_tangents(w, point);
    // Hessian (exact), restricted to the complement of the tangent space.
    RatMatrix hess(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            hess(i, j) = f.derivative(i).derivative(j).eval(point);
            hess(j, i) = hess(i, j);
        }
    RatMatrix row(static_cast<int>(tangents.size()), 4);
    for (size_t t = 0; t < tangents.size(); ++t)
        for (int i = 0; i < 4; ++i) row(static_cast<int>(t), i) = tangents[t][static_cast<size_t>(i)];
    auto normal = row.kernel();  // complement: vectors euclidean-orthogonal to all tangents
    Eigen::MatrixXd b(4, static_cast<int>(normal.size()));
    for (size_t c = 0; c < normal.size(); ++c)
        for (int i = 0; i < 4; ++i) b(i, static_cast<int>(c)) = to_double(normal[c][static_cast<size_t>(i)]);
    Eigen::Matrix4d h;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) h(i, j) = to_double(hess(i, j));
    Eigen::MatrixXd m = b.transpose() * h * b;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    s.positive_definite = true;
    for (int i = 0; i < eig.eigenvalues().size() && i < 3; ++i) {
        s.normal_hessian_eigs[static_cast<size_t>(i)] = eig.eigenvalues()(i);
        if (eig.eigenvalues()(i) <= 0) s.positive_definite = false;
    }
    return s;
}

}  // namespace

ZeroSetReport verify_near_symplectic(const Form& w, const ext::FlatFrame& frame, const GridSpec& grid) {
    frame.validate();
    if (w.num_vars() != 4 || w.degree() != 2)
        throw std::invalid_argument("verify_near_symplectic expects a 2-form on R^4");
    if (grid.dimension() != 4) throw std::invalid_argument("grid must be 4-dimensional");

    ZeroSetReport rep;
    rep.closed = ext::exterior_d(w).is_zero();
    rep.selfdual = (ext::hodge_star(w, frame) == w);
    if (!rep.closed) {
        rep.status = ZeroSetReport::Status::NotClosed;
        rep.first_failure = "d(omega) != 0";
        return rep;
    }

    // omega ^ omega = f vol; sign checks only need the top coefficient.
    const Poly f = ext::wedge(w, w).component(ext::detail::full_mask(4));

    double ball = 0;
    for (const auto& ax : grid.axes)
        ball = std::max({ball, std::abs(to_double(ax.lo)), std::abs(to_double(ax.hi))});

    std::vector<Vec4> seeds;
    const auto sampled = Sampled2Form::from_poly(w);
    for (const auto& p : grid.points_rational()) {
        Rational v = f.eval(p);
        rep.wedge_checked++;
        const double vd = to_double(v);
        if (rep.wedge_checked == 1 || vd < rep.wedge_min) rep.wedge_min = vd;
        if (v < 0) {
            rep.status = ZeroSetReport::Status::IndefiniteWedge;
            std::ostringstream os;
            os << "omega^omega < 0 at (";
            for (size_t i = 0; i < 4; ++i) os << (i ? ", " : "") << to_double(p[i]);
            os << ")";
            if (rep.first_failure.empty()) rep.first_failure = os.str();
        }
        Vec4 pd{};
        for (size_t i = 0; i < 4; ++i) pd[i] = to_double(p[i]);
        seeds.push_back(pd);
    }
    if (rep.status == ZeroSetReport::Status::IndefiniteWedge) return rep;

    // Zero set: exact model family if recognized, continuation otherwise.
    std::vector<RatVector> exact_samples;
    const auto model_eps = match_model_family(w);
    if (model_eps && *model_eps == 0) {
        const auto slopes = model_zero_line_slopes();
        for (double t : slopes) {
            ZeroCurve c;
            c.kind = ZeroCurve::Kind::Line;
            c.noncompact = true;
            std::ostringstream os;
            os << "x2=x3=0, x4 = " << t << " * x1";
            c.param = os.str();
            const double reach = ball / std::sqrt(1.0 + t * t);
            for (int i = -40; i <= 40; ++i) {
                const double x1 = reach * i / 40.0;
                c.points.push_back(Vec4{x1, 0, 0, t * x1});
            }
            rep.components.push_back(std::move(c));
        }
        // transversality samples along the lines (skipping the crossing at 0)
        for (double t : slopes)
            for (int i = 1; i <= 12; ++i) {
                RatVector p{Rational(i, 8), 0, 0, rational_from_double(t) * Rational(i, 8)};
                exact_samples.push_back(std::move(p));
            }
        // the crossing itself: rank drops, flagged as the degenerate point
        RatVector origin{0, 0, 0, 0};
        const int origin_rank = transversality_rank(w, origin);
        rep.transversality.push_back({Vec4{0, 0, 0, 0}, origin_rank, origin_rank == 3});
        rep.status = ZeroSetReport::Status::DegenerateZero;
        rep.first_failure = "rank grad(omega) < 3 at the origin (line crossing)";
    } else if (model_eps && *model_eps == 1) {
        for (auto& p : model_zero_points_eps1(60)) exact_samples.push_back(std::move(p));
        for (int branch = 0; branch < 2; ++branch) {
            ZeroCurve c;
            c.kind = ZeroCurve::Kind::HyperbolaBranch;
            c.noncompact = true;
            c.param = branch == 0 ? "x2=x3=0, H(x1,x4)=eps, branch x1>0" : "x2=x3=0, H(x1,x4)=eps, branch x1<0";
            const double x1v = 2.0 / std::sqrt(13.0);
            for (int i = -40; i <= 40; ++i) {
                // sweep the branch: upper root for i<0, lower root for i>0
                double x1 = x1v + std::abs(i) * (ball - x1v) / 40.0;
                double disc = std::sqrt(std::max(0.0, 13 * x1 * x1 - 4.0));
                double x4 = (-x1 + (i <= 0 ? disc : -disc)) / 2.0;
                if (branch == 1) {
                    x1 = -x1;
                    x4 = -x4;
                }
                c.points.push_back(Vec4{x1, 0, 0, x4});
            }
            rep.components.push_back(std::move(c));
        }
    } else if (model_eps) {
        // other eps > 0: same hyperbola structure, sampled in doubles
        const double eps = to_double(*model_eps);
        for (int branch = 0; branch < 2; ++branch) {
            ZeroCurve c;
            c.kind = ZeroCurve::Kind::HyperbolaBranch;
            c.noncompact = true;
            c.param = "x2=x3=0, H(x1,x4)=eps";
            const double x1v = 2.0 * std::sqrt(eps / 13.0);
            for (int i = -40; i <= 40; ++i) {
                double x1 = x1v + std::abs(i) * (ball - x1v) / 40.0;
                double disc = std::sqrt(std::max(0.0, 13 * x1 * x1 - 4.0 * eps));
                double x4 = (-x1 + (i <= 0 ? disc : -disc)) / 2.0;
                if (branch == 1) {
                    x1 = -x1;
                    x4 = -x4;
                }
                c.points.push_back(Vec4{x1, 0, 0, x4});
            }
            rep.components.push_back(std::move(c));
            for (int i = 1; i <= 10; ++i) exact_samples.push_back(to_rational(c.points[static_cast<size_t>(40 + 3 * i)]));
        }
    } else {
        ContinuationParams params;
        params.ball_radius = ball * 1.05;
        auto comps = trace_zero_components(sampled, seeds, params);
        for (auto& tc : comps) {
            ZeroCurve c;
            c.kind = ZeroCurve::Kind::SampledArc;
            c.noncompact = tc.noncompact;
            c.param = "continuation from grid seeds";
            c.points = std::move(tc.points);
            for (size_t i = 0; i < c.points.size(); i += std::max<size_t>(1, c.points.size() / 8))
                exact_samples.push_back(to_rational(c.points[i]));
            rep.components.push_back(std::move(c));
        }
    }

    // Transversality, Morse-Bott and orientation data at the samples.
    for (const auto& p : exact_samples) {
        const int rank = transversality_rank(w, p);
        rep.transversality.push_back({to_vec4(p), rank, rank == 3});
        if (rank != 3) {
            if (rep.status == ZeroSetReport::Status::Pass) {
                rep.status = ZeroSetReport::Status::DegenerateZero;
                std::ostringstream os;
                os << "rank grad(omega) = " << rank << " at sampled zero";
                rep.first_failure = os.str();
            }
            continue;
        }
        rep.morse_bott.push_back(morse_bott_at(f, w, p));
        auto tangents = zero_tangents(w, p);
        if (tangents.size() == 1) {
            const double tol = 1e-9;
            auto of = canonical_orientation(w, p, tangents[0], frame, tol);
            OrientationSample os;
            os.point = to_vec4(p);
            os.tangent = to_vec4(of.tangent);
            os.det_sign = of.det_sign;
            os.symmetric = of.symmetric;
            os.trace_residual = std::abs(to_double(of.trace_g));
            rep.orientation.push_back(os);
        }
    }
    for (const auto& mb : rep.morse_bott)
        if (!mb.positive_definite && rep.status == ZeroSetReport::Status::Pass) {
            rep.status = ZeroSetReport::Status::DegenerateZero;
            rep.first_failure = "normal Hessian of f not positive-definite at sampled zero";
        }
    return rep;
}

}  // namespace formlab::nearsym
