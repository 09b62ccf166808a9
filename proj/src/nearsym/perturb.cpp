#include "formlab/nearsym/perturb.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <stdexcept>

namespace formlab::nearsym {

double RadialProfile::log_width() const { return std::log(r_outer / r_inner); }

double RadialProfile::delta() const { return (15.0 / 8.0) / log_width(); }

double RadialProfile::value(double r) const {
    if (r <= r_inner) return 1.0;
    if (r >= r_outer) return 0.0;
    const double u = (std::log(r_outer) - std::log(r)) / log_width();
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double RadialProfile::derivative(double r) const {
    if (r <= r_inner || r >= r_outer) return 0.0;
    const double u = (std::log(r_outer) - std::log(r)) / log_width();
    const double sprime = 30.0 * u * u * (1.0 - u) * (1.0 - u);
    return -sprime / (log_width() * r);
}

Sampled2Form cutoff_perturbation(const Form& lambda, const Form& mu, const RadialProfile& rho, double eps) {
    if (lambda.num_vars() != 4 || lambda.degree() != 1 || mu.num_vars() != 4 || mu.degree() != 1)
        throw std::invalid_argument("cutoff_perturbation expects 1-forms on R^4");
    if (eps < 0) throw std::invalid_argument("cutoff_perturbation: eps must be >= 0");
    if (!(rho.r_inner > 0) || !(rho.r_outer > rho.r_inner))
        throw std::invalid_argument("cutoff_perturbation: bad profile radii");

    auto d_lambda = std::make_shared<ext::CompiledForm>(ext::CompiledForm::from(ext::exterior_d(lambda)));
    auto d_mu = std::make_shared<ext::CompiledForm>(ext::CompiledForm::from(ext::exterior_d(mu)));
    auto mu_c = std::make_shared<ext::CompiledForm>(ext::CompiledForm::from(mu));

    Sampled2Form s;
    s.eval = [d_lambda, d_mu, mu_c, rho, eps](const Vec4& x, Comp6& out) {
        d_lambda->eval(x, out);
        if (eps == 0) return;
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
        const double rv = rho.value(r);
        const double rd = rho.derivative(r);
        if (rv != 0) {
            Comp6 dm;
            d_mu->eval(x, dm);
            for (int k = 0; k < 6; ++k) out[static_cast<size_t>(k)] += eps * rv * dm[static_cast<size_t>(k)];
        }
        if (rd != 0 && r > 0) {
            std::array<double, 4> m4{};
            mu_c->eval(x, m4);
            // dr ^ mu over the lex pairs 01,02,03,12,13,23
            static constexpr int pair_i[6] = {0, 0, 0, 1, 1, 2};
            static constexpr int pair_j[6] = {1, 2, 3, 2, 3, 3};
            for (int k = 0; k < 6; ++k) {
                const int i = pair_i[k], j = pair_j[k];
                out[static_cast<size_t>(k)] += eps * rd *
                                               (x[static_cast<size_t>(i)] / r * m4[static_cast<size_t>(j)] -
                                                x[static_cast<size_t>(j)] / r * m4[static_cast<size_t>(i)]);
            }
        }
    };
    return s;
}

namespace {

/// Numerical rank-3 transversality of the 6x4 jacobian at a zero point.
bool transverse_at(const Sampled2Form& f, const Vec4& x) {
    std::array<Comp6, 4> cols;
    f.jacobian_at(x, cols);
    Eigen::Matrix<double, 6, 4> j;
    for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 6; ++r) j(r, c) = cols[static_cast<size_t>(c)][static_cast<size_t>(r)];
    Eigen::JacobiSVD<Eigen::Matrix<double, 6, 4>> svd(j);
    const auto& s = svd.singularValues();
    return s(2) > 1e-7 * s(0) && s(0) > 0;
}

double wedge_f(const Comp6& w) {
    // (w ^ w) / vol for components in lex order 01,02,03,12,13,23
    return 2.0 * (w[0] * w[5] - w[1] * w[4] + w[2] * w[3]);
}

}  // namespace

PerturbCheck check_cutoff_perturbation(const Form& lambda, const Form& mu, const RadialProfile& rho, double eps,
                                       std::uint64_t seed, int antipodal_samples) {
    PerturbCheck chk;
    chk.eps = eps;
    const auto form = cutoff_perturbation(lambda, mu, rho, eps);
    const double ball = 1.6 * rho.r_outer;

    // antipodal invariance at random sample pairs
    SplitMix64 rng(seed);
    for (int n = 0; n < antipodal_samples; ++n) {
        Vec4 x{};
        for (auto& c : x) c = rng.uniform(-ball, ball);
        Vec4 nx{-x[0], -x[1], -x[2], -x[3]};
        Comp6 a, b;
        form.eval_at(x, a);
        form.eval_at(nx, b);
        for (int k = 0; k < 6; ++k)
            chk.antipodal_residual =
                std::max(chk.antipodal_residual, std::abs(a[static_cast<size_t>(k)] - b[static_cast<size_t>(k)]));
        ++chk.antipodal_pairs;
    }

    // analytic profile derivative against finite differences
    for (int n = 0; n < 200; ++n) {
        const double r = rng.uniform(0.5 * rho.r_inner, 1.2 * rho.r_outer);
        const double h = 1e-6;
        const double fd = (rho.value(r + h) - rho.value(r - h)) / (2 * h);
        chk.profile_derivative_residual =
            std::max(chk.profile_derivative_residual, std::abs(fd - rho.derivative(r)));
    }

    // d(omega_eps) = 0 up to finite-difference error, at random points
    for (int n = 0; n < 50; ++n) {
        Vec4 x{};
        for (auto& c : x) c = rng.uniform(-ball, ball);
        const double h = 1e-5;
        // (d w)_{ijk} = di w_{jk} - dj w_{ik} + dk w_{ij} over the four triples
        static constexpr int triples[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
        auto comp_index = [](int i, int j) {
            static constexpr int lut[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
            return lut[i][j];
        };
        for (const auto& t : triples) {
            double total = 0;
            for (int a = 0; a < 3; ++a) {
                const int d = t[a];
                // sign (-1)^a, remaining pair stays in increasing order
                int rem[2], ri = 0;
                for (int b = 0; b < 3; ++b)
                    if (b != a) rem[ri++] = t[b];
                Vec4 xp = x, xm = x;
                xp[static_cast<size_t>(d)] += h;
                xm[static_cast<size_t>(d)] -= h;
                Comp6 wp, wm;
                form.eval_at(xp, wp);
                form.eval_at(xm, wm);
                const int ci = comp_index(rem[0], rem[1]);
                const double pd = (wp[static_cast<size_t>(ci)] - wm[static_cast<size_t>(ci)]) / (2 * h);
                total += (a % 2 == 0 ? 1.0 : -1.0) * pd;
            }
            chk.closedness_residual = std::max(chk.closedness_residual, std::abs(total));
        }
    }

    // wedge positivity on a deterministic grid
    chk.min_f = std::numeric_limits<double>::infinity();
    const int n_axis = 9;
    for (int a = 0; a < n_axis; ++a)
        for (int b = 0; b < n_axis; ++b)
            for (int c = 0; c < n_axis; ++c)
                for (int d = 0; d < n_axis; ++d) {
                    Vec4 x{-ball + 2 * ball * a / (n_axis - 1.0), -ball + 2 * ball * b / (n_axis - 1.0),
                           -ball + 2 * ball * c / (n_axis - 1.0), -ball + 2 * ball * d / (n_axis - 1.0)};
                    Comp6 w;
                    form.eval_at(x, w);
                    const double fval = wedge_f(w);
                    if (fval < chk.min_f) chk.min_f = fval;
                    if (fval < -1e-10 && chk.wedge_nonnegative) {
                        chk.wedge_nonnegative = false;
                        chk.first_failure = x;
                    }
                }

    // zero set: seeds on the x2=x3=0 plane plus a coarse 4d sweep
    std::vector<Vec4> seeds;
    const int n_plane = 15;
    for (int a = 0; a < n_plane; ++a)
        for (int b = 0; b < n_plane; ++b)
            seeds.push_back(Vec4{-ball + 2 * ball * a / (n_plane - 1.0), 0.0, 0.0,
                                 -ball + 2 * ball * b / (n_plane - 1.0)});
    for (int n = 0; n < 120; ++n) {
        Vec4 x{};
        for (auto& c : x) c = rng.uniform(-ball, ball);
        seeds.push_back(x);
    }

    ContinuationParams params;
    params.ball_radius = ball;
    params.first_step = 0.01;
    params.max_step = 0.05;
    auto comps = trace_zero_components(form, seeds, params);
    chk.component_count = static_cast<int>(comps.size());
    for (const auto& comp : comps) {
        if (comp.noncompact) ++chk.noncompact_components;
        for (size_t i = 0; i < comp.points.size(); i += std::max<size_t>(1, comp.points.size() / 10))
            if (!transverse_at(form, comp.points[i])) chk.zeros_transverse = false;
    }
    chk.components = std::move(comps);
    return chk;
}

double locate_two_component_eps_threshold(const Form& lambda, const Form& mu, const RadialProfile& rho, double lo,
                                          double hi, int iterations, std::uint64_t seed) {
    auto good = [&](double eps) { return check_cutoff_perturbation(lambda, mu, rho, eps, seed, 50).pass(); };
    if (!good(lo)) throw std::invalid_argument("threshold bisection: property fails at the lower endpoint");
    if (good(hi)) return hi;
    double a = lo, b = hi;
    for (int i = 0; i < iterations; ++i) {
        const double m = 0.5 * (a + b);
        (good(m) ? a : b) = m;
    }
    return a;
}

}  // namespace formlab::nearsym
