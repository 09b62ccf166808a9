#pragma once

#include "formlab/form.hpp"
#include "formlab/grid.hpp"
#include "formlab/nearsym/model.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace formlab::nearsym {

using Vec4 = std::array<double, 4>;
using Comp6 = std::array<double, 6>;  // 2-form components, lex order 12,13,14,23,24,34

/// Pointwise 2-form on R^4 for the numerical zero-set machinery. The
/// jacobian callback is optional; central differences are used otherwise.
struct Sampled2Form {
    std::function<void(const Vec4&, Comp6&)> eval;
    std::function<void(const Vec4&, std::array<Comp6, 4>&)> jacobian;  // d/dx_i of each component

    static Sampled2Form from_poly(const Form& w);
    void eval_at(const Vec4& x, Comp6& out) const { eval(x, out); }
    void jacobian_at(const Vec4& x, std::array<Comp6, 4>& out) const;
};

/// One connected piece of an extracted zero set.
struct ZeroCurve {
    enum class Kind { Line, HyperbolaBranch, SampledArc };
    Kind kind = Kind::SampledArc;
    std::vector<Vec4> points;
    bool noncompact = false;
    std::string param;  // human-readable parametrization data
};

struct TransversalitySample {
    Vec4 point{};
    int rank = 0;
    bool pass = false;
};

struct MorseBottSample {
    Vec4 point{};
    std::array<double, 3> normal_hessian_eigs{};
    bool positive_definite = false;
};

struct OrientationSample {
    Vec4 point{};
    Vec4 tangent{};
    int det_sign = 0;
    double trace_residual = 0;
    bool symmetric = false;
};

struct ZeroSetReport {
    enum class Status { Pass, NotClosed, DegenerateZero, IndefiniteWedge };

    bool closed = false;
    bool selfdual = false;
    Status status = Status::Pass;
    std::string first_failure;

    long long wedge_checked = 0;
    double wedge_min = 0;

    std::vector<ZeroCurve> components;
    std::vector<TransversalitySample> transversality;
    std::vector<MorseBottSample> morse_bott;
    std::vector<OrientationSample> orientation;

    bool pass() const { return status == Status::Pass; }
};

/// Exact orientation data of the zero set at a point: the bilinear form
/// A(xi, eta) = (iota_tangent grad_xi w)(eta) on the metric complement of
/// the tangent line, its Gram matrix, exact g-trace and determinant sign.
struct OrientationForm {
    RatVector base_point;
    RatVector tangent;
    std::vector<RatVector> normal_basis;
    RatMatrix a;     // A in normal_basis coordinates
    RatMatrix gram;  // Gram matrix of normal_basis
    bool symmetric = false;
    Rational trace_g;  // 0 on the zero set of a near-symplectic form
    Rational det;      // sign is basis-independent
    int det_sign = 0;
    RatVector canonical_tangent;  // tangent if det > 0, else -tangent
};

/// tol == 0 demands the zero / kernel conditions exactly (rational inputs
/// on the nose); a positive tol accepts numerically-located points.
OrientationForm canonical_orientation(const Form& w, const RatVector& z_point, const RatVector& z_tangent,
                                      const ext::FlatFrame& frame, double tol = 0.0);

/// Rank of grad(w) at a point as a map into the SD part (exact arithmetic).
int transversality_rank(const Form& w, const RatVector& point);
/// Kernel direction of grad(w) at a transverse zero (exact; empty if rank < 3).
std::vector<RatVector> zero_tangents(const Form& w, const RatVector& point);

ZeroSetReport verify_near_symplectic(const Form& w, const ext::FlatFrame& frame, const GridSpec& grid);

/// Tuning for the predictor-corrector tracer.
struct ContinuationParams {
    double ball_radius = 3.0;
    double first_step = 0.02;
    double max_step = 0.08;
    double min_step = 1e-6;
    double corrector_tol = 1e-11;
    double merge_tol = 1e-6;
    int max_points = 6000;
};

struct TracedComponent {
    std::vector<Vec4> points;
    bool noncompact = false;
    bool closed_loop = false;
    // Ends where the corrector stopped making progress inside the ball:
    // the zero set terminates there (it is not a manifold at such points).
    std::vector<Vec4> stalled_ends;
};

/// Gauss-Newton polish of a seed onto the zero set; false if it diverges.
bool polish_zero(const Sampled2Form& f, Vec4& x, double tol = 1e-11, int max_iter = 60);

/// Trace and merge the zero curves reachable from the given seeds.
std::vector<TracedComponent> trace_zero_components(const Sampled2Form& f, const std::vector<Vec4>& seeds,
                                                   const ContinuationParams& params);

}  // namespace formlab::nearsym
