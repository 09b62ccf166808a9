#pragma once

#include "formlab/nearsym/verify.hpp"
#include "formlab/rng.hpp"

namespace formlab::nearsym {

/// Closed self-dual forms with homogeneous linear coefficients vanishing
/// exactly on the x4-axis correspond one-to-one with nondegenerate
/// symmetric traceless bilinear forms A on the axis complement. These maps
/// realize the correspondence exactly.
Form linear_sd_form_from_matrix(const RatMatrix& a);
RatMatrix matrix_from_linear_sd_form(const Form& w);

/// Random nondegenerate symmetric traceless 3x3 rational matrix.
RatMatrix random_traceless_symmetric(SplitMix64& rng);

struct PathCheck {
    bool connected = false;
    int samples = 0;
    double min_abs_det = 0;     // along the path, in double precision
    bool endpoints_match = true;
};

/// Connects two matrices of equal det sign through nondegenerate symmetric
/// traceless matrices (eigenvalue interpolation plus a rotation geodesic);
/// every sampled waypoint is mapped back to a form and re-checked exactly.
PathCheck connect_same_sign_pair(const RatMatrix& a0, const RatMatrix& a1, int samples = 33);

}  // namespace formlab::nearsym
