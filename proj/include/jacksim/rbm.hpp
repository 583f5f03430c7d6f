#pragma once

#include <cstdint>
#include <iosfwd>

#include "jacksim/types.hpp"

namespace jacksim {

// Sampled correlated Brownian path on a uniform grid; values include W(0).
struct DrivingPath {
    Vec times;     // n+1 entries, times[0] == 0
    Mat values;    // (n+1) x K
    Vec drift;
    Mat covariance;
};

// Discrete solution of the oblique Skorokhod problem Z = W + Y (I - P).
struct ReflectedPath {
    Vec times;
    Mat z;  // >= 0
    Mat y;  // nondecreasing per coordinate, y.row(0) == 0
    long sweeps = 0;
};

// Gaussian increments with mean drift*dt and covariance cov*dt. cov is
// factored by symmetric eigendecomposition; eigenvalues below
// 1e-12 * trace are clipped to zero, so semidefinite covariances from
// degenerate networks are fine. Throws if cov is not symmetric within 1e-12
// or w0 has a negative entry.
DrivingPath sample_brownian(const Vec& drift, const Mat& cov, const Vec& w0, long steps,
                            double dt, std::uint64_t seed);

// Fixed-point iteration from Y = 0:
//   Y_j(t_i) <- max_{l <= i} ( -W_j(t_l) + sum_k Y_k(t_l) p_kj )+
// Iterates are monotone nondecreasing; stops when a sweep moves the path by
// less than `tol` in sup norm. Throws if the sweep cap is exceeded (spectral
// radius of P not < 1).
ReflectedPath reflect(const DrivingPath& path, const Mat& routing, double tol = 1e-12,
                      long max_sweeps = 100000);

// Largest min(Z_j(t_{i-1}), Z_j(t_i)) over steps where Y_j increases; 0 when
// Y never pushes. Discrete complementarity holds when this stays below the
// boundary tolerance.
double complementarity_violation(const ReflectedPath& path, double y_eps = 1e-12);

void write_reflected_csv(const ReflectedPath& path, std::ostream& out);

}  // namespace jacksim
