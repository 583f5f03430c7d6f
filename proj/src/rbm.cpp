#include "jacksim/rbm.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "jacksim/format.hpp"
#include "jacksim/rng.hpp"

namespace jacksim {

DrivingPath sample_brownian(const Vec& drift, const Mat& cov, const Vec& w0, long steps,
                            double dt, std::uint64_t seed) {
    const long k = drift.size();
    if (cov.rows() != k || cov.cols() != k || w0.size() != k)
        throw std::invalid_argument("sample_brownian: inconsistent dimensions");
    if (!(dt > 0.0) || steps < 0) throw std::invalid_argument("sample_brownian: bad grid");
    for (long a = 0; a < k; ++a)
        for (long b = 0; b < k; ++b)
            if (std::abs(cov(a, b) - cov(b, a)) > 1e-12)
                throw std::invalid_argument("sample_brownian: covariance not symmetric");
    if (w0.size() > 0 && w0.minCoeff() < 0.0)
        throw std::invalid_argument("sample_brownian: w0 must be componentwise >= 0");

    Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (cov + cov.transpose()));
    const double clip = 1e-12 * std::max(0.0, cov.trace());
    Vec scale = eig.eigenvalues();
    for (long i = 0; i < k; ++i) scale[i] = scale[i] > clip ? std::sqrt(scale[i]) : 0.0;
    Mat factor = eig.eigenvectors() * scale.asDiagonal();

    DrivingPath path;
    path.drift = drift;
    path.covariance = cov;
    path.times.resize(steps + 1);
    path.values.resize(steps + 1, k);
    path.values.row(0) = w0.transpose();

    Rng rng(derive_seed(seed, {0}));
    const double root_dt = std::sqrt(dt);
    Vec noise(k);
    for (long i = 0; i < steps + 1; ++i) path.times[i] = static_cast<double>(i) * dt;
    for (long i = 1; i <= steps; ++i) {
        for (long j = 0; j < k; ++j) {
            // Box-Muller, two uniforms per normal
            const double u1 = rng.uniform_pos();
            const double u2 = rng.uniform();
            noise[j] = std::sqrt(-2.0 * std::log(u1)) *
                       std::cos(6.283185307179586476925286766559 * u2);
        }
        path.values.row(i) =
            path.values.row(i - 1) + drift.transpose() * dt + (factor * noise).transpose() * root_dt;
    }
    return path;
}

ReflectedPath reflect(const DrivingPath& path, const Mat& routing, double tol, long max_sweeps) {
    const long n = path.values.rows();
    const long k = path.values.cols();
    if (routing.rows() != k || routing.cols() != k)
        throw std::invalid_argument("reflect: routing must be K x K");

    ReflectedPath out;
    out.times = path.times;
    out.y = Mat::Zero(n, k);

    Mat cand(n, k);
    for (long sweep = 1; sweep <= max_sweeps; ++sweep) {
        cand.noalias() = out.y * routing;
        cand -= path.values;
        double change = 0.0;
        for (long j = 0; j < k; ++j) {
            double running = 0.0;
            for (long i = 0; i < n; ++i) {
                running = std::max(running, cand(i, j));
                change = std::max(change, running - out.y(i, j));
                out.y(i, j) = running;
            }
        }
        if (change < tol) {
            out.sweeps = sweep;
            out.z = path.values + out.y * (Mat::Identity(k, k) - routing);
            out.z = out.z.cwiseMax(0.0);  // absorbs the <= tol convergence slack
            return out;
        }
    }
    throw std::runtime_error("reflect: sweep cap exceeded; routing spectral radius likely >= 1");
}

double complementarity_violation(const ReflectedPath& path, double y_eps) {
    double worst = 0.0;
    for (long i = 1; i < path.y.rows(); ++i) {
        for (long j = 0; j < path.y.cols(); ++j) {
            if (path.y(i, j) > path.y(i - 1, j) + y_eps)
                worst = std::max(worst, std::min(path.z(i - 1, j), path.z(i, j)));
        }
    }
    return worst;
}

void write_reflected_csv(const ReflectedPath& path, std::ostream& out) {
    const long k = path.z.cols();
    out << 't';
    for (long j = 1; j <= k; ++j) out << ",Z_" << j;
    for (long j = 1; j <= k; ++j) out << ",Y_" << j;
    out << '\n';
    for (long i = 0; i < path.times.size(); ++i) {
        out << fmt_g17(path.times[i]);
        for (long j = 0; j < k; ++j) out << ',' << fmt_g17(path.z(i, j));
        for (long j = 0; j < k; ++j) out << ',' << fmt_g17(path.y(i, j));
        out << '\n';
    }
}

}  // namespace jacksim
