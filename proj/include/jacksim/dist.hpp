#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "jacksim/rng.hpp"

namespace jacksim {

enum class DistFamily { Exponential, Erlang, Deterministic, Lognormal, Uniform };

// Nonnegative scalar distribution with closed-form mean and variance.
// Sampling consumes a fixed, documented number of uniforms per draw for each
// family, so streams stay aligned across runs.
struct Distribution {
    DistFamily family = DistFamily::Deterministic;
    double p1 = 0.0;  // exponential: rate; erlang: rate; deterministic: value;
                      // lognormal: mu (log scale); uniform: lo
    double p2 = 0.0;  // erlang: shape (integer >= 1); lognormal: sigma; uniform: hi

    static Distribution exponential(double rate) { return {DistFamily::Exponential, rate, 0.0}; }
    static Distribution erlang(int shape, double rate) {
        return {DistFamily::Erlang, rate, static_cast<double>(shape)};
    }
    static Distribution deterministic(double value) { return {DistFamily::Deterministic, value, 0.0}; }
    static Distribution lognormal(double mu, double sigma) { return {DistFamily::Lognormal, mu, sigma}; }
    static Distribution uniform(double lo, double hi) { return {DistFamily::Uniform, lo, hi}; }

    double mean() const {
        switch (family) {
            case DistFamily::Exponential: return 1.0 / p1;
            case DistFamily::Erlang: return p2 / p1;
            case DistFamily::Deterministic: return p1;
            case DistFamily::Lognormal: return std::exp(p1 + 0.5 * p2 * p2);
            case DistFamily::Uniform: return 0.5 * (p1 + p2);
        }
        throw std::logic_error("bad distribution tag");
    }

    double variance() const {
        switch (family) {
            case DistFamily::Exponential: return 1.0 / (p1 * p1);
            case DistFamily::Erlang: return p2 / (p1 * p1);
            case DistFamily::Deterministic: return 0.0;
            case DistFamily::Lognormal: {
                double s2 = p2 * p2;
                return (std::exp(s2) - 1.0) * std::exp(2.0 * p1 + s2);
            }
            case DistFamily::Uniform: {
                double w = p2 - p1;
                return w * w / 12.0;
            }
        }
        throw std::logic_error("bad distribution tag");
    }

    double sample(Rng& rng) const {
        switch (family) {
            case DistFamily::Exponential:
                return -std::log(rng.uniform_pos()) / p1;
            case DistFamily::Erlang: {
                double sum = 0.0;
                for (int i = 0; i < static_cast<int>(p2); ++i) sum += -std::log(rng.uniform_pos());
                return sum / p1;
            }
            case DistFamily::Deterministic:
                return p1;
            case DistFamily::Lognormal: {
                // Box-Muller; exactly two uniforms per draw
                double u1 = rng.uniform_pos();
                double u2 = rng.uniform();
                double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
                return std::exp(p1 + p2 * z);
            }
            case DistFamily::Uniform:
                return p1 + (p2 - p1) * rng.uniform();
        }
        throw std::logic_error("bad distribution tag");
    }

    // Structural validity of the parameters themselves (not the declared-moment
    // cross-check, which lives in network validation).
    bool well_formed(std::string* why = nullptr) const {
        auto fail = [&](const char* msg) {
            if (why) *why = msg;
            return false;
        };
        switch (family) {
            case DistFamily::Exponential:
                if (!(p1 > 0.0)) return fail("exponential rate must be > 0");
                return true;
            case DistFamily::Erlang:
                if (!(p1 > 0.0)) return fail("erlang rate must be > 0");
                if (!(p2 >= 1.0) || p2 != std::floor(p2)) return fail("erlang shape must be integer >= 1");
                return true;
            case DistFamily::Deterministic:
                if (!(p1 >= 0.0)) return fail("deterministic value must be >= 0");
                return true;
            case DistFamily::Lognormal:
                if (!(p2 >= 0.0)) return fail("lognormal sigma must be >= 0");
                if (!std::isfinite(p1)) return fail("lognormal mu must be finite");
                return true;
            case DistFamily::Uniform:
                if (!(p1 >= 0.0) || !(p2 >= p1)) return fail("uniform needs 0 <= lo <= hi");
                return true;
        }
        return fail("unknown distribution tag");
    }
};

inline const char* dist_family_name(DistFamily f) {
    switch (f) {
        case DistFamily::Exponential: return "exponential";
        case DistFamily::Erlang: return "erlang";
        case DistFamily::Deterministic: return "deterministic";
        case DistFamily::Lognormal: return "lognormal";
        case DistFamily::Uniform: return "uniform";
    }
    return "?";
}

}  // namespace jacksim
