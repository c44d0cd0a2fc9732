#pragma once

#include <vector>

#include "wfren/rng.hpp"

namespace wfren::wf {

struct WfParams {
    double attract_x;  // attraction point in [0,1]
    double gamma;      // inverse migration constant, c = 1/gamma
    double dt;         // Euler step

    void validate() const;
};

// Equally spaced path; times are k*dt for k = 0..values.size()-1.
struct WfPath {
    double dt = 0.0;
    std::vector<double> values;

    double time_at(std::size_t k) const { return dt * static_cast<double>(k); }
};

struct BetaInvariantLaw {
    double gamma;
    double x;

    double alpha1() const { return x / gamma; }
    double alpha2() const { return (1.0 - x) / gamma; }
    void validate() const;
};

// One explicit Euler-Maruyama step of dy = (1/gamma)(x-y)dt + sqrt(2y(1-y))dB,
// clamped to [0,1]. z is a standard normal draw.
inline double euler_step(double y, double x, double gamma, double dt, double z) {
    const double drift = (x - y) / gamma;
    const double diff2 = 2.0 * y * (1.0 - y);
    double ynew = y + drift * dt + std::sqrt(diff2 * dt) * z;
    if (ynew < 0.0) ynew = 0.0;
    if (ynew > 1.0) ynew = 1.0;
    return ynew;
}

WfPath simulate_wf_path(const WfParams& params, double y0, double horizon, Rng& rng);

double sample_invariant(const BetaInvariantLaw& law, Rng& rng);

// Product formula for the n-th moment of the invariant law; n = 0 gives 1.
double invariant_moment(double gamma, double x, int n);

struct CoupledPair {
    WfPath low;
    WfPath high;
    double ordering_violation_fraction = 0.0;  // fraction of grid times with low > high
};

// Both paths are driven by identical Brownian increments. Requires
// attract_x(low) <= attract_x(high), shared gamma and dt, y0_low <= y0_high.
CoupledPair couple_wf_pair(const WfParams& low, const WfParams& high, double y0_low,
                           double y0_high, double horizon, Rng& rng);

// Coalescent dual of the stationary diffusion: phi ancestors in the
// population coalesce pairwise at rate phi(phi-1) and jump to the reservoir
// at rate phi/gamma. With injection enabled, +m ancestors enter at renewal
// times with mean-1/2 gaps while an Exp(mean gamma/2) window is open; the
// walk ends when the window is shut (or absent) and phi = 0. Returns the
// number of reservoir ancestors psi_infinity.
long long dual_chain_psi_infinity(int m, double gamma, bool with_injection, Rng& rng);

}  // namespace wfren::wf
