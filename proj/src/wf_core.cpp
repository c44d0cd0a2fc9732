#include "wfren/wf_core.hpp"

#include <cmath>
#include <stdexcept>

namespace wfren::wf {

void WfParams::validate() const {
    if (!(attract_x >= 0.0 && attract_x <= 1.0))
        throw std::invalid_argument("WfParams: attract_x must lie in [0,1]");
    if (!(gamma > 0.0)) throw std::invalid_argument("WfParams: gamma must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("WfParams: dt must be positive");
}

void BetaInvariantLaw::validate() const {
    if (!(gamma > 0.0)) throw std::invalid_argument("BetaInvariantLaw: gamma must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("BetaInvariantLaw: x must lie in [0,1]");
}

WfPath simulate_wf_path(const WfParams& params, double y0, double horizon, Rng& rng) {
    params.validate();
    if (!(y0 >= 0.0 && y0 <= 1.0)) throw std::invalid_argument("simulate_wf_path: y0 must lie in [0,1]");
    if (horizon < 0.0) throw std::invalid_argument("simulate_wf_path: negative horizon");

    const auto n_steps = static_cast<std::size_t>(std::llround(horizon / params.dt));
    WfPath path;
    path.dt = params.dt;
    path.values.resize(n_steps + 1);
    double y = y0;
    path.values[0] = y;
    for (std::size_t k = 1; k <= n_steps; ++k) {
        y = euler_step(y, params.attract_x, params.gamma, params.dt, rng.normal());
        path.values[k] = y;
    }
    return path;
}

double sample_invariant(const BetaInvariantLaw& law, Rng& rng) {
    law.validate();
    if (law.x == 0.0 || law.x == 1.0) return law.x;
    return rng.beta(law.alpha1(), law.alpha2());
}

double invariant_moment(double gamma, double x, int n) {
    if (!(gamma > 0.0)) throw std::invalid_argument("invariant_moment: gamma must be positive");
    if (n < 0) throw std::invalid_argument("invariant_moment: negative order");
    double prod = 1.0;
    for (int k = 0; k < n; ++k) {
        const double kg = static_cast<double>(k) * gamma;
        prod *= (x + kg) / (1.0 + kg);
    }
    return prod;
}

CoupledPair couple_wf_pair(const WfParams& low, const WfParams& high, double y0_low,
                           double y0_high, double horizon, Rng& rng) {
    low.validate();
    high.validate();
    if (low.gamma != high.gamma || low.dt != high.dt)
        throw std::invalid_argument("couple_wf_pair: gamma and dt must be shared");
    if (low.attract_x > high.attract_x)
        throw std::invalid_argument("couple_wf_pair: attraction points must be ordered");
    if (y0_low > y0_high) throw std::invalid_argument("couple_wf_pair: initial points must be ordered");

    const auto n_steps = static_cast<std::size_t>(std::llround(horizon / low.dt));
    CoupledPair out;
    out.low.dt = out.high.dt = low.dt;
    out.low.values.resize(n_steps + 1);
    out.high.values.resize(n_steps + 1);
    double ylo = y0_low;
    double yhi = y0_high;
    out.low.values[0] = ylo;
    out.high.values[0] = yhi;
    long long violations = (ylo > yhi) ? 1 : 0;
    for (std::size_t k = 1; k <= n_steps; ++k) {
        const double z = rng.normal();
        ylo = euler_step(ylo, low.attract_x, low.gamma, low.dt, z);
        yhi = euler_step(yhi, high.attract_x, high.gamma, high.dt, z);
        out.low.values[k] = ylo;
        out.high.values[k] = yhi;
        if (ylo > yhi) ++violations;
    }
    out.ordering_violation_fraction =
        static_cast<double>(violations) / static_cast<double>(n_steps + 1);
    return out;
}

long long dual_chain_psi_infinity(int m, double gamma, bool with_injection, Rng& rng) {
    if (m < 0) throw std::invalid_argument("dual_chain_psi_infinity: negative m");
    if (!(gamma > 0.0)) throw std::invalid_argument("dual_chain_psi_infinity: gamma must be positive");

    long long phi = m;
    long long psi = 0;
    bool window_open = with_injection;
    for (;;) {
        if (phi == 0 && !window_open) break;
        const double phid = static_cast<double>(phi);
        const double rate_coal = phid * (phid - 1.0);
        const double rate_res = phid / gamma;
        const double rate_inj = window_open ? 2.0 : 0.0;
        const double rate_close = window_open ? 2.0 / gamma : 0.0;
        const double total = rate_coal + rate_res + rate_inj + rate_close;
        const double u = rng.uniform() * total;
        if (u < rate_coal) {
            --phi;
        } else if (u < rate_coal + rate_res) {
            --phi;
            ++psi;
        } else if (u < rate_coal + rate_res + rate_inj) {
            phi += m;
        } else {
            window_open = false;
        }
    }
    return psi;
}

}  // namespace wfren::wf
