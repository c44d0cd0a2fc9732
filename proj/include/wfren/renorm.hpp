#pragma once

#include <array>
#include <string>
#include <vector>

#include "wfren/loglaplace.hpp"
#include "wfren/rng.hpp"

namespace wfren::renorm {

using ll::CatalyzingFunction;
using ll::McConfig;

// w^{alpha,p}(x) = diag(alpha x1(1-x1), p(x1) x2(1-x2))
struct CatalyticDiffusionMatrix {
    double alpha = 1.0;
    CatalyzingFunction p;

    void validate() const;
    double w11(double x1) const { return alpha * x1 * (1.0 - x1); }
    double w22(double x1, double x2) const { return p(x1) * x2 * (1.0 - x2); }
};

struct MigrationSchedule {
    std::vector<double> c;      // migration constants c_k
    double beta = 1.0;          // offset in sbar_n = beta + s_n
    std::vector<double> s;      // s_n = sum_{k<n} 1/c_k, n = 0..c.size()
    std::vector<double> sbar;   // beta + s_n
    std::vector<double> gamma;  // gamma_n = 1/(sbar_n c_n), n = 0..c.size()-1

    bool sum_gamma_diverges = false;  // numeric flag for sum gamma_n = inf
    bool gamma_stabilizes = false;    // numeric flag for gamma_n -> gamma*
    double gamma_star_estimate = 0.0;
};

MigrationSchedule schedule_from_ck(const std::vector<double>& c, double beta);

// Rescaled transformation: w^{1,p} -> w^{1, U_gamma p}. Requires alpha == 1.
CatalyticDiffusionMatrix rescaled_F(double gamma, const CatalyticDiffusionMatrix& w,
                                    const McConfig& mc, StreamKey key);

// F_c w^{alpha,p} = w^{alpha', alpha' U_{alpha/c}(p/alpha)} with
// alpha' = (1/alpha + 1/c)^{-1}. If est_out is non-null it receives the raw
// U estimate (with standard errors) before the alpha' scaling.
CatalyticDiffusionMatrix F_c(const CatalyticDiffusionMatrix& w, double c, const McConfig& mc,
                             StreamKey key, ll::LogLaplaceEstimate* est_out = nullptr);

// Rescaled iterates sbar_n F^{(n)} w, n = 1..n_steps, via the iterated
// log-Laplace operators with beta = 1/alpha.
std::vector<CatalyticDiffusionMatrix> iterate_renorm(const CatalyticDiffusionMatrix& w,
                                                     const MigrationSchedule& schedule, int n_steps,
                                                     const McConfig& mc, StreamKey key);

// Un-rescaled iterates F^{(k)} w, k = 0..n_steps (k = 0 is w itself).
std::vector<CatalyticDiffusionMatrix> iterate_renorm_unscaled(const CatalyticDiffusionMatrix& w,
                                                              const MigrationSchedule& schedule,
                                                              int n_steps, const McConfig& mc,
                                                              StreamKey key);

struct NuConfig {
    double dt = 1e-3;
    double burn_in_multiple = 10.0;  // reactant burn-in, in units of 1/c
    double average_multiple = 10.0;  // averaging window, in units of 1/c
    long long replicas = 1000;
};

struct NuMoments {
    std::array<double, 2> mean{};     // estimates of int nu(dy) (y - x)
    std::array<double, 2> mean_se{};
    std::array<double, 3> cov{};      // (1,1), (1,2), (2,2) entries of int nu(dy)(y-x)(y-x)^T
    std::array<double, 3> cov_se{};
};

NuMoments estimate_nu_moments(double c, const CatalyticDiffusionMatrix& w, double x1, double x2,
                              const NuConfig& cfg, StreamKey key);

enum class BoundaryPattern {
    four_corners,     // p > 0 at both endpoints
    left_edge,        // p(0) = 0, p(1) > 0: left edge plus corners
    right_edge,       // p(0) > 0, p(1) = 0: right edge plus corners
    vertical_edges,   // p = 0 at both endpoints: both vertical edges
};

BoundaryPattern effective_boundary(const CatalyticDiffusionMatrix& w);
std::string to_string(BoundaryPattern pattern);

// One draw from the iterated probability kernel K^{w,(n)}_x. `iterates`
// must hold the un-rescaled F^{(k)} w for k = 0..n-1.
std::array<double, 2> iterated_kernel_sample(const std::vector<CatalyticDiffusionMatrix>& iterates,
                                             const MigrationSchedule& schedule, int n, double x1,
                                             double x2, const NuConfig& cfg, Rng& rng);

}  // namespace wfren::renorm
