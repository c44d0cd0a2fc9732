#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wfren/errors.hpp"
#include "wfren/renorm.hpp"
#include "wfren/rng.hpp"

namespace wfren::pde {

struct GridField1D {
    int M = 0;
    std::vector<double> v;  // M+1 nodes on [0,1]

    GridField1D() = default;
    explicit GridField1D(int M_) : M(M_), v(M_ + 1, 0.0) {}
    double x_at(int i) const { return static_cast<double>(i) / M; }
    static GridField1D from_function(const std::function<double(double)>& f, int M);
};

double sup_distance(const GridField1D& a, const GridField1D& b);

// Symmetric 2x2 matrix field on a uniform (M+1)x(M+1) grid over [0,1]^2.
struct GridField2D {
    int M = 0;
    std::vector<double> w11, w12, w22;

    GridField2D() = default;
    explicit GridField2D(int M_)
        : M(M_), w11((M_ + 1) * (M_ + 1), 0.0), w12(w11.size(), 0.0), w22(w11.size(), 0.0) {}
    int idx(int i, int j) const { return i * (M + 1) + j; }
    double x1_at(int i) const { return static_cast<double>(i) / M; }
    double x2_at(int j) const { return static_cast<double>(j) / M; }
    static GridField2D from_functions(const std::function<double(double, double)>& f11,
                                      const std::function<double(double, double)>& f12,
                                      const std::function<double(double, double)>& f22, int M);
    double sup_norm() const;
    // most negative eigenvalue over all nodes (0 if nonnegative definite)
    double min_eigenvalue() const;
};

double sup_distance(const GridField2D& a, const GridField2D& b);

struct FlowConfig {
    double cfl_safety = 0.25;     // dt = cfl_safety * dx^2 / max||w||
    double residual_tol = 1e-7;   // sup-norm of the discrete time derivative
    long long max_steps = 400000;
    double blowup_ceiling = 16.0;
    int history_stride = 200;     // residual-history sampling interval
};

struct FlowResult {
    GridField2D w;
    std::vector<double> residual_history;
    long long steps = 0;
    bool converged = false;
    std::string pattern_match;   // closest Figure-style fixed-point pattern
    double pattern_distance = 0.0;
};

// Explicit time stepping of dw/dt = 1/2 sum_ij w_ij d_i d_j w + w with
// centered second differences inside and one-sided ones on the edges.
// The *_serial variant is the reference kept for testing; the unsuffixed
// one parallelizes rows with OpenMP and is bit-identical to it.
FlowResult run_flow_2d(const GridField2D& w0, const FlowConfig& cfg,
                       const GridField1D* p_star_hint = nullptr);
FlowResult run_flow_2d_serial(const GridField2D& w0, const FlowConfig& cfg,
                              const GridField1D* p_star_hint = nullptr);

struct CauchyConfig {
    double cfl_safety = 0.25;
    double blowup_ceiling = 16.0;
};

// Explicit stepping of du/dt = 1/2 x(1-x) u'' + u(1-u); the boundary nodes
// follow the logistic ODE exactly.
GridField1D run_cauchy_1d(const GridField1D& f, double horizon, const CauchyConfig& cfg);

struct PStarResult {
    GridField1D p;
    double residual = 0.0;
    int newton_iterations = 0;
    bool newton_converged = false;
    bool used_fallback = false;
};

// Damped Newton for 1/2 x(1-x) p'' + p(1-p) = 0, p(0)=0, p(1)=1, started
// from p(x)=x; falls back to a long run of the Cauchy flow on failure.
PStarResult solve_p_star(int M, double residual_tol = 1e-8);

struct FixedPointReport {
    double sup_residual = 0.0;       // sup |(1+g*) F_{1/g*} w* - w*|
    double propagated_se = 0.0;      // 3 x max MC standard error, scaled
    renorm::CatalyticDiffusionMatrix mapped;
};

FixedPointReport verify_fixed_point(const renorm::CatalyticDiffusionMatrix& w_star,
                                    double gamma_star, const renorm::McConfig& mc, StreamKey key);

}  // namespace wfren::pde
