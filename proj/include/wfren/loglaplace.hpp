#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "wfren/rng.hpp"

namespace wfren::ll {

// Nonnegative function on [0,1], sampled on a uniform grid with M+1 nodes
// and evaluated by linear interpolation between nodes.
class CatalyzingFunction {
  public:
    CatalyzingFunction() = default;
    explicit CatalyzingFunction(std::vector<double> values);

    static CatalyzingFunction constant(double value, int M = 100);
    static CatalyzingFunction from_function(const std::function<double(double)>& f, int M = 100);
    // h_{1,1} = 1, h_{0,0} = x(1-x), h_1 = x, h_m = 1-(1-x)^m, h_{0,1} = h_7
    static CatalyzingFunction h11(int M = 100);
    static CatalyzingFunction h00(int M = 100);
    static CatalyzingFunction h1(int M = 100);
    static CatalyzingFunction hm(int m, int M = 100);
    static CatalyzingFunction h01(int M = 100);

    int M() const { return static_cast<int>(values_.size()) - 1; }
    double node_x(int i) const { return static_cast<double>(i) / M(); }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double operator()(double x) const;

    bool left_positive() const { return values_.front() > 0.0; }
    bool right_positive() const { return values_.back() > 0.0; }
    std::pair<int, int> boundary_class() const {
        return {left_positive() ? 1 : 0, right_positive() ? 1 : 0};
    }
    // max |p(x_{i+1})-p(x_i)| / dx, reported as a Lipschitz diagnostic
    double max_slope() const;
    double sup_norm() const;

  private:
    std::vector<double> values_;
};

double sup_distance(const CatalyzingFunction& a, const CatalyzingFunction& b);

// One cluster Z^gamma_x: total mass ~ Exp(mean gamma), atoms along a
// stationary Wright-Fisher segment of duration mass/2, each visited
// position carrying weight 2*dt (plus a remainder atom), so <Z,1> equals
// the exponential mass draw exactly.
struct ClusterSample {
    std::vector<std::pair<double, double>> atoms;  // (position, weight)
    double total_mass = 0.0;
};

ClusterSample sample_cluster(double gamma, double x, double dt, Rng& rng);

double cluster_integral(const ClusterSample& z, const CatalyzingFunction& p);

struct PointEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long long replicas = 0;
};

// Grid estimate of U_gamma p with per-node standard errors.
struct LogLaplaceEstimate {
    std::vector<double> value;
    std::vector<double> std_error;
    long long replicas = 0;

    CatalyzingFunction as_function() const { return CatalyzingFunction(value); }
    double max_se() const;
};

struct McConfig {
    long long replicas = 2000;
    double dt = 1e-3;
};

// Monte Carlo evaluation of U_gamma p(x) = (1/gamma+1) E[1-exp(-<Z,p>)] at a
// single point / at every grid node of `grid_of`. The *_serial variants are
// the plain reference implementations kept for testing; the unsuffixed ones
// run the node loop under OpenMP and produce bit-identical results.
PointEstimate apply_U_at(double gamma, const CatalyzingFunction& p, double x, const McConfig& mc,
                         StreamKey key);
LogLaplaceEstimate apply_U(double gamma, const CatalyzingFunction& p, const McConfig& mc,
                           StreamKey key, int out_M = -1);
LogLaplaceEstimate apply_U_serial(double gamma, const CatalyzingFunction& p, const McConfig& mc,
                                  StreamKey key, int out_M = -1);

// Dual-chain oracle for U_gamma h_m(x): mean of 1-(1-x)^{psi'_inf} over the
// injected coalescent chain. Independent of the cluster Monte Carlo path.
PointEstimate apply_U_dual_hm(double gamma, int m, double x, long long replicas, StreamKey key);
PointEstimate apply_U_dual_hm_serial(double gamma, int m, double x, long long replicas,
                                     StreamKey key);

// Mean of psi'_inf itself for the injected chain (used against the bounds).
PointEstimate injected_chain_mean_psi(double gamma, int m, long long replicas, StreamKey key);

struct IterationStage {
    CatalyzingFunction p;
    LogLaplaceEstimate estimate;
};

// U_{gamma_{n-1}} o ... o U_{gamma_0} p, stage by stage on the grid; the
// first schedule entry is applied first.
std::vector<IterationStage> iterate_U(const std::vector<double>& gammas, CatalyzingFunction p,
                                      const McConfig& mc, StreamKey key);

// chi_m(gamma) = (1/m) sum_{i<m} (1+gamma)/(1+i*gamma)
double chi_m(double gamma, int m);

// (1/gamma+1) * H_m + 3/2, an upper bound for E[psi'_inf] of the injected chain
double large_gamma_bound(double gamma, int m);

struct ShapeReport {
    bool claimed_concave = false;
    bool monotone_ok = false;
    bool concave_ok = false;
    double worst_first_difference = 0.0;   // most negative first difference found
    double worst_second_difference = 0.0;  // most positive second difference found
    double noise_floor = 0.0;              // 3x propagated SE
    LogLaplaceEstimate estimate;
};

// Checks that U_gamma preserves monotonicity (and concavity, for monotone
// concave input) up to Monte Carlo noise. Throws if the input is not of the
// claimed shape.
ShapeReport check_shape_preservation(double gamma, const CatalyzingFunction& p, bool concave,
                                     const McConfig& mc, StreamKey key);

}  // namespace wfren::ll
