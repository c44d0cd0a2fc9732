#pragma once

#include <map>
#include <vector>

#include "wfren/errors.hpp"
#include "wfren/loglaplace.hpp"
#include "wfren/rng.hpp"

namespace wfren::br {

using ll::CatalyzingFunction;
using ll::McConfig;

struct AtomicMeasure {
    std::vector<std::pair<double, double>> atoms;  // (position, weight > 0)

    double total_mass() const {
        double m = 0.0;
        for (const auto& [pos, w] : atoms) m += w;
        return m;
    }
    static AtomicMeasure unit_at(double x) { return AtomicMeasure{{{x, 1.0}}}; }
};

struct ParticleConfiguration {
    std::vector<double> positions;

    std::size_t count() const { return positions.size(); }
};

// One transition of the Poisson-cluster branching process: every atom (x,m)
// spawns Pois(q_gamma * m) independent clusters at parameter x.
AtomicMeasure step_poisson_cluster(const AtomicMeasure& x, double gamma, double dt, Rng& rng);

// Applies step_poisson_cluster with gamma_{n-1} down to gamma_0 (the last
// entry of `gammas` first); returns the trajectory including the start.
// Throws NumericalGuardError when the population mass passes mass_ceiling.
std::vector<AtomicMeasure> run_renorm_branching(const std::vector<double>& gammas,
                                                const AtomicMeasure& start, double dt, Rng& rng,
                                                double mass_ceiling = 1e4);

// Pois(h X): every atom (x,m) contributes Poisson(h(x) m) particles at x.
ParticleConfiguration poissonize(const AtomicMeasure& x, const CatalyzingFunction& h, Rng& rng);

// Offspring sampler of the h-Poissonized embedded particle system: with
// probability U_gamma h(x)/h(x), a Pois(h Z^gamma_x) cluster conditioned to
// be nonempty; otherwise no offspring. U_gamma h comes from a cached grid
// estimate whose standard error is reported alongside.
class OffspringContext {
  public:
    OffspringContext(CatalyzingFunction h, double gamma, const McConfig& mc, StreamKey key);

    std::vector<double> offspring(double x, Rng& rng) const;
    double emit_probability(double x) const;  // cached-estimate ratio, clamped to [0,1]

    const CatalyzingFunction& h() const { return h_; }
    double gamma() const { return gamma_; }
    double dt() const { return dt_; }
    double h_sup() const { return h_sup_; }
    const ll::LogLaplaceEstimate& cached_U() const { return uh_; }
    double max_relative_se() const { return max_rel_se_; }

  private:
    CatalyzingFunction h_;
    CatalyzingFunction uh_fn_;
    ll::LogLaplaceEstimate uh_;
    double gamma_;
    double dt_;
    double h_sup_;
    double max_rel_se_ = 0.0;

    static constexpr int kMaxConditionAttempts = 10000;
};

// h_{1,1}-embedded system: every particle emits the positions of a
// stationary segment at renewal times (the k = 0 renewal always included),
// so counts never decrease. Stops early once count exceeds the ceiling.
long long run_embedded_h11(const std::vector<double>& gammas, double x, double dt, Rng& rng,
                           long long count_ceiling = 10000);

struct EmbeddedRunResult {
    bool extinct = false;
    bool hit_ceiling = false;
    long long final_count = 0;
    int steps_done = 0;
};

EmbeddedRunResult run_embedded_h00(const OffspringContext& ctx, int n_steps, double x, Rng& rng,
                                   long long count_ceiling = 10000);

enum class GrowthOutcome { extinct, grew_past_ceiling, undecided };

struct H01RunResult {
    GrowthOutcome outcome = GrowthOutcome::undecided;
    long long final_count = 0;
};

// Same mechanism with h = h_m (default exponent 7). When poisson_start is
// set, the run begins from Pois(h(x)) particles at x (the Poissonization of
// delta_x) instead of a single particle.
H01RunResult run_embedded_h01(const OffspringContext& ctx, int n_steps, double x, Rng& rng,
                              long long count_ceiling = 10000, bool poisson_start = false);

struct MassStatistics {
    std::vector<double> final_masses;  // capped at mass_ceiling
    double middle_probability = 0.0;   // P[c < mass < C]
    double below_probability = 0.0;    // P[mass <= c]
    double above_probability = 0.0;    // P[mass >= C]
};

// Law of <X_0, h> for the weighted renormalization branching process started
// from delta_x, n steps. h must be one of h11 / h00 / h01; for h = h11 the
// autonomous total-mass chain is used, otherwise the measure-valued process
// is simulated with a mass ceiling (runs past it count as mass >= C).
enum class WeightChoice { h11, h00, h01 };
MassStatistics weighted_mass_statistics(const std::vector<double>& gammas, double x,
                                        WeightChoice h, long long replicas, double dt,
                                        StreamKey key, double c_lo = 0.1, double c_hi = 10.0,
                                        double mass_ceiling = 1e4);

// One step of the immortal-particle chain: density
// (1+g*) y(1-y)/(x(1-x)) against the Beta invariant law, via rejection.
double immortal_chain_step(double v, double gamma_star, Rng& rng);

// Size-biased population at time n plus a typical particle: an immortal
// spine with Campbell-law side offspring, each side family evolved forward
// with the h-embedded dynamics. Returns the full configuration at time n;
// spine_out (optional) receives the spine positions v_1..v_n.
ParticleConfiguration simulate_campbell_tree(int n, double x, double gamma_star,
                                             const OffspringContext& ctx, Rng& rng,
                                             std::vector<double>* spine_out = nullptr);

}  // namespace wfren::br
