#include "wfren/branching.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wfren/stats.hpp"
#include "wfren/wf_core.hpp"

namespace wfren::br {

AtomicMeasure step_poisson_cluster(const AtomicMeasure& x, double gamma, double dt, Rng& rng) {
    if (!(gamma > 0.0)) throw std::invalid_argument("step_poisson_cluster: gamma must be positive");
    const double q = 1.0 / gamma + 1.0;
    AtomicMeasure out;
    for (const auto& [pos, mass] : x.atoms) {
        const long long n_clusters = rng.poisson(q * mass);
        for (long long i = 0; i < n_clusters; ++i) {
            const ll::ClusterSample z = ll::sample_cluster(gamma, pos, dt, rng);
            out.atoms.insert(out.atoms.end(), z.atoms.begin(), z.atoms.end());
        }
    }
    return out;
}

std::vector<AtomicMeasure> run_renorm_branching(const std::vector<double>& gammas,
                                                const AtomicMeasure& start, double dt, Rng& rng,
                                                double mass_ceiling) {
    std::vector<AtomicMeasure> traj;
    traj.reserve(gammas.size() + 1);
    traj.push_back(start);
    for (std::size_t k = gammas.size(); k-- > 0;) {
        traj.push_back(step_poisson_cluster(traj.back(), gammas[k], dt, rng));
        const double m = traj.back().total_mass();
        if (m > mass_ceiling) {
            std::ostringstream os;
            os << "run_renorm_branching: population mass " << m << " exceeded ceiling "
               << mass_ceiling;
            throw NumericalGuardError(os.str());
        }
    }
    return traj;
}

ParticleConfiguration poissonize(const AtomicMeasure& x, const CatalyzingFunction& h, Rng& rng) {
    ParticleConfiguration out;
    for (const auto& [pos, mass] : x.atoms) {
        const long long n = rng.poisson(h(pos) * mass);
        for (long long i = 0; i < n; ++i) out.positions.push_back(pos);
    }
    return out;
}

namespace {

std::vector<double> thinned_cluster_positions(const ll::ClusterSample& z,
                                              const CatalyzingFunction& h, Rng& rng) {
    std::vector<double> pts;
    for (const auto& [pos, w] : z.atoms) {
        const long long n = rng.poisson(h(pos) * w);
        for (long long i = 0; i < n; ++i) pts.push_back(pos);
    }
    return pts;
}

}  // namespace

OffspringContext::OffspringContext(CatalyzingFunction h, double gamma, const McConfig& mc,
                                   StreamKey key)
    : h_(std::move(h)), gamma_(gamma), dt_(mc.dt), h_sup_(h_.sup_norm()) {
    uh_ = ll::apply_U(gamma_, h_, mc, key.sub("offspring_ctx"));
    uh_fn_ = uh_.as_function();
    // superharmonicity within statistical tolerance is a construction invariant
    for (std::size_t i = 0; i < uh_.value.size(); ++i) {
        const double hx = h_.values()[i];
        if (uh_.value[i] > hx + 3.0 * uh_.std_error[i] + 1e-12)
            throw std::invalid_argument(
                "OffspringContext: h is not U_gamma-superharmonic within tolerance");
        if (hx > 0.0)
            max_rel_se_ = std::max(max_rel_se_, uh_.std_error[i] / hx);
    }
}

double OffspringContext::emit_probability(double x) const {
    const double hx = h_(x);
    if (hx <= 0.0) throw std::invalid_argument("OffspringContext: h vanishes at requested point");
    return std::clamp(uh_fn_(x) / hx, 0.0, 1.0);
}

std::vector<double> OffspringContext::offspring(double x, Rng& rng) const {
    if (!rng.bernoulli(emit_probability(x))) return {};
    for (int attempt = 0; attempt < kMaxConditionAttempts; ++attempt) {
        const ll::ClusterSample z = ll::sample_cluster(gamma_, x, dt_, rng);
        std::vector<double> pts = thinned_cluster_positions(z, h_, rng);
        if (!pts.empty()) return pts;
    }
    throw NumericalGuardError("OffspringContext: conditioned-nonzero resampling cap reached");
}

long long run_embedded_h11(const std::vector<double>& gammas, double x, double dt, Rng& rng,
                           long long count_ceiling) {
    std::vector<double> particles{x};
    for (std::size_t k = gammas.size(); k-- > 0;) {
        const double gamma = gammas[k];
        std::vector<double> next;
        next.reserve(particles.size() * 2);
        for (double pos : particles) {
            // renewal positions of a stationary segment; k = 0 always included
            double y = (pos == 0.0 || pos == 1.0) ? pos
                                                  : rng.beta(pos / gamma, (1.0 - pos) / gamma);
            const double horizon = rng.exponential(0.5 * gamma);
            double t = 0.0;
            next.push_back(y);
            for (;;) {
                const double gap = rng.exponential(0.5);
                if (t + gap >= horizon) break;
                const auto steps = static_cast<long long>(std::llround(gap / dt));
                for (long long s = 0; s < steps; ++s)
                    y = wf::euler_step(y, pos, gamma, dt, rng.normal());
                t += gap;
                next.push_back(y);
            }
            if (static_cast<long long>(next.size()) > count_ceiling) return count_ceiling + 1;
        }
        particles.swap(next);
    }
    return static_cast<long long>(particles.size());
}

EmbeddedRunResult run_embedded_h00(const OffspringContext& ctx, int n_steps, double x, Rng& rng,
                                   long long count_ceiling) {
    if (!(x > 0.0 && x < 1.0))
        throw std::invalid_argument("run_embedded_h00: x must be strictly interior");
    EmbeddedRunResult res;
    std::vector<double> particles{x};
    for (int k = 0; k < n_steps; ++k) {
        std::vector<double> next;
        for (double pos : particles) {
            const auto kids = ctx.offspring(pos, rng);
            next.insert(next.end(), kids.begin(), kids.end());
            if (static_cast<long long>(next.size()) > count_ceiling) {
                res.hit_ceiling = true;
                res.final_count = static_cast<long long>(next.size());
                res.steps_done = k + 1;
                return res;
            }
        }
        particles.swap(next);
        res.steps_done = k + 1;
        if (particles.empty()) break;
    }
    res.final_count = static_cast<long long>(particles.size());
    res.extinct = particles.empty();
    return res;
}

H01RunResult run_embedded_h01(const OffspringContext& ctx, int n_steps, double x, Rng& rng,
                              long long count_ceiling, bool poisson_start) {
    if (!(ctx.h()(x) > 0.0)) throw std::invalid_argument("run_embedded_h01: h vanishes at x");
    H01RunResult res;
    std::vector<double> particles;
    if (poisson_start) {
        const long long n0 = rng.poisson(ctx.h()(x));
        particles.assign(static_cast<std::size_t>(n0), x);
    } else {
        particles.push_back(x);
    }
    for (int k = 0; k < n_steps; ++k) {
        if (particles.empty()) break;
        std::vector<double> next;
        for (double pos : particles) {
            const auto kids = ctx.offspring(pos, rng);
            next.insert(next.end(), kids.begin(), kids.end());
            if (static_cast<long long>(next.size()) > count_ceiling) {
                res.outcome = GrowthOutcome::grew_past_ceiling;
                res.final_count = static_cast<long long>(next.size());
                return res;
            }
        }
        particles.swap(next);
    }
    res.final_count = static_cast<long long>(particles.size());
    res.outcome = particles.empty() ? GrowthOutcome::extinct : GrowthOutcome::undecided;
    return res;
}

namespace {

// Autonomous total-mass chain of the h11-weighted process: positions do not
// enter because cluster masses are position-independent exponentials.
double run_h11_mass(const std::vector<double>& gammas, double start_mass, Rng& rng,
                    double mass_ceiling) {
    double mass = start_mass;
    for (std::size_t k = gammas.size(); k-- > 0;) {
        const double gamma = gammas[k];
        const double q = 1.0 / gamma + 1.0;
        const long long n = rng.poisson(q * mass);
        double next = 0.0;
        for (long long i = 0; i < n; ++i) next += rng.exponential(gamma);
        mass = next;
        if (mass >= mass_ceiling) return mass_ceiling;
        if (mass == 0.0) return 0.0;
    }
    return mass;
}

double run_weighted_mass(const std::vector<double>& gammas, double x, WeightChoice h, double dt,
                         Rng& rng, double mass_ceiling) {
    if (h == WeightChoice::h11) return run_h11_mass(gammas, 1.0, rng, mass_ceiling);
    const CatalyzingFunction hf =
        h == WeightChoice::h00 ? CatalyzingFunction::h00() : CatalyzingFunction::h01();
    AtomicMeasure state = AtomicMeasure::unit_at(x);
    for (std::size_t k = gammas.size(); k-- > 0;) {
        state = step_poisson_cluster(state, gammas[k], dt, rng);
        if (state.total_mass() >= mass_ceiling) return mass_ceiling;
        if (state.atoms.empty()) break;
    }
    double wm = 0.0;
    for (const auto& [pos, w] : state.atoms) wm += hf(pos) * w;
    return std::min(wm, mass_ceiling);
}

}  // namespace

MassStatistics weighted_mass_statistics(const std::vector<double>& gammas, double x,
                                        WeightChoice h, long long replicas, double dt,
                                        StreamKey key, double c_lo, double c_hi,
                                        double mass_ceiling) {
    MassStatistics out;
    out.final_masses.resize(replicas);
    const StreamKey sub = key.sub("weighted_mass");
#pragma omp parallel for schedule(dynamic)
    for (long long r = 0; r < replicas; ++r) {
        Rng rng = sub.sub(static_cast<std::uint64_t>(r)).rng();
        out.final_masses[r] = run_weighted_mass(gammas, x, h, dt, rng, mass_ceiling);
    }
    long long mid = 0, below = 0, above = 0;
    for (double m : out.final_masses) {
        if (m <= c_lo)
            ++below;
        else if (m >= c_hi)
            ++above;
        else
            ++mid;
    }
    const double n = static_cast<double>(replicas);
    out.middle_probability = mid / n;
    out.below_probability = below / n;
    out.above_probability = above / n;
    return out;
}

double immortal_chain_step(double v, double gamma_star, Rng& rng) {
    if (!(v > 0.0 && v < 1.0))
        throw std::invalid_argument("immortal_chain_step: v must be strictly interior");
    if (!(gamma_star > 0.0))
        throw std::invalid_argument("immortal_chain_step: gamma* must be positive");
    for (;;) {
        const double y = rng.beta(v / gamma_star, (1.0 - v) / gamma_star);
        if (rng.bernoulli(4.0 * y * (1.0 - y))) return y;
    }
}

namespace {

// Draw a cluster from the law of Z^g_x size-biased by <hZ,1>: propose from
// the mass-size-biased law (mass ~ Gamma(2, g)) and accept with probability
// <hZ,1> / (mass * sup h).
ll::ClusterSample biased_cluster(double gamma, double x, const CatalyzingFunction& h, double h_sup,
                                 double dt, Rng& rng) {
    for (;;) {
        const double mass = gamma * (rng.gamma(2.0));
        // stationary segment of duration mass/2, as in sample_cluster
        ll::ClusterSample z;
        z.total_mass = mass;
        const double duration = 0.5 * mass;
        const auto n_steps = static_cast<std::size_t>(duration / dt);
        double y = (x == 0.0 || x == 1.0) ? x : rng.beta(x / gamma, (1.0 - x) / gamma);
        z.atoms.reserve(n_steps + 1);
        for (std::size_t j = 0; j < n_steps; ++j) {
            z.atoms.emplace_back(y, 2.0 * dt);
            y = wf::euler_step(y, x, gamma, dt, rng.normal());
        }
        const double rem = mass - 2.0 * dt * static_cast<double>(n_steps);
        if (rem > 0.0) z.atoms.emplace_back(y, rem);

        double hz = 0.0;
        for (const auto& [pos, w] : z.atoms) hz += h(pos) * w;
        if (rng.bernoulli(hz / (mass * h_sup))) return z;
    }
}

double sample_position_weighted(const ll::ClusterSample& z, const CatalyzingFunction& h,
                                Rng& rng) {
    double total = 0.0;
    for (const auto& [pos, w] : z.atoms) total += h(pos) * w;
    double u = rng.uniform() * total;
    for (const auto& [pos, w] : z.atoms) {
        u -= h(pos) * w;
        if (u <= 0.0) return pos;
    }
    return z.atoms.back().first;
}

}  // namespace

ParticleConfiguration simulate_campbell_tree(int n, double x, double gamma_star,
                                             const OffspringContext& ctx, Rng& rng,
                                             std::vector<double>* spine_out) {
    if (n < 0) throw std::invalid_argument("simulate_campbell_tree: negative n");
    if (spine_out) spine_out->clear();

    std::vector<double> population;  // side particles, evolved forward step by step
    double v = x;
    for (int k = 1; k <= n; ++k) {
        // evolve the existing side families one step forward
        std::vector<double> next;
        for (double pos : population) {
            const auto kids = ctx.offspring(pos, rng);
            next.insert(next.end(), kids.begin(), kids.end());
        }
        population.swap(next);

        // Campbell step from the current spine position: size-biased cluster,
        // typical particle becomes the new spine, the Poissonized remainder
        // joins the side population.
        const ll::ClusterSample z =
            biased_cluster(gamma_star, v, ctx.h(), ctx.h_sup(), ctx.dt(), rng);
        const double v_next = sample_position_weighted(z, ctx.h(), rng);
        const std::vector<double> side = thinned_cluster_positions(z, ctx.h(), rng);
        population.insert(population.end(), side.begin(), side.end());
        v = v_next;
        if (spine_out) spine_out->push_back(v);
    }
    ParticleConfiguration out;
    out.positions = std::move(population);
    out.positions.push_back(v);  // the immortal particle itself
    return out;
}

}  // namespace wfren::br
