#include "wfren/hierarchical.hpp"

#include <cmath>
#include <stdexcept>

#include "wfren/errors.hpp"
#include "wfren/wf_core.hpp"

namespace wfren::hier {

namespace {

long long ipow(int base, int exp) {
    long long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// Per-level block sums; level k holds sums over blocks of N^k sites.
struct BlockSums {
    std::vector<std::vector<std::array<double, 2>>> level;  // level[k][block]

    void compute(const LatticeState& s) {
        const int K = s.K;
        const int N = s.N;
        level.resize(K + 1);
        level[0].assign(s.site.begin(), s.site.end());
        for (int k = 1; k <= K; ++k) {
            const std::size_t blocks = level[k - 1].size() / N;
            level[k].assign(blocks, {0.0, 0.0});
            for (std::size_t b = 0; b < level[k - 1].size(); ++b) {
                level[k][b / N][0] += level[k - 1][b][0];
                level[k][b / N][1] += level[k - 1][b][1];
            }
        }
    }
};

}  // namespace

Trajectory simulate_hierarchical(int N, int K, const renorm::CatalyticDiffusionMatrix& w,
                                 const std::vector<double>& c, std::array<double, 2> theta,
                                 double horizon, const HierConfig& cfg, Rng& rng) {
    if (N < 2) throw std::invalid_argument("simulate_hierarchical: N must be >= 2");
    if (K < 1) throw std::invalid_argument("simulate_hierarchical: K must be >= 1");
    if (static_cast<int>(c.size()) < K)
        throw std::invalid_argument("simulate_hierarchical: need c_0..c_{K-1}");
    if (!(theta[0] >= 0.0 && theta[0] <= 1.0 && theta[1] >= 0.0 && theta[1] <= 1.0))
        throw std::invalid_argument("simulate_hierarchical: theta must lie in [0,1]^2");
    w.validate();
    const double dt = cfg.dt;
    double migration_scale = 0.0;
    for (int k = 0; k < K; ++k) migration_scale += c[k] / std::pow(N, k);
    if (migration_scale * dt > 0.5)
        throw NumericalGuardError("simulate_hierarchical: dt too large for migration rates");

    const long long n_sites = ipow(N, K);
    LatticeState state;
    state.N = N;
    state.K = K;
    state.site.assign(n_sites, theta);

    Trajectory traj;
    const auto n_steps = static_cast<long long>(std::llround(horizon / dt));
    const auto record_every =
        std::max<long long>(1, static_cast<long long>(std::llround(cfg.record_interval / dt)));
    traj.times.push_back(0.0);
    traj.states.push_back(state);

    BlockSums sums;
    std::vector<std::array<double, 2>> next(n_sites);
    std::vector<double> cscale(K);
    for (int k = 0; k < K; ++k) cscale[k] = c[k] / std::pow(N, k);

    for (long long step = 1; step <= n_steps; ++step) {
        sums.compute(state);
        for (long long s = 0; s < n_sites; ++s) {
            const double y1 = state.site[s][0];
            const double y2 = state.site[s][1];
            double drift1 = 0.0;
            double drift2 = 0.0;
            long long block = s;
            for (int k = 0; k < K; ++k) {
                block /= N;  // block of level k+1 containing s
                const double inv = 1.0 / static_cast<double>(ipow(N, k + 1));
                const double avg1 = sums.level[k + 1][block][0] * inv;
                const double avg2 = sums.level[k + 1][block][1] * inv;
                drift1 += cscale[k] * (avg1 - y1);
                drift2 += cscale[k] * (avg2 - y2);
            }
            double d1 = drift1 * dt;
            double d2 = drift2 * dt;
            if (!cfg.noise_off) {
                d1 += std::sqrt(2.0 * w.alpha * y1 * (1.0 - y1) * dt) * rng.normal();
                d2 += std::sqrt(2.0 * w.p(y1) * y2 * (1.0 - y2) * dt) * rng.normal();
            }
            next[s][0] = std::min(1.0, std::max(0.0, y1 + d1));
            next[s][1] = std::min(1.0, std::max(0.0, y2 + d2));
        }
        state.site.swap(next);
        if (step % record_every == 0 || step == n_steps) {
            traj.times.push_back(static_cast<double>(step) * dt);
            traj.states.push_back(state);
        }
    }
    return traj;
}

std::array<double, 2> block_average(const LatticeState& state, long long xi, int k) {
    if (k < 0 || k > state.K) throw std::out_of_range("block_average: level k out of range");
    if (xi < 0 || xi >= state.n_sites()) throw std::out_of_range("block_average: site out of range");
    const long long size = ipow(state.N, k);
    const long long begin = (xi / size) * size;
    std::array<double, 2> acc{0.0, 0.0};
    for (long long s = begin; s < begin + size; ++s) {
        acc[0] += state.site[s][0];
        acc[1] += state.site[s][1];
    }
    acc[0] /= static_cast<double>(size);
    acc[1] /= static_cast<double>(size);
    return acc;
}

std::vector<std::array<double, 2>> interaction_chain_extract(const LatticeState& state, int n) {
    if (n < 0 || n > state.K) throw std::out_of_range("interaction_chain_extract: n out of range");
    std::vector<std::array<double, 2>> chain;
    chain.reserve(n + 1);
    for (int k = n; k >= 0; --k) chain.push_back(block_average(state, 0, k));
    return chain;
}

RecurrenceReport recurrence_test(const std::vector<double>& c, int N) {
    RecurrenceReport rep;
    if (N < 2) throw std::invalid_argument("recurrence_test: N must be >= 2");
    const std::size_t n = c.size();
    if (n < 4) {
        rep.note = "too few migration constants";
        return rep;
    }
    // check numeric convergence of sum c_k / N^k
    double weighted = 0.0;
    for (std::size_t k = 0; k < n; ++k) weighted += c[k] / std::pow(N, k);
    const double tail = c[n - 1] / std::pow(N, n - 1);
    if (tail > 1e-3 * weighted && c[n - 1] / std::pow(N, n - 1) >= c[n - 2] / std::pow(N, n - 2)) {
        rep.note = "sum c_k/N^k does not converge numerically";
        return rep;
    }

    rep.d.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        double dk = 0.0;
        for (std::size_t m = k; m < n; ++m) dk += c[m] / std::pow(N, m - k);
        rep.d[k] = dk;
    }
    rep.partial_sums.resize(n);
    double ps = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        ps += 1.0 / rep.d[k];
        rep.partial_sums[k] = ps;
    }
    // heuristics on the tail (ignore the truncation-affected last entries)
    const std::size_t lo = n / 2;
    const std::size_t hi = (3 * n) / 4;
    const double ratio_tail = rep.d[hi] / rep.d[lo];
    const double growth = std::pow(ratio_tail, 1.0 / static_cast<double>(hi - lo));
    if (growth <= 1.02) {
        rep.classification = Recurrence::recurrent;  // 1/d_k bounded below
        rep.note = "d_k growth factor " + std::to_string(growth) + " <= 1: sum 1/d_k diverges";
    } else if (growth >= 1.1) {
        rep.classification = Recurrence::transient;
        rep.note = "d_k grows geometrically (factor " + std::to_string(growth) + ")";
    } else {
        rep.note = "growth factor " + std::to_string(growth) + " too close to 1 to classify";
    }
    return rep;
}

RecurrenceReport recurrence_test_geometric(double r, int N) {
    if (!(r > 0.0)) throw std::invalid_argument("recurrence_test_geometric: r must be positive");
    if (N < 2) throw std::invalid_argument("recurrence_test_geometric: N must be >= 2");
    RecurrenceReport rep;
    rep.used_closed_form = true;
    if (r >= N) {
        rep.note = "sum c_k/N^k diverges: model ill-posed for r >= N";
        return rep;
    }
    // d_k = r^k N/(N-r); sum 1/d_k is geometric with ratio 1/r
    rep.classification = r <= 1.0 ? Recurrence::recurrent : Recurrence::transient;
    rep.note = "closed form for c_k = r^k";
    const int terms = 16;
    rep.d.resize(terms);
    rep.partial_sums.resize(terms);
    double ps = 0.0;
    for (int k = 0; k < terms; ++k) {
        rep.d[k] = std::pow(r, k) * N / (N - r);
        ps += 1.0 / rep.d[k];
        rep.partial_sums[k] = ps;
    }
    return rep;
}

std::string to_string(Recurrence r) {
    switch (r) {
        case Recurrence::recurrent: return "recurrent";
        case Recurrence::transient: return "transient";
        case Recurrence::undetermined: return "undetermined";
    }
    return "?";
}

}  // namespace wfren::hier
