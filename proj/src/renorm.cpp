#include "wfren/renorm.hpp"

#include <cmath>
#include <stdexcept>

#include "wfren/stats.hpp"
#include "wfren/wf_core.hpp"

namespace wfren::renorm {

void CatalyticDiffusionMatrix::validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("CatalyticDiffusionMatrix: alpha must be positive");
    if (p.values().empty()) throw std::invalid_argument("CatalyticDiffusionMatrix: empty catalyzing function");
}

MigrationSchedule schedule_from_ck(const std::vector<double>& c, double beta) {
    for (double ck : c)
        if (!(ck > 0.0)) throw std::invalid_argument("schedule_from_ck: all c_k must be positive");
    if (!(beta > 0.0)) throw std::invalid_argument("schedule_from_ck: beta must be positive");

    MigrationSchedule sch;
    sch.c = c;
    sch.beta = beta;
    const std::size_t n = c.size();
    sch.s.resize(n + 1);
    sch.sbar.resize(n + 1);
    sch.s[0] = 0.0;
    sch.sbar[0] = beta;
    for (std::size_t k = 0; k < n; ++k) {
        sch.s[k + 1] = sch.s[k] + 1.0 / c[k];
        sch.sbar[k + 1] = beta + sch.s[k + 1];
    }
    sch.gamma.resize(n);
    double gamma_sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sch.gamma[k] = 1.0 / (sch.sbar[k] * c[k]);
        gamma_sum += sch.gamma[k];
    }

    // Numeric heuristics for conditions (i) sum gamma_n = inf and
    // (ii) gamma_n -> gamma*. Both are reported, never asserted.
    if (n >= 8) {
        const std::size_t h = n / 2;
        double head = 0.0, tail = 0.0;
        for (std::size_t k = 0; k < h; ++k) head += sch.gamma[k];
        for (std::size_t k = h; k < n; ++k) tail += sch.gamma[k];
        sch.sum_gamma_diverges = tail > 0.25 * head && gamma_sum > 1.0;
        const double g_last = sch.gamma[n - 1];
        const double g_prev = sch.gamma[n - 2];
        const double scale = std::max({std::fabs(g_last), std::fabs(g_prev), 1e-3});
        sch.gamma_stabilizes = std::fabs(g_last - g_prev) < 0.05 * scale;
        sch.gamma_star_estimate = g_last;
    } else if (n > 0) {
        sch.sum_gamma_diverges = gamma_sum > 1.0;
        sch.gamma_stabilizes = n >= 2 && std::fabs(sch.gamma[n - 1] - sch.gamma[n - 2]) <
                                              0.05 * std::max(sch.gamma[n - 1], 1e-3);
        sch.gamma_star_estimate = sch.gamma[n - 1];
    }
    return sch;
}

CatalyticDiffusionMatrix rescaled_F(double gamma, const CatalyticDiffusionMatrix& w,
                                    const McConfig& mc, StreamKey key) {
    w.validate();
    if (w.alpha != 1.0)
        throw std::invalid_argument("rescaled_F: requires alpha == 1 (use F_c for general alpha)");
    const ll::LogLaplaceEstimate est = ll::apply_U(gamma, w.p, mc, key.sub("rescaled_F"));
    return CatalyticDiffusionMatrix{1.0, est.as_function()};
}

CatalyticDiffusionMatrix F_c(const CatalyticDiffusionMatrix& w, double c, const McConfig& mc,
                             StreamKey key, ll::LogLaplaceEstimate* est_out) {
    w.validate();
    if (!(c > 0.0)) throw std::invalid_argument("F_c: c must be positive");
    const double alpha_new = 1.0 / (1.0 / w.alpha + 1.0 / c);
    std::vector<double> scaled = w.p.values();
    for (double& v : scaled) v /= w.alpha;
    const ll::LogLaplaceEstimate est =
        ll::apply_U(w.alpha / c, CatalyzingFunction(scaled), mc, key.sub("F_c"));
    if (est_out) *est_out = est;
    std::vector<double> pnew = est.value;
    for (double& v : pnew) v *= alpha_new;
    return CatalyticDiffusionMatrix{alpha_new, CatalyzingFunction(std::move(pnew))};
}

std::vector<CatalyticDiffusionMatrix> iterate_renorm(const CatalyticDiffusionMatrix& w,
                                                     const MigrationSchedule& schedule, int n_steps,
                                                     const McConfig& mc, StreamKey key) {
    w.validate();
    if (n_steps < 0 || static_cast<std::size_t>(n_steps) > schedule.c.size())
        throw std::invalid_argument("iterate_renorm: schedule shorter than requested step count");

    const MigrationSchedule sch = schedule_from_ck(schedule.c, 1.0 / w.alpha);
    std::vector<double> gammas(sch.gamma.begin(), sch.gamma.begin() + n_steps);

    std::vector<double> p0 = w.p.values();
    for (double& v : p0) v /= w.alpha;

    const auto stages = ll::iterate_U(gammas, CatalyzingFunction(std::move(p0)), mc, key.sub("iterate"));
    std::vector<CatalyticDiffusionMatrix> out;
    out.reserve(stages.size());
    for (const auto& st : stages) out.push_back(CatalyticDiffusionMatrix{1.0, st.p});
    return out;
}

std::vector<CatalyticDiffusionMatrix> iterate_renorm_unscaled(const CatalyticDiffusionMatrix& w,
                                                              const MigrationSchedule& schedule,
                                                              int n_steps, const McConfig& mc,
                                                              StreamKey key) {
    const MigrationSchedule sch = schedule_from_ck(schedule.c, 1.0 / w.alpha);
    const auto rescaled = iterate_renorm(w, schedule, n_steps, mc, key);
    std::vector<CatalyticDiffusionMatrix> out;
    out.reserve(rescaled.size() + 1);
    out.push_back(w);
    for (std::size_t k = 0; k < rescaled.size(); ++k) {
        const double sbar = sch.sbar[k + 1];
        std::vector<double> p = rescaled[k].p.values();
        for (double& v : p) v /= sbar;
        out.push_back(CatalyticDiffusionMatrix{1.0 / sbar, CatalyzingFunction(std::move(p))});
    }
    return out;
}

namespace {

struct PairAverages {
    double m1, m2, c11, c12, c22;
};

// Time averages of (y - x) and (y - x)(y - x)^T over one stationary segment
// of the 2D catalytic SDE with migration constant c and attraction (x1,x2).
PairAverages stationary_segment(double c, const CatalyticDiffusionMatrix& w, double x1, double x2,
                                const NuConfig& cfg, Rng& rng, double* terminal1 = nullptr,
                                double* terminal2 = nullptr) {
    const double gamma_cat = w.alpha / c;
    double y1 = (x1 == 0.0 || x1 == 1.0) ? x1 : rng.beta(x1 / gamma_cat, (1.0 - x1) / gamma_cat);
    double y2 = x2;

    const double dt = cfg.dt;
    const auto burn_steps = static_cast<long long>(cfg.burn_in_multiple / (c * dt));
    const auto avg_steps = static_cast<long long>(cfg.average_multiple / (c * dt));

    auto step = [&](double& a, double& b) {
        const double z1 = rng.normal();
        const double z2 = rng.normal();
        const double d1 = c * (x1 - a) * dt + std::sqrt(2.0 * w.alpha * a * (1.0 - a) * dt) * z1;
        const double d2 = c * (x2 - b) * dt + std::sqrt(2.0 * w.p(a) * b * (1.0 - b) * dt) * z2;
        a += d1;
        b += d2;
        a = std::min(1.0, std::max(0.0, a));
        b = std::min(1.0, std::max(0.0, b));
    };

    for (long long k = 0; k < burn_steps; ++k) step(y1, y2);
    PairAverages avg{0, 0, 0, 0, 0};
    for (long long k = 0; k < avg_steps; ++k) {
        step(y1, y2);
        const double d1 = y1 - x1;
        const double d2 = y2 - x2;
        avg.m1 += d1;
        avg.m2 += d2;
        avg.c11 += d1 * d1;
        avg.c12 += d1 * d2;
        avg.c22 += d2 * d2;
    }
    const double inv = 1.0 / static_cast<double>(avg_steps);
    avg.m1 *= inv;
    avg.m2 *= inv;
    avg.c11 *= inv;
    avg.c12 *= inv;
    avg.c22 *= inv;
    if (terminal1) *terminal1 = y1;
    if (terminal2) *terminal2 = y2;
    return avg;
}

}  // namespace

NuMoments estimate_nu_moments(double c, const CatalyticDiffusionMatrix& w, double x1, double x2,
                              const NuConfig& cfg, StreamKey key) {
    w.validate();
    if (!(c > 0.0)) throw std::invalid_argument("estimate_nu_moments: c must be positive");
    const StreamKey sub = key.sub("nu_moments");
    std::vector<PairAverages> results(cfg.replicas);
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < cfg.replicas; ++r) {
        Rng rng = sub.sub(static_cast<std::uint64_t>(r)).rng();
        results[r] = stationary_segment(c, w, x1, x2, cfg, rng);
    }
    MeanAcc m1, m2, c11, c12, c22;
    for (const auto& a : results) {
        m1.add(a.m1);
        m2.add(a.m2);
        c11.add(a.c11);
        c12.add(a.c12);
        c22.add(a.c22);
    }
    NuMoments out;
    out.mean = {m1.mean(), m2.mean()};
    out.mean_se = {m1.se(), m2.se()};
    out.cov = {c11.mean(), c12.mean(), c22.mean()};
    out.cov_se = {c11.se(), c12.se(), c22.se()};
    return out;
}

BoundaryPattern effective_boundary(const CatalyticDiffusionMatrix& w) {
    const auto [l, r] = w.p.boundary_class();
    if (l && r) return BoundaryPattern::four_corners;
    if (!l && r) return BoundaryPattern::left_edge;
    if (l && !r) return BoundaryPattern::right_edge;
    return BoundaryPattern::vertical_edges;
}

std::string to_string(BoundaryPattern pattern) {
    switch (pattern) {
        case BoundaryPattern::four_corners: return "four-corners";
        case BoundaryPattern::left_edge: return "left-edge-plus-corners";
        case BoundaryPattern::right_edge: return "right-edge-plus-corners";
        case BoundaryPattern::vertical_edges: return "both-vertical-edges";
    }
    return "?";
}

std::array<double, 2> iterated_kernel_sample(const std::vector<CatalyticDiffusionMatrix>& iterates,
                                             const MigrationSchedule& schedule, int n, double x1,
                                             double x2, const NuConfig& cfg, Rng& rng) {
    if (n < 0) throw std::invalid_argument("iterated_kernel_sample: negative n");
    if (static_cast<std::size_t>(n) > iterates.size() ||
        static_cast<std::size_t>(n) > schedule.c.size())
        throw std::invalid_argument("iterated_kernel_sample: not enough iterates for requested n");
    double z1 = x1;
    double z2 = x2;
    for (int k = n - 1; k >= 0; --k) {
        double t1, t2;
        stationary_segment(schedule.c[k], iterates[k], z1, z2, cfg, rng, &t1, &t2);
        z1 = t1;
        z2 = t2;
    }
    return {z1, z2};
}

}  // namespace wfren::renorm
