#include "wfren/loglaplace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wfren/stats.hpp"
#include "wfren/wf_core.hpp"

namespace wfren::ll {

CatalyzingFunction::CatalyzingFunction(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) throw std::invalid_argument("CatalyzingFunction: need at least 2 nodes");
    for (double v : values_)
        if (!(v >= 0.0)) throw std::invalid_argument("CatalyzingFunction: values must be >= 0");
}

CatalyzingFunction CatalyzingFunction::constant(double value, int M) {
    return CatalyzingFunction(std::vector<double>(M + 1, value));
}

CatalyzingFunction CatalyzingFunction::from_function(const std::function<double(double)>& f, int M) {
    std::vector<double> v(M + 1);
    for (int i = 0; i <= M; ++i) v[i] = f(static_cast<double>(i) / M);
    return CatalyzingFunction(std::move(v));
}

CatalyzingFunction CatalyzingFunction::h11(int M) { return constant(1.0, M); }
CatalyzingFunction CatalyzingFunction::h00(int M) {
    return from_function([](double x) { return x * (1.0 - x); }, M);
}
CatalyzingFunction CatalyzingFunction::h1(int M) {
    return from_function([](double x) { return x; }, M);
}
CatalyzingFunction CatalyzingFunction::hm(int m, int M) {
    return from_function([m](double x) { return 1.0 - std::pow(1.0 - x, m); }, M);
}
CatalyzingFunction CatalyzingFunction::h01(int M) { return hm(7, M); }

double CatalyzingFunction::operator()(double x) const {
    const int M = this->M();
    if (x <= 0.0) return values_.front();
    if (x >= 1.0) return values_.back();
    const double pos = x * M;
    int i = static_cast<int>(pos);
    if (i >= M) i = M - 1;
    const double frac = pos - i;
    return values_[i] * (1.0 - frac) + values_[i + 1] * frac;
}

double CatalyzingFunction::max_slope() const {
    const int M = this->M();
    double worst = 0.0;
    for (int i = 0; i < M; ++i)
        worst = std::max(worst, std::fabs(values_[i + 1] - values_[i]) * M);
    return worst;
}

double CatalyzingFunction::sup_norm() const {
    double s = 0.0;
    for (double v : values_) s = std::max(s, std::fabs(v));
    return s;
}

double sup_distance(const CatalyzingFunction& a, const CatalyzingFunction& b) {
    if (a.M() == b.M()) {
        double d = 0.0;
        for (int i = 0; i <= a.M(); ++i) d = std::max(d, std::fabs(a.values()[i] - b.values()[i]));
        return d;
    }
    const int M = std::max(a.M(), b.M());
    double d = 0.0;
    for (int i = 0; i <= M; ++i) {
        const double x = static_cast<double>(i) / M;
        d = std::max(d, std::fabs(a(x) - b(x)));
    }
    return d;
}

ClusterSample sample_cluster(double gamma, double x, double dt, Rng& rng) {
    if (!(gamma > 0.0)) throw std::invalid_argument("sample_cluster: gamma must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("sample_cluster: dt must be positive");
    const double mass = rng.exponential(gamma);
    const double duration = 0.5 * mass;
    const auto n_steps = static_cast<std::size_t>(duration / dt);

    ClusterSample z;
    z.total_mass = mass;
    z.atoms.reserve(n_steps + 1);
    double y = rng.beta(x / gamma, (1.0 - x) / gamma);
    if (x == 0.0 || x == 1.0) y = x;
    for (std::size_t j = 0; j < n_steps; ++j) {
        z.atoms.emplace_back(y, 2.0 * dt);
        y = wf::euler_step(y, x, gamma, dt, rng.normal());
    }
    const double remainder = mass - 2.0 * dt * static_cast<double>(n_steps);
    if (remainder > 0.0) z.atoms.emplace_back(y, remainder);
    return z;
}

double cluster_integral(const ClusterSample& z, const CatalyzingFunction& p) {
    double s = 0.0;
    for (const auto& [pos, w] : z.atoms) s += w * p(pos);
    return s;
}

double LogLaplaceEstimate::max_se() const {
    double s = 0.0;
    for (double e : std_error) s = std::max(s, e);
    return s;
}

namespace {

PointEstimate node_estimate(double gamma, const CatalyzingFunction& p, double x,
                            const McConfig& mc, StreamKey node_key) {
    const double q = 1.0 / gamma + 1.0;
    MeanAcc acc;
    for (long long r = 0; r < mc.replicas; ++r) {
        Rng rng = node_key.sub(static_cast<std::uint64_t>(r)).rng();
        const ClusterSample z = sample_cluster(gamma, x, mc.dt, rng);
        acc.add(1.0 - std::exp(-cluster_integral(z, p)));
    }
    return PointEstimate{q * acc.mean(), q * acc.se(), mc.replicas};
}

LogLaplaceEstimate apply_U_impl(double gamma, const CatalyzingFunction& p, const McConfig& mc,
                                StreamKey key, int out_M, bool parallel) {
    if (out_M < 0) out_M = p.M();
    LogLaplaceEstimate est;
    est.value.resize(out_M + 1);
    est.std_error.resize(out_M + 1);
    est.replicas = mc.replicas;

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int i = 0; i <= out_M; ++i) {
        const double x = static_cast<double>(i) / out_M;
        const PointEstimate pe =
            node_estimate(gamma, p, x, mc, key.sub("node").sub(static_cast<std::uint64_t>(i)));
        est.value[i] = pe.value;
        est.std_error[i] = pe.std_error;
    }
    return est;
}

}  // namespace

PointEstimate apply_U_at(double gamma, const CatalyzingFunction& p, double x, const McConfig& mc,
                         StreamKey key) {
    return node_estimate(gamma, p, x, mc, key.sub("at"));
}

LogLaplaceEstimate apply_U(double gamma, const CatalyzingFunction& p, const McConfig& mc,
                           StreamKey key, int out_M) {
    return apply_U_impl(gamma, p, mc, key, out_M, true);
}

LogLaplaceEstimate apply_U_serial(double gamma, const CatalyzingFunction& p, const McConfig& mc,
                                  StreamKey key, int out_M) {
    return apply_U_impl(gamma, p, mc, key, out_M, false);
}

namespace {

PointEstimate dual_hm_impl(double gamma, int m, double x, long long replicas, StreamKey key,
                           bool parallel) {
    if (m < 1) throw std::invalid_argument("apply_U_dual_hm: m must be >= 1");
    std::vector<double> vals(replicas);
#pragma omp parallel for schedule(static) if (parallel)
    for (long long r = 0; r < replicas; ++r) {
        Rng rng = key.sub(static_cast<std::uint64_t>(r)).rng();
        const long long psi = wf::dual_chain_psi_infinity(m, gamma, true, rng);
        vals[r] = 1.0 - std::pow(1.0 - x, static_cast<double>(psi));
    }
    MeanAcc acc;
    for (double v : vals) acc.add(v);
    return PointEstimate{acc.mean(), acc.se(), replicas};
}

}  // namespace

PointEstimate apply_U_dual_hm(double gamma, int m, double x, long long replicas, StreamKey key) {
    return dual_hm_impl(gamma, m, x, replicas, key.sub("dual_hm"), true);
}

PointEstimate apply_U_dual_hm_serial(double gamma, int m, double x, long long replicas,
                                     StreamKey key) {
    return dual_hm_impl(gamma, m, x, replicas, key.sub("dual_hm"), false);
}

PointEstimate injected_chain_mean_psi(double gamma, int m, long long replicas, StreamKey key) {
    std::vector<double> vals(replicas);
    StreamKey sub = key.sub("mean_psi");
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < replicas; ++r) {
        Rng rng = sub.sub(static_cast<std::uint64_t>(r)).rng();
        vals[r] = static_cast<double>(wf::dual_chain_psi_infinity(m, gamma, true, rng));
    }
    MeanAcc acc;
    for (double v : vals) acc.add(v);
    return PointEstimate{acc.mean(), acc.se(), replicas};
}

std::vector<IterationStage> iterate_U(const std::vector<double>& gammas, CatalyzingFunction p,
                                      const McConfig& mc, StreamKey key) {
    for (double g : gammas)
        if (!(g > 0.0)) throw std::invalid_argument("iterate_U: all gammas must be positive");
    std::vector<IterationStage> stages;
    stages.reserve(gammas.size());
    for (std::size_t s = 0; s < gammas.size(); ++s) {
        LogLaplaceEstimate est =
            apply_U(gammas[s], p, mc, key.sub("stage").sub(static_cast<std::uint64_t>(s)));
        p = est.as_function();
        stages.push_back(IterationStage{p, std::move(est)});
    }
    return stages;
}

double chi_m(double gamma, int m) {
    if (m < 1) throw std::invalid_argument("chi_m: m must be >= 1");
    if (!(gamma >= 0.0)) throw std::invalid_argument("chi_m: gamma must be >= 0");
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += (1.0 + gamma) / (1.0 + i * gamma);
    return s / m;
}

double large_gamma_bound(double gamma, int m) {
    if (m < 1) throw std::invalid_argument("large_gamma_bound: m must be >= 1");
    double harmonic = 0.0;
    for (int k = 1; k <= m; ++k) harmonic += 1.0 / k;
    return (1.0 / gamma + 1.0) * harmonic + 1.5;
}

ShapeReport check_shape_preservation(double gamma, const CatalyzingFunction& p, bool concave,
                                     const McConfig& mc, StreamKey key) {
    const auto& v = p.values();
    const int M = p.M();
    for (int i = 0; i < M; ++i)
        if (v[i + 1] < v[i]) throw std::invalid_argument("check_shape_preservation: input not nondecreasing");
    if (concave) {
        for (int i = 1; i < M; ++i)
            if (v[i + 1] - 2.0 * v[i] + v[i - 1] > 1e-12)
                throw std::invalid_argument("check_shape_preservation: input not concave");
    }

    ShapeReport rep;
    rep.claimed_concave = concave;
    rep.estimate = apply_U(gamma, p, mc, key.sub("shape"));
    const auto& u = rep.estimate.value;
    const auto& se = rep.estimate.std_error;

    rep.monotone_ok = true;
    rep.worst_first_difference = 0.0;
    double noise = 0.0;
    for (int i = 0; i < M; ++i) {
        const double d = u[i + 1] - u[i];
        const double eps = 3.0 * std::sqrt(se[i] * se[i] + se[i + 1] * se[i + 1]);
        noise = std::max(noise, eps);
        rep.worst_first_difference = std::min(rep.worst_first_difference, d);
        if (d < -eps) rep.monotone_ok = false;
    }
    rep.concave_ok = true;
    if (concave) {
        for (int i = 1; i < M; ++i) {
            const double d2 = u[i + 1] - 2.0 * u[i] + u[i - 1];
            const double eps = 3.0 * std::sqrt(se[i - 1] * se[i - 1] + 4.0 * se[i] * se[i] +
                                               se[i + 1] * se[i + 1]);
            noise = std::max(noise, eps);
            rep.worst_second_difference = std::max(rep.worst_second_difference, d2);
            if (d2 > eps) rep.concave_ok = false;
        }
    }
    rep.noise_floor = noise;
    return rep;
}

}  // namespace wfren::ll
