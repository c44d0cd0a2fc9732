#include "wfren/pde_flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wfren::pde {

GridField1D GridField1D::from_function(const std::function<double(double)>& f, int M) {
    GridField1D g(M);
    for (int i = 0; i <= M; ++i) g.v[i] = f(g.x_at(i));
    return g;
}

double sup_distance(const GridField1D& a, const GridField1D& b) {
    double d = 0.0;
    const int M = std::max(a.M, b.M);
    auto eval = [](const GridField1D& g, double x) {
        const double pos = x * g.M;
        int i = static_cast<int>(pos);
        if (i >= g.M) i = g.M - 1;
        const double f = pos - i;
        return g.v[i] * (1.0 - f) + g.v[i + 1] * f;
    };
    for (int i = 0; i <= M; ++i) {
        const double x = static_cast<double>(i) / M;
        d = std::max(d, std::fabs(eval(a, x) - eval(b, x)));
    }
    return d;
}

GridField2D GridField2D::from_functions(const std::function<double(double, double)>& f11,
                                        const std::function<double(double, double)>& f12,
                                        const std::function<double(double, double)>& f22, int M) {
    GridField2D g(M);
    for (int i = 0; i <= M; ++i)
        for (int j = 0; j <= M; ++j) {
            const double x1 = g.x1_at(i);
            const double x2 = g.x2_at(j);
            g.w11[g.idx(i, j)] = f11(x1, x2);
            g.w12[g.idx(i, j)] = f12(x1, x2);
            g.w22[g.idx(i, j)] = f22(x1, x2);
        }
    return g;
}

double GridField2D::sup_norm() const {
    double s = 0.0;
    for (std::size_t k = 0; k < w11.size(); ++k)
        s = std::max({s, std::fabs(w11[k]), std::fabs(w12[k]), std::fabs(w22[k])});
    return s;
}

double GridField2D::min_eigenvalue() const {
    double worst = 0.0;
    for (std::size_t k = 0; k < w11.size(); ++k) {
        const double tr = w11[k] + w22[k];
        const double det = w11[k] * w22[k] - w12[k] * w12[k];
        const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
        worst = std::min(worst, 0.5 * tr - disc);
    }
    return worst;
}

double sup_distance(const GridField2D& a, const GridField2D& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.w11.size(); ++k)
        d = std::max({d, std::fabs(a.w11[k] - b.w11[k]), std::fabs(a.w12[k] - b.w12[k]),
                      std::fabs(a.w22[k] - b.w22[k])});
    return d;
}

namespace {

// Second difference along rows (i direction); one-sided at the edges.
inline double d11(const std::vector<double>& u, int M, int i, int j) {
    const int n = M + 1;
    const double h2 = static_cast<double>(M) * M;
    if (i == 0) return (u[0 * n + j] - 2.0 * u[1 * n + j] + u[2 * n + j]) * h2;
    if (i == M) return (u[M * n + j] - 2.0 * u[(M - 1) * n + j] + u[(M - 2) * n + j]) * h2;
    return (u[(i - 1) * n + j] - 2.0 * u[i * n + j] + u[(i + 1) * n + j]) * h2;
}

inline double d22(const std::vector<double>& u, int M, int i, int j) {
    const int n = M + 1;
    const double h2 = static_cast<double>(M) * M;
    if (j == 0) return (u[i * n + 0] - 2.0 * u[i * n + 1] + u[i * n + 2]) * h2;
    if (j == M) return (u[i * n + M] - 2.0 * u[i * n + M - 1] + u[i * n + M - 2]) * h2;
    return (u[i * n + j - 1] - 2.0 * u[i * n + j] + u[i * n + j + 1]) * h2;
}

// First derivative in j, centered inside, one-sided at the edges.
inline double d2_first(const std::vector<double>& u, int M, int i, int j) {
    const int n = M + 1;
    const double h = static_cast<double>(M);
    if (j == 0) return (u[i * n + 1] - u[i * n + 0]) * h;
    if (j == M) return (u[i * n + M] - u[i * n + M - 1]) * h;
    return (u[i * n + j + 1] - u[i * n + j - 1]) * 0.5 * h;
}

inline double d12(const std::vector<double>& u, int M, int i, int j) {
    const double h = static_cast<double>(M);
    if (i == 0) return (d2_first(u, M, 1, j) - d2_first(u, M, 0, j)) * h;
    if (i == M) return (d2_first(u, M, M, j) - d2_first(u, M, M - 1, j)) * h;
    return (d2_first(u, M, i + 1, j) - d2_first(u, M, i - 1, j)) * 0.5 * h;
}

GridField1D default_p_star(int M);

FlowResult run_flow_impl(const GridField2D& w0, const FlowConfig& cfg,
                         const GridField1D* p_star_hint, bool parallel) {
    const int M = w0.M;
    FlowResult res;
    res.w = w0;
    GridField2D next(M);

    const double dx2 = 1.0 / (static_cast<double>(M) * M);
    long long step = 0;
    bool converged = false;
    double dt = cfg.cfl_safety * dx2 / std::max(res.w.sup_norm(), 0.25);
    while (step < cfg.max_steps) {
        if (step % 256 == 0) {
            const double sup = res.w.sup_norm();
            if (sup > cfg.blowup_ceiling) {
                std::ostringstream os;
                os << "run_flow_2d: blow-up, sup||w|| = " << sup << " after " << step << " steps";
                throw NumericalGuardError(os.str());
            }
            dt = cfg.cfl_safety * dx2 / std::max(sup, 0.25);
        }
        double max_rhs = 0.0;
        const auto& a = res.w;
#pragma omp parallel for schedule(static) reduction(max : max_rhs) if (parallel)
        for (int i = 0; i <= M; ++i) {
            for (int j = 0; j <= M; ++j) {
                const int k = a.idx(i, j);
                const double c11 = a.w11[k];
                const double c12 = a.w12[k];
                const double c22 = a.w22[k];
                const double r11 =
                    0.5 * (c11 * d11(a.w11, M, i, j) + 2.0 * c12 * d12(a.w11, M, i, j) +
                           c22 * d22(a.w11, M, i, j)) +
                    c11;
                const double r12 =
                    0.5 * (c11 * d11(a.w12, M, i, j) + 2.0 * c12 * d12(a.w12, M, i, j) +
                           c22 * d22(a.w12, M, i, j)) +
                    c12;
                const double r22 =
                    0.5 * (c11 * d11(a.w22, M, i, j) + 2.0 * c12 * d12(a.w22, M, i, j) +
                           c22 * d22(a.w22, M, i, j)) +
                    c22;
                next.w11[k] = c11 + dt * r11;
                next.w12[k] = c12 + dt * r12;
                next.w22[k] = c22 + dt * r22;
                max_rhs = std::max({max_rhs, std::fabs(r11), std::fabs(r12), std::fabs(r22)});
            }
        }
        std::swap(res.w.w11, next.w11);
        std::swap(res.w.w12, next.w12);
        std::swap(res.w.w22, next.w22);
        ++step;
        if (step % cfg.history_stride == 0 || max_rhs < cfg.residual_tol)
            res.residual_history.push_back(max_rhs);
        if (max_rhs < cfg.residual_tol) {
            converged = true;
            break;
        }
    }
    res.steps = step;
    res.converged = converged;

    // Classify the limit against the catalogued fixed-point patterns.
    GridField1D pstar;
    if (p_star_hint)
        pstar = *p_star_hint;
    else
        pstar = default_p_star(M);
    auto wf = [](double x) { return x * (1.0 - x); };
    const auto zero2 = [](double, double) { return 0.0; };
    struct Candidate {
        std::string name;
        GridField2D field;
    };
    std::vector<Candidate> candidates;
    candidates.push_back({"zero", GridField2D(M)});
    candidates.push_back({"case1:diag(x1(1-x1),x2(1-x2))",
                          GridField2D::from_functions([&](double x1, double) { return wf(x1); }, zero2,
                                                      [&](double, double x2) { return wf(x2); }, M)});
    candidates.push_back(
        {"case2:diag(x1(1-x1),p*(x1)x2(1-x2))",
         GridField2D::from_functions([&](double x1, double) { return wf(x1); }, zero2,
                                     [&](double x1, double x2) {
                                         const int i = static_cast<int>(std::lround(x1 * M));
                                         return pstar.v[i] * wf(x2);
                                     },
                                     M)});
    candidates.push_back(
        {"case2-mirrored:diag(x1(1-x1),p*(1-x1)x2(1-x2))",
         GridField2D::from_functions([&](double x1, double) { return wf(x1); }, zero2,
                                     [&](double x1, double x2) {
                                         const int i = static_cast<int>(std::lround((1.0 - x1) * M));
                                         return pstar.v[i] * wf(x2);
                                     },
                                     M)});
    candidates.push_back({"case4:diag(x1(1-x1),0)",
                          GridField2D::from_functions([&](double x1, double) { return wf(x1); }, zero2,
                                                      zero2, M)});
    candidates.push_back(
        {"case5:diag(x1(1-x1)1{x2>0},0)",
         GridField2D::from_functions(
             [&](double x1, double x2) { return x2 > 0.0 ? wf(x1) : 0.0; }, zero2, zero2, M)});
    res.pattern_distance = 1e300;
    for (const auto& cand : candidates) {
        const double d = sup_distance(res.w, cand.field);
        if (d < res.pattern_distance) {
            res.pattern_distance = d;
            res.pattern_match = cand.name;
        }
    }
    return res;
}

}  // namespace

FlowResult run_flow_2d(const GridField2D& w0, const FlowConfig& cfg,
                       const GridField1D* p_star_hint) {
    return run_flow_impl(w0, cfg, p_star_hint, true);
}

FlowResult run_flow_2d_serial(const GridField2D& w0, const FlowConfig& cfg,
                              const GridField1D* p_star_hint) {
    return run_flow_impl(w0, cfg, p_star_hint, false);
}

GridField1D run_cauchy_1d(const GridField1D& f, double horizon, const CauchyConfig& cfg) {
    for (double v : f.v)
        if (!(v >= 0.0)) throw std::invalid_argument("run_cauchy_1d: initial data must be >= 0");
    const int M = f.M;
    const double dx2 = 1.0 / (static_cast<double>(M) * M);
    const double dt_max = cfg.cfl_safety * dx2 / 0.125;  // max of (1/2)x(1-x) is 1/8
    const auto n_steps = static_cast<long long>(std::ceil(horizon / dt_max));
    const double dt = horizon > 0.0 ? horizon / static_cast<double>(n_steps) : 0.0;

    GridField1D u = f;
    GridField1D next(M);
    const double h2 = static_cast<double>(M) * M;
    const double decay = std::exp(-dt);
    for (long long s = 0; s < n_steps; ++s) {
        for (int i = 1; i < M; ++i) {
            const double x = u.x_at(i);
            const double upp = (u.v[i - 1] - 2.0 * u.v[i] + u.v[i + 1]) * h2;
            next.v[i] = u.v[i] + dt * (0.5 * x * (1.0 - x) * upp + u.v[i] * (1.0 - u.v[i]));
        }
        // endpoints: diffusion vanishes, step the logistic ODE exactly
        for (int i : {0, M}) {
            const double v = u.v[i];
            next.v[i] = v / (v + (1.0 - v) * decay);
        }
        std::swap(u.v, next.v);
        if (s % 512 == 0) {
            double sup = 0.0;
            for (double v : u.v) sup = std::max(sup, std::fabs(v));
            if (sup > cfg.blowup_ceiling)
                throw NumericalGuardError("run_cauchy_1d: blow-up detected");
        }
    }
    return u;
}

namespace {

// Thomas solve of a tridiagonal system; diag/sub/sup are overwritten.
void tridiag_solve(std::vector<double>& sub, std::vector<double>& diag, std::vector<double>& sup,
                   std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double m = sub[i] / diag[i - 1];
        diag[i] -= m * sup[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

double pstar_residual(const std::vector<double>& p, int M) {
    const double h2 = static_cast<double>(M) * M;
    double worst = 0.0;
    for (int i = 1; i < M; ++i) {
        const double x = static_cast<double>(i) / M;
        const double f =
            0.5 * x * (1.0 - x) * (p[i - 1] - 2.0 * p[i] + p[i + 1]) * h2 + p[i] * (1.0 - p[i]);
        worst = std::max(worst, std::fabs(f));
    }
    return worst;
}

GridField1D default_p_star(int M) {
    PStarResult r = solve_p_star(M);
    return r.p;
}

}  // namespace

PStarResult solve_p_star(int M, double residual_tol) {
    PStarResult out;
    out.p = GridField1D(M);
    std::vector<double> p(M + 1);
    for (int i = 0; i <= M; ++i) p[i] = static_cast<double>(i) / M;

    const double h2 = static_cast<double>(M) * M;
    const int n = M - 1;  // interior unknowns
    std::vector<double> sub(n), diag(n), sup(n), rhs(n);

    double res = pstar_residual(p, M);
    int it = 0;
    for (; it < 60 && res > residual_tol; ++it) {
        for (int i = 1; i < M; ++i) {
            const double x = static_cast<double>(i) / M;
            const double a = 0.5 * x * (1.0 - x) * h2;
            const int k = i - 1;
            sub[k] = a;
            sup[k] = a;
            diag[k] = -2.0 * a + 1.0 - 2.0 * p[i];
            rhs[k] = -(a * (p[i - 1] - 2.0 * p[i] + p[i + 1]) + p[i] * (1.0 - p[i]));
        }
        tridiag_solve(sub, diag, sup, rhs);
        double lambda = 1.0;
        std::vector<double> trial = p;
        for (int back = 0; back < 30; ++back) {
            for (int i = 1; i < M; ++i) trial[i] = p[i] + lambda * rhs[i - 1];
            if (pstar_residual(trial, M) < res) break;
            lambda *= 0.5;
        }
        p = trial;
        res = pstar_residual(p, M);
    }
    out.newton_iterations = it;
    out.newton_converged = res <= residual_tol;
    out.residual = res;

    if (!out.newton_converged) {
        out.used_fallback = true;
        GridField1D start = GridField1D::from_function(
            [](double x) { return 1.0 - std::pow(1.0 - x, 7); }, M);
        out.p = run_cauchy_1d(start, 60.0, CauchyConfig{});
        out.residual = pstar_residual(out.p.v, M);
        return out;
    }
    out.p.v = p;
    return out;
}

FixedPointReport verify_fixed_point(const renorm::CatalyticDiffusionMatrix& w_star,
                                    double gamma_star, const renorm::McConfig& mc, StreamKey key) {
    if (!(gamma_star > 0.0)) throw std::invalid_argument("verify_fixed_point: gamma* must be positive");
    ll::LogLaplaceEstimate est;
    renorm::CatalyticDiffusionMatrix mapped =
        renorm::F_c(w_star, 1.0 / gamma_star, mc, key.sub("fixed_point"), &est);

    FixedPointReport rep;
    const double scale = 1.0 + gamma_star;
    // catalyst factor: (1+g*) alpha' = alpha exactly by the closed reduction
    std::vector<double> mappedp = mapped.p.values();
    for (double& v : mappedp) v *= scale;
    ll::CatalyzingFunction scaled_p{std::move(mappedp)};
    rep.sup_residual = ll::sup_distance(scaled_p, w_star.p);
    rep.propagated_se = 0.0;
    for (double se : est.std_error)
        rep.propagated_se = std::max(rep.propagated_se, scale * mapped.alpha * se);
    rep.mapped = renorm::CatalyticDiffusionMatrix{scale * mapped.alpha, scaled_p};
    return rep;
}

}  // namespace wfren::pde
