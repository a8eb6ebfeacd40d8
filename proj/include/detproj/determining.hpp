#pragma once

#include "detproj/gronwall.hpp"
#include "detproj/nse2d.hpp"
#include "detproj/szinterp.hpp"

namespace detproj::determining {

using gronwall::TimeSeries;
using spectral::Field;
using spectral::Grid;

/// Empirical constants of the N ~ h^{-d} relation for a refinement family:
/// c_lower <= N h^d / |Omega| <= c_upper across the levels.
struct MeshFamilyConstants {
    int dim = 2;
    double domain_measure = 0.0;
    double c_lower = 0.0;
    double c_upper = 0.0;
};

inline MeshFamilyConstants measure_family(const std::vector<mesh::SimplicialMesh>& levels) {
    require(!levels.empty(), "measure_family: need at least one level");
    MeshFamilyConstants fam;
    fam.dim = levels.front().dim;
    fam.domain_measure = levels.front().domain_measure;
    fam.c_lower = std::numeric_limits<double>::max();
    fam.c_upper = 0.0;
    for (const auto& m : levels) {
        require(m.dim == fam.dim, "measure_family: mixed dimensions");
        double c = mesh::metrics(m).c_lower;  // single-mesh value N h^d / |Omega|
        fam.c_lower = std::min(fam.c_lower, c);
        fam.c_upper = std::max(fam.c_upper, c);
    }
    return fam;
}

struct ThresholdResult {
    double n_threshold = 0.0;
    double h_threshold = 0.0;        // 0 when no mesh family was supplied
    double epsilon_quantity = 0.0;   // 3D only: inf_T limsup window avg of ||grad u||_inf
    double epsilon_inf = 0.0;        // nu * epsilon_quantity
};

/// 2D sufficient condition N^{2 gamma} > 8 C1^2 (F / nu^2)^2, solved for N.
/// With a mesh family, h_threshold is the diameter below which Eq-(3.1)-type
/// counting guarantees N >= n_threshold (using the family's lower constant).
inline ThresholdResult threshold_2d(double nu, double F, double gamma, double c1,
                                    const MeshFamilyConstants* family = nullptr) {
    require(nu > 0.0 && F > 0.0 && gamma > 0.0 && c1 > 0.0,
            "threshold_2d: inputs must be positive");
    ThresholdResult r;
    double ratio = F / (nu * nu);
    r.n_threshold = std::pow(8.0 * c1 * c1 * ratio * ratio, 1.0 / (2.0 * gamma));
    if (family) {
        require(family->dim == 2, "threshold_2d: mesh family must be 2D");
        r.h_threshold = std::pow(family->c_lower * family->domain_measure / r.n_threshold,
                                 1.0 / family->dim);
    }
    return r;
}

/// 3D sufficient condition N^{2 gamma} > (4 C1^2 / nu) * eps, where eps is
/// the finite-horizon proxy of inf_{T} limsup_t (1/T) int_t^{t+T}
/// ||grad u||_inf: a min over the supplied T grid of max tail-window
/// averages. Also reports eps_inf = nu * eps, the mean dissipation measure.
inline ThresholdResult threshold_3d(double nu, const TimeSeries& grad_linf_series,
                                    double gamma, double c1, const std::vector<double>& t_grid,
                                    double tail_fraction = 0.5,
                                    const MeshFamilyConstants* family = nullptr) {
    require(nu > 0.0 && gamma > 0.0 && c1 > 0.0, "threshold_3d: inputs must be positive");
    require(!t_grid.empty(), "threshold_3d: empty T grid");
    const std::size_t n = grad_linf_series.size();
    require(n >= 3, "threshold_3d: series too short");

    ThresholdResult r;
    r.epsilon_quantity = std::numeric_limits<double>::max();
    gronwall::detail::WindowAverager averager(grad_linf_series.values);
    for (double T : t_grid) {
        require(T > 0.0, "threshold_3d: window lengths must be positive");
        std::size_t w = std::max<std::size_t>(1, std::llround(T / grad_linf_series.stride));
        require(w + 1 <= n, "threshold_3d: series shorter than window");
        std::size_t tail_start =
            static_cast<std::size_t>(static_cast<double>(n - 1) * (1.0 - tail_fraction));
        tail_start = std::min(tail_start, n - 1 - w);
        double worst = 0.0;
        for (std::size_t i = tail_start; i + w < n; ++i)
            worst = std::max(worst, averager.average(i, w));
        r.epsilon_quantity = std::min(r.epsilon_quantity, worst);
    }
    r.epsilon_inf = nu * r.epsilon_quantity;
    r.n_threshold =
        std::pow(4.0 * c1 * c1 / nu * r.epsilon_quantity, 1.0 / (2.0 * gamma));
    if (family) {
        require(family->dim == 3, "threshold_3d: mesh family must be 3D");
        r.h_threshold = std::pow(family->c_lower * family->domain_measure / r.n_threshold,
                                 1.0 / family->dim);
    }
    return r;
}

/// Empirical approximation constant of ||u - I_h u||_{L2} <= C1 N^{-gamma} ||u||:
/// the max over a field corpus and mesh levels of error * N^gamma / ||u||,
/// with the V-norm (H1 seminorm) in the denominator as the proofs use it.
/// Fields whose interpolation error sits at the roundoff floor (linear and
/// constant modes) are excluded by an epsilon floor.
struct C1Estimate {
    double c1 = 0.0;
    int levels = 0;
    int corpus_size = 0;
    std::vector<double> per_level_max;
};

inline C1Estimate estimate_c1(const std::vector<mesh::SimplicialMesh>& levels,
                              const std::vector<Field>& corpus, double gamma,
                              int err_quad_degree = 5) {
    require(levels.size() >= 1, "estimate_c1: need at least one level");
    require(!corpus.empty(), "estimate_c1: empty corpus");
    C1Estimate est;
    est.levels = static_cast<int>(levels.size());
    est.corpus_size = static_cast<int>(corpus.size());
    for (const auto& m : levels) {
        sz::ScottZhangOperator op(m);
        double level_max = 0.0;
        const double ngamma = std::pow(static_cast<double>(m.n_vertices()), gamma);
        for (const Field& u : corpus) {
            spectral::PointEvaluator eval(u);
            double err_sq = 0.0;
            for (int c = 0; c < u.n_components(); ++c) {
                auto sampler = [&](const Vec3& x) { return eval(c, x); };
                auto coeffs = op.interpolate(sampler);
                double e = sz::l2_error(m, coeffs, sampler, err_quad_degree);
                err_sq += e * e;
            }
            double vnorm = forms::h1_seminorm(u);
            ensure(vnorm > 0.0, "estimate_c1: corpus field with zero V norm");
            double err = std::sqrt(err_sq);
            if (err * ngamma <= 1e-10 * vnorm) continue;  // roundoff-floor fields
            level_max = std::max(level_max, err * ngamma / vnorm);
        }
        est.per_level_max.push_back(level_max);
        est.c1 = std::max(est.c1, level_max);
    }
    ensure(est.c1 > 0.0, "estimate_c1: corpus produced no usable ratio");
    return est;
}

/// Twin-trajectory experiment: two solutions u, v under forcings f, g with
/// ||f - g||_{V'} -> 0, observed through the projection R_N = I_h on a
/// triangulation of the torus box. Records the norm series of w = u - v and
/// the alpha/beta coefficients exactly as the 2D decay argument builds them:
///     alpha = nu N^{2 gamma} / (2 C1^2) - (2/nu) ||u||^2
///     beta  = (2/nu) ||f-g||_{V'}^2 + (nu N^{2 gamma} / C1^2) ||R_N w||^2
struct TwinConfig {
    double nu = 1.0;
    int m = 64;
    double length = 2.0 * pi;
    double dt = 5e-3;
    double t_end = 20.0;
    double record_stride = 1e-2;
    double cfl = 0.4;
    nse::ForcingSpec forcing_u;        // f
    nse::ForcingSpec forcing_v;        // g
    nse::InitSpec init_u;
    std::string init_v_kind = "perturb";  // perturb | independent
    nse::InitSpec init_v;                 // used when independent
    double perturb_amplitude = 0.05;      // used when init_v_kind == perturb
    int perturb_band = 4;
    std::uint64_t seed = 1;
    int mesh_n = 8;
    double gamma = 0.5;
    double c1 = 0.0;  // <= 0: estimate from a corpus on the mesh family
    int c1_levels = 3;
    int c1_corpus = 10;
    int c1_band = 16;
};

struct TwinDiagnostics {
    std::vector<double> times;
    std::vector<double> w_l2sq;     // |w|^2
    std::vector<double> w_h1sq;     // ||w||^2
    std::vector<double> rnw_l2sq;   // ||R_N w||_{L2}^2 by FEM quadrature
    std::vector<double> u_h1sq;     // ||u||^2
    std::vector<double> grad_linf;  // ||grad u||_inf
    std::vector<double> fg_vprime;  // ||f - g||_{V'}
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> residual;   // d/dt |w|^2 + alpha |w|^2 - beta (central FD)
    double c1_used = 0.0;
    double gamma = 0.5;
    int n_vertices = 0;
    double nu = 0.0;
    double record_stride = 0.0;
};

/// C1 corpus: seeded divergence-free fields over a spread of bands so both
/// the smooth and the saturated interpolation regimes are represented.
inline std::vector<Field> c1_corpus(const Grid& g, int count, int band_max,
                                    std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Field> corpus;
    const int bands[4] = {2, 4, std::max(8, band_max / 2), band_max};
    for (int i = 0; i < count; ++i) {
        int band = std::min(bands[i % 4], g.dealias_cut());
        corpus.push_back(spectral::random_divfree(g, band, 1.0, rng));
    }
    return corpus;
}

inline TwinDiagnostics twin_experiment(const TwinConfig& cfg) {
    require(cfg.gamma > 0.0, "twin_experiment: gamma must be positive");
    Grid g{2, cfg.m, cfg.length};
    nse::Solver solver(g, cfg.nu, cfg.cfl);
    nse::Forcing forcing_f(g, cfg.forcing_u);
    nse::Forcing forcing_g(g, cfg.forcing_v);
    nse::ForcingFn ffn = [&](double t, Field& rhs) { forcing_f.add_to(rhs, t); };
    nse::ForcingFn gfn = [&](double t, Field& rhs) { forcing_g.add_to(rhs, t); };

    Field u = nse::initial_field(g, cfg.init_u, cfg.seed);
    Field v;
    if (cfg.init_v_kind == "perturb") {
        std::mt19937_64 rng(cfg.seed + 0x9e3779b97f4a7c15ull);
        v = u;
        if (cfg.perturb_amplitude != 0.0)
            v += spectral::random_divfree(g, cfg.perturb_band, cfg.perturb_amplitude, rng);
    } else {
        require(cfg.init_v_kind == "independent", "twin_experiment: bad init_v_kind");
        v = nse::initial_field(g, cfg.init_v, cfg.seed + 1);
    }

    // SZ projection on the box triangulation at the configured resolution
    auto box = mesh::build_box_mesh(2, {cfg.length, cfg.length, 0.0}, cfg.mesh_n);
    sz::ScottZhangOperator op(box);

    TwinDiagnostics diag;
    diag.gamma = cfg.gamma;
    diag.n_vertices = box.n_vertices();
    diag.nu = cfg.nu;
    double c1 = cfg.c1;
    if (c1 <= 0.0) {
        std::vector<mesh::SimplicialMesh> family{box};
        for (int l = 1; l < cfg.c1_levels; ++l) family.push_back(mesh::refine(family.back()));
        auto corpus = c1_corpus(g, cfg.c1_corpus, cfg.c1_band, cfg.seed + 7);
        c1 = estimate_c1(family, corpus, cfg.gamma).c1;
    }
    diag.c1_used = c1;

    const double n2g = std::pow(static_cast<double>(box.n_vertices()), 2.0 * cfg.gamma);
    const double alpha_const = cfg.nu * n2g / (2.0 * c1 * c1);

    auto record = [&](double t) {
        Field w = u - v;
        double wl2 = forms::l2_norm(w);
        double wh1 = forms::h1_seminorm(w);
        double uh1 = forms::h1_seminorm(u);
        diag.times.push_back(t);
        diag.w_l2sq.push_back(wl2 * wl2);
        diag.w_h1sq.push_back(wh1 * wh1);
        diag.u_h1sq.push_back(uh1 * uh1);
        diag.grad_linf.push_back(forms::grad_linf(u));

        spectral::PointEvaluator eval(w);
        double rnw_sq = 0.0;
        for (int c = 0; c < 2; ++c) {
            auto coeffs = op.interpolate([&](const Vec3& x) { return eval(c, x); });
            rnw_sq += sz::p1_l2_norm_sq(box, coeffs);
        }
        diag.rnw_l2sq.push_back(rnw_sq);

        Field fg = forcing_f.at(t) - forcing_g.at(t);
        double fg_vp = forms::l2_norm(fg) == 0.0 ? 0.0 : forms::vprime_norm(fg);
        diag.fg_vprime.push_back(fg_vp);

        diag.alpha.push_back(alpha_const - 2.0 / cfg.nu * uh1 * uh1);
        diag.beta.push_back(2.0 / cfg.nu * fg_vp * fg_vp + cfg.nu * n2g / (c1 * c1) * rnw_sq);
        ensure(std::isfinite(wl2), "twin_experiment: non-finite state at t = " + std::to_string(t));
    };

    const long n_steps = std::lround(cfg.t_end / cfg.dt);
    const long record_every = std::max<long>(1, std::lround(cfg.record_stride / cfg.dt));
    diag.record_stride = record_every * cfg.dt;
    record(0.0);
    for (long s = 1; s <= n_steps; ++s) {
        double t = (s - 1) * cfg.dt;
        solver.step(u, ffn, t, cfg.dt);   // lockstep: same times for both
        solver.step(v, gfn, t, cfg.dt);
        if (s % record_every == 0) record(s * cfg.dt);
    }

    // residual of d/dt |w|^2 + alpha |w|^2 <= beta, central differences inside
    const std::size_t n = diag.times.size();
    diag.residual.assign(n, 0.0);
    const double dr = diag.record_stride;
    for (std::size_t i = 0; i < n; ++i) {
        double dydt;
        if (i == 0)
            dydt = (-3.0 * diag.w_l2sq[0] + 4.0 * diag.w_l2sq[1] - diag.w_l2sq[2]) / (2.0 * dr);
        else if (i + 1 == n)
            dydt = (3.0 * diag.w_l2sq[n - 1] - 4.0 * diag.w_l2sq[n - 2] + diag.w_l2sq[n - 3]) /
                   (2.0 * dr);
        else
            dydt = (diag.w_l2sq[i + 1] - diag.w_l2sq[i - 1]) / (2.0 * dr);
        diag.residual[i] = dydt + diag.alpha[i] * diag.w_l2sq[i] - diag.beta[i];
    }
    return diag;
}

/// Sample-by-sample check of the proof's two pointwise inequalities.
struct DiffIneqReport {
    bool split_ok = false;      // |w|^2 <= 2 N^{-2g} C1^2 ||w||^2 + 2 ||R_N w||^2
    bool residual_ok = false;   // residual <= tol(t) = c * dt_record * scale(t)
    double split_worst_margin = 0.0;   // max over samples of lhs - rhs (<= 0 when ok)
    double residual_max = 0.0;
    double residual_tol_min = 0.0;
    std::size_t n_samples = 0;
};

struct ToleranceModel {
    double c = 10.0;  // residual slack in units of dt_record * scale(t)
};

inline DiffIneqReport verify_differential_inequality(const TwinDiagnostics& diag,
                                                     const ToleranceModel& tol = {}) {
    require(diag.record_stride <= 1e-2 + 1e-12,
            "verify_differential_inequality: record stride too coarse (need <= 1e-2)");
    const std::size_t n = diag.times.size();
    require(n >= 3, "verify_differential_inequality: too few samples");
    DiffIneqReport rep;
    rep.n_samples = n;
    rep.split_ok = true;
    rep.residual_ok = true;
    rep.split_worst_margin = -std::numeric_limits<double>::max();
    rep.residual_max = -std::numeric_limits<double>::max();
    rep.residual_tol_min = std::numeric_limits<double>::max();
    const double n2g = std::pow(static_cast<double>(diag.n_vertices), -2.0 * diag.gamma);
    for (std::size_t i = 0; i < n; ++i) {
        double rhs = 2.0 * n2g * diag.c1_used * diag.c1_used * diag.w_h1sq[i] +
                     2.0 * diag.rnw_l2sq[i];
        double margin = diag.w_l2sq[i] - rhs;
        rep.split_worst_margin = std::max(rep.split_worst_margin, margin);
        if (margin > 1e-9 * (diag.w_l2sq[i] + rhs)) rep.split_ok = false;

        double scale = diag.nu * diag.w_h1sq[i] + std::abs(diag.alpha[i]) * diag.w_l2sq[i] +
                       diag.beta[i];
        double tol_i = tol.c * diag.record_stride * scale;
        rep.residual_max = std::max(rep.residual_max, diag.residual[i]);
        rep.residual_tol_min = std::min(rep.residual_tol_min, tol_i);
        if (diag.residual[i] > tol_i) rep.residual_ok = false;
    }
    return rep;
}

}  // namespace detproj::determining
