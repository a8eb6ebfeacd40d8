#include <catch2/catch_amalgamated.hpp>

#include "detproj/determining.hpp"

using namespace detproj;
using determining::TwinConfig;
using gronwall::TimeSeries;

namespace {

TwinConfig small_laminar_config() {
    TwinConfig cfg;
    cfg.nu = 1.0;
    cfg.m = 32;
    cfg.dt = 5e-3;
    cfg.t_end = 10.0;
    cfg.record_stride = 1e-2;
    cfg.forcing_u = {"kolmogorov", 0.25, 2, 0.0, 1.0, 1};
    cfg.forcing_v = cfg.forcing_u;
    cfg.init_u = {"taylor_green", 0.3, 1, 4};
    cfg.init_v_kind = "perturb";
    cfg.perturb_amplitude = 0.05;
    cfg.perturb_band = 4;
    cfg.seed = 33;
    cfg.mesh_n = 4;
    cfg.gamma = 0.5;
    cfg.c1 = 0.0;
    cfg.c1_levels = 3;
    cfg.c1_corpus = 8;
    cfg.c1_band = 10;
    return cfg;
}

}  // namespace

TEST_CASE("2D threshold formula: pinned value and scalings") {
    auto unit = determining::threshold_2d(1.0, 1.0, 0.5, 1.0);
    CHECK_THAT(unit.n_threshold, Catch::Matchers::WithinRel(8.0, 1e-12));

    // doubling F quadruples N^{2 gamma}
    auto f2 = determining::threshold_2d(1.0, 2.0, 0.5, 1.0);
    CHECK_THAT(f2.n_threshold, Catch::Matchers::WithinRel(4.0 * unit.n_threshold, 1e-12));

    // N tracks Gr^2 at fixed lambda1 = 1: equal Grashof, equal threshold
    auto a = determining::threshold_2d(1.0, 1.0, 0.5, 1.0);
    auto b = determining::threshold_2d(0.5, 0.25, 0.5, 1.0);
    CHECK_THAT(forms::grashof(1.0, 1.0, 1.0),
               Catch::Matchers::WithinRel(forms::grashof(0.25, 1.0, 0.5), 1e-15));
    CHECK_THAT(a.n_threshold, Catch::Matchers::WithinRel(b.n_threshold, 1e-12));
    double gr = forms::grashof(3.0, 1.0, 0.7);
    auto c = determining::threshold_2d(0.7, 3.0, 0.5, 1.0);
    CHECK_THAT(c.n_threshold, Catch::Matchers::WithinRel(8.0 * gr * gr, 1e-12));

    CHECK_THROWS_AS(determining::threshold_2d(-1.0, 1.0, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(determining::threshold_2d(1.0, 0.0, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("3D threshold formula on constant and decaying series") {
    auto ones = TimeSeries::sample([](double) { return 1.0; }, 0.0, 1e-2, 2001);
    auto unit = determining::threshold_3d(1.0, ones, 1.0 / 3.0, 1.0, {1.0, 2.0, 4.0});
    CHECK_THAT(unit.n_threshold, Catch::Matchers::WithinRel(8.0, 1e-12));
    CHECK_THAT(unit.epsilon_quantity, Catch::Matchers::WithinAbs(1.0, 1e-13));
    CHECK_THAT(unit.epsilon_inf, Catch::Matchers::WithinAbs(1.0, 1e-13));

    // constant series: epsilon independent of the T grid
    auto one_window = determining::threshold_3d(1.0, ones, 1.0 / 3.0, 1.0, {3.0});
    CHECK_THAT(one_window.epsilon_quantity,
               Catch::Matchers::WithinAbs(unit.epsilon_quantity, 1e-13));

    // enlarging the T grid can only lower the epsilon proxy (inf over more T)
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.5, 2.0);
    auto noisy = TimeSeries::sample(
        [&](double t) { return 1.0 + 0.5 * std::sin(3.1 * t) + 0.1 * std::cos(17.0 * t); }, 0.0,
        5e-3, 8001);
    (void)uni;
    std::vector<double> grid;
    double prev = std::numeric_limits<double>::max();
    for (double T : {0.5, 1.0, 2.0, 4.0}) {
        grid.push_back(T);
        double eps = determining::threshold_3d(1.0, noisy, 1.0 / 3.0, 1.0, grid).epsilon_quantity;
        CHECK(eps <= prev + 1e-14);
        prev = eps;
    }

    // a decaying run's gradient series drives the threshold toward zero
    nse::SolverConfig dec;
    dec.nu = 0.5;
    dec.m = 32;
    dec.dt = 2e-3;
    dec.t_end = 16.0;
    dec.record_stride = 1e-2;
    dec.init = {"taylor_green", 1.0, 1, 4};
    auto rec = nse::simulate(dec);
    auto grads = TimeSeries::from_times(rec.times, rec.grad_linf);
    auto small = determining::threshold_3d(dec.nu, grads, 1.0 / 3.0, 1.0, {0.5, 1.0, 2.0});
    double peak = *std::max_element(rec.grad_linf.begin(), rec.grad_linf.end());
    CHECK(small.epsilon_quantity < 1e-3 * peak);
    CHECK(small.n_threshold < 1.0);

    CHECK_THROWS_AS(determining::threshold_3d(1.0, ones, 1.0 / 3.0, 1.0, {}),
                    std::invalid_argument);
}

TEST_CASE("mesh family constants and the threshold h are consistent") {
    std::vector<mesh::SimplicialMesh> family;
    family.push_back(mesh::build_box_mesh(2, {1.0, 1.0, 0.0}, 4));
    for (int l = 1; l < 4; ++l) family.push_back(mesh::refine(family.back()));
    auto fam = determining::measure_family(family);
    CHECK(fam.c_lower > 0.0);
    CHECK(fam.c_upper / fam.c_lower < 4.0);
    auto thr = determining::threshold_2d(1.0, 1.0, 0.5, 1.0, &fam);
    double consistency = thr.h_threshold * thr.h_threshold * thr.n_threshold /
                         fam.domain_measure;
    CHECK(consistency >= fam.c_lower * (1.0 - 1e-9));
    CHECK(consistency <= fam.c_upper * (1.0 + 1e-9));
}

TEST_CASE("C1 estimation is deterministic and level-wise non-increasing for smooth fields") {
    spectral::Grid g{2, 32, 2.0 * pi};
    std::vector<mesh::SimplicialMesh> family;
    family.push_back(mesh::build_box_mesh(2, {g.length, g.length, 0.0}, 4));
    for (int l = 1; l < 3; ++l) family.push_back(mesh::refine(family.back()));

    std::mt19937_64 rng(19);
    std::vector<spectral::Field> smooth_corpus;
    for (int i = 0; i < 4; ++i)
        smooth_corpus.push_back(spectral::random_divfree(g, 2, 1.0, rng));
    auto est = determining::estimate_c1(family, smooth_corpus, 0.5);
    REQUIRE(est.per_level_max.size() == 3);
    CHECK(est.per_level_max[1] <= est.per_level_max[0] * (1.0 + 0.05));
    CHECK(est.per_level_max[2] <= est.per_level_max[1] * (1.0 + 0.05));
    CHECK(est.c1 == est.per_level_max[0]);

    std::mt19937_64 rng2(19);
    std::vector<spectral::Field> same_corpus;
    for (int i = 0; i < 4; ++i) same_corpus.push_back(spectral::random_divfree(g, 2, 1.0, rng2));
    auto est2 = determining::estimate_c1(family, same_corpus, 0.5);
    CHECK(est.c1 == est2.c1);

    CHECK_THROWS_AS(determining::estimate_c1(family, {}, 0.5), std::invalid_argument);
}

TEST_CASE("identical twins stay identical") {
    auto cfg = small_laminar_config();
    cfg.perturb_amplitude = 0.0;  // v0 = u0 and f = g
    cfg.t_end = 1.0;
    cfg.c1 = 3.0;  // skip the corpus estimate
    auto diag = determining::twin_experiment(cfg);
    for (double v : diag.w_l2sq) CHECK(v == 0.0);
    for (double v : diag.rnw_l2sq) CHECK(v == 0.0);
    for (double v : diag.w_h1sq) CHECK(v == 0.0);
}

TEST_CASE("laminar twin: decay, split inequality, residual, and alpha assembly") {
    auto cfg = small_laminar_config();
    auto diag = determining::twin_experiment(cfg);

    double w0 = std::sqrt(diag.w_l2sq.front());
    double wT = std::sqrt(diag.w_l2sq.back());
    double r0 = std::sqrt(diag.rnw_l2sq.front());
    double rT = std::sqrt(diag.rnw_l2sq.back());
    CHECK(wT < 1e-3 * w0);
    CHECK(rT < 1e-3 * r0);

    auto rep = determining::verify_differential_inequality(diag);
    CHECK(rep.split_ok);
    CHECK(rep.residual_ok);

    // alpha and beta recompute exactly from their recorded ingredients
    const double n2g = std::pow(static_cast<double>(diag.n_vertices), 2.0 * diag.gamma);
    for (std::size_t i = 0; i < diag.times.size(); i += diag.times.size() / 10) {
        double alpha = cfg.nu * n2g / (2.0 * diag.c1_used * diag.c1_used) -
                       2.0 / cfg.nu * diag.u_h1sq[i];
        double beta = 2.0 / cfg.nu * diag.fg_vprime[i] * diag.fg_vprime[i] +
                      cfg.nu * n2g / (diag.c1_used * diag.c1_used) * diag.rnw_l2sq[i];
        CHECK_THAT(diag.alpha[i], Catch::Matchers::WithinRel(alpha, 1e-12));
        CHECK_THAT(diag.beta[i],
                   Catch::Matchers::WithinAbs(beta, 1e-12 * (1.0 + std::abs(beta))));
    }

    // Gronwall hypotheses hold along the assembled coefficients and the
    // conclusion |w| -> 0 follows on the same record
    auto alpha = TimeSeries::from_times(diag.times, diag.alpha);
    auto beta = TimeSeries::from_times(diag.times, diag.beta);
    auto hyp = gronwall::check_hypotheses(alpha, beta, 1.0 / cfg.nu);
    CHECK(hyp.hypotheses_met[0]);
    CHECK(hyp.hypotheses_met[1]);
    CHECK(hyp.hypotheses_met[2]);
    auto concl = gronwall::verify_conclusion(TimeSeries::from_times(diag.times, diag.w_l2sq),
                                             1.0 / cfg.nu, 1e-4);
    CHECK(concl.passed);
}

TEST_CASE("a crushed C1 makes the split inequality fail") {
    auto cfg = small_laminar_config();
    cfg.mesh_n = 2;  // N = 9: unresolved perturbation content
    cfg.perturb_band = 8;
    cfg.t_end = 2.0;
    cfg.c1 = 3.0;
    auto diag = determining::twin_experiment(cfg);
    auto ok = determining::verify_differential_inequality(diag);
    CHECK(ok.split_ok);

    auto crushed = diag;
    crushed.c1_used = 0.01 * diag.c1_used;
    auto bad = determining::verify_differential_inequality(crushed);
    CHECK_FALSE(bad.split_ok);
}

TEST_CASE("coarse projection mesh still sees laminar decay") {
    // the thresholds are sufficient conditions only: a projection mesh far
    // above them does not prevent synchronization in a laminar flow
    auto cfg = small_laminar_config();
    cfg.mesh_n = 2;
    cfg.t_end = 8.0;
    cfg.c1 = 3.0;
    auto diag = determining::twin_experiment(cfg);
    CHECK(std::sqrt(diag.w_l2sq.back()) < 1e-2 * std::sqrt(diag.w_l2sq.front()));
    CHECK(std::sqrt(diag.rnw_l2sq.back()) < 1e-2 * std::sqrt(diag.rnw_l2sq.front()));
}

TEST_CASE("determining implication holds across the shipped config matrix") {
    // whenever ||R_N w|| decays below tolerance and the assembled (alpha,
    // beta) satisfy the Gronwall hypotheses with T = rho^2 / nu, |w| decays
    // below tolerance as well
    std::vector<TwinConfig> matrix;
    matrix.push_back(small_laminar_config());
    {
        auto coarse = small_laminar_config();
        coarse.mesh_n = 2;
        matrix.push_back(coarse);
    }
    {
        auto pert = small_laminar_config();
        pert.forcing_v.perturb_amplitude = 0.1;
        pert.forcing_v.perturb_decay = 0.8;
        pert.forcing_v.perturb_k = 3;
        matrix.push_back(pert);
    }
    const double tol = 1e-3;
    for (auto& cfg : matrix) {
        cfg.c1 = 0.0;
        auto diag = determining::twin_experiment(cfg);
        bool rnw_decayed =
            std::sqrt(diag.rnw_l2sq.back()) <= tol * std::sqrt(diag.rnw_l2sq.front());
        auto alpha = TimeSeries::from_times(diag.times, diag.alpha);
        auto beta = TimeSeries::from_times(diag.times, diag.beta);
        auto hyp = gronwall::check_hypotheses(alpha, beta, 1.0 / cfg.nu);
        bool hyp_ok = hyp.hypotheses_met[0] && hyp.hypotheses_met[1] && hyp.hypotheses_met[2];
        bool w_decayed = std::sqrt(diag.w_l2sq.back()) <= tol * std::sqrt(diag.w_l2sq.front());
        INFO("mesh_n " << cfg.mesh_n << " C1 " << diag.c1_used << " hyp " << hyp_ok);
        CHECK((!(rnw_decayed && hyp_ok) || w_decayed));
    }
}

TEST_CASE("perturbed forcing pair still synchronizes") {
    auto cfg = small_laminar_config();
    cfg.forcing_v.perturb_amplitude = 0.1;
    cfg.forcing_v.perturb_decay = 0.8;
    cfg.forcing_v.perturb_k = 3;
    cfg.t_end = 12.0;
    cfg.c1 = 3.0;
    auto diag = determining::twin_experiment(cfg);
    CHECK(diag.fg_vprime.front() > 0.0);
    CHECK(diag.fg_vprime.back() < 1e-3 * diag.fg_vprime.front());
    CHECK(std::sqrt(diag.w_l2sq.back()) < 1e-3 * std::sqrt(diag.w_l2sq.front()));
    auto rep = determining::verify_differential_inequality(diag);
    CHECK(rep.split_ok);
    CHECK(rep.residual_ok);
}
