// Command-line front end: one subcommand per module plus the pipeline
// bundles. Exit codes: 0 pass, 1 criterion failure, 2 usage/config error.

#include <CLI11.hpp>

#include <atomic>
#include <iostream>
#include <thread>

#include "detproj/pipelines.hpp"

namespace hn = detproj::harness;
using detproj::pipelines::fmt;

namespace {

hn::ConfigSchema simulate_schema() {
    hn::ConfigSchema s;
    s.add("nu", hn::KeyType::Double, "0.1", "kinematic viscosity")
        .add("M", hn::KeyType::Int, "64", "grid points per axis")
        .add("dt", hn::KeyType::Double, "1e-3", "time step")
        .add("t_end", hn::KeyType::Double, "1.0", "final time")
        .add("record_stride", hn::KeyType::Double, "1e-2", "record interval")
        .add("length", hn::KeyType::Double, "6.2831853071795864769", "torus edge length")
        .add("cfl", hn::KeyType::Double, "0.4", "CFL constant for the step guard")
        .add("seed", hn::KeyType::Uint64, "0", "RNG seed for random initial data")
        .add("forcing.kind", hn::KeyType::String, "none", "none | kolmogorov")
        .add("forcing.amplitude", hn::KeyType::Double, "0", "forcing amplitude")
        .add("forcing.k", hn::KeyType::Int, "1", "forcing wavenumber")
        .add("forcing.perturb_amplitude", hn::KeyType::Double, "0", "decaying perturbation amp")
        .add("forcing.perturb_decay", hn::KeyType::Double, "1", "perturbation decay rate")
        .add("forcing.perturb_k", hn::KeyType::Int, "1", "perturbation wavenumber")
        .add("init.kind", hn::KeyType::String, "taylor_green",
             "taylor_green | single_mode | random | zero")
        .add("init.amplitude", hn::KeyType::Double, "1.0", "initial amplitude")
        .add("init.k", hn::KeyType::Int, "1", "single_mode wavenumber")
        .add("init.band", hn::KeyType::Int, "4", "random band limit")
        .add("checkpoint_stride", hn::KeyType::Double, "0", "checkpoint interval (0 = off)");
    return s;
}

detproj::nse::SolverConfig solver_config_from(const hn::RunConfig& cfg) {
    detproj::nse::SolverConfig sc;
    sc.nu = cfg.get_double("nu");
    sc.m = cfg.get_int("M");
    sc.dt = cfg.get_double("dt");
    sc.t_end = cfg.get_double("t_end");
    sc.record_stride = cfg.get_double("record_stride");
    sc.length = cfg.get_double("length");
    sc.cfl = cfg.get_double("cfl");
    sc.seed = cfg.get_u64("seed");
    sc.forcing = {cfg.get_string("forcing.kind"), cfg.get_double("forcing.amplitude"),
                  cfg.get_int("forcing.k"), cfg.get_double("forcing.perturb_amplitude"),
                  cfg.get_double("forcing.perturb_decay"), cfg.get_int("forcing.perturb_k")};
    sc.init = {cfg.get_string("init.kind"), cfg.get_double("init.amplitude"),
               cfg.get_int("init.k"), cfg.get_int("init.band")};
    sc.checkpoint_stride = cfg.get_double("checkpoint_stride");
    return sc;
}

hn::ConfigSchema twin_schema() {
    hn::ConfigSchema s;
    s.add("nu", hn::KeyType::Double, "1.0", "kinematic viscosity")
        .add("M", hn::KeyType::Int, "64", "grid points per axis")
        .add("dt", hn::KeyType::Double, "5e-3", "time step")
        .add("t_end", hn::KeyType::Double, "24.0", "final time")
        .add("record_stride", hn::KeyType::Double, "1e-2", "record interval")
        .add("length", hn::KeyType::Double, "6.2831853071795864769", "torus edge length")
        .add("cfl", hn::KeyType::Double, "0.4", "CFL constant")
        .add("seed", hn::KeyType::Uint64, "21", "RNG seed")
        .add("forcing.kind", hn::KeyType::String, "kolmogorov", "forcing f for u")
        .add("forcing.amplitude", hn::KeyType::Double, "0.25", "forcing amplitude")
        .add("forcing.k", hn::KeyType::Int, "2", "forcing wavenumber")
        .add("forcing2.kind", hn::KeyType::String, "same",
             "forcing g for v: same | none | kolmogorov")
        .add("forcing2.amplitude", hn::KeyType::Double, "0", "g amplitude (kind != same)")
        .add("forcing2.k", hn::KeyType::Int, "1", "g wavenumber (kind != same)")
        .add("forcing2.perturb_amplitude", hn::KeyType::Double, "0",
             "decaying perturbation riding on g")
        .add("forcing2.perturb_decay", hn::KeyType::Double, "1", "perturbation decay rate")
        .add("forcing2.perturb_k", hn::KeyType::Int, "1", "perturbation wavenumber")
        .add("init.kind", hn::KeyType::String, "taylor_green", "initial data for u")
        .add("init.amplitude", hn::KeyType::Double, "0.3", "u0 amplitude")
        .add("init.k", hn::KeyType::Int, "1", "single_mode wavenumber")
        .add("init.band", hn::KeyType::Int, "4", "random band limit")
        .add("init2.kind", hn::KeyType::String, "perturb",
             "v0: perturb | taylor_green | single_mode | random | zero")
        .add("init2.amplitude", hn::KeyType::Double, "0.05", "perturbation or v0 amplitude")
        .add("init2.k", hn::KeyType::Int, "1", "v0 single_mode wavenumber")
        .add("init2.band", hn::KeyType::Int, "4", "perturbation or v0 band")
        .add("mesh.n", hn::KeyType::Int, "8", "box triangulation cells per axis")
        .add("gamma", hn::KeyType::Double, "0.5", "approximation exponent")
        .add("c1", hn::KeyType::Double, "0", "approximation constant (0 = estimate)")
        .add("c1.levels", hn::KeyType::Int, "3", "mesh levels for the C1 estimate")
        .add("c1.corpus", hn::KeyType::Int, "10", "corpus fields for the C1 estimate")
        .add("c1.band", hn::KeyType::Int, "16", "largest corpus band");
    return s;
}

detproj::determining::TwinConfig twin_config_from(const hn::RunConfig& cfg) {
    detproj::determining::TwinConfig tc;
    tc.nu = cfg.get_double("nu");
    tc.m = cfg.get_int("M");
    tc.dt = cfg.get_double("dt");
    tc.t_end = cfg.get_double("t_end");
    tc.record_stride = cfg.get_double("record_stride");
    tc.length = cfg.get_double("length");
    tc.cfl = cfg.get_double("cfl");
    tc.seed = cfg.get_u64("seed");
    tc.forcing_u = {cfg.get_string("forcing.kind"), cfg.get_double("forcing.amplitude"),
                    cfg.get_int("forcing.k"), 0.0, 1.0, 1};
    if (cfg.get_string("forcing2.kind") == "same")
        tc.forcing_v = tc.forcing_u;
    else
        tc.forcing_v = {cfg.get_string("forcing2.kind"), cfg.get_double("forcing2.amplitude"),
                        cfg.get_int("forcing2.k"), 0.0, 1.0, 1};
    tc.forcing_v.perturb_amplitude = cfg.get_double("forcing2.perturb_amplitude");
    tc.forcing_v.perturb_decay = cfg.get_double("forcing2.perturb_decay");
    tc.forcing_v.perturb_k = cfg.get_int("forcing2.perturb_k");
    tc.init_u = {cfg.get_string("init.kind"), cfg.get_double("init.amplitude"),
                 cfg.get_int("init.k"), cfg.get_int("init.band")};
    if (cfg.get_string("init2.kind") == "perturb") {
        tc.init_v_kind = "perturb";
        tc.perturb_amplitude = cfg.get_double("init2.amplitude");
        tc.perturb_band = cfg.get_int("init2.band");
    } else {
        tc.init_v_kind = "independent";
        tc.init_v = {cfg.get_string("init2.kind"), cfg.get_double("init2.amplitude"),
                     cfg.get_int("init2.k"), cfg.get_int("init2.band")};
    }
    tc.mesh_n = cfg.get_int("mesh.n");
    tc.gamma = cfg.get_double("gamma");
    tc.c1 = cfg.get_double("c1");
    tc.c1_levels = cfg.get_int("c1.levels");
    tc.c1_corpus = cfg.get_int("c1.corpus");
    tc.c1_band = cfg.get_int("c1.band");
    return tc;
}

hn::ConfigSchema thresholds_schema() {
    hn::ConfigSchema s;
    s.add("nu", hn::KeyType::Double, "1.0", "kinematic viscosity")
        .add("F", hn::KeyType::Double, "1.0", "limsup ||f||_{V'}")
        .add("gamma2d", hn::KeyType::Double, "0.5", "2D approximation exponent")
        .add("gamma3d", hn::KeyType::Double, "0.33333333333333333", "3D exponent")
        .add("c1", hn::KeyType::Double, "1.0", "approximation constant (0 = estimate)")
        .add("c1.corpus", hn::KeyType::Int, "6", "corpus size for the estimate")
        .add("c1.band", hn::KeyType::Int, "8", "corpus band for the estimate")
        .add("mesh2d.n", hn::KeyType::Int, "4", "2D family coarsest n")
        .add("mesh3d.n", hn::KeyType::Int, "2", "3D family coarsest n")
        .add("mesh.refinements", hn::KeyType::Int, "3", "refinements per family")
        .add("series.kind", hn::KeyType::String, "constant", "constant | from-run")
        .add("series.value", hn::KeyType::Double, "1.0", "constant series value")
        .add("series.t_grid", hn::KeyType::String, "1,2,4", "comma list of window lengths")
        .add("tail_fraction", hn::KeyType::Double, "0.5", "limsup proxy tail")
        .add("sweep.nu", hn::KeyType::String, "", "optional comma list replacing nu")
        .add("sweep.F", hn::KeyType::String, "", "optional comma list replacing F")
        .add("jobs", hn::KeyType::Int, "1", "parallel sweep evaluations")
        .add("seed", hn::KeyType::Uint64, "5", "corpus seed");
    return s;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

int cmd_mesh_study(int dim, int n, int refinements, const std::string& out_path,
                   const std::string& mesh_out) {
    hn::ConfigSchema s;
    s.add("dim", hn::KeyType::Int, "2", "")
        .add("n", hn::KeyType::Int, "4", "")
        .add("refinements", hn::KeyType::Int, "3", "");
    auto cfg = hn::RunConfig::parse("dim = " + std::to_string(dim) + "\nn = " + std::to_string(n) +
                                        "\nrefinements = " + std::to_string(refinements) + "\n",
                                    s);
    auto m = detproj::mesh::build_box_mesh(dim, {1.0, 1.0, 1.0}, n);
    hn::CsvWriter csv(out_path);
    csv.provenance(cfg, 0);
    csv.columns({"level", "h", "h_min", "N", "shape_regularity", "quasi_uniformity", "c_lower",
                 "c_upper"});
    for (int level = 0; level <= refinements; ++level) {
        if (level > 0) m = detproj::mesh::refine(m);
        auto met = detproj::mesh::metrics(m);
        csv.row(std::vector<double>{static_cast<double>(level), met.h, met.h_min,
                                    static_cast<double>(met.n_vertices), met.shape_regularity,
                                    met.quasi_uniformity, met.c_lower, met.c_upper});
    }
    if (!mesh_out.empty()) {
        std::ofstream os(mesh_out);
        detproj::require(os.good(), "mesh-study: cannot open '" + mesh_out + "'");
        detproj::mesh::write_mesh(os, m);
    }
    return 0;
}

int cmd_sz_convergence(int dim, const std::string& field, int levels,
                       const std::string& out_path) {
    hn::ConfigSchema s;
    s.add("dim", hn::KeyType::Int, "2", "")
        .add("field", hn::KeyType::String, "smooth", "")
        .add("levels", hn::KeyType::Int, "4", "");
    auto cfg = hn::RunConfig::parse("dim = " + std::to_string(dim) + "\nfield = " + field +
                                        "\nlevels = " + std::to_string(levels) + "\n",
                                    s);
    detproj::require(levels >= 2, "sz-convergence: need at least 2 levels");
    std::vector<detproj::mesh::SimplicialMesh> family;
    family.push_back(detproj::mesh::build_box_mesh(dim, {1.0, 1.0, 1.0}, dim == 2 ? 4 : 2));
    for (int l = 1; l < levels; ++l) family.push_back(detproj::mesh::refine(family.back()));
    auto study = detproj::sz::l2_convergence(family, detproj::fields::by_name(field, dim));
    hn::CsvWriter csv(out_path);
    csv.provenance(cfg, 0);
    csv.comment("fitted_slope = " + fmt(study.fitted_slope));
    csv.columns({"level", "h", "N", "l2_error", "running_slope"});
    for (const auto& row : study.rows)
        csv.row(std::vector<double>{static_cast<double>(row.level), row.h,
                                    static_cast<double>(row.n_vertices), row.l2_error,
                                    row.running_slope});
    std::cout << "fitted slope: " << study.fitted_slope << "\n";
    return 0;
}

int cmd_forms_verify(int dim, int samples, std::uint64_t seed, const std::string& out_path) {
    hn::ConfigSchema s;
    s.add("dim", hn::KeyType::Int, "2", "")
        .add("samples", hn::KeyType::Int, "100", "")
        .add("seed", hn::KeyType::Uint64, "0", "");
    auto cfg = hn::RunConfig::parse("dim = " + std::to_string(dim) +
                                        "\nsamples = " + std::to_string(samples) +
                                        "\nseed = " + std::to_string(seed) + "\n",
                                    s);
    auto rows = detproj::forms::verify_ladyzhenskaya(dim, samples, seed);
    hn::CsvWriter csv(out_path);
    csv.provenance(cfg, seed);
    csv.columns({"inequality", "sample", "lhs", "rhs", "ratio"});
    double worst = 0.0;
    for (const auto& r : rows) {
        csv.row({r.inequality, fmt(r.sample), fmt(r.lhs), fmt(r.rhs), fmt(r.ratio)});
        worst = std::max(worst, r.ratio);
    }
    std::cout << "max ratio: " << worst << "\n";
    return worst <= 1.0 + 1e-9 ? 0 : 1;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& checkpoint_dir) {
    auto schema = simulate_schema();
    auto cfg = hn::RunConfig::load(config_path, schema);
    auto sc = solver_config_from(cfg);
    if (!checkpoint_dir.empty() && sc.checkpoint_stride <= 0.0)
        sc.checkpoint_stride = 10.0 * sc.record_stride;
    auto rec = detproj::nse::simulate(sc);
    detproj::pipelines::write_record_csv(out_path, cfg, sc.seed, rec);
    if (!checkpoint_dir.empty()) {
        std::filesystem::create_directories(checkpoint_dir);
        for (std::size_t i = 0; i < rec.checkpoints.size(); ++i) {
            char name[64];
            std::snprintf(name, sizeof(name), "checkpoint_%012.6f.txt", rec.checkpoint_times[i]);
            std::ofstream os(std::filesystem::path(checkpoint_dir) / name);
            os.precision(17);
            const auto& f = rec.checkpoints[i];
            os << "t " << rec.checkpoint_times[i] << "\nM " << f.grid().m << "\nlength "
               << f.grid().length << "\n";
            for (int c = 0; c < f.n_components(); ++c)
                for (const auto& z : f.component(c)) os << z.real() << " " << z.imag() << "\n";
        }
    }
    return 0;
}

int cmd_gronwall_demo(const std::string& case_name, std::uint64_t seed,
                      const std::string& out_path, const std::string& in_path, double T) {
    namespace gw = detproj::gronwall;
    hn::ConfigSchema s;
    s.add("case", hn::KeyType::String, "exp", "")
        .add("seed", hn::KeyType::Uint64, "0", "")
        .add("T", hn::KeyType::Double, "2", "");
    auto cfg = hn::RunConfig::parse(
        "case = " + case_name + "\nseed = " + std::to_string(seed) + "\nT = " + fmt(T) + "\n", s);

    gw::TimeSeries alpha, beta, y;
    bool have_y = false;
    if (!in_path.empty()) {
        auto table = hn::read_csv_file(in_path);
        auto t = table.column_as_double("t");
        alpha = gw::TimeSeries::from_times(t, table.column_as_double("alpha"));
        beta = gw::TimeSeries::from_times(t, table.column_as_double("beta"));
        for (const auto& col : table.columns)
            if (col == "y" || col == "w_l2sq") {
                y = gw::TimeSeries::from_times(t, table.column_as_double(col));
                have_y = true;
            }
    } else if (case_name == "exp") {
        alpha = gw::TimeSeries::sample([](double) { return 1.0; }, 0.0, 1e-3, 20001);
        beta = gw::TimeSeries::sample([](double) { return 0.0; }, 0.0, 1e-3, 20001);
    } else if (case_name == "oscillatory") {
        alpha = gw::TimeSeries::sample([](double t) { return 1.0 + std::sin(t); }, 0.0, 1e-3,
                                       20001);
        beta = gw::TimeSeries::sample([](double) { return 0.0; }, 0.0, 1e-3, 20001);
        T = 2.0 * detproj::pi;
    } else if (case_name == "random") {
        std::mt19937_64 rng(seed);
        auto c = detproj::pipelines::make_random_gronwall_case(rng);
        alpha = c.alpha;
        beta = c.beta;
        T = c.T;
    } else {
        throw std::invalid_argument("gronwall-demo: unknown case '" + case_name + "'");
    }
    if (!have_y) y = gw::integrate_inequality(alpha, beta, 1.0);

    auto rep = gw::check_hypotheses(alpha, beta, T);
    auto concl = gw::verify_conclusion(y, T);
    hn::CsvWriter csv(out_path);
    csv.provenance(cfg, seed);
    csv.columns({"t", "alpha", "beta", "y"});
    for (std::size_t i = 0; i < alpha.size(); ++i)
        csv.row(std::vector<double>{alpha.time(i), alpha.values[i], beta.values[i], y.values[i]});
    std::cout << "m = " << rep.m << ", M = " << rep.M
              << ", beta_plus_limit = " << rep.beta_plus_limit << " (tol " << rep.tol_beta
              << ")\n"
              << "hypotheses met: " << rep.hypotheses_met[0] << rep.hypotheses_met[1]
              << rep.hypotheses_met[2] << ", conclusion (y -> 0): " << concl.passed << "\n";
    return 0;
}

int cmd_twin(const std::string& config_path, const std::string& out_path) {
    auto schema = twin_schema();
    auto cfg = hn::RunConfig::load(config_path, schema);
    auto tc = twin_config_from(cfg);
    auto diag = detproj::determining::twin_experiment(tc);
    detproj::pipelines::write_twin_csv(out_path, cfg, tc.seed, diag);
    auto rep = detproj::determining::verify_differential_inequality(diag);
    double w0 = std::sqrt(diag.w_l2sq.front());
    double wT = std::sqrt(diag.w_l2sq.back());
    std::cout << "C1 = " << diag.c1_used << ", N = " << diag.n_vertices << "\n"
              << "|w| decay ratio = " << (w0 > 0 ? wT / w0 : 0.0) << "\n"
              << "split inequality: " << (rep.split_ok ? "ok" : "VIOLATED") << " (worst margin "
              << rep.split_worst_margin << ")\n"
              << "residual inequality: " << (rep.residual_ok ? "ok" : "VIOLATED")
              << " (max residual " << rep.residual_max << ")\n";
    return rep.split_ok && rep.residual_ok ? 0 : 1;
}

int cmd_thresholds(const std::string& config_path, const std::string& out_path) {
    namespace det = detproj::determining;
    auto schema = thresholds_schema();
    auto cfg = hn::RunConfig::load(config_path, schema);

    std::vector<detproj::mesh::SimplicialMesh> fam2m, fam3m;
    fam2m.push_back(detproj::mesh::build_box_mesh(2, {1.0, 1.0, 1.0}, cfg.get_int("mesh2d.n")));
    fam3m.push_back(detproj::mesh::build_box_mesh(3, {1.0, 1.0, 1.0}, cfg.get_int("mesh3d.n")));
    for (int l = 0; l < cfg.get_int("mesh.refinements"); ++l) {
        fam2m.push_back(detproj::mesh::refine(fam2m.back()));
        fam3m.push_back(detproj::mesh::refine(fam3m.back()));
    }
    auto fam2 = det::measure_family(fam2m);
    auto fam3 = det::measure_family(fam3m);

    double c1 = cfg.get_double("c1");
    if (c1 <= 0.0) {
        detproj::spectral::Grid g{2, 64, 2.0 * detproj::pi};
        std::vector<detproj::mesh::SimplicialMesh> c1fam;
        c1fam.push_back(detproj::mesh::build_box_mesh(2, {g.length, g.length, 0.0}, 8));
        for (int l = 1; l < 3; ++l) c1fam.push_back(detproj::mesh::refine(c1fam.back()));
        auto corpus = det::c1_corpus(g, cfg.get_int("c1.corpus"), cfg.get_int("c1.band"),
                                     cfg.get_u64("seed"));
        c1 = det::estimate_c1(c1fam, corpus, cfg.get_double("gamma2d")).c1;
    }

    detproj::gronwall::TimeSeries series;
    if (cfg.get_string("series.kind") == "constant") {
        double v = cfg.get_double("series.value");
        series = detproj::gronwall::TimeSeries::sample([v](double) { return v; }, 0.0, 1e-2,
                                                       2001);
    } else {
        detproj::require(cfg.get_string("series.kind") == "from-run",
                         "thresholds: series.kind must be constant or from-run");
        detproj::nse::SolverConfig dec;
        dec.nu = cfg.get_double("nu");
        dec.m = 32;
        dec.dt = 2e-3;
        dec.t_end = 12.0;
        dec.record_stride = 1e-2;
        dec.init = {"taylor_green", 1.0, 1, 4};
        auto rec = detproj::nse::simulate(dec);
        series = detproj::gronwall::TimeSeries::from_times(rec.times, rec.grad_linf);
    }
    auto t_grid = parse_list(cfg.get_string("series.t_grid"));

    std::vector<double> nus = parse_list(cfg.get_string("sweep.nu"));
    std::vector<double> fs = parse_list(cfg.get_string("sweep.F"));
    if (nus.empty()) nus = {cfg.get_double("nu")};
    if (fs.empty()) fs = {cfg.get_double("F")};

    struct Row {
        double nu, F, gr, eps, epsinf, n2, h2, n3, h3;
    };
    std::vector<std::pair<double, double>> cases;
    for (double nu : nus)
        for (double F : fs) cases.emplace_back(nu, F);
    std::vector<Row> rows(cases.size());
    auto work = [&](std::size_t i) {
        auto [nu, F] = cases[i];
        auto r2 = det::threshold_2d(nu, F, cfg.get_double("gamma2d"), c1, &fam2);
        auto r3 = det::threshold_3d(nu, series, cfg.get_double("gamma3d"), c1, t_grid,
                                    cfg.get_double("tail_fraction"), &fam3);
        rows[i] = {nu,          F,
                   detproj::forms::grashof(F, 1.0, nu),
                   r3.epsilon_quantity,
                   r3.epsilon_inf,
                   r2.n_threshold,
                   r2.h_threshold,
                   r3.n_threshold,
                   r3.h_threshold};
    };
    int jobs = std::max(1, cfg.get_int("jobs"));
    if (jobs == 1) {
        for (std::size_t i = 0; i < cases.size(); ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (int j = 0; j < jobs; ++j)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < cases.size(); i = next++) work(i);
            });
        for (auto& th : pool) th.join();
    }

    hn::CsvWriter csv(out_path);
    csv.provenance(cfg, cfg.get_u64("seed"));
    csv.columns({"nu", "F", "gamma", "c1", "grashof", "epsilon_quantity", "epsilon_inf",
                 "n_threshold_2d", "h_threshold_2d", "n_threshold_3d", "h_threshold_3d"});
    for (const auto& r : rows)
        csv.row(std::vector<double>{r.nu, r.F, cfg.get_double("gamma2d"), c1, r.gr, r.eps,
                                    r.epsinf, r.n2, r.h2, r.n3, r.h3});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"determining-projection laboratory for the 2D/3D Navier-Stokes equations"};
    app.require_subcommand(1);

    int dim = 2, n = 4, refinements = 3, levels = 4, samples = 100;
    std::uint64_t seed = 0;
    std::string out_path, mesh_out, field = "smooth", config_path, checkpoint_dir;
    std::string case_name = "exp", in_path, pipeline_name, out_dir = "out";
    double T = 2.0;

    auto* mesh_cmd = app.add_subcommand("mesh-study", "mesh metrics across refinement levels");
    mesh_cmd->add_option("--dim", dim)->check(CLI::IsMember({2, 3}));
    mesh_cmd->add_option("--n", n);
    mesh_cmd->add_option("--refinements", refinements);
    mesh_cmd->add_option("--out", out_path)->required();
    mesh_cmd->add_option("--mesh-out", mesh_out);

    auto* sz_cmd = app.add_subcommand("sz-convergence", "interpolation L2 convergence study");
    sz_cmd->add_option("--dim", dim)->check(CLI::IsMember({2, 3}));
    sz_cmd->add_option("--field", field)->check(CLI::IsMember({"smooth", "rough", "linear"}));
    sz_cmd->add_option("--levels", levels);
    sz_cmd->add_option("--out", out_path)->required();

    auto* forms_cmd = app.add_subcommand("forms-verify", "trilinear-form inequality sweep");
    forms_cmd->add_option("--dim", dim)->check(CLI::IsMember({2, 3}));
    forms_cmd->add_option("--samples", samples);
    forms_cmd->add_option("--seed", seed);
    forms_cmd->add_option("--out", out_path)->required();

    auto* sim_cmd = app.add_subcommand("simulate", "2D periodic Navier-Stokes run");
    sim_cmd->add_option("--config", config_path)->required();
    sim_cmd->add_option("--out", out_path)->required();
    sim_cmd->add_option("--checkpoint-dir", checkpoint_dir);

    auto* gw_cmd = app.add_subcommand("gronwall-demo", "generalized Gronwall checker");
    gw_cmd->add_option("--case", case_name);
    gw_cmd->add_option("--seed", seed);
    gw_cmd->add_option("--out", out_path)->required();
    gw_cmd->add_option("--in", in_path);
    gw_cmd->add_option("--T", T);

    auto* twin_cmd = app.add_subcommand("twin", "twin-trajectory determining experiment");
    twin_cmd->add_option("--config", config_path)->required();
    twin_cmd->add_option("--out", out_path)->required();

    auto* thr_cmd = app.add_subcommand("thresholds", "N and h threshold report");
    thr_cmd->add_option("--config", config_path)->required();
    thr_cmd->add_option("--out", out_path)->required();

    auto* pipe_cmd = app.add_subcommand("pipeline", "acceptance pipelines");
    pipe_cmd->add_option("name", pipeline_name)->required();
    pipe_cmd->add_option("--out-dir", out_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (*mesh_cmd) return cmd_mesh_study(dim, n, refinements, out_path, mesh_out);
        if (*sz_cmd) return cmd_sz_convergence(dim, field, levels, out_path);
        if (*forms_cmd) return cmd_forms_verify(dim, samples, seed, out_path);
        if (*sim_cmd) return cmd_simulate(config_path, out_path, checkpoint_dir);
        if (*gw_cmd) return cmd_gronwall_demo(case_name, seed, out_path, in_path, T);
        if (*twin_cmd) return cmd_twin(config_path, out_path);
        if (*thr_cmd) return cmd_thresholds(config_path, out_path);
        if (*pipe_cmd) {
            auto results = detproj::pipelines::run_pipeline(pipeline_name, out_dir);
            bool ok = detproj::pipelines::print_results(std::cout, results);
            return ok ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
