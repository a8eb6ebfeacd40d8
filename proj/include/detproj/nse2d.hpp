#pragma once

#include <functional>

#include "detproj/forms.hpp"
#include "detproj/gronwall.hpp"

namespace detproj::nse {

using spectral::Complex;
using spectral::Field;
using spectral::Grid;

/// Forcing on the right-hand side of du/dt + nu A u + B(u,u) = f.
///   none:        f = 0
///   kolmogorov:  f = A sin(k y) x_hat
/// An optional perturbation A_p e^{-lambda_p t} sin(k_p x) y_hat rides on
/// top; with it ||f - g||_{V'} of a perturbed/unperturbed pair decays to 0.
struct ForcingSpec {
    std::string kind = "none";  // none | kolmogorov
    double amplitude = 0.0;
    int k = 1;
    double perturb_amplitude = 0.0;
    double perturb_decay = 1.0;
    int perturb_k = 1;
};

struct InitSpec {
    std::string kind = "taylor_green";  // taylor_green | single_mode | random | zero
    double amplitude = 1.0;
    int k = 1;     // single_mode: u0 = A sin(k y) x_hat
    int band = 4;  // random: band limit
};

/// Exact spectral Taylor-Green field A e^{-2 nu t} (sin x cos y, -cos x sin y)
/// on the 2 pi torus.
inline Field taylor_green(const Grid& g, double amplitude = 1.0, double t = 0.0,
                          double nu = 0.0) {
    require(g.dim == 2, "taylor_green: 2D only");
    require(g.length == 2.0 * pi, "taylor_green: needs the 2 pi torus");
    Field f(g);
    const double a = 0.25 * amplitude * std::exp(-2.0 * nu * t);
    auto idx = [&](int kx, int ky) {
        return f.flat_index((kx + g.m) % g.m, (ky + g.m) % g.m);
    };
    // sin x cos y   = -i/4 (e^{i(x+y)} + e^{i(x-y)}) + c.c.
    // -cos x sin y  =  i/4 (e^{i(x+y)}) - i/4 (e^{i(x-y)}) + c.c.
    f.component(0)[idx(1, 1)] = Complex(0, -a);
    f.component(0)[idx(1, -1)] = Complex(0, -a);
    f.component(0)[idx(-1, -1)] = Complex(0, a);
    f.component(0)[idx(-1, 1)] = Complex(0, a);
    f.component(1)[idx(1, 1)] = Complex(0, a);
    f.component(1)[idx(1, -1)] = Complex(0, -a);
    f.component(1)[idx(-1, -1)] = Complex(0, -a);
    f.component(1)[idx(-1, 1)] = Complex(0, a);
    return f;
}

/// f = A sin(k y) x_hat (or y_hat with axis = 1, pattern in x).
inline Field shear_mode(const Grid& g, double amplitude, int k, int axis = 0) {
    require(g.dim == 2, "shear_mode: 2D only");
    Field f(g);
    const double a = 0.5 * amplitude;
    if (axis == 0) {
        f.component(0)[f.flat_index(0, (k + g.m) % g.m)] = Complex(0, -a);
        f.component(0)[f.flat_index(0, (g.m - k) % g.m)] = Complex(0, a);
    } else {
        f.component(1)[f.flat_index((k + g.m) % g.m, 0)] = Complex(0, -a);
        f.component(1)[f.flat_index((g.m - k) % g.m, 0)] = Complex(0, a);
    }
    return f;
}

/// Time-dependent forcing assembled from a ForcingSpec.
class Forcing {
  public:
    Forcing() = default;
    Forcing(const Grid& g, const ForcingSpec& spec) : spec_(spec), base_(g), perturb_(g) {
        if (spec.kind == "kolmogorov")
            base_ = shear_mode(g, spec.amplitude, spec.k, 0);
        else
            require(spec.kind == "none", "Forcing: unknown kind '" + spec.kind + "'");
        if (spec.perturb_amplitude != 0.0)
            perturb_ = shear_mode(g, spec.perturb_amplitude, spec.perturb_k, 1);
    }

    void add_to(Field& rhs, double t) const {
        rhs += base_;
        if (spec_.perturb_amplitude != 0.0) {
            Field p = perturb_;
            p *= std::exp(-spec_.perturb_decay * t);
            rhs += p;
        }
    }

    Field at(double t) const {
        Field f = base_;
        if (spec_.perturb_amplitude != 0.0) {
            Field p = perturb_;
            p *= std::exp(-spec_.perturb_decay * t);
            f += p;
        }
        return f;
    }

  private:
    ForcingSpec spec_;
    Field base_, perturb_;
};

using ForcingFn = std::function<void(double /*t*/, Field& /*rhs accumulate*/)>;

/// Pseudo-spectral stepper for the functional form du/dt + nu A u + B(u,u) = f
/// on the periodic torus: exact integrating factor e^{-nu |k|^2 dt} for the
/// viscous term, explicit second-order (Heun) treatment of the projected,
/// 2/3-dealiased nonlinearity. Pressure never appears; the Leray projection
/// eliminates it mode-wise.
class Solver {
  public:
    Solver(const Grid& g, double nu, double cfl = 0.4)
        : grid_(g), nu_(nu), cfl_(cfl) {
        require(g.dim == 2, "Solver: time integration is 2D only");
        require(nu > 0.0, "Solver: nu must be positive");
    }

    const Grid& grid() const { return grid_; }
    double nu() const { return nu_; }

    /// N(u,t) = P[f - (u.grad)u], dealiased. Optionally reports the grid max
    /// of |u| (for the CFL check) and of |grad u|_F.
    Field nonlinear_rhs(const Field& u, const ForcingFn& forcing, double t,
                        double* umax = nullptr, double* gradmax = nullptr) const {
        const Grid& g = grid_;
        const double kappa = g.wavenumber_scale();
        const auto& fft = spectral::fft_for(g.dim, g.m);
        const std::size_t n = g.size();

        std::array<std::vector<Complex>, 2> u_phys;
        for (int a = 0; a < 2; ++a) {
            u_phys[a] = u.component(a);
            fft.backward(u_phys[a].data());
        }
        if (umax) {
            double worst = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double sq = u_phys[0][i].real() * u_phys[0][i].real() +
                            u_phys[1][i].real() * u_phys[1][i].real();
                worst = std::max(worst, sq);
            }
            *umax = std::sqrt(worst);
        }

        Field rhs(g);
        std::vector<Complex> dv(n);
        std::vector<double> grad_sq;
        if (gradmax) grad_sq.assign(n, 0.0);
        for (int j = 0; j < 2; ++j) {
            std::vector<double> conv(n, 0.0);
            for (int a = 0; a < 2; ++a) {
                const auto& uj = u.component(j);
                spectral::for_each_mode(g, [&](std::size_t idx, int kx, int ky, int) {
                    int k[2] = {kx, ky};
                    dv[idx] = Complex(0.0, kappa * k[a]) * uj[idx];
                });
                fft.backward(dv.data());
                for (std::size_t i = 0; i < n; ++i) {
                    conv[i] += u_phys[a][i].real() * dv[i].real();
                    if (gradmax) grad_sq[i] += dv[i].real() * dv[i].real();
                }
            }
            auto& out = rhs.component(j);
            for (std::size_t i = 0; i < n; ++i) out[i] = Complex(-conv[i], 0.0);
            fft.forward(out.data());
        }
        if (gradmax) {
            double worst = 0.0;
            for (double v : grad_sq) worst = std::max(worst, v);
            *gradmax = std::sqrt(worst);
        }
        forcing(t, rhs);
        spectral::leray_project(rhs);
        spectral::dealias(rhs);
        return rhs;
    }

    /// One IMEX step. Throws on CFL violation or non-finite state.
    void step(Field& u, const ForcingFn& forcing, double t, double dt) const {
        require(dt > 0.0, "step: dt must be positive");
        refresh_decay(dt);
        double umax = 0.0;
        Field k1 = nonlinear_rhs(u, forcing, t, &umax);
        const double dt_cfl = cfl_ * grid_.dx() / std::max(umax, 1e-14);
        if (dt > dt_cfl)
            throw std::runtime_error("step: CFL violation at t = " + std::to_string(t) +
                                     " (dt = " + std::to_string(dt) +
                                     ", limit = " + std::to_string(dt_cfl) + ")");

        Field mid(grid_);
        for (int c = 0; c < 2; ++c) {
            const auto& uc = u.component(c);
            const auto& k1c = k1.component(c);
            auto& mc = mid.component(c);
            for (std::size_t i = 0; i < uc.size(); ++i)
                mc[i] = decay_[i] * (uc[i] + dt * k1c[i]);
        }
        Field k2 = nonlinear_rhs(mid, forcing, t + dt, nullptr);
        double check = 0.0;
        for (int c = 0; c < 2; ++c) {
            auto& uc = u.component(c);
            const auto& k1c = k1.component(c);
            const auto& k2c = k2.component(c);
            for (std::size_t i = 0; i < uc.size(); ++i) {
                uc[i] = decay_[i] * (uc[i] + 0.5 * dt * k1c[i]) + 0.5 * dt * k2c[i];
                check += std::norm(uc[i]);
            }
        }
        if (!std::isfinite(check))
            throw std::runtime_error("step: non-finite state at t = " + std::to_string(t + dt) +
                                     " (blow-up or invalid input)");
    }

  private:
    void refresh_decay(double dt) const {
        if (!decay_.empty() && dt == decay_dt_) return;
        const Grid& g = grid_;
        const double kappa2 = g.wavenumber_scale() * g.wavenumber_scale();
        decay_.assign(g.size(), 0.0);
        spectral::for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
            double k2 = kappa2 * (static_cast<double>(kx) * kx + static_cast<double>(ky) * ky +
                                  static_cast<double>(kz) * kz);
            decay_[idx] = std::exp(-nu_ * k2 * dt);
        });
        decay_dt_ = dt;
    }

    Grid grid_;
    double nu_;
    double cfl_;
    mutable std::vector<double> decay_;
    mutable double decay_dt_ = -1.0;
};

struct SolverConfig {
    double nu = 0.1;
    int m = 64;
    double length = 2.0 * pi;
    double dt = 1e-3;
    double t_end = 1.0;
    double record_stride = 1e-2;
    double cfl = 0.4;
    ForcingSpec forcing;
    InitSpec init;
    std::uint64_t seed = 0;
    double checkpoint_stride = 0.0;  // 0 = no checkpoints
};

/// Norm time series of one trajectory; checkpoints are optional full fields.
struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<double> energy;     // 1/2 |u|^2
    std::vector<double> enstrophy;  // ||u||^2
    std::vector<double> grad_linf;
    std::vector<double> f_vprime;
    std::vector<double> f_dot_u;  // L2 pairing (f, u), used by the energy identity
    std::vector<double> checkpoint_times;
    std::vector<Field> checkpoints;
    Field final_state;
    double final_time = 0.0;
};

inline Field initial_field(const Grid& g, const InitSpec& init, std::uint64_t seed) {
    Field u(g);
    if (init.kind == "taylor_green") {
        u = taylor_green(g, init.amplitude);
    } else if (init.kind == "single_mode") {
        u = shear_mode(g, init.amplitude, init.k, 0);
    } else if (init.kind == "random") {
        std::mt19937_64 rng(seed);
        u = spectral::random_divfree(g, init.band, init.amplitude, rng);
    } else {
        require(init.kind == "zero", "initial_field: unknown kind '" + init.kind + "'");
    }
    spectral::leray_project(u);
    spectral::dealias(u);
    return u;
}

inline TrajectoryRecord simulate(const SolverConfig& cfg) {
    Grid g{2, cfg.m, cfg.length};
    Solver solver(g, cfg.nu, cfg.cfl);
    Forcing forcing(g, cfg.forcing);
    ForcingFn ffn = [&forcing](double t, Field& rhs) { forcing.add_to(rhs, t); };
    Field u = initial_field(g, cfg.init, cfg.seed);

    const long n_steps = std::lround(cfg.t_end / cfg.dt);
    require(n_steps >= 1, "simulate: t_end must cover at least one step");
    const long record_every = std::max<long>(1, std::lround(cfg.record_stride / cfg.dt));
    const long checkpoint_every =
        cfg.checkpoint_stride > 0.0 ? std::max<long>(1, std::lround(cfg.checkpoint_stride / cfg.dt))
                                    : 0;

    TrajectoryRecord rec;
    auto record = [&](double t) {
        rec.times.push_back(t);
        double l2 = forms::l2_norm(u);
        rec.energy.push_back(0.5 * l2 * l2);
        double h1 = forms::h1_seminorm(u);
        rec.enstrophy.push_back(h1 * h1);
        rec.grad_linf.push_back(forms::grad_linf(u));
        Field f = forcing.at(t);
        rec.f_vprime.push_back(forms::vprime_norm(f));
        rec.f_dot_u.push_back(forms::inner(f, u));
        ensure(std::isfinite(l2) && std::isfinite(h1),
               "simulate: non-finite norms at t = " + std::to_string(t));
    };

    record(0.0);
    if (checkpoint_every > 0) {
        rec.checkpoint_times.push_back(0.0);
        rec.checkpoints.push_back(u);
    }
    for (long s = 1; s <= n_steps; ++s) {
        double t = (s - 1) * cfg.dt;
        try {
            solver.step(u, ffn, t, cfg.dt);
        } catch (const std::runtime_error& e) {
            throw std::runtime_error(std::string(e.what()) + " [simulate at step " +
                                     std::to_string(s) + "]");
        }
        if (s % record_every == 0) record(s * cfg.dt);  // keep the record stride uniform
        if (checkpoint_every > 0 && s % checkpoint_every == 0) {
            rec.checkpoint_times.push_back(s * cfg.dt);
            rec.checkpoints.push_back(u);
        }
    }
    rec.final_state = u;
    rec.final_time = n_steps * cfg.dt;
    return rec;
}

/// Sliding-window verification of the a priori enstrophy bound
///     limsup (1/T) int_t^{t+T} ||u||^2 <= (2/nu^2) limsup ||f||_{V'}^2
/// with T = rho^2 / nu. Window averages use the trapezoid rule on the record
/// grid; limsups become maxima over windows starting in the tail fraction.
struct AprioriReport {
    double T = 0.0;
    double window_avg_max = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
    bool pass = false;
};

/// tol_floor_rel sets the finite-horizon allowance: a decaying run has
/// limsup 0 but any finite tail window average stays positive, so "-> 0" is
/// declared when the averages drop below tol_floor_rel times the peak.
inline AprioriReport verify_apriori_bound(const TrajectoryRecord& rec, double nu, double rho,
                                          double tail_fraction = 0.5,
                                          double tol_floor_rel = 1e-6) {
    AprioriReport rep;
    rep.T = rho * rho / nu;
    const std::size_t n = rec.times.size();
    require(n >= 3, "verify_apriori_bound: record too short");
    const double stride = rec.times[1] - rec.times[0];
    const double span = rec.times.back() - rec.times.front();
    require(span >= 10.0 * rep.T - 1e-9, "verify_apriori_bound: record shorter than 10 windows");
    const std::size_t w = std::max<std::size_t>(1, std::llround(rep.T / stride));
    require(w + 1 <= n, "verify_apriori_bound: window exceeds record");

    std::size_t tail_start = static_cast<std::size_t>((n - 1) * (1.0 - tail_fraction));
    tail_start = std::min(tail_start, n - 1 - w);
    gronwall::detail::WindowAverager averager(rec.enstrophy);
    double worst = 0.0, f_max = 0.0, peak = 0.0;
    for (std::size_t i = tail_start; i + w < n; ++i)
        worst = std::max(worst, averager.average(i, w));
    for (std::size_t i = tail_start; i < n; ++i) f_max = std::max(f_max, rec.f_vprime[i]);
    for (double e : rec.enstrophy) peak = std::max(peak, e);
    rep.window_avg_max = worst;
    rep.bound = 2.0 / (nu * nu) * f_max * f_max;
    rep.ratio = rep.bound > 0.0
                    ? worst / rep.bound
                    : (worst > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    rep.pass = worst <= rep.bound * (1.0 + 1e-9) + tol_floor_rel * peak;
    return rep;
}

}  // namespace detproj::nse
