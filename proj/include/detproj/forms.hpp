#pragma once

#include <string>
#include <vector>

#include "detproj/spectral.hpp"

namespace detproj::forms {

using spectral::Complex;
using spectral::Field;
using spectral::Grid;

/// Norms of a mean-zero divergence-free spectral field. All norms are
/// physical-space integrals over the torus: ||u||_{L2}^2 = L^d sum |u_hat|^2
/// by Parseval with the u(x) = sum u_hat e^{ikx} convention.
struct NormReport {
    double l2 = 0.0;        // |u|, the H norm
    double h1_semi = 0.0;   // ||u||, the V norm
    double vprime = 0.0;    // ||u||_{V'}
    double linf_grad = 0.0; // max over the collocation grid of |grad u|_F
};

/// L2 norm only (cheap, no FFT).
inline double l2_norm(const Field& f) {
    double sum = 0.0;
    for (int c = 0; c < f.n_components(); ++c)
        for (const Complex& v : f.component(c)) sum += std::norm(v);
    return std::sqrt(sum * std::pow(f.grid().length, f.grid().dim));
}

inline double h1_seminorm(const Field& f) {
    const Grid& g = f.grid();
    const double kappa2 = g.wavenumber_scale() * g.wavenumber_scale();
    double sum = 0.0;
    spectral::for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
        double k2 = kappa2 * (static_cast<double>(kx) * kx + static_cast<double>(ky) * ky +
                              static_cast<double>(kz) * kz);
        for (int c = 0; c < f.n_components(); ++c) sum += k2 * std::norm(f.component(c)[idx]);
    });
    return std::sqrt(sum * std::pow(g.length, g.dim));
}

/// Dual (V') norm on the mean-zero scale; rejects fields with a mean mode.
inline double vprime_norm(const Field& f) {
    const Grid& g = f.grid();
    const double kappa2 = g.wavenumber_scale() * g.wavenumber_scale();
    double sum = 0.0, mean = 0.0;
    spectral::for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
        double k2 = static_cast<double>(kx) * kx + static_cast<double>(ky) * ky +
                    static_cast<double>(kz) * kz;
        for (int c = 0; c < f.n_components(); ++c) {
            if (k2 == 0.0)
                mean = std::max(mean, std::abs(f.component(c)[idx]));
            else
                sum += std::norm(f.component(c)[idx]) / (kappa2 * k2);
        }
    });
    double scaled = std::sqrt(sum * std::pow(g.length, g.dim));
    require(mean <= 1e-13 * (scaled + 1.0),
            "vprime_norm: field has a mean mode; V' norm is defined on the mean-zero scale");
    return scaled;
}

/// Max over the dealiased collocation grid of the Frobenius norm of grad u
/// (a lower bound of the true sup that tightens under grid refinement).
inline double grad_linf(const Field& f) {
    const Grid& g = f.grid();
    const double kappa = g.wavenumber_scale();
    const auto& fft = spectral::fft_for(g.dim, g.m);
    std::vector<double> frob_sq(g.size(), 0.0);
    std::vector<Complex> buf(g.size());
    for (int c = 0; c < f.n_components(); ++c) {
        for (int a = 0; a < g.dim; ++a) {
            const auto& coeff = f.component(c);
            spectral::for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
                int k[3] = {kx, ky, kz};
                buf[idx] = Complex(0.0, kappa * k[a]) * coeff[idx];
            });
            fft.backward(buf.data());
            for (std::size_t i = 0; i < buf.size(); ++i)
                frob_sq[i] += buf[i].real() * buf[i].real();
        }
    }
    double worst = 0.0;
    for (double v : frob_sq) worst = std::max(worst, v);
    return std::sqrt(worst);
}

inline NormReport norms(const Field& f) {
    NormReport r;
    r.l2 = l2_norm(f);
    r.h1_semi = h1_seminorm(f);
    r.vprime = vprime_norm(f);
    r.linf_grad = grad_linf(f);
    return r;
}

/// L2 pairing (f, u) = int f . u dx.
inline double inner(const Field& a, const Field& b) {
    require(a.grid() == b.grid(), "inner: grid mismatch");
    double sum = 0.0;
    for (int c = 0; c < a.n_components(); ++c) {
        const auto& ac = a.component(c);
        const auto& bc = b.component(c);
        for (std::size_t i = 0; i < ac.size(); ++i)
            sum += ac[i].real() * bc[i].real() + ac[i].imag() * bc[i].imag();
    }
    return sum * std::pow(a.grid().length, a.grid().dim);
}

/// Trilinear form b(u,v,w) = int (u . grad v) . w dx by dealiased
/// pseudo-spectral products. Exact (to roundoff) whenever the inputs live
/// inside the dealias ball, since the triple product then has no wavenumber
/// congruent to 0 mod m. No Leray projection is applied: for divergence-free
/// w the projection is self-adjoint and fixes w.
inline double trilinear_b(const Field& u, const Field& v, const Field& w) {
    const Grid& g = u.grid();
    require(v.grid() == g && w.grid() == g, "trilinear_b: grid mismatch");
    const double kappa = g.wavenumber_scale();
    const auto& fft = spectral::fft_for(g.dim, g.m);
    const std::size_t n = g.size();

    std::vector<std::vector<Complex>> u_phys(g.dim);
    for (int a = 0; a < g.dim; ++a) {
        u_phys[a] = u.component(a);
        fft.backward(u_phys[a].data());
    }

    std::vector<Complex> dv(n), w_phys(n);
    double total = 0.0;
    for (int j = 0; j < g.dim; ++j) {
        std::vector<double> conv(n, 0.0);  // (u . grad) v_j on the grid
        for (int a = 0; a < g.dim; ++a) {
            const auto& vj = v.component(j);
            spectral::for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
                int k[3] = {kx, ky, kz};
                dv[idx] = Complex(0.0, kappa * k[a]) * vj[idx];
            });
            fft.backward(dv.data());
            for (std::size_t i = 0; i < n; ++i) conv[i] += u_phys[a][i].real() * dv[i].real();
        }
        w_phys = w.component(j);
        fft.backward(w_phys.data());
        for (std::size_t i = 0; i < n; ++i) total += conv[i] * w_phys[i].real();
    }
    return total * std::pow(g.length, g.dim) / static_cast<double>(n);
}

struct InequalityRow {
    std::string inequality;
    int sample = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

/// Ratio sweep |b| / RHS for the dimension-appropriate Ladyzhenskaya-type
/// bound and the Holder bound |b(v,u,v)| <= ||grad u||_inf ||v||_{L2}^2,
/// over seeded random band-limited divergence-free triples.
inline std::vector<InequalityRow> verify_ladyzhenskaya(int dim, int n_samples,
                                                       std::uint64_t seed, int m = 32,
                                                       int band = 8) {
    require(dim == 2 || dim == 3, "verify_ladyzhenskaya: dim must be 2 or 3");
    require(n_samples >= 1, "verify_ladyzhenskaya: need at least one sample");
    Grid g{dim, m, 2.0 * pi};
    std::mt19937_64 rng(seed);
    std::vector<InequalityRow> rows;
    const char* lady_id = (dim == 2) ? "ladyzhenskaya-2d" : "ladyzhenskaya-3d";
    for (int s = 0; s < n_samples; ++s) {
        Field u = spectral::random_divfree(g, band, 1.0, rng);
        Field v = spectral::random_divfree(g, band, 1.0, rng);
        Field w = spectral::random_divfree(g, band, 1.0, rng);
        NormReport un = norms(u), vn = norms(v), wn = norms(w);

        InequalityRow lady;
        lady.inequality = lady_id;
        lady.sample = s;
        lady.lhs = std::abs(trilinear_b(u, v, w));
        if (dim == 2)
            lady.rhs = std::sqrt(2.0) * std::sqrt(un.l2 * un.h1_semi) * vn.h1_semi *
                       std::sqrt(wn.l2 * wn.h1_semi);
        else
            lady.rhs = 2.0 * std::pow(un.l2, 0.25) * std::pow(un.h1_semi, 0.75) * vn.h1_semi *
                       std::pow(wn.l2, 0.25) * std::pow(wn.h1_semi, 0.75);
        lady.ratio = lady.lhs / lady.rhs;
        rows.push_back(lady);

        InequalityRow holder;
        holder.inequality = "holder-grad-linf";
        holder.sample = s;
        holder.lhs = std::abs(trilinear_b(v, u, v));
        holder.rhs = un.linf_grad * vn.l2 * vn.l2;
        holder.ratio = holder.lhs / holder.rhs;
        rows.push_back(holder);
    }
    return rows;
}

/// Domain constants entering the Grashof number.
struct Constants {
    double lambda1 = 0.0;
    double rho = 0.0;      // lambda1^{-1/2}
    double F = 0.0;        // limsup forcing magnitude, ||.||_{V'} based
    double grashof = 0.0;  // F / (lambda1 nu^2)
};

/// Smallest eigenvalue of the Stokes operator on the mean-zero torus scale:
/// the lowest retained nonzero wavenumber (exact mode scan).
inline double lambda1_torus(const Grid& g) {
    const double kappa2 = g.wavenumber_scale() * g.wavenumber_scale();
    double best = std::numeric_limits<double>::max();
    spectral::for_each_mode(g, [&](std::size_t, int kx, int ky, int kz) {
        double k2 = static_cast<double>(kx) * kx + static_cast<double>(ky) * ky +
                    static_cast<double>(kz) * kz;
        if (k2 > 0.0) best = std::min(best, kappa2 * k2);
    });
    return best;
}

struct EigenResult {
    double lambda1 = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Smallest Dirichlet Laplacian eigenvalue on the unit square by inverse
/// power iteration on the 5-point stencil, with conjugate-gradient inner
/// solves (matrix-free). n is the number of grid intervals per axis.
inline EigenResult lambda1_unit_square_dirichlet(int n, double rel_tol = 1e-8,
                                                 int max_iter = 200) {
    require(n >= 4, "lambda1_unit_square_dirichlet: need n >= 4");
    const int s = n - 1;  // interior points per axis
    const double h2inv = static_cast<double>(n) * n;
    const std::size_t nn = static_cast<std::size_t>(s) * s;
    auto at = [s](const std::vector<double>& x, int i, int j) -> double {
        if (i < 0 || j < 0 || i >= s || j >= s) return 0.0;
        return x[static_cast<std::size_t>(j) * s + i];
    };
    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (int j = 0; j < s; ++j)
            for (int i = 0; i < s; ++i)
                y[static_cast<std::size_t>(j) * s + i] =
                    h2inv * (4.0 * at(x, i, j) - at(x, i - 1, j) - at(x, i + 1, j) -
                             at(x, i, j - 1) - at(x, i, j + 1));
    };
    auto dot_v = [](const std::vector<double>& a, const std::vector<double>& b) {
        double d = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) d += a[i] * b[i];
        return d;
    };
    auto cg_solve = [&](const std::vector<double>& b, std::vector<double>& x) {
        std::vector<double> r = b, p = b, ap(nn);
        std::fill(x.begin(), x.end(), 0.0);
        double rr = dot_v(r, r);
        const double tol2 = 1e-24 * rr;
        for (int it = 0; it < 20 * s && rr > tol2; ++it) {
            apply(p, ap);
            double alpha = rr / dot_v(p, ap);
            for (std::size_t i = 0; i < nn; ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            double rr_new = dot_v(r, r);
            double beta = rr_new / rr;
            rr = rr_new;
            for (std::size_t i = 0; i < nn; ++i) p[i] = r[i] + beta * p[i];
        }
    };

    std::vector<double> x(nn, 1.0), y(nn), ax(nn);
    EigenResult res;
    double lambda_prev = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        cg_solve(x, y);
        double ny = std::sqrt(dot_v(y, y));
        ensure(ny > 0.0, "lambda1_unit_square_dirichlet: breakdown");
        for (auto& v : y) v /= ny;
        apply(y, ax);
        double lambda = dot_v(y, ax) / dot_v(y, y);
        res.iterations = it;
        res.lambda1 = lambda;
        if (it > 1 && std::abs(lambda - lambda_prev) <= rel_tol * std::abs(lambda)) {
            res.converged = true;
            break;
        }
        lambda_prev = lambda;
        x = y;
    }
    ensure(res.converged, "lambda1_unit_square_dirichlet: inverse iteration did not converge");
    return res;
}

/// Gr = F / (lambda1 nu^2) with the V'-based F.
inline double grashof(double F, double lambda1, double nu) {
    require(F >= 0.0, "grashof: F must be non-negative");
    require(lambda1 > 0.0 && nu > 0.0, "grashof: lambda1 and nu must be positive");
    return F / (lambda1 * nu * nu);
}

/// Domain constants for the periodic torus (exact mode scan).
inline Constants poincare_constant(const Grid& g, double F = 0.0, double nu = 1.0) {
    Constants c;
    c.lambda1 = lambda1_torus(g);
    c.rho = 1.0 / std::sqrt(c.lambda1);
    c.F = F;
    c.grashof = F > 0.0 ? grashof(F, c.lambda1, nu) : 0.0;
    return c;
}

/// Domain constants for the unit square with zero boundary values
/// (finite-difference eigensolve).
inline Constants poincare_constant_unit_square(int n, double F = 0.0, double nu = 1.0) {
    Constants c;
    c.lambda1 = lambda1_unit_square_dirichlet(n).lambda1;
    c.rho = 1.0 / std::sqrt(c.lambda1);
    c.F = F;
    c.grashof = F > 0.0 ? grashof(F, c.lambda1, nu) : 0.0;
    return c;
}

}  // namespace detproj::forms
