#pragma once

#include <complex>
#include <random>
#include <vector>

#include "detproj/fft.hpp"

namespace detproj::spectral {

using Complex = std::complex<double>;

/// Collocation grid of the periodic torus [0,L]^dim with m points per axis.
/// Spectral storage uses the FFT index order: axis index i maps to the
/// integer wavenumber i (i <= m/2) or i - m (otherwise); physical wavenumbers
/// are (2 pi / L) times that integer.
struct Grid {
    int dim = 2;
    int m = 64;
    double length = 2.0 * pi;

    std::size_t size() const {
        std::size_t n = 1;
        for (int i = 0; i < dim; ++i) n *= static_cast<std::size_t>(m);
        return n;
    }

    int wave_index(int i) const { return i <= m / 2 ? i : i - m; }

    /// 2/3-rule truncation radius in integer wavenumbers. Strict form
    /// 3*kcut < m, so products of retained modes never alias back into the
    /// retained band; for m = 64 this is the usual |k| <= 21.
    int dealias_cut() const { return (m - 1) / 3; }

    double wavenumber_scale() const { return 2.0 * pi / length; }

    double dx() const { return length / m; }

    bool operator==(const Grid& o) const {
        return dim == o.dim && m == o.m && length == o.length;
    }
};

/// Divergence-free velocity field stored as truncated Fourier coefficients,
/// one complex spectrum per velocity component. Invariants maintained by the
/// construction helpers: Hermitian symmetry (real field), zero mean mode, and
/// coefficients outside the dealias ball identically zero.
class Field {
  public:
    Field() = default;
    explicit Field(const Grid& g) : grid_(g), comp_(g.dim, std::vector<Complex>(g.size())) {}

    const Grid& grid() const { return grid_; }
    int n_components() const { return static_cast<int>(comp_.size()); }
    std::vector<Complex>& component(int c) { return comp_[c]; }
    const std::vector<Complex>& component(int c) const { return comp_[c]; }

    std::size_t flat_index(int ix, int iy, int iz = 0) const {
        const int m = grid_.m;
        return static_cast<std::size_t>(ix) +
               static_cast<std::size_t>(m) * (static_cast<std::size_t>(iy) +
                                              static_cast<std::size_t>(m) *
                                                  static_cast<std::size_t>(iz));
    }

    Field& operator+=(const Field& o) {
        for (int c = 0; c < n_components(); ++c)
            for (std::size_t i = 0; i < comp_[c].size(); ++i) comp_[c][i] += o.comp_[c][i];
        return *this;
    }
    Field& operator-=(const Field& o) {
        for (int c = 0; c < n_components(); ++c)
            for (std::size_t i = 0; i < comp_[c].size(); ++i) comp_[c][i] -= o.comp_[c][i];
        return *this;
    }
    Field& operator*=(double s) {
        for (auto& comp : comp_)
            for (auto& v : comp) v *= s;
        return *this;
    }
    friend Field operator-(const Field& a, const Field& b) {
        Field r = a;
        r -= b;
        return r;
    }
    friend Field operator+(const Field& a, const Field& b) {
        Field r = a;
        r += b;
        return r;
    }

  private:
    Grid grid_;
    std::vector<std::vector<Complex>> comp_;
};

/// Visits every spectral slot once with its integer wavenumber vector.
template <class F>
void for_each_mode(const Grid& g, F&& fn) {
    const int m = g.m;
    if (g.dim == 2) {
        std::size_t idx = 0;
        for (int iy = 0; iy < m; ++iy) {
            int ky = g.wave_index(iy);
            for (int ix = 0; ix < m; ++ix, ++idx) fn(idx, g.wave_index(ix), ky, 0);
        }
    } else {
        std::size_t idx = 0;
        for (int iz = 0; iz < m; ++iz) {
            int kz = g.wave_index(iz);
            for (int iy = 0; iy < m; ++iy) {
                int ky = g.wave_index(iy);
                for (int ix = 0; ix < m; ++ix, ++idx) fn(idx, g.wave_index(ix), ky, kz);
            }
        }
    }
}

/// Zeroes the mean mode and everything outside the dealias ball.
inline void dealias(Field& f) {
    const Grid& g = f.grid();
    const double kcut2 = static_cast<double>(g.dealias_cut()) * g.dealias_cut();
    for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
        double k2 = static_cast<double>(kx) * kx + static_cast<double>(ky) * ky +
                    static_cast<double>(kz) * kz;
        if (k2 > kcut2 || k2 == 0.0)
            for (int c = 0; c < f.n_components(); ++c) f.component(c)[idx] = 0.0;
    });
}

/// Mode-wise projection onto the plane orthogonal to k (Leray projector);
/// eliminates the pressure and enforces divergence-freeness exactly.
inline void leray_project(Field& f) {
    const Grid& g = f.grid();
    for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
        double k2 = static_cast<double>(kx) * kx + static_cast<double>(ky) * ky +
                    static_cast<double>(kz) * kz;
        if (k2 == 0.0) return;
        Complex kd{0.0, 0.0};
        kd += static_cast<double>(kx) * f.component(0)[idx];
        kd += static_cast<double>(ky) * f.component(1)[idx];
        if (g.dim == 3) kd += static_cast<double>(kz) * f.component(2)[idx];
        kd /= k2;
        f.component(0)[idx] -= kd * static_cast<double>(kx);
        f.component(1)[idx] -= kd * static_cast<double>(ky);
        if (g.dim == 3) f.component(2)[idx] -= kd * static_cast<double>(kz);
    });
}

/// Restores exact Hermitian symmetry u_hat(-k) = conj(u_hat(k)).
inline void enforce_hermitian(Field& f) {
    const Grid& g = f.grid();
    const int m = g.m;
    auto conj_index = [m](int i) { return i == 0 ? 0 : m - i; };
    for (int c = 0; c < f.n_components(); ++c) {
        auto& a = f.component(c);
        for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
            int ix = (kx + m) % m, iy = (ky + m) % m, iz = (kz + m) % m;
            std::size_t cidx = f.flat_index(conj_index(ix), conj_index(iy), conj_index(iz));
            if (cidx < idx) return;  // handle each pair once
            Complex avg = 0.5 * (a[idx] + std::conj(a[cidx]));
            a[idx] = avg;
            a[cidx] = std::conj(avg);
        });
    }
}

/// Max over modes of |k . u_hat(k)| (physical wavenumbers).
inline double divergence_linf(const Field& f) {
    const Grid& g = f.grid();
    const double kappa = g.wavenumber_scale();
    double worst = 0.0;
    for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
        Complex div = kappa * (static_cast<double>(kx) * f.component(0)[idx] +
                               static_cast<double>(ky) * f.component(1)[idx]);
        if (g.dim == 3) div += kappa * static_cast<double>(kz) * f.component(2)[idx];
        worst = std::max(worst, std::abs(div));
    });
    return worst;
}

/// Physical-space samples of one component on the collocation grid.
inline std::vector<Complex> to_physical(const Field& f, int comp) {
    std::vector<Complex> buf = f.component(comp);
    fft_for(f.grid().dim, f.grid().m).backward(buf.data());
    return buf;
}

/// Seeded band-limited divergence-free random field: each retained mode with
/// |k| <= kmax_band gets a complex Gaussian amplitude projected onto the
/// divergence-free plane, then the whole field is scaled to L2 norm
/// `amplitude` (physical normalization, see forms::norms).
inline Field random_divfree(const Grid& g, int kmax_band, double amplitude,
                            std::mt19937_64& rng) {
    require(kmax_band >= 1 && kmax_band <= g.dealias_cut(),
            "random_divfree: band must fit inside the dealias ball");
    Field f(g);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double band2 = static_cast<double>(kmax_band) * kmax_band;
    for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
        double k2 = static_cast<double>(kx) * kx + static_cast<double>(ky) * ky +
                    static_cast<double>(kz) * kz;
        if (k2 == 0.0 || k2 > band2) return;
        for (int c = 0; c < g.dim; ++c)
            f.component(c)[idx] = Complex(gauss(rng), gauss(rng));
    });
    enforce_hermitian(f);
    leray_project(f);
    dealias(f);
    // normalize the physical L2 norm
    double sum = 0.0;
    for (int c = 0; c < g.dim; ++c)
        for (const Complex& v : f.component(c)) sum += std::norm(v);
    double l2 = std::sqrt(sum * std::pow(g.length, g.dim));
    ensure(l2 > 0.0, "random_divfree: empty band");
    f *= amplitude / l2;
    return f;
}

/// Evaluates spectral components at arbitrary physical points by direct mode
/// summation over the nonzero coefficients. Build once per field snapshot;
/// evaluation cost is O(#active modes) per point.
class PointEvaluator {
  public:
    explicit PointEvaluator(const Field& f) : field_(&f) {
        const Grid& g = f.grid();
        kmax_ = 0;
        for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
            bool active = false;
            for (int c = 0; c < f.n_components(); ++c)
                if (std::norm(f.component(c)[idx]) > 0.0) active = true;
            if (!active) return;
            modes_.push_back({idx, kx, ky, kz});
            kmax_ = std::max({kmax_, std::abs(kx), std::abs(ky), std::abs(kz)});
        });
    }

    double operator()(int comp, const Vec3& x) const {
        const Grid& g = field_->grid();
        const double kappa = g.wavenumber_scale();
        // per-axis twiddle tables e^{i k kappa x_a}, k = -kmax..kmax
        const int w = 2 * kmax_ + 1;
        thread_local std::vector<Complex> tw;
        tw.assign(static_cast<std::size_t>(w) * 3, Complex(1.0, 0.0));
        for (int a = 0; a < g.dim; ++a) {
            Complex step = std::polar(1.0, kappa * x[a]);
            Complex cur(1.0, 0.0);
            Complex* t = tw.data() + static_cast<std::size_t>(a) * w;
            t[kmax_] = cur;
            for (int k = 1; k <= kmax_; ++k) {
                cur *= step;
                t[kmax_ + k] = cur;
                t[kmax_ - k] = std::conj(cur);
            }
        }
        const Complex* tx = tw.data();
        const Complex* ty = tw.data() + w;
        const Complex* tz = tw.data() + 2 * w;
        const auto& coeff = field_->component(comp);
        Complex acc(0.0, 0.0);
        if (g.dim == 2) {
            for (const Mode& md : modes_)
                acc += coeff[md.idx] * tx[kmax_ + md.kx] * ty[kmax_ + md.ky];
        } else {
            for (const Mode& md : modes_)
                acc += coeff[md.idx] * tx[kmax_ + md.kx] * ty[kmax_ + md.ky] *
                       tz[kmax_ + md.kz];
        }
        return acc.real();
    }

    std::size_t n_active_modes() const { return modes_.size(); }

  private:
    struct Mode {
        std::size_t idx;
        int kx, ky, kz;
    };
    const Field* field_;
    std::vector<Mode> modes_;
    int kmax_ = 0;
};

}  // namespace detproj::spectral
