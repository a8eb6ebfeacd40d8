#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "detproj/core.hpp"

namespace detproj::spectral {

namespace detail {
inline std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace detail

/// In-place complex-to-complex FFT on an m^dim array (all axes length m).
/// Forward normalizes by m^dim, so forward(backward(x)) == x and the spectral
/// coefficients satisfy u(x) = sum_k u_hat(k) e^{i k.x}.
///
/// Plans use FFTW_ESTIMATE | FFTW_UNALIGNED: planning is deterministic and
/// execution works on arbitrary caller buffers.
class Fft {
  public:
    Fft(int dim, int m) : dim_(dim), m_(m), n_(1) {
        require(dim >= 1 && dim <= 3, "Fft: dim must be 1..3");
        require(m >= 2, "Fft: need m >= 2");
        for (int i = 0; i < dim; ++i) n_ *= static_cast<std::size_t>(m);
        std::vector<std::complex<double>> scratch(n_);
        int dims[3] = {m, m, m};
        std::lock_guard<std::mutex> lock(detail::fftw_mutex());
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        fwd_ = fftw_plan_dft(dim, dims, buf, buf, FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
        bwd_ = fftw_plan_dft(dim, dims, buf, buf, FFTW_BACKWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
        ensure(fwd_ && bwd_, "Fft: plan creation failed");
    }

    ~Fft() {
        std::lock_guard<std::mutex> lock(detail::fftw_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }

    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    std::size_t size() const { return n_; }

    /// physical -> spectral
    void forward(std::complex<double>* data) const {
        auto* buf = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(fwd_, buf, buf);
        const double scale = 1.0 / static_cast<double>(n_);
        for (std::size_t i = 0; i < n_; ++i) data[i] *= scale;
    }

    /// spectral -> physical
    void backward(std::complex<double>* data) const {
        auto* buf = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(bwd_, buf, buf);
    }

  private:
    int dim_, m_;
    std::size_t n_;
    fftw_plan fwd_, bwd_;
};

/// Shared plan cache keyed by (dim, m).
inline const Fft& fft_for(int dim, int m) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<Fft>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{dim, m}];
    if (!slot) slot = std::make_unique<Fft>(dim, m);
    return *slot;
}

}  // namespace detproj::spectral
