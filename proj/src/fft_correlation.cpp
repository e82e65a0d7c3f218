#include "fft_correlation.hpp"

#include <fftw3.h>

#include <complex>
#include <mutex>

namespace qcorr::detail {

namespace {

// The FFTW planner is not thread safe; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class Plan {
public:
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    static Plan forward(int n, double* in, fftw_complex* out) {
        std::lock_guard lock(planner_mutex());
        return Plan(fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE));
    }
    static Plan backward(int n, fftw_complex* in, double* out) {
        std::lock_guard lock(planner_mutex());
        return Plan(fftw_plan_dft_c2r_1d(n, in, out, FFTW_ESTIMATE));
    }

    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }

    void execute() const { fftw_execute(plan_); }

private:
    explicit Plan(fftw_plan p) : plan_(p) {}
    fftw_plan plan_;
};

std::size_t padded_size(std::size_t min_size) {
    std::size_t n = 1;
    while (n < min_size) n <<= 1;
    return n;
}

}  // namespace

std::vector<double> fft_cross_correlation(std::span<const double> a, std::span<const double> b,
                                          std::size_t max_lag) {
    const std::size_t len = a.size();
    // Zero padding to len + max_lag keeps circular wrap-around away from |l| <= max_lag.
    const std::size_t n = padded_size(len + max_lag + 1);
    const std::size_t half = n / 2 + 1;

    std::vector<double> ra(n, 0.0), rb(n, 0.0), out(n, 0.0);
    std::vector<std::complex<double>> fa(half), fb(half);
    std::copy(a.begin(), a.end(), ra.begin());
    std::copy(b.begin(), b.end(), rb.begin());

    const int ni = static_cast<int>(n);
    auto* fa_ptr = reinterpret_cast<fftw_complex*>(fa.data());
    auto* fb_ptr = reinterpret_cast<fftw_complex*>(fb.data());
    {
        const auto pa = Plan::forward(ni, ra.data(), fa_ptr);
        pa.execute();
        const auto pb = Plan::forward(ni, rb.data(), fb_ptr);
        pb.execute();
    }
    for (std::size_t k = 0; k < half; ++k) fa[k] = std::conj(fa[k]) * fb[k];
    {
        const auto inv = Plan::backward(ni, fa_ptr, out.data());
        inv.execute();
    }

    std::vector<double> c(2 * max_lag + 1);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t k = 1; k <= max_lag; ++k) c[max_lag - k] = out[n - k] * scale;
    for (std::size_t k = 0; k <= max_lag; ++k) c[max_lag + k] = out[k] * scale;
    return c;
}

}  // namespace qcorr::detail
