#include "gfmm/simulator.hpp"

#include "gfmm/error.hpp"
#include "gfmm/rng.hpp"
#include "gfmm/summation.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstring>
#include <memory>
#include <mutex>
#include <sstream>

namespace gfmm {

SampledSeries SampledSeries::prefix(std::size_t n) const {
    if (n < 1 || n > values.size()) throw DomainError("SampledSeries::prefix: length out of range");
    SampledSeries out{std::vector<double>(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n)), dt,
                      origin, seed};
    return out;
}

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

template <class T>
std::unique_ptr<T[], FftwFree> fftw_buffer(std::size_t n) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
    if (!p) throw CapacityError("simulate: FFT buffer allocation failed");
    return std::unique_ptr<T[], FftwFree>(p);
}

class Plan {
public:
    explicit Plan(fftw_plan p) : p_(p) {}
    ~Plan() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(p_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    fftw_plan get() const { return p_; }

private:
    fftw_plan p_;
};

// y[t] = sum_n c[n] u[t + M - n], u.size() == y.size() + M.
void convolve_direct(std::span<const double> c, std::span<const double> u, std::span<double> y) {
    const std::size_t m = c.size();
    std::vector<double> rev(c.rbegin(), c.rend());
    for (std::size_t t = 0; t < y.size(); ++t) y[t] = pairwise_dot(rev, u.subspan(t + 1, m));
}

void convolve_fft(std::span<const double> c, std::span<const double> u, std::span<double> y) {
    const std::size_t m = c.size();
    const std::size_t len = std::bit_ceil(2 * m);
    const std::size_t step = len - m + 1;
    const std::size_t nc = len / 2 + 1;

    auto time = fftw_buffer<double>(len);
    auto freq = fftw_buffer<fftw_complex>(nc);
    auto kernel = fftw_buffer<fftw_complex>(nc);
    std::unique_ptr<Plan> fwd, inv;
    {
        std::lock_guard lock(fftw_planner_mutex());
        fwd = std::make_unique<Plan>(fftw_plan_dft_r2c_1d(static_cast<int>(len), time.get(), freq.get(), FFTW_ESTIMATE));
        inv = std::make_unique<Plan>(fftw_plan_dft_c2r_1d(static_cast<int>(len), freq.get(), time.get(), FFTW_ESTIMATE));
    }

    std::fill_n(time.get(), len, 0.0);
    std::copy(c.begin(), c.end(), time.get());
    fftw_execute(fwd->get());
    std::memcpy(kernel.get(), freq.get(), sizeof(fftw_complex) * nc);

    const double scale = 1.0 / static_cast<double>(len);
    // Full-convolution index i = t + M; segment for outputs i0..i0+step-1 starts at u[i0 - M + 1].
    for (std::size_t t0 = 0; t0 < y.size(); t0 += step) {
        const std::size_t start = t0 + 1;
        const std::size_t avail = std::min(len, u.size() - start);
        std::copy_n(u.begin() + static_cast<std::ptrdiff_t>(start), avail, time.get());
        std::fill(time.get() + avail, time.get() + len, 0.0);
        fftw_execute(fwd->get());
        for (std::size_t k = 0; k < nc; ++k) {
            const std::complex<double> a(freq[k][0], freq[k][1]);
            const std::complex<double> b(kernel[k][0], kernel[k][1]);
            const auto p = a * b;
            freq[k][0] = p.real();
            freq[k][1] = p.imag();
        }
        fftw_execute(inv->get());
        const std::size_t count = std::min(step, y.size() - t0);
        for (std::size_t i = 0; i < count; ++i) y[t0 + i] = time[m - 1 + i] * scale;
    }
}

}  // namespace

SampledSeries simulate(const GegenbauerSpec& spec, std::span<const double> coeffs, std::size_t length,
                       std::uint64_t seed, const SimulateOptions& options) {
    spec.validate();
    if (length < 1) throw DomainError("simulate: length must be at least 1");
    if (coeffs.size() != spec.n_terms) throw DomainError("simulate: coefficient table does not match n_terms");

    const std::size_t m = spec.n_terms;
    const bool use_fft = m > options.direct_max_terms;
    const std::size_t fft_len = use_fft ? std::bit_ceil(2 * m) : 0;
    const std::size_t doubles = 2 * (length + m) + 2 * fft_len + (use_fft ? 0 : m);
    if (doubles > options.memory_budget_bytes / sizeof(double)) {
        std::ostringstream msg;
        msg << "simulate: length + n_terms = " << length + m << " exceeds the memory budget of "
            << options.memory_budget_bytes << " bytes";
        throw CapacityError(msg.str());
    }

    std::vector<double> u(length + m);
    NormalStream(seed).fill(u.data(), u.size());
    for (auto& e : u) e *= spec.sigma_eps;

    SampledSeries out;
    out.values.resize(length);
    out.seed = seed;
    if (use_fft)
        convolve_fft(coeffs, u, out.values);
    else
        convolve_direct(coeffs, u, out.values);
    return out;
}

SampledSeries simulate(const GegenbauerSpec& spec, std::size_t length, std::uint64_t seed,
                       const SimulateOptions& options) {
    spec.validate();
    const auto c = gegenbauer_coeffs(spec, spec.n_terms - 1);
    return simulate(spec, c, length, seed, options);
}

SampledSeries rescale(const SampledSeries& series, double new_dt) {
    if (!(new_dt > 0.0) || !std::isfinite(new_dt)) throw DomainError("rescale: new_dt must be positive");
    SampledSeries out = series;
    out.dt = new_dt;
    out.origin = series.origin / series.dt * new_dt;
    return out;
}

}  // namespace gfmm
