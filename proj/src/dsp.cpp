#include "ruenergy/dsp.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace ruenergy::dsp {

namespace {

// FFTW planning is not thread-safe; execution on new arrays is. Plans are
// created once per (size, direction) under a lock and kept for the process.
class PlanCache {
public:
    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        auto* buf = fftw_alloc_complex(n);
        const auto plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
        plans_.emplace(key, plan);
        return plan;
    }

    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void execute(std::span<cplx> data, int sign) {
    if (data.size() <= 1) return;
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(cache().get(data.size(), sign), p, p);
}

} // namespace

void fft_forward(std::span<cplx> data) { execute(data, FFTW_FORWARD); }
void fft_inverse(std::span<cplx> data) { execute(data, FFTW_BACKWARD); }

CVec dft_unitary(std::span<const cplx> x) {
    CVec out(x.begin(), x.end());
    fft_forward(out);
    const double scale = 1.0 / std::sqrt(static_cast<double>(out.size()));
    for (auto& v : out) v *= scale;
    return out;
}

CVec idft_unitary(std::span<const cplx> x) {
    CVec out(x.begin(), x.end());
    fft_inverse(out);
    const double scale = 1.0 / std::sqrt(static_cast<double>(out.size()));
    for (auto& v : out) v *= scale;
    return out;
}

double energy(std::span<const cplx> x) {
    return std::accumulate(x.begin(), x.end(), 0.0, [](double acc, cplx v) { return acc + std::norm(v); });
}

double mean_power(std::span<const cplx> x) { return x.empty() ? 0.0 : energy(x) / static_cast<double>(x.size()); }

} // namespace ruenergy::dsp
