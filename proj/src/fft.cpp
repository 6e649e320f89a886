#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace fgrover::detail {
namespace {

// Planning is not thread-safe in FFTW; execution with fftw_execute_dft is.
// FFTW_UNALIGNED keeps results independent of the caller's buffer alignment.
class PlanCache {
public:
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

    fftw_plan get(std::size_t n, FftDirection direction)
    {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(n, direction);
        if (auto it = plans_.find(key); it != plans_.end())
            return it->second;
        auto* scratch = fftw_alloc_complex(n);
        const int sign = direction == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD;
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), scratch, scratch, sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(scratch);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, FftDirection>, fftw_plan> plans_;
};

PlanCache& cache()
{
    static PlanCache instance;
    return instance;
}

} // namespace

void fft_inplace(std::span<std::complex<double>> data, FftDirection direction)
{
    if (data.empty())
        return;
    fftw_plan plan = cache().get(data.size(), direction);
    auto* buffer = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buffer, buffer);
}

} // namespace fgrover::detail
