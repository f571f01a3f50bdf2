#include "rlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace rlab {

namespace {

// Plans are reused per (size, direction).  FFTW planning touches global state,
// so the whole create-or-lookup path sits behind one mutex; fftw_execute_dft
// on distinct arrays is thread-safe and runs outside the lock.
std::mutex g_plan_mutex;
std::map<std::pair<std::size_t, int>, fftw_plan>& plan_cache() {
    static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
    return cache;
}

fftw_plan get_plan(std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto key = std::make_pair(n, sign);
    auto it = plan_cache().find(key);
    if (it != plan_cache().end()) return it->second;
    // Planned once on a scratch buffer; executed later on caller arrays via
    // the new-array interface.  FFTW_UNALIGNED keeps the plan valid for
    // arbitrary vector storage.
    std::vector<std::complex<double>> scratch(n);
    auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), ptr, ptr, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("fft_inplace: planner failed");
    plan_cache().emplace(key, plan);
    return plan;
}

}  // namespace

void fft_inplace(std::vector<std::complex<double>>& data, bool inverse) {
    if (data.empty()) throw std::invalid_argument("fft_inplace: empty input");
    if (data.size() > static_cast<std::size_t>(1) << 30)
        throw std::invalid_argument("fft_inplace: size too large");
    const int sign = inverse ? FFTW_BACKWARD : FFTW_FORWARD;
    fftw_plan plan = get_plan(data.size(), sign);
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace rlab
