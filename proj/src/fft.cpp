#include "opcalc/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace opcalc::fft {
namespace {

std::mutex plan_mutex;

struct C2CPlans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

// FFTW plans with FFTW_ESTIMATE are deterministic and may be reused for any
// array with the same layout via fftw_execute_dft.
C2CPlans& c2c_plans(const Grid& g, fftw_complex* buf) {
    static std::map<std::pair<int, int>, C2CPlans> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_pair(g.dim, g.n);
    auto it = cache.find(key);
    if (it == cache.end()) {
        int dims[4] = {g.n, g.n, g.n, g.n};
        C2CPlans p;
        p.fwd = fftw_plan_dft(g.dim, dims, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        p.bwd = fftw_plan_dft(g.dim, dims, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        it = cache.emplace(key, p).first;
    }
    return it->second;
}

fftw_plan r2r_plan(const Grid& g, double* buf, fftw_r2r_kind kind) {
    static std::map<std::tuple<int, int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_tuple(g.dim, g.n, static_cast<int>(kind));
    auto it = cache.find(key);
    if (it == cache.end()) {
        int dims[4] = {g.n, g.n, g.n, g.n};
        fftw_r2r_kind kinds[4] = {kind, kind, kind, kind};
        fftw_plan p = fftw_plan_r2r(g.dim, dims, buf, buf, kinds, FFTW_ESTIMATE);
        it = cache.emplace(key, p).first;
    }
    return it->second;
}

} // namespace

void forward(const Grid& g, std::vector<cplx>& data) {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(c2c_plans(g, buf).fwd, buf, buf);
}

void backward(const Grid& g, std::vector<cplx>& data) {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(c2c_plans(g, buf).bwd, buf, buf);
    double scale = 1.0 / static_cast<double>(data.size());
    for (auto& x : data) x *= scale;
}

void dst2(const Grid& g, std::vector<double>& data) {
    fftw_plan p = r2r_plan(g, data.data(), FFTW_RODFT10);
    fftw_execute_r2r(p, data.data(), data.data());
}

void dst3(const Grid& g, std::vector<double>& data) {
    fftw_plan p = r2r_plan(g, data.data(), FFTW_RODFT01);
    fftw_execute_r2r(p, data.data(), data.data());
    double scale = 1.0;
    for (int i = 0; i < g.dim; ++i) scale /= 2.0 * g.n;
    for (auto& x : data) x *= scale;
}

} // namespace opcalc::fft
