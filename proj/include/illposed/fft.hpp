#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include "illposed/common.hpp"

namespace illposed::spectral {

// Thin wrapper over FFTW complex-to-complex 2D transforms.
//
// The FFTW planner is a process-wide resource and is not thread safe, so plan
// creation is serialized behind a mutex; execution uses the new-array
// interface on caller buffers and is lock free. Plans are created with
// FFTW_ESTIMATE (deterministic) and FFTW_UNALIGNED (valid for any buffer).
class Fft {
  public:
    static void forward(int n, const std::complex<double>* in, std::complex<double>* out) {
        execute(n, FFTW_FORWARD, in, out, false);
    }
    static void inverse(int n, const std::complex<double>* in, std::complex<double>* out) {
        execute(n, FFTW_BACKWARD, in, out, false);
    }
    static void inverse_1d(int n, const std::complex<double>* in, std::complex<double>* out) {
        execute(n, FFTW_BACKWARD, in, out, true);
    }

  private:
    static void execute(int n, int sign, const std::complex<double>* in, std::complex<double>* out,
                        bool one_dim) {
        if (in == out) throw ParameterError("Fft: in-place transform not supported");
        fftw_plan plan = cached_plan(one_dim ? -n : n, sign);
        fftw_execute_dft(plan,
                         reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                         reinterpret_cast<fftw_complex*>(out));
    }

    // key.first > 0: 2D n x n plan; key.first < 0: 1D plan of length -n
    static fftw_plan cached_plan(int n, int sign) {
        thread_local std::map<std::pair<int, int>, fftw_plan> cache;
        auto key = std::make_pair(n, sign);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;

        static std::mutex planner_mutex;
        std::lock_guard<std::mutex> lock(planner_mutex);
        fftw_plan plan = nullptr;
        if (n > 0) {
            std::vector<std::complex<double>> a(static_cast<std::size_t>(n) * n),
                b(static_cast<std::size_t>(n) * n);
            plan = fftw_plan_dft_2d(n, n, reinterpret_cast<fftw_complex*>(a.data()),
                                    reinterpret_cast<fftw_complex*>(b.data()), sign,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
        } else {
            std::vector<std::complex<double>> a(static_cast<std::size_t>(-n)),
                b(static_cast<std::size_t>(-n));
            plan = fftw_plan_dft_1d(-n, reinterpret_cast<fftw_complex*>(a.data()),
                                    reinterpret_cast<fftw_complex*>(b.data()), sign,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
        }
        if (!plan) throw ResourceError("Fft: plan creation failed for n=" + std::to_string(n));
        cache.emplace(key, plan);
        return plan;
    }
};

}  // namespace illposed::spectral
