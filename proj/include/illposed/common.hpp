#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace illposed {

// Error taxonomy shared by all modules. Every precondition failure throws a
// subclass so callers (and tests) can distinguish bad parameters from
// numerical breakdown or missing resources.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParameterError : Error { using Error::Error; };
struct ResolutionError : Error { using Error::Error; };
struct CoverageError : Error { using Error::Error; };
struct ConstructionError : Error { using Error::Error; };
struct StepSizeError : Error { using Error::Error; };
struct DivergenceError : Error { using Error::Error; };
struct DomainExitError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct ResourceError : Error { using Error::Error; };

inline constexpr const char* kVersion = "0.1.0";

// Compensated summation; the norm accumulations run over up to N^2 ~ 1.7e7
// terms and several tests assert 1e-10 relative agreement.
class KahanSum {
  public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

// Deterministic number formatting for CSV output: identical doubles always
// produce identical bytes.
inline std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string fmt_num(long long v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld", v);
    return buf;
}

// Static chunking over a fixed worker count; results must be written to
// per-index slots so the output is independent of scheduling.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                         unsigned max_threads = 0) {
    unsigned hw = std::thread::hardware_concurrency();
    unsigned workers = max_threads ? std::min(max_threads, hw) : hw;
    if (workers < 2 || n < 2) {
        body(0, n);
        return;
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

// Deterministic uniform doubles in [0,1) from a raw 64-bit generator. The
// standard distributions are implementation-defined; this is not.
template <typename Rng>
double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool is_power_of_two(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ParameterError("fit_slope: need >= 2 points");
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0) throw ParameterError("fit_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / denom;
}

}  // namespace illposed
