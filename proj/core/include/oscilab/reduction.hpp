#pragma once

#include <complex>
#include <cstddef>
#include <functional>

namespace oscilab {

/// Neumaier compensated accumulator. Summation order is whatever the caller
/// feeds it; results are identical across runs for identical input order.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class ComplexSum {
public:
    void add(std::complex<double> z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_, im_;
};

/// Runs fn(i) for i in [0, count) over `threads` workers in static
/// contiguous chunks. Each index writes only its own outputs, so results do
/// not depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  unsigned threads = 0);

/// Process-wide default worker count (0 = hardware concurrency).
void set_default_threads(unsigned threads);
unsigned default_threads();

}  // namespace oscilab
