#pragma once

#include <complex>

namespace heatcalc {

/// Neumaier compensated accumulator. Summation order is whatever the caller
/// uses; with a fixed iteration order results are bit-reproducible.
class Accumulator {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class ComplexAccumulator {
public:
    void add(std::complex<double> z) {
        re_.add(z.real());
        im_.add(z.imag());
    }

    std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
    Accumulator re_;
    Accumulator im_;
};

} // namespace heatcalc
