// fft.hpp - thin FFTW wrapper with a fixed normalization convention.
//
// forward() is the plain DFT, inverse() divides by the length, so
// inverse(forward(x)) == x. Plans are created with FFTW_ESTIMATE, which
// keeps the algorithm choice (and therefore the rounding) deterministic
// across runs. Any length is supported, including primes.

#pragma once

#include "mtsfm/types.hpp"

#include <cstddef>

namespace mtsfm {

class Fft {
public:
    explicit Fft(std::size_t length);
    ~Fft();

    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;
    Fft(Fft&& other) noexcept;
    Fft& operator=(Fft&& other) noexcept;

    std::size_t size() const { return length_; }

    // Unscaled DFT: out[k] = sum_n in[n] exp(-2*pi*i*k*n/N).
    void forward(const ComplexVector& in, ComplexVector& out);
    // Scaled inverse: out[n] = (1/N) sum_k in[k] exp(+2*pi*i*k*n/N).
    void inverse(const ComplexVector& in, ComplexVector& out);

    ComplexVector forward(const ComplexVector& in);
    ComplexVector inverse(const ComplexVector& in);

private:
    void execute(const ComplexVector& in, ComplexVector& out, bool fwd);

    std::size_t length_ = 0;
    void* plan_forward_ = nullptr;  // fftw_plan
    void* plan_inverse_ = nullptr;  // fftw_plan
    void* buffer_in_ = nullptr;     // fftw_complex*, plan-aligned
    void* buffer_out_ = nullptr;    // fftw_complex*
};

} // namespace mtsfm
