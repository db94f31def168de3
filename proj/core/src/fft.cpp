#include "mtsfm/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

namespace mtsfm {

namespace {
// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}
} // namespace

Fft::Fft(std::size_t length) : length_(length)
{
    if (length_ == 0) {
        throw DimensionError("Fft: length must be positive");
    }
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto* in = fftw_alloc_complex(length_);
    auto* out = fftw_alloc_complex(length_);
    if (in == nullptr || out == nullptr) {
        fftw_free(in);
        fftw_free(out);
        throw Error("Fft: allocation failed");
    }
    buffer_in_ = in;
    buffer_out_ = out;
    plan_forward_ = fftw_plan_dft_1d(static_cast<int>(length_), in, out,
                                     FFTW_FORWARD, FFTW_ESTIMATE);
    plan_inverse_ = fftw_plan_dft_1d(static_cast<int>(length_), in, out,
                                     FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft()
{
    if (buffer_in_ == nullptr && plan_forward_ == nullptr) {
        return;
    }
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_forward_ != nullptr) {
        fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
    }
    if (plan_inverse_ != nullptr) {
        fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
    }
    fftw_free(buffer_in_);
    fftw_free(buffer_out_);
}

Fft::Fft(Fft&& other) noexcept
    : length_(other.length_),
      plan_forward_(other.plan_forward_),
      plan_inverse_(other.plan_inverse_),
      buffer_in_(other.buffer_in_),
      buffer_out_(other.buffer_out_)
{
    other.plan_forward_ = nullptr;
    other.plan_inverse_ = nullptr;
    other.buffer_in_ = nullptr;
    other.buffer_out_ = nullptr;
    other.length_ = 0;
}

Fft& Fft::operator=(Fft&& other) noexcept
{
    if (this != &other) {
        this->~Fft();
        new (this) Fft(std::move(other));
    }
    return *this;
}

void Fft::execute(const ComplexVector& in, ComplexVector& out, bool fwd)
{
    if (static_cast<std::size_t>(in.size()) != length_) {
        throw DimensionError("Fft: input length does not match plan");
    }
    out.resize(static_cast<Eigen::Index>(length_));
    auto* bin = static_cast<fftw_complex*>(buffer_in_);
    auto* bout = static_cast<fftw_complex*>(buffer_out_);
    std::memcpy(bin, in.data(), length_ * sizeof(fftw_complex));
    fftw_execute(static_cast<fftw_plan>(fwd ? plan_forward_ : plan_inverse_));
    // std::complex<double> is layout-compatible with fftw_complex.
    std::memcpy(static_cast<void*>(out.data()), bout,
                length_ * sizeof(fftw_complex));
    if (!fwd) {
        out /= static_cast<double>(length_);
    }
}

void Fft::forward(const ComplexVector& in, ComplexVector& out)
{
    execute(in, out, true);
}

void Fft::inverse(const ComplexVector& in, ComplexVector& out)
{
    execute(in, out, false);
}

ComplexVector Fft::forward(const ComplexVector& in)
{
    ComplexVector out;
    forward(in, out);
    return out;
}

ComplexVector Fft::inverse(const ComplexVector& in)
{
    ComplexVector out;
    inverse(in, out);
    return out;
}

} // namespace mtsfm
