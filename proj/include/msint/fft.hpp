#pragma once

#include <complex>
#include <vector>

namespace msint {

using cplx = std::complex<double>;
using Field = std::vector<double>;
// Half spectrum of a real field: modes p = 0..N/2.
using Spectrum = std::vector<cplx>;

// Real-to-half-complex transforms backed by FFTW. forward() has the
// e^{-i 2 pi p j / N} kernel and no scaling; inverse() divides by N, so
// inverse(forward(x)) == x.
Spectrum rfft(const Field& x);
Field irfft(const Spectrum& X, int n);

inline int half_size(int n) { return n / 2 + 1; }

// Signed frequency index of mode p in DFT ordering.
inline int signed_mode(int p, int n) { return p <= n / 2 ? p : p - n; }

// e^{-i 2 pi k / n}, exact at multiples of n/4.
cplx unit_root(long long k, int n);

}  // namespace msint
