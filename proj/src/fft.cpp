#include "msint/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace msint {

namespace {

struct Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

// Planning is not thread-safe in FFTW; execution with the new-array
// interface is. Plans are created once per size under the lock and never
// destroyed.
Plans& plans_for(int n) {
  static std::mutex mtx;
  static std::map<int, Plans> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> r(n);
  std::vector<fftw_complex> c(n / 2 + 1);
  Plans p;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p.fwd = fftw_plan_dft_r2c_1d(n, r.data(), c.data(), flags);
  p.bwd = fftw_plan_dft_c2r_1d(n, c.data(), r.data(), flags);
  return cache.emplace(n, p).first->second;
}

}  // namespace

Spectrum rfft(const Field& x) {
  const int n = static_cast<int>(x.size());
  Spectrum out(half_size(n));
  Field in = x;
  fftw_execute_dft_r2c(plans_for(n).fwd, in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

Field irfft(const Spectrum& X, int n) {
  Spectrum in = X;  // c2r overwrites its input
  Field out(n);
  fftw_execute_dft_c2r(plans_for(n).bwd, reinterpret_cast<fftw_complex*>(in.data()),
                       out.data());
  const double s = 1.0 / n;
  for (double& v : out) v *= s;
  return out;
}

cplx unit_root(long long k, int n) {
  k %= n;
  if (k < 0) k += n;
  if ((4 * k) % n == 0) {
    switch ((4 * k) / n) {
      case 0: return {1, 0};
      case 1: return {0, -1};
      case 2: return {-1, 0};
      default: return {0, 1};
    }
  }
  // fold into [-n/2, n/2] so the angle stays small
  long long kk = k > n / 2 ? k - n : k;
  const double ang = -2.0 * std::numbers::pi * static_cast<double>(kk) / n;
  return {std::cos(ang), std::sin(ang)};
}

}  // namespace msint
