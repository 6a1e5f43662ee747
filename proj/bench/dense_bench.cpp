// Compares the OpenMP kernels against the serial reference at growing sizes.
#include <chrono>
#include <cstdio>

#include "ptheory/dense.hpp"
#include "ptheory/rng.hpp"

using namespace ptheory;

namespace {

DenseTensor random_matrix(Rng& rng, std::size_t n) {
  DenseTensor m = DenseTensor::matrix(Kind::complex_, n, n);
  for (cval& v : m.data) v = rng.gauss_scalar(Kind::complex_);
  return m;
}

template <typename F>
double time_ms(F&& fn, int reps) {
  auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

}  // namespace

int main() {
  Rng rng(7);
  std::printf("%-10s %8s %12s %12s %8s %10s\n", "kernel", "n", "serial(ms)", "openmp(ms)",
              "speedup", "residual");
  for (std::size_t n : {64, 128, 256, 384}) {
    DenseTensor a = random_matrix(rng, n);
    DenseTensor b = random_matrix(rng, n);
    const int reps = n <= 128 ? 10 : 3;

    DenseTensor ref = serial::matmul(a, b);
    DenseTensor par = matmul(a, b);
    double t_ref = time_ms([&] { serial::matmul(a, b); }, reps);
    double t_par = time_ms([&] { matmul(a, b); }, reps);
    std::printf("%-10s %8zu %12.3f %12.3f %8.2f %10.2e\n", "matmul", n, t_ref, t_par,
                t_ref / t_par, residual(ref, par));
  }
  for (std::size_t n : {16, 32, 48, 64}) {
    DenseTensor a = random_matrix(rng, n);
    DenseTensor b = random_matrix(rng, n);
    const int reps = n <= 32 ? 10 : 3;

    DenseTensor ref = serial::kron(a, b);
    DenseTensor par = kron(a, b);
    double t_ref = time_ms([&] { serial::kron(a, b); }, reps);
    double t_par = time_ms([&] { kron(a, b); }, reps);
    std::printf("%-10s %8zu %12.3f %12.3f %8.2f %10.2e\n", "kron", n, t_ref, t_par,
                t_ref / t_par, residual(ref, par));
  }
  return 0;
}
