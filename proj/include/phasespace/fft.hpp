#pragma once

// Thin FFTW3 wrapper. Transforms are unnormalized:
//   forward:  X_k = sum_j x_j exp(-2 pi i j k / n)
//   backward: x_j = sum_k X_k exp(+2 pi i j k / n)
// Plans are created once per shape (FFTW_ESTIMATE, so results do not depend on
// timing) and cached behind a mutex; execution is thread-safe.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace phasespace::fft {

using Complex = std::complex<double>;
using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void forward(std::span<Complex> data);
void backward(std::span<Complex> data);

// Transform every row (along the column index) of a row-major matrix.
void forward_rows(RowMajorMatrix& m);
void backward_rows(RowMajorMatrix& m);

// Transform every column (along the row index).
void forward_cols(RowMajorMatrix& m);
void backward_cols(RowMajorMatrix& m);

// Angular frequencies 2 pi k / (n * spacing) in FFT order
// (k = 0, 1, ..., n/2 - 1, -n/2, ..., -1).
std::vector<double> angular_frequencies(std::size_t n, double spacing);

// Swap halves: FFT order <-> ascending order (n even, so the map is an involution).
template <typename T>
void swap_halves(std::span<T> data) {
  const std::size_t half = data.size() / 2;
  for (std::size_t i = 0; i < half; ++i) std::swap(data[i], data[i + half]);
}

}  // namespace phasespace::fft
