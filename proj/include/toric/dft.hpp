#pragma once

#include "toric/group.hpp"

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include <complex>
#include <numbers>

namespace toric {

enum class DftMethod {
  /// Dense n x n twiddle matrix per axis; the reference path.
  Naive,
  /// Eigen's FFT per axis line.
  Fast,
};

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

/// W(j, g) = exp(2 pi i j g / n), with the exponent reduced modulo n first.
template <typename Scalar>
ComplexMatrix<Scalar> twiddle_matrix(Index n) {
  ComplexMatrix<Scalar> w(n, n);
  const Scalar base = Scalar(2) * std::numbers::pi_v<Scalar> / Scalar(n);
  for (Index j = 0; j < n; ++j)
    for (Index g = 0; g < n; ++g) w(j, g) = std::polar(Scalar(1), base * Scalar((j * g) % n));
  return w;
}

/// In-place transform along one axis of a row-major table over G.
///
/// For a fixed block of leading coordinates the data is an n x stride
/// row-major matrix, i.e. a stride x n column-major one, so the axis
/// transform is a right multiplication by the (symmetric) twiddle matrix.
template <typename Scalar>
void dft_axis(ComplexVector<Scalar>& data, const GridDims& dims, Index axis, DftMethod method) {
  const Index n = dims.size(axis);
  const Index stride = dims.stride(axis);
  const Index block = n * stride;
  const Index blocks = dims.order() / block;
  if (n == 1) return;
  if (method == DftMethod::Naive) {
    const ComplexMatrix<Scalar> w = twiddle_matrix<Scalar>(n);
    for (Index b = 0; b < blocks; ++b) {
      Eigen::Map<ComplexMatrix<Scalar>> slab(data.data() + b * block, stride, n);
      slab = (slab * w).eval();
    }
    return;
  }
  Eigen::FFT<Scalar> fft;
  fft.SetFlag(Eigen::FFT<Scalar>::Unscaled);
  std::vector<std::complex<Scalar>> line(static_cast<std::size_t>(n)), out;
  for (Index b = 0; b < blocks; ++b)
    for (Index s = 0; s < stride; ++s) {
      std::complex<Scalar>* base = data.data() + b * block + s;
      for (Index g = 0; g < n; ++g) line[static_cast<std::size_t>(g)] = base[g * stride];
      // The unscaled inverse transform carries the exp(+2 pi i j g / n) sign.
      fft.inv(out, line);
      for (Index j = 0; j < n; ++j) base[j * stride] = out[static_cast<std::size_t>(j)];
    }
}

/// lambda(chi) = sum_g values(g) chi(g) for every character, axis by axis.
template <typename Derived>
ComplexVector<typename Derived::Scalar> dft_grid(const Eigen::MatrixBase<Derived>& values, const GridDims& dims,
                                                DftMethod method = DftMethod::Naive) {
  using Scalar = typename Derived::Scalar;
  eigen_assert(values.size() == dims.order());
  ComplexVector<Scalar> data = values.template cast<std::complex<Scalar>>();
  for (Index axis = 0; axis < dims.rank(); ++axis) dft_axis<Scalar>(data, dims, axis, method);
  return data;
}

}  // namespace toric
