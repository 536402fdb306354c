// Copyright 2026 The dualchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DUALCHAN_MATRIX_HPP
#define DUALCHAN_MATRIX_HPP

#include <Eigen/Dense>

#include <complex>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace dualchan {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Ordered list of subsystem dimensions. Composite indices are row-major:
// the leftmost tensor factor is the most significant digit, matching the
// index-major convention of tensor().
struct SystemDims {
  std::vector<Index> dims;

  SystemDims() = default;
  SystemDims(std::initializer_list<Index> ds) : dims(ds) { validate(); }
  explicit SystemDims(std::vector<Index> ds) : dims(std::move(ds)) { validate(); }

  Index size() const { return static_cast<Index>(dims.size()); }
  Index operator[](Index i) const { return dims[static_cast<std::size_t>(i)]; }

  Index total() const {
    return std::accumulate(dims.begin(), dims.end(), Index{1},
                           [](Index a, Index b) { return a * b; });
  }

  void validate() const {
    for (Index d : dims) {
      if (d < 1) throw std::invalid_argument("SystemDims: every local dimension must be >= 1");
    }
  }
};

inline ComplexMatrix identity(Index n) { return ComplexMatrix::Identity(n, n); }

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  return max_abs(a - b);
}

inline double hermiticity_violation(const ComplexMatrix& m) {
  return max_abs(m - m.adjoint());
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = 1e-10) {
  return m.rows() == m.cols() && hermiticity_violation(m) <= tol;
}

inline bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

// Trace of an operator expected to be real up to roundoff.
inline double real_trace(const ComplexMatrix& m, double imag_tol = 1e-9) {
  Complex t = m.trace();
  if (std::abs(t.imag()) > imag_tol)
    throw std::runtime_error("real_trace: trace has imaginary part " + std::to_string(t.imag()));
  return t.real();
}

}  // namespace dualchan

#endif  // DUALCHAN_MATRIX_HPP
