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

#ifndef DUALCHAN_LINALG_HPP
#define DUALCHAN_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dualchan/matrix.hpp"

namespace dualchan {

//------------------------------------------------------------------------------
// Tensor products and multipartite index machinery
//------------------------------------------------------------------------------

// Kronecker product with a's indices major: entry ((i*rb+k),(j*cb+l)) = a(i,j)*b(k,l).
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline ComplexMatrix tensor(const std::vector<ComplexMatrix>& factors) {
  if (factors.empty()) return ComplexMatrix::Identity(1, 1);
  ComplexMatrix out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = tensor(out, factors[i]);
  return out;
}

namespace detail {

// Row-major offsets of every multi-index over the selected subsystems,
// all other subsystem digits held at zero.
inline std::vector<Index> subsystem_offsets(const SystemDims& dims,
                                            const std::vector<int>& subs) {
  std::vector<Index> strides(dims.dims.size());
  Index acc = 1;
  for (Index i = dims.size() - 1; i >= 0; --i) {
    strides[static_cast<std::size_t>(i)] = acc;
    acc *= dims[i];
  }
  Index count = 1;
  for (int s : subs) count *= dims[s];
  std::vector<Index> offsets(static_cast<std::size_t>(count), 0);
  Index repeat = 1;
  // Rightmost listed subsystem varies fastest.
  for (auto it = subs.rbegin(); it != subs.rend(); ++it) {
    const Index d = dims[*it];
    const Index stride = strides[static_cast<std::size_t>(*it)];
    for (Index v = 0; v < count; ++v) offsets[static_cast<std::size_t>(v)] +=
        ((v / repeat) % d) * stride;
    repeat *= d;
  }
  return offsets;
}

inline void check_subsystems(const SystemDims& dims, const std::vector<int>& subs) {
  std::vector<int> sorted = subs;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("subsystem list contains duplicates");
  for (int s : subs)
    if (s < 0 || s >= dims.size()) throw std::invalid_argument("subsystem index out of range");
}

}  // namespace detail

// Trace over the complement of `keep`. The kept factors stay in their
// original relative order.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, const SystemDims& dims,
                                   const std::vector<int>& keep) {
  if (m.rows() != m.cols()) throw std::invalid_argument("partial_trace: matrix must be square");
  if (m.rows() != dims.total())
    throw std::invalid_argument("partial_trace: dimension mismatch between matrix and dims");
  detail::check_subsystems(dims, keep);

  std::vector<int> traced;
  for (int s = 0; s < dims.size(); ++s)
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) traced.push_back(s);

  std::vector<int> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  const auto keep_off = detail::subsystem_offsets(dims, keep_sorted);
  const auto traced_off = detail::subsystem_offsets(dims, traced);

  const Index n = static_cast<Index>(keep_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) {
      Complex acc(0.0, 0.0);
      for (Index t = 0; t < static_cast<Index>(traced_off.size()); ++t)
        acc += m(keep_off[static_cast<std::size_t>(r)] + traced_off[static_cast<std::size_t>(t)],
                 keep_off[static_cast<std::size_t>(c)] + traced_off[static_cast<std::size_t>(t)]);
      out(r, c) = acc;
    }
  return out;
}

// Places x (acting on the listed subsystems, ascending order) into the full
// space, identity on the rest.
inline ComplexMatrix embed_on_subsystems(const ComplexMatrix& x, const SystemDims& dims,
                                         const std::vector<int>& positions) {
  detail::check_subsystems(dims, positions);
  if (!std::is_sorted(positions.begin(), positions.end()))
    throw std::invalid_argument("embed_on_subsystems: positions must be ascending");
  Index sub = 1;
  for (int p : positions) sub *= dims[p];
  if (x.rows() != sub || x.cols() != sub)
    throw std::invalid_argument("embed_on_subsystems: operator side does not match positions");

  std::vector<int> rest;
  for (int s = 0; s < dims.size(); ++s)
    if (std::find(positions.begin(), positions.end(), s) == positions.end()) rest.push_back(s);

  const auto pos_off = detail::subsystem_offsets(dims, positions);
  const auto rest_off = detail::subsystem_offsets(dims, rest);

  ComplexMatrix out = ComplexMatrix::Zero(dims.total(), dims.total());
  for (Index r = 0; r < sub; ++r)
    for (Index c = 0; c < sub; ++c) {
      const Complex v = x(r, c);
      if (v == Complex(0.0, 0.0)) continue;
      for (Index t = 0; t < static_cast<Index>(rest_off.size()); ++t)
        out(pos_off[static_cast<std::size_t>(r)] + rest_off[static_cast<std::size_t>(t)],
            pos_off[static_cast<std::size_t>(c)] + rest_off[static_cast<std::size_t>(t)]) = v;
    }
  return out;
}

//------------------------------------------------------------------------------
// Hermitian spectral calculus
//------------------------------------------------------------------------------

inline Eigen::SelfAdjointEigenSolver<ComplexMatrix> hermitian_eigs(const ComplexMatrix& m,
                                                                   double herm_tol = 1e-10) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eigs: matrix must be square");
  if (hermiticity_violation(m) > herm_tol)
    throw std::invalid_argument("hermitian_eigs: input not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(((m + m.adjoint()) * 0.5).eval());
  if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_eigs: solver failed");
  return es;
}

inline double min_hermitian_eigenvalue(const ComplexMatrix& m, double herm_tol = 1e-10) {
  return hermitian_eigs(m, herm_tol).eigenvalues().minCoeff();
}

inline double max_hermitian_eigenvalue(const ComplexMatrix& m, double herm_tol = 1e-10) {
  return hermitian_eigs(m, herm_tol).eigenvalues().maxCoeff();
}

// Spectral function m^exponent on the support, exponent in {1/2, -1/2}.
// Eigenvalues below tol are clipped to zero; for -1/2 this is the
// pseudo-inverse square root.
inline ComplexMatrix psd_power(const ComplexMatrix& m, double exponent, double tol = 1e-10) {
  if (exponent != 0.5 && exponent != -0.5)
    throw std::invalid_argument("psd_power: exponent must be 1/2 or -1/2");
  auto es = hermitian_eigs(m, tol);
  RealVector vals = es.eigenvalues();
  if (vals.minCoeff() < -tol)
    throw std::invalid_argument("psd_power: negative eigenvalue below -tol");
  RealVector mapped(vals.size());
  for (Index i = 0; i < vals.size(); ++i) {
    const double v = vals(i);
    if (exponent == 0.5) {
      mapped(i) = v > tol ? std::sqrt(v) : 0.0;
    } else {
      mapped(i) = v > tol ? 1.0 / std::sqrt(v) : 0.0;
    }
  }
  return es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().adjoint();
}

// Projector onto the span of eigenvectors with eigenvalue > tol.
inline ComplexMatrix support_projector(const ComplexMatrix& m, double tol = 1e-10) {
  auto es = hermitian_eigs(m, std::max(tol, 1e-10));
  ComplexMatrix proj = ComplexMatrix::Zero(m.rows(), m.cols());
  for (Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > tol)
      proj += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  return proj;
}

//------------------------------------------------------------------------------
// Structural operators
//------------------------------------------------------------------------------

// Unnormalized maximally entangled operator sum_{ij} |ii><jj|, trace d.
inline ComplexMatrix max_entangled_operator(Index d) {
  ComplexMatrix phi = ComplexMatrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) phi(i * d + i, j * d + j) = 1.0;
  return phi;
}

// Swap between factors of dimension d1 and d2: S(u (x) v) = v (x) u.
inline ComplexMatrix swap_operator(Index d1, Index d2) {
  ComplexMatrix s = ComplexMatrix::Zero(d1 * d2, d1 * d2);
  for (Index a = 0; a < d1; ++a)
    for (Index b = 0; b < d2; ++b) s(b * d1 + a, a * d2 + b) = 1.0;
  return s;
}

inline ComplexMatrix swap_operator(Index d) { return swap_operator(d, d); }

inline ComplexMatrix symmetric_projector(Index d) {
  return 0.5 * (identity(d * d) + swap_operator(d));
}

inline ComplexMatrix antisymmetric_projector(Index d) {
  return 0.5 * (identity(d * d) - swap_operator(d));
}

struct StructuralOperators {
  ComplexMatrix phi;
  ComplexMatrix swap;
  ComplexMatrix p_sym;
  ComplexMatrix p_anti;
};

inline StructuralOperators structural_operators(Index d) {
  if (d < 2) throw std::invalid_argument("structural_operators: d must be >= 2");
  return {max_entangled_operator(d), swap_operator(d), symmetric_projector(d),
          antisymmetric_projector(d)};
}

}  // namespace dualchan

#endif  // DUALCHAN_LINALG_HPP
