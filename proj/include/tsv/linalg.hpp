// Copyright 2026 The tsvsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TSV_LINALG_HPP
#define TSV_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <vector>

#include "tsv/errors.hpp"

namespace tsv {

using cx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr double kNormTol = 1e-12;
inline constexpr double kHermTol = 1e-10;
inline constexpr double kDefaultGroupTol = 1e-8;
// Dense storage only; every experiment in scope fits in 4 qubits.
inline constexpr std::size_t kMaxAmplitudes = 1024;

/// The one place amplitudes are conjugated: inner(a, b) = Σ conj(a_i) b_i.
inline cx inner(const CVec& a, const CVec& b) { return a.dot(b); }

/// Complex amplitude vector over a product of subsystems.
struct Ket {
    CVec amplitudes;
    std::vector<int> dims;

    Ket(CVec a, std::vector<int> d);

    int dim() const { return static_cast<int>(amplitudes.size()); }
    double norm() const { return amplitudes.norm(); }
    bool is_normalized(double tol = kNormTol) const;
    Ket normalized() const;

    /// Computational basis state |index⟩ of a single d-dimensional system.
    static Ket basis(int d, int index);
};

/// Square operator over the same subsystem layout as Ket.
struct LinearOp {
    CMat matrix;
    std::vector<int> dims;

    LinearOp(CMat m, std::vector<int> d);

    int dim() const { return static_cast<int>(matrix.rows()); }
    LinearOp adjoint() const { return LinearOp(matrix.adjoint().eval(), dims); }
    bool is_hermitian(double tol = kHermTol) const;
    bool is_unitary(double tol = kHermTol) const;

    static LinearOp identity(std::vector<int> dims);
    /// |k⟩⟨k| outer product.
    static LinearOp outer(const Ket& k);
};

Ket tensor(const Ket& a, const Ket& b);
LinearOp tensor(const LinearOp& a, const LinearOp& b);

/// Grouped eigendecomposition of a Hermitian operator: one projector per
/// eigenvalue cluster, eigenvalues ascending.
struct HermitianEigensystem {
    std::vector<double> eigenvalues;
    std::vector<LinearOp> projectors;

    std::size_t size() const { return eigenvalues.size(); }
};

/// Eigenvalues closer than group_tol (chained) share one eigenspace projector.
HermitianEigensystem eigensystem(const LinearOp& op,
                                 double group_tol = kDefaultGroupTol);

/// Trace out every subsystem not in `keep`; kept subsystems stay in their
/// original order.
LinearOp partial_trace(const LinearOp& op, const std::vector<int>& keep);

/// Lift `op`, acting on the (possibly permuted) subsystems `targets`, to the
/// full space described by `full_dims`.
LinearOp embed(const LinearOp& op, const std::vector<int>& targets,
               const std::vector<int>& full_dims);

/// Hermitian operator bundled with its grouped eigendecomposition; the unit
/// of "measurable variable" everywhere in this library.
class Observable {
  public:
    explicit Observable(LinearOp op, double group_tol = kDefaultGroupTol);

    /// Build from known spectral data (exact, bypasses the solver). Validates
    /// that the projectors are an orthogonal resolution of identity and that
    /// eigenvalues are ascending and distinct.
    static Observable from_projectors(std::vector<double> eigenvalues,
                                      std::vector<LinearOp> projectors);

    static Observable sigma_x();
    static Observable sigma_y();
    static Observable sigma_z();
    /// Two-outcome observable {0: complement, 1: |k⟩⟨k|}.
    static Observable projector_onto(const Ket& k);

    const LinearOp& op() const { return op_; }
    const HermitianEigensystem& eigensystem() const { return eig_; }
    const std::vector<int>& dims() const { return op_.dims; }
    int dim() const { return op_.dim(); }
    std::size_t outcome_count() const { return eig_.size(); }
    double eigenvalue(std::size_t outcome) const {
        return eig_.eigenvalues.at(outcome);
    }
    const LinearOp& projector(std::size_t outcome) const {
        return eig_.projectors.at(outcome);
    }

    /// Outcome index whose eigenvalue is within `tol` of `value`.
    std::size_t outcome_of_eigenvalue(double value, double tol = 1e-9) const;

  private:
    Observable(LinearOp op, HermitianEigensystem eig);

    LinearOp op_;
    HermitianEigensystem eig_;
};

}  // namespace tsv

#endif  // TSV_LINALG_HPP
