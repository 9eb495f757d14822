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

#include "tsv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tsv {

namespace {

std::size_t dims_product(const std::vector<int>& dims) {
    std::size_t p = 1;
    for (int d : dims) {
        if (d < 1) throw BadDimension("subsystem dimension must be >= 1");
        p *= static_cast<std::size_t>(d);
    }
    return p;
}

void check_amplitude_cap(std::size_t n) {
    if (n > kMaxAmplitudes) {
        throw BadDimension("total dimension " + std::to_string(n) +
                           " exceeds the cap of " +
                           std::to_string(kMaxAmplitudes) + " amplitudes");
    }
}

std::vector<int> concat_dims(const std::vector<int>& a,
                             const std::vector<int>& b) {
    std::vector<int> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace

Ket::Ket(CVec a, std::vector<int> d) : amplitudes(std::move(a)), dims(std::move(d)) {
    std::size_t n = dims_product(dims);
    check_amplitude_cap(n);
    if (n != static_cast<std::size_t>(amplitudes.size())) {
        throw DimMismatch("ket length " + std::to_string(amplitudes.size()) +
                          " does not match the product of its dims");
    }
    if (!amplitudes.allFinite()) throw Error("ket has non-finite amplitudes");
}

bool Ket::is_normalized(double tol) const {
    return std::abs(norm() - 1.0) <= tol;
}

Ket Ket::normalized() const {
    double n = norm();
    if (n == 0.0) throw Error("cannot normalize the zero vector");
    return Ket(amplitudes / n, dims);
}

Ket Ket::basis(int d, int index) {
    if (d < 1) throw BadDimension("basis: dimension must be >= 1");
    if (index < 0 || index >= d) throw BadSubsystem("basis index out of range");
    CVec v = CVec::Zero(d);
    v(index) = 1.0;
    return Ket(std::move(v), {d});
}

LinearOp::LinearOp(CMat m, std::vector<int> d)
    : matrix(std::move(m)), dims(std::move(d)) {
    if (matrix.rows() != matrix.cols()) {
        throw DimMismatch("operator matrix must be square");
    }
    std::size_t n = dims_product(dims);
    check_amplitude_cap(n);
    if (n != static_cast<std::size_t>(matrix.rows())) {
        throw DimMismatch("operator side does not match the product of its dims");
    }
    if (!matrix.allFinite()) throw Error("operator has non-finite entries");
}

bool LinearOp::is_hermitian(double tol) const {
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool LinearOp::is_unitary(double tol) const {
    CMat delta = matrix.adjoint() * matrix - CMat::Identity(dim(), dim());
    return delta.cwiseAbs().maxCoeff() <= tol;
}

LinearOp LinearOp::identity(std::vector<int> dims) {
    std::size_t n = dims_product(dims);
    return LinearOp(CMat::Identity(static_cast<int>(n), static_cast<int>(n)),
                    std::move(dims));
}

LinearOp LinearOp::outer(const Ket& k) {
    return LinearOp(k.amplitudes * k.amplitudes.adjoint(), k.dims);
}

Ket tensor(const Ket& a, const Ket& b) {
    const int na = a.dim(), nb = b.dim();
    check_amplitude_cap(static_cast<std::size_t>(na) * nb);
    CVec out(na * nb);
    for (int i = 0; i < na; ++i) {
        out.segment(i * nb, nb) = a.amplitudes(i) * b.amplitudes;
    }
    return Ket(std::move(out), concat_dims(a.dims, b.dims));
}

LinearOp tensor(const LinearOp& a, const LinearOp& b) {
    const int na = a.dim(), nb = b.dim();
    check_amplitude_cap(static_cast<std::size_t>(na) * nb);
    CMat out(na * nb, na * nb);
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < na; ++j) {
            out.block(i * nb, j * nb, nb, nb) = a.matrix(i, j) * b.matrix;
        }
    }
    return LinearOp(std::move(out), concat_dims(a.dims, b.dims));
}

HermitianEigensystem eigensystem(const LinearOp& op, double group_tol) {
    if (!op.is_hermitian()) {
        throw NotHermitian("eigensystem requires a Hermitian operator");
    }
    if (group_tol < 0.0) throw Error("group tolerance must be nonnegative");

    Eigen::SelfAdjointEigenSolver<CMat> solver(op.matrix);
    if (solver.info() != Eigen::Success) {
        throw Error("eigendecomposition failed to converge");
    }
    const Eigen::VectorXd& vals = solver.eigenvalues();  // ascending
    const CMat& vecs = solver.eigenvectors();

    HermitianEigensystem out;
    int start = 0;
    const int n = op.dim();
    while (start < n) {
        int end = start + 1;
        while (end < n && vals(end) - vals(end - 1) <= group_tol) ++end;
        const int width = end - start;
        CMat block = vecs.middleCols(start, width);
        out.eigenvalues.push_back(vals.segment(start, width).mean());
        out.projectors.emplace_back((block * block.adjoint()).eval(), op.dims);
        start = end;
    }
    return out;
}

LinearOp partial_trace(const LinearOp& op, const std::vector<int>& keep) {
    const int n = static_cast<int>(op.dims.size());
    std::vector<bool> kept(n, false);
    for (int k : keep) {
        if (k < 0 || k >= n) {
            throw BadSubsystem("partial_trace: subsystem index " +
                               std::to_string(k) + " out of range");
        }
        if (kept[k]) {
            throw BadSubsystem("partial_trace: duplicate subsystem index");
        }
        kept[k] = true;
    }

    std::vector<int> keep_sorted, traced;
    std::vector<int> keep_dims, traced_dims;
    for (int i = 0; i < n; ++i) {
        if (kept[i]) {
            keep_sorted.push_back(i);
            keep_dims.push_back(op.dims[i]);
        } else {
            traced.push_back(i);
            traced_dims.push_back(op.dims[i]);
        }
    }

    // Row-major strides of the full index space.
    std::vector<std::size_t> stride(n, 1);
    for (int i = n - 2; i >= 0; --i) {
        stride[i] = stride[i + 1] * static_cast<std::size_t>(op.dims[i + 1]);
    }

    const std::size_t dk = dims_product(keep_dims);
    const std::size_t dt = dims_product(traced_dims);

    auto offset = [&](const std::vector<int>& subs, std::size_t flat,
                      const std::vector<int>& sub_dims) {
        std::size_t off = 0;
        for (int i = static_cast<int>(subs.size()) - 1; i >= 0; --i) {
            off += (flat % static_cast<std::size_t>(sub_dims[i])) *
                   stride[subs[i]];
            flat /= static_cast<std::size_t>(sub_dims[i]);
        }
        return off;
    };

    CMat out = CMat::Zero(static_cast<int>(dk), static_cast<int>(dk));
    for (std::size_t r = 0; r < dk; ++r) {
        const std::size_t ro = offset(keep_sorted, r, keep_dims);
        for (std::size_t c = 0; c < dk; ++c) {
            const std::size_t co = offset(keep_sorted, c, keep_dims);
            cx sum = 0.0;
            for (std::size_t t = 0; t < dt; ++t) {
                const std::size_t to = offset(traced, t, traced_dims);
                sum += op.matrix(static_cast<Eigen::Index>(ro + to),
                                 static_cast<Eigen::Index>(co + to));
            }
            out(static_cast<int>(r), static_cast<int>(c)) = sum;
        }
    }
    return LinearOp(std::move(out), keep_dims);
}

LinearOp embed(const LinearOp& op, const std::vector<int>& targets,
               const std::vector<int>& full_dims) {
    const int n = static_cast<int>(full_dims.size());
    std::vector<bool> used(n, false);
    std::vector<int> target_dims;
    for (int t : targets) {
        if (t < 0 || t >= n) {
            throw BadSubsystem("embed: target index " + std::to_string(t) +
                               " out of range");
        }
        if (used[t]) throw BadSubsystem("embed: duplicate target index");
        used[t] = true;
        target_dims.push_back(full_dims[t]);
    }
    if (target_dims != op.dims) {
        throw DimMismatch("embed: operator dims do not match target dims");
    }

    std::vector<int> rest;
    std::vector<int> rest_dims;
    for (int i = 0; i < n; ++i) {
        if (!used[i]) {
            rest.push_back(i);
            rest_dims.push_back(full_dims[i]);
        }
    }

    std::vector<std::size_t> stride(n, 1);
    for (int i = n - 2; i >= 0; --i) {
        stride[i] = stride[i + 1] * static_cast<std::size_t>(full_dims[i + 1]);
    }
    auto offset = [&](const std::vector<int>& subs, std::size_t flat,
                      const std::vector<int>& sub_dims) {
        std::size_t off = 0;
        for (int i = static_cast<int>(subs.size()) - 1; i >= 0; --i) {
            off += (flat % static_cast<std::size_t>(sub_dims[i])) *
                   stride[subs[i]];
            flat /= static_cast<std::size_t>(sub_dims[i]);
        }
        return off;
    };

    const std::size_t full = dims_product(full_dims);
    check_amplitude_cap(full);
    const std::size_t dop = static_cast<std::size_t>(op.dim());
    const std::size_t drest = dims_product(rest_dims);

    CMat out = CMat::Zero(static_cast<int>(full), static_cast<int>(full));
    for (std::size_t x = 0; x < drest; ++x) {
        const std::size_t xo = offset(rest, x, rest_dims);
        for (std::size_t r = 0; r < dop; ++r) {
            const std::size_t ro = xo + offset(targets, r, target_dims);
            for (std::size_t c = 0; c < dop; ++c) {
                const std::size_t co = xo + offset(targets, c, target_dims);
                out(static_cast<Eigen::Index>(ro),
                    static_cast<Eigen::Index>(co)) =
                    op.matrix(static_cast<int>(r), static_cast<int>(c));
            }
        }
    }
    return LinearOp(std::move(out), full_dims);
}

Observable::Observable(LinearOp op, double group_tol)
    : op_(std::move(op)), eig_(tsv::eigensystem(op_, group_tol)) {}

Observable::Observable(LinearOp op, HermitianEigensystem eig)
    : op_(std::move(op)), eig_(std::move(eig)) {}

Observable Observable::from_projectors(std::vector<double> eigenvalues,
                                       std::vector<LinearOp> projectors) {
    if (eigenvalues.empty() || eigenvalues.size() != projectors.size()) {
        throw Error("from_projectors: need one projector per eigenvalue");
    }
    const int d = projectors.front().dim();
    CMat sum = CMat::Zero(d, d);
    CMat weighted = CMat::Zero(d, d);
    for (std::size_t i = 0; i < projectors.size(); ++i) {
        const LinearOp& p = projectors[i];
        if (p.dims != projectors.front().dims) {
            throw DimMismatch("from_projectors: mismatched projector dims");
        }
        if (!p.is_hermitian()) {
            throw NotHermitian("from_projectors: projector not Hermitian");
        }
        if ((p.matrix * p.matrix - p.matrix).cwiseAbs().maxCoeff() > kHermTol) {
            throw Error("from_projectors: projector not idempotent");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if ((projectors[j].matrix * p.matrix).cwiseAbs().maxCoeff() >
                kHermTol) {
                throw Error("from_projectors: projectors not orthogonal");
            }
        }
        if (i > 0 && eigenvalues[i] <= eigenvalues[i - 1]) {
            throw Error("from_projectors: eigenvalues must be ascending");
        }
        sum += p.matrix;
        weighted += eigenvalues[i] * p.matrix;
    }
    if ((sum - CMat::Identity(d, d)).cwiseAbs().maxCoeff() > kHermTol) {
        throw Error("from_projectors: projectors do not sum to identity");
    }
    LinearOp op(std::move(weighted), projectors.front().dims);
    HermitianEigensystem eig{std::move(eigenvalues), std::move(projectors)};
    return Observable(std::move(op), std::move(eig));
}

namespace {
LinearOp qubit_op(cx a, cx b, cx c, cx d) {
    CMat m(2, 2);
    m << a, b, c, d;
    return LinearOp(std::move(m), {2});
}
}  // namespace

Observable Observable::sigma_x() {
    // Eigenvectors |∓⟩ = (|0⟩ ∓ |1⟩)/√2; projectors written exactly.
    return from_projectors(
        {-1.0, +1.0},
        {qubit_op(0.5, -0.5, -0.5, 0.5), qubit_op(0.5, 0.5, 0.5, 0.5)});
}

Observable Observable::sigma_y() {
    const cx i(0.0, 1.0);
    return from_projectors(
        {-1.0, +1.0},
        {qubit_op(0.5, 0.5 * i, -0.5 * i, 0.5),
         qubit_op(0.5, -0.5 * i, 0.5 * i, 0.5)});
}

Observable Observable::sigma_z() {
    return from_projectors(
        {-1.0, +1.0}, {qubit_op(0, 0, 0, 1), qubit_op(1, 0, 0, 0)});
}

Observable Observable::projector_onto(const Ket& k) {
    if (!k.is_normalized()) {
        throw NotNormalized("projector_onto requires a normalized ket");
    }
    LinearOp p = LinearOp::outer(k);
    LinearOp complement(CMat::Identity(k.dim(), k.dim()) - p.matrix, k.dims);
    return from_projectors({0.0, 1.0}, {std::move(complement), std::move(p)});
}

std::size_t Observable::outcome_of_eigenvalue(double value, double tol) const {
    for (std::size_t i = 0; i < eig_.size(); ++i) {
        if (std::abs(eig_.eigenvalues[i] - value) <= tol) return i;
    }
    throw UnknownLabel("no outcome with eigenvalue " + std::to_string(value));
}

}  // namespace tsv
