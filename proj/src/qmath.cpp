// Copyright 2026 The mixedbath Authors
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

#include "mixedbath/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace mixedbath {

namespace {

std::string dims_to_string(const Dims& dims) {
    std::ostringstream out;
    out << '[';
    for (std::size_t k = 0; k < dims.size(); ++k) {
        out << (k ? "," : "") << dims[k];
    }
    out << ']';
    return out.str();
}

void require_same_layout(const QOperator& a, const QOperator& b, const char* op) {
    if (a.dims() != b.dims()) {
        throw DimensionError(std::string(op) + ": factor layouts differ " +
                             dims_to_string(a.dims()) + " vs " + dims_to_string(b.dims()));
    }
}

}  // namespace

std::size_t product(const Dims& dims) {
    std::size_t p = 1;
    for (auto d : dims) p *= d;
    return p;
}

QOperator::QOperator(Matrix data, Dims dims) : data_(std::move(data)), dims_(std::move(dims)) {
    if (data_.rows() != data_.cols()) {
        throw DimensionError("QOperator: matrix is not square");
    }
    if (dims_.empty()) {
        throw DimensionError("QOperator: empty factor list");
    }
    for (auto d : dims_) {
        if (d == 0) throw DimensionError("QOperator: zero factor dimension");
    }
    if (product(dims_) != static_cast<std::size_t>(data_.rows())) {
        throw DimensionError("QOperator: dims " + dims_to_string(dims_) +
                             " do not match matrix side " + std::to_string(data_.rows()));
    }
}

QOperator::QOperator(Matrix data) : data_(std::move(data)) {
    if (data_.rows() != data_.cols() || data_.rows() == 0) {
        throw DimensionError("QOperator: matrix is not square and nonempty");
    }
    dims_ = {static_cast<std::size_t>(data_.rows())};
}

QOperator QOperator::identity(const Dims& dims) {
    const auto n = static_cast<Eigen::Index>(product(dims));
    return {Matrix::Identity(n, n), dims};
}

QOperator QOperator::zero(const Dims& dims) {
    const auto n = static_cast<Eigen::Index>(product(dims));
    return {Matrix::Zero(n, n), dims};
}

double QOperator::hermiticity_error() const {
    return (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
}

double QOperator::max_abs() const { return data_.size() ? data_.cwiseAbs().maxCoeff() : 0.0; }

QOperator& QOperator::operator+=(const QOperator& other) {
    require_same_layout(*this, other, "operator+");
    data_ += other.data_;
    return *this;
}

QOperator& QOperator::operator-=(const QOperator& other) {
    require_same_layout(*this, other, "operator-");
    data_ -= other.data_;
    return *this;
}

QOperator& QOperator::operator*=(cplx s) {
    data_ *= s;
    return *this;
}

QOperator operator*(const QOperator& a, const QOperator& b) {
    require_same_layout(a, b, "operator*");
    return {a.data() * b.data(), a.dims()};
}

double max_abs_diff(const QOperator& a, const QOperator& b) {
    require_same_layout(a, b, "max_abs_diff");
    return (a.data() - b.data()).cwiseAbs().maxCoeff();
}

QOperator commutator(const QOperator& a, const QOperator& b) { return a * b - b * a; }

QOperator anticommutator(const QOperator& a, const QOperator& b) { return a * b + b * a; }

QOperator kron(const QOperator& a, const QOperator& b) {
    const Eigen::Index na = a.data().rows();
    const Eigen::Index nb = b.data().rows();
    Matrix out(na * nb, na * nb);
    for (Eigen::Index i = 0; i < na; ++i) {
        for (Eigen::Index j = 0; j < na; ++j) {
            out.block(i * nb, j * nb, nb, nb) = a.data()(i, j) * b.data();
        }
    }
    Dims dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    return {std::move(out), std::move(dims)};
}

QOperator kron(std::span<const QOperator> factors) {
    if (factors.empty()) throw DimensionError("kron: no factors");
    QOperator out = factors.front();
    for (std::size_t k = 1; k < factors.size(); ++k) out = kron(out, factors[k]);
    return out;
}

QOperator embed(const Matrix& op, std::size_t factor, const Dims& dims) {
    if (factor >= dims.size()) {
        throw DimensionError("embed: factor " + std::to_string(factor) + " outside " +
                             dims_to_string(dims));
    }
    if (static_cast<std::size_t>(op.rows()) != dims[factor] || op.rows() != op.cols()) {
        throw DimensionError("embed: operator side does not match factor dimension");
    }
    std::size_t left = 1;
    std::size_t right = 1;
    for (std::size_t k = 0; k < factor; ++k) left *= dims[k];
    for (std::size_t k = factor + 1; k < dims.size(); ++k) right *= dims[k];
    QOperator out = kron(QOperator::identity({left}), QOperator(op));
    out = kron(out, QOperator::identity({right}));
    return {std::move(out.data()), dims};
}

QOperator partial_trace(const QOperator& rho, std::span<const std::size_t> keep) {
    const Dims& dims = rho.dims();
    const std::size_t nf = dims.size();
    if (nf < 2) throw DimensionError("partial_trace: operator has fewer than two factors");
    if (keep.empty()) throw DimensionError("partial_trace: nothing to keep");

    std::vector<bool> kept(nf, false);
    for (auto k : keep) {
        if (k >= nf) {
            throw DimensionError("partial_trace: factor " + std::to_string(k) + " outside " +
                                 dims_to_string(dims));
        }
        if (kept[k]) throw DimensionError("partial_trace: factor listed twice");
        kept[k] = true;
    }

    Dims kept_dims;
    for (std::size_t k = 0; k < nf; ++k) {
        if (kept[k]) kept_dims.push_back(dims[k]);
    }
    const std::size_t dk = product(kept_dims);
    const std::size_t dt = rho.dim() / dk;

    // full index = sum_k digit_k * stride_k; split each full index into
    // (kept multi-index, traced multi-index).
    std::vector<std::size_t> stride(nf, 1);
    for (std::size_t k = nf - 1; k > 0; --k) stride[k - 1] = stride[k] * dims[k];

    std::vector<std::size_t> full(dk * dt);
    std::vector<std::size_t> digit(nf, 0);
    for (std::size_t idx = 0; idx < rho.dim(); ++idx) {
        std::size_t rem = idx;
        for (std::size_t k = 0; k < nf; ++k) {
            digit[k] = rem / stride[k];
            rem %= stride[k];
        }
        std::size_t ik = 0;
        std::size_t it = 0;
        for (std::size_t k = 0; k < nf; ++k) {
            if (kept[k]) {
                ik = ik * dims[k] + digit[k];
            } else {
                it = it * dims[k] + digit[k];
            }
        }
        full[ik * dt + it] = idx;
    }

    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    const Matrix& m = rho.data();
    for (std::size_t a = 0; a < dk; ++a) {
        for (std::size_t b = 0; b < dk; ++b) {
            cplx acc = 0.0;
            for (std::size_t t = 0; t < dt; ++t) {
                acc += m(static_cast<Eigen::Index>(full[a * dt + t]),
                         static_cast<Eigen::Index>(full[b * dt + t]));
            }
            out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
        }
    }
    return {std::move(out), std::move(kept_dims)};
}

QOperator partial_trace(const QOperator& rho, std::initializer_list<std::size_t> keep) {
    return partial_trace(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

EigenSystem herm_eig(const QOperator& h) {
    const double herr = h.hermiticity_error();
    if (herr > tol::kHermitian) {
        throw ContractError("herm_eig: input is not Hermitian (deviation " +
                            std::to_string(herr) + ")");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.data());
    if (solver.info() != Eigen::Success) {
        throw NumericalError("herm_eig: eigensolver did not converge");
    }
    return {solver.eigenvalues(), QOperator(solver.eigenvectors(), h.dims())};
}

QOperator mat_func_hermitian(const EigenSystem& eig, const std::function<double(double)>& f) {
    const auto n = eig.values.size();
    RealVector fvals(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double v = f(eig.values[k]);
        if (!std::isfinite(v)) {
            throw DomainError("mat_func_hermitian: function undefined at eigenvalue " +
                              std::to_string(eig.values[k]));
        }
        fvals[k] = v;
    }
    const Matrix& v = eig.vectors.data();
    Matrix out = v * fvals.cast<cplx>().asDiagonal() * v.adjoint();
    return {std::move(out), eig.vectors.dims()};
}

QOperator mat_func_hermitian(const QOperator& h, const std::function<double(double)>& f) {
    return mat_func_hermitian(herm_eig(h), f);
}

DensityDiagnostics density_diagnostics(const QOperator& rho) {
    DensityDiagnostics d;
    d.trace_error = std::abs(rho.trace() - 1.0);
    d.hermiticity_error = rho.hermiticity_error();
    // Symmetrise before the eigensolve so the bound is meaningful even for slightly
    // non-Hermitian input; the Hermiticity defect is reported separately.
    const Matrix sym = 0.5 * (rho.data() + rho.data().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = solver.eigenvalues()[0];
    return d;
}

void require_density_matrix(const QOperator& rho, const char* what) {
    const auto d = density_diagnostics(rho);
    if (d.trace_error > tol::kTrace) {
        throw ContractError(std::string(what) + ": trace deviates from 1 by " +
                            std::to_string(d.trace_error));
    }
    if (d.hermiticity_error > tol::kHermitian) {
        throw ContractError(std::string(what) + ": not Hermitian (deviation " +
                            std::to_string(d.hermiticity_error) + ")");
    }
    if (d.min_eigenvalue < tol::kMinEigenvalue) {
        throw ContractError(std::string(what) + ": negative eigenvalue " +
                            std::to_string(d.min_eigenvalue));
    }
}

FlooredLog floored_log(const QOperator& rho, double floor) {
    if (!(floor > 0.0)) throw DomainError("floored_log: floor must be positive");
    const auto eig = herm_eig(rho);
    RealVector lam = eig.values.cwiseMax(floor);
    lam /= lam.sum();
    FlooredLog out;
    out.min_eigenvalue = eig.values[0];
    out.floored = eig.values[0] < floor;
    const Matrix& v = eig.vectors.data();
    out.log = QOperator(v * lam.array().log().matrix().cast<cplx>().asDiagonal() * v.adjoint(),
                        rho.dims());
    return out;
}

double von_neumann_entropy(const QOperator& rho) {
    const auto eig = herm_eig(rho);
    double s = 0.0;
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        const double lam = eig.values[k];
        if (lam > 0.0) s -= lam * std::log(lam);
    }
    return s;
}

double relative_entropy(const QOperator& rho, const QOperator& sigma, double floor) {
    if (rho.dims() != sigma.dims()) throw DimensionError("relative_entropy: layouts differ");
    const double neg_entropy = -von_neumann_entropy(rho);

    const auto eig = herm_eig(sigma);
    const Matrix& v = eig.vectors.data();
    const Matrix rho_in_sigma_basis = v.adjoint() * rho.data() * v;
    RealVector mu = eig.values;
    bool any_floored = false;
    for (Eigen::Index k = 0; k < mu.size(); ++k) {
        if (mu[k] < floor) {
            if (rho_in_sigma_basis(k, k).real() > tol::kTrace) {
                return std::numeric_limits<double>::infinity();
            }
            mu[k] = floor;
            any_floored = true;
        }
    }
    if (any_floored) mu /= mu.sum();

    // tr(rho ln sigma) = sum_k <v_k|rho|v_k> ln mu_k
    double cross = 0.0;
    for (Eigen::Index k = 0; k < mu.size(); ++k) {
        cross += rho_in_sigma_basis(k, k).real() * std::log(mu[k]);
    }
    return neg_entropy - cross;
}

double real_trace_product(const QOperator& a, const QOperator& b, double imag_tol) {
    if (a.dims() != b.dims()) throw DimensionError("real_trace_product: layouts differ");
    // tr(AB) = sum_ij A_ij B_ji
    const cplx t = (a.data().array() * b.data().transpose().array()).sum();
    if (std::abs(t.imag()) > imag_tol) {
        throw NumericalError("trace expected to be real, imaginary part " +
                             std::to_string(t.imag()));
    }
    return t.real();
}

}  // namespace mixedbath
