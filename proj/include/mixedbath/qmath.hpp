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

// qmath.hpp: dimension-aware dense complex linear algebra for density matrices

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mixedbath/errors.hpp"

namespace mixedbath {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<std::size_t>;

inline constexpr cplx kI{0.0, 1.0};

namespace tol {
// Density-matrix invariants.
inline constexpr double kTrace = 1e-9;
inline constexpr double kHermitian = 1e-10;
inline constexpr double kMinEigenvalue = -1e-9;
// Default eigenvalue floor applied before taking logarithms.
inline constexpr double kLogFloor = 1e-12;
}  // namespace tol

std::size_t product(const Dims& dims);

// Dense square complex matrix tagged with the dimensions of its tensor factors.
// The product of the factor dimensions always equals the matrix side.
class QOperator {
public:
    QOperator() = default;
    QOperator(Matrix data, Dims dims);
    // Single-factor operator.
    explicit QOperator(Matrix data);

    static QOperator identity(const Dims& dims);
    static QOperator zero(const Dims& dims);

    const Matrix& data() const noexcept { return data_; }
    // Mutable access to the entries; the shape must not change.
    Matrix& data() noexcept { return data_; }
    const Dims& dims() const noexcept { return dims_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.rows()); }
    std::size_t num_factors() const noexcept { return dims_.size(); }

    cplx trace() const { return data_.trace(); }
    QOperator adjoint() const { return {data_.adjoint(), dims_}; }
    // max_ij |A_ij - conj(A_ji)|
    double hermiticity_error() const;
    double max_abs() const;

    QOperator& operator+=(const QOperator& other);
    QOperator& operator-=(const QOperator& other);
    QOperator& operator*=(cplx s);

    friend QOperator operator+(QOperator a, const QOperator& b) { return a += b; }
    friend QOperator operator-(QOperator a, const QOperator& b) { return a -= b; }
    friend QOperator operator*(QOperator a, cplx s) { return a *= s; }
    friend QOperator operator*(cplx s, QOperator a) { return a *= s; }
    friend QOperator operator*(const QOperator& a, const QOperator& b);

private:
    Matrix data_;
    Dims dims_;
};

// Max-norm distance between two operators with the same layout.
double max_abs_diff(const QOperator& a, const QOperator& b);

QOperator commutator(const QOperator& a, const QOperator& b);
QOperator anticommutator(const QOperator& a, const QOperator& b);

// Kronecker product; the left factor indexes blocks, dims are concatenated.
QOperator kron(const QOperator& a, const QOperator& b);
QOperator kron(std::span<const QOperator> factors);

// Identity on every factor except `factor`, where `op` acts.
QOperator embed(const Matrix& op, std::size_t factor, const Dims& dims);

// Trace out every factor not listed in `keep`. Factor order of the result
// follows the original layout regardless of the order of `keep`.
QOperator partial_trace(const QOperator& rho, std::span<const std::size_t> keep);
QOperator partial_trace(const QOperator& rho, std::initializer_list<std::size_t> keep);

struct EigenSystem {
    RealVector values;  // ascending
    QOperator vectors;  // columns are eigenvectors
};

// Throws ContractError if h is not Hermitian within tol::kHermitian.
EigenSystem herm_eig(const QOperator& h);

// V diag(f(lambda)) V^dagger. Throws DomainError if f is not finite at an eigenvalue.
QOperator mat_func_hermitian(const QOperator& h, const std::function<double(double)>& f);
QOperator mat_func_hermitian(const EigenSystem& eig, const std::function<double(double)>& f);

struct DensityDiagnostics {
    double trace_error = 0.0;
    double hermiticity_error = 0.0;
    double min_eigenvalue = 0.0;

    bool valid() const {
        return trace_error <= tol::kTrace && hermiticity_error <= tol::kHermitian &&
               min_eigenvalue >= tol::kMinEigenvalue;
    }
};

DensityDiagnostics density_diagnostics(const QOperator& rho);
// Throws ContractError naming the first violated invariant.
void require_density_matrix(const QOperator& rho, const char* what = "density matrix");

// ln of rho after clamping eigenvalues to max(lambda, floor) and renormalising.
struct FlooredLog {
    QOperator log;
    double min_eigenvalue = 0.0;  // before flooring
    bool floored = false;         // some eigenvalue was below the floor
};
FlooredLog floored_log(const QOperator& rho, double floor = tol::kLogFloor);

// -sum lambda ln lambda with 0 ln 0 = 0; negative round-off eigenvalues are clamped.
double von_neumann_entropy(const QOperator& rho);

// tr(rho ln rho - rho ln sigma). sigma's eigenvalues are floored at `floor`;
// returns +infinity if rho carries weight on a direction where sigma had to be floored.
double relative_entropy(const QOperator& rho, const QOperator& sigma,
                        double floor = tol::kLogFloor);

// Real part of tr(a b), throwing NumericalError if the imaginary part exceeds `imag_tol`.
double real_trace_product(const QOperator& a, const QOperator& b, double imag_tol = 1e-8);

}  // namespace mixedbath
