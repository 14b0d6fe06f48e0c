/**
 * Copyright 2026 The qfp-herald Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "qfp/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qfp {

SqueezingVector::SqueezingVector(std::vector<double> r, double r_max) : r_(std::move(r)) {
    for (double v : r_) {
        if (!(v >= 0.0 && v <= r_max)) {
            throw Error(ErrorCode::InvalidArguments,
                        "squeezing " + std::to_string(v) + " outside [0, " + std::to_string(r_max) + "]");
        }
    }
}

SqueezingVector SqueezingVector::centered(int n_modes, int center_index, std::span<const double> center,
                                          double r_max) {
    const int width = static_cast<int>(center.size());
    if (width % 2 == 0) {
        throw Error(ErrorCode::InvalidArguments, "squeezed block width must be odd");
    }
    const int first = center_index - width / 2;
    if (first < 0 || first + width > n_modes) {
        throw Error(ErrorCode::InvalidArguments, "squeezed block does not fit on the lattice");
    }
    std::vector<double> r(static_cast<std::size_t>(n_modes), 0.0);
    std::copy(center.begin(), center.end(), r.begin() + first);
    return SqueezingVector(std::move(r), r_max);
}

std::vector<int> SqueezingVector::support() const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i) {
        if (r_[static_cast<std::size_t>(i)] > 0.0) out.push_back(i);
    }
    return out;
}

double SqueezingVector::cosh_product() const {
    double p = 1.0;
    for (double v : r_) p *= std::cosh(v);
    return p;
}

RMatrix SymplecticOrthogonal::assemble() const {
    const auto n = sa.rows();
    RMatrix s(2 * n, 2 * n);
    s.topLeftCorner(n, n) = sa;
    s.topRightCorner(n, n) = sb;
    s.bottomLeftCorner(n, n) = -sb;
    s.bottomRightCorner(n, n) = sa;
    return s;
}

double SymplecticOrthogonal::block_identity_error() const {
    const RMatrix id = RMatrix::Identity(sa.rows(), sa.cols());
    const RMatrix atb = sa.transpose() * sb;
    const RMatrix abt = sa * sb.transpose();
    double err = (atb - atb.transpose()).cwiseAbs().maxCoeff();
    err = std::max(err, (abt - abt.transpose()).cwiseAbs().maxCoeff());
    err = std::max(err, (sa.transpose() * sa + sb.transpose() * sb - id).cwiseAbs().maxCoeff());
    err = std::max(err, (sa * sa.transpose() + sb * sb.transpose() - id).cwiseAbs().maxCoeff());
    return err;
}

RMatrix GammaBlocks::assemble() const {
    const auto n = a.rows();
    RMatrix g(2 * n, 2 * n);
    g.topLeftCorner(n, n) = a;
    g.topRightCorner(n, n) = c;
    g.bottomLeftCorner(n, n) = c;
    g.bottomRightCorner(n, n) = 2.0 * RMatrix::Identity(n, n) - a;
    return g;
}

CMatrix SigmaMatrix::block(std::span<const int> indices) const {
    const auto k = static_cast<Eigen::Index>(indices.size());
    CMatrix out(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            out(i, j) = entries(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(j)]);
        }
    }
    return out;
}

CMatrix w_matrix(int n) {
    const double h = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    const CMatrix id = CMatrix::Identity(n, n);
    CMatrix w(2 * n, 2 * n);
    w.topLeftCorner(n, n) = h * id;
    w.topRightCorner(n, n) = h * id;
    w.bottomLeftCorner(n, n) = -i * h * id;
    w.bottomRightCorner(n, n) = i * h * id;
    return w;
}

namespace {

SymplecticOrthogonal symplectic_of(const CMatrix& u) {
    const auto n = u.rows();
    const CMatrix w = w_matrix(static_cast<int>(n));
    CMatrix d = CMatrix::Zero(2 * n, 2 * n);
    d.topLeftCorner(n, n) = u;
    d.bottomRightCorner(n, n) = u.conjugate();
    const CMatrix sp = w * d * w.adjoint();

    // the product is real up to rounding
    const double residue = sp.imag().cwiseAbs().maxCoeff();
    if (residue > 1e-10) {
        throw Error(ErrorCode::Internal, "symplectic image has imaginary residue " + std::to_string(residue));
    }
    SymplecticOrthogonal s;
    s.sa = sp.real().topLeftCorner(n, n);
    s.sb = sp.real().topRightCorner(n, n);
    return s;
}

}  // namespace

SymplecticOrthogonal unitary_to_symplectic(const UnitaryMatrix& u, double unitarity_tol) {
    if (u.entries.rows() != u.entries.cols()) {
        throw Error(ErrorCode::InvalidDimension, "mode transformation must be square");
    }
    if (!(u.leakage <= unitarity_tol)) {
        throw Error(ErrorCode::NonUnitary, "mode transformation leakage " + std::to_string(u.leakage) +
                                               " exceeds " + std::to_string(unitarity_tol));
    }
    return symplectic_of(u.entries);
}

SymplecticOrthogonal unitary_to_symplectic(const CMatrix& u, double unitarity_tol) {
    return unitary_to_symplectic(UnitaryMatrix{u, leakage_check(u)}, unitarity_tol);
}

GammaBlocks gamma_inverse_blocks(const SymplecticOrthogonal& s, const SqueezingVector& r) {
    const auto n = s.sa.rows();
    if (r.size() != n) {
        throw Error(ErrorCode::InvalidDimension, "squeezing vector length does not match the mode count");
    }
    RVector t(n);
    for (Eigen::Index i = 0; i < n; ++i) t(i) = std::tanh(r[static_cast<int>(i)]);

    const RMatrix sat = s.sa * t.asDiagonal();
    const RMatrix sbt = s.sb * t.asDiagonal();
    GammaBlocks g;
    g.a = RMatrix::Identity(n, n) - sat * s.sa.transpose() + sbt * s.sb.transpose();
    g.c = sat * s.sb.transpose() + sbt * s.sa.transpose();
    // both blocks are symmetric analytically; strip rounding drift
    g.a = 0.5 * (g.a + g.a.transpose()).eval();
    g.c = 0.5 * (g.c + g.c.transpose()).eval();
    return g;
}

double det_gamma(const SqueezingVector& r) {
    const double p = r.cosh_product();
    return p * p;
}

HInverse h_inverse(const GammaBlocks& blocks) {
    const auto n = blocks.a.rows();
    const Complex i(0.0, 1.0);
    const CMatrix a = blocks.a.cast<Complex>();
    const CMatrix c = blocks.c.cast<Complex>();
    const CMatrix id = CMatrix::Identity(n, n);
    const CMatrix off = i * (a - id + i * c);

    HInverse h;
    h.entries.resize(2 * n, 2 * n);
    h.entries.topLeftCorner(n, n) = 0.5 * (3.0 * id - a - i * c);
    h.entries.topRightCorner(n, n) = 0.5 * off;
    h.entries.bottomLeftCorner(n, n) = 0.5 * off;
    h.entries.bottomRightCorner(n, n) = 0.5 * (id + a + i * c);
    return h;
}

CMatrix b_matrix(const GammaBlocks& blocks) {
    const auto n = blocks.a.rows();
    const Complex i(0.0, 1.0);
    const CMatrix a = blocks.a.cast<Complex>();
    const CMatrix c = blocks.c.cast<Complex>();
    const CMatrix id = CMatrix::Identity(n, n);
    const CMatrix off = c - i * (a - id);

    CMatrix b(2 * n, 2 * n);
    b.topLeftCorner(n, n) = 0.5 * (a + i * c);
    b.topRightCorner(n, n) = 0.5 * off;
    b.bottomLeftCorner(n, n) = 0.5 * off;
    b.bottomRightCorner(n, n) = 0.5 * (2.0 * id - a - i * c);
    return b;
}

SigmaMatrix sigma_from_h_inverse(const HInverse& h) {
    const auto n = h.entries.rows() / 2;
    SigmaMatrix s;
    s.entries = 2.0 * (h.entries.topLeftCorner(n, n) - h.entries.bottomRightCorner(n, n));
    // enforce exact symmetry: Kan's formula only sees the symmetric part
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const Complex v = 0.5 * (s.entries(i, j) + s.entries(j, i));
            s.entries(i, j) = v;
            s.entries(j, i) = v;
        }
    }
    return s;
}

RMatrix squeezed_covariance(const SqueezingVector& r) {
    const int n = r.size();
    RMatrix v = RMatrix::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        v(i, i) = 0.5 * std::exp(2.0 * r[i]);
        v(i + n, i + n) = 0.5 * std::exp(-2.0 * r[i]);
    }
    return v;
}

}  // namespace qfp
