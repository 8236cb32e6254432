// Copyright 2026 The qswitch Authors
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

#pragma once

// Shared fixtures and oracles for the unit tests. Oracles here are written
// from scratch with plain loops so they do not share code paths with the
// library.

#include "qswitch/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace qtest {

using qswitch::Complex;
using qswitch::Index;
using qswitch::Operator;

inline Operator mat2(Complex a, Complex b, Complex c, Complex d) {
    Operator m(2, 2);
    m << a, b, c, d;
    return m;
}

inline Operator sigma_x() { return mat2(0, 1, 1, 0); }
inline Operator sigma_minus() { return mat2(0, 1, 0, 0); }  // |0><1|

inline Operator naive_mul(const Operator& a, const Operator& b) {
    Operator c = Operator::Zero(a.rows(), b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < b.cols(); ++j)
            for (Index k = 0; k < a.cols(); ++k) c(i, j) += a(i, k) * b(k, j);
    return c;
}

inline Operator naive_dag(const Operator& a) {
    Operator c(a.cols(), a.rows());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) c(j, i) = std::conj(a(i, j));
    return c;
}

inline Complex naive_trace(const Operator& a) {
    Complex t = 0;
    for (Index i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

// A rho A^dag - 1/2 {A^dag A, rho}
inline Operator naive_dissipator(const Operator& a, const Operator& rho) {
    const Operator ad = naive_dag(a);
    const Operator ada = naive_mul(ad, a);
    return naive_mul(naive_mul(a, rho), ad) - 0.5 * (naive_mul(ada, rho) + naive_mul(rho, ada));
}

inline Operator naive_backaction(const Operator& c, const Operator& rho) {
    const Operator cd = naive_dag(c);
    const Complex w = naive_trace(naive_mul(c + cd, rho));
    return naive_mul(c, rho) + naive_mul(rho, cd) - w * rho;
}

inline double max_abs(const Operator& a) {
    double m = 0;
    for (Index i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i]));
    return m;
}

// Jacobi eigenvalue iteration on the real symmetric embedding [[Re, -Im], [Im, Re]];
// each eigenvalue of the Hermitian input appears twice.
inline std::vector<double> jacobi_hermitian_eigenvalues(const Operator& h) {
    const Index n = h.rows();
    const Index m = 2 * n;
    std::vector<double> a(static_cast<std::size_t>(m * m));
    auto at = [&](Index i, Index j) -> double& { return a[static_cast<std::size_t>(i * m + j)]; };
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            at(i, j) = h(i, j).real();
            at(i + n, j + n) = h(i, j).real();
            at(i, j + n) = -h(i, j).imag();
            at(i + n, j) = h(i, j).imag();
        }
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (Index i = 0; i < m; ++i)
            for (Index j = i + 1; j < m; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-30) break;
        for (Index p = 0; p < m; ++p)
            for (Index q = p + 1; q < m; ++q) {
                if (std::abs(at(p, q)) < 1e-300) continue;
                const double theta = (at(q, q) - at(p, p)) / (2 * at(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (Index k = 0; k < m; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (Index k = 0; k < m; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> ev;
    for (Index i = 0; i < m; ++i) ev.push_back(at(i, i));
    std::sort(ev.begin(), ev.end());
    std::vector<double> out;
    for (std::size_t i = 0; i < ev.size(); i += 2) out.push_back(0.5 * (ev[i] + ev[i + 1]));
    return out;
}

inline double oracle_trace_distance(const Operator& a, const Operator& b) {
    double s = 0;
    for (double l : jacobi_hermitian_eigenvalues(a - b)) s += std::abs(l);
    return 0.5 * s;
}

inline Operator basis_op(Index d, Index r, Index c) {
    Operator m = Operator::Zero(d, d);
    m(r, c) = 1.0;
    return m;
}

inline Operator naive_kron(const Operator& a, const Operator& b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            for (Index k = 0; k < b.rows(); ++k)
                for (Index l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

// -i[H, rho] + sum D_L(rho) + D_C(rho), loops only.
inline Operator naive_lindblad(const Operator& h, const std::vector<Operator>& ls,
                               const Operator& c, const Operator& rho) {
    const Complex mi(0, -1);
    Operator out = mi * (naive_mul(h, rho) - naive_mul(rho, h));
    for (const Operator& l : ls) out += naive_dissipator(l, rho);
    out += naive_dissipator(c, rho);
    return out;
}

// Taylor series with scaling and squaring; fine for the small oracles here.
inline Operator naive_expm(const Operator& a) {
    double norm = 0;
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) norm += std::abs(a(i, j));
    int squarings = 0;
    while (norm > 0.25) {
        norm /= 2;
        ++squarings;
    }
    const Operator x = a / std::pow(2.0, squarings);
    Operator term = Operator::Identity(a.rows(), a.cols());
    Operator sum = term;
    for (int k = 1; k < 30; ++k) {
        term = naive_mul(term, x) / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = naive_mul(sum, sum);
    return sum;
}

}  // namespace qtest
