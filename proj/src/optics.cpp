// Copyright 2026 The losr Authors
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

#include "losr/optics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "losr/errors.hpp"
#include "losr/tolerances.hpp"

namespace losr::optics {

namespace {

Matrix2 rotation(double theta) {
    Matrix2 r;
    const double c = std::cos(theta), s = std::sin(theta);
    r << c, s, -s, c;
    return r;
}

Matrix2 retarder(double theta, Complex slow_phase) {
    Matrix2 d = Matrix2::Identity();
    d(1, 1) = slow_phase;
    return rotation(-theta) * d * rotation(theta);
}

}  // namespace

JonesMatrix::JonesMatrix(const Matrix2 &m) : m_(m) {
    if ((m * m.adjoint() - Matrix2::Identity()).cwiseAbs().maxCoeff() > tol::kUnitary) {
        throw DomainError("Jones matrix is not unitary");
    }
}

bool JonesMatrix::equal_up_to_phase(const JonesMatrix &other, double tol) const {
    // For unitaries, |Tr(A^dagger B)| = 2 iff B = e^{i alpha} A.
    const Complex overlap = (m_.adjoint() * other.m_).trace() / 2.0;
    const Complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex(1.0);
    return (m_ * phase - other.m_).cwiseAbs().maxCoeff() <= tol;
}

double degrees(double deg) {
    return deg * std::numbers::pi / 180.0;
}

JonesMatrix qwp(double theta) {
    return JonesMatrix(retarder(theta, Complex(0.0, 1.0)));
}

JonesMatrix hwp(double theta) {
    return JonesMatrix(retarder(theta, Complex(-1.0, 0.0)));
}

JonesMatrix eopm(double phi) {
    Matrix2 m = Matrix2::Identity();
    m(1, 1) = std::polar(1.0, phi);
    return JonesMatrix(m);
}

JonesMatrix sppm(double phi) {
    const double c = std::cos(phi / 2), s = std::sin(phi / 2);
    Matrix2 m;
    m << c, s, -s, c;
    return JonesMatrix(Complex(0.0, 1.0) * std::polar(1.0, phi / 2) * m);
}

JonesMatrix chain_matrix(const SppmSetting &setting) {
    return qwp(setting.qwp2_angle) * eopm(setting.phase) * qwp(setting.qwp1_angle);
}

DichotomicObservable effective_observable(const JonesMatrix &chain) {
    const Matrix2 &u = chain.matrix();
    Matrix2 z = Matrix2::Zero();
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    Matrix2 o = u.adjoint() * z * u;
    // Pauli components; the matrix is Hermitian and traceless up to rounding.
    const double bz = (o(0, 0).real() - o(1, 1).real()) / 2;
    const double bx = o(1, 0).real();
    const double by = o(1, 0).imag();
    const double h = 1.0 / std::sqrt(2.0);
    struct Named {
        double x, z;
        const char *label;
    };
    static const Named named[] = {{0, 1, "Z"}, {1, 0, "X"}, {h, h, "(Z+X)/sqrt2"}, {-h, h, "(Z-X)/sqrt2"}};
    for (const auto &n : named) {
        if (std::abs(bx - n.x) <= tol::kObservableLabel && std::abs(bz - n.z) <= tol::kObservableLabel &&
            std::abs(by) <= tol::kObservableLabel) {
            return DichotomicObservable::bloch(n.x, 0, n.z, n.label);
        }
    }
    std::ostringstream label;
    label << bx << " X + " << by << " Y + " << bz << " Z";
    const double norm = std::sqrt(bx * bx + by * by + bz * bz);
    return DichotomicObservable::bloch(bx / norm, by / norm, bz / norm, label.str());
}

DichotomicObservable effective_observable(const SppmSetting &setting) {
    return effective_observable(chain_matrix(setting));
}

std::vector<TableSetting> table_settings() {
    const double pi = std::numbers::pi;
    auto at = [](double phase) { return SppmSetting{degrees(-45.0), phase, degrees(45.0)}; };
    return {
        {'A', 0, at(0), "Z"},
        {'A', 1, at(pi / 2), "X"},
        {'B', 0, at(pi / 4), "(Z+X)/sqrt2"},
        {'B', 1, at(-pi / 4), "(Z-X)/sqrt2"},
        {'B', 2, at(0), "Z"},
        {'C', 0, at(0), "Z"},
        {'C', 1, at(pi / 2), "X"},
    };
}

double basis_choice_fidelity(std::uint64_t c_right, std::uint64_t c_wrong) {
    if (c_right + c_wrong == 0) {
        throw DomainError("basis-choice fidelity undefined with no recorded photons");
    }
    return static_cast<double>(c_right) / static_cast<double>(c_right + c_wrong);
}

}  // namespace losr::optics
