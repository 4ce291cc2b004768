// SPDX-License-Identifier: Apache-2.0
//
// ra-isac: joint beamforming and array rotation for rotatable-antenna ISAC
// Copyright (C) 2026 The ra-isac authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#ifndef RAISAC_GEOMETRY_HPP
#define RAISAC_GEOMETRY_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace raisac
{
    using cplx = std::complex<double>;
    using CVec = Eigen::VectorXcd;
    using CMat = Eigen::MatrixXcd;

    inline constexpr double kPi = 3.14159265358979323846;

    // Centered ULA element positions: d_m = (m-1) D/(M-1) - D/2 with D = (M-1) spacing.
    // `spacing` is a physical length. Throws std::invalid_argument for fewer than two elements.
    std::vector<double> element_offsets(int num_elements, double spacing);

    // Uniform linear array whose elements are placed symmetrically about the array center.
    // The spacing is given in wavelengths; offsets are physical lengths (spacing * wavelength units).
    class ArrayGeometry
    {
    public:
        explicit ArrayGeometry(int num_elements, double spacing_wavelengths = 0.5, double wavelength = 1.0);

        int num_elements() const { return num_elements_; }
        double spacing() const { return spacing_; }       // in wavelengths
        double wavelength() const { return wavelength_; } // physical length
        double aperture() const;                          // D = (M-1) * d, physical length
        double wavenumber() const;                        // 2 pi / lambda
        const std::vector<double> &offsets() const { return offsets_; }

        bool operator==(const ArrayGeometry &) const = default;

    private:
        int num_elements_;
        double spacing_;
        double wavelength_;
        std::vector<double> offsets_;
    };

    // Spatial angle after array rotation. Stored as-is, no wrapping into (-pi, pi].
    struct EffectiveAngle
    {
        double value = 0.0;
    };

    EffectiveAngle effective_angle(double nominal, double rotation);

    // a(theta)_m = exp(j k d_m sin(theta))
    CVec steering_vector(const ArrayGeometry &geometry, EffectiveAngle angle);

    // d a / d theta, entry m = j k cos(theta) d_m exp(j k d_m sin(theta))
    CVec steering_derivative(const ArrayGeometry &geometry, EffectiveAngle angle);

    // Sum of squared offsets in closed form, D^2 M (M+1) / (12 (M-1)).
    double offset_energy(const ArrayGeometry &geometry);
}

#endif
