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
#include "raisac/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace raisac
{
    std::vector<double> element_offsets(int num_elements, double spacing)
    {
        if (num_elements < 2)
            throw std::invalid_argument("element_offsets: need at least 2 elements, got " + std::to_string(num_elements));
        if (!(spacing > 0.0) || !std::isfinite(spacing))
            throw std::invalid_argument("element_offsets: spacing must be positive and finite");

        const double aperture = (num_elements - 1) * spacing;
        std::vector<double> offsets(static_cast<std::size_t>(num_elements));
        for (int m = 0; m < num_elements; ++m)
            offsets[m] = m * aperture / (num_elements - 1) - aperture / 2.0;

        // Pin exact antisymmetry; the two halves can otherwise differ in the last ulp.
        for (int m = 0; m < num_elements / 2; ++m)
            offsets[num_elements - 1 - m] = -offsets[m];
        if (num_elements % 2 == 1)
            offsets[num_elements / 2] = 0.0;
        return offsets;
    }

    ArrayGeometry::ArrayGeometry(int num_elements, double spacing_wavelengths, double wavelength)
        : num_elements_(num_elements), spacing_(spacing_wavelengths), wavelength_(wavelength)
    {
        if (!(wavelength > 0.0) || !std::isfinite(wavelength))
            throw std::invalid_argument("ArrayGeometry: wavelength must be positive and finite");
        offsets_ = element_offsets(num_elements, spacing_wavelengths * wavelength);
    }

    double ArrayGeometry::aperture() const { return (num_elements_ - 1) * spacing_ * wavelength_; }

    double ArrayGeometry::wavenumber() const { return 2.0 * kPi / wavelength_; }

    EffectiveAngle effective_angle(double nominal, double rotation) { return {nominal + rotation}; }

    CVec steering_vector(const ArrayGeometry &geometry, EffectiveAngle angle)
    {
        const double phase_rate = geometry.wavenumber() * std::sin(angle.value);
        const auto &d = geometry.offsets();
        CVec a(geometry.num_elements());
        for (int m = 0; m < geometry.num_elements(); ++m)
            a[m] = std::polar(1.0, phase_rate * d[m]);
        return a;
    }

    CVec steering_derivative(const ArrayGeometry &geometry, EffectiveAngle angle)
    {
        const double k = geometry.wavenumber();
        const double phase_rate = k * std::sin(angle.value);
        const double scale = k * std::cos(angle.value);
        const auto &d = geometry.offsets();
        CVec da(geometry.num_elements());
        for (int m = 0; m < geometry.num_elements(); ++m)
            da[m] = cplx(0.0, scale * d[m]) * std::polar(1.0, phase_rate * d[m]);
        return da;
    }

    double offset_energy(const ArrayGeometry &geometry)
    {
        const double m = geometry.num_elements();
        const double aperture = geometry.aperture();
        return aperture * aperture * m * (m + 1.0) / (12.0 * (m - 1.0));
    }
}
