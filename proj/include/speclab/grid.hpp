#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace speclab {

// Uniform periodic grid on [0, length) with n samples, n a power of two.
// Sample i sits at x_i = i * length / n.  Fourier bin j carries the signed
// integer mode m(j) = j for j < n/2 and j - n otherwise, so the Nyquist bin
// j = n/2 maps to mode -n/2.
struct Grid1D {
    int n = 0;
    double length = 0.0;

    static Grid1D make(int n, double length) {
        if (n < 8 || (n & (n - 1)) != 0)
            throw std::invalid_argument("Grid1D: n must be a power of two, n >= 8 (got " +
                                        std::to_string(n) + ")");
        if (!(length > 0.0) || !std::isfinite(length))
            throw std::invalid_argument("Grid1D: length must be positive and finite");
        return Grid1D{n, length};
    }

    double spacing() const { return length / n; }
    double point(int i) const { return i * spacing(); }

    int mode_of_bin(int j) const { return j < n / 2 ? j : j - n; }

    // Angular frequency of bin j: xi = 2*pi*m / length.
    double frequency_of_bin(int j) const {
        return 2.0 * std::numbers::pi * mode_of_bin(j) / length;
    }

    double max_frequency() const { return 2.0 * std::numbers::pi * (n / 2) / length; }

    bool operator==(const Grid1D&) const = default;
};

} // namespace speclab
