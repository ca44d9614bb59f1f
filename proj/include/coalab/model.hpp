// Copyright 2026 The coalab Authors
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

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "coalab/rng.hpp"

namespace coalab {

using PointView = std::span<const double>;

/// Parameters of the built-in Gaussian kernel family:
///   c1(x,y;z) = kappa1 g_{s1}(x-y) g_{s2}(z-(x+y)/2)
///   c2(r)     = kappa2 g_{s3}(r)
///   phi(r)    = A exp(-|r|^2 / (2 s4^2))
/// with g_s the normalised Gaussian density in R^d.
struct GaussianParams {
    double kappa1 = 1.0;
    double s1 = 0.3;
    double s2 = 0.2;
    double kappa2 = 1.0;
    double s3 = 0.3;
    double A = 1.0;
    double s4 = 0.3;
};

/// User-supplied kernels. Quadrature-based constants need an integration box
/// [box_lo, box_hi] per axis; the simulator needs the two samplers.
struct CustomKernels {
    std::function<double(PointView x, PointView y, PointView z)> c1;
    std::function<double(PointView r)> c2;
    std::function<double(PointView r)> phi;
    double box_lo = -10.0;
    double box_hi = 10.0;
    /// Writes z ~ psi_sigma(z) c1(x,y;z) / norm into `z`.
    std::function<void(RngStream&, PointView x, PointView y, double sigma, std::span<double> z)>
        sample_coalescence;
    /// Writes a displacement r ~ c2(r) / <c2> into `r`.
    std::function<void(RngStream&, std::span<double> r)> sample_jump;
};

/// The model triple (c1, c2, phi) in dimension d. Immutable.
class KernelSet {
public:
    static KernelSet gaussian(int d, const GaussianParams& p);
    static KernelSet custom(int d, CustomKernels k);

    int dim() const { return d_; }
    bool is_gaussian() const { return gauss_.has_value(); }
    const GaussianParams& gaussian_params() const { return *gauss_; }
    const CustomKernels* custom_kernels() const { return custom_ ? &*custom_ : nullptr; }

    double c1(PointView x, PointView y, PointView z) const;
    double c2(PointView r) const;
    double phi(PointView r) const;

    /// Coalescence intensity of the pair {x, y}: integral of psi_sigma(z) c1(x,y;z) dz.
    double pair_rate(PointView x, PointView y, double sigma) const;

    /// Samples the coalescence target z from psi_sigma(z) c1(x,y;z) / pair_rate.
    void sample_coalescence(RngStream& rng, PointView x, PointView y, double sigma,
                            std::span<double> z) const;
    /// Samples a jump displacement from c2 / <c2>.
    void sample_jump(RngStream& rng, std::span<double> r) const;

private:
    int d_ = 1;
    std::optional<GaussianParams> gauss_;
    std::optional<CustomKernels> custom_;
};

/// Integral constants of a KernelSet.
struct KernelConstants {
    double c1_int = 0.0;  ///< <c1>, integrated over (x1, x2)
    double c1_max = 0.0;  ///< sup_{x,y} of the z-integral of c1
    double c2_int = 0.0;  ///< <c2>
    double phi_int = 0.0; ///< <phi>
    double phi_sup = 0.0; ///< |phi|
    /// <c1> integrated over (x1, x3) and (x2, x3); reported as diagnostics.
    double c1_int_13 = 0.0;
    double c1_int_23 = 0.0;
};

/// Closed form for the Gaussian family, adaptive quadrature otherwise.
KernelConstants kernel_constants(const KernelSet& k);
/// Always uses quadrature (d = 1 only); lets the closed form be cross-checked.
KernelConstants kernel_constants_quadrature(const KernelSet& k);

/// psi_sigma(z) = exp(-sigma |z|^2); sigma = 0 gives the unregularised model.
struct SigmaReg {
    double sigma = 0.0;
    double psi(PointView z) const;
};

double beta(double theta, const KernelConstants& c);
/// T(alpha_star, alpha0) = (alpha_star - alpha0) / beta(alpha_star).
double horizon(double alpha_star, double alpha0, const KernelConstants& c);

/// The 2n+2 partition points alpha_0 < ... < alpha_{2n+1} = alpha_star.
struct ScaleParams {
    double alpha0 = 0.0;
    double alpha_star = 1.0;
    double q = 2.0;
    int n = 1;
    std::vector<double> alpha;

    static ScaleParams make(double alpha0, double alpha_star, double q, int n);
};

/// A finite point set, stored lexicographically sorted with stride d.
class Configuration {
public:
    Configuration() = default;
    Configuration(int d, std::vector<double> coords);

    int dim() const { return d_; }
    std::size_t size() const { return coords_.size() / static_cast<std::size_t>(d_); }
    PointView point(std::size_t i) const
    {
        return {coords_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
    }
    const std::vector<double>& coords() const { return coords_; }

private:
    int d_ = 1;
    std::vector<double> coords_;
};

/// Psi_sigma(eta): sum over pairs of the coalescence intensity (closed form for
/// the Gaussian family).
double psi_total(const Configuration& eta, const KernelSet& k, double sigma);

}  // namespace coalab
