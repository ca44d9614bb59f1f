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

#include "coalab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include "coalab/common.hpp"

namespace coalab {

namespace {

double sq_norm(PointView r)
{
    double s = 0.0;
    for (double v : r)
        s += v * v;
    return s;
}

double gauss_density(double r2, double s, int d)
{
    return std::pow(2.0 * std::numbers::pi * s * s, -0.5 * d) * std::exp(-0.5 * r2 / (s * s));
}

struct QuadResult {
    double value;
    double error;
};

template <class F>
QuadResult integrate(F f, double a, double b)
{
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13, &err);
    return {v, err};
}

void require_converged(const QuadResult& r, const char* name)
{
    const double scale = std::max(std::abs(r.value), 1e-300);
    if (!std::isfinite(r.value) || !std::isfinite(r.error) || r.error > 1e-9 * scale + 1e-300)
        throw KernelIntegrationError(std::string("quadrature for ") + name +
                                     " did not converge (value " + std::to_string(r.value) +
                                     ", error estimate " + std::to_string(r.error) + ")");
}

/// Maximum of f over [a, b]: dense scan followed by Brent refinement.
template <class F>
double maximise(F f, double a, double b)
{
    const int n = 2001;
    double best_x = a, best = -INFINITY;
    for (int i = 0; i < n; ++i) {
        const double x = a + (b - a) * i / (n - 1);
        const double v = f(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    const double step = (b - a) / (n - 1);
    const double lo = std::max(a, best_x - step), hi = std::min(b, best_x + step);
    auto r = boost::math::tools::brent_find_minima([&](double x) { return -f(x); }, lo, hi, 52);
    return std::max(best, -r.second);
}

const CustomKernels& require_custom_1d(const KernelSet& k)
{
    if (k.dim() != 1)
        throw KernelIntegrationError("quadrature path supports d = 1 only");
    if (!k.custom_kernels() && !k.is_gaussian())
        throw KernelIntegrationError("kernel set has no callables");
    static const CustomKernels empty{};
    return k.custom_kernels() ? *k.custom_kernels() : empty;
}

}  // namespace

KernelSet KernelSet::gaussian(int d, const GaussianParams& p)
{
    if (d < 1)
        throw ConfigError("dimension must be >= 1");
    if (p.s1 <= 0 || p.s2 <= 0 || p.s3 <= 0 || p.s4 <= 0)
        throw ConfigError("gaussian widths must be positive");
    if (p.kappa1 < 0 || p.kappa2 < 0 || p.A < 0)
        throw ConfigError("kappa1, kappa2 and A must be non-negative");
    KernelSet k;
    k.d_ = d;
    k.gauss_ = p;
    return k;
}

KernelSet KernelSet::custom(int d, CustomKernels c)
{
    if (d < 1)
        throw ConfigError("dimension must be >= 1");
    if (!c.c1 || !c.c2 || !c.phi)
        throw ConfigError("custom kernel set needs c1, c2 and phi");
    if (!(c.box_hi > c.box_lo))
        throw ConfigError("custom kernel integration box is empty");
    KernelSet k;
    k.d_ = d;
    k.custom_ = std::move(c);
    return k;
}

double KernelSet::c1(PointView x, PointView y, PointView z) const
{
    if (gauss_) {
        double r2 = 0.0, m2 = 0.0;
        for (int i = 0; i < d_; ++i) {
            r2 += (x[i] - y[i]) * (x[i] - y[i]);
            const double m = z[i] - 0.5 * (x[i] + y[i]);
            m2 += m * m;
        }
        return gauss_->kappa1 * gauss_density(r2, gauss_->s1, d_) * gauss_density(m2, gauss_->s2, d_);
    }
    return custom_->c1(x, y, z);
}

double KernelSet::c2(PointView r) const
{
    if (gauss_)
        return gauss_->kappa2 * gauss_density(sq_norm(r), gauss_->s3, d_);
    return custom_->c2(r);
}

double KernelSet::phi(PointView r) const
{
    if (gauss_)
        return gauss_->A * std::exp(-0.5 * sq_norm(r) / (gauss_->s4 * gauss_->s4));
    return custom_->phi(r);
}

double KernelSet::pair_rate(PointView x, PointView y, double sigma) const
{
    if (gauss_) {
        double r2 = 0.0;
        for (int i = 0; i < d_; ++i)
            r2 += (x[i] - y[i]) * (x[i] - y[i]);
        double rate = gauss_->kappa1 * gauss_density(r2, gauss_->s1, d_);
        if (sigma > 0.0) {
            // integral of exp(-sigma z^2) N(z; mu, s2^2) dz, per axis
            const double a = 1.0 + 2.0 * sigma * gauss_->s2 * gauss_->s2;
            for (int i = 0; i < d_; ++i) {
                const double mu = 0.5 * (x[i] + y[i]);
                rate *= std::exp(-sigma * mu * mu / a) / std::sqrt(a);
            }
        }
        return rate;
    }
    if (d_ != 1)
        throw KernelIntegrationError("custom pair rate quadrature supports d = 1 only");
    auto f = [&](double z) {
        const double zz[1] = {z};
        return std::exp(-sigma * z * z) * custom_->c1(x, y, zz);
    };
    auto r = integrate(f, custom_->box_lo, custom_->box_hi);
    require_converged(r, "pair rate");
    return r.value;
}

void KernelSet::sample_coalescence(RngStream& rng, PointView x, PointView y, double sigma,
                                   std::span<double> z) const
{
    if (gauss_) {
        // Product of N(mu, s2^2) with exp(-sigma z^2) is N(mu/a, s2^2/a).
        const double a = 1.0 + 2.0 * sigma * gauss_->s2 * gauss_->s2;
        const double sd = gauss_->s2 / std::sqrt(a);
        for (int i = 0; i < d_; ++i)
            z[i] = rng.normal(0.5 * (x[i] + y[i]) / a, sd);
        return;
    }
    if (!custom_->sample_coalescence)
        throw UnsupportedSamplingError("custom kernel set has no coalescence sampler");
    custom_->sample_coalescence(rng, x, y, sigma, z);
}

void KernelSet::sample_jump(RngStream& rng, std::span<double> r) const
{
    if (gauss_) {
        for (int i = 0; i < d_; ++i)
            r[i] = rng.normal(0.0, gauss_->s3);
        return;
    }
    if (!custom_->sample_jump)
        throw UnsupportedSamplingError("custom kernel set has no jump sampler");
    custom_->sample_jump(rng, r);
}

KernelConstants kernel_constants(const KernelSet& k)
{
    if (!k.is_gaussian())
        return kernel_constants_quadrature(k);
    const auto& p = k.gaussian_params();
    const int d = k.dim();
    KernelConstants c;
    c.c1_int = p.kappa1;
    c.c1_int_13 = p.kappa1;
    c.c1_int_23 = p.kappa1;
    c.c1_max = p.kappa1 * std::pow(2.0 * std::numbers::pi * p.s1 * p.s1, -0.5 * d);
    c.c2_int = p.kappa2;
    c.phi_sup = p.A;
    c.phi_int = p.A * std::pow(2.0 * std::numbers::pi * p.s4 * p.s4, 0.5 * d);
    return c;
}

KernelConstants kernel_constants_quadrature(const KernelSet& k)
{
    const CustomKernels& ck = require_custom_1d(k);
    double lo = ck.box_lo, hi = ck.box_hi;
    if (k.is_gaussian()) {
        const auto& p = k.gaussian_params();
        const double w = 12.0 * std::max({p.s1, p.s2, p.s3, p.s4});
        lo = -w;
        hi = w;
    }
    auto c1 = [&](double a, double b, double c) {
        const double x[1] = {a}, y[1] = {b}, z[1] = {c};
        return k.c1(x, y, z);
    };
    auto c2 = [&](double r) {
        const double rr[1] = {r};
        return k.c2(rr);
    };
    auto phi = [&](double r) {
        const double rr[1] = {r};
        return k.phi(rr);
    };
    // Nested integral over two of the three arguments; `which` fixes the third at 0.
    auto double_integral = [&](int which, const char* name) {
        auto outer = [&](double u) {
            auto inner = [&](double v) {
                switch (which) {
                case 0: return c1(u, v, 0.0);
                case 1: return c1(u, 0.0, v);
                default: return c1(0.0, u, v);
                }
            };
            auto r = integrate(inner, lo, hi);
            require_converged(r, name);
            return r.value;
        };
        auto r = integrate(outer, lo, hi);
        require_converged(r, name);
        return r.value;
    };

    KernelConstants c;
    c.c1_int = double_integral(0, "<c1>");
    c.c1_int_13 = double_integral(1, "<c1> over (x1,x3)");
    c.c1_int_23 = double_integral(2, "<c1> over (x2,x3)");
    // By translation invariance the z-integral depends on x - y only.
    auto z_integral = [&](double r) {
        auto q = integrate([&](double z) { return c1(0.0, r, z); }, lo, hi);
        require_converged(q, "c1_max");
        return q.value;
    };
    c.c1_max = maximise(z_integral, lo - hi, hi - lo);
    auto r2 = integrate(c2, lo, hi);
    require_converged(r2, "<c2>");
    c.c2_int = r2.value;
    auto rp = integrate(phi, lo, hi);
    require_converged(rp, "<phi>");
    c.phi_int = rp.value;
    c.phi_sup = maximise(phi, lo, hi);
    if (!std::isfinite(c.phi_sup))
        throw KernelIntegrationError("|phi| is not finite");
    return c;
}

double SigmaReg::psi(PointView z) const
{
    if (sigma == 0.0)
        return 1.0;
    return std::exp(-sigma * sq_norm(z));
}

double beta(double theta, const KernelConstants& c)
{
    const double et = std::exp(theta);
    return 1.5 * c.c1_int * et + 2.0 * std::exp(c.phi_int * et) * c.c2_int;
}

double horizon(double alpha_star, double alpha0, const KernelConstants& c)
{
    if (!(alpha_star > alpha0))
        throw InvalidScaleError("horizon requires alpha_star > alpha0");
    return (alpha_star - alpha0) / beta(alpha_star, c);
}

ScaleParams ScaleParams::make(double alpha0, double alpha_star, double q, int n)
{
    if (!(alpha_star > alpha0))
        throw InvalidScaleError("scale requires alpha_star > alpha0");
    if (!(q > 1.0))
        throw InvalidScaleError("scale requires q > 1");
    if (n < 1)
        throw InvalidScaleError("partition depth n must be >= 1");
    ScaleParams s{alpha0, alpha_star, q, n, {}};
    s.alpha.resize(2 * static_cast<std::size_t>(n) + 2);
    const double span = alpha_star - alpha0;
    for (int k = 0; k <= n; ++k) {
        const double kn = static_cast<double>(k) / n;
        s.alpha[2 * k] = alpha0 + (static_cast<double>(k) / (n + 1) * (q - 1) / q + kn / q) * span;
        s.alpha[2 * k + 1] = alpha0 + (static_cast<double>(k + 1) / (n + 1) * (q - 1) / q + kn / q) * span;
    }
    s.alpha.back() = alpha_star;
    return s;
}

Configuration::Configuration(int d, std::vector<double> coords) : d_(d)
{
    if (d < 1 || coords.size() % static_cast<std::size_t>(d) != 0)
        throw ConfigError("configuration coordinates do not match dimension");
    const std::size_t n = coords.size() / d;
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(coords.begin() + a * d, coords.begin() + (a + 1) * d,
                                            coords.begin() + b * d, coords.begin() + (b + 1) * d);
    });
    coords_.reserve(coords.size());
    for (std::size_t i : idx)
        coords_.insert(coords_.end(), coords.begin() + i * d, coords.begin() + (i + 1) * d);
}

double psi_total(const Configuration& eta, const KernelSet& k, double sigma)
{
    double s = 0.0;
    for (std::size_t i = 0; i < eta.size(); ++i)
        for (std::size_t j = i + 1; j < eta.size(); ++j)
            s += k.pair_rate(eta.point(i), eta.point(j), sigma);
    return s;
}

}  // namespace coalab
