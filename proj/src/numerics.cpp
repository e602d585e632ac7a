// SPDX-License-Identifier: Apache-2.0
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

#include "cfpla/numerics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace cfpla {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Lower-tail standard normal quantile, rational approximation (rel. error ~1e-9).
double normal_quantile_initial(double p)
{
    static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                             -2.759285104469687e+02, 1.383577518672690e+02,
                                             -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                             -1.556989798598866e+02, 6.680131188771972e+01,
                                             -1.328068155288572e+01};
    static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                             -2.400758277161838e+00, -2.549732539343734e+00,
                                             4.374664141464968e+00, 2.938163982698783e+00};
    static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                             2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

arma::vec inverse_sqrt_diagonal(const ComplexMatrix& a)
{
    arma::vec d = arma::real(a.diag());
    if (arma::any(d <= 0.0))
        throw IllConditionedError("matrix has a non-positive diagonal entry",
                                  std::numeric_limits<double>::infinity());
    return 1.0 / arma::sqrt(d);
}

std::string condition_message(const char* what, double cond)
{
    std::ostringstream os;
    os << what << " (condition estimate " << cond << ")";
    return os.str();
}

}  // namespace

double q_function(double x)
{
    if (!std::isfinite(x))
        throw std::invalid_argument("q_function: argument must be finite");
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double q_inverse(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("q_inverse: probability must lie in (0, 1)");

    // Q^{-1}(p) = -Phi^{-1}(p). Halley refinement on Phi keeps the deep tail accurate.
    double y = normal_quantile_initial(p);
    const double sqrt_2pi = std::sqrt(2.0 * std::numbers::pi);
    for (int iter = 0; iter < 3; ++iter) {
        const double e = 0.5 * std::erfc(-y / std::numbers::sqrt2) - p;
        const double u = e * sqrt_2pi * std::exp(0.5 * y * y);
        y -= u / (1.0 + 0.5 * y * u);
    }
    return -y;
}

RandomStream::RandomStream(std::uint64_t seed)
    : RandomStream(seed, {}, splitmix64(seed ^ 0x6A09E667F3BCC909ULL))
{
}

RandomStream::RandomStream(std::uint64_t seed, std::vector<std::uint64_t> path, std::uint64_t key)
    : seed_(seed), path_(std::move(path)), key_(key), engine_(key)
{
}

RandomStream RandomStream::child(std::uint64_t label) const
{
    auto path = path_;
    path.push_back(label);
    const std::uint64_t key = splitmix64(key_ ^ splitmix64(label + 0xD1B54A32D192ED03ULL));
    return RandomStream(seed_, std::move(path), key);
}

std::string RandomStream::describe() const
{
    std::ostringstream os;
    os << "seed=" << seed_ << " path=/";
    for (std::size_t i = 0; i < path_.size(); ++i)
        os << (i ? "/" : "") << path_[i];
    return os.str();
}

double RandomStream::uniform()
{
    // 53 random bits -> [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform();
}

double RandomStream::normal()
{
    return normal_(engine_);
}

Complex RandomStream::complex_normal(double variance)
{
    const double s = std::sqrt(0.5 * variance);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
}

ComplexVector draw_complex_gaussian(RandomStream& stream, arma::uword n, double variance)
{
    return draw_complex_gaussian(stream, n, 1, variance);
}

ComplexMatrix draw_complex_gaussian(RandomStream& stream, arma::uword rows, arma::uword cols,
                                    double variance)
{
    if (!(variance >= 0.0))
        throw std::invalid_argument("draw_complex_gaussian: variance must be non-negative");
    ComplexMatrix out(rows, cols);
    for (auto& v : out)
        v = stream.complex_normal(variance);
    return out;
}

void RunningStats::add(double x)
{
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other)
{
    if (other.count_ == 0)
        return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double n = na + nb;
    const double delta = other.mean_ - mean_;
    mean_ += delta * nb / n;
    m2_ += other.m2_ + delta * delta * na * nb / n;
    count_ += other.count_;
}

double RunningStats::variance() const
{
    return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
}

double RunningStats::std_error() const
{
    return count_ < 2 ? 0.0 : std::sqrt(variance() / static_cast<double>(count_));
}

double condition_estimate(const ComplexMatrix& a)
{
    if (!a.is_square())
        throw std::invalid_argument("condition_estimate: matrix must be square");
    const arma::vec s = inverse_sqrt_diagonal(a);
    const ComplexMatrix b = arma::diagmat(s) * a * arma::diagmat(s);
    const double rc = arma::rcond(b);
    return rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

ComplexMatrix hermitian_inverse(const ComplexMatrix& a, double max_condition)
{
    if (!a.is_square())
        throw std::invalid_argument("hermitian_inverse: matrix must be square");
    const arma::vec s = inverse_sqrt_diagonal(a);
    ComplexMatrix b = arma::diagmat(s) * a * arma::diagmat(s);
    b = 0.5 * (b + b.t());

    ComplexMatrix r;
    if (!arma::chol(r, b)) {
        throw IllConditionedError("hermitian_inverse: Cholesky factorisation failed",
                                  std::numeric_limits<double>::infinity());
    }
    const double cond = condition_estimate(b);
    if (!(cond <= max_condition))
        throw IllConditionedError(condition_message("hermitian_inverse: ill-conditioned", cond),
                                  cond);

    const ComplexMatrix r_inv = arma::inv(arma::trimatu(r));
    const ComplexMatrix b_inv = r_inv * r_inv.t();
    return arma::diagmat(s) * b_inv * arma::diagmat(s);
}

ComplexMatrix matrix_inverse(const ComplexMatrix& a, double max_condition)
{
    if (!a.is_square())
        throw std::invalid_argument("matrix_inverse: matrix must be square");
    const double rc = arma::rcond(a);
    const double cond = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    if (!(cond <= max_condition))
        throw IllConditionedError(condition_message("matrix_inverse: ill-conditioned", cond), cond);
    ComplexMatrix out;
    if (!arma::inv(out, a))
        throw IllConditionedError("matrix_inverse: LU factorisation failed", cond);
    return out;
}

double complex_correlation(const ComplexVector& x, const ComplexVector& y)
{
    if (x.n_elem != y.n_elem || x.n_elem < 2)
        throw std::invalid_argument("complex_correlation: need two equal-length samples");
    const ComplexVector xc = x - arma::mean(x);
    const ComplexVector yc = y - arma::mean(y);
    const double num = std::abs(arma::cdot(yc, xc));
    const double den = std::sqrt(arma::accu(arma::square(arma::abs(xc))) *
                                 arma::accu(arma::square(arma::abs(yc))));
    return den > 0.0 ? num / den : 0.0;
}

}  // namespace cfpla
