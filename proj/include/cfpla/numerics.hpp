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

#pragma once

#include <armadillo>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfpla {

using Complex = std::complex<double>;
using ComplexMatrix = arma::cx_mat;
using ComplexVector = arma::cx_vec;

// Gaussian upper-tail probability Q(x) = P(Z > x) for a standard normal Z.
// Throws std::invalid_argument for non-finite x.
double q_function(double x);

// Inverse of q_function on (0, 1). Accurate to 1e-10 absolute in Q.
double q_inverse(double p);

// Deterministic random stream addressed by (seed, path).
//
// Children are derived by mixing a label into the parent key, so a stream for
// (drop 3, trial 17, "noise") is the same no matter which worker computes it
// or in which order. A RandomStream is never shared between threads.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    RandomStream child(std::uint64_t label) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t key() const { return key_; }
    const std::vector<std::uint64_t>& path() const { return path_; }
    std::string describe() const;

    std::uint64_t next_u64() { return engine_(); }
    double uniform();                  // [0, 1)
    double uniform(double lo, double hi);
    double normal();                   // N(0, 1)
    Complex complex_normal(double variance);

private:
    RandomStream(std::uint64_t seed, std::vector<std::uint64_t> path, std::uint64_t key);

    std::uint64_t seed_;
    std::vector<std::uint64_t> path_;
    std::uint64_t key_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

// i.i.d. CN(0, variance) entries; real and imaginary parts each variance/2.
ComplexVector draw_complex_gaussian(RandomStream& stream, arma::uword n, double variance);
ComplexMatrix draw_complex_gaussian(RandomStream& stream, arma::uword rows, arma::uword cols,
                                    double variance);

// Streaming mean / variance (Welford) with Chan's pairwise merge.
class RunningStats {
public:
    void add(double x);
    void merge(const RunningStats& other);

    std::uint64_t count() const { return count_; }
    double mean() const { return mean_; }
    double sum_sq_dev() const { return m2_; }
    double variance() const;           // unbiased, 0 for count < 2
    double std_error() const;          // standard error of the mean

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

// Raised when a matrix is too close to singular to invert reliably.
class IllConditionedError : public std::runtime_error {
public:
    IllConditionedError(const std::string& what, double condition)
        : std::runtime_error(what), condition_(condition) {}
    double condition() const { return condition_; }

private:
    double condition_;
};

inline constexpr double kDefaultMaxCondition = 1e12;

// Reciprocal-condition based estimate of the 2-norm condition number of a
// Hermitian positive definite matrix after symmetric diagonal equilibration.
double condition_estimate(const ComplexMatrix& a);

// Inverse of a Hermitian positive definite matrix via Cholesky.
ComplexMatrix hermitian_inverse(const ComplexMatrix& a,
                                double max_condition = kDefaultMaxCondition);

// Inverse of a general square matrix via LU with a condition guard.
ComplexMatrix matrix_inverse(const ComplexMatrix& a,
                             double max_condition = kDefaultMaxCondition);

// Sample Pearson correlation magnitude |E[(x-mx)(y-my)^*]| / (sx sy).
double complex_correlation(const ComplexVector& x, const ComplexVector& y);

}  // namespace cfpla
