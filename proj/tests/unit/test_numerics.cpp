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

#include "doctest.h"

#include "cfpla/numerics.hpp"

#include <cmath>

using namespace cfpla;

TEST_CASE("q_function reference values")
{
    CHECK(q_function(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(q_function(1.6449) - 0.05) < 1e-4);
    CHECK(q_function(-0.7) == doctest::Approx(1.0 - q_function(0.7)).epsilon(1e-14));
    CHECK_THROWS_AS(q_function(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(q_function(INFINITY), std::invalid_argument);
}

TEST_CASE("q_inverse reference values")
{
    CHECK(std::abs(q_inverse(0.5)) < 1e-12);
    CHECK(std::abs(q_inverse(0.01) - 2.3263) < 1e-3);
    CHECK(std::abs(q_inverse(q_function(1.234)) - 1.234) < 1e-9);
    CHECK_THROWS_AS(q_inverse(0.0), std::invalid_argument);
    CHECK_THROWS_AS(q_inverse(1.0), std::invalid_argument);
    CHECK_THROWS_AS(q_inverse(-0.1), std::invalid_argument);
}

TEST_CASE("q_inverse deep tails")
{
    for (double p : {1e-12, 1e-8, 1e-3, 0.2, 0.8, 0.999, 1.0 - 1e-9}) {
        const double x = q_inverse(p);
        CHECK(std::abs(q_function(x) - p) / std::min(p, 1.0 - p) < 1e-9);
    }
}

TEST_CASE("random stream determinism and independence")
{
    const RandomStream root(42);
    RandomStream a = root.child(3).child(17);
    RandomStream b = RandomStream(42).child(3).child(17);
    for (int i = 0; i < 100; ++i)
        CHECK(a.next_u64() == b.next_u64());

    RandomStream c = root.child(3).child(18);
    RandomStream d = root.child(3).child(17);
    int same = 0;
    for (int i = 0; i < 100; ++i)
        same += c.next_u64() == d.next_u64();
    CHECK(same == 0);

    CHECK(root.child(1).key() != root.child(2).key());
    CHECK(RandomStream(1).key() != RandomStream(2).key());
    CHECK(root.child(5).path() == std::vector<std::uint64_t>{5});
}

TEST_CASE("child streams are uncorrelated")
{
    const RandomStream root(7);
    RandomStream x = root.child(1);
    RandomStream y = root.child(2);
    const int n = 200000;
    double sxy = 0.0;
    for (int i = 0; i < n; ++i)
        sxy += x.normal() * y.normal();
    CHECK(std::abs(sxy / n) < 4.0 / std::sqrt(n));
}

TEST_CASE("uniform stays in range")
{
    RandomStream s(3);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = s.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo >= 0.0);
    CHECK(hi < 1.0);
    CHECK(lo < 1e-3);
    CHECK(hi > 1.0 - 1e-3);
}

TEST_CASE("draw_complex_gaussian")
{
    RandomStream s(11);
    const ComplexVector zero = draw_complex_gaussian(s, 100, 0.0);
    CHECK(arma::all(arma::abs(zero) == 0.0));

    const ComplexVector v1 = draw_complex_gaussian(s, 1000000, 1.0);
    CHECK(std::abs(arma::mean(v1)) < 0.01);

    const ComplexVector v2 = draw_complex_gaussian(s, 1000000, 2.0);
    const double m2 = arma::mean(arma::square(arma::abs(v2)));
    CHECK(std::abs(m2 - 2.0) < 0.02);

    // circular symmetry: real and imaginary parts share the power
    const double re = arma::mean(arma::square(arma::real(v2)));
    CHECK(std::abs(re - 1.0) < 0.01);

    CHECK_THROWS_AS(draw_complex_gaussian(s, 3, -1.0), std::invalid_argument);
    const ComplexMatrix m = draw_complex_gaussian(s, 3, 5, 1.0);
    CHECK(m.n_rows == 3);
    CHECK(m.n_cols == 5);
}

TEST_CASE("running stats")
{
    RunningStats all, a, b, c;
    RandomStream s(5);
    std::vector<double> xs;
    for (int i = 0; i < 3000; ++i) {
        const double x = 10.0 + s.normal();
        xs.push_back(x);
        all.add(x);
        (i < 1000 ? a : i < 1700 ? b : c).add(x);
    }
    double mean = 0.0;
    for (double x : xs)
        mean += x;
    mean /= xs.size();
    double ss = 0.0;
    for (double x : xs)
        ss += (x - mean) * (x - mean);

    CHECK(all.mean() == doctest::Approx(mean).epsilon(1e-12));
    CHECK(all.variance() == doctest::Approx(ss / (xs.size() - 1)).epsilon(1e-10));

    RunningStats left = a;
    left.merge(b);
    left.merge(c);
    RunningStats right = c;
    RunningStats bc = b;
    bc.merge(a);
    right.merge(bc);
    CHECK(left.count() == 3000);
    CHECK(left.mean() == doctest::Approx(all.mean()).epsilon(1e-9));
    CHECK(left.sum_sq_dev() == doctest::Approx(all.sum_sq_dev()).epsilon(1e-9));
    CHECK(right.mean() == doctest::Approx(left.mean()).epsilon(1e-9));
    CHECK(right.sum_sq_dev() == doctest::Approx(left.sum_sq_dev()).epsilon(1e-9));

    RunningStats empty;
    empty.merge(RunningStats{});
    CHECK(empty.count() == 0);
    CHECK(empty.variance() == 0.0);
}

TEST_CASE("matrix inversion")
{
    const ComplexMatrix eye = arma::eye<ComplexMatrix>(4, 4);
    CHECK(arma::abs(hermitian_inverse(eye) - eye).max() < 1e-15);
    CHECK(arma::abs(matrix_inverse(eye) - eye).max() < 1e-15);

    ComplexMatrix d(2, 2, arma::fill::zeros);
    d(0, 0) = 2.0;
    d(1, 1) = 4.0;
    const ComplexMatrix di = hermitian_inverse(d);
    CHECK(std::abs(di(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(di(1, 1) - 0.25) < 1e-15);
    CHECK(std::abs(di(0, 1)) < 1e-15);

    RandomStream s(8);
    const ComplexMatrix a = draw_complex_gaussian(s, 8, 8, 1.0) + 4.0 *
                            arma::eye<ComplexMatrix>(8, 8);
    CHECK(arma::abs(a * matrix_inverse(a) - arma::eye<ComplexMatrix>(8, 8)).max() < 1e-8);
    const ComplexMatrix h = a.t() * a;
    CHECK(arma::abs(h * hermitian_inverse(h) - arma::eye<ComplexMatrix>(8, 8)).max() < 1e-8);
}

TEST_CASE("ill-conditioned matrices are rejected")
{
    ComplexMatrix singular(2, 2, arma::fill::ones);
    CHECK_THROWS_AS(hermitian_inverse(singular), IllConditionedError);
    CHECK_THROWS_AS(matrix_inverse(singular), IllConditionedError);

    ComplexMatrix near(2, 2, arma::fill::ones);
    near(1, 1) = 1.0 + 1e-14;
    try {
        hermitian_inverse(near, 1e10);
        FAIL("expected IllConditionedError");
    } catch (const IllConditionedError& e) {
        CHECK(e.condition() > 1e10);
    }
    CHECK_THROWS_AS(hermitian_inverse(ComplexMatrix(2, 3, arma::fill::ones)), std::invalid_argument);
}

TEST_CASE("badly scaled but well-conditioned Gram is accepted")
{
    // per-user powers differing by 1e12 leave the equilibrated matrix benign
    ComplexMatrix g(2, 2, arma::fill::zeros);
    g(0, 0) = 1e-14;
    g(1, 1) = 1e-2;
    g(0, 1) = g(1, 0) = 1e-9;
    const ComplexMatrix inv = hermitian_inverse(g);
    CHECK(arma::abs(g * inv - arma::eye<ComplexMatrix>(2, 2)).max() < 1e-8);
}

TEST_CASE("complex correlation")
{
    RandomStream s(2);
    const ComplexVector x = draw_complex_gaussian(s, 100000, 1.0);
    const ComplexVector y = draw_complex_gaussian(s, 100000, 1.0);
    CHECK(complex_correlation(x, y) < 0.01);
    CHECK(complex_correlation(x, Complex(0.0, 2.0) * x) == doctest::Approx(1.0));
    CHECK_THROWS_AS(complex_correlation(x, ComplexVector(3)), std::invalid_argument);
}
