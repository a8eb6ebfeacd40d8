#include <catch2/catch_amalgamated.hpp>

#include "detproj/quadrature.hpp"

using namespace detproj;

namespace {

// int over the unit d-simplex of x^a y^b z^c = a! b! c! / (a+b+c+d)!
double simplex_monomial_integral(int dim, int a, int b, int c) {
    auto fact = [](int n) {
        double r = 1.0;
        for (int k = 2; k <= n; ++k) r *= k;
        return r;
    };
    return fact(a) * fact(b) * fact(c) / fact(a + b + c + dim);
}

// rule weights are normalized to the reference measure 1, so scale by 1/d!
double apply_rule(const quad::SimplexRule& rule, int a, int b, int c) {
    double vol = 1.0;
    for (int k = 2; k <= rule.dim; ++k) vol /= k;
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        // barycentric -> cartesian on the unit simplex: x_i = lambda_{i+1}
        double x = rule.barycentric[q][1];
        double y = rule.dim >= 2 ? rule.barycentric[q][2] : 0.0;
        double z = rule.dim >= 3 ? rule.barycentric[q][3] : 0.0;
        acc += rule.weights[q] * std::pow(x, a) * std::pow(y, b) * std::pow(z, c);
    }
    return acc * vol;
}

}  // namespace

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    for (int n = 1; n <= 8; ++n) {
        std::vector<double> x, w;
        quad::gauss_legendre(n, x, w);
        double wsum = 0.0;
        for (double v : w) wsum += v;
        CHECK_THAT(wsum, Catch::Matchers::WithinAbs(2.0, 1e-14));
        for (int p = 0; p <= 2 * n - 1; ++p) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += w[i] * std::pow(x[i], p);
            double exact = (p % 2 == 1) ? 0.0 : 2.0 / (p + 1);
            CHECK_THAT(acc, Catch::Matchers::WithinAbs(exact, 1e-13));
        }
    }
}

TEST_CASE("simplex rules are exact to their degree") {
    for (int dim = 1; dim <= 3; ++dim) {
        for (int degree : {1, 3, 4, 5, 6, 7}) {
            auto rule = quad::simplex_rule(dim, degree);
            REQUIRE(rule.degree >= degree);
            double wsum = 0.0;
            for (double w : rule.weights) wsum += w;
            CHECK_THAT(wsum, Catch::Matchers::WithinAbs(1.0, 1e-12));
            for (int a = 0; a <= rule.degree; ++a)
                for (int b = 0; b <= (dim >= 2 ? rule.degree - a : 0); ++b)
                    for (int c = 0; c <= (dim >= 3 ? rule.degree - a - b : 0); ++c) {
                        double got = apply_rule(rule, a, b, c);
                        double exact = simplex_monomial_integral(dim, a, b, c);
                        CHECK_THAT(got, Catch::Matchers::WithinAbs(exact, 1e-13));
                    }
        }
    }
}

TEST_CASE("barycentric points lie inside the simplex") {
    for (int dim = 1; dim <= 3; ++dim) {
        auto rule = quad::simplex_rule(dim, 7);
        for (const auto& lam : rule.barycentric) {
            double sum = 0.0;
            for (int j = 0; j <= dim; ++j) {
                CHECK(lam[j] > 0.0);
                sum += lam[j];
            }
            CHECK_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-14));
        }
    }
}

TEST_CASE("rule construction rejects bad input") {
    CHECK_THROWS_AS(quad::simplex_rule(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(quad::grundmann_moller(4, 1), std::invalid_argument);
    std::vector<double> x, w;
    CHECK_THROWS_AS(quad::gauss_legendre(0, x, w), std::invalid_argument);
}
