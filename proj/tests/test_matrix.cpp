#include "asbpir/matrix.hpp"

#include "support/oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

using namespace asbpir;

namespace {

// columns are the binary expansions of 1..7, a [7,3,4] code
GeneratorMatrix simplex3() {
    const Field& f = Field::get(2, 1);
    Matrix m(f, 3, 7);
    for (int enc = 1; enc <= 7; ++enc)
        for (int i = 0; i < 3; ++i) m.set(i, enc - 1, static_cast<uint8_t>((enc >> i) & 1));
    return GeneratorMatrix(std::move(m));
}

GeneratorMatrix random_full_rank(const Field& f, int k, int n, std::mt19937& rng) {
    std::uniform_int_distribution<int> dist(0, f.q() - 1);
    for (;;) {
        Matrix m(f, k, n);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < n; ++j) m.set(i, j, static_cast<uint8_t>(dist(rng)));
        if (rank_of(m) == k) return GeneratorMatrix(std::move(m));
    }
}

std::set<Vec> codeword_set(const GeneratorMatrix& g) {
    auto words = oracle::codewords(g);
    return std::set<Vec>(words.begin(), words.end());
}

}  // namespace

TEST_CASE("rref on hand-worked examples") {
    const Field& f2 = Field::get(2, 1);
    const Field& f3 = Field::get(3, 1);

    SECTION("GF(2), rank-deficient") {
        Matrix m = Matrix::from_rows(f2, {{1, 1, 0, 1}, {0, 1, 1, 1}, {1, 0, 1, 0}});
        RrefResult rr = rref(m);
        REQUIRE(rr.rank == 2);
        REQUIRE(rr.pivot_cols == std::vector<int>{0, 1});
        REQUIRE(rr.m == Matrix::from_rows(f2, {{1, 0, 1, 0}, {0, 1, 1, 1}, {0, 0, 0, 0}}));
    }

    SECTION("GF(3), pivot gap in the middle") {
        Matrix m = Matrix::from_rows(f3, {{1, 2, 1}, {2, 1, 0}, {0, 0, 0}});
        RrefResult rr = rref(m);
        REQUIRE(rr.rank == 2);
        REQUIRE(rr.pivot_cols == std::vector<int>{0, 2});
        REQUIRE(rr.m == Matrix::from_rows(f3, {{1, 2, 0}, {0, 0, 1}, {0, 0, 0}}));
    }

    SECTION("idempotence") {
        Matrix m = Matrix::from_rows(f3, {{1, 2, 0, 1}, {2, 1, 1, 0}, {0, 2, 2, 2}});
        RrefResult first = rref(m);
        RrefResult second = rref(first.m);
        REQUIRE(second.m == first.m);
        REQUIRE(second.rank == first.rank);
        REQUIRE(second.pivot_cols == first.pivot_cols);
    }

    SECTION("pivot_limit keeps pivots out of the augmented block") {
        Matrix m = Matrix::from_rows(f2, {{0, 1, 1, 0}, {0, 0, 0, 1}});
        RrefResult limited = rref(m, 2);
        REQUIRE(limited.rank == 1);
        REQUIRE(limited.pivot_cols == std::vector<int>{1});
        REQUIRE(rref(m).rank == 2);
    }
}

TEST_CASE("matrix building blocks") {
    const Field& f3 = Field::get(3, 1);
    Matrix a = Matrix::from_rows(f3, {{1, 2}, {0, 1}});
    Matrix b = Matrix::from_rows(f3, {{2, 0, 1}, {1, 1, 2}});

    SECTION("multiplication against hand computation") {
        Matrix c = mat_mul(a, b);
        REQUIRE(c == Matrix::from_rows(f3, {{1, 2, 2}, {1, 1, 2}}));
        REQUIRE(mat_mul(Matrix::identity(f3, 2), b) == b);
    }

    SECTION("hcat, column selection, transpose") {
        Matrix h = Matrix::hcat(a, b);
        REQUIRE(h.cols() == 5);
        REQUIRE(h.column(4) == Vec{1, 2});
        REQUIRE(h.submatrix_columns({2, 4}) == Matrix::from_rows(f3, {{2, 1}, {1, 2}}));
        REQUIRE(b.transpose() == Matrix::from_rows(f3, {{2, 1}, {0, 1}, {1, 2}}));
        REQUIRE(b.transpose().transpose() == b);
    }

    SECTION("shape and entry validation") {
        REQUIRE_THROWS_AS(Matrix::from_rows(f3, {{1, 2}, {1}}), std::invalid_argument);
        Matrix m(f3, 1, 1);
        REQUIRE_THROWS_AS(m.set(0, 0, 3), std::invalid_argument);
        const Field& f2 = Field::get(2, 1);
        Matrix other(f2, 2, 3);
        REQUIRE_THROWS_AS(Matrix::hcat(a, other), std::invalid_argument);
        REQUIRE_THROWS_AS(mat_mul(a, Matrix(f3, 3, 2)), std::invalid_argument);
    }

    SECTION("generator matrices must have independent rows") {
        REQUIRE_THROWS_AS(GeneratorMatrix(Matrix::from_rows(f3, {{1, 2}, {2, 1}})),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(GeneratorMatrix(Matrix(f3, 2, 1)), std::invalid_argument);
        REQUIRE_NOTHROW(GeneratorMatrix(Matrix::identity(f3, 3)));
    }
}

TEST_CASE("systematic form is a change of basis plus a column permutation") {
    std::mt19937 rng(2024);
    const Field& f2 = Field::get(2, 1);
    const Field& f3 = Field::get(3, 1);
    std::vector<GeneratorMatrix> cases;
    cases.push_back(simplex3());
    for (int rep = 0; rep < 5; ++rep) {
        cases.push_back(random_full_rank(f2, 3, 6, rng));
        cases.push_back(random_full_rank(f3, 2, 5, rng));
    }
    for (const GeneratorMatrix& g : cases) {
        SystematicForm sf = systematic_form(g);
        const int k = g.k(), n = g.n();
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                REQUIRE(sf.systematic.mat().at(i, j) == (i == j ? 1 : 0));
        std::vector<int> sorted = sf.column_permutation;
        std::sort(sorted.begin(), sorted.end());
        for (int j = 0; j < n; ++j) REQUIRE(sorted[j] == j);
        Matrix transformed = mat_mul(sf.change_of_basis, g.mat());
        for (int j = 0; j < n; ++j)
            REQUIRE(sf.systematic.mat().column(j) == transformed.column(sf.column_permutation[j]));
    }
}

TEST_CASE("dual basis spans exactly the brute-force dual code") {
    std::mt19937 rng(515);
    const Field& f2 = Field::get(2, 1);
    const Field& f3 = Field::get(3, 1);
    std::vector<GeneratorMatrix> cases;
    cases.push_back(simplex3());
    cases.push_back(GeneratorMatrix(Matrix::from_rows(f2, {{1, 0, 1}, {0, 1, 1}})));
    for (int rep = 0; rep < 4; ++rep) {
        cases.push_back(random_full_rank(f2, 2, 6, rng));
        cases.push_back(random_full_rank(f3, 3, 5, rng));
    }
    for (const GeneratorMatrix& g : cases) {
        Matrix h = dual_basis(g);
        REQUIRE(h.rows() == g.n() - g.k());
        REQUIRE(h.cols() == g.n());
        REQUIRE(rank_of(h) == g.n() - g.k());
        Matrix product = mat_mul(g.mat(), h.transpose());
        for (int i = 0; i < product.rows(); ++i)
            for (int j = 0; j < product.cols(); ++j) REQUIRE(product.at(i, j) == 0);
        auto brute = oracle::dual_codewords(g);
        REQUIRE(oracle::rowspace(h) == std::set<Vec>(brute.begin(), brute.end()));
    }

    SECTION("full-length code has an empty dual basis") {
        Matrix h = dual_basis(GeneratorMatrix(Matrix::identity(f3, 3)));
        REQUIRE(h.rows() == 0);
        REQUIRE(min_distance_rows(h) == std::nullopt);
    }
}

TEST_CASE("minimum distance by enumeration") {
    const Field& f2 = Field::get(2, 1);

    SECTION("known codes") {
        GeneratorMatrix simplex = simplex3();
        REQUIRE(min_distance(simplex) == 4);
        REQUIRE(min_distance_rows(dual_basis(simplex)) == 3);
        GeneratorMatrix parity(Matrix::from_rows(f2, {{1, 0, 1}, {0, 1, 1}}));
        REQUIRE(min_distance(parity) == 2);
        REQUIRE(min_distance(GeneratorMatrix(Matrix::identity(f2, 4))) == 1);
    }

    SECTION("random codes against the brute-force oracle") {
        std::mt19937 rng(77);
        const Field& f3 = Field::get(3, 1);
        for (int rep = 0; rep < 8; ++rep) {
            GeneratorMatrix a = random_full_rank(f2, 3, 7, rng);
            REQUIRE(min_distance(a) == oracle::min_distance(a));
            GeneratorMatrix b = random_full_rank(f3, 2, 5, rng);
            REQUIRE(min_distance(b) == oracle::min_distance(b));
        }
    }

    SECTION("extension fields against the brute-force oracle") {
        // the rowspace walk must reach all q^k combinations, not just the
        // prime-subfield ones
        std::mt19937 rng(78);
        const Field& f4 = Field::get(2, 2);
        const Field& f8 = Field::get(2, 3);
        for (int rep = 0; rep < 6; ++rep) {
            GeneratorMatrix a = random_full_rank(f4, 2, 6, rng);
            REQUIRE(min_distance(a) == oracle::min_distance(a));
            GeneratorMatrix b = random_full_rank(f8, 2, 4, rng);
            REQUIRE(min_distance(b) == oracle::min_distance(b));
        }

        Matrix v(f8, 3, 7);
        for (int j = 0; j < 7; ++j) {
            const uint8_t x = static_cast<uint8_t>(j);
            v.set(0, j, 1);
            v.set(1, j, x);
            v.set(2, j, f8.mul(x, x));
        }
        REQUIRE(min_distance(GeneratorMatrix(std::move(v))) == 5);
    }

    SECTION("enumeration cap is enforced") {
        REQUIRE_THROWS_AS(min_distance(simplex3(), 4), std::length_error);
    }
}

TEST_CASE("shortening keeps exactly the codewords supported inside the window") {
    std::mt19937 rng(909);
    const Field& f2 = Field::get(2, 1);
    const Field& f3 = Field::get(3, 1);
    std::vector<GeneratorMatrix> cases;
    cases.push_back(simplex3());
    for (int rep = 0; rep < 4; ++rep) {
        cases.push_back(random_full_rank(f2, 3, 6, rng));
        cases.push_back(random_full_rank(f3, 2, 4, rng));
    }
    for (const GeneratorMatrix& g : cases) {
        const int n = g.n();
        std::vector<int> keep;
        for (int j = 0; j < n; j += 2) keep.push_back(j);
        Matrix s = shorten(g, keep);
        std::set<Vec> expected;
        for (const Vec& w : oracle::codewords(g)) {
            bool inside = true;
            for (int j = 0; j < n && inside; ++j)
                if (w[j] != 0 && std::find(keep.begin(), keep.end(), j) == keep.end())
                    inside = false;
            if (inside) expected.insert(w);
        }
        REQUIRE(oracle::rowspace(s) == expected);
    }

    SECTION("simplex shortened to six coordinates") {
        Matrix s = shorten(simplex3(), {0, 1, 2, 3, 4, 5});
        REQUIRE(s.rows() == 2);
        REQUIRE(rank_of(s) == 2);
        for (int i = 0; i < s.rows(); ++i) REQUIRE(s.at(i, 6) == 0);
    }

    SECTION("coordinate validation") {
        REQUIRE_THROWS_AS(shorten(simplex3(), {7}), std::invalid_argument);
    }
}

TEST_CASE("puncturing projects the code onto the window") {
    std::mt19937 rng(311);
    const Field& f3 = Field::get(3, 1);
    for (int rep = 0; rep < 5; ++rep) {
        GeneratorMatrix g = random_full_rank(f3, 2, 5, rng);
        std::vector<int> keep = {0, 2, 3};
        Matrix p = puncture(g, keep);
        std::set<Vec> expected;
        for (const Vec& w : oracle::codewords(g)) {
            Vec proj(keep.size());
            for (size_t j = 0; j < keep.size(); ++j) proj[j] = w[keep[j]];
            expected.insert(std::move(proj));
        }
        REQUIRE(oracle::rowspace(p) == expected);
        REQUIRE(p.cols() == 3);
    }
    REQUIRE_THROWS_AS(puncture(simplex3(), {}), std::invalid_argument);
}

TEST_CASE("minimal dual codewords through a coordinate") {
    GeneratorMatrix g = simplex3();
    std::vector<int> all = {0, 1, 2, 3, 4, 5, 6};

    SECTION("minimal words through each coordinate of the simplex code") {
        // the dual is the [7,4,3] Hamming code: its minimal codewords are the
        // 7 weight-3 lines and their 7 weight-4 complements; a fixed point
        // lies on 3 lines and misses 4
        auto dual = codeword_set(GeneratorMatrix(dual_basis(g)));
        for (int i = 0; i < 7; ++i) {
            auto words = minimal_dual_codewords_through(g, i, all);
            REQUIRE(words.size() == 7);
            int weight3 = 0, weight4 = 0;
            for (const Vec& w : words) {
                const int wt = oracle::weight(w);
                weight3 += wt == 3;
                weight4 += wt == 4;
                REQUIRE(w[i] != 0);
                REQUIRE(dual.count(w) == 1);
            }
            REQUIRE(weight3 == 3);
            REQUIRE(weight4 == 4);
        }
    }

    SECTION("restricting the window drops words that leave it") {
        auto words = minimal_dual_codewords_through(g, 0, {0, 1, 2, 3});
        for (const Vec& w : words)
            for (int j = 4; j < 7; ++j) REQUIRE(w[j] == 0);
    }

    SECTION("index validation") {
        REQUIRE_THROWS_AS(minimal_dual_codewords_through(g, 7, all), std::invalid_argument);
    }
}

TEST_CASE("code metrics") {
    const Field& f2 = Field::get(2, 1);

    CodeMetrics simplex = code_metrics(simplex3());
    REQUIRE(simplex.n == 7);
    REQUIRE(simplex.k == 3);
    REQUIRE(simplex.d == 4);
    REQUIRE(simplex.d_perp == 3);
    REQUIRE(simplex.gamma == 7);

    CodeMetrics parity = code_metrics(GeneratorMatrix(Matrix::from_rows(f2, {{1, 0, 1}, {0, 1, 1}})));
    REQUIRE(parity.d == 2);
    REQUIRE(parity.d_perp == 3);
    REQUIRE(parity.gamma == 3);

    CodeMetrics identity = code_metrics(GeneratorMatrix(Matrix::identity(f2, 2)));
    REQUIRE(identity.d == 1);
    REQUIRE_FALSE(identity.d_perp.has_value());
    REQUIRE(identity.gamma == 2);
}
