#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sgf/io.hpp"
#include "sgf/zfield.hpp"

using namespace sgf;

namespace {
const double sqrt3 = LevelGraph::kSqrt3;
}

TEST_CASE("cell energy measure of the coordinates") {
    const LevelGraph g = LevelGraph::build(6);
    const PiecewiseHarmonic p1 = extend_to_level(phi1_boundary(), g);
    const PiecewiseHarmonic p2 = extend_to_level(phi2_boundary(), g);

    CHECK(cell_energy_measure(p1, p1, "", g) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(cell_energy_measure(p1, p1, "0", g) == doctest::Approx(0.7).epsilon(1e-13));
    CHECK(cell_energy_measure(p2, p2, "0", g) == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(cell_energy_measure(p1, p2, "", g) == doctest::Approx(0.0).epsilon(1e-14));

    const PiecewiseHarmonic c = extend_to_level({4.2, 4.2, 4.2}, g);
    CHECK(cell_energy_measure(c, p1, "01", g) == doctest::Approx(0.0));

    // cross-check against the defining formula with phi == 1:
    // Gamma(f)(K) = E(f,f)
    CHECK(cell_energy_measure(p1, p1, "", g) == doctest::Approx(graph_energy(p1, g)).epsilon(1e-12));

    // direct edge-sum inside K_0 at level 6: sum of renormalized edge
    // energies of the level-6 edges contained in the cell
    double inside = 0.0;
    for (std::int64_t cidx = 0; cidx < pow3(5); ++cidx) {
        const Address w = "0" + index_to_address(static_cast<int>(cidx), 5);
        const auto corners = g.cell_boundary(w);
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                const double d = p1.at(corners[i]) - p1.at(corners[j]);
                inside += d * d;
            }
    }
    inside *= energy_renorm(6);
    CHECK(inside == doctest::Approx(0.7).epsilon(1e-3));

    // non-harmonic input is rejected
    PiecewiseHarmonic broken = p1;
    broken.values[7] += 0.25;
    CHECK_THROWS_AS(cell_energy_measure(broken, p1, "0", g), domain_error);
}

TEST_CASE("kusuoka table") {
    const CellMeasureTable t0 = kusuoka_table(0);
    CHECK(t0.at("") == doctest::Approx(3.0).epsilon(1e-14));
    const CellMeasureTable t1 = kusuoka_table(1);
    CHECK(t1.at("0") == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(t1.at("1") == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(t1.at("2") == doctest::Approx(1.0).epsilon(1e-14));
    for (int m = 0; m <= 8; ++m)
        CHECK(kusuoka_table(m).total() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK_THROWS_AS(kusuoka_table(99), resource_limit_error);

    // additivity under refinement
    const CellMeasureTable t2 = kusuoka_table(2);
    for (int c = 0; c < 3; ++c) {
        const Address w = index_to_address(c, 1);
        double sum = 0.0;
        for (const Address& s : subcells(w)) sum += t2.at(s);
        CHECK(sum == doctest::Approx(t1.at(w)).epsilon(1e-13));
    }
}

TEST_CASE("z matrix examples") {
    const ZMatrix z_root = z_matrix("");
    CHECK(z_root(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(z_root(1, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(z_root(0, 1) == doctest::Approx(0.0).epsilon(1e-14));

    const ZMatrix z0 = z_matrix("0");
    CHECK(z0(0, 0) == doctest::Approx(0.7).epsilon(1e-13));
    CHECK(z0(1, 1) == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(z0(0, 1) == doctest::Approx(sqrt3 / 5).epsilon(1e-13));
    CHECK(z0.determinant() == doctest::Approx(0.09).epsilon(1e-12));
    CHECK(lambda_max(z0) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(lambda_min(z0) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("z field laws across levels") {
    for (int m = 0; m <= 6; ++m) {
        const ZField zf = ZField::build(m);
        for (std::int64_t c = 0; c < zf.cell_count(); ++c) {
            const ZMatrix& z = zf.z(static_cast<int>(c));
            REQUIRE(z(0, 1) == z(1, 0));
            REQUIRE(z.trace() == doctest::Approx(1.0).epsilon(1e-12));
            REQUIRE(lambda_min(z) >= -1e-12);
        }
    }
}

TEST_CASE("martingale refinement identity") {
    for (int m = 0; m <= 5; ++m) {
        const ZField coarse = ZField::build(m);
        const ZField fine = ZField::build(m + 1);
        for (std::int64_t c = 0; c < coarse.cell_count(); ++c) {
            const ZMatrix lhs = coarse.nu(static_cast<int>(c)) * coarse.z(static_cast<int>(c));
            ZMatrix rhs = ZMatrix::Zero();
            for (int s = 0; s < 3; ++s) {
                const int fc = static_cast<int>(c) * 3 + s;
                rhs += fine.nu(fc) * fine.z(fc);
            }
            REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("partition of energy to total") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(-2, 2);
    const LevelGraph g = LevelGraph::build(5);
    for (int trial = 0; trial < 10; ++trial) {
        const BoundaryTriple u{dist(rng), dist(rng), dist(rng)};
        const PiecewiseHarmonic f = extend_to_level(u, g);
        const double total = graph_energy(f, g);
        for (int m = 0; m <= 5; ++m) {
            double sum = 0.0;
            for (std::int64_t c = 0; c < pow3(m); ++c)
                sum += cell_energy_measure(f, f, index_to_address(static_cast<int>(c), m), g,
                                           /*check_harmonic=*/false);
            REQUIRE(sum == doctest::Approx(total).epsilon(1e-12));
        }
    }
}

TEST_CASE("cauchy-schwarz per cell") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> dist(-2, 2);
    const LevelGraph g = LevelGraph::build(4);
    for (int trial = 0; trial < 20; ++trial) {
        const PiecewiseHarmonic f = extend_to_level({dist(rng), dist(rng), dist(rng)}, g);
        const PiecewiseHarmonic h = extend_to_level({dist(rng), dist(rng), dist(rng)}, g);
        for (std::int64_t c = 0; c < pow3(4); ++c) {
            const Address w = index_to_address(static_cast<int>(c), 4);
            const double fg = cell_energy_measure(f, h, w, g, false);
            const double ff = cell_energy_measure(f, f, w, g, false);
            const double hh = cell_energy_measure(h, h, w, g, false);
            REQUIRE(fg * fg <= ff * hh + 1e-12);
        }
    }
}

TEST_CASE("chain rule for linear post-composition") {
    // F(x,y) = a x + b y: Gamma(F o Phi)(K_w) = (a,b) GammaMatrix(w) (a,b)^T
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> dist(-2, 2);
    const LevelGraph g = LevelGraph::build(4);
    const PiecewiseHarmonic p1 = extend_to_level(phi1_boundary(), g);
    const PiecewiseHarmonic p2 = extend_to_level(phi2_boundary(), g);
    for (int trial = 0; trial < 10; ++trial) {
        const double a = dist(rng), b = dist(rng);
        BoundaryTriple comb;
        for (int i = 0; i < 3; ++i) comb[i] = a * phi1_boundary()[i] + b * phi2_boundary()[i];
        const PiecewiseHarmonic f = extend_to_level(comb, g);
        for (const Address& w : {Address{}, Address{"2"}, Address{"01"}, Address{"120"}}) {
            const ZMatrix gamma = cell_gamma_matrix(w);
            const double expect = a * a * gamma(0, 0) + 2 * a * b * gamma(0, 1) + b * b * gamma(1, 1);
            REQUIRE(cell_energy_measure(f, f, w, g, false) ==
                    doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("c_z_bound") {
    CHECK(c_z_bound(0) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(c_z_bound(1) == doctest::Approx(0.9).epsilon(1e-13));
    for (int m = 0; m <= 8; ++m) CHECK(c_z_bound(m) <= 1.0 + 1e-12);
}

TEST_CASE("exports") {
    const ZField zf = ZField::build(1);
    const std::string csv = zfield_to_csv(zf);
    CHECK(csv.find("w,nu,z11,z12,z22") == 0);
    const auto j = zfield_to_json(zf);
    CHECK(j["cells"].size() == 3);
    CHECK(double(j["total_nu"]) == doctest::Approx(3.0));
}
