#include <doctest.h>

#include <cmath>
#include <limits>

#include "trapnoise/errors.hpp"
#include "trapnoise/rng.hpp"
#include "trapnoise/suppression.hpp"

using namespace trapnoise;
using doctest::Approx;

TEST_CASE("optical occupancy follows the saturating form") {
    const OpticalSuppressionParams prm{0.4, 1.0, 1.0};
    CHECK(occupancy_vs_power(0.0, prm) == 0.4);
    CHECK(occupancy_vs_power(1.0, prm) == Approx(0.7));
    CHECK(occupancy_vs_power(1e12, prm) == Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(occupancy_vs_power(-0.1, prm), DomainError);
    CHECK_THROWS_AS(occupancy_vs_power(1.0, OpticalSuppressionParams{0.4, 1.0, 0.0}), DomainError);
}

TEST_CASE("optical occupancy is monotone and bounded") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const OpticalSuppressionParams prm{rng.uniform(), rng.uniform(), rng.uniform(0.01, 10.0)};
        const double lo = std::min(prm.p0, prm.p_inf), hi = std::max(prm.p0, prm.p_inf);
        double prev = occupancy_vs_power(0.0, prm);
        for (double pw = 0.05; pw < 200.0; pw *= 1.3) {
            const double p = occupancy_vs_power(pw, prm);
            CHECK(p >= lo - 1e-15);
            CHECK(p <= hi + 1e-15);
            if (prm.p_inf > prm.p0) CHECK(p > prev);
            if (prm.p_inf < prm.p0) CHECK(p < prev);
            prev = p;
        }
    }
}

TEST_CASE("microscopic rates map onto the effective parameters") {
    const MicroscopicOpticalRates r{0.4, 0.6, 0.7, 0.3};
    const auto e = effective_from_microscopic(r);
    CHECK(e.p0 == Approx(0.4));
    CHECK(e.p_sat_nw == Approx(1.0));
    CHECK(e.p_inf == Approx(0.7));

    CHECK(effective_from_microscopic({0.4, 0.6, 2.0, 0.0}).p_inf == 1.0);
    CHECK(effective_from_microscopic({0.4, 0.6, 1.5, 1.5}).p_inf == 0.5);
    CHECK_THROWS_AS(effective_from_microscopic({0.0, 0.0, 1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(effective_from_microscopic({1.0, 0.0, 0.0, 0.0}), DomainError);

    // Round trip against the rate form p = k+/(k+ + k-) on a power grid.
    Rng rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const MicroscopicOpticalRates m{rng.uniform(0.01, 3.0), rng.uniform(0.01, 3.0),
                                        rng.uniform(0.01, 3.0), rng.uniform(0.0, 3.0)};
        const auto eff = effective_from_microscopic(m);
        for (double pw = 0.0; pw < 30.0; pw += 0.7) {
            const double kp = m.k0_plus + m.alpha_c * pw;
            const double km = m.k0_minus + m.alpha_r * pw;
            CHECK(occupancy_vs_power(pw, eff) == Approx(kp / (kp + km)).epsilon(1e-14));
            CHECK(occupancy_from_rates(pw, m) == Approx(kp / (kp + km)).epsilon(1e-14));
            CHECK(switching_time_from_rates(pw, m) == Approx(1.0 / (kp + km)).epsilon(1e-14));
        }
    }
    CHECK(capture_coefficient(2.0, 3.0, 0.5) == 3.0);
}

TEST_CASE("carrier density is linear in power") {
    CarrierGeneration gen;
    gen.photon_energy_mev = 2800.0;
    gen.area_nm2 = 1.0;
    gen.thickness_nm = 1.0;
    gen.tau_r_s = 1e-9;
    const double kappa = carrier_density_coefficient(gen);
    // eta tau_r P / (hbar omega A d): 1e-9 s * 1e-9 W / (2.8 eV) per nm^3
    const double direct = 1e-9 * 1e-9 / (2800.0e-3 * 1.602176634e-19);
    CHECK(kappa == Approx(direct).epsilon(1e-12));
    CHECK(carrier_density(0.0, gen) == 0.0);
    CHECK(carrier_density(3.0, gen) == Approx(3.0 * kappa));
    CHECK(carrier_density(6.0, gen) == Approx(2.0 * carrier_density(3.0, gen)));
    CHECK_THROWS_AS(carrier_density(-1.0, gen), DomainError);
}

TEST_CASE("characteristic tunneling field") {
    // Independent SI evaluation of 4 sqrt(2 m) Phi^1.5 / (3 hbar q), V/m -> kV/cm.
    const double me = 9.1093837015e-31, hbar = 1.054571817e-34, q = 1.602176634e-19;
    const double phi = 0.5 * q;
    const double si = 4.0 * std::sqrt(2.0 * 0.16 * me) * std::pow(phi, 1.5) / (3.0 * hbar * q);
    CHECK(characteristic_field(0.5, 0.16) == Approx(si * 1e-5).epsilon(1e-10));
    CHECK(characteristic_field(0.5, 0.16) == Approx(9.66e3).epsilon(1e-3));
    CHECK(characteristic_field(0.0, 0.16) == 0.0);
    for (double d : {0.01, 0.1, 0.3, 1.7})
        CHECK(characteristic_field(2.0 * d, 0.2) / characteristic_field(d, 0.2) ==
              Approx(2.0 * std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("field-assisted release rate") {
    CHECK(release_rate_field(0.0, 0.3, 5.0, 0.2, 1.0, 800.0) == 0.3);
    CHECK(release_rate_field(1e12, 0.3, 5.0, 0.0, 1.0, 800.0) == Approx(5.3).epsilon(1e-8));
    CHECK(release_rate_field(800.0, 0.3, 5.0, 0.0, 1.0, 800.0) == Approx(0.3 + 5.0 * std::exp(-1.0)));
    CHECK(tunneling_factor(0.0, 0.2, 1.0, 800.0) == 0.0);
    CHECK_THROWS_AS(release_rate_field(-1.0, 0.3, 5.0, 0.2, 1.0, 800.0), DomainError);
}

TEST_CASE("electrical occupancy") {
    const ElectricalSuppressionParams prm{0.35, 50.0, 0.2, 1.0, 800.0};
    CHECK(occupancy_vs_field(0.0, prm) == 0.35);
    const double direct = 0.35 / (1.0 + 50.0 * std::pow(800.0, 0.2) * std::exp(-1.0));
    CHECK(occupancy_vs_field(800.0, prm) == Approx(direct).epsilon(1e-14));
    CHECK(occupancy_vs_field(800.0, prm) == Approx(0.00493).epsilon(2e-3));

    auto off = prm;
    off.b = 0.0;
    for (double e = 0.0; e < 3000.0; e += 111.0) CHECK(occupancy_vs_field(e, off) == 0.35);
    CHECK_THROWS_AS(occupancy_vs_field(-5.0, prm), DomainError);
}

TEST_CASE("electrical occupancy never rises with field") {
    Rng rng(12);
    for (int trial = 0; trial < 300; ++trial) {
        const ElectricalSuppressionParams prm{rng.uniform(), std::pow(10.0, rng.uniform(-1.0, 4.0)),
                                              rng.uniform(0.0, 2.0), rng.uniform(0.2, 3.0),
                                              rng.uniform(50.0, 5000.0)};
        double prev = occupancy_vs_field(0.0, prm);
        for (double e = 1.0; e < 2.0e4; e *= 1.2) {
            const double p = occupancy_vs_field(e, prm);
            CHECK(p <= prev);
            CHECK(p >= 0.0);
            prev = p;
        }
    }
}
