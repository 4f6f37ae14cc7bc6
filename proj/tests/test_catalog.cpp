#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "qloss/catalog.hpp"

namespace {

std::string slurp(const char* path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

const qloss::CatalogEntry& entry_for(const std::string& material, const std::string& reference) {
    for (const auto& entry : qloss::catalog_entries()) {
        if (entry.material == material && entry.reference == reference) {
            return entry;
        }
    }
    FAIL("no catalog entry for " << material << " / " << reference);
    return qloss::catalog_entries().front();
}

}  // namespace

TEST_CASE("the embedded catalog matches the shipped file byte for byte") {
    const std::string file = slurp(QLOSS_TABLE1_PATH);
    CHECK(qloss::catalog_csv() == file);
    CHECK(qloss::catalog_dump() == file);
    CHECK(qloss::catalog_entries().size() == 35);
}

TEST_CASE("uncertainty, range, bound and scaled cells parse correctly") {
    const auto& thin = entry_for("thin γ-Al₂O₃", "This work");
    CHECK(thin.delta_lp.present);
    CHECK(thin.delta_lp.central == doctest::Approx(3.2).epsilon(1e-12));
    CHECK(thin.delta_lp.low == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(thin.delta_lp.high == doctest::Approx(3.4).epsilon(1e-12));
    CHECK(thin.f_delta0.central == doctest::Approx(2.8).epsilon(1e-12));
    CHECK(thin.q_max.central == doctest::Approx(2.7).epsilon(1e-12));
    CHECK(thin.area.central == doctest::Approx(0.244).epsilon(1e-12));
    CHECK_FALSE(thin.estimated_flag);

    const auto& thick = entry_for("thick γ-Al₂O₃", "This work");
    CHECK(thick.delta_lp.central == doctest::Approx(3.6).epsilon(1e-12));
    CHECK(thick.q_max.high == doctest::Approx(6.9).epsilon(1e-12));

    const auto& ranged = entry_for("Al₂O₃", "20");
    CHECK(ranged.delta_lp.low == 3.0);
    CHECK(ranged.delta_lp.high == 5.0);
    CHECK(ranged.delta_lp.central == 4.0);
    CHECK(ranged.f_delta0.estimated);
    CHECK(ranged.f_delta0.low == doctest::Approx(2.3).epsilon(1e-12));
    CHECK(ranged.estimated_flag);

    const auto& dagger = entry_for("Al₂O₃", "60");
    CHECK(dagger.delta_lp.incomparable);
    CHECK_FALSE(dagger.delta_lp.present);
    CHECK(dagger.incomparable_flag);
    CHECK(dagger.q_max.present);

    const auto& bounded = entry_for("AlOₓ", "39");
    CHECK(bounded.delta_lp.upper_bound);
    CHECK(bounded.delta_lp.low == 0.0);
    CHECK(bounded.delta_lp.high == doctest::Approx(0.05).epsilon(1e-12));
    CHECK_FALSE(bounded.q_max.present);  // blank cell

    const auto& scaled = entry_for("Si:H", "69");
    CHECK(scaled.f_delta0.filling_scaled);
    CHECK(scaled.f_delta0.low == doctest::Approx(2.2).epsilon(1e-12));
    CHECK(scaled.f_delta0.high == doctest::Approx(2.5).epsilon(1e-12));

    for (const auto& entry : qloss::catalog_entries()) {
        for (const auto* cell : {&entry.delta_lp, &entry.f_delta0, &entry.q_max, &entry.area}) {
            if (cell->present) {
                CHECK(cell->low <= cell->central);
                CHECK(cell->central <= cell->high);
            }
        }
    }
}

TEST_CASE("queries filter conjunctively with subscript folding") {
    qloss::CatalogFilter this_work;
    this_work.reference = "This work";
    CHECK(qloss::catalog_query(this_work).size() == 2);

    qloss::CatalogFilter epitaxial_alumina;
    epitaxial_alumina.material = "Al₂O₃";
    epitaxial_alumina.crystallinity = "epitaxial";
    CHECK(qloss::catalog_query(epitaxial_alumina).size() == 4);

    // ASCII spelling matches the subscripted material names.
    qloss::CatalogFilter ascii;
    ascii.material = "al2o3";
    CHECK(qloss::catalog_query(ascii).size() == 6);

    qloss::CatalogFilter kid;
    kid.geometry = "LEKID";
    CHECK(qloss::catalog_query(kid).size() == 1);

    qloss::CatalogFilter low_loss;
    low_loss.max_delta_lp = 5e-5;
    CHECK(qloss::catalog_query(low_loss).size() == 8);

    qloss::CatalogFilter impossible;
    impossible.max_delta_lp = 0.0;
    CHECK(qloss::catalog_query(impossible).empty());

    CHECK(qloss::catalog_query({}).size() == 35);
}
