#include "doctest.h"

#include <stdexcept>

#include <fstream>
#include <set>

#include "abk/population.hpp"

using namespace abk;

namespace {

const std::string kCases = std::string(ABK_DATA_DIR) + "/cases.csv";
const std::string kPopulation = std::string(ABK_DATA_DIR) + "/population.csv";
const std::string kMoves = std::string(ABK_DATA_DIR) + "/moves.csv";

Population load_shipped() {
    return load_population(kPopulation, kMoves, load_cases(kCases));
}

std::string write_temp(const std::string& name, const std::string& text) {
    std::string path = std::string("/tmp/abk_pop_") + name;
    std::ofstream out(path, std::ios::trunc);
    out << text;
    return path;
}

}  // namespace

TEST_CASE("case table loads and anchors day zero at the first rash") {
    auto cases = load_cases(kCases);
    REQUIRE(cases.size() == 32);
    CHECK(cases[0].rash_day == 0.0);
    CHECK(cases[0].compound == 1);
    CHECK(cases[0].confession == Confession::FTC);
    CHECK_FALSE(cases[0].vaccinated);
    CHECK(cases[31].rash_day == 76.0);
    CHECK(cases[31].compound == 2);
    CHECK(cases[31].vaccinated);

    std::set<int> vaccinated;
    for (const auto& c : cases)
        if (c.vaccinated) vaccinated.insert(c.case_id);
    CHECK(vaccinated == std::set<int>{7, 8, 20, 21, 22, 27, 31});
}

TEST_CASE("case loader rejects malformed rows") {
    auto neg = write_temp("neg.csv", "case_id,rash_day,compound,confession,vaccinated\n0,-1,1,FTC,No\n");
    CHECK_THROWS_WITH_AS(load_cases(neg), doctest::Contains("negative rash day"), std::runtime_error);

    auto dup = write_temp("dup.csv",
                          "case_id,rash_day,compound,confession,vaccinated\n"
                          "0,0,1,FTC,No\n0,3,1,FTC,No\n");
    CHECK_THROWS_WITH_AS(load_cases(dup), doctest::Contains("duplicate case id"), std::runtime_error);

    auto bad = write_temp("bad.csv", "case_id,rash_day,compound,confession,vaccinated\n0,x,1,FTC,No\n");
    CHECK_THROWS_WITH_AS(load_cases(bad), doctest::Contains(":2"), std::runtime_error);
}

TEST_CASE("population totals match the source tables") {
    Population pop = load_shipped();
    CHECK(pop.total() == 31200);
    CHECK(pop.ftc_total() == 120);
    CHECK(pop.in_compound_total() == 251);
    CHECK(pop.census(1, Confession::FTC) == 33);
    CHECK(pop.census(1, Confession::NonFTC) == 0);
    auto [v1, u1] = pop.cell_counts(1, Confession::FTC, enumerate_vaccination_configs().front());
    CHECK(v1 == 18);
    CHECK(u1 == 15);
}

TEST_CASE("population loader names the violated sum") {
    std::string text =
        "compound,confession,vaccinated_count,unvaccinated_count\n"
        "1,FTC,18,16\n1,Non,0,0\n2,FTC,9,5\n2,Non,1,0\n3,FTC,2,8\n3,Non,0,0\n"
        "4,FTC,2-i4,2+i4\n4,Non,28+i4,1-i4\n5,FTC,4-i5,3+i5\n5,Non,13+i5,2-i5\n"
        "6,FTC,0,0\n6,Non,40,3\n7,FTC,4-i7,1+i7\n7,Non,12+i7,3-i7\n8,FTC,0,0\n8,Non,37,5\n"
        "9,FTC,0,1\n9,Non,26,6\n0,FTC,22,24\n0,Non,28110,2793\n";
    auto path = write_temp("off_by_one.csv", text);
    CHECK_THROWS_WITH_AS(load_population(path, kMoves, load_cases(kCases)),
                         doctest::Contains("FTC total"), std::runtime_error);
}

TEST_CASE("vaccination configs enumerate the constraint set in order") {
    auto configs = enumerate_vaccination_configs();
    REQUIRE(configs.size() == 5);
    CHECK(configs[0] == VaccinationConfig{0, 1, 3});
    CHECK(configs[1] == VaccinationConfig{0, 2, 2});
    CHECK(configs[2] == VaccinationConfig{1, 0, 3});
    CHECK(configs[3] == VaccinationConfig{1, 1, 2});
    CHECK(configs[4] == VaccinationConfig{1, 2, 1});
    for (const auto& c : configs) CHECK(c.i4 + c.i5 + c.i7 == 4);
}

TEST_CASE("compound vaccinated totals are config-independent") {
    Population pop = load_shipped();
    for (const auto& cfg : enumerate_vaccination_configs()) {
        long long ftc_vacc = 0, ftc_total = 0, non_total = 0;
        for (int c = 1; c <= pop.max_compound(); ++c) {
            auto [v, u] = pop.cell_counts(c, Confession::FTC, cfg);
            ftc_vacc += v;
            ftc_total += v + u;
            auto [nv, nu] = pop.cell_counts(c, Confession::NonFTC, cfg);
            non_total += nv + nu;
        }
        CHECK(ftc_vacc == 35);
        CHECK(ftc_total == 74);
        CHECK(non_total == 177);
    }
}

TEST_CASE("group sizes step only at the move for compounds 1 and 2") {
    Population pop = load_shipped();
    CHECK(pop.group_size(1, Confession::FTC, 10.0) == 33);
    CHECK(pop.group_size(1, Confession::FTC, 30.0) == 29);
    CHECK(pop.group_size(2, Confession::FTC, 10.0) == 14);
    CHECK(pop.group_size(2, Confession::FTC, 30.0) == 18);
    for (int c = 3; c <= 9; ++c)
        for (double t : {0.0, 24.9, 25.0, 60.0})
            CHECK(pop.group_size(c, Confession::FTC, t) == pop.group_size(c, Confession::FTC, 0.0));
    // Total in-compound population is conserved through the move.
    for (double t : {0.0, 24.999, 25.0, 40.0}) {
        long long total = 0;
        for (int c = 1; c <= 9; ++c)
            total += pop.group_size(c, Confession::FTC, t) + pop.group_size(c, Confession::NonFTC, t);
        CHECK(total == 251);
    }
}

TEST_CASE("group size by individual id and the outside error") {
    Population pop = load_shipped();
    int case0 = pop.individual_of_case(0);
    CHECK(pop.group_size_of(case0, 10.0) == 33);
    // Case 7 moves with the compound-1 party.
    int case7 = pop.individual_of_case(7);
    CHECK(pop.group_size_of(case7, 10.0) == 33);
    CHECK(pop.group_size_of(case7, 30.0) == 18);
    CHECK_THROWS_WITH_AS(pop.group_size_of(31000, 10.0), doctest::Contains("no compound group"),
                         std::runtime_error);
}

TEST_CASE("individual layout is consistent with the census") {
    Population pop = load_shipped();
    long long ftc = 0, vacc = 0, unknown = 0;
    for (int id = 0; id < pop.in_compound_total(); ++id) {
        const Individual& ind = pop.individual(id);
        CHECK(ind.id == id);
        if (ind.confession == Confession::FTC) ftc++;
        if (ind.vaccinated == VaccStatus::Yes) vacc++;
        if (ind.vaccinated == VaccStatus::Unknown) unknown++;
    }
    CHECK(ftc == 74);
    CHECK(unknown > 0);  // compounds 4/5/7 carry the unresolved splits
    // All four movers are FTC residents of compound 1 before the move.
    int movers = 0;
    for (int id = 0; id < pop.in_compound_total(); ++id) {
        const Individual& ind = pop.individual(id);
        if (!ind.mover) continue;
        movers++;
        CHECK(ind.compound_pre == 1);
        CHECK(ind.compound_post == 2);
        CHECK(ind.confession == Confession::FTC);
    }
    CHECK(movers == 4);
    auto [mv, mu] = pop.uninfected_mover_counts();
    CHECK(mv == 1);
    CHECK(mu == 1);
}

TEST_CASE("missing moves file names the path") {
    CHECK_THROWS_WITH_AS(load_population(kPopulation, "/nonexistent/moves.csv", load_cases(kCases)),
                         doctest::Contains("/nonexistent/moves.csv"), std::runtime_error);
}
