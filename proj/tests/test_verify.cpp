#include <catch2/catch.hpp>

#include "nullcurve/verify.hpp"

using namespace nullcurve::verify;

TEST_CASE("suite composition and determinism of the report structure") {
    auto rep = run_suite("algebra");
    REQUIRE(rep.criteria.size() == 2);
    CHECK(rep.criteria[0].id == 7);
    CHECK(rep.criteria[1].id == 10);
    CHECK(rep.all_pass);

    auto rep2 = run_suite("algebra");
    // measured values are identical run to run (fixed seed, derived streams)
    for (std::size_t i = 0; i < rep.criteria.size(); ++i)
        for (std::size_t c = 0; c < rep.criteria[i].checks.size(); ++c)
            CHECK(rep.criteria[i].checks[c].measured == rep2.criteria[i].checks[c].measured);

    CHECK_THROWS_AS(run_suite("nope"), std::invalid_argument);
}

TEST_CASE("elliptic suite is green") {
    auto rep = run_suite("elliptic");
    CHECK(rep.all_pass);
    // the g3 sign adjudication is recorded
    bool note = false;
    for (const auto& n : rep.notes)
        if (n.find("g3 sign") != std::string::npos) note = true;
    CHECK(note);
}

TEST_CASE("reduction suite is green") {
    CHECK(run_suite("reduction").all_pass);
}

TEST_CASE("json serialization carries every check") {
    auto rep = run_suite("algebra");
    auto j = to_json(rep);
    CHECK(j["suite"] == "algebra");
    CHECK(j["criteria"].size() == 2);
    CHECK(j["criteria"][0]["checks"].size() == rep.criteria[0].checks.size());
}
