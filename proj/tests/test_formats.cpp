#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qnl/ghz.hpp"
#include "qnl/report.hpp"
#include "qnl/serialize.hpp"

#include "schema_check.hpp"

#include <cmath>
#include <string>
#include <vector>

using namespace qnl;
using doctest::Contains;
using nlohmann::json;

namespace {

TritString ts(const char* text, unsigned base = 3) { return *TritString::parse(text, base); }

bool same_family(const StringFamily& a, const StringFamily& b) {
    return a.n_parties() == b.n_parties() && a.variant() == b.variant() &&
           a.case_tag() == b.case_tag() && a.sets() == b.sets() && a.removed() == b.removed();
}

} // namespace

TEST_CASE("family text format freezes the two-party sets") {
    // Lex order within each set, header per set, newline-terminated.
    const std::string expected =
        "#set 0\n00\n12\n21\n"
        "#set 1\n01\n10\n22\n"
        "#set 2\n02\n11\n20\n";
    const StringFamily f = build_family(2);
    CHECK(family_to_text(f) == expected);

    const StringFamily parsed = family_from_text(expected);
    CHECK(same_family(parsed, f));
    CHECK(family_to_text(parsed) == expected);
}

TEST_CASE("family text round-trips for both variants") {
    for (std::size_t n = 1; n <= 5; ++n) {
        const StringFamily f = build_family(n);
        const std::string text = family_to_text(f);
        const StringFamily parsed = family_from_text(text);
        CHECK(same_family(parsed, f));
        CHECK(family_to_text(parsed) == text);
    }
    for (std::size_t n = 3; n <= 5; ++n) {
        const StringFamily f = build_modified_family(n);
        const std::string text = family_to_text(f);
        const StringFamily parsed = family_from_text(text);
        CHECK(same_family(parsed, f));
        CHECK(family_to_text(parsed) == text);
    }
}

TEST_CASE("parsing a modified family recovers the removed-constant metadata") {
    const StringFamily three = family_from_text(family_to_text(build_modified_family(3)));
    CHECK(three.variant() == FamilyVariant::modified);
    CHECK(three.case_tag() == CaseTag::case_i);
    CHECK(three.removed()[0] == std::vector<TritString>{ts("000"), ts("111"), ts("222")});
    CHECK(three.removed()[1].empty());
    CHECK(three.removed()[2].empty());
    CHECK(three.removed()[3].empty());

    const StringFamily four = family_from_text(family_to_text(build_modified_family(4)));
    CHECK(four.case_tag() == CaseTag::case_ii);
    CHECK(four.removed()[0] == std::vector<TritString>{ts("0000")});
    CHECK(four.removed()[1] == std::vector<TritString>{ts("1111")});

    const StringFamily five = family_from_text(family_to_text(build_modified_family(5)));
    CHECK(five.case_tag() == CaseTag::case_iii);
    CHECK(five.removed()[0] == std::vector<TritString>{ts("00000")});
    CHECK(five.removed()[1] == std::vector<TritString>{ts("22222")});
}

TEST_CASE("family JSON mirrors the text content") {
    for (std::size_t n : {2, 3, 4}) {
        const StringFamily f = n < 3 ? build_family(n) : build_modified_family(n);
        const auto j = family_to_json(f);
        const StringFamily parsed = family_from_json(j);
        CHECK(same_family(parsed, f));
        CHECK(family_to_json(parsed).dump() == j.dump());
        CHECK(family_to_text(parsed) == family_to_text(f));
    }
}

TEST_CASE("malformed family text is rejected") {
    CHECK_THROWS_WITH_AS(family_from_text(""), Contains("no sets"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(family_from_text("00\n"), Contains("before any"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(family_from_text("#set 1\n00\n"), Contains("expected '#set 0'"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(family_from_text("#set zero\n00\n"), Contains("malformed header"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(family_from_text("#set 0\n03\n#set 1\n01\n#set 2\n02\n"),
                         Contains("not a trit string"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(family_from_text("#set 0\n00\n111\n#set 1\n01\n#set 2\n02\n"),
                         Contains("unequal length"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(family_from_text("#set 0\n12\n00\n#set 1\n01\n#set 2\n02\n"),
                         Contains("lexicographic"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(family_from_text("#set 0\n00\n00\n#set 1\n01\n#set 2\n02\n"),
                         Contains("repeats"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(family_from_text("#set 0\n00\n#set 1\n01\n"),
                         Contains("3 or 4 sets"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(family_from_text("#set 0\n00\n#set 1\n01\n#set 2\n02\n#set 3\n10\n"),
                         Contains("length >= 3"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(family_from_text("#set 0\n00\n#set 1\n#set 2\n02\n"),
                         Contains("empty"), std::invalid_argument);
}

TEST_CASE("malformed family JSON is rejected") {
    CHECK_THROWS_WITH_AS(family_from_json(json::object()), Contains("array of arrays"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(family_from_json(json::parse(R"([["00"], "01", ["02"]])")),
                         Contains("array of arrays"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(family_from_json(json::parse(R"([["00"], [7], ["02"]])")),
                         Contains("must be strings"), std::invalid_argument);
}

TEST_CASE("state sets round-trip with shared supports") {
    for (int which = 0; which < 3; ++which) {
        const StateSet original = which == 0   ? build_oges(build_modified_family(3))
                                  : which == 1 ? build_ogeb(build_family(3))
                                               : ghz_basis_fixture();
        const auto j = state_set_to_json(original);
        const StateSet parsed = state_set_from_json(j);

        CHECK(parsed.n_parties == original.n_parties);
        CHECK(parsed.local_dim == original.local_dim);
        CHECK(parsed.provenance == original.provenance);
        REQUIRE(parsed.states.size() == original.states.size());
        for (std::size_t i = 0; i < parsed.states.size(); ++i) {
            CHECK(parsed.states[i].label() == original.states[i].label());
            CHECK(parsed.states[i].order() == original.states[i].order());
            CHECK(parsed.states[i].support() == original.states[i].support());
            CHECK(parsed.states[i].exponents() == original.states[i].exponents());
        }
        CHECK(state_set_to_json(parsed).dump() == j.dump());
        CHECK(verify_orthogonal_basis(parsed).pass);
    }

    // States over one family reuse one support allocation after parsing.
    const StateSet parsed =
        state_set_from_json(state_set_to_json(build_oges(build_modified_family(3))));
    CHECK(parsed.states[0].support_ptr() == parsed.states[5].support_ptr());
    CHECK(parsed.states[5].support_ptr() != parsed.states[6].support_ptr());
    CHECK(parsed.states[6].support_ptr() == parsed.states[14].support_ptr());
}

TEST_CASE("malformed state-set JSON is rejected") {
    const auto base = state_set_to_json(build_oges(build_modified_family(3)));
    const auto mutate = [&](auto&& change) {
        json j = base;
        change(j);
        return j;
    };

    CHECK_THROWS_WITH_AS(state_set_from_json(json::array()), Contains("object"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        state_set_from_json(mutate([](json& j) { j.erase("provenance"); })),
        Contains("missing field"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        state_set_from_json(mutate([](json& j) { j["provenance"] = "homemade"; })),
        Contains("unknown provenance"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        state_set_from_json(mutate([](json& j) { j["states"][0]["order"] = 0; })),
        Contains("order"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        state_set_from_json(mutate([](json& j) { j["states"][0]["support"][1]["exponent"] = 9; })),
        Contains("exponent"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        state_set_from_json(mutate([](json& j) { j["states"][0]["support"][0]["trits"] = "02"; })),
        Contains("length"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        state_set_from_json(mutate([](json& j) { j["states"][0]["support"][0]["trits"] = "xx"; })),
        Contains("not a base-3 string"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        state_set_from_json(mutate([](json& j) {
            std::swap(j["states"][0]["support"][0], j["states"][0]["support"][1]);
        })),
        Contains("sorted"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        state_set_from_json(mutate([](json& j) { j["states"][0]["support"] = json::array(); })),
        Contains("nonempty"), std::invalid_argument);
}

TEST_CASE("dense export places amplitudes at base-d indices") {
    // Two-party state over {00, 12, 21} with k = 1: phases 1, w, w^2 at
    // indices 0, 5, 7 of the 9-slot vector.
    const PhasedState state = build_state({ts("00"), ts("12"), ts("21")}, 1);
    const std::vector<double> v = dense_interleaved(state);
    REQUIRE(v.size() == 18);
    const double half_sqrt3 = 0.8660254037844386;
    CHECK(v[0] == doctest::Approx(1.0));
    CHECK(v[1] == doctest::Approx(0.0));
    CHECK(v[10] == doctest::Approx(-0.5));
    CHECK(v[11] == doctest::Approx(half_sqrt3));
    CHECK(v[14] == doctest::Approx(-0.5));
    CHECK(v[15] == doctest::Approx(-half_sqrt3));
    double elsewhere = 0.0;
    for (std::size_t i : {2, 3, 4, 5, 6, 7, 8, 9, 12, 13, 16, 17}) elsewhere += std::abs(v[i]);
    CHECK(elsewhere == 0.0);

    // GHZ minus state |000> - |111>: qubit indexing, so 2 * 8 slots.
    const std::vector<double> g = dense_interleaved(ghz_basis_fixture().states[1]);
    REQUIRE(g.size() == 16);
    CHECK(g[0] == doctest::Approx(1.0));
    CHECK(g[14] == doctest::Approx(-1.0));
    CHECK(g[15] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("generated artifacts validate against the shipped schemas") {
    CHECK(schema_check::check_against("family.v1.schema.json",
                                      family_to_json(build_family(3))).empty());
    CHECK(schema_check::check_against("family.v1.schema.json",
                                      family_to_json(build_modified_family(4))).empty());
    CHECK(schema_check::check_against("state_set.v1.schema.json",
                                      state_set_to_json(build_oges(build_modified_family(3))))
              .empty());
    CHECK(schema_check::check_against("state_set.v1.schema.json",
                                      state_set_to_json(ghz_basis_fixture())).empty());

    nlohmann::ordered_json dense = nlohmann::ordered_json::array();
    for (const PhasedState& state : ghz_basis_fixture().states) {
        nlohmann::ordered_json d;
        d["set_index"] = state.label().set_index;
        d["k"] = state.label().k;
        d["vector"] = dense_interleaved(state);
        dense.push_back(std::move(d));
    }
    CHECK(schema_check::check_against("dense_export.v1.schema.json", dense).empty());
}

TEST_CASE("reports validate against the shipped schemas") {
    const auto expect_clean = [](const char* schema, const nlohmann::ordered_json& report) {
        const auto violations = schema_check::check_against(schema, report);
        std::string joined;
        for (const std::string& v : violations) joined += v + "; ";
        INFO(joined);
        CHECK(violations.empty());
    };

    expect_clean("verify_report.v1.schema.json", run_verify(3, SetVariant::oges).report);
    VerifyOptions sampled;
    sampled.permutations = PermutationCheck::sampled(20);
    expect_clean("verify_report.v1.schema.json",
                 run_verify(3, SetVariant::standard, sampled).report);

    expect_clean("certify_report.v1.schema.json", run_certify(3, SetVariant::oges).report);
    CertifyOptions sweep;
    sweep.mode = CertifyMode::full_sweep;
    sweep.timings = true;
    expect_clean("certify_report.v1.schema.json",
                 run_certify(3, SetVariant::modified, sweep).report);

    expect_clean("certify_report.v1.schema.json", run_prove(3).report);
    expect_clean("certify_report.v1.schema.json", run_prove(4).report);
    expect_clean("ghz_report.v1.schema.json", run_ghz_control().report);
    GhzControlOptions timed;
    timed.timings = true;
    expect_clean("ghz_report.v1.schema.json", run_ghz_control(timed).report);
}

TEST_CASE("the validator flags each violation kind it claims to cover") {
    const auto schema = schema_check::load(std::string(QNL_SCHEMA_DIR) +
                                           "/certify_report.v1.schema.json");
    json good = run_certify(3, SetVariant::oges).report;
    CHECK(schema_check::validate(schema, good).empty());

    json missing = good;
    missing.erase("set_id");
    CHECK(!schema_check::validate(schema, missing).empty());

    json extra = good;
    extra["surplus"] = 1;
    CHECK(!schema_check::validate(schema, extra).empty());

    json bad_enum = good;
    bad_enum["mode"] = "guesswork";
    CHECK(!schema_check::validate(schema, bad_enum).empty());

    json bad_type = good;
    bad_type["pass"] = "yes";
    CHECK(!schema_check::validate(schema, bad_type).empty());

    json below = good;
    below["n_parties"] = 0;
    CHECK(!schema_check::validate(schema, below).empty());

    json short_cuts = good;
    short_cuts["cuts"] = json::array();
    CHECK(!schema_check::validate(schema, short_cuts).empty());

    const auto family_schema =
        schema_check::load(std::string(QNL_SCHEMA_DIR) + "/family.v1.schema.json");
    CHECK(!schema_check::validate(family_schema,
                                  json::parse(R"([["00"],["03"],["02"]])")).empty());
    CHECK(!schema_check::validate(family_schema, json::parse(R"([["00"],["01"]])")).empty());
}

TEST_CASE("library reports are byte-deterministic") {
    CHECK(run_verify(3, SetVariant::oges).report.dump(2) ==
          run_verify(3, SetVariant::oges).report.dump(2));
    CHECK(run_certify(3, SetVariant::oges).report.dump(2) ==
          run_certify(3, SetVariant::oges).report.dump(2));
    CHECK(run_prove(4).report.dump(2) == run_prove(4).report.dump(2));
    CHECK(run_ghz_control().report.dump(2) == run_ghz_control().report.dump(2));
    CHECK(state_set_to_json(build_oges(build_modified_family(4))).dump() ==
          state_set_to_json(build_oges(build_modified_family(4))).dump());
}
