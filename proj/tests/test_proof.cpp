#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qnl/family.hpp"
#include "qnl/ledger.hpp"
#include "qnl/oplm.hpp"
#include "qnl/proof.hpp"
#include "qnl/state.hpp"

#include <string>
#include <vector>

using namespace qnl;

namespace {

std::size_t pairs_of(std::size_t n) { return n * (n - 1) / 2; }

StateSet without_set(const StateSet& set, std::int32_t dropped) {
    StateSet out;
    out.n_parties = set.n_parties;
    out.local_dim = set.local_dim;
    out.provenance = SetProvenance::external;
    for (const PhasedState& st : set.states)
        if (st.label().set_index != dropped) out.states.push_back(st);
    return out;
}

} // namespace

TEST_CASE("script shapes per length class") {
    CHECK_THROWS_AS(proof_script_for(2), std::invalid_argument);

    ProofScript s3 = proof_script_for(3);
    CHECK(s3.tag == CaseTag::case_i);
    CHECK(s3.zeros.size() == 9);
    CHECK(s3.trivials.size() == 1);

    ProofScript s4 = proof_script_for(4);
    CHECK(s4.tag == CaseTag::case_ii);
    CHECK(s4.zeros.size() == 7);
    CHECK(s4.trivials.size() == 2);

    ProofScript s5 = proof_script_for(5);
    CHECK(s5.tag == CaseTag::case_iii);
    CHECK(s5.zeros.size() == 7);
    CHECK(s5.trivials.size() == 2);

    CHECK(proof_script_for(6).tag == CaseTag::case_i);
    CHECK(proof_script_for(8).tag == CaseTag::case_iii);
}

TEST_CASE("set descriptions resolve against the standard family one level down") {
    StringFamily base = build_family(2);

    CHECK(SetDesc::family_set(0).resolve(base) == std::vector<std::size_t>{0, 5, 7});
    CHECK(SetDesc::family_minus(0, 0).resolve(base) == std::vector<std::size_t>{5, 7});
    CHECK(SetDesc::constant(1).resolve(base) == std::vector<std::size_t>{4});
    CHECK(SetDesc::all().resolve(base).size() == 9);
    CHECK(SetDesc::all_minus(1).resolve(base).size() == 8);
    CHECK(SetDesc::pair(0, 2).resolve(base) == std::vector<std::size_t>{0, 8});

    CHECK(SetDesc::family_set(2).label(2) == "g2");
    CHECK(SetDesc::family_minus(0, 0).label(2) == "g0-{00}");
    CHECK(SetDesc::constant(2).label(2) == "{22}");
    CHECK(SetDesc::all().label(2) == "all");
    CHECK(SetDesc::all_minus(1).label(2) == "all-{11}");
    CHECK(SetDesc::pair(0, 1).label(2) == "{00,11}");
}

TEST_CASE("scripted derivation closes the three-party case on every cut") {
    ProofVerdict v = run_proof_script(3);
    REQUIRE(v.pass);
    CHECK(v.error.empty());
    REQUIRE(v.cuts.size() == 3);
    for (const CutDerivation& cut : v.cuts) {
        CHECK(cut.concluded);
        CHECK(cut.ledger.universe() == 9);
        CHECK(cut.ledger.zero_pair_count() == pairs_of(9));
        CHECK(cut.ledger.diag_class_count() == 1);
        CHECK(cut.ledger.trace().size() == 10);
    }

    const auto& trace = v.cuts[0].ledger.trace();
    CHECK(trace[0].lemma == "block-zeros");
    CHECK(trace[0].s_desc == "g0-{00}");
    CHECK(trace[0].t_desc == "g1");
    CHECK(trace[9].lemma == "block-trivial");
    CHECK(trace[9].s_desc == "all");
    CHECK(trace[9].u0_desc == "00");
    CHECK(trace[9].witnesses.find("pivot 100") != std::string::npos);
    // the pivot moves with the spectator party
    CHECK(v.cuts[1].ledger.trace()[9].witnesses.find("pivot 010") != std::string::npos);
    CHECK(v.cuts[2].ledger.trace()[9].witnesses.find("pivot 001") != std::string::npos);
}

TEST_CASE("scripted derivation closes lengths four to six") {
    ProofVerdict v4 = run_proof_script(4);
    REQUIRE(v4.pass);
    REQUIRE(v4.cuts.size() == 4);
    for (const CutDerivation& cut : v4.cuts) {
        CHECK(cut.ledger.universe() == 27);
        CHECK(cut.ledger.zero_pair_count() == pairs_of(27));
        CHECK(cut.ledger.diag_class_count() == 1);
        CHECK(cut.ledger.trace().size() == 9);
    }

    ProofVerdict v5 = run_proof_script(5);
    REQUIRE(v5.pass);
    CHECK(v5.cuts.size() == 5);
    CHECK(v5.cuts[0].ledger.zero_pair_count() == pairs_of(81));

    ProofVerdict v6 = run_proof_script(6);
    REQUIRE(v6.pass);
    CHECK(v6.cuts.size() == 6);
    CHECK(v6.cuts[0].ledger.zero_pair_count() == pairs_of(243));
}

TEST_CASE("phase bijection choice does not disturb the derivation") {
    ProofVerdict v =
        run_proof_script(build_oges(build_modified_family(3), PhaseBijection::reverse_lex_rank));
    CHECK(v.pass);
}

TEST_CASE("re-applying script steps adds no facts") {
    StateSet set = build_oges(build_modified_family(3));
    StringFamily base = build_family(2);
    ProofScript script = proof_script_for(3);

    OplmLedger ledger(2);
    auto run_once = [&] {
        for (const BlockZerosStep& z : script.zeros)
            apply_block_zeros(ledger, set, 1, z.spectator_value, z.set_a, z.set_b,
                              z.s_side.resolve(base), z.t_side.resolve(base));
        for (const BlockTrivialStep& t : script.trivials)
            apply_block_trivial(ledger, set, 1, t.pivot_value, t.set_index,
                                t.s_side.resolve(base), 0);
    };
    run_once();
    const std::size_t zeros = ledger.zero_pair_count();
    const std::size_t classes = ledger.diag_class_count();
    const std::size_t traced = ledger.trace().size();
    CHECK(ledger.concludes_identity());

    run_once();
    CHECK(ledger.zero_pair_count() == zeros);
    CHECK(ledger.diag_class_count() == classes);
    CHECK(ledger.trace().size() == 2 * traced); // applications are logged, facts are not doubled
}

TEST_CASE("lemma preconditions reject bad applications") {
    StateSet set = build_oges(build_modified_family(3));
    StringFamily base = build_family(2);
    const auto g1 = SetDesc::family_set(1).resolve(base);
    const auto g0_minus = SetDesc::family_minus(0, 0).resolve(base);

    SUBCASE("overlapping index sets") {
        OplmLedger ledger(2);
        CHECK_THROWS_AS(apply_block_zeros(ledger, set, 1, 0, 0, 1, g1, g1),
                        LemmaPreconditionError);
    }
    SUBCASE("index set outside the universe") {
        OplmLedger ledger(2);
        CHECK_THROWS_AS(apply_block_zeros(ledger, set, 1, 0, 0, 1, {0, 9}, g1),
                        LemmaPreconditionError);
    }
    SUBCASE("unsorted index set") {
        OplmLedger ledger(2);
        CHECK_THROWS_AS(apply_block_zeros(ledger, set, 1, 0, 0, 1, {7, 5}, g1),
                        LemmaPreconditionError);
    }
    SUBCASE("slice mismatch") {
        OplmLedger ledger(2);
        CHECK_THROWS_WITH_AS(apply_block_zeros(ledger, set, 1, 1, 0, 1, g0_minus, g1),
                             doctest::Contains("slice"), LemmaPreconditionError);
    }
    SUBCASE("missing witness family") {
        StateSet partial = without_set(set, 3);
        OplmLedger ledger(2);
        CHECK_THROWS_WITH_AS(apply_block_zeros(ledger, partial, 1, 0, 1, 3, g1, {0}),
                             doctest::Contains("set 3"), LemmaPreconditionError);
    }
    SUBCASE("pivot outside the witness support") {
        OplmLedger ledger(2);
        CHECK_THROWS_WITH_AS(apply_block_trivial(ledger, set, 1, 0, 1, SetDesc::all().resolve(base),
                                                 0),
                             doctest::Contains("pivot"), LemmaPreconditionError);
    }
    SUBCASE("block trivial without the pivot's zero facts") {
        OplmLedger ledger(2);
        CHECK_THROWS_WITH_AS(apply_block_trivial(ledger, set, 1, 1, 1, SetDesc::all().resolve(base),
                                                 0),
                             doctest::Contains("missing zero fact"), LemmaPreconditionError);
    }
}

TEST_CASE("dropping the diagonal states breaks the script at its witness") {
    StateSet partial = without_set(build_oges(build_modified_family(3)), 3);
    ProofVerdict v = run_proof_script(partial);
    CHECK_FALSE(v.pass);
    CHECK(v.error.find("set 3") != std::string::npos);
    REQUIRE(v.cuts.size() == 1); // failed during the first cut
    CHECK_FALSE(v.cuts[0].concluded);
}

TEST_CASE("non-orthogonal input is reported, not derived from") {
    StateSet set = build_oges(build_modified_family(3));
    set.states.push_back(set.states.front());
    set.provenance = SetProvenance::external;
    ProofVerdict v = run_proof_script(set);
    CHECK_FALSE(v.pass);
    CHECK(v.error.find("orthogonal") != std::string::npos);
    CHECK(v.cuts.empty());
}

TEST_CASE("derived zero facts hold in the numeric nullspace") {
    for (std::size_t n : {std::size_t{3}, std::size_t{4}}) {
        CAPTURE(n);
        StateSet set = build_oges(build_modified_family(n));
        ProofVerdict v = run_proof_script(set);
        REQUIRE(v.pass);
        for (const CutDerivation& cut : v.cuts) {
            std::vector<std::size_t> measuring;
            for (std::size_t p = 1; p <= n; ++p)
                if (p != cut.spectator_party) measuring.push_back(p);
            SolutionSpace sol = solve_solution_space(build_constraint_system(set, measuring));
            REQUIRE(sol.trivial == cut.concluded);
            for (const Eigen::MatrixXcd& h : sol.basis) {
                for (const TraceEntry& entry : cut.ledger.trace()) {
                    if (entry.lemma != "block-zeros") continue;
                    double frob2 = 0.0;
                    for (std::size_t u : entry.s_indices)
                        for (std::size_t vv : entry.t_indices)
                            frob2 += std::norm(h(static_cast<Eigen::Index>(u),
                                                 static_cast<Eigen::Index>(vv)));
                    CHECK(std::sqrt(frob2) < 1e-9);
                }
                // stronger: every pairwise fact, including block-trivial ones
                for (std::size_t u = 0; u < cut.ledger.universe(); ++u)
                    for (std::size_t vv = u + 1; vv < cut.ledger.universe(); ++vv)
                        if (cut.ledger.zero(u, vv))
                            CHECK(std::abs(h(static_cast<Eigen::Index>(u),
                                             static_cast<Eigen::Index>(vv))) < 1e-9);
            }
        }
    }
}
