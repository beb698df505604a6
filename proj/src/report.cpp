#include "qnl/report.hpp"

#include "qnl/entangle.hpp"
#include "qnl/ghz.hpp"
#include "qnl/proof.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace qnl {

namespace {

using nlohmann::ordered_json;

std::string set_id_of(const StateSet& set) {
    return to_string(set.provenance) + "-n" + std::to_string(set.n_parties);
}

ordered_json label_json(StateLabel label) {
    ordered_json j;
    j["set_index"] = label.set_index;
    j["k"] = label.k;
    return j;
}

ordered_json cut_json(const CutCertificate& cut, bool timings) {
    ordered_json j;
    j["measuring_side"] = cut.measuring;
    j["dimension"] = cut.dimension;
    j["trivial"] = cut.trivial;
    j["identity_residual"] = cut.identity_residual;
    if (timings) j["runtime_ms"] = cut.runtime_ms;
    return j;
}

ordered_json trace_json(const std::vector<TraceEntry>& trace) {
    ordered_json rows = ordered_json::array();
    for (const TraceEntry& entry : trace) {
        ordered_json row;
        row["lemma"] = entry.lemma;
        row["S"] = entry.s_desc;
        if (entry.lemma == "block-zeros") row["T"] = entry.t_desc;
        else row["u0"] = entry.u0_desc;
        row["witnesses"] = entry.witnesses;
        row["fact"] = entry.fact;
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

std::string to_string(SetVariant v) {
    switch (v) {
        case SetVariant::standard: return "standard";
        case SetVariant::modified: return "modified";
        case SetVariant::oges: return "oges";
    }
    return "standard";
}

SetVariant set_variant_from_string(const std::string& s) {
    if (s == "standard") return SetVariant::standard;
    if (s == "modified") return SetVariant::modified;
    if (s == "oges") return SetVariant::oges;
    throw std::invalid_argument("unknown variant '" + s + "'");
}

StringFamily family_for(std::size_t n_parties, SetVariant variant) {
    return variant == SetVariant::standard ? build_family(n_parties)
                                           : build_modified_family(n_parties);
}

StateSet state_set_for(std::size_t n_parties, SetVariant variant) {
    const StringFamily f = family_for(n_parties, variant);
    return variant == SetVariant::oges ? build_oges(f) : build_ogeb(f);
}

ReportResult run_verify(std::size_t n_parties, SetVariant variant,
                        const VerifyOptions& options) {
    const StringFamily family = family_for(n_parties, variant);
    const StateSet set = state_set_for(n_parties, variant);
    const PermutationCheck perm =
        options.permutations.value_or(PermutationCheck::default_for(n_parties));

    ordered_json j;
    j["schema"] = "verify-report/v1";
    j["command"] = "verify";
    j["set_id"] = set_id_of(set);
    j["n_parties"] = n_parties;
    j["variant"] = to_string(variant);
    {
        ordered_json t;
        t["inner"] = options.tol_inner;
        t["rank"] = options.tol_rank;
        t["uniform"] = options.tol_uniform;
        j["tolerances"] = std::move(t);
    }

    const PartitionVerdict partition = verify_partition(family);
    {
        ordered_json p;
        p["pass"] = partition.pass;
        p["sets"] = family.set_count();
        std::size_t total = 0;
        for (const auto& s : family.sets()) total += s.size();
        p["strings"] = total;
        if (!partition.pass) {
            p["reason"] = partition.reason;
            if (partition.offending) p["offending"] = partition.offending->str();
        }
        j["partition"] = std::move(p);
    }

    const PermutationVerdict invariance = verify_permutation_invariance(family, perm);
    {
        ordered_json p;
        p["pass"] = invariance.pass;
        p["mode"] = perm.mode == PermutationCheck::Mode::exhaustive ? "exhaustive" : "sampled";
        p["permutations_tested"] = invariance.permutations_tested;
        if (perm.mode == PermutationCheck::Mode::sampled) {
            p["samples"] = perm.samples;
            p["seed"] = perm.seed;
        }
        j["permutation_invariance"] = std::move(p);
    }

    const OrthogonalityVerdict orth = verify_orthogonal_basis(set, options.tol_inner);
    // Constructed sets must resolve every pair symbolically; a numeric pair
    // means the structure argument broke even if the value rounds to zero.
    const bool symbolic_only = orth.numeric_pairs == 0;
    {
        ordered_json p;
        p["pass"] = orth.pass;
        p["state_count"] = orth.state_count;
        p["pairs"] = orth.pairs;
        p["disjoint_pairs"] = orth.disjoint_pairs;
        p["geometric_pairs"] = orth.geometric_pairs;
        p["numeric_pairs"] = orth.numeric_pairs;
        p["symbolic_only"] = symbolic_only;
        if (!orth.pass) p["detail"] = orth.detail;
        j["orthogonality"] = std::move(p);
    }

    bool all_genuine = true;
    bool all_single_rank_3 = true;
    bool all_uniform = true;
    ordered_json states = ordered_json::array();
    for (const PhasedState& state : set.states) {
        const EntanglementVerdict ent = is_genuinely_entangled(state, options.tol_rank);
        const UniformityVerdict uni = is_one_uniform(state, options.tol_uniform);
        ordered_json s;
        s["label"] = label_json(state.label());
        ordered_json cuts = ordered_json::array();
        for (const CutRank& cr : ent.cuts) {
            ordered_json c;
            c["side_a"] = cr.cut.side_a();
            c["rank"] = static_cast<std::int64_t>(cr.rank);
            cuts.push_back(std::move(c));
            if (cr.cut.side_a().size() == 1 || cr.cut.side_b().size() == 1)
                all_single_rank_3 = all_single_rank_3 && cr.rank == 3;
        }
        s["cuts"] = std::move(cuts);
        s["genuine"] = ent.genuine;
        s["one_uniform"] = uni.uniform;
        s["uniformity_deviation"] = uni.max_deviation;
        states.push_back(std::move(s));
        all_genuine = all_genuine && ent.genuine;
        all_uniform = all_uniform && uni.uniform;
    }
    j["states"] = std::move(states);

    // Rank 3 on single-party cuts and one-uniformity are structure of the
    // standard family; the modified sets only measure them.
    const bool asserted = variant == SetVariant::standard;
    {
        ordered_json c;
        c["genuine"] = all_genuine;
        ordered_json r3;
        r3["asserted"] = asserted;
        r3["holds"] = all_single_rank_3;
        c["single_party_rank_3"] = std::move(r3);
        ordered_json ou;
        ou["asserted"] = asserted;
        ou["holds"] = all_uniform;
        c["one_uniform"] = std::move(ou);
        j["checks"] = std::move(c);
    }

    const bool pass = partition.pass && invariance.pass && orth.pass && symbolic_only &&
                      all_genuine && (!asserted || (all_single_rank_3 && all_uniform));
    j["pass"] = pass;
    return {pass, std::move(j)};
}

ReportResult run_certify(std::size_t n_parties, SetVariant variant,
                         const CertifyOptions& options) {
    const StateSet set = state_set_for(n_parties, variant);
    const CertifyVerdict verdict = certify_strong_nonlocality(
        set, options.mode, options.max_dim, options.null_tol, options.triviality_tol);

    ordered_json j;
    j["schema"] = "certify-report/v1";
    j["command"] = "certify";
    j["set_id"] = set_id_of(set);
    j["n_parties"] = n_parties;
    j["variant"] = to_string(variant);
    j["mode"] = options.mode == CertifyMode::lemma3 ? "lemma3" : "full-sweep";
    j["max_dim"] = options.max_dim;
    {
        ordered_json t;
        t["null"] = options.null_tol;
        t["triviality"] = options.triviality_tol;
        j["tolerances"] = std::move(t);
    }
    ordered_json cuts = ordered_json::array();
    for (const CutCertificate& cut : verdict.cuts) cuts.push_back(cut_json(cut, options.timings));
    j["cuts"] = std::move(cuts);
    j["all_cuts_trivial"] = verdict.all_cuts_trivial;
    j["ledger_trace"] = ordered_json::array();
    j["pass"] = verdict.pass;
    return {verdict.pass, std::move(j)};
}

ReportResult run_prove(std::size_t n_parties) {
    const ProofVerdict verdict = run_proof_script(n_parties);
    const ProofScript script = proof_script_for(n_parties);

    ordered_json j;
    j["schema"] = "certify-report/v1";
    j["command"] = "prove";
    j["set_id"] = "oges-n" + std::to_string(n_parties);
    j["n_parties"] = n_parties;
    j["variant"] = "oges";
    j["mode"] = "script";
    j["case"] = to_string(script.tag);
    ordered_json cuts = ordered_json::array();
    for (const CutDerivation& cut : verdict.cuts) {
        ordered_json c;
        std::vector<std::size_t> measuring;
        for (std::size_t p = 1; p <= n_parties; ++p)
            if (p != cut.spectator_party) measuring.push_back(p);
        c["measuring_side"] = std::move(measuring);
        c["spectator_party"] = cut.spectator_party;
        c["trivial"] = cut.concluded;
        // The facts pin the operator to a multiple of the identity, so a
        // concluded ledger means a one-dimensional solution space.
        if (cut.concluded) c["dimension"] = 1;
        c["zero_pairs"] = cut.ledger.zero_pair_count();
        c["diag_classes"] = cut.ledger.diag_class_count();
        cuts.push_back(std::move(c));
    }
    j["cuts"] = std::move(cuts);
    j["ledger_trace"] =
        verdict.cuts.empty() ? ordered_json::array() : trace_json(verdict.cuts.front().ledger.trace());
    if (!verdict.pass) j["error"] = verdict.error;
    j["pass"] = verdict.pass;
    return {verdict.pass, std::move(j)};
}

ReportResult run_ghz_control(const GhzControlOptions& options) {
    ordered_json j;
    j["schema"] = "ghz-report/v1";
    j["command"] = "ghz-control";
    {
        ordered_json t;
        t["null"] = options.null_tol;
        t["triviality"] = options.triviality_tol;
        j["tolerances"] = std::move(t);
    }

    ordered_json controls = ordered_json::array();
    bool pass = true;

    {
        const StateSet ghz = ghz_basis_fixture();
        const CertifyVerdict verdict = certify_strong_nonlocality(
            ghz, CertifyMode::lemma3, default_oracle_dim_limit, options.null_tol,
            options.triviality_tol);
        bool as_expected = !verdict.cuts.empty();
        ordered_json cuts = ordered_json::array();
        for (const CutCertificate& cut : verdict.cuts) {
            cuts.push_back(cut_json(cut, options.timings));
            as_expected = as_expected && cut.dimension > 1 && !cut.trivial;
        }
        ordered_json c;
        c["set_id"] = "ghz-3qubit";
        c["local_dim"] = ghz.local_dim;
        c["expectation"] = "solution space of dimension > 1 on every cut";
        c["cuts"] = std::move(cuts);
        c["as_expected"] = as_expected;
        controls.push_back(std::move(c));
        pass = pass && as_expected;
    }

    {
        const StateSet product = product_basis_fixture();
        const CertifyVerdict verdict = certify_strong_nonlocality(
            product, CertifyMode::lemma3, default_oracle_dim_limit, options.null_tol,
            options.triviality_tol);
        bool as_expected = false;
        ordered_json cuts = ordered_json::array();
        for (const CutCertificate& cut : verdict.cuts) {
            cuts.push_back(cut_json(cut, options.timings));
            if (cut.measuring == std::vector<std::size_t>{2})
                as_expected = cut.dimension == 2 && !cut.trivial;
        }
        ordered_json c;
        c["set_id"] = "product-2qubit";
        c["local_dim"] = product.local_dim;
        c["expectation"] = "free diagonal on the second-party cut, dimension exactly 2";
        c["cuts"] = std::move(cuts);
        c["as_expected"] = as_expected;
        controls.push_back(std::move(c));
        pass = pass && as_expected;
    }

    j["controls"] = std::move(controls);
    j["pass"] = pass;
    return {pass, std::move(j)};
}

} // namespace qnl
