#include "qnl/proof.hpp"

#include <algorithm>
#include <stdexcept>

namespace qnl {

SetDesc SetDesc::family_set(std::int32_t i) { return {SetForm::family, i, 0, 0}; }
SetDesc SetDesc::family_minus(std::int32_t i, Trit constant) {
    return {SetForm::family_minus_constant, i, constant, 0};
}
SetDesc SetDesc::constant(Trit constant) { return {SetForm::constant_only, 0, constant, 0}; }
SetDesc SetDesc::all() { return {SetForm::universe, 0, 0, 0}; }
SetDesc SetDesc::all_minus(Trit constant) {
    return {SetForm::universe_minus_constant, 0, constant, 0};
}
SetDesc SetDesc::pair(Trit first, Trit second) {
    return {SetForm::constant_pair, 0, first, second};
}

std::vector<std::size_t> SetDesc::resolve(const StringFamily& base) const {
    const std::size_t m = base.n_parties();
    auto constant_index = [&](Trit c) {
        return static_cast<std::size_t>(TritString::constant(m, c).to_index());
    };
    auto family_rows = [&](std::int32_t i) {
        std::vector<std::size_t> rows;
        for (const TritString& s : base.set(static_cast<std::size_t>(i)))
            rows.push_back(static_cast<std::size_t>(s.to_index()));
        return rows; // lex-sorted strings give ascending indices
    };
    switch (form) {
    case SetForm::family: return family_rows(family_index);
    case SetForm::family_minus_constant: {
        std::vector<std::size_t> rows = family_rows(family_index);
        const std::size_t drop = constant_index(value);
        const auto it = std::find(rows.begin(), rows.end(), drop);
        if (it == rows.end())
            throw std::logic_error("set description removes a constant its family lacks");
        rows.erase(it);
        return rows;
    }
    case SetForm::constant_only: return {constant_index(value)};
    case SetForm::universe: {
        std::vector<std::size_t> rows(ipow(3, m));
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
        return rows;
    }
    case SetForm::universe_minus_constant: {
        std::vector<std::size_t> rows;
        const std::size_t drop = constant_index(value);
        for (std::size_t i = 0; i < ipow(3, m); ++i)
            if (i != drop) rows.push_back(i);
        return rows;
    }
    case SetForm::constant_pair: {
        std::vector<std::size_t> rows{constant_index(value), constant_index(value_b)};
        std::sort(rows.begin(), rows.end());
        return rows;
    }
    }
    throw std::logic_error("unhandled set description");
}

std::string SetDesc::label(std::size_t b_parties) const {
    auto constant_str = [&](Trit c) { return TritString::constant(b_parties, c).str(); };
    switch (form) {
    case SetForm::family: return "g" + std::to_string(family_index);
    case SetForm::family_minus_constant:
        return "g" + std::to_string(family_index) + "-{" + constant_str(value) + "}";
    case SetForm::constant_only: return "{" + constant_str(value) + "}";
    case SetForm::universe: return "all";
    case SetForm::universe_minus_constant: return "all-{" + constant_str(value) + "}";
    case SetForm::constant_pair:
        return "{" + constant_str(value) + "," + constant_str(value_b) + "}";
    }
    return "?";
}

ProofScript proof_script_for(std::size_t n_parties) {
    if (n_parties < 3)
        throw std::invalid_argument("proof script: defined for at least 3 parties");
    ProofScript script;
    script.tag = case_for_length(n_parties);
    using D = SetDesc;
    switch (script.tag) {
    case CaseTag::case_i:
        script.zeros = {
            {0, 1, 0, D::family_minus(0, 0), D::family_set(1)},
            {0, 1, 1, D::family_minus(2, 1), D::family_set(0)},
            {0, 1, 2, D::family_minus(1, 2), D::family_set(2)},
            {1, 3, 0, D::family_set(1), D::constant(0)},
            {1, 3, 1, D::family_set(0), D::constant(1)},
            {1, 3, 2, D::family_set(2), D::constant(2)},
            {0, 3, 0, D::family_minus(0, 0), D::constant(0)},
            {0, 3, 1, D::family_minus(2, 1), D::constant(1)},
            {0, 3, 2, D::family_minus(1, 2), D::constant(2)},
        };
        script.trivials = {{1, 1, D::all()}};
        break;
    case CaseTag::case_ii:
        script.zeros = {
            {0, 1, 0, D::family_minus(0, 0), D::family_set(1)},
            {0, 1, 1, D::family_set(2), D::family_minus(0, 1)},
            {0, 1, 2, D::family_set(1), D::family_set(2)},
            {1, 3, 0, D::family_set(1), D::constant(0)},
            {1, 3, 1, D::family_minus(0, 1), D::constant(1)},
            {0, 3, 0, D::family_minus(0, 0), D::constant(0)},
            {0, 3, 1, D::family_set(2), D::constant(1)},
        };
        script.trivials = {{1, 1, D::all_minus(1)}, {3, 0, D::pair(0, 1)}};
        break;
    case CaseTag::case_iii:
        script.zeros = {
            {0, 1, 0, D::family_minus(0, 0), D::family_set(1)},
            {0, 1, 1, D::family_set(2), D::family_set(0)},
            {0, 1, 2, D::family_set(1), D::family_minus(2, 2)},
            {1, 3, 0, D::family_set(1), D::constant(0)},
            {1, 3, 2, D::family_minus(2, 2), D::constant(2)},
            {0, 3, 0, D::family_minus(0, 0), D::constant(0)},
            {0, 3, 2, D::family_set(1), D::constant(2)},
        };
        script.trivials = {{1, 1, D::all_minus(2)}, {3, 0, D::pair(0, 2)}};
        break;
    case CaseTag::none: throw std::logic_error("proof script: unclassified length");
    }
    return script;
}

ProofVerdict run_proof_script(const StateSet& states) {
    ProofVerdict verdict;
    if (states.local_dim != 3) {
        verdict.error = "proof script: defined over qutrits only";
        return verdict;
    }
    if (states.n_parties < 3) {
        verdict.error = "proof script: defined for at least 3 parties";
        return verdict;
    }
    const OrthogonalityVerdict orth = verify_orthogonal_basis(states);
    if (!orth.pass) {
        verdict.error = "proof script: states are not pairwise orthogonal: " + orth.detail;
        return verdict;
    }

    const std::size_t n = states.n_parties;
    const std::size_t b = n - 1;
    const ProofScript script = proof_script_for(n);
    const StringFamily base = build_family(b);

    struct ResolvedZeros {
        const BlockZerosStep* step;
        std::vector<std::size_t> s_rows, t_rows;
        std::string s_label, t_label;
    };
    struct ResolvedTrivial {
        const BlockTrivialStep* step;
        std::vector<std::size_t> s_rows;
        std::string s_label;
    };
    std::vector<ResolvedZeros> zeros;
    for (const BlockZerosStep& z : script.zeros)
        zeros.push_back({&z, z.s_side.resolve(base), z.t_side.resolve(base), z.s_side.label(b),
                         z.t_side.label(b)});
    std::vector<ResolvedTrivial> trivials;
    for (const BlockTrivialStep& t : script.trivials)
        trivials.push_back({&t, t.s_side.resolve(base), t.s_side.label(b)});

    verdict.pass = true;
    for (std::size_t p = 1; p <= n; ++p) {
        CutDerivation cut{p, false, OplmLedger(b, states.local_dim)};
        try {
            for (const ResolvedZeros& z : zeros)
                apply_block_zeros(cut.ledger, states, p, z.step->spectator_value, z.step->set_a,
                                  z.step->set_b, z.s_rows, z.t_rows, z.s_label, z.t_label);
            for (const ResolvedTrivial& t : trivials)
                apply_block_trivial(cut.ledger, states, p, t.step->pivot_value,
                                    t.step->set_index, t.s_rows, /*u0=*/0, t.s_label);
        } catch (const LemmaPreconditionError& e) {
            verdict.pass = false;
            verdict.error = "spectator party " + std::to_string(p) + ": " + e.what();
            verdict.cuts.push_back(std::move(cut));
            return verdict;
        }
        cut.concluded = cut.ledger.concludes_identity();
        if (!cut.concluded) verdict.pass = false;
        verdict.cuts.push_back(std::move(cut));
    }
    return verdict;
}

ProofVerdict run_proof_script(std::size_t n_parties) {
    return run_proof_script(build_oges(build_modified_family(n_parties)));
}

} // namespace qnl
