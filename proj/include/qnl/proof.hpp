#pragma once

#include "qnl/family.hpp"
#include "qnl/ledger.hpp"
#include "qnl/state.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qnl {

enum class SetForm {
    family,                  // g_i one level down
    family_minus_constant,   // g_i minus one constant string
    constant_only,           // a single constant string
    universe,                // every measuring-side string
    universe_minus_constant, // everything but one constant string
    constant_pair            // two constant strings
};

/// Symbolic description of a measuring-side index set. Resolution is against
/// the standard families one level down; the derivation engine then checks
/// the resolved set against the actual supports, so a wrong description
/// fails loudly instead of proving something else.
struct SetDesc {
    SetForm form = SetForm::family;
    std::int32_t family_index = 0;
    Trit value = 0;
    Trit value_b = 0;

    static SetDesc family_set(std::int32_t i);
    static SetDesc family_minus(std::int32_t i, Trit constant);
    static SetDesc constant(Trit constant);
    static SetDesc all();
    static SetDesc all_minus(Trit constant);
    static SetDesc pair(Trit first, Trit second);

    /// base must be the standard family on the measuring-side length.
    std::vector<std::size_t> resolve(const StringFamily& base) const;
    std::string label(std::size_t b_parties) const;
};

struct BlockZerosStep {
    std::int32_t set_a = 0;
    std::int32_t set_b = 0;
    unsigned spectator_value = 0;
    SetDesc s_side;
    SetDesc t_side;
};

struct BlockTrivialStep {
    std::int32_t set_index = 0;
    unsigned pivot_value = 0; // pivot string: pivot_value inserted into 0...0
    SetDesc s_side;
};

/// The per-case derivation plan, as data: one block-zeros row per populated
/// spectator value of each witness pair, then the block-trivial closures.
struct ProofScript {
    CaseTag tag = CaseTag::none;
    std::vector<BlockZerosStep> zeros;
    std::vector<BlockTrivialStep> trivials;
};

ProofScript proof_script_for(std::size_t n_parties);

struct CutDerivation {
    std::size_t spectator_party = 0;
    bool concluded = false;
    OplmLedger ledger;
};

struct ProofVerdict {
    bool pass = false;
    std::string error; // first failed precondition, if any
    std::vector<CutDerivation> cuts;
};

/// Drives the scripted lemma applications once per spectator party,
/// validating every precondition against the actual states. Pass means every
/// cut's ledger pins the measurement operator to a multiple of the identity.
/// A precondition failure stops the run and is reported in the verdict
/// instead of thrown.
ProofVerdict run_proof_script(const StateSet& states);

/// Same, on the subset construction for n parties.
ProofVerdict run_proof_script(std::size_t n_parties);

} // namespace qnl
