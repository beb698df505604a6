#pragma once

#include "qnl/state.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qnl {

/// A lemma application whose preconditions do not hold against the actual
/// states and ledger. Hitting this from a scripted derivation means the
/// script, or the construction it describes, is wrong at that step.
class LemmaPreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One recorded lemma application. Index vectors address measuring-side
/// strings in lexicographic order so numeric cross-checks can find the
/// affected blocks.
struct TraceEntry {
    std::string lemma; // "block-zeros" or "block-trivial"
    std::string s_desc;
    std::string t_desc;  // block-zeros only
    std::string u0_desc; // block-trivial only
    std::string witnesses;
    std::string fact;
    std::vector<std::size_t> s_indices;
    std::vector<std::size_t> t_indices; // block-zeros only
    std::size_t u0_index = 0;           // block-trivial only
};

class OplmLedger;

/// Block Zeros: two phase families with disjoint supports keep annihilating
/// each other after the measurement, which forces the S x T block of the
/// operator to vanish. S and T must equal the families' measuring-side
/// slices at the given spectator value; every precondition is validated
/// against the actual states before any fact is recorded.
void apply_block_zeros(OplmLedger& ledger, const StateSet& states, std::size_t spectator_party,
                       unsigned spectator_value, std::int32_t set_a, std::int32_t set_b,
                       const std::vector<std::size_t>& s_rows,
                       const std::vector<std::size_t>& t_rows, std::string s_label = {},
                       std::string t_label = {});

/// Block Trivial: a phase family whose pivot string appears in every member
/// and is already known decoupled from the rest of S forces the operator to
/// vanish on off-diagonal entries within each spectator slice of the
/// family's support and to carry one common value on the diagonal over S.
/// S must equal the measuring-side projection of the family's support; the
/// pivot is pivot_value inserted into the all-zeros string at the spectator
/// party.
void apply_block_trivial(OplmLedger& ledger, const StateSet& states, std::size_t spectator_party,
                         unsigned pivot_value, std::int32_t set_index,
                         const std::vector<std::size_t>& s_rows, std::size_t u0,
                         std::string s_label = {});

/// Fact base about a candidate measurement operator on one measuring side:
/// which entries are known to vanish and which diagonal entries are known
/// equal. Rows and columns are indexed by the measuring-side strings in
/// lexicographic order. Facts are only ever added, and only by the lemma
/// applications above.
class OplmLedger {
public:
    explicit OplmLedger(std::size_t b_parties, unsigned local_dim = 3);

    std::size_t b_parties() const { return b_parties_; }
    unsigned local_dim() const { return local_dim_; }
    std::size_t universe() const { return universe_; }

    bool zero(std::size_t u, std::size_t v) const;
    bool diag_equal(std::size_t u, std::size_t v) const;

    /// Distinct unordered pairs known zero.
    std::size_t zero_pair_count() const { return zero_pairs_; }
    std::size_t diag_class_count() const;

    /// All off-diagonal entries of the S x S block vanish and the diagonal
    /// entries over S agree: the restriction to S is a multiple of the
    /// identity.
    bool block_prop_identity(const std::vector<std::size_t>& s_rows) const;
    /// block_prop_identity over the whole index universe.
    bool concludes_identity() const;

    const std::vector<TraceEntry>& trace() const { return trace_; }

    friend void apply_block_zeros(OplmLedger&, const StateSet&, std::size_t, unsigned,
                                  std::int32_t, std::int32_t, const std::vector<std::size_t>&,
                                  const std::vector<std::size_t>&, std::string, std::string);
    friend void apply_block_trivial(OplmLedger&, const StateSet&, std::size_t, unsigned,
                                    std::int32_t, const std::vector<std::size_t>&, std::size_t,
                                    std::string);

private:
    void add_zero(std::size_t u, std::size_t v);
    void merge_diag(std::size_t u, std::size_t v);
    std::size_t diag_root(std::size_t u) const;

    std::size_t b_parties_ = 0;
    unsigned local_dim_ = 3;
    std::size_t universe_ = 0;
    std::vector<bool> zero_;
    mutable std::vector<std::size_t> diag_parent_;
    std::size_t zero_pairs_ = 0;
    std::vector<TraceEntry> trace_;
};

} // namespace qnl
