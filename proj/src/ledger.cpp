#include "qnl/ledger.hpp"

#include <algorithm>
#include <numeric>

namespace qnl {

OplmLedger::OplmLedger(std::size_t b_parties, unsigned local_dim)
    : b_parties_(b_parties), local_dim_(local_dim) {
    if (b_parties == 0) throw std::invalid_argument("ledger: empty measuring side");
    universe_ = ipow(local_dim, b_parties);
    zero_.assign(universe_ * universe_, false);
    diag_parent_.resize(universe_);
    std::iota(diag_parent_.begin(), diag_parent_.end(), std::size_t{0});
}

bool OplmLedger::zero(std::size_t u, std::size_t v) const {
    return u != v && zero_[u * universe_ + v];
}

std::size_t OplmLedger::diag_root(std::size_t u) const {
    while (diag_parent_[u] != u) {
        diag_parent_[u] = diag_parent_[diag_parent_[u]];
        u = diag_parent_[u];
    }
    return u;
}

bool OplmLedger::diag_equal(std::size_t u, std::size_t v) const {
    return diag_root(u) == diag_root(v);
}

std::size_t OplmLedger::diag_class_count() const {
    std::size_t classes = 0;
    for (std::size_t u = 0; u < universe_; ++u)
        if (diag_root(u) == u) ++classes;
    return classes;
}

bool OplmLedger::block_prop_identity(const std::vector<std::size_t>& s_rows) const {
    for (std::size_t i = 0; i < s_rows.size(); ++i) {
        if (!diag_equal(s_rows[0], s_rows[i])) return false;
        for (std::size_t j = i + 1; j < s_rows.size(); ++j)
            if (!zero(s_rows[i], s_rows[j])) return false;
    }
    return !s_rows.empty();
}

bool OplmLedger::concludes_identity() const {
    if (diag_class_count() != 1) return false;
    for (std::size_t u = 0; u < universe_; ++u)
        for (std::size_t v = u + 1; v < universe_; ++v)
            if (!zero_[u * universe_ + v]) return false;
    return true;
}

void OplmLedger::add_zero(std::size_t u, std::size_t v) {
    if (u == v) throw std::logic_error("ledger: zero fact on a diagonal entry");
    if (!zero_[u * universe_ + v]) ++zero_pairs_;
    zero_[u * universe_ + v] = true;
    zero_[v * universe_ + u] = true;
}

void OplmLedger::merge_diag(std::size_t u, std::size_t v) {
    const std::size_t ru = diag_root(u);
    const std::size_t rv = diag_root(v);
    if (ru != rv) diag_parent_[std::max(ru, rv)] = std::min(ru, rv);
}

namespace {

void check_rows(const std::vector<std::size_t>& rows, std::size_t universe, const char* which) {
    if (rows.empty())
        throw LemmaPreconditionError(std::string("lemma: index set ") + which + " is empty");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= universe)
            throw LemmaPreconditionError(std::string("lemma: index set ") + which +
                                         " leaves the measuring-side universe");
        if (i > 0 && rows[i] <= rows[i - 1])
            throw LemmaPreconditionError(std::string("lemma: index set ") + which +
                                         " is not strictly ascending");
    }
}

bool sorted_disjoint(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (b[j] < a[i]) ++j;
        else return false;
    }
    return true;
}

bool supports_disjoint(const PhasedState::Support& a, const PhasedState::Support& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const auto cmp = a[i] <=> b[j];
        if (cmp < 0) ++i;
        else if (cmp > 0) ++j;
        else return false;
    }
    return true;
}

std::string err_prefix(const char* lemma, std::int32_t set_index) {
    return std::string(lemma) + ": witness family for set " + std::to_string(set_index);
}

/// A valid witness is the complete phase ladder over one shared support:
/// s states of order s whose exponent rows are k * f with f a bijection onto
/// [0, s). Such a family spans its support exactly (permuted discrete
/// Fourier matrix), which is what the lemmas need.
const PhasedState::Support& validate_phase_family(const std::vector<const PhasedState*>& fam,
                                                  const StateSet& states, std::int32_t set_index,
                                                  const char* lemma) {
    if (fam.empty()) throw LemmaPreconditionError(err_prefix(lemma, set_index) + " is empty");
    for (const PhasedState* st : fam) {
        if (st->n_parties() != states.n_parties || st->local_dim() != states.local_dim)
            throw LemmaPreconditionError(err_prefix(lemma, set_index) +
                                         " has a state on the wrong space");
    }
    const PhasedState::Support& support = fam[0]->support();
    const std::size_t s = support.size();
    for (const PhasedState* st : fam) {
        if (st->support_ptr() != fam[0]->support_ptr() && st->support() != support)
            throw LemmaPreconditionError(err_prefix(lemma, set_index) +
                                         " does not share one support");
    }
    if (fam.size() != s)
        throw LemmaPreconditionError(err_prefix(lemma, set_index) +
                                     " does not span its support: " + std::to_string(fam.size()) +
                                     " states over " + std::to_string(s) + " strings");
    for (std::size_t k = 0; k < s; ++k) {
        if (fam[k]->order() != s || fam[k]->label().k != k)
            throw LemmaPreconditionError(err_prefix(lemma, set_index) +
                                         " is not the complete phase ladder");
    }
    if (s > 1) {
        const std::vector<std::uint32_t>& f = fam[1]->exponents();
        std::vector<bool> seen(s, false);
        for (std::uint32_t e : f) {
            if (e >= s || seen[e])
                throw LemmaPreconditionError(err_prefix(lemma, set_index) +
                                             " has a non-bijective phase map");
            seen[e] = true;
        }
        for (std::size_t k = 0; k < s; ++k) {
            const std::vector<std::uint32_t>& e = fam[k]->exponents();
            for (std::size_t r = 0; r < s; ++r)
                if (e[r] != k * std::uint64_t{f[r]} % s)
                    throw LemmaPreconditionError(err_prefix(lemma, set_index) +
                                                 " has exponents off the phase ladder");
        }
    } else if (fam[0]->exponents() != std::vector<std::uint32_t>{0}) {
        throw LemmaPreconditionError(err_prefix(lemma, set_index) +
                                     " has a phase on a single-string support");
    }
    return support;
}

/// Measuring-side slices of a support at the spectator party, one sorted
/// index list per spectator value. Lex order survives erasing a position
/// whose digit is fixed, so the lists come out sorted.
std::vector<std::vector<std::size_t>> support_slices(const PhasedState::Support& support,
                                                     std::size_t spectator_party,
                                                     unsigned local_dim) {
    std::vector<std::vector<std::size_t>> slices(local_dim);
    for (const TritString& s : support)
        slices[s[spectator_party - 1]].push_back(s.erased(spectator_party - 1).to_index(local_dim));
    return slices;
}

std::string default_label(const std::vector<std::size_t>& rows, std::size_t b_parties,
                          unsigned local_dim) {
    if (rows.size() > 4) return std::to_string(rows.size()) + " rows";
    std::string out = "{";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0) out += ",";
        out += TritString::from_index(rows[i], b_parties, local_dim).str();
    }
    return out + "}";
}

void check_context(const OplmLedger& ledger, const StateSet& states, std::size_t spectator_party,
                   const char* lemma) {
    if (states.n_parties != ledger.b_parties() + 1 || states.local_dim != ledger.local_dim())
        throw LemmaPreconditionError(std::string(lemma) +
                                     ": states do not match the ledger's measuring side");
    if (spectator_party < 1 || spectator_party > states.n_parties)
        throw LemmaPreconditionError(std::string(lemma) + ": spectator party out of range");
}

} // namespace

void apply_block_zeros(OplmLedger& ledger, const StateSet& states, std::size_t spectator_party,
                       unsigned spectator_value, std::int32_t set_a, std::int32_t set_b,
                       const std::vector<std::size_t>& s_rows,
                       const std::vector<std::size_t>& t_rows, std::string s_label,
                       std::string t_label) {
    const char* lemma = "block zeros";
    check_context(ledger, states, spectator_party, lemma);
    if (spectator_value >= states.local_dim)
        throw LemmaPreconditionError("block zeros: spectator value out of range");
    check_rows(s_rows, ledger.universe(), "S");
    check_rows(t_rows, ledger.universe(), "T");
    if (!sorted_disjoint(s_rows, t_rows))
        throw LemmaPreconditionError("block zeros: S and T overlap");

    const auto fam_a = states.family(set_a);
    const auto fam_b = states.family(set_b);
    const PhasedState::Support& supp_a = validate_phase_family(fam_a, states, set_a, lemma);
    const PhasedState::Support& supp_b = validate_phase_family(fam_b, states, set_b, lemma);
    if (!supports_disjoint(supp_a, supp_b))
        throw LemmaPreconditionError("block zeros: witness supports overlap, families cannot "
                                     "annihilate each other structurally");

    const auto slices_a = support_slices(supp_a, spectator_party, states.local_dim);
    const auto slices_b = support_slices(supp_b, spectator_party, states.local_dim);
    if (slices_a[spectator_value] != s_rows)
        throw LemmaPreconditionError("block zeros: S is not set " + std::to_string(set_a) +
                                     "'s slice at spectator value " +
                                     std::to_string(spectator_value));
    if (slices_b[spectator_value] != t_rows)
        throw LemmaPreconditionError("block zeros: T is not set " + std::to_string(set_b) +
                                     "'s slice at spectator value " +
                                     std::to_string(spectator_value));

    for (std::size_t u : s_rows)
        for (std::size_t v : t_rows) ledger.add_zero(u, v);

    TraceEntry entry;
    entry.lemma = "block-zeros";
    entry.s_desc = s_label.empty()
                       ? default_label(s_rows, ledger.b_parties(), ledger.local_dim())
                       : std::move(s_label);
    entry.t_desc = t_label.empty()
                       ? default_label(t_rows, ledger.b_parties(), ledger.local_dim())
                       : std::move(t_label);
    entry.witnesses = "set " + std::to_string(set_a) + " (" + std::to_string(fam_a.size()) +
                      " states) vs set " + std::to_string(set_b) + " (" +
                      std::to_string(fam_b.size()) + " states), spectator party " +
                      std::to_string(spectator_party) + " value " +
                      std::to_string(spectator_value);
    entry.fact = "off-diagonal block vanishes (" + std::to_string(s_rows.size()) + "x" +
                 std::to_string(t_rows.size()) + ", both orientations)";
    entry.s_indices = s_rows;
    entry.t_indices = t_rows;
    ledger.trace_.push_back(std::move(entry));
}

void apply_block_trivial(OplmLedger& ledger, const StateSet& states, std::size_t spectator_party,
                         unsigned pivot_value, std::int32_t set_index,
                         const std::vector<std::size_t>& s_rows, std::size_t u0,
                         std::string s_label) {
    const char* lemma = "block trivial";
    check_context(ledger, states, spectator_party, lemma);
    if (pivot_value >= states.local_dim)
        throw LemmaPreconditionError("block trivial: pivot value out of range");
    check_rows(s_rows, ledger.universe(), "S");
    if (!std::binary_search(s_rows.begin(), s_rows.end(), u0))
        throw LemmaPreconditionError("block trivial: pivot index is not in S");

    const auto fam = states.family(set_index);
    const PhasedState::Support& supp = validate_phase_family(fam, states, set_index, lemma);

    const TritString u0_b = TritString::from_index(u0, ledger.b_parties(), ledger.local_dim());
    const TritString pivot = u0_b.inserted(spectator_party - 1, pivot_value);
    if (!std::binary_search(supp.begin(), supp.end(), pivot))
        throw LemmaPreconditionError("block trivial: pivot string " + pivot.str() +
                                     " is outside the witness support, so some witness state "
                                     "has no overlap with it");

    // S must be exactly the measuring-side shadow of the support.
    const auto slices = support_slices(supp, spectator_party, states.local_dim);
    std::vector<std::size_t> shadow;
    for (const auto& slice : slices) shadow.insert(shadow.end(), slice.begin(), slice.end());
    std::sort(shadow.begin(), shadow.end());
    shadow.erase(std::unique(shadow.begin(), shadow.end()), shadow.end());
    if (shadow != s_rows)
        throw LemmaPreconditionError("block trivial: S is not the measuring-side projection of "
                                     "set " +
                                     std::to_string(set_index) + "'s support");

    for (std::size_t x : s_rows) {
        if (x != u0 && !ledger.zero(u0, x))
            throw LemmaPreconditionError(
                "block trivial: missing zero fact between the pivot row and " +
                TritString::from_index(x, ledger.b_parties(), ledger.local_dim()).str());
    }

    // Within one spectator slice the pivot's overlap chains every pair to a
    // known-zero entry; across slices only the diagonal comparison survives
    // the projection.
    std::size_t in_slice_pairs = 0;
    for (const auto& slice : slices) {
        for (std::size_t i = 0; i < slice.size(); ++i)
            for (std::size_t j = i + 1; j < slice.size(); ++j) {
                ledger.add_zero(slice[i], slice[j]);
                ++in_slice_pairs;
            }
    }
    for (std::size_t x : s_rows) ledger.merge_diag(s_rows[0], x);

    TraceEntry entry;
    entry.lemma = "block-trivial";
    entry.s_desc = s_label.empty()
                       ? default_label(s_rows, ledger.b_parties(), ledger.local_dim())
                       : std::move(s_label);
    entry.u0_desc = u0_b.str();
    entry.witnesses = "set " + std::to_string(set_index) + " (" + std::to_string(fam.size()) +
                      " states), pivot " + pivot.str() + ", spectator party " +
                      std::to_string(spectator_party);
    entry.fact = "off-diagonal entries vanish within each spectator slice (" +
                 std::to_string(in_slice_pairs) + " pairs); diagonal equal on " +
                 std::to_string(s_rows.size()) + " rows";
    entry.s_indices = s_rows;
    entry.u0_index = u0;
    ledger.trace_.push_back(std::move(entry));
}

} // namespace qnl
