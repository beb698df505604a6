#pragma once

#include "qnl/family.hpp"
#include "qnl/trit.hpp"

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qnl {

struct StateLabel {
    std::int32_t set_index = 0;
    std::uint32_t k = 0;

    friend auto operator<=>(const StateLabel&, const StateLabel&) = default;
};

/// Which bijection maps a support string to the integer its phase exponent is
/// proportional to. Results downstream must not depend on this choice; the
/// reverse variant exists to spot-check that.
enum class PhaseBijection { lex_rank, reverse_lex_rank };

/// Superposition over a support of distinct basis strings with root-of-unity
/// coefficients: the r-th string (in lex order) carries phase
/// exp(2*pi*i * e_r / order). States are kept unnormalized; the squared norm
/// equals the support size.
class PhasedState {
public:
    using Support = std::vector<TritString>;

    PhasedState() = default;
    PhasedState(std::size_t n_parties, unsigned local_dim,
                std::shared_ptr<const Support> support,
                std::vector<std::uint32_t> exponents, std::uint32_t order,
                StateLabel label);

    std::size_t n_parties() const { return n_parties_; }
    unsigned local_dim() const { return local_dim_; }
    std::uint32_t order() const { return order_; }
    const Support& support() const { return *support_; }
    const std::shared_ptr<const Support>& support_ptr() const { return support_; }
    const std::vector<std::uint32_t>& exponents() const { return exponents_; }
    StateLabel label() const { return label_; }

    std::size_t support_size() const { return support_->size(); }
    /// Coefficient of the r-th support string.
    std::complex<double> amplitude(std::size_t r) const;

private:
    std::size_t n_parties_ = 0;
    unsigned local_dim_ = 3;
    std::uint32_t order_ = 1;
    std::shared_ptr<const Support> support_;
    std::vector<std::uint32_t> exponents_;
    StateLabel label_;
};

/// Builds the state with exponents k * f(r) mod s over the given support,
/// where s is the support size and f the chosen bijection. The support is
/// sorted and checked for duplicates; k must lie in [0, s).
PhasedState build_state(std::vector<TritString> support, std::uint32_t k,
                        StateLabel label = {}, PhaseBijection bijection = PhaseBijection::lex_rank,
                        unsigned local_dim = 3);

/// Same, sharing an already-sorted support between states.
PhasedState build_state(std::shared_ptr<const PhasedState::Support> support, std::uint32_t k,
                        StateLabel label = {}, PhaseBijection bijection = PhaseBijection::lex_rank,
                        unsigned local_dim = 3);

enum class SetProvenance { ogeb_standard, ogeb_modified, oges, external };

std::string to_string(SetProvenance p);

struct StateSet {
    std::size_t n_parties = 0;
    unsigned local_dim = 3;
    SetProvenance provenance = SetProvenance::external;
    std::vector<PhasedState> states;

    /// States labelled with the given set index, in increasing k.
    std::vector<const PhasedState*> family(std::int32_t set_index) const;
};

/// One state per (set, k) pair of the family: a full orthogonal basis
/// candidate with 3^N members. Requires the family to be a partition.
StateSet build_ogeb(const StringFamily& f, PhaseBijection bijection = PhaseBijection::lex_rank);

/// The subset construction: all states except those built on set 2. Only
/// defined for modified families; 2 * 3^(N-1) members.
StateSet build_oges(const StringFamily& f, PhaseBijection bijection = PhaseBijection::lex_rank);

/// How an inner product was decided.
enum class InnerPath {
    /// Supports share no string: exactly zero.
    disjoint_support,
    /// Identical supports and the exponent differences sweep a full set of
    /// cosets (geometric sum of a nontrivial root of unity): exactly zero.
    geometric_sum,
    /// Identical supports with constant exponent difference: exactly
    /// m * omega^c, generally nonzero.
    closed_form,
    /// Anything else: floating-point evaluation.
    numeric
};

struct InnerProductResult {
    InnerPath path = InnerPath::numeric;
    std::complex<double> value{0.0, 0.0};

    bool exact_zero() const {
        return path == InnerPath::disjoint_support || path == InnerPath::geometric_sum;
    }
};

/// <a|b> with the conjugate on a. Exponents of states with different orders
/// are compared over the lcm of the orders with integer arithmetic.
InnerProductResult inner_product(const PhasedState& a, const PhasedState& b);

struct OrthogonalityVerdict {
    bool pass = false;
    std::size_t state_count = 0;
    std::uint64_t pairs = 0;
    std::uint64_t disjoint_pairs = 0;
    std::uint64_t geometric_pairs = 0;
    std::uint64_t numeric_pairs = 0;
    std::optional<std::pair<StateLabel, StateLabel>> violation;
    std::string detail;
};

/// Checks pairwise orthogonality of every state pair. Pairs are resolved
/// symbolically wherever the structure allows (set-level support
/// disjointness, phase-ramp differences); the numeric fallback counts toward
/// numeric_pairs and passes only within |value| <= tol_scale * sqrt(sa * sb).
/// For OGEB/OGES provenance the expected state count is also enforced.
OrthogonalityVerdict verify_orthogonal_basis(const StateSet& set, double tol_scale = 1e-12);

} // namespace qnl
