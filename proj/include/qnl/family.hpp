#pragma once

#include "qnl/trit.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qnl {

enum class FamilyVariant { standard, modified };

/// Residue class of the string length that selects the modified-family shape.
enum class CaseTag { none, case_i, case_ii, case_iii };

std::string to_string(FamilyVariant v);
std::string to_string(CaseTag c);

CaseTag case_for_length(std::size_t n);

/// A labelled collection of sets of length-N trit strings. Builders produce
/// partitions of the full string space: 3 sets for the standard recursive
/// construction and 4 for the modified one. Set elements are kept in
/// lexicographic order; that order is the canonical one used everywhere
/// (serialization, phase assignment).
class StringFamily {
public:
    /// Assembles a family without validating it; builders guarantee shape,
    /// tests use this to craft deliberately broken inputs for the verifiers.
    static StringFamily from_parts(std::size_t n_parties, FamilyVariant variant,
                                   CaseTag case_tag,
                                   std::vector<std::vector<TritString>> sets,
                                   std::vector<std::vector<TritString>> removed = {});

    std::size_t n_parties() const { return n_parties_; }
    FamilyVariant variant() const { return variant_; }
    CaseTag case_tag() const { return case_tag_; }

    std::size_t set_count() const { return sets_.size(); }
    const std::vector<TritString>& set(std::size_t i) const { return sets_.at(i); }
    const std::vector<std::vector<TritString>>& sets() const { return sets_; }

    /// Constant strings removed from each set relative to the standard family
    /// (metadata; empty for standard families).
    const std::vector<std::vector<TritString>>& removed() const { return removed_; }

    bool contains(std::size_t set_index, const TritString& s) const;

private:
    std::size_t n_parties_ = 0;
    FamilyVariant variant_ = FamilyVariant::standard;
    CaseTag case_tag_ = CaseTag::none;
    std::vector<std::vector<TritString>> sets_;
    std::vector<std::vector<TritString>> removed_;
};

/// Three singleton sets {0}, {1}, {2} at length 1.
StringFamily build_base_family();

/// One recursion step: each set of the length-N family turns into a set of
/// length-(N+1) strings by prefixing the three parent sets with shifted
/// digits. Rejects modified families (the recursion is defined on standard
/// ones only).
StringFamily extend_family(const StringFamily& f);

/// Standard family at length n (n >= 1).
StringFamily build_family(std::size_t n);

/// Modified family at length n (n >= 3): relocates the constant strings into
/// a fourth set. Which sets lose a constant depends on n mod 3:
///   case-I  (n % 3 == 0): set 0 loses all three constants, set 3 = {0^n, 1^n, 2^n}
///   case-II (n % 3 == 1): set 0 loses 0^n, set 1 loses 1^n, set 3 = {0^n, 1^n}
///   case-III(n % 3 == 2): set 0 loses 0^n, set 1 loses 2^n, set 3 = {0^n, 2^n}
/// Set 2 is always the unmodified standard set 2.
StringFamily build_modified_family(std::size_t n);

struct PartitionVerdict {
    bool pass = false;
    /// First string found in two sets or missing from all of them.
    std::optional<TritString> offending;
    std::string reason;
};

/// Checks that the sets are pairwise disjoint and cover every length-N
/// string, and that every element has the right length and is lex-sorted
/// within its set.
PartitionVerdict verify_partition(const StringFamily& f);

inline constexpr std::uint64_t default_permutation_seed = 1729;

struct PermutationCheck {
    enum class Mode { exhaustive, sampled };
    Mode mode = Mode::exhaustive;
    /// Number of permutations to draw in sampled mode.
    std::size_t samples = 1000;
    std::uint64_t seed = default_permutation_seed;

    static PermutationCheck exhaustive();
    static PermutationCheck sampled(std::size_t samples, std::uint64_t seed = default_permutation_seed);
    /// Exhaustive for n <= 6, sampled(1000) above that.
    static PermutationCheck default_for(std::size_t n);
};

struct PermutationVerdict {
    bool pass = false;
    std::size_t permutations_tested = 0;
    /// Set on failure: the permutation (as image positions), the string whose
    /// image escaped its set, and the set index.
    std::optional<std::vector<std::size_t>> violating_permutation;
    std::optional<TritString> violating_string;
    std::size_t violating_set = 0;
};

/// Checks that every coordinate permutation maps each set onto itself.
PermutationVerdict verify_permutation_invariance(const StringFamily& f, const PermutationCheck& check);

/// Index of the set containing s. Requires s to have the family's length and,
/// for a meaningful answer, the family to be a partition.
std::size_t classify_string(const StringFamily& f, const TritString& s);

} // namespace qnl
