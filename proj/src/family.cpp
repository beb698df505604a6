#include "qnl/family.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace qnl {

std::string to_string(FamilyVariant v) {
    return v == FamilyVariant::standard ? "standard" : "modified";
}

std::string to_string(CaseTag c) {
    switch (c) {
        case CaseTag::none: return "none";
        case CaseTag::case_i: return "case-I";
        case CaseTag::case_ii: return "case-II";
        case CaseTag::case_iii: return "case-III";
    }
    return "none";
}

CaseTag case_for_length(std::size_t n) {
    switch (n % 3) {
        case 0: return CaseTag::case_i;
        case 1: return CaseTag::case_ii;
        default: return CaseTag::case_iii;
    }
}

StringFamily StringFamily::from_parts(std::size_t n_parties, FamilyVariant variant,
                                      CaseTag case_tag,
                                      std::vector<std::vector<TritString>> sets,
                                      std::vector<std::vector<TritString>> removed) {
    StringFamily f;
    f.n_parties_ = n_parties;
    f.variant_ = variant;
    f.case_tag_ = case_tag;
    f.sets_ = std::move(sets);
    f.removed_ = std::move(removed);
    if (f.removed_.empty()) f.removed_.resize(f.sets_.size());
    return f;
}

bool StringFamily::contains(std::size_t set_index, const TritString& s) const {
    const auto& v = sets_.at(set_index);
    return std::binary_search(v.begin(), v.end(), s);
}

StringFamily build_base_family() {
    std::vector<std::vector<TritString>> sets(3);
    for (Trit i = 0; i < 3; ++i) sets[i] = {TritString::constant(1, i)};
    return StringFamily::from_parts(1, FamilyVariant::standard, CaseTag::none, std::move(sets));
}

StringFamily extend_family(const StringFamily& f) {
    if (f.variant() != FamilyVariant::standard)
        throw std::invalid_argument("extend_family: input must be a standard family");
    const std::size_t n = f.n_parties();
    // New set i collects prefix c over parent set k where c = i + shift(k) mod 3,
    // shift = (0, 2, 1). Emitting prefixes in increasing order keeps each new
    // set lex-sorted because parent sets already are.
    static constexpr Trit shift[3] = {0, 2, 1};
    std::vector<std::vector<TritString>> sets(3);
    for (Trit i = 0; i < 3; ++i) {
        auto& out = sets[i];
        out.reserve(3 * f.set(0).size());
        for (Trit prefix = 0; prefix < 3; ++prefix) {
            // prefix = i + shift[k]  =>  parent set k with shift[k] = prefix - i.
            const Trit want = static_cast<Trit>((3 + prefix - i) % 3);
            Trit k = 0;
            while (shift[k] != want) ++k;
            for (const TritString& s : f.set(k)) out.push_back(s.inserted(0, prefix));
        }
    }
    return StringFamily::from_parts(n + 1, FamilyVariant::standard, CaseTag::none, std::move(sets));
}

StringFamily build_family(std::size_t n) {
    if (n < 1) throw std::invalid_argument("build_family: n must be >= 1");
    StringFamily f = build_base_family();
    for (std::size_t m = 1; m < n; ++m) f = extend_family(f);
    return f;
}

namespace {

// Removes `s` from the sorted set, throwing if it is not there: the builders
// rely on the constant strings sitting in specific standard sets.
void remove_checked(std::vector<TritString>& set, const TritString& s) {
    auto it = std::lower_bound(set.begin(), set.end(), s);
    if (it == set.end() || *it != s)
        throw std::logic_error("modified family: expected constant not present in source set");
    set.erase(it);
}

} // namespace

StringFamily build_modified_family(std::size_t n) {
    if (n < 3) throw std::invalid_argument("build_modified_family: n must be >= 3");
    StringFamily std_f = build_family(n);
    const CaseTag tag = case_for_length(n);

    std::vector<std::vector<TritString>> sets(4);
    std::vector<std::vector<TritString>> removed(4);
    for (std::size_t i = 0; i < 3; ++i) sets[i] = std_f.set(i);

    const TritString c0 = TritString::constant(n, 0);
    const TritString c1 = TritString::constant(n, 1);
    const TritString c2 = TritString::constant(n, 2);

    switch (tag) {
        case CaseTag::case_i:
            remove_checked(sets[0], c0);
            remove_checked(sets[0], c1);
            remove_checked(sets[0], c2);
            removed[0] = {c0, c1, c2};
            sets[3] = {c0, c1, c2};
            break;
        case CaseTag::case_ii:
            remove_checked(sets[0], c0);
            remove_checked(sets[1], c1);
            removed[0] = {c0};
            removed[1] = {c1};
            sets[3] = {c0, c1};
            break;
        case CaseTag::case_iii:
            remove_checked(sets[0], c0);
            remove_checked(sets[1], c2);
            removed[0] = {c0};
            removed[1] = {c2};
            sets[3] = {c0, c2};
            break;
        default:
            break;
    }
    return StringFamily::from_parts(n, FamilyVariant::modified, tag, std::move(sets), std::move(removed));
}

PartitionVerdict verify_partition(const StringFamily& f) {
    const std::size_t n = f.n_parties();
    const std::uint64_t total = ipow(3, n);
    std::vector<std::uint8_t> count(total, 0);

    for (std::size_t i = 0; i < f.set_count(); ++i) {
        const auto& set = f.set(i);
        for (std::size_t j = 0; j < set.size(); ++j) {
            const TritString& s = set[j];
            if (s.size() != n)
                return {false, s, "string length differs from family length"};
            if (j > 0 && !(set[j - 1] < s))
                return {false, s, "set elements not in strictly increasing lex order"};
            std::uint64_t idx = s.to_index();
            if (count[idx]++ > 0)
                return {false, s, "string occurs in more than one set (or twice in one)"};
        }
    }
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        if (count[idx] == 0)
            return {false, TritString::from_index(idx, n), "string missing from every set"};
    }
    return {true, std::nullopt, ""};
}

PermutationCheck PermutationCheck::exhaustive() {
    return {Mode::exhaustive, 0, default_permutation_seed};
}

PermutationCheck PermutationCheck::sampled(std::size_t samples, std::uint64_t seed) {
    return {Mode::sampled, samples, seed};
}

PermutationCheck PermutationCheck::default_for(std::size_t n) {
    return n <= 6 ? exhaustive() : sampled(1000);
}

namespace {

// Checks one permutation against every set; fills the verdict on violation.
bool check_permutation(const StringFamily& f, const std::vector<std::size_t>& perm,
                       PermutationVerdict& verdict) {
    for (std::size_t i = 0; i < f.set_count(); ++i) {
        const auto& set = f.set(i);
        for (const TritString& s : set) {
            TritString image = s.permuted(perm);
            if (!std::binary_search(set.begin(), set.end(), image)) {
                verdict.pass = false;
                verdict.violating_permutation = perm;
                verdict.violating_string = s;
                verdict.violating_set = i;
                return false;
            }
        }
    }
    return true;
}

} // namespace

PermutationVerdict verify_permutation_invariance(const StringFamily& f,
                                                 const PermutationCheck& check) {
    PermutationVerdict verdict;
    verdict.pass = true;

    std::vector<std::size_t> perm(f.n_parties());
    std::iota(perm.begin(), perm.end(), 0);

    if (check.mode == PermutationCheck::Mode::exhaustive) {
        do {
            ++verdict.permutations_tested;
            if (!check_permutation(f, perm, verdict)) return verdict;
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        std::mt19937_64 rng(check.seed);
        for (std::size_t t = 0; t < check.samples; ++t) {
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            ++verdict.permutations_tested;
            if (!check_permutation(f, perm, verdict)) return verdict;
        }
    }
    return verdict;
}

std::size_t classify_string(const StringFamily& f, const TritString& s) {
    if (s.size() != f.n_parties())
        throw std::invalid_argument("classify_string: string length differs from family length");
    for (std::size_t i = 0; i < f.set_count(); ++i) {
        if (f.contains(i, s)) return i;
    }
    throw std::invalid_argument("classify_string: string not present in any set");
}

} // namespace qnl
