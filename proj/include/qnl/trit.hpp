#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qnl {

using Trit = std::uint8_t;

/// Fixed-length digit string over {0,1,2}. Position 0 belongs to party 1 and
/// is the most significant digit of the base-3 index encoding, so the
/// lexicographic order on strings of equal length coincides with the order of
/// their indices.
class TritString {
public:
    TritString() = default;
    explicit TritString(std::vector<Trit> digits);

    /// (value, value, ..., value), n digits.
    static TritString constant(std::size_t n, Trit value);
    /// Inverse of to_index for strings of length n.
    static TritString from_index(std::uint64_t index, std::size_t n, unsigned base = 3);
    /// Parses "021..."; rejects empty input and characters outside the base.
    static std::optional<TritString> parse(std::string_view text, unsigned base = 3);

    std::size_t size() const { return digits_.size(); }
    bool empty() const { return digits_.empty(); }
    Trit operator[](std::size_t i) const { return digits_[i]; }
    const std::vector<Trit>& digits() const { return digits_; }

    std::uint64_t to_index(unsigned base = 3) const;
    std::string str() const;

    bool is_constant() const;

    /// Copy with the digit at pos removed.
    TritString erased(std::size_t pos) const;
    /// Copy with value inserted so that it ends up at position pos.
    TritString inserted(std::size_t pos, Trit value) const;
    /// Coordinate permutation: result[i] = (*this)[perm[i]].
    TritString permuted(const std::vector<std::size_t>& perm) const;

    friend auto operator<=>(const TritString&, const TritString&) = default;

private:
    std::vector<Trit> digits_;
};

/// base^exp for small integer powers.
std::uint64_t ipow(std::uint64_t base, std::uint64_t exp);

} // namespace qnl
