#include "qnl/trit.hpp"

#include <algorithm>
#include <stdexcept>

namespace qnl {

TritString::TritString(std::vector<Trit> digits) : digits_(std::move(digits)) {
    for (Trit t : digits_) {
        if (t > 2) throw std::invalid_argument("trit digit out of range");
    }
}

TritString TritString::constant(std::size_t n, Trit value) {
    return TritString(std::vector<Trit>(n, value));
}

TritString TritString::from_index(std::uint64_t index, std::size_t n, unsigned base) {
    std::vector<Trit> d(n, 0);
    for (std::size_t i = n; i-- > 0;) {
        d[i] = static_cast<Trit>(index % base);
        index /= base;
    }
    if (index != 0) throw std::invalid_argument("index does not fit in n digits");
    TritString s;
    s.digits_ = std::move(d);
    return s;
}

std::optional<TritString> TritString::parse(std::string_view text, unsigned base) {
    if (text.empty()) return std::nullopt;
    std::vector<Trit> d;
    d.reserve(text.size());
    for (char c : text) {
        if (c < '0' || c >= static_cast<char>('0' + base)) return std::nullopt;
        d.push_back(static_cast<Trit>(c - '0'));
    }
    TritString s;
    s.digits_ = std::move(d);
    return s;
}

std::uint64_t TritString::to_index(unsigned base) const {
    std::uint64_t v = 0;
    for (Trit t : digits_) v = v * base + t;
    return v;
}

std::string TritString::str() const {
    std::string out;
    out.reserve(digits_.size());
    for (Trit t : digits_) out.push_back(static_cast<char>('0' + t));
    return out;
}

bool TritString::is_constant() const {
    return std::all_of(digits_.begin(), digits_.end(),
                       [&](Trit t) { return t == digits_.front(); });
}

TritString TritString::erased(std::size_t pos) const {
    TritString s;
    s.digits_ = digits_;
    s.digits_.erase(s.digits_.begin() + static_cast<std::ptrdiff_t>(pos));
    return s;
}

TritString TritString::inserted(std::size_t pos, Trit value) const {
    TritString s;
    s.digits_ = digits_;
    s.digits_.insert(s.digits_.begin() + static_cast<std::ptrdiff_t>(pos), value);
    return s;
}

TritString TritString::permuted(const std::vector<std::size_t>& perm) const {
    std::vector<Trit> d(digits_.size());
    for (std::size_t i = 0; i < digits_.size(); ++i) d[i] = digits_[perm[i]];
    TritString s;
    s.digits_ = std::move(d);
    return s;
}

std::uint64_t ipow(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t v = 1;
    while (exp-- > 0) v *= base;
    return v;
}

} // namespace qnl
