#include "qnl/serialize.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace qnl {

namespace {

[[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("serialize: " + what);
}

/// Shared tail of the text and JSON parsers: validates shape and recovers
/// variant, case tag and removed-constant metadata from it.
StringFamily assemble_family(std::vector<std::vector<TritString>> sets) {
    if (sets.empty()) fail("family has no sets");
    if (sets.size() != 3 && sets.size() != 4)
        fail("family must have 3 or 4 sets, got " + std::to_string(sets.size()));
    std::size_t n = 0;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (sets[i].empty()) fail("set " + std::to_string(i) + " is empty");
        for (const TritString& s : sets[i]) {
            if (s.size() == 0) fail("empty string in set " + std::to_string(i));
            if (n == 0) n = s.size();
            if (s.size() != n) fail("strings of unequal length");
        }
        if (!std::is_sorted(sets[i].begin(), sets[i].end()))
            fail("set " + std::to_string(i) + " is not in lexicographic order");
        if (std::adjacent_find(sets[i].begin(), sets[i].end()) != sets[i].end())
            fail("set " + std::to_string(i) + " repeats a string");
    }

    if (sets.size() == 3)
        return StringFamily::from_parts(n, FamilyVariant::standard, CaseTag::none,
                                        std::move(sets));

    if (n < 3) fail("a 4-set family needs length >= 3");
    const StringFamily standard = build_family(n);
    std::vector<std::vector<TritString>> removed(sets.size());
    for (unsigned c = 0; c < 3; ++c) {
        const TritString constant = TritString::constant(n, c);
        const std::size_t home = classify_string(standard, constant);
        const auto& set = sets[home];
        if (!std::binary_search(set.begin(), set.end(), constant))
            removed[home].push_back(constant);
    }
    return StringFamily::from_parts(n, FamilyVariant::modified, case_for_length(n),
                                    std::move(sets), std::move(removed));
}

} // namespace

std::string family_to_text(const StringFamily& family) {
    std::ostringstream out;
    for (std::size_t i = 0; i < family.set_count(); ++i) {
        out << "#set " << i << '\n';
        for (const TritString& s : family.set(i)) out << s.str() << '\n';
    }
    return out.str();
}

StringFamily family_from_text(const std::string& text) {
    std::vector<std::vector<TritString>> sets;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (line[0] == '#') {
            std::istringstream header(line.substr(1));
            std::string keyword;
            long long index = -1;
            header >> keyword >> index;
            if (keyword != "set" || index < 0 || !(header >> std::ws).eof())
                fail(where + "malformed header '" + line + "'");
            if (static_cast<std::size_t>(index) != sets.size())
                fail(where + "expected '#set " + std::to_string(sets.size()) + "'");
            sets.emplace_back();
            continue;
        }
        if (sets.empty()) fail(where + "string before any '#set' header");
        const auto parsed = TritString::parse(line);
        if (!parsed) fail(where + "not a trit string: '" + line + "'");
        sets.back().push_back(*parsed);
    }
    return assemble_family(std::move(sets));
}

nlohmann::ordered_json family_to_json(const StringFamily& family) {
    nlohmann::ordered_json sets = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < family.set_count(); ++i) {
        nlohmann::ordered_json set = nlohmann::ordered_json::array();
        for (const TritString& s : family.set(i)) set.push_back(s.str());
        sets.push_back(std::move(set));
    }
    return sets;
}

StringFamily family_from_json(const nlohmann::json& j) {
    if (!j.is_array()) fail("family JSON must be an array of arrays");
    std::vector<std::vector<TritString>> sets;
    for (const auto& set : j) {
        if (!set.is_array()) fail("family JSON must be an array of arrays");
        sets.emplace_back();
        for (const auto& s : set) {
            if (!s.is_string()) fail("family JSON strings must be strings");
            const auto parsed = TritString::parse(s.get<std::string>());
            if (!parsed) fail("not a trit string: '" + s.get<std::string>() + "'");
            sets.back().push_back(*parsed);
        }
    }
    return assemble_family(std::move(sets));
}

nlohmann::ordered_json state_set_to_json(const StateSet& set) {
    nlohmann::ordered_json j;
    j["n_parties"] = set.n_parties;
    j["local_dim"] = set.local_dim;
    j["provenance"] = to_string(set.provenance);
    nlohmann::ordered_json states = nlohmann::ordered_json::array();
    for (const PhasedState& state : set.states) {
        nlohmann::ordered_json s;
        s["set_index"] = state.label().set_index;
        s["k"] = state.label().k;
        s["order"] = state.order();
        nlohmann::ordered_json support = nlohmann::ordered_json::array();
        for (std::size_t r = 0; r < state.support_size(); ++r) {
            nlohmann::ordered_json row;
            row["trits"] = state.support()[r].str();
            row["exponent"] = state.exponents()[r];
            support.push_back(std::move(row));
        }
        s["support"] = std::move(support);
        states.push_back(std::move(s));
    }
    j["states"] = std::move(states);
    return j;
}

namespace {

SetProvenance provenance_from_string(const std::string& s) {
    if (s == "ogeb-standard") return SetProvenance::ogeb_standard;
    if (s == "ogeb-modified") return SetProvenance::ogeb_modified;
    if (s == "oges") return SetProvenance::oges;
    if (s == "external") return SetProvenance::external;
    fail("unknown provenance '" + s + "'");
}

template <typename T>
T field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) fail(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        fail(std::string("field '") + key + "' has the wrong type");
    }
}

} // namespace

StateSet state_set_from_json(const nlohmann::json& j) {
    if (!j.is_object()) fail("state set JSON must be an object");
    StateSet set;
    set.n_parties = field<std::size_t>(j, "n_parties");
    set.local_dim = field<unsigned>(j, "local_dim");
    set.provenance = provenance_from_string(field<std::string>(j, "provenance"));
    if (set.n_parties == 0) fail("n_parties must be positive");
    if (set.local_dim < 2) fail("local_dim must be at least 2");

    if (!j.contains("states") || !j.at("states").is_array()) fail("missing states array");
    std::shared_ptr<const PhasedState::Support> shared;
    for (const auto& s : j.at("states")) {
        StateLabel label{field<std::int32_t>(s, "set_index"), field<std::uint32_t>(s, "k")};
        const auto order = field<std::uint32_t>(s, "order");
        if (order == 0) fail("order must be positive");
        if (!s.contains("support") || !s.at("support").is_array() || s.at("support").empty())
            fail("state needs a nonempty support array");

        PhasedState::Support support;
        std::vector<std::uint32_t> exponents;
        for (const auto& row : s.at("support")) {
            const std::string text = field<std::string>(row, "trits");
            const auto parsed = TritString::parse(text, set.local_dim);
            if (!parsed) fail("not a base-" + std::to_string(set.local_dim) + " string: '" + text + "'");
            const TritString t = *parsed;
            if (t.size() != set.n_parties) fail("support string length differs from n_parties");
            const auto e = field<std::uint32_t>(row, "exponent");
            if (e >= order) fail("exponent out of range for the state's order");
            support.push_back(t);
            exponents.push_back(e);
        }
        if (!std::is_sorted(support.begin(), support.end()) ||
            std::adjacent_find(support.begin(), support.end()) != support.end())
            fail("support must be sorted and duplicate-free");

        // States of one family share a support; keep that sharing across the
        // round-trip so pointer-based disjointness checks stay cheap.
        if (!shared || *shared != support)
            shared = std::make_shared<const PhasedState::Support>(std::move(support));
        set.states.emplace_back(set.n_parties, set.local_dim, shared, std::move(exponents),
                                order, label);
    }
    return set;
}

std::vector<double> dense_interleaved(const PhasedState& state) {
    const std::uint64_t dim = ipow(state.local_dim(), state.n_parties());
    std::vector<double> out(2 * dim, 0.0);
    for (std::size_t r = 0; r < state.support_size(); ++r) {
        const std::uint64_t index = state.support()[r].to_index(state.local_dim());
        const std::complex<double> a = state.amplitude(r);
        out[2 * index] = a.real();
        out[2 * index + 1] = a.imag();
    }
    return out;
}

} // namespace qnl
