#pragma once

#include "qnl/family.hpp"
#include "qnl/state.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace qnl {

/// Line-oriented family format: `#set <index>` headers, one string per line.
/// Variant, case tag and removed-constant metadata are recovered from the
/// shape on parse, so serialize-parse-serialize is byte-identical.
std::string family_to_text(const StringFamily& family);
StringFamily family_from_text(const std::string& text);

/// JSON family form: array of arrays of digit strings, set order preserved.
nlohmann::ordered_json family_to_json(const StringFamily& family);
StringFamily family_from_json(const nlohmann::json& j);

/// State-set JSON: {n_parties, local_dim, provenance, states: [{set_index,
/// k, order, support: [{trits, exponent}]}]}. Identical consecutive supports
/// are re-shared on parse.
nlohmann::ordered_json state_set_to_json(const StateSet& set);
StateSet state_set_from_json(const nlohmann::json& j);

/// Dense vector of the state: 2 * d^N doubles, interleaved real/imaginary,
/// index = base-d string encoding.
std::vector<double> dense_interleaved(const PhasedState& state);

} // namespace qnl
