#pragma once

#include "qnl/state.hpp"

namespace qnl {

/// The eight three-qubit states |abc> +/- |a'b'c'> pairing each basis string
/// with its bitwise complement. Orthogonal, genuinely entangled across every
/// cut, yet locally reducible: the negative control for the nonlocality
/// oracle. Labels: set_index = pair group (0..3), k = 0 for +, 1 for -.
StateSet ghz_basis_fixture();

/// The four two-qubit product states |00>, |01>, |10>, |11>: a second
/// negative control whose one-sided solution space is the free diagonal.
StateSet product_basis_fixture();

} // namespace qnl
