#include "qnl/ghz.hpp"

namespace qnl {

StateSet ghz_basis_fixture() {
    StateSet set;
    set.n_parties = 3;
    set.local_dim = 2;
    set.provenance = SetProvenance::external;
    const char* pairs[4][2] = {{"000", "111"}, {"011", "100"}, {"001", "110"}, {"010", "101"}};
    for (std::int32_t g = 0; g < 4; ++g) {
        std::vector<TritString> support{*TritString::parse(pairs[g][0], 2),
                                        *TritString::parse(pairs[g][1], 2)};
        for (std::uint32_t k = 0; k < 2; ++k)
            set.states.push_back(build_state(support, k, {g, k}, PhaseBijection::lex_rank, 2));
    }
    return set;
}

StateSet product_basis_fixture() {
    StateSet set;
    set.n_parties = 2;
    set.local_dim = 2;
    set.provenance = SetProvenance::external;
    const char* strings[4] = {"00", "01", "10", "11"};
    for (std::int32_t i = 0; i < 4; ++i) {
        set.states.push_back(build_state({*TritString::parse(strings[i], 2)}, 0, {i, 0},
                                         PhaseBijection::lex_rank, 2));
    }
    return set;
}

} // namespace qnl
