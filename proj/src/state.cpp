#include "qnl/state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace qnl {

namespace {

std::complex<double> unit_phase(std::uint64_t e, std::uint64_t order) {
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e % order) /
                               static_cast<double>(order));
}

} // namespace

PhasedState::PhasedState(std::size_t n_parties, unsigned local_dim,
                         std::shared_ptr<const Support> support,
                         std::vector<std::uint32_t> exponents, std::uint32_t order,
                         StateLabel label)
    : n_parties_(n_parties),
      local_dim_(local_dim),
      order_(order),
      support_(std::move(support)),
      exponents_(std::move(exponents)),
      label_(label) {
    if (!support_ || support_->empty())
        throw std::invalid_argument("state: support must be nonempty");
    if (exponents_.size() != support_->size())
        throw std::invalid_argument("state: one exponent per support string required");
    if (order_ == 0) throw std::invalid_argument("state: order must be positive");
    for (const TritString& s : *support_) {
        if (s.size() != n_parties_)
            throw std::invalid_argument("state: support string with wrong length");
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s[i] >= local_dim_)
                throw std::invalid_argument("state: digit exceeds local dimension");
    }
}

std::complex<double> PhasedState::amplitude(std::size_t r) const {
    return unit_phase(exponents_[r], order_);
}

PhasedState build_state(std::vector<TritString> support, std::uint32_t k, StateLabel label,
                        PhaseBijection bijection, unsigned local_dim) {
    std::sort(support.begin(), support.end());
    if (std::adjacent_find(support.begin(), support.end()) != support.end())
        throw std::invalid_argument("build_state: duplicate support string");
    auto shared = std::make_shared<const PhasedState::Support>(std::move(support));
    return build_state(std::move(shared), k, label, bijection, local_dim);
}

PhasedState build_state(std::shared_ptr<const PhasedState::Support> support, std::uint32_t k,
                        StateLabel label, PhaseBijection bijection, unsigned local_dim) {
    if (!support || support->empty())
        throw std::invalid_argument("build_state: support must be nonempty");
    if (!std::is_sorted(support->begin(), support->end()))
        throw std::invalid_argument("build_state: shared support must be lex-sorted");
    const auto s = static_cast<std::uint32_t>(support->size());
    if (k >= s) throw std::invalid_argument("build_state: phase index k must lie in [0, order)");

    std::vector<std::uint32_t> exps(s);
    for (std::uint32_t r = 0; r < s; ++r) {
        const std::uint64_t f = bijection == PhaseBijection::lex_rank ? r : s - 1 - r;
        exps[r] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(k) * f) % s);
    }
    const std::size_t n = support->front().size();
    return PhasedState(n, local_dim, std::move(support), std::move(exps), s, label);
}

std::string to_string(SetProvenance p) {
    switch (p) {
        case SetProvenance::ogeb_standard: return "ogeb-standard";
        case SetProvenance::ogeb_modified: return "ogeb-modified";
        case SetProvenance::oges: return "oges";
        case SetProvenance::external: return "external";
    }
    return "external";
}

std::vector<const PhasedState*> StateSet::family(std::int32_t set_index) const {
    std::vector<const PhasedState*> out;
    for (const PhasedState& st : states)
        if (st.label().set_index == set_index) out.push_back(&st);
    std::sort(out.begin(), out.end(), [](const PhasedState* a, const PhasedState* b) {
        return a->label().k < b->label().k;
    });
    return out;
}

namespace {

StateSet build_basis_states(const StringFamily& f, PhaseBijection bijection,
                            const std::vector<std::int32_t>& set_indices,
                            SetProvenance provenance) {
    PartitionVerdict part = verify_partition(f);
    if (!part.pass)
        throw std::invalid_argument("state set construction: family is not a partition: " +
                                    part.reason +
                                    (part.offending ? " (" + part.offending->str() + ")" : ""));
    StateSet out;
    out.n_parties = f.n_parties();
    out.local_dim = 3;
    out.provenance = provenance;
    for (std::int32_t i : set_indices) {
        const auto& set = f.set(static_cast<std::size_t>(i));
        if (set.empty()) continue;
        auto shared = std::make_shared<const PhasedState::Support>(set);
        const auto s = static_cast<std::uint32_t>(set.size());
        for (std::uint32_t k = 0; k < s; ++k)
            out.states.push_back(build_state(shared, k, {i, k}, bijection));
    }
    return out;
}

} // namespace

StateSet build_ogeb(const StringFamily& f, PhaseBijection bijection) {
    std::vector<std::int32_t> idx(f.set_count());
    std::iota(idx.begin(), idx.end(), 0);
    const SetProvenance prov = f.variant() == FamilyVariant::standard
                                   ? SetProvenance::ogeb_standard
                                   : SetProvenance::ogeb_modified;
    return build_basis_states(f, bijection, idx, prov);
}

StateSet build_oges(const StringFamily& f, PhaseBijection bijection) {
    if (f.variant() != FamilyVariant::modified)
        throw std::invalid_argument("build_oges: requires a modified family (set 2 is dropped)");
    return build_basis_states(f, bijection, {0, 1, 3}, SetProvenance::oges);
}

InnerProductResult inner_product(const PhasedState& a, const PhasedState& b) {
    if (a.n_parties() != b.n_parties() || a.local_dim() != b.local_dim())
        throw std::invalid_argument("inner_product: states live on different spaces");

    const auto& sa = a.support();
    const auto& sb = b.support();
    const std::uint64_t L = std::lcm<std::uint64_t>(a.order(), b.order());
    const std::uint64_t ma = L / a.order();
    const std::uint64_t mb = L / b.order();

    // Walk both sorted supports; collect exponent differences over order L
    // for the common strings.
    std::vector<std::uint64_t> diffs;
    std::size_t i = 0;
    std::size_t j = 0;
    const bool same_support =
        a.support_ptr() == b.support_ptr() || (sa.size() == sb.size() && sa == sb);
    if (same_support) {
        diffs.resize(sa.size());
        for (std::size_t r = 0; r < sa.size(); ++r) {
            const std::uint64_t eb = b.exponents()[r] * mb;
            const std::uint64_t ea = a.exponents()[r] * ma;
            diffs[r] = (eb + L - ea % L) % L;
        }
    } else {
        while (i < sa.size() && j < sb.size()) {
            if (sa[i] < sb[j]) {
                ++i;
            } else if (sb[j] < sa[i]) {
                ++j;
            } else {
                const std::uint64_t eb = b.exponents()[j] * mb;
                const std::uint64_t ea = a.exponents()[i] * ma;
                diffs.push_back((eb + L - ea % L) % L);
                ++i;
                ++j;
            }
        }
    }

    if (diffs.empty()) return {InnerPath::disjoint_support, {0.0, 0.0}};

    if (same_support) {
        const std::uint64_t m = diffs.size();
        bool constant = true;
        for (std::uint64_t d : diffs)
            if (d != diffs[0]) {
                constant = false;
                break;
            }
        if (constant) {
            return {InnerPath::closed_form,
                    static_cast<double>(m) * unit_phase(diffs[0], L)};
        }
        if (m >= 2) {
            const std::uint64_t step = (diffs[1] + L - diffs[0]) % L;
            bool ramp = true;
            std::uint64_t expect = diffs[0];
            for (std::uint64_t d : diffs) {
                if (d != expect) {
                    ramp = false;
                    break;
                }
                expect = (expect + step) % L;
            }
            // Sum of m consecutive powers of omega_L^step: zero exactly when
            // the step is nontrivial and m*step completes full turns.
            if (ramp && step % L != 0 && (m * step) % L == 0)
                return {InnerPath::geometric_sum, {0.0, 0.0}};
        }
    }

    std::complex<double> acc{0.0, 0.0};
    for (std::uint64_t d : diffs) acc += unit_phase(d, L);
    return {InnerPath::numeric, acc};
}

namespace {

struct SupportGroup {
    std::shared_ptr<const PhasedState::Support> support;
    std::vector<std::size_t> members; // indices into set.states
};

// Phase profile of a state whose exponents form an arithmetic ramp over its
// support: e_r = base + r*step (mod order).
struct RampProfile {
    bool is_ramp = false;
    std::uint64_t base = 0;
    std::uint64_t step = 0;
};

RampProfile ramp_profile(const PhasedState& st) {
    const auto& e = st.exponents();
    const std::uint64_t s = st.order();
    RampProfile p;
    p.base = e[0];
    p.step = e.size() >= 2 ? (e[1] + s - e[0]) % s : 0;
    std::uint64_t expect = p.base;
    for (std::uint64_t v : e) {
        if (v % s != expect) return p; // is_ramp stays false
        expect = (expect + p.step) % s;
    }
    p.is_ramp = true;
    return p;
}

} // namespace

OrthogonalityVerdict verify_orthogonal_basis(const StateSet& set, double tol_scale) {
    OrthogonalityVerdict v;
    v.state_count = set.states.size();
    v.pairs = set.states.size() < 2
                  ? 0
                  : static_cast<std::uint64_t>(set.states.size()) * (set.states.size() - 1) / 2;

    if (set.provenance == SetProvenance::ogeb_standard ||
        set.provenance == SetProvenance::ogeb_modified) {
        const std::uint64_t expected = ipow(3, set.n_parties);
        if (set.states.size() != expected) {
            v.detail = "full-basis set has wrong cardinality";
            return v;
        }
    } else if (set.provenance == SetProvenance::oges) {
        const std::uint64_t expected = 2 * ipow(3, set.n_parties - 1);
        if (set.states.size() != expected) {
            v.detail = "subset construction has wrong cardinality";
            return v;
        }
    }

    // Group states by identical support.
    std::vector<SupportGroup> groups;
    for (std::size_t idx = 0; idx < set.states.size(); ++idx) {
        const PhasedState& st = set.states[idx];
        bool placed = false;
        for (SupportGroup& g : groups) {
            if (g.support == st.support_ptr() ||
                (g.support->size() == st.support_size() && *g.support == st.support())) {
                g.members.push_back(idx);
                placed = true;
                break;
            }
        }
        if (!placed) groups.push_back({st.support_ptr(), {idx}});
    }

    auto fail_pair = [&](std::size_t ia, std::size_t ib, const std::string& why) {
        v.pass = false;
        v.violation = {set.states[ia].label(), set.states[ib].label()};
        v.detail = why;
    };

    // Cross-group pairs: groups with disjoint supports dispose of all their
    // pairs at once; overlapping groups fall back to explicit products.
    for (std::size_t ga = 0; ga < groups.size(); ++ga) {
        for (std::size_t gb = ga + 1; gb < groups.size(); ++gb) {
            const auto& A = *groups[ga].support;
            const auto& B = *groups[gb].support;
            bool disjoint = true;
            for (std::size_t i = 0, j = 0; i < A.size() && j < B.size();) {
                if (A[i] < B[j]) ++i;
                else if (B[j] < A[i]) ++j;
                else { disjoint = false; break; }
            }
            const std::uint64_t cross =
                static_cast<std::uint64_t>(groups[ga].members.size()) * groups[gb].members.size();
            if (disjoint) {
                v.disjoint_pairs += cross;
                continue;
            }
            for (std::size_t ia : groups[ga].members) {
                for (std::size_t ib : groups[gb].members) {
                    InnerProductResult r = inner_product(set.states[ia], set.states[ib]);
                    if (r.exact_zero()) {
                        ++v.geometric_pairs;
                        continue;
                    }
                    ++v.numeric_pairs;
                    const double tol = tol_scale * std::sqrt(static_cast<double>(
                                           set.states[ia].support_size() *
                                           set.states[ib].support_size()));
                    if (r.path == InnerPath::closed_form || std::abs(r.value) > tol) {
                        fail_pair(ia, ib, "overlapping-support pair fails orthogonality");
                        return v;
                    }
                }
            }
        }
    }

    // Within-group pairs. When every member is a phase ramp the pair products
    // are complete geometric sums decided by the ramp parameters alone.
    for (const SupportGroup& g : groups) {
        const std::size_t m = g.support->size();
        std::vector<RampProfile> profiles;
        profiles.reserve(g.members.size());
        bool all_ramps = true;
        for (std::size_t idx : g.members) {
            profiles.push_back(ramp_profile(set.states[idx]));
            if (!profiles.back().is_ramp) all_ramps = false;
        }
        for (std::size_t x = 0; x < g.members.size(); ++x) {
            for (std::size_t y = x + 1; y < g.members.size(); ++y) {
                const std::size_t ia = g.members[x];
                const std::size_t ib = g.members[y];
                const PhasedState& a = set.states[ia];
                const PhasedState& b = set.states[ib];
                if (all_ramps) {
                    const std::uint64_t L = std::lcm<std::uint64_t>(a.order(), b.order());
                    const std::uint64_t sb = (profiles[y].step * (L / b.order())) % L;
                    const std::uint64_t sa = (profiles[x].step * (L / a.order())) % L;
                    const std::uint64_t step = (sb + L - sa) % L;
                    if (step != 0 && (m * step) % L == 0) {
                        ++v.geometric_pairs;
                        continue;
                    }
                }
                InnerProductResult r = inner_product(a, b);
                if (r.exact_zero()) {
                    ++v.geometric_pairs;
                    continue;
                }
                if (r.path == InnerPath::closed_form) {
                    fail_pair(ia, ib, "identical support with constant phase offset");
                    return v;
                }
                ++v.numeric_pairs;
                const double tol = tol_scale * std::sqrt(static_cast<double>(
                                       a.support_size() * b.support_size()));
                if (std::abs(r.value) > tol) {
                    fail_pair(ia, ib, "same-support pair fails orthogonality");
                    return v;
                }
            }
        }
    }

    v.pass = true;
    return v;
}

} // namespace qnl
