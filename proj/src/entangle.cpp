#include "qnl/entangle.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <stdexcept>

namespace qnl {

Bipartition::Bipartition(std::size_t n_parties, std::vector<std::size_t> one_side)
    : n_parties_(n_parties) {
    std::sort(one_side.begin(), one_side.end());
    one_side.erase(std::unique(one_side.begin(), one_side.end()), one_side.end());
    if (one_side.empty() || one_side.size() >= n_parties)
        throw std::invalid_argument("bipartition: both sides must be nonempty");
    if (one_side.front() < 1 || one_side.back() > n_parties)
        throw std::invalid_argument("bipartition: party labels are 1-based");

    std::vector<std::size_t> other;
    other.reserve(n_parties - one_side.size());
    std::size_t next = 0;
    for (std::size_t p = 1; p <= n_parties; ++p) {
        if (next < one_side.size() && one_side[next] == p) ++next;
        else other.push_back(p);
    }
    if (one_side.front() == 1) {
        side_a_ = std::move(one_side);
        side_b_ = std::move(other);
    } else {
        side_a_ = std::move(other);
        side_b_ = std::move(one_side);
    }
}

std::vector<Bipartition> enumerate_bipartitions(std::size_t n_parties) {
    if (n_parties < 2) return {};
    std::vector<Bipartition> out;
    const std::uint64_t masks = std::uint64_t{1} << (n_parties - 1);
    // mask over parties {2..N}; the full set (all bits on) is excluded.
    for (std::uint64_t mask = 0; mask + 1 < masks; ++mask) {
        std::vector<std::size_t> side{1};
        for (std::size_t p = 2; p <= n_parties; ++p)
            if (mask & (std::uint64_t{1} << (p - 2))) side.push_back(p);
        out.emplace_back(n_parties, std::move(side));
    }
    return out;
}

namespace {

// Base-d index of the digits of s at the given (1-based, sorted) parties.
std::uint64_t side_index(const TritString& s, const std::vector<std::size_t>& parties,
                         unsigned d) {
    std::uint64_t v = 0;
    for (std::size_t p : parties) v = v * d + s[p - 1];
    return v;
}

} // namespace

Eigen::MatrixXcd coefficient_matrix(const PhasedState& state, const Bipartition& cut) {
    if (cut.n_parties() != state.n_parties())
        throw std::invalid_argument("coefficient_matrix: cut and state disagree on party count");
    const unsigned d = state.local_dim();
    const auto rows = static_cast<Eigen::Index>(ipow(d, cut.side_a().size()));
    const auto cols = static_cast<Eigen::Index>(ipow(d, cut.side_b().size()));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows, cols);
    for (std::size_t r = 0; r < state.support_size(); ++r) {
        const TritString& s = state.support()[r];
        m(static_cast<Eigen::Index>(side_index(s, cut.side_a(), d)),
          static_cast<Eigen::Index>(side_index(s, cut.side_b(), d))) += state.amplitude(r);
    }
    return m;
}

Eigen::Index matrix_rank(const Eigen::MatrixXcd& m, double rel_tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double cutoff = rel_tol * std::max(sv(0), 1.0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return rank;
}

Eigen::Index schmidt_rank(const PhasedState& state, const Bipartition& cut, double rel_tol) {
    return matrix_rank(coefficient_matrix(state, cut), rel_tol);
}

EntanglementVerdict is_genuinely_entangled(const PhasedState& state, double rel_tol) {
    EntanglementVerdict v;
    v.genuine = true;
    for (const Bipartition& cut : enumerate_bipartitions(state.n_parties())) {
        const Eigen::Index r = schmidt_rank(state, cut, rel_tol);
        v.cuts.push_back({cut, r});
        if (r < 2) v.genuine = false;
    }
    return v;
}

Eigen::MatrixXcd reduced_density(const PhasedState& state, std::size_t party) {
    if (party < 1 || party > state.n_parties())
        throw std::invalid_argument("reduced_density: party label out of range");
    const unsigned d = state.local_dim();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    // Group support strings by their digits away from `party`: entries of the
    // same group contribute amplitude products to rho.
    const std::size_t pos = party - 1;
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed(state.support_size());
    for (std::size_t r = 0; r < state.support_size(); ++r)
        keyed[r] = {state.support()[r].erased(pos).to_index(d), r};
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t lo = 0; lo < keyed.size();) {
        std::size_t hi = lo;
        while (hi < keyed.size() && keyed[hi].first == keyed[lo].first) ++hi;
        for (std::size_t i = lo; i < hi; ++i) {
            for (std::size_t j = lo; j < hi; ++j) {
                const std::size_t ri = keyed[i].second;
                const std::size_t rj = keyed[j].second;
                rho(state.support()[ri][pos], state.support()[rj][pos]) +=
                    state.amplitude(ri) * std::conj(state.amplitude(rj));
            }
        }
        lo = hi;
    }
    rho /= static_cast<double>(state.support_size());
    return rho;
}

UniformityVerdict is_one_uniform(const PhasedState& state, double tol) {
    UniformityVerdict v;
    v.tol = tol;
    const unsigned d = state.local_dim();
    for (std::size_t party = 1; party <= state.n_parties(); ++party) {
        Eigen::MatrixXcd rho = reduced_density(state, party);
        rho -= Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d);
        v.max_deviation = std::max(v.max_deviation, rho.cwiseAbs().maxCoeff());
    }
    v.uniform = v.max_deviation <= tol;
    return v;
}

} // namespace qnl
