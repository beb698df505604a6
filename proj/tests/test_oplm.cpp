#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qnl/family.hpp"
#include "qnl/ghz.hpp"
#include "qnl/oplm.hpp"
#include "qnl/state.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

using namespace qnl;

namespace {

// ---- independent oracle ----------------------------------------------------
// Dense-state, Gaussian-elimination route to the solution-space dimension:
// materializes every state as a dense vector, contracts <a|(I x H)|b> against
// explicitly constructed Hermitian basis elements, and counts pivots by
// row-reduction. Shares nothing with the implementation path (sparse split
// supports + SVD).

Eigen::VectorXcd dense_vector(const PhasedState& st) {
    const auto dim = static_cast<Eigen::Index>(ipow(st.local_dim(), st.n_parties()));
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    for (std::size_t r = 0; r < st.support_size(); ++r)
        v(static_cast<Eigen::Index>(st.support()[r].to_index(st.local_dim()))) +=
            st.amplitude(r);
    return v;
}

std::uint64_t digits_at(const TritString& s, const std::vector<std::size_t>& parties,
                        unsigned d) {
    std::uint64_t v = 0;
    for (std::size_t p : parties) v = v * d + s[p - 1];
    return v;
}

std::size_t brute_force_nullspace_dim(const StateSet& set,
                                      const std::vector<std::size_t>& measuring) {
    const unsigned d = set.local_dim;
    const std::size_t n = set.n_parties;
    std::vector<std::size_t> spectator;
    for (std::size_t p = 1; p <= n; ++p)
        if (std::find(measuring.begin(), measuring.end(), p) == measuring.end())
            spectator.push_back(p);

    const std::size_t dim = ipow(d, measuring.size());
    const std::size_t total = ipow(d, n);

    // Spectator classes: global indices sharing all spectator digits.
    std::vector<std::vector<std::size_t>> classes(ipow(d, spectator.size()));
    std::vector<std::size_t> meas_index(total);
    for (std::size_t g = 0; g < total; ++g) {
        TritString s = TritString::from_index(g, n, d);
        classes[digits_at(s, spectator, d)].push_back(g);
        meas_index[g] = digits_at(s, measuring, d);
    }

    // Hermitian basis elements as dense dim x dim matrices.
    std::vector<Eigen::MatrixXcd> herm;
    for (std::size_t p = 0; p < dim; ++p) {
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
        h(p, p) = 1.0;
        herm.push_back(h);
    }
    for (std::size_t p = 0; p < dim; ++p) {
        for (std::size_t q = p + 1; q < dim; ++q) {
            Eigen::MatrixXcd re = Eigen::MatrixXcd::Zero(dim, dim);
            re(p, q) = 1.0;
            re(q, p) = 1.0;
            herm.push_back(re);
            Eigen::MatrixXcd im = Eigen::MatrixXcd::Zero(dim, dim);
            im(p, q) = std::complex<double>(0.0, 1.0);
            im(q, p) = std::complex<double>(0.0, -1.0);
            herm.push_back(im);
        }
    }

    std::vector<Eigen::VectorXcd> dense;
    for (const PhasedState& st : set.states) dense.push_back(dense_vector(st));

    const std::size_t m = set.states.size();
    std::vector<std::vector<double>> rows;
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            std::vector<double> re_row(herm.size()), im_row(herm.size());
            for (std::size_t h = 0; h < herm.size(); ++h) {
                std::complex<double> acc{0.0, 0.0};
                for (const auto& cls : classes)
                    for (std::size_t x : cls)
                        for (std::size_t y : cls)
                            acc += std::conj(dense[a](static_cast<Eigen::Index>(x))) *
                                   herm[h](static_cast<Eigen::Index>(meas_index[x]),
                                           static_cast<Eigen::Index>(meas_index[y])) *
                                   dense[b](static_cast<Eigen::Index>(y));
                re_row[h] = acc.real();
                im_row[h] = acc.imag();
            }
            rows.push_back(std::move(re_row));
            rows.push_back(std::move(im_row));
        }
    }

    // Row reduction with partial pivoting.
    const std::size_t cols = herm.size();
    double scale = 1.0;
    for (const auto& r : rows)
        for (double v : r) scale = std::max(scale, std::abs(v));
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
        std::size_t pivot = rank;
        for (std::size_t r = rank + 1; r < rows.size(); ++r)
            if (std::abs(rows[r][col]) > std::abs(rows[pivot][col])) pivot = r;
        if (std::abs(rows[pivot][col]) <= 1e-9 * scale) continue;
        std::swap(rows[pivot], rows[rank]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank) continue;
            const double f = rows[r][col] / rows[rank][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < cols; ++c) rows[r][c] -= f * rows[rank][c];
        }
        ++rank;
    }
    return cols - rank;
}

std::vector<std::size_t> all_but(std::size_t n, std::size_t excluded) {
    std::vector<std::size_t> side;
    for (std::size_t p = 1; p <= n; ++p)
        if (p != excluded) side.push_back(p);
    return side;
}

} // namespace

TEST_CASE("constraint system shape for the subset construction at length 3") {
    StateSet set = build_oges(build_modified_family(3));
    OplmConstraintSystem sys = build_constraint_system(set, {2, 3});
    CHECK(sys.dim == 9);
    CHECK(sys.basis.params() == 81);
    CHECK(sys.rows.rows() == 2 * (18 * 17 / 2));
    CHECK(sys.rows.cols() == 81);
    CHECK(sys.pair_labels.size() == 153);
}

TEST_CASE("identity is always feasible") {
    StateSet set = build_oges(build_modified_family(3));
    for (std::size_t i = 1; i <= 3; ++i) {
        OplmConstraintSystem sys = build_constraint_system(set, all_but(3, i));
        Eigen::VectorXd id = sys.basis.identity_direction();
        CHECK((sys.rows * id).cwiseAbs().maxCoeff() < 1e-12);
    }
    OplmConstraintSystem ghz_sys = build_constraint_system(ghz_basis_fixture(), {2, 3});
    CHECK((ghz_sys.rows * ghz_sys.basis.identity_direction()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("two-qubit product basis: free diagonal, dimension exactly 2") {
    StateSet set = product_basis_fixture();
    CHECK(brute_force_nullspace_dim(set, {2}) == 2);
    OplmConstraintSystem sys = build_constraint_system(set, {2});
    SolutionSpace sol = solve_solution_space(sys);
    CHECK(sol.dimension == 2);
    CHECK_FALSE(sol.trivial);
    // The constraints zero out the off-diagonal entries and nothing else.
    for (const Eigen::MatrixXcd& h : sol.basis) {
        CHECK(std::abs(h(0, 1)) < 1e-12);
        CHECK(std::abs(h(1, 0)) < 1e-12);
    }
}

TEST_CASE("three-qubit complement-pair basis: nontrivial on every two-qubit side") {
    StateSet set = ghz_basis_fixture();
    for (std::size_t i = 1; i <= 3; ++i) {
        const auto side = all_but(3, i);
        const std::size_t expect = brute_force_nullspace_dim(set, side);
        CHECK(expect == 2);
        SolutionSpace sol = solve_solution_space(build_constraint_system(set, side));
        CHECK(sol.dimension == expect);
        CHECK(sol.dimension > 1);
        CHECK_FALSE(sol.trivial);
    }
    CertifyVerdict verdict = certify_strong_nonlocality(set);
    CHECK_FALSE(verdict.pass);
}

TEST_CASE("subset construction at length 3: trivial on all three sides") {
    StateSet set = build_oges(build_modified_family(3));
    for (std::size_t i = 1; i <= 3; ++i) {
        const auto side = all_but(3, i);
        CHECK(brute_force_nullspace_dim(set, side) == 1);
        SolutionSpace sol = solve_solution_space(build_constraint_system(set, side));
        CHECK(sol.dimension == 1);
        CHECK(sol.trivial);
        CHECK(sol.identity_residual < 1e-9);
    }
    CertifyVerdict verdict = certify_strong_nonlocality(set);
    CHECK(verdict.pass);
    CHECK(verdict.cuts.size() == 3);
}

TEST_CASE("full modified basis at length 3 is also trivial on all sides") {
    StateSet set = build_ogeb(build_modified_family(3));
    CertifyVerdict verdict = certify_strong_nonlocality(set);
    CHECK(verdict.pass);
    for (const CutCertificate& c : verdict.cuts) {
        CHECK(c.dimension == 1);
        CHECK(c.trivial);
    }
}

TEST_CASE("phase bijection choice does not change the verdict") {
    StateSet set = build_oges(build_modified_family(3), PhaseBijection::reverse_lex_rank);
    CertifyVerdict verdict = certify_strong_nonlocality(set);
    CHECK(verdict.pass);
}

TEST_CASE("full sweep reports every orientation and keeps the verdict") {
    StateSet set = build_oges(build_modified_family(3));
    CertifyVerdict verdict = certify_strong_nonlocality(set, CertifyMode::full_sweep);
    CHECK(verdict.pass);
    CHECK(verdict.cuts.size() == 6); // 3 one-party spectators + 3 one-party measurers
}

TEST_CASE("dropping the diagonal states leaves a reported, unasserted dimension") {
    StateSet set = build_oges(build_modified_family(3));
    StateSet partial;
    partial.n_parties = set.n_parties;
    partial.local_dim = set.local_dim;
    partial.provenance = SetProvenance::external;
    for (const PhasedState& st : set.states)
        if (st.label().set_index != 3) partial.states.push_back(st);
    REQUIRE(partial.states.size() == 15);
    SolutionSpace sol = solve_solution_space(build_constraint_system(partial, {2, 3}));
    CHECK(sol.dimension >= 1); // measured, no prescribed expectation
}

TEST_CASE("oracle guards") {
    StateSet set = build_oges(build_modified_family(3));
    SUBCASE("dimension gate") {
        StateSet big = build_oges(build_modified_family(6));
        CHECK_THROWS_AS(build_constraint_system(big, all_but(6, 1)), std::invalid_argument);
        CHECK_THROWS_AS(build_constraint_system(set, {2, 3}, 8), std::invalid_argument);
        CHECK_NOTHROW(build_constraint_system(set, {2, 3}, 81));
    }
    SUBCASE("non-orthogonal input is rejected") {
        set.states.push_back(set.states.front());
        set.provenance = SetProvenance::external;
        CHECK_THROWS_AS(certify_strong_nonlocality(set), std::invalid_argument);
    }
}
