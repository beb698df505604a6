#include "qnl/oplm.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <unordered_map>

namespace qnl {

MeasuringCut cut_measuring(std::size_t n_parties, std::vector<std::size_t> measuring) {
    std::sort(measuring.begin(), measuring.end());
    measuring.erase(std::unique(measuring.begin(), measuring.end()), measuring.end());
    if (measuring.empty() || measuring.size() >= n_parties)
        throw std::invalid_argument("cut: measuring side must be a proper nonempty subset");
    if (measuring.front() < 1 || measuring.back() > n_parties)
        throw std::invalid_argument("cut: party labels are 1-based");
    MeasuringCut cut;
    cut.measuring = std::move(measuring);
    std::size_t next = 0;
    for (std::size_t p = 1; p <= n_parties; ++p) {
        if (next < cut.measuring.size() && cut.measuring[next] == p) ++next;
        else cut.spectator.push_back(p);
    }
    return cut;
}

Eigen::MatrixXcd HermitianBasis::to_matrix(const Eigen::VectorXd& x) const {
    Eigen::MatrixXcd m(dim, dim);
    for (std::size_t p = 0; p < dim; ++p) m(p, p) = x(static_cast<Eigen::Index>(diag(p)));
    for (std::size_t p = 0; p < dim; ++p) {
        for (std::size_t q = p + 1; q < dim; ++q) {
            const std::complex<double> v(x(static_cast<Eigen::Index>(upper_re(p, q))),
                                         x(static_cast<Eigen::Index>(upper_im(p, q))));
            m(p, q) = v;
            m(q, p) = std::conj(v);
        }
    }
    return m;
}

Eigen::VectorXd HermitianBasis::identity_direction() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(params()));
    const double v = 1.0 / std::sqrt(static_cast<double>(dim));
    for (std::size_t p = 0; p < dim; ++p) x(static_cast<Eigen::Index>(diag(p))) = v;
    return x;
}

namespace {

std::uint64_t side_index(const TritString& s, const std::vector<std::size_t>& parties,
                         unsigned d) {
    std::uint64_t v = 0;
    for (std::size_t p : parties) v = v * d + s[p - 1];
    return v;
}

// Support of a state split by the cut: spectator index -> list of
// (measuring-side index, amplitude).
using SplitSupport =
    std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint64_t, std::complex<double>>>>;

SplitSupport split_support(const PhasedState& st, const MeasuringCut& cut) {
    SplitSupport out;
    for (std::size_t r = 0; r < st.support_size(); ++r) {
        const TritString& s = st.support()[r];
        out[side_index(s, cut.spectator, st.local_dim())].emplace_back(
            side_index(s, cut.measuring, st.local_dim()), st.amplitude(r));
    }
    return out;
}

} // namespace

OplmConstraintSystem build_constraint_system(const StateSet& states,
                                             std::vector<std::size_t> measuring,
                                             std::size_t max_dim) {
    OplmConstraintSystem sys;
    sys.n_parties = states.n_parties;
    sys.local_dim = states.local_dim;
    sys.cut = cut_measuring(states.n_parties, std::move(measuring));
    sys.dim = ipow(states.local_dim, sys.cut.measuring.size());
    if (sys.dim > max_dim)
        throw std::invalid_argument(
            "constraint system: operator dimension exceeds the oracle limit; raise max_dim to "
            "override");
    sys.basis.dim = sys.dim;

    const std::size_t m = states.states.size();
    std::vector<SplitSupport> splits;
    splits.reserve(m);
    for (const PhasedState& st : states.states) splits.push_back(split_support(st, sys.cut));

    const std::size_t pairs = m < 2 ? 0 : m * (m - 1) / 2;
    sys.rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(2 * pairs),
                                     static_cast<Eigen::Index>(sys.basis.params()));
    sys.pair_labels.reserve(pairs);

    Eigen::MatrixXcd coeff(sys.dim, sys.dim);
    Eigen::Index row = 0;
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            coeff.setZero();
            // <a| (I x E) |b> = sum over support pairs with equal spectator
            // digits of conj(amp_a) * amp_b * E(sa, sb).
            for (const auto& [spec, lhs] : splits[a]) {
                auto it = splits[b].find(spec);
                if (it == splits[b].end()) continue;
                for (const auto& [sa, amp_a] : lhs)
                    for (const auto& [sb, amp_b] : it->second)
                        coeff(static_cast<Eigen::Index>(sa), static_cast<Eigen::Index>(sb)) +=
                            std::conj(amp_a) * amp_b;
            }
            auto re_row = sys.rows.row(row);
            auto im_row = sys.rows.row(row + 1);
            for (std::size_t p = 0; p < sys.dim; ++p) {
                const std::complex<double> c = coeff(static_cast<Eigen::Index>(p),
                                                     static_cast<Eigen::Index>(p));
                re_row(static_cast<Eigen::Index>(sys.basis.diag(p))) = c.real();
                im_row(static_cast<Eigen::Index>(sys.basis.diag(p))) = c.imag();
            }
            for (std::size_t p = 0; p < sys.dim; ++p) {
                for (std::size_t q = p + 1; q < sys.dim; ++q) {
                    const std::complex<double> cpq = coeff(static_cast<Eigen::Index>(p),
                                                           static_cast<Eigen::Index>(q));
                    const std::complex<double> cqp = coeff(static_cast<Eigen::Index>(q),
                                                           static_cast<Eigen::Index>(p));
                    re_row(static_cast<Eigen::Index>(sys.basis.upper_re(p, q))) =
                        (cpq + cqp).real();
                    re_row(static_cast<Eigen::Index>(sys.basis.upper_im(p, q))) =
                        -(cpq - cqp).imag();
                    im_row(static_cast<Eigen::Index>(sys.basis.upper_re(p, q))) =
                        (cpq + cqp).imag();
                    im_row(static_cast<Eigen::Index>(sys.basis.upper_im(p, q))) =
                        (cpq - cqp).real();
                }
            }
            sys.pair_labels.push_back({states.states[a].label(), states.states[b].label()});
            row += 2;
        }
    }
    return sys;
}

SolutionSpace solve_solution_space(const OplmConstraintSystem& system, double null_tol,
                                   double triviality_tol) {
    SolutionSpace out;
    const Eigen::Index n = static_cast<Eigen::Index>(system.basis.params());
    const Eigen::Index m = system.rows.rows();

    Eigen::MatrixXd V;       // right singular vectors, n x n
    Eigen::VectorXd sigma;   // singular values, descending, padded with zeros

    if (m == 0) {
        V = Eigen::MatrixXd::Identity(n, n);
        sigma = Eigen::VectorXd::Zero(n);
    } else {
        // Tall systems are QR-compressed first; R has the same singular
        // values and nullspace as the stacked matrix. Folding the rows in
        // blocks keeps the peak allocation near one n x n triangle instead
        // of a second copy of the whole system.
        Eigen::MatrixXd reduced;
        if (m > 2 * n) {
            const Eigen::Index block = std::max<Eigen::Index>(n / 2, 1024);
            Eigen::MatrixXd r = Eigen::MatrixXd::Zero(0, n);
            for (Eigen::Index start = 0; start < m; start += block) {
                const Eigen::Index count = std::min(block, m - start);
                Eigen::MatrixXd stacked(r.rows() + count, n);
                stacked.topRows(r.rows()) = r;
                stacked.bottomRows(count) = system.rows.middleRows(start, count);
                Eigen::HouseholderQR<Eigen::Ref<Eigen::MatrixXd>> qr(stacked);
                const Eigen::Index keep = std::min(n, stacked.rows());
                r = qr.matrixQR().topRows(keep).triangularView<Eigen::Upper>();
            }
            reduced = std::move(r);
        } else {
            reduced = system.rows;
        }
        Eigen::BDCSVD<Eigen::MatrixXd> svd(reduced, Eigen::ComputeFullV);
        V = svd.matrixV();
        sigma = Eigen::VectorXd::Zero(n);
        sigma.head(svd.singularValues().size()) = svd.singularValues();
    }

    out.sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
    const double cutoff = null_tol * out.sigma_max;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (sigma(i) <= cutoff) {
            out.basis_params.push_back(V.col(i));
            out.basis.push_back(system.basis.to_matrix(V.col(i)));
        }
    }
    out.dimension = out.basis.size();

    if (out.dimension == 1) {
        const Eigen::VectorXd id = system.basis.identity_direction();
        const Eigen::VectorXd& v = out.basis_params[0];
        out.identity_residual = (v - v.dot(id) * id).norm();
        out.trivial = out.identity_residual < triviality_tol;
    }
    return out;
}

CertifyVerdict certify_strong_nonlocality(const StateSet& states, CertifyMode mode,
                                          std::size_t max_dim, double null_tol,
                                          double triviality_tol) {
    OrthogonalityVerdict orth = verify_orthogonal_basis(states);
    if (!orth.pass)
        throw std::invalid_argument(
            "certify: state set is not pairwise orthogonal; constraints would be vacuous");

    const std::size_t n = states.n_parties;
    std::vector<std::vector<std::size_t>> sides;
    for (std::size_t i = 1; i <= n; ++i) {
        std::vector<std::size_t> side;
        for (std::size_t p = 1; p <= n; ++p)
            if (p != i) side.push_back(p);
        sides.push_back(std::move(side));
    }
    const std::size_t lemma3_count = sides.size();

    if (mode == CertifyMode::full_sweep) {
        auto add_unique = [&](std::vector<std::size_t> side) {
            if (std::find(sides.begin(), sides.end(), side) == sides.end())
                sides.push_back(std::move(side));
        };
        const std::uint64_t masks = std::uint64_t{1} << (n - 1);
        for (std::uint64_t mask = 0; mask + 1 < masks; ++mask) {
            std::vector<std::size_t> a{1};
            std::vector<std::size_t> b;
            for (std::size_t p = 2; p <= n; ++p) {
                if (mask & (std::uint64_t{1} << (p - 2))) a.push_back(p);
                else b.push_back(p);
            }
            add_unique(std::move(a));
            add_unique(std::move(b));
        }
    }

    CertifyVerdict verdict;
    verdict.pass = true;
    verdict.all_cuts_trivial = true;
    for (std::size_t i = 0; i < sides.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        OplmConstraintSystem sys = build_constraint_system(states, sides[i], max_dim);
        SolutionSpace sol = solve_solution_space(sys, null_tol, triviality_tol);
        const auto stop = std::chrono::steady_clock::now();
        CutCertificate cert;
        cert.measuring = sides[i];
        cert.dimension = sol.dimension;
        cert.trivial = sol.trivial;
        cert.identity_residual = sol.identity_residual;
        cert.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        if (!sol.trivial) {
            verdict.all_cuts_trivial = false;
            if (i < lemma3_count) verdict.pass = false;
        }
        verdict.cuts.push_back(std::move(cert));
    }
    return verdict;
}

} // namespace qnl
