#pragma once

#include "qnl/state.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

namespace qnl {

/// Ordered cut for measurement analysis: the measuring side hosts the
/// operator, the spectator side is traced through with identity.
struct MeasuringCut {
    std::vector<std::size_t> spectator; // 1-based, sorted
    std::vector<std::size_t> measuring; // 1-based, sorted
};

MeasuringCut cut_measuring(std::size_t n_parties, std::vector<std::size_t> measuring);

/// Index of a Hermitian parameter in the real parametrization of a d x d
/// Hermitian matrix: first the d real diagonal entries, then for each
/// strictly-upper pair (p < q) in row-major order the real and imaginary
/// part of entry (p, q). Total d^2 real parameters.
struct HermitianBasis {
    std::size_t dim = 0;

    std::size_t params() const { return dim * dim; }
    std::size_t diag(std::size_t p) const { return p; }
    std::size_t upper_re(std::size_t p, std::size_t q) const { return upper(p, q); }
    std::size_t upper_im(std::size_t p, std::size_t q) const { return upper(p, q) + 1; }

    Eigen::MatrixXcd to_matrix(const Eigen::VectorXd& x) const;
    /// Unit-norm parameter vector of I/sqrt(d).
    Eigen::VectorXd identity_direction() const;

private:
    std::size_t upper(std::size_t p, std::size_t q) const {
        const std::size_t pair = p * (2 * dim - p - 1) / 2 + (q - p - 1);
        return dim + 2 * pair;
    }
};

/// The linear system "the measurement operator keeps all state pairs
/// orthogonal": for each unordered state pair, the real and imaginary part
/// of <a| (I_spectator x E) |b> = 0 as rows over the Hermitian parameters of
/// E.
struct OplmConstraintSystem {
    std::size_t n_parties = 0;
    unsigned local_dim = 3;
    MeasuringCut cut;
    std::size_t dim = 0; // local_dim^|measuring|
    HermitianBasis basis;
    Eigen::MatrixXd rows; // (2 * pairs) x dim^2
    std::vector<std::array<StateLabel, 2>> pair_labels; // rows 2i, 2i+1 come from pair i
};

inline constexpr std::size_t default_oracle_dim_limit = 81;

/// Assembles the constraint system for the given measuring side. Guarded by
/// max_dim: larger operator dimensions need an explicit override.
OplmConstraintSystem build_constraint_system(const StateSet& states,
                                             std::vector<std::size_t> measuring,
                                             std::size_t max_dim = default_oracle_dim_limit);

struct SolutionSpace {
    std::size_t dimension = 0;
    /// Orthonormal (in parameter space) Hermitian basis of the nullspace.
    std::vector<Eigen::MatrixXcd> basis;
    /// Raw parameter vectors of the basis elements.
    std::vector<Eigen::VectorXd> basis_params;
    bool trivial = false;
    /// Distance of the single basis direction from the identity direction
    /// (only meaningful when dimension == 1).
    double identity_residual = 0.0;
    double sigma_max = 0.0;
};

/// Nullspace of the stacked constraint matrix via singular value
/// decomposition; singular values <= null_tol * sigma_max count as zero.
/// The space is trivial when it is one-dimensional and spanned by the
/// identity within triviality_tol.
SolutionSpace solve_solution_space(const OplmConstraintSystem& system, double null_tol = 1e-9,
                                   double triviality_tol = 1e-9);

enum class CertifyMode { lemma3, full_sweep };

struct CutCertificate {
    std::vector<std::size_t> measuring;
    std::size_t dimension = 0;
    bool trivial = false;
    double identity_residual = 0.0;
    double runtime_ms = 0.0;
};

struct CertifyVerdict {
    /// True when the measurement operator is forced to a multiple of the
    /// identity on each of the N sides that exclude one party.
    bool pass = false;
    /// True when additionally every swept cut is trivial (full_sweep only).
    bool all_cuts_trivial = false;
    std::vector<CutCertificate> cuts;
};

/// Runs the numeric oracle. lemma3 mode solves the N cuts that measure
/// everything except one party; full_sweep additionally solves both
/// orientations of every canonical bipartition. Requires the state set to
/// verify as pairwise orthogonal.
CertifyVerdict certify_strong_nonlocality(const StateSet& states,
                                          CertifyMode mode = CertifyMode::lemma3,
                                          std::size_t max_dim = default_oracle_dim_limit,
                                          double null_tol = 1e-9, double triviality_tol = 1e-9);

} // namespace qnl
