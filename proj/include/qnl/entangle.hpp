#pragma once

#include "qnl/state.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace qnl {

/// An unordered split of parties {1..N} into two nonempty sides, stored in
/// canonical form: side A is the side containing party 1, both sides sorted.
/// Which side measures or spectates is a caller-side role, not part of the
/// type.
class Bipartition {
public:
    /// Builds the split from one side; the constructor complements and, if
    /// needed, swaps so that party 1 ends up in side A.
    Bipartition(std::size_t n_parties, std::vector<std::size_t> one_side);

    std::size_t n_parties() const { return n_parties_; }
    const std::vector<std::size_t>& side_a() const { return side_a_; }
    const std::vector<std::size_t>& side_b() const { return side_b_; }

    friend bool operator==(const Bipartition&, const Bipartition&) = default;

private:
    std::size_t n_parties_ = 0;
    std::vector<std::size_t> side_a_;
    std::vector<std::size_t> side_b_;
};

/// All 2^(N-1) - 1 canonical bipartitions, ordered by the subset mask of
/// parties {2..N} joining party 1 (so {1}|rest comes first).
std::vector<Bipartition> enumerate_bipartitions(std::size_t n_parties);

/// Coefficient matrix of the state across the cut: rows indexed by side-A
/// digit strings (base-d encoding, parties in increasing order), columns by
/// side-B strings. Built from the sparse support directly.
Eigen::MatrixXcd coefficient_matrix(const PhasedState& state, const Bipartition& cut);

/// Number of singular values above rel_tol * max(sigma_max, 1).
Eigen::Index matrix_rank(const Eigen::MatrixXcd& m, double rel_tol = 1e-9);

Eigen::Index schmidt_rank(const PhasedState& state, const Bipartition& cut,
                          double rel_tol = 1e-9);

struct CutRank {
    Bipartition cut;
    Eigen::Index rank = 0;
};

struct EntanglementVerdict {
    bool genuine = false;
    std::vector<CutRank> cuts;
};

/// Genuine entanglement: Schmidt rank at least 2 across every canonical
/// bipartition.
EntanglementVerdict is_genuinely_entangled(const PhasedState& state, double rel_tol = 1e-9);

/// Single-party reduced density matrix (d x d, trace 1), accumulated from the
/// sparse support without materializing the global density matrix.
Eigen::MatrixXcd reduced_density(const PhasedState& state, std::size_t party);

struct UniformityVerdict {
    bool uniform = false;
    /// Largest entrywise deviation of any single-party reduced density from
    /// I/d.
    double max_deviation = 0.0;
    double tol = 0.0;
};

UniformityVerdict is_one_uniform(const PhasedState& state, double tol = 1e-12);

} // namespace qnl
