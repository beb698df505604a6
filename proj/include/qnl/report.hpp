#pragma once

#include "qnl/family.hpp"
#include "qnl/oplm.hpp"
#include "qnl/state.hpp"

#include "json.hpp"

#include <optional>
#include <string>

namespace qnl {

/// Which constructed set a command operates on.
enum class SetVariant { standard, modified, oges };

std::string to_string(SetVariant v);
SetVariant set_variant_from_string(const std::string& s);

/// The family a variant is built from (standard or modified).
StringFamily family_for(std::size_t n_parties, SetVariant variant);
/// The state set a variant names (standard/modified OGEB or the OGES).
StateSet state_set_for(std::size_t n_parties, SetVariant variant);

/// Verdict plus the machine-readable report. Reports carry no timestamps or
/// timings unless asked, so identical inputs dump byte-identical JSON.
struct ReportResult {
    bool pass = false;
    nlohmann::ordered_json report;
};

struct VerifyOptions {
    /// Defaults to exhaustive for n <= 6, 1000 seeded samples above.
    std::optional<PermutationCheck> permutations;
    double tol_inner = 1e-12;
    double tol_rank = 1e-9;
    double tol_uniform = 1e-12;
};

/// Partition + permutation invariance of the family, pairwise orthogonality,
/// Schmidt rank over every canonical cut, one-uniformity. Rank 3 on
/// single-party cuts and one-uniformity gate the verdict for the standard
/// variant; for the others they are measured and reported only.
ReportResult run_verify(std::size_t n_parties, SetVariant variant,
                        const VerifyOptions& options = {});

struct CertifyOptions {
    CertifyMode mode = CertifyMode::lemma3;
    std::size_t max_dim = default_oracle_dim_limit;
    double null_tol = 1e-9;
    double triviality_tol = 1e-9;
    /// Emit per-cut runtime_ms. Off by default: timings vary run to run and
    /// would break byte-identical reports.
    bool timings = false;
};

/// Numeric oracle over the variant's state set.
ReportResult run_certify(std::size_t n_parties, SetVariant variant,
                         const CertifyOptions& options = {});

/// Symbolic derivation over the OGES: scripted lemma applications, one
/// ledger per spectator party, trace included from the first cut.
ReportResult run_prove(std::size_t n_parties);

struct GhzControlOptions {
    double null_tol = 1e-9;
    double triviality_tol = 1e-9;
    bool timings = false;
};

/// Negative controls: the three-qubit GHZ basis must leave a nontrivial
/// solution space on every cut, the two-qubit product basis exactly the free
/// diagonal. Passes when both behave as predicted.
ReportResult run_ghz_control(const GhzControlOptions& options = {});

} // namespace qnl
