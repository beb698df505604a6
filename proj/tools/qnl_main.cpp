#include "qnl/report.hpp"
#include "qnl/serialize.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::ordered_json;

struct Options {
    std::size_t n = 3;
    std::string variant = "standard";
    std::string mode = "lemma3";
    std::string permutations = "auto";
    std::size_t samples = 1000;
    std::uint64_t seed = qnl::default_permutation_seed;
    std::size_t max_dim = qnl::default_oracle_dim_limit;
    double tol_inner = 1e-12;
    double tol_rank = 1e-9;
    double tol_uniform = 1e-12;
    double null_tol = 1e-9;
    double triv_tol = 1e-9;
    bool timings = false;
    bool dense = false;
    std::string out_dir;
    std::string json_path;
};

std::filesystem::path resolve_out_dir(const Options& opt) {
    if (!opt.out_dir.empty()) return opt.out_dir;
    if (const char* env = std::getenv("QNL_OUT_DIR")) return env;
    return ".";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out.good()) throw std::runtime_error("cannot write " + path.string());
}

std::string list(const std::vector<std::size_t>& parties) {
    std::ostringstream s;
    for (std::size_t i = 0; i < parties.size(); ++i) s << (i ? "," : "") << parties[i];
    return s.str();
}

std::string brief(double x) {
    std::ostringstream s;
    s << std::scientific << std::setprecision(1) << x;
    return s.str();
}

/// Routes the report and the one-paragraph summary. JSON to stdout pushes
/// the summary to stderr so piped output stays clean.
int finish(const qnl::ReportResult& result, const Options& opt, const std::string& human) {
    const std::string text = result.report.dump(2) + "\n";
    if (opt.json_path == "-") {
        std::cout << text;
        std::cerr << human;
    } else {
        if (!opt.json_path.empty()) write_text_file(opt.json_path, text);
        std::cout << human;
    }
    return result.pass ? 0 : 1;
}

std::string passline(bool pass) { return pass ? "PASS\n" : "FAIL\n"; }

int run_generate(const Options& opt) {
    const qnl::SetVariant variant = qnl::set_variant_from_string(opt.variant);
    const qnl::StringFamily family = qnl::family_for(opt.n, variant);
    const qnl::StateSet set = qnl::state_set_for(opt.n, variant);

    const std::filesystem::path dir = resolve_out_dir(opt);
    std::filesystem::create_directories(dir);
    const std::string prefix = opt.variant + "-n" + std::to_string(opt.n);

    ordered_json manifest;
    manifest["schema"] = "generate-manifest/v1";
    manifest["command"] = "generate";
    manifest["n_parties"] = opt.n;
    manifest["variant"] = opt.variant;
    manifest["family_sets"] = family.set_count();
    manifest["states"] = set.states.size();
    ordered_json files = ordered_json::array();
    std::ostringstream human;

    const auto emit = [&](const std::string& kind, const std::string& name,
                          const std::string& content) {
        const std::filesystem::path path = dir / name;
        write_text_file(path, content);
        ordered_json f;
        f["kind"] = kind;
        f["path"] = path.string();
        files.push_back(std::move(f));
        human << "wrote " << path.string() << "\n";
    };

    emit("family-text", prefix + "-family.txt", qnl::family_to_text(family));
    emit("family-json", prefix + "-family.json", qnl::family_to_json(family).dump(2) + "\n");
    emit("state-set", prefix + "-states.json", qnl::state_set_to_json(set).dump(2) + "\n");
    if (opt.dense) {
        ordered_json dense = ordered_json::array();
        for (const qnl::PhasedState& state : set.states) {
            ordered_json d;
            d["set_index"] = state.label().set_index;
            d["k"] = state.label().k;
            d["vector"] = qnl::dense_interleaved(state);
            dense.push_back(std::move(d));
        }
        emit("dense-export", prefix + "-dense.json", dense.dump() + "\n");
    }

    manifest["files"] = std::move(files);
    return finish({true, std::move(manifest)}, opt, human.str());
}

int run_verify(const Options& opt) {
    qnl::VerifyOptions vo;
    if (opt.permutations == "exhaustive") vo.permutations = qnl::PermutationCheck::exhaustive();
    else if (opt.permutations == "sampled")
        vo.permutations = qnl::PermutationCheck::sampled(opt.samples, opt.seed);
    vo.tol_inner = opt.tol_inner;
    vo.tol_rank = opt.tol_rank;
    vo.tol_uniform = opt.tol_uniform;
    const qnl::ReportResult result =
        qnl::run_verify(opt.n, qnl::set_variant_from_string(opt.variant), vo);

    const ordered_json& r = result.report;
    std::ostringstream human;
    human << "verify " << r["set_id"].get<std::string>() << "\n";
    human << "  partition             " << passline(r["partition"]["pass"].get<bool>()).substr(0, 4)
          << " (" << r["partition"]["sets"] << " sets, " << r["partition"]["strings"]
          << " strings)\n";
    human << "  permutation closure   "
          << passline(r["permutation_invariance"]["pass"].get<bool>()).substr(0, 4) << " ("
          << r["permutation_invariance"]["permutations_tested"] << " permutations, "
          << r["permutation_invariance"]["mode"].get<std::string>() << ")\n";
    const auto& orth = r["orthogonality"];
    human << "  orthogonality         "
          << passline(orth["pass"].get<bool>() && orth["symbolic_only"].get<bool>()).substr(0, 4)
          << " (" << orth["pairs"] << " pairs, " << orth["numeric_pairs"]
          << " through the numeric fallback)\n";
    const auto& checks = r["checks"];
    human << "  genuine entanglement  " << passline(checks["genuine"].get<bool>()).substr(0, 4)
          << " (" << r["states"].size() << " states, every cut rank >= 2)\n";
    const auto describe = [&](const ordered_json& c) {
        std::string s = c["holds"].get<bool>() ? "holds" : "FAILS";
        s += c["asserted"].get<bool>() ? " (asserted)" : " (measured only)";
        return s;
    };
    human << "  single-party rank 3   " << describe(checks["single_party_rank_3"]) << "\n";
    human << "  one-uniformity        " << describe(checks["one_uniform"]) << "\n";
    human << passline(result.pass);
    return finish(result, opt, human.str());
}

int run_certify(const Options& opt) {
    qnl::CertifyOptions co;
    co.mode = opt.mode == "full-sweep" ? qnl::CertifyMode::full_sweep : qnl::CertifyMode::lemma3;
    co.max_dim = opt.max_dim;
    co.null_tol = opt.null_tol;
    co.triviality_tol = opt.triv_tol;
    co.timings = opt.timings;
    const qnl::ReportResult result =
        qnl::run_certify(opt.n, qnl::set_variant_from_string(opt.variant), co);

    std::ostringstream human;
    human << "certify " << result.report["set_id"].get<std::string>() << " ("
          << result.report["mode"].get<std::string>() << ")\n";
    for (const auto& cut : result.report["cuts"]) {
        human << "  measuring {" << list(cut["measuring_side"].get<std::vector<std::size_t>>())
              << "}: dimension " << cut["dimension"]
              << (cut["trivial"].get<bool>() ? ", identity only (residual " +
                                                   brief(cut["identity_residual"].get<double>()) + ")"
                                             : ", NONTRIVIAL")
              << "\n";
    }
    human << passline(result.pass);
    return finish(result, opt, human.str());
}

int run_prove(const Options& opt) {
    const qnl::ReportResult result = qnl::run_prove(opt.n);
    std::ostringstream human;
    human << "prove " << result.report["set_id"].get<std::string>() << " ("
          << result.report["case"].get<std::string>() << " script, "
          << result.report["ledger_trace"].size() << " trace rows)\n";
    for (const auto& cut : result.report["cuts"]) {
        human << "  spectator " << cut["spectator_party"] << ": " << cut["zero_pairs"]
              << " zero pairs, " << cut["diag_classes"] << " diagonal class"
              << (cut["diag_classes"].get<std::size_t>() == 1 ? "" : "es") << ", "
              << (cut["trivial"].get<bool>() ? "identity forced" : "NOT concluded") << "\n";
    }
    if (result.report.contains("error"))
        human << "  error: " << result.report["error"].get<std::string>() << "\n";
    human << passline(result.pass);
    return finish(result, opt, human.str());
}

int run_ghz(const Options& opt) {
    qnl::GhzControlOptions go;
    go.null_tol = opt.null_tol;
    go.triviality_tol = opt.triv_tol;
    go.timings = opt.timings;
    const qnl::ReportResult result = qnl::run_ghz_control(go);
    std::ostringstream human;
    human << "ghz-control\n";
    for (const auto& control : result.report["controls"]) {
        human << "  " << control["set_id"].get<std::string>() << ": dimensions";
        for (const auto& cut : control["cuts"]) human << " " << cut["dimension"];
        human << (control["as_expected"].get<bool>() ? ", as expected" : " , UNEXPECTED") << "\n";
    }
    human << passline(result.pass);
    return finish(result, opt, human.str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trit-string families, phased orthogonal bases, and certification that "
                 "orthogonality-preserving local measurements on them are trivial"};
    app.require_subcommand(1);
    Options opt;

    const auto add_common = [&](CLI::App* cmd, bool needs_n) {
        if (needs_n)
            cmd->add_option("--n", opt.n, "number of parties")
                ->required()
                ->check(CLI::Range(std::size_t{1}, std::size_t{12}));
        cmd->add_option("--json", opt.json_path,
                        "write the JSON report to this path, or '-' for stdout");
        return cmd;
    };
    const auto add_variant = [&](CLI::App* cmd) {
        cmd->add_option("--variant", opt.variant,
                        "which construction to run on (default: standard)")
            ->check(CLI::IsMember({"standard", "modified", "oges"}));
    };
    const auto add_oracle = [&](CLI::App* cmd) {
        cmd->add_option("--max-dim", opt.max_dim,
                        "largest measuring-side dimension the oracle accepts (default 81)");
        cmd->add_option("--null-tol", opt.null_tol,
                        "nullspace threshold, relative to the largest singular value (default 1e-9)");
        cmd->add_option("--triv-tol", opt.triv_tol,
                        "identity-residual threshold for a trivial space (default 1e-9)");
        cmd->add_flag("--timings", opt.timings,
                      "record per-cut runtime_ms (makes reports run-dependent)");
    };

    CLI::App* generate =
        add_common(app.add_subcommand("generate", "write family and state-set files"), true);
    add_variant(generate);
    generate->add_option("--out", opt.out_dir,
                         "output directory (default: $QNL_OUT_DIR, else the working directory)");
    generate->add_flag("--dense", opt.dense, "also write interleaved dense vectors");

    CLI::App* verify = add_common(
        app.add_subcommand("verify", "check partition, permutation closure, orthogonality, "
                                     "entanglement and uniformity"),
        true);
    add_variant(verify);
    verify->add_option("--permutations", opt.permutations,
                       "exhaustive, sampled, or auto (exhaustive up to n=6)")
        ->check(CLI::IsMember({"auto", "exhaustive", "sampled"}));
    verify->add_option("--samples", opt.samples, "sample count for sampled mode (default 1000)");
    verify->add_option("--seed", opt.seed, "seed for sampled permutations (default 1729)");
    verify->add_option("--tol-inner", opt.tol_inner,
                       "numeric inner-product tolerance scale (default 1e-12)");
    verify->add_option("--tol-rank", opt.tol_rank, "relative rank tolerance (default 1e-9)");
    verify->add_option("--tol-uniform", opt.tol_uniform,
                       "entrywise reduced-density tolerance (default 1e-12)");

    CLI::App* certify = add_common(
        app.add_subcommand("certify", "numeric oracle: solve the operator space on each cut"),
        true);
    add_variant(certify);
    certify->add_option("--mode", opt.mode, "lemma3 (the n one-spectator cuts) or full-sweep")
        ->check(CLI::IsMember({"lemma3", "full-sweep"}));
    add_oracle(certify);

    CLI::App* prove = add_common(
        app.add_subcommand("prove", "symbolic engine: scripted derivation for the subset construction"),
        true);

    CLI::App* ghz = add_common(
        app.add_subcommand("ghz-control",
                           "negative controls that must stay locally reducible"),
        false);
    add_oracle(ghz);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (opt.variant != "standard" && opt.n < 3)
            throw std::invalid_argument("variant '" + opt.variant + "' needs --n >= 3");
        if (generate->parsed()) return run_generate(opt);
        if (verify->parsed()) return run_verify(opt);
        if (certify->parsed()) return run_certify(opt);
        if (prove->parsed()) return run_prove(opt);
        if (ghz->parsed()) return run_ghz(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
