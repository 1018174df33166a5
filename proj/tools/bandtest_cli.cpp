// Command-line front end for the bandtest shared library.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bandtest.h"

namespace {

int exit_code_for(bandtest_status status) {
    if (status == BANDTEST_OK) return 0;
    if (status == BANDTEST_ERR_INFEASIBLE_BAND) return 2;
    return 1;
}

int report(bandtest_status status) {
    if (status == BANDTEST_OK) return 0;
    const char* detail = bandtest_last_error();
    std::fprintf(stderr, "bandtest: %s%s%s\n", bandtest_strerror(status),
                 detail[0] ? ": " : "", detail);
    return exit_code_for(status);
}

std::string fmt(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

using SampleHandle = std::unique_ptr<bandtest_sample, decltype(&bandtest_sample_destroy)>;
using BandHandle = std::unique_ptr<bandtest_band, decltype(&bandtest_band_destroy)>;
using NullHandle = std::unique_ptr<bandtest_null_cdf, decltype(&bandtest_null_cdf_destroy)>;
using ConfigHandle = std::unique_ptr<bandtest_roc_config, decltype(&bandtest_roc_config_destroy)>;
using RocHandle = std::unique_ptr<bandtest_roc, decltype(&bandtest_roc_destroy)>;
using StudyHandle = std::unique_ptr<bandtest_study, decltype(&bandtest_study_destroy)>;

struct CommonArgs {
    std::string sample_path;
    std::string band_path;
    std::string ties = "error";
    double tol = 1e-8;

    bandtest_tie_policy policy() const {
        return ties == "jitter" ? BANDTEST_TIE_JITTER : BANDTEST_TIE_ERROR;
    }
};

int load_sample(const CommonArgs& args, SampleHandle& out) {
    bandtest_sample* raw = nullptr;
    const auto st = bandtest_sample_load(args.sample_path.c_str(), args.policy(), &raw);
    out.reset(raw);
    return report(st);
}

int load_band(const CommonArgs& args, BandHandle& out) {
    bandtest_band* raw = nullptr;
    const auto st = bandtest_band_load(args.band_path.c_str(), &raw);
    out.reset(raw);
    return report(st);
}

void add_sample_flags(CLI::App* cmd, CommonArgs& args, bool with_band) {
    cmd->add_option("--sample", args.sample_path, "sample file, one value per line")->required();
    if (with_band) cmd->add_option("--band", args.band_path, "band CSV file")->required();
    cmd->add_option("--ties", args.ties, "tie policy: error|jitter")
        ->check(CLI::IsMember({"error", "jitter"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"empirical likelihood ratio tests with CDF-band constraints"};
    app.require_subcommand(1);

    CommonArgs args;
    double eta = 0.0;
    double gamma = 0.0;
    double threshold = 0.0;
    bool has_eta = false, has_gamma = false, has_threshold = false;
    double elrm_lower = 0.0, elrm_upper = 0.0;
    std::size_t groups = 1, group_size = 10;
    std::uint64_t seed = 0;
    bool two_sided = false;
    std::string null_spec, config_path, output_dir = ".", out_path, input_path;
    std::string prefix = "normality_study";
    std::string sizes_arg = "10,50,100,500";
    std::size_t reps = 10000;

    auto* elrdf = app.add_subcommand("elrdf", "ELRDF statistic and decision");
    add_sample_flags(elrdf, args, true);
    elrdf->add_option("--eta", eta, "decision threshold (default 0)");
    elrdf->add_option("--tol", args.tol, "solver tolerance");

    auto* degen = app.add_subcommand("degen", "grouped statistic under a fully known null");
    add_sample_flags(degen, args, false);
    degen->add_option("--null", null_spec, "normal:<mean>:<sd> | uniform:<a>:<b> | ecdf:<file>")
        ->required();
    degen->add_option("--groups", groups, "number of groups")->required();
    degen->add_option("--group-size", group_size, "samples per group")->required();
    degen->add_flag("--two-sided", two_sided, "fold the statistic around log(1+1/m)");
    degen->add_option("--seed", seed, "grouping seed");

    auto* rks = app.add_subcommand("rks", "robust Kolmogorov-Smirnov statistic");
    add_sample_flags(rks, args, true);
    rks->add_option("--gamma", gamma, "decide H1 iff sqrt(n)*D_n > gamma")
        ->each([&](const std::string&) { has_gamma = true; });

    auto* rcvm = app.add_subcommand("rcvm", "robust Cramer-von Mises statistic");
    add_sample_flags(rcvm, args, true);
    rcvm->add_option("--threshold", threshold, "decide H1 iff statistic > threshold")
        ->each([&](const std::string&) { has_threshold = true; });

    auto* elrm = app.add_subcommand("elrm", "empirical likelihood with a mean interval");
    add_sample_flags(elrm, args, false);
    elrm->add_option("--lower", elrm_lower, "moment lower bound")->required();
    elrm->add_option("--upper", elrm_upper, "moment upper bound")->required();
    elrm->add_option("--eta", eta, "decision threshold")
        ->each([&](const std::string&) { has_eta = true; });

    auto* normality = app.add_subcommand("normality", "KS statistic against a fitted Gaussian");
    add_sample_flags(normality, args, false);
    normality->add_option("--threshold", threshold, "decide H1 iff statistic > threshold")
        ->each([&](const std::string&) { has_threshold = true; });

    auto* band = app.add_subcommand("band", "CDF band utilities");
    band->require_subcommand(1);
    auto* band_build = band->add_subcommand("build", "build a band from grouped samples");
    band_build->add_option("--input", input_path, "sample file")->required();
    band_build->add_option("--group-size", group_size, "samples per group")->required();
    band_build->add_option("--output", out_path, "output band CSV")->required();
    auto* band_width = band->add_subcommand("width", "emit knot,width CSV");
    band_width->add_option("--band", args.band_path, "band CSV file")->required();

    auto* roc = app.add_subcommand("roc", "Monte-Carlo ROC experiment");
    roc->add_option("--config", config_path, "key=value experiment config")->required();
    roc->add_option("--output-dir", output_dir, "directory for roc.csv and summary.csv");

    auto* study = app.add_subcommand("normality-study",
                                     "normality statistic CDFs: Gaussian vs nonstationary");
    study->add_option("--sizes", sizes_arg, "comma-separated sample sizes");
    study->add_option("--config", config_path, "config supplying the noise model and seed");
    study->add_option("--reps", reps, "replications per size");
    study->add_option("--output", prefix, "output file prefix");

    CLI11_PARSE(app, argc, argv);

    if (elrdf->parsed()) {
        SampleHandle sample(nullptr, bandtest_sample_destroy);
        BandHandle bandh(nullptr, bandtest_band_destroy);
        if (int rc = load_sample(args, sample)) return rc;
        if (int rc = load_band(args, bandh)) return rc;
        bandtest_elrdf_result result{};
        if (int rc = report(bandtest_elrdf_solve(sample.get(), bandh.get(), args.tol, &result,
                                                 nullptr))) {
            return rc;
        }
        std::printf("%s,%s,%d,%s\n", fmt(result.statistic).c_str(),
                    bandtest_decide(result.statistic, eta) ? "H1" : "H0", result.iterations,
                    fmt(result.kkt_residual).c_str());
        return 0;
    }

    if (degen->parsed()) {
        SampleHandle sample(nullptr, bandtest_sample_destroy);
        if (int rc = load_sample(args, sample)) return rc;
        NullHandle null(nullptr, bandtest_null_cdf_destroy);
        bandtest_null_cdf* raw_null = nullptr;
        if (int rc = report(bandtest_null_cdf_parse(null_spec.c_str(), &raw_null))) return rc;
        null.reset(raw_null);
        double stat = 0.0;
        if (int rc = report(bandtest_grouped_statistic(
                bandtest_sample_values(sample.get()), bandtest_sample_size(sample.get()),
                null.get(), groups, group_size, seed, two_sided ? 1 : 0, &stat))) {
            return rc;
        }
        const double reference = std::log1p(1.0 / static_cast<double>(group_size));
        std::printf("%s,%s\n", fmt(stat).c_str(), fmt(reference).c_str());
        return 0;
    }

    if (rks->parsed() || rcvm->parsed()) {
        SampleHandle sample(nullptr, bandtest_sample_destroy);
        BandHandle bandh(nullptr, bandtest_band_destroy);
        if (int rc = load_sample(args, sample)) return rc;
        if (int rc = load_band(args, bandh)) return rc;
        double stat = 0.0;
        const auto st = rks->parsed()
                            ? bandtest_robust_ks(sample.get(), bandh.get(), &stat)
                            : bandtest_robust_cvm(sample.get(), bandh.get(), &stat);
        if (int rc = report(st)) return rc;
        if (rks->parsed() && has_gamma) {
            int decision = 0;
            if (int rc = report(bandtest_ks_decide(stat, bandtest_sample_size(sample.get()), gamma,
                                                   &decision))) {
                return rc;
            }
            std::printf("%s,%s\n", fmt(stat).c_str(), decision ? "H1" : "H0");
        } else if (rcvm->parsed() && has_threshold) {
            std::printf("%s,%s\n", fmt(stat).c_str(),
                        bandtest_decide(stat, threshold) ? "H1" : "H0");
        } else {
            std::printf("%s\n", fmt(stat).c_str());
        }
        return 0;
    }

    if (elrm->parsed()) {
        SampleHandle sample(nullptr, bandtest_sample_destroy);
        if (int rc = load_sample(args, sample)) return rc;
        double stat = 0.0;
        if (int rc = report(bandtest_elrm(sample.get(), nullptr, nullptr, elrm_lower, elrm_upper,
                                          &stat))) {
            return rc;
        }
        if (has_eta) {
            std::printf("%s,%s\n", fmt(stat).c_str(), bandtest_decide(stat, eta) ? "H1" : "H0");
        } else {
            std::printf("%s\n", fmt(stat).c_str());
        }
        return 0;
    }

    if (normality->parsed()) {
        SampleHandle sample(nullptr, bandtest_sample_destroy);
        if (int rc = load_sample(args, sample)) return rc;
        double stat = 0.0;
        if (int rc = report(bandtest_ks_normality(bandtest_sample_values(sample.get()),
                                                  bandtest_sample_size(sample.get()), &stat))) {
            return rc;
        }
        if (has_threshold) {
            std::printf("%s,%s\n", fmt(stat).c_str(),
                        bandtest_decide(stat, threshold) ? "H1" : "H0");
        } else {
            std::printf("%s\n", fmt(stat).c_str());
        }
        return 0;
    }

    if (band_build->parsed()) {
        SampleHandle sample(nullptr, bandtest_sample_destroy);
        CommonArgs in_args;
        in_args.sample_path = input_path;
        in_args.ties = "jitter";  // band groups tolerate repeats
        if (int rc = load_sample(in_args, sample)) return rc;
        bandtest_band* raw_band = nullptr;
        size_t discarded = 0;
        if (int rc = report(bandtest_band_build(bandtest_sample_values(sample.get()),
                                                bandtest_sample_size(sample.get()), group_size,
                                                &raw_band, &discarded))) {
            return rc;
        }
        BandHandle bandh(raw_band, bandtest_band_destroy);
        if (discarded > 0) {
            std::fprintf(stderr, "bandtest: warning: discarded %zu trailing samples\n", discarded);
        }
        return report(bandtest_band_save(bandh.get(), out_path.c_str()));
    }

    if (band_width->parsed()) {
        BandHandle bandh(nullptr, bandtest_band_destroy);
        if (int rc = load_band(args, bandh)) return rc;
        const size_t count = bandtest_band_knot_count(bandh.get());
        std::vector<double> knots(count), lower(count), upper(count);
        if (int rc = report(bandtest_band_profile(bandh.get(), knots.data(), lower.data(),
                                                  upper.data()))) {
            return rc;
        }
        std::printf("knot,width\n");
        for (size_t i = 0; i < count; ++i) {
            std::printf("%s,%s\n", fmt(knots[i]).c_str(), fmt(upper[i] - lower[i]).c_str());
        }
        return 0;
    }

    if (roc->parsed()) {
        ConfigHandle config(nullptr, bandtest_roc_config_destroy);
        bandtest_roc_config* raw_cfg = nullptr;
        if (int rc = report(bandtest_roc_config_load(config_path.c_str(), &raw_cfg))) return rc;
        config.reset(raw_cfg);
        bandtest_roc* raw_roc = nullptr;
        if (int rc = report(bandtest_roc_run(config.get(), 0, &raw_roc))) return rc;
        RocHandle roch(raw_roc, bandtest_roc_destroy);
        const std::string roc_path = output_dir + "/roc.csv";
        const std::string summary_path = output_dir + "/summary.csv";
        if (int rc = report(bandtest_roc_write_csv(roch.get(), roc_path.c_str()))) return rc;
        return report(bandtest_roc_write_summary(roch.get(), summary_path.c_str()));
    }

    if (study->parsed()) {
        ConfigHandle config(nullptr, bandtest_roc_config_destroy);
        bandtest_roc_config* raw_cfg = nullptr;
        const auto st = config_path.empty() ? bandtest_roc_config_parse("", &raw_cfg)
                                            : bandtest_roc_config_load(config_path.c_str(),
                                                                       &raw_cfg);
        if (int rc = report(st)) return rc;
        config.reset(raw_cfg);

        std::vector<size_t> sizes;
        std::size_t pos = 0;
        while (pos <= sizes_arg.size()) {
            const auto comma = sizes_arg.find(',', pos);
            const std::string tok =
                sizes_arg.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            if (!tok.empty()) {
                std::size_t value = 0;
                auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
                if (ec != std::errc{} || ptr != tok.data() + tok.size() || value < 2) {
                    std::fprintf(stderr, "bandtest: bad size '%s'\n", tok.c_str());
                    return 1;
                }
                sizes.push_back(value);
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (sizes.empty()) {
            std::fprintf(stderr, "bandtest: --sizes is empty\n");
            return 1;
        }

        bandtest_study* raw_study = nullptr;
        if (int rc = report(bandtest_normality_study_run(config.get(), sizes.data(), sizes.size(),
                                                         reps, 0, &raw_study))) {
            return rc;
        }
        StudyHandle studyh(raw_study, bandtest_study_destroy);
        return report(bandtest_normality_study_write(studyh.get(), prefix.c_str()));
    }

    return 0;
}
