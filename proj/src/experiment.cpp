#include "experiment.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "band_builder.hpp"
#include "baselines.hpp"
#include "degenerate.hpp"
#include "elrdf.hpp"
#include "io.hpp"
#include "parallel.hpp"

namespace bandtest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

struct KeyValue {
    std::string key;
    std::string value;
    std::size_t line_no;
};

double parse_number(const KeyValue& kv) {
    const std::string& v = kv.value;
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ParseError("line " + std::to_string(kv.line_no) + ": bad number '" + v + "' for " +
                         kv.key);
    }
    return out;
}

std::size_t parse_count(const KeyValue& kv, std::size_t min_value) {
    const double v = parse_number(kv);
    if (v < static_cast<double>(min_value) || v != std::floor(v) || v > 1e15) {
        throw RangeError("line " + std::to_string(kv.line_no) + ": " + kv.key + " must be an integer >= " +
                         std::to_string(min_value));
    }
    return static_cast<std::size_t>(v);
}

bool parse_bool(const KeyValue& kv) {
    if (kv.value == "true" || kv.value == "1") return true;
    if (kv.value == "false" || kv.value == "0") return false;
    throw ParseError("line " + std::to_string(kv.line_no) + ": " + kv.key +
                     " expects true/false");
}

std::vector<MixtureComponent> parse_mixture(const KeyValue& kv) {
    std::vector<MixtureComponent> out;
    std::istringstream stream(kv.value);
    std::string part;
    while (std::getline(stream, part, ';')) {
        std::istringstream fields(part);
        std::string tok;
        double vals[3];
        for (int i = 0; i < 3; ++i) {
            if (!std::getline(fields, tok, ':')) {
                throw ParseError("line " + std::to_string(kv.line_no) +
                                 ": mixture component needs weight:mean:sd");
            }
            try {
                vals[i] = std::stod(tok);
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(kv.line_no) +
                                 ": bad mixture number '" + tok + "'");
            }
        }
        out.push_back({vals[0], vals[1], vals[2]});
    }
    if (out.empty()) {
        throw ParseError("line " + std::to_string(kv.line_no) + ": empty mixture spec");
    }
    return out;
}

}  // namespace

std::string test_kind_name(TestKind kind) {
    switch (kind) {
        case TestKind::Elrdf: return "elrdf";
        case TestKind::RobustKs: return "rks";
        case TestKind::RobustCvm: return "rcvm";
        case TestKind::Elrm: return "elrm";
        case TestKind::Degenerate: return "degen";
    }
    return "unknown";
}

RocExperimentConfig parse_roc_config(const std::string& text) {
    RocExperimentConfig cfg;
    std::istringstream stream(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ParseError("line " + std::to_string(line_no) + ": expected key=value");
        }
        const KeyValue kv{trim(body.substr(0, eq)), trim(body.substr(eq + 1)), line_no};
        if (kv.key.empty()) {
            throw ParseError("line " + std::to_string(line_no) + ": empty key");
        }

        if (kv.key == "test") {
            if (kv.value == "elrdf") cfg.test = TestKind::Elrdf;
            else if (kv.value == "rks") cfg.test = TestKind::RobustKs;
            else if (kv.value == "rcvm") cfg.test = TestKind::RobustCvm;
            else if (kv.value == "elrm") cfg.test = TestKind::Elrm;
            else if (kv.value == "degen") cfg.test = TestKind::Degenerate;
            else throw ParseError("line " + std::to_string(line_no) + ": unknown test '" + kv.value + "'");
        } else if (kv.key == "n") {
            cfg.n = parse_count(kv, 1);
        } else if (kv.key == "trials") {
            cfg.trials = parse_count(kv, 1);
        } else if (kv.key == "seed") {
            const double v = parse_number(kv);
            if (v < 0 || v != std::floor(v)) {
                throw RangeError("line " + std::to_string(line_no) + ": seed must be a nonnegative integer");
            }
            cfg.seed = static_cast<std::uint64_t>(v);
        } else if (kv.key == "tol") {
            cfg.tol = parse_number(kv);
            if (!(cfg.tol > 0.0)) {
                throw RangeError("line " + std::to_string(line_no) + ": tol must be positive");
            }
        } else if (kv.key == "thresholds.count") {
            cfg.threshold_count = parse_count(kv, 2);
        } else if (kv.key == "noise.kind") {
            if (kv.value == "gaussian") cfg.noise.kind = NoiseModel::Kind::Gaussian;
            else if (kv.value == "mixture") cfg.noise.kind = NoiseModel::Kind::Mixture;
            else if (kv.value == "block") cfg.noise.kind = NoiseModel::Kind::BlockNonstationary;
            else throw ParseError("line " + std::to_string(line_no) + ": unknown noise kind '" + kv.value + "'");
        } else if (kv.key == "noise.mean") {
            cfg.noise.mean = parse_number(kv);
        } else if (kv.key == "noise.sd") {
            cfg.noise.sd = parse_number(kv);
        } else if (kv.key == "noise.mixture") {
            cfg.noise.mixture = parse_mixture(kv);
        } else if (kv.key == "noise.block_len") {
            cfg.noise.block_len = parse_count(kv, 1);
        } else if (kv.key == "noise.sd_min") {
            cfg.noise.sd_min = parse_number(kv);
        } else if (kv.key == "noise.sd_max") {
            cfg.noise.sd_max = parse_number(kv);
        } else if (kv.key == "channel.fading") {
            if (kv.value == "slow") cfg.channel.fading = ChannelModel::Fading::Slow;
            else if (kv.value == "fast") cfg.channel.fading = ChannelModel::Fading::Fast;
            else throw ParseError("line " + std::to_string(line_no) + ": unknown fading '" + kv.value + "'");
        } else if (kv.key == "channel.h") {
            cfg.channel.gain = parse_number(kv);
        } else if (kv.key == "channel.low") {
            cfg.channel.low = parse_number(kv);
        } else if (kv.key == "channel.high") {
            cfg.channel.high = parse_number(kv);
        } else if (kv.key == "band.file") {
            cfg.band_file = kv.value;
        } else if (kv.key == "band.group_size") {
            cfg.band_group_size = parse_count(kv, 1);
        } else if (kv.key == "band.samples") {
            cfg.band_samples = parse_count(kv, 2);
        } else if (kv.key == "degen.groups") {
            cfg.degen_groups = parse_count(kv, 1);
        } else if (kv.key == "degen.group_size") {
            cfg.degen_group_size = parse_count(kv, 1);
        } else if (kv.key == "degen.two_sided") {
            cfg.degen_two_sided = parse_bool(kv);
        } else if (kv.key == "degen.null_samples") {
            cfg.degen_null_samples = parse_count(kv, 2);
        } else if (kv.key == "elrm.lower") {
            cfg.elrm_lower = parse_number(kv);
        } else if (kv.key == "elrm.upper") {
            cfg.elrm_upper = parse_number(kv);
        } else {
            throw bandtest::UnknownKey("line " + std::to_string(line_no) + ": unknown key '" +
                                       kv.key + "'");
        }
    }
    cfg.noise.validate();
    cfg.channel.validate();
    if (cfg.test == TestKind::Degenerate && cfg.degen_groups * cfg.degen_group_size != cfg.n) {
        throw RangeError("degen.groups * degen.group_size must equal n");
    }
    return cfg;
}

RocExperimentConfig load_roc_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_roc_config(buf.str());
}

RocExperimentResult run_roc_experiment(const RocExperimentConfig& cfg, unsigned threads) {
    NoiseModel noise = cfg.noise;
    noise.seed = cfg.seed;

    StatisticFn statistic;
    std::optional<CdfBand> band;
    std::optional<NullCdf> null_cdf;

    if (cfg.test == TestKind::Degenerate) {
        null_cdf = NullCdf::from_ecdf(
            ecdf_from_raw(gen_noise(noise, cfg.degen_null_samples, kNullCdfStream)));
        const std::size_t k = cfg.degen_groups;
        const std::size_t m = cfg.degen_group_size;
        const bool two_sided = cfg.degen_two_sided;
        const double reference = std::log1p(1.0 / static_cast<double>(m));
        const std::uint64_t seed = cfg.seed;
        statistic = [&null_cdf, k, m, two_sided, reference, seed](const std::vector<double>& y,
                                                                  std::uint64_t stream) {
            Rng rng(seed, stream ^ 0x9E3779B97F4A7C15ULL);
            const GroupingPlan plan = GroupingPlan::random(k, m, rng);
            const double stat = grouped_statistic(y, *null_cdf, plan);
            return two_sided ? std::abs(stat - reference) : stat;
        };
    } else if (cfg.test == TestKind::Elrm) {
        const double lo = cfg.elrm_lower;
        const double hi = cfg.elrm_upper;
        statistic = [lo, hi](const std::vector<double>& y, std::uint64_t) {
            const SortedSample s = canonicalize_sample(y, TiePolicy::Jitter);
            try {
                return elrm_statistic(s, {[](double x) { return x; }, lo, hi});
            } catch (const InfeasibleMoment&) {
                return kInf;  // empty feasible set: zero likelihood
            }
        };
    } else {
        if (!cfg.band_file.empty()) {
            band = load_band_csv(cfg.band_file);
        } else {
            band = build_band(gen_noise(noise, cfg.band_samples, kBandStream),
                              cfg.band_group_size)
                       .band;
        }
        const double tol = cfg.tol;
        const TestKind kind = cfg.test;
        statistic = [&band, tol, kind](const std::vector<double>& y, std::uint64_t) {
            const SortedSample s = canonicalize_sample(y, TiePolicy::Jitter);
            try {
                switch (kind) {
                    case TestKind::Elrdf: return solve_elrdf(s, *band, tol).statistic;
                    case TestKind::RobustKs: return robust_ks_statistic(s, *band);
                    default: return robust_cvm_statistic(s, *band);
                }
            } catch (const InfeasibleBand&) {
                return kInf;  // empty feasible set: zero likelihood
            }
        };
    }

    const ChannelModel channel = cfg.channel;
    const std::size_t n = cfg.n;
    SampleGenerator h0_gen = [&noise, &channel, n](std::uint64_t t) {
        return gen_observation(channel, noise, n, Hypothesis::H0, trial_stream(0, t));
    };
    SampleGenerator h1_gen = [&noise, &channel, n](std::uint64_t t) {
        return gen_observation(channel, noise, n, Hypothesis::H1, trial_stream(1, t));
    };

    RocExperimentResult result;
    result.curve = sweep_roc(statistic, h0_gen, h1_gen, cfg.trials, {}, cfg.threshold_count,
                             threads);
    result.test = cfg.test;
    result.seed = cfg.seed;
    return result;
}

void write_roc_csv(const RocCurve& curve, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write: " + path);
    out << "threshold,pf,pd\n";
    for (const auto& p : curve.points) {
        out << format_double(p.threshold) << ',' << format_double(p.pf) << ','
            << format_double(p.pd) << '\n';
    }
    if (!out) throw IoError("failed writing: " + path);
}

void write_summary_csv(const RocExperimentResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write: " + path);
    out << "test,auc,flipped,seed\n";
    out << test_kind_name(result.test) << ',' << format_double(result.curve.auc) << ','
        << (result.curve.flipped ? 1 : 0) << ',' << result.seed << '\n';
    if (!out) throw IoError("failed writing: " + path);
}

NormalityStudyResult normality_study(const NoiseModel& nonstationary,
                                     std::span<const std::size_t> sizes, std::size_t replications,
                                     std::uint64_t seed, unsigned threads) {
    if (replications < 1) throw RangeError("replications must be >= 1");
    NoiseModel nonstat = nonstationary;
    nonstat.seed = seed;
    NoiseModel gaussian;
    gaussian.kind = NoiseModel::Kind::Gaussian;
    gaussian.mean = 0.0;
    gaussian.sd = 1.0;
    gaussian.seed = seed;

    NormalityStudyResult result;
    result.sizes.assign(sizes.begin(), sizes.end());
    result.gaussian.resize(sizes.size());
    result.nonstationary.resize(sizes.size());
    for (std::size_t si = 0; si < sizes.size(); ++si) {
        const std::size_t n = sizes[si];
        if (n < 2) throw RangeError("normality study needs sizes >= 2");
        auto& gcol = result.gaussian[si];
        auto& bcol = result.nonstationary[si];
        gcol.resize(replications);
        bcol.resize(replications);
        parallel_for(replications, threads, [&](std::size_t r) {
            const std::uint64_t g_stream = ((2 * si) << 32) + r;
            const std::uint64_t b_stream = ((2 * si + 1) << 32) + r;
            gcol[r] = ks_normality_statistic(gen_noise(gaussian, n, g_stream));
            bcol[r] = ks_normality_statistic(gen_noise(nonstat, n, b_stream));
        });
        std::sort(gcol.begin(), gcol.end());
        std::sort(bcol.begin(), bcol.end());
    }
    return result;
}

void write_normality_study_csv(const NormalityStudyResult& result, const std::string& prefix) {
    for (std::size_t si = 0; si < result.sizes.size(); ++si) {
        const std::string path = prefix + "_" + std::to_string(result.sizes[si]) + ".csv";
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write: " + path);
        out << "gaussian,nonstationary\n";
        for (std::size_t r = 0; r < result.gaussian[si].size(); ++r) {
            out << format_double(result.gaussian[si][r]) << ','
                << format_double(result.nonstationary[si][r]) << '\n';
        }
        if (!out) throw IoError("failed writing: " + path);
    }
}

}  // namespace bandtest
