#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pfkrylov/estimate_io.hpp"
#include "pfkrylov/io.hpp"
#include "pfkrylov/parallel.hpp"
#include "pfkrylov/plot.hpp"
#include "pfkrylov/systems.hpp"

using namespace pfk;

namespace {

struct RunConfig {
    std::string method = "arnoldi";
    std::string kernel = "gaussian";
    std::string bandwidth = "median";
    int S = 1;
    int N = 1;
    std::string gamma;  // required iff method == sia; defaults to 1+1i there
    int delay = 1;
    bool normalize = true;
    int train_start = 0;
    int score_start = 1;
    int score_end = -1;  // -1: score to the end of the series
    std::uint64_t seed = 0;
};

void apply_config_file(const std::string& path, RunConfig& cfg) {
    for (const auto& [key, value] : read_config_kv(path)) {
        if (key == "method") {
            cfg.method = value;
        } else if (key == "kernel") {
            cfg.kernel = value;
        } else if (key == "bandwidth") {
            cfg.bandwidth = value;
        } else if (key == "s") {
            cfg.S = std::stoi(value);
        } else if (key == "n") {
            cfg.N = std::stoi(value);
        } else if (key == "gamma") {
            cfg.gamma = value;
        } else if (key == "delay") {
            cfg.delay = std::stoi(value);
        } else if (key == "normalize") {
            cfg.normalize = value == "1" || value == "true";
        } else if (key == "train_start") {
            cfg.train_start = std::stoi(value);
        } else if (key == "score_start") {
            cfg.score_start = std::stoi(value);
        } else if (key == "score_end") {
            cfg.score_end = std::stoi(value);
        } else if (key == "seed") {
            cfg.seed = std::stoull(value);
        } else {
            throw InputError("unknown config key '" + key + "' in " + path);
        }
    }
}

KernelFamily parse_family(const std::string& name) {
    if (name == "gaussian") return KernelFamily::Gaussian;
    if (name == "laplacian") return KernelFamily::Laplacian;
    throw InputError("unknown kernel '" + name + "' (expected gaussian or laplacian)");
}

Complex resolve_gamma(const RunConfig& cfg) {
    if (cfg.method == "arnoldi") {
        if (!cfg.gamma.empty()) {
            throw InputError("gamma is only meaningful with --method sia");
        }
        return Complex{0.0, 0.0};
    }
    if (cfg.method != "sia") {
        throw InputError("unknown method '" + cfg.method + "' (expected arnoldi or sia)");
    }
    return cfg.gamma.empty() ? Complex{1.0, 1.0} : parse_complex(cfg.gamma);
}

// Load a CSV as embedded states: scalar series get delay-embedded, vector
// series pass through (and then require delay == 1).
Series load_states(const std::string& path, int delay) {
    const Series raw = read_series_csv(path);
    if (raw.empty()) throw InputError("'" + path + "' holds no data rows");
    if (raw[0].size() == 1) {
        std::vector<double> scalars(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) scalars[i] = raw[i](0);
        return delay_embed(scalars, delay);
    }
    if (delay != 1) {
        throw InputError("delay embedding applies to single-column series; '" + path +
                         "' has " + std::to_string(raw[0].size()) + " columns");
    }
    return raw;
}

KernelSpec resolve_kernel(const RunConfig& cfg, std::span<const StateVector> train) {
    const KernelFamily family = parse_family(cfg.kernel);
    if (cfg.bandwidth == "median") {
        return KernelSpec(family, median_heuristic_bandwidth(family, train));
    }
    return KernelSpec(family, std::stod(cfg.bandwidth));
}

int cmd_synth(int T, double x0, double noise_std, std::uint64_t seed, const std::string& out) {
    const SyntheticConfig cfg{.T = T, .x0 = x0, .noise_std = noise_std, .seed = seed};
    write_scalar_csv(out, gen_synthetic(cfg));
    std::cout << "wrote " << out << " (" << T + 1 << " rows)\n";
    return 0;
}

int cmd_estimate(const RunConfig& cfg, const std::string& input, const std::string& out,
                 bool embed_data, bool reorthogonalize) {
    const Complex gamma = resolve_gamma(cfg);
    const Series states = load_states(input, cfg.delay);
    const EmbeddingPlan plan(cfg.S, cfg.N, cfg.normalize);
    const int need = cfg.train_start + plan.min_series_length();
    if (static_cast<int>(states.size()) < need) {
        throw InputError("input too short: need at least " +
                         std::to_string(cfg.delay - 1 + need) + " raw samples (" +
                         std::to_string(need) + " embedded states), got " +
                         std::to_string(cfg.delay - 1 + static_cast<int>(states.size())));
    }
    const std::span<const StateVector> train(states.data() + cfg.train_start,
                                             states.size() - cfg.train_start);
    const KernelSpec spec =
        resolve_kernel(cfg, train.subspan(0, static_cast<std::size_t>(plan.min_series_length())));
    const MeasureGram gram = measure_gram(train, plan, spec);
    const QrOptions qr{.reorthogonalize = reorthogonalize};
    const OperatorEstimate est = cfg.method == "sia" ? shift_invert_estimate(gram, gamma, qr)
                                                     : arnoldi_estimate(gram, qr);
    save_estimate(out, est, EstimateDataRef{input, cfg.delay, cfg.train_start, embed_data});
    std::cout << "method " << cfg.method << "\n"
              << "S " << cfg.S << "\n"
              << "N " << cfg.N << "\n"
              << "kernel " << cfg.kernel << "\n"
              << "bandwidth " << format_double(spec.bandwidth) << "\n";
    if (est.method == Method::ShiftInvert) {
        std::cout << "gamma " << format_complex(est.gamma) << "\n"
                  << "cond_L " << format_double(est.cond_L) << "\n";
    }
    std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_score(const std::string& estimate_path, const std::string& input, int score_start,
              int score_end, const std::string& out) {
    const LoadedEstimate loaded = load_estimate(estimate_path);
    const Series states = load_states(input, loaded.delay);
    const int end = score_end < 0 ? static_cast<int>(states.size()) : score_end;
    const AbnormalityTrace trace = score_series(loaded.est, states, score_start, end);
    write_trace_csv(out, trace);
    std::cout << "wrote " << out << " (" << trace.size() << " rows)\n";
    return 0;
}

int cmd_convergence(const RunConfig& cfg, int n_series, int s_max, int t_eval,
                    const std::string& out_prefix) {
    if (n_series < 1) throw InputError("need at least one series");
    if (s_max < 2) throw InputError("s-max must be at least 2");
    if ((s_max + 1) * cfg.N > t_eval) {
        throw InputError("evaluation index t=" + std::to_string(t_eval) +
                         " must exceed (S+1)*N = " + std::to_string((s_max + 1) * cfg.N));
    }
    const Complex gamma = cfg.gamma.empty() ? Complex{1.0, 1.0} : parse_complex(cfg.gamma);
    const KernelFamily family = parse_family(cfg.kernel);

    // abn[series][method][S-1]: empty optional marks an excluded estimate.
    std::vector<std::array<std::vector<std::optional<double>>, 2>> abn(n_series);
    parallel_for(n_series, [&](int i) {
        const SyntheticConfig scfg{
            .T = t_eval, .x0 = 0.5, .noise_std = 0.1, .seed = cfg.seed + static_cast<std::uint64_t>(i)};
        const std::vector<double> xs = gen_synthetic(scfg);
        const Series states = delay_embed(xs, 1);
        abn[i][0].assign(s_max, std::nullopt);
        abn[i][1].assign(s_max, std::nullopt);
        for (int S = 1; S <= s_max; ++S) {
            const EmbeddingPlan plan(S, cfg.N, cfg.normalize);
            KernelSpec spec(family, 1.0);
            try {
                spec = cfg.bandwidth == "median"
                           ? KernelSpec(family, median_heuristic_bandwidth(
                                                    family, std::span<const StateVector>(
                                                                states.data(),
                                                                plan.min_series_length())))
                           : KernelSpec(family, std::stod(cfg.bandwidth));
            } catch (const InputError&) {
                continue;
            }
            const MeasureGram gram = measure_gram(states, plan, spec);
            try {
                const OperatorEstimate est = arnoldi_estimate(gram);
                abn[i][0][S - 1] = abnormality(est, states[t_eval - 1], states[t_eval]).first;
            } catch (const QrBreakdownError&) {
            } catch (const IllConditionedError&) {
            }
            try {
                const OperatorEstimate est = shift_invert_estimate(gram, gamma);
                abn[i][1][S - 1] = abnormality(est, states[t_eval - 1], states[t_eval]).first;
            } catch (const QrBreakdownError&) {
            } catch (const IllConditionedError&) {
            }
        }
    });

    const std::string csv_path = out_prefix + ".csv";
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw InputError("cannot open '" + csv_path + "' for writing");
    out << "s,arnoldi_mean,arnoldi_excluded,sia_mean,sia_excluded\n";
    std::vector<double> s_axis;
    std::vector<double> mean_by_method[2];
    for (int S = 2; S <= s_max; ++S) {
        double mean[2] = {0.0, 0.0};
        int excluded[2] = {0, 0};
        for (int m = 0; m < 2; ++m) {
            double sum = 0.0;
            int count = 0;
            for (int i = 0; i < n_series; ++i) {
                const auto& a = abn[i][m];
                if (a[S - 1] && a[S - 2] && std::isfinite(*a[S - 1]) &&
                    std::isfinite(*a[S - 2])) {
                    sum += std::abs(*a[S - 1] - *a[S - 2]);
                    ++count;
                } else {
                    ++excluded[m];
                }
            }
            mean[m] = count > 0 ? sum / count : std::numeric_limits<double>::quiet_NaN();
        }
        out << S << "," << format_double(mean[0]) << "," << excluded[0] << ","
            << format_double(mean[1]) << "," << excluded[1] << "\n";
        s_axis.push_back(S);
        mean_by_method[0].push_back(mean[0]);
        mean_by_method[1].push_back(mean[1]);
    }
    out.close();

    const std::string svg_path = out_prefix + ".svg";
    write_line_plot_svg(svg_path, "Mean |a(t,S,N) - a(t,S-1,N)| across series", "S",
                        "mean abs difference",
                        {PlotSeries{"arnoldi", s_axis, mean_by_method[0]},
                         PlotSeries{"sia", s_axis, mean_by_method[1]}},
                        true);
    std::cout << "wrote " << csv_path << " and " << svg_path << "\n";
    return 0;
}

struct SweepRow {
    double threshold;
    double accuracy;
    double false_alarm;
    std::vector<int> hits;
};

std::vector<SweepRow> sweep_thresholds(const AbnormalityTrace& trace,
                                       const std::vector<LabelInterval>& labels,
                                       int n_thresholds) {
    if (labels.empty()) throw InputError("labels file holds no intervals");
    if (trace.size() == 0) throw InputError("trace holds no scores");
    std::vector<double> finite;
    for (double s : trace.score) {
        if (std::isfinite(s)) finite.push_back(s);
    }
    if (finite.empty()) throw InputError("trace holds no finite scores to sweep");
    std::sort(finite.begin(), finite.end());

    auto inside = [&labels](int t) {
        for (const LabelInterval& iv : labels) {
            if (t >= iv.start && t <= iv.end) return true;
        }
        return false;
    };

    std::vector<double> thresholds;
    thresholds.push_back(finite.front() - 1.0);
    for (int i = 0; i < n_thresholds; ++i) {
        const double q = static_cast<double>(i) / (n_thresholds - 1);
        const std::size_t idx =
            static_cast<std::size_t>(q * static_cast<double>(finite.size() - 1));
        thresholds.push_back(finite[idx]);
    }
    thresholds.push_back(finite.back() + 1.0);

    int total_normal = 0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (!inside(trace.t[i])) ++total_normal;
    }

    std::vector<SweepRow> rows;
    rows.reserve(thresholds.size());
    for (double thr : thresholds) {
        SweepRow row;
        row.threshold = thr;
        int false_alarms = 0;
        int detected = 0;
        row.hits.assign(labels.size(), 0);
        for (std::size_t i = 0; i < trace.size(); ++i) {
            const bool flagged = trace.score[i] > thr;
            if (!flagged) continue;
            if (inside(trace.t[i])) continue;
            ++false_alarms;
        }
        for (std::size_t a = 0; a < labels.size(); ++a) {
            for (std::size_t i = 0; i < trace.size(); ++i) {
                if (trace.t[i] >= labels[a].start && trace.t[i] <= labels[a].end &&
                    trace.score[i] > thr) {
                    row.hits[a] = 1;
                    break;
                }
            }
            detected += row.hits[a];
        }
        row.accuracy = static_cast<double>(detected) / static_cast<double>(labels.size());
        row.false_alarm =
            total_normal > 0 ? static_cast<double>(false_alarms) / total_normal : 0.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

int cmd_sweep(const std::string& trace_path, const std::string& labels_path,
              const std::string& out_prefix, int n_thresholds) {
    const AbnormalityTrace trace = read_trace_csv(trace_path);
    const std::vector<LabelInterval> labels = read_labels_csv(labels_path);
    const std::vector<SweepRow> rows = sweep_thresholds(trace, labels, n_thresholds);

    const std::string csv_path = out_prefix + ".csv";
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw InputError("cannot open '" + csv_path + "' for writing");
    out << "threshold,accuracy,false_alarm_rate,hits\n";
    std::vector<double> far, acc;
    for (const SweepRow& row : rows) {
        out << format_double(row.threshold) << "," << format_double(row.accuracy) << ","
            << format_double(row.false_alarm) << ",";
        for (std::size_t a = 0; a < row.hits.size(); ++a) {
            if (a) out << ";";
            out << row.hits[a];
        }
        out << "\n";
        far.push_back(row.false_alarm);
        acc.push_back(row.accuracy);
    }
    out.close();

    const std::string svg_path = out_prefix + ".svg";
    write_line_plot_svg(svg_path, "Accuracy versus false-alarm rate", "false-alarm rate",
                        "accuracy", {PlotSeries{"sweep", far, acc}}, false);
    std::cout << "wrote " << csv_path << " and " << svg_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    // The config file seeds the defaults; explicit flags win.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                apply_config_file(argv[i + 1], cfg);
            } catch (const InputError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 1;
            }
        }
    }

    CLI::App app{"Perron-Frobenius operator estimation and abnormality scoring"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "key=value config file (flags win)");
    // --config is consumed by the prescan above; register it everywhere so
    // CLI11 accepts it in any position.
    const auto add_config_opt = [&config_path](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value config file (flags win)");
    };

    // synth
    auto* synth = app.add_subcommand("synth", "generate the benchmark system");
    int T = 1600;
    double x0 = 0.5, noise_std = 0.1;
    std::string out_path = "series.csv";
    add_config_opt(synth);
    synth->add_option("--T", T, "number of steps (T+1 rows)");
    synth->add_option("--x0", x0, "initial state");
    synth->add_option("--noise-std", noise_std, "noise standard deviation");
    synth->add_option("--seed", cfg.seed, "generator seed");
    synth->add_option("--out", out_path, "output CSV path");

    // estimate
    auto* estimate = app.add_subcommand("estimate", "estimate the operator from a series");
    std::string input_path;
    std::string est_out = "estimate.txt";
    bool embed_data = false, reorthogonalize = false;
    add_config_opt(estimate);
    estimate->add_option("input", input_path, "input series CSV")->required();
    estimate->add_option("--out", est_out, "output estimate path");
    estimate->add_option("--method", cfg.method, "arnoldi | sia");
    estimate->add_option("--kernel", cfg.kernel, "gaussian | laplacian");
    estimate->add_option("--bandwidth", cfg.bandwidth, "positive real or 'median'");
    estimate->add_option("--S", cfg.S, "Krylov dimension");
    estimate->add_option("--N", cfg.N, "samples per measure");
    estimate->add_option("--gamma", cfg.gamma, "shift, e.g. 1+1i (sia only)");
    estimate->add_option("--delay,-p", cfg.delay, "delay embedding lags");
    estimate->add_flag("--normalize,!--no-normalize", cfg.normalize, "1/N measure scaling");
    estimate->add_option("--train-start", cfg.train_start, "first embedded training index");
    estimate->add_flag("--embed-data", embed_data, "inline training points in the estimate");
    estimate->add_flag("--reorthogonalize", reorthogonalize, "extra Gram-Schmidt sweep");

    // score
    auto* score = app.add_subcommand("score", "score a series against an estimate");
    std::string score_estimate, score_input;
    std::string trace_out = "trace.csv";
    add_config_opt(score);
    score->add_option("estimate", score_estimate, "estimate file")->required();
    score->add_option("input", score_input, "input series CSV")->required();
    score->add_option("--score-start", cfg.score_start, "first scored index (>= 1)");
    score->add_option("--score-end", cfg.score_end, "one past the last scored index");
    score->add_option("--out", trace_out, "output trace CSV");

    // convergence
    auto* conv = app.add_subcommand("convergence", "mean |a(t,S) - a(t,S-1)| against S");
    int n_series = 100, s_max = 12, t_eval = 1601;
    std::string conv_out = "convergence";
    add_config_opt(conv);
    conv->add_option("--n-series", n_series, "number of seeded series");
    conv->add_option("--s-max", s_max, "largest Krylov dimension");
    conv->add_option("--t", t_eval, "evaluation index");
    conv->add_option("--N", cfg.N, "samples per measure");
    conv->add_option("--kernel", cfg.kernel, "gaussian | laplacian");
    conv->add_option("--bandwidth", cfg.bandwidth, "positive real or 'median'");
    conv->add_option("--gamma", cfg.gamma, "shift for the sia column");
    conv->add_option("--seed", cfg.seed, "base seed (series i uses seed+i)");
    conv->add_option("--out", conv_out, "output prefix (.csv and .svg)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "threshold sweep against labeled anomalies");
    std::string sweep_trace, sweep_labels;
    std::string sweep_out = "sweep";
    int n_thresholds = 101;
    add_config_opt(sweep);
    sweep->add_option("trace", sweep_trace, "trace CSV")->required();
    sweep->add_option("labels", sweep_labels, "labels CSV (start,end)")->required();
    sweep->add_option("--thresholds", n_thresholds, "quantile grid size");
    sweep->add_option("--out", sweep_out, "output prefix (.csv and .svg)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (synth->parsed()) return cmd_synth(T, x0, noise_std, cfg.seed, out_path);
        if (estimate->parsed()) {
            return cmd_estimate(cfg, input_path, est_out, embed_data, reorthogonalize);
        }
        if (score->parsed()) {
            return cmd_score(score_estimate, score_input, cfg.score_start, cfg.score_end,
                             trace_out);
        }
        if (conv->parsed()) return cmd_convergence(cfg, n_series, s_max, t_eval, conv_out);
        if (sweep->parsed()) return cmd_sweep(sweep_trace, sweep_labels, sweep_out, n_thresholds);
    } catch (const QrBreakdownError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IllConditionedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
