// wtar: simulate, fit, bootstrap, and replicate two-regime SETAR(1) models
// with constant, Fourier, or wavelet-series time-varying thresholds.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wtar/diagnostics.hpp"
#include "wtar/io.hpp"

namespace fs = std::filesystem;
using wtar::io::ConfigError;
using wtar::io::json;

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> family;
    std::optional<int> vanishing_moments;
    std::optional<int> resolution;
    std::vector<int> fourier_k;
    std::optional<int> bootstrap_b;
    std::optional<double> alpha;
    std::optional<int> reps;
    std::optional<int> difference;
    std::optional<int> threads;
};

json load_config(const std::string& path, const Overrides& ov) {
    json cfg = path.empty() ? json::object() : wtar::io::load_json(path);
    if (ov.seed) cfg["seed"] = *ov.seed;
    if (ov.out) cfg["out"] = *ov.out;
    if (ov.family) cfg["family"] = *ov.family;
    if (ov.vanishing_moments) cfg["vanishing_moments"] = *ov.vanishing_moments;
    if (ov.resolution) cfg["resolution"] = *ov.resolution;
    if (!ov.fourier_k.empty()) cfg["fourier_k"] = ov.fourier_k;
    if (ov.bootstrap_b) cfg["bootstrap_b"] = *ov.bootstrap_b;
    if (ov.alpha) cfg["alpha"] = *ov.alpha;
    if (ov.reps) cfg["reps"] = *ov.reps;
    if (ov.difference) cfg["difference"] = *ov.difference;
    if (ov.threads) cfg["threads"] = *ov.threads;
    return cfg;
}

fs::path prepare_out_dir(const json& cfg) {
    const fs::path dir = cfg.value("out", std::string("out"));
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string());
    return dir;
}

template <typename T>
T require(const json& cfg, const std::string& key) {
    if (!cfg.contains(key)) throw ConfigError("missing required config field '" + key + "'");
    try {
        return cfg.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config field '" + key + "' has the wrong type");
    }
}

wtar::SetarModel model_from_config(const json& cfg) {
    const json m = require<json>(cfg, "model");
    wtar::SetarModel model;
    model.coeffs.phi0_low = require<double>(m, "phi0_low");
    model.coeffs.phi1_low = require<double>(m, "phi1_low");
    model.coeffs.phi0_high = require<double>(m, "phi0_high");
    model.coeffs.phi1_high = require<double>(m, "phi1_high");
    model.sigma2 = require<double>(m, "sigma2");
    try {
        model.threshold = wtar::io::threshold_spec_from_json(require<json>(m, "threshold"));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad threshold spec: ") + e.what());
    }
    return model;
}

wtar::TimeSeries ingest(const json& cfg) {
    const std::string input = require<std::string>(cfg, "input");
    const std::string value_column = cfg.value("value_column", std::string("value"));
    std::optional<std::string> date_column;
    if (cfg.contains("date_column")) date_column = cfg.at("date_column").get<std::string>();
    const std::string delim = cfg.value("delimiter", std::string(","));
    if (delim.size() != 1) throw ConfigError("delimiter must be a single character");
    wtar::TimeSeries series = wtar::io::read_csv(input, value_column, date_column, delim[0]);
    const int order = cfg.value("difference", 0);
    if (order > 0) series = wtar::difference(series, order);
    return series;
}

wtar::SearchSpace search_from_config(const json& cfg, const wtar::TimeSeries& series, int dim,
                                     std::uint64_t seed) {
    wtar::SearchSpace search = wtar::SearchSpace::for_series(series, dim, seed);
    if (cfg.contains("search")) {
        const json& s = cfg.at("search");
        search.population = s.value("population", search.population);
        search.generations = s.value("generations", search.generations);
        search.crossover = s.value("crossover", search.crossover);
        search.weight = s.value("weight", search.weight);
        search.simplex_iterations = s.value("simplex_iterations", search.simplex_iterations);
        search.tolerance = s.value("tolerance", search.tolerance);
        if (s.contains("lower")) search.bounds.lower = s.at("lower").get<std::vector<double>>();
        if (s.contains("upper")) search.bounds.upper = s.at("upper").get<std::vector<double>>();
        search.bounds.validate();
    }
    return search;
}

void write_fit_tables(const fs::path& dir, const wtar::FitResult& fit) {
    using wtar::io::format_double;
    const int T = static_cast<int>(fit.threshold_path.size());
    std::vector<std::vector<std::string>> threshold_rows;
    threshold_rows.reserve(T);
    for (int t = 0; t < T; ++t)
        threshold_rows.push_back({std::to_string(t), format_double(static_cast<double>(t) / T),
                                  format_double(fit.threshold_path[t])});
    wtar::io::write_table((dir / "threshold.csv").string(), {"t", "u", "gamma_hat"}, threshold_rows);

    std::vector<std::vector<std::string>> residual_rows;
    residual_rows.reserve(fit.residuals.size());
    for (std::size_t i = 0; i < fit.residuals.size(); ++i)
        residual_rows.push_back({std::to_string(i + 1), format_double(fit.residuals[i])});
    wtar::io::write_table((dir / "residuals.csv").string(), {"t", "residual"}, residual_rows);
}

json residual_diagnostics(const fs::path& dir, const wtar::FitResult& fit) {
    using wtar::io::format_double;
    wtar::TimeSeries residuals;
    residuals.values = fit.residuals;
    const int T = residuals.size();

    json diag;
    const int max_lag = std::min(30, (T - 1) / 2);
    if (max_lag >= 1) {
        const wtar::AcfResult acf = wtar::acf(residuals, max_lag);
        std::vector<std::vector<std::string>> rows;
        for (int k = 1; k <= max_lag; ++k)
            rows.push_back({std::to_string(k), format_double(acf.rho[k - 1]),
                            format_double(acf.confidence_limit)});
        wtar::io::write_table((dir / "acf.csv").string(), {"lag", "rho", "limit"}, rows);
        diag["acf_confidence_limit"] = acf.confidence_limit;
    }
    json lb = json::array();
    for (int lag : {20, 30}) {
        if (lag >= (T + 1) / 2) continue;
        const wtar::LjungBoxResult r = wtar::ljung_box(residuals, lag);
        lb.push_back({{"lag", r.lag},
                      {"statistic", r.statistic},
                      {"degrees_of_freedom", r.degrees_of_freedom},
                      {"p_value", r.p_value}});
    }
    diag["ljung_box"] = lb;
    return diag;
}

wtar::FitResult run_fit(const json& cfg, const wtar::TimeSeries& series) {
    const std::string model = cfg.value("model", std::string("wavelet"));
    const std::uint64_t seed = cfg.value("seed", std::uint64_t{0});

    if (model == "constant") return wtar::fit_constant(series);

    if (model == "fourier") {
        std::vector<int> ks = cfg.value("fourier_k", std::vector<int>{1, 2, 3, 4, 5});
        return wtar::fit_fourier(series, ks, search_from_config(cfg, series, 3, seed));
    }

    if (model == "wavelet") {
        const auto family = wtar::io::family_from_string(cfg.value("family", std::string("haar")));
        const int n = cfg.value("vanishing_moments", family == wtar::wavelets::Family::Haar ? 1 : 4);
        const int depth = cfg.value("eval_depth", 30);
        auto basis = std::make_shared<const wtar::wavelets::WaveletBasis>(
            wtar::wavelets::build_filter_bank(family, n), depth);

        if (cfg.contains("resolution_candidates")) {
            const std::vector<int> js = cfg.at("resolution_candidates").get<std::vector<int>>();
            auto [j_star, fit] = wtar::select_resolution(
                series, basis, js, wtar::SelectionMode::InSample, {}, [&](int J) {
                    return search_from_config(cfg, series, 1 << J, seed);
                });
            (void)j_star;
            return std::move(fit);
        }
        const int J = cfg.value("resolution", 2);
        return wtar::fit_wavelet(series, basis, J, search_from_config(cfg, series, 1 << J, seed));
    }
    throw ConfigError("unknown model '" + model + "' (use constant, fourier, or wavelet)");
}

void print_fit_summary(const wtar::FitResult& fit) {
    std::printf("family: %s\n", wtar::io::family_tag(fit.family).c_str());
    if (fit.family == wtar::ThresholdFamily::Wavelet) std::printf("resolution: %d\n", fit.resolution);
    if (fit.family == wtar::ThresholdFamily::Fourier) std::printf("fourier k: %d\n", fit.fourier_k);
    std::printf("phi0_low=%.6g phi1_low=%.6g phi0_high=%.6g phi1_high=%.6g\n",
                fit.model.coeffs.phi0_low, fit.model.coeffs.phi1_low, fit.model.coeffs.phi0_high,
                fit.model.coeffs.phi1_high);
    std::printf("ssr=%.6g sigma2_hat=%.6g regimes=%d/%d\n", fit.ssr, fit.sigma2_hat, fit.n_low,
                fit.n_high);
    for (const auto& w : fit.warnings) std::printf("warning: %s\n", w.c_str());
}

int cmd_simulate(const json& cfg) {
    const fs::path dir = prepare_out_dir(cfg);
    const int T = require<int>(cfg, "T");
    const double y0 = cfg.value("y0", 0.0);
    const int burn_in = cfg.value("burn_in", 0);
    const std::uint64_t seed = cfg.value("seed", std::uint64_t{0});
    const wtar::SetarModel model = model_from_config(cfg);

    const wtar::TimeSeries series = wtar::simulate(model, T, y0, seed, burn_in);
    const std::vector<double> truth = wtar::threshold_path(model.threshold, T);

    std::vector<std::vector<std::string>> rows;
    rows.reserve(T);
    for (int t = 0; t < T; ++t)
        rows.push_back({std::to_string(t), wtar::io::format_double(series[t]),
                        wtar::io::format_double(truth[t])});
    wtar::io::write_table((dir / "series.csv").string(), {"t", "value", "threshold"}, rows);

    json result;
    result["command"] = "simulate";
    result["seed"] = seed;
    result["T"] = T;
    result["y0"] = y0;
    result["burn_in"] = burn_in;
    result["model"] = {{"phi0_low", model.coeffs.phi0_low},
                       {"phi1_low", model.coeffs.phi1_low},
                       {"phi0_high", model.coeffs.phi0_high},
                       {"phi1_high", model.coeffs.phi1_high},
                       {"sigma2", model.sigma2},
                       {"threshold", wtar::io::threshold_spec_to_json(model.threshold)}};
    wtar::io::save_json((dir / "result.json").string(), result);
    std::printf("seed: %llu\n", static_cast<unsigned long long>(seed));
    std::printf("wrote %d observations to %s\n", T, (dir / "series.csv").c_str());
    return 0;
}

int cmd_fit(const json& cfg) {
    const fs::path dir = prepare_out_dir(cfg);
    const wtar::TimeSeries series = ingest(cfg);
    const wtar::FitResult fit = run_fit(cfg, series);

    write_fit_tables(dir, fit);
    json result;
    result["command"] = "fit";
    result["config"] = cfg;
    result["fit"] = wtar::io::fit_result_to_json(fit);
    result["diagnostics"] = residual_diagnostics(dir, fit);
    wtar::io::save_json((dir / "result.json").string(), result);
    print_fit_summary(fit);
    return 0;
}

int cmd_bootstrap(const json& cfg) {
    const fs::path dir = prepare_out_dir(cfg);
    const wtar::TimeSeries series = ingest(cfg);

    wtar::FitResult fit;
    if (cfg.contains("fit_bundle")) {
        const json bundle = wtar::io::load_json(cfg.at("fit_bundle").get<std::string>());
        fit = wtar::io::fit_result_from_json(bundle.contains("fit") ? bundle.at("fit") : bundle);
    } else {
        fit = run_fit(cfg, series);
    }

    const int B = cfg.value("bootstrap_b", 1000);
    const double alpha = cfg.value("alpha", 0.95);
    const std::uint64_t seed = cfg.value("seed", std::uint64_t{0});
    const wtar::BootstrapResult boot = wtar::bootstrap_model(series, fit, B, alpha, seed);

    write_fit_tables(dir, fit);
    const int T = static_cast<int>(fit.threshold_path.size());
    std::vector<std::vector<std::string>> band_rows;
    band_rows.reserve(T);
    for (int t = 0; t < T; ++t)
        band_rows.push_back({std::to_string(t), wtar::io::format_double(fit.threshold_path[t]),
                             wtar::io::format_double(boot.band.lower[t]),
                             wtar::io::format_double(boot.band.upper[t])});
    wtar::io::write_table((dir / "band.csv").string(), {"t", "gamma_hat", "lower", "upper"},
                          band_rows);

    json result;
    result["command"] = "bootstrap";
    result["config"] = cfg;
    result["fit"] = wtar::io::fit_result_to_json(fit);
    result["bootstrap"] = wtar::io::bootstrap_result_to_json(boot);
    wtar::io::save_json((dir / "result.json").string(), result);

    print_fit_summary(fit);
    std::printf("bootstrap B=%d dropped=%d c_crit=%.6g\n", boot.requested, boot.dropped,
                boot.band.c_crit);
    for (int p = 0; p < 5; ++p)
        std::printf("%s: [%.6g, %.6g]\n", wtar::studies::kParameterNames[p],
                    boot.intervals[p].first, boot.intervals[p].second);
    return 0;
}

int cmd_replicate(const json& cfg) {
    const fs::path dir = prepare_out_dir(cfg);
    const std::string study = require<std::string>(cfg, "study");

    wtar::studies::StudyOptions opt;
    opt.replications = cfg.value("reps", 100);
    opt.T = cfg.value("T", 2048);
    opt.seed = cfg.value("seed", std::uint64_t{0});
    opt.threads = cfg.value("threads", 0);
    opt.generations = cfg.value("generations", 0);
    opt.population = cfg.value("population", 0);
    opt.mc_reps = cfg.value("mc_reps", 200);
    opt.bootstrap_b = cfg.value("bootstrap_b", 200);
    opt.alpha = cfg.value("alpha", 0.95);

    json result;
    result["command"] = "replicate";
    result["config"] = cfg;

    if (study == "sim1" || study == "sim2") {
        const wtar::studies::StudyReport report = study == "sim1"
                                                      ? wtar::studies::run_simulation_study1(opt)
                                                      : wtar::studies::run_simulation_study2(opt);
        result["report"] = wtar::io::study_report_to_json(report);

        std::vector<std::vector<std::string>> rows;
        for (const auto& row : report.rows)
            rows.push_back({row.name, wtar::io::format_double(row.truth),
                            wtar::io::format_double(row.mean_estimate),
                            wtar::io::format_double(row.rmse)});
        wtar::io::write_table((dir / "report.csv").string(), {"parameter", "true", "estimate", "rmse"},
                              rows);

        std::printf("%-10s %10s %10s %10s\n", "parameter", "true", "estimate", "rmse");
        for (const auto& row : report.rows)
            std::printf("%-10s %10.4f %10.4f %10.4f\n", row.name.c_str(), row.truth,
                        row.mean_estimate, row.rmse);
        if (study == "sim2") std::printf("modal resolution: %d\n", report.modal_resolution);
    } else if (study == "coverage") {
        const wtar::CoverageReport report = wtar::studies::run_coverage_study(opt);
        result["report"] = wtar::io::coverage_report_to_json(report);

        std::vector<std::vector<std::string>> rows;
        for (int p = 0; p < 5; ++p)
            rows.push_back({wtar::studies::kParameterNames[p],
                            wtar::io::format_double(report.parameter_coverage[p])});
        rows.push_back({"band", wtar::io::format_double(report.band_coverage)});
        wtar::io::write_table((dir / "coverage.csv").string(), {"parameter", "coverage"}, rows);

        for (int p = 0; p < 5; ++p)
            std::printf("%s coverage: %.3f\n", wtar::studies::kParameterNames[p],
                        report.parameter_coverage[p]);
        std::printf("band coverage: %.3f\n", report.band_coverage);
    } else {
        throw ConfigError("unknown study '" + study + "' (use sim1, sim2, or coverage)");
    }

    wtar::io::save_json((dir / "result.json").string(), result);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-regime SETAR(1) models with time-varying wavelet thresholds"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;
    std::uint64_t seed_raw = 0;
    std::string out_raw, family_raw;
    int vm_raw = 0, res_raw = 0, b_raw = 0, reps_raw = 0, diff_raw = 0, threads_raw = 0;
    double alpha_raw = 0.0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON configuration file");
        cmd->add_option("--seed", seed_raw, "override the RNG seed")
            ->each([&](const std::string&) { ov.seed = seed_raw; });
        cmd->add_option("--out", out_raw, "override the output directory")
            ->each([&](const std::string&) { ov.out = out_raw; });
        cmd->add_option("--threads", threads_raw, "worker threads (0 = all cores)")
            ->each([&](const std::string&) { ov.threads = threads_raw; });
    };
    auto add_fit_flags = [&](CLI::App* cmd) {
        cmd->add_option("--family", family_raw, "wavelet family: haar, d, la")
            ->each([&](const std::string&) { ov.family = family_raw; });
        cmd->add_option("--vanishing-moments", vm_raw, "vanishing moments N")
            ->each([&](const std::string&) { ov.vanishing_moments = vm_raw; });
        cmd->add_option("--resolution", res_raw, "wavelet resolution level J")
            ->each([&](const std::string&) { ov.resolution = res_raw; });
        cmd->add_option("--fourier-k", ov.fourier_k, "Fourier frequency candidates");
        cmd->add_option("--difference", diff_raw, "differencing order applied to the input")
            ->each([&](const std::string&) { ov.difference = diff_raw; });
    };

    CLI::App* sim = app.add_subcommand("simulate", "simulate a SETAR series and its threshold path");
    add_common(sim);

    CLI::App* fit = app.add_subcommand("fit", "fit a threshold model to a CSV series");
    add_common(fit);
    add_fit_flags(fit);

    CLI::App* boot = app.add_subcommand("bootstrap", "residual bootstrap intervals and sup-t band");
    add_common(boot);
    add_fit_flags(boot);
    boot->add_option("--bootstrap-b", b_raw, "bootstrap replications B")
        ->each([&](const std::string&) { ov.bootstrap_b = b_raw; });
    boot->add_option("--alpha", alpha_raw, "interval/band level")
        ->each([&](const std::string&) { ov.alpha = alpha_raw; });

    CLI::App* rep = app.add_subcommand("replicate", "run a named replication study");
    add_common(rep);
    rep->add_option("--reps", reps_raw, "study replications")
        ->each([&](const std::string&) { ov.reps = reps_raw; });
    rep->add_option("--bootstrap-b", b_raw, "bootstrap replications B")
        ->each([&](const std::string&) { ov.bootstrap_b = b_raw; });
    rep->add_option("--alpha", alpha_raw, "interval/band level")
        ->each([&](const std::string&) { ov.alpha = alpha_raw; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const json cfg = load_config(config_path, ov);
        if (sim->parsed()) return cmd_simulate(cfg);
        if (fit->parsed()) return cmd_fit(cfg);
        if (boot->parsed()) return cmd_bootstrap(cfg);
        if (rep->parsed()) return cmd_replicate(cfg);
        return 2;
    } catch (const wtar::FitFailed& e) {
        std::fprintf(stderr, "fit failure: %s\n", e.what());
        return 3;
    } catch (const wtar::BootstrapUnstable& e) {
        std::fprintf(stderr, "bootstrap failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
