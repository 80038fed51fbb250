#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wtar/bootstrap.hpp"
#include "wtar/studies.hpp"

namespace wtar::io {

using nlohmann::json;

/// Bad or missing configuration values (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Unreadable or malformed input data (CLI exit code 2); messages carry the
/// offending row number.
class IngestError : public std::runtime_error {
public:
    explicit IngestError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// delimiter-separated ingestion
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(std::string s) {
    const auto is_space = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && is_space(s.back())) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && is_space(s[i])) ++i;
    return s.substr(i);
}

inline std::vector<std::string> split(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, delimiter)) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == delimiter) cells.emplace_back();
    return cells;
}

}  // namespace detail

/// Reads one numeric column (by header name) from a delimited UTF-8 file,
/// with an optional pass-through label column. Missing or non-numeric cells
/// are rejected with their row number; nothing is imputed.
inline TimeSeries read_csv(const std::string& path, const std::string& value_column,
                           const std::optional<std::string>& date_column = std::nullopt,
                           char delimiter = ',') {
    std::ifstream file(path);
    if (!file) throw IngestError("cannot open input file: " + path);

    std::string line;
    if (!std::getline(file, line)) throw IngestError(path + ": empty file (header row required)");
    if (!line.empty() && line.front() == '\xEF' && line.size() >= 3) line = line.substr(3);  // BOM
    const std::vector<std::string> header = detail::split(line, delimiter);

    int value_idx = -1, date_idx = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == value_column) value_idx = static_cast<int>(i);
        if (date_column && header[i] == *date_column) date_idx = static_cast<int>(i);
    }
    if (value_idx < 0) throw IngestError(path + ": no column named '" + value_column + "'");
    if (date_column && date_idx < 0)
        throw IngestError(path + ": no column named '" + *date_column + "'");

    TimeSeries series;
    int row = 1;  // header was row 1
    while (std::getline(file, line)) {
        ++row;
        if (detail::trim(line).empty()) continue;
        const std::vector<std::string> cells = detail::split(line, delimiter);
        if (static_cast<int>(cells.size()) <= value_idx)
            throw IngestError(path + ": row " + std::to_string(row) + " has too few columns");
        const std::string& cell = cells[value_idx];
        if (cell.empty())
            throw IngestError(path + ": row " + std::to_string(row) + " has a missing value");
        double value = 0.0;
        const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (ec != std::errc{} || end != cell.data() + cell.size())
            throw IngestError(path + ": row " + std::to_string(row) + " has a non-numeric value '" +
                              cell + "'");
        series.values.push_back(value);
        if (date_idx >= 0) series.timestamps.push_back(cells[date_idx]);
    }
    return series;
}

/// Writes columns as a delimited table with full double round-trip precision.
inline void write_table(const std::string& path, const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows, char delimiter = ',') {
    std::ofstream file(path);
    if (!file) throw ConfigError("cannot write output file: " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
        file << header[i] << (i + 1 < header.size() ? std::string(1, delimiter) : "\n");
    for (const auto& cells : rows)
        for (std::size_t i = 0; i < cells.size(); ++i)
            file << cells[i] << (i + 1 < cells.size() ? std::string(1, delimiter) : "\n");
}

inline std::string format_double(double v) {
    char buf[32];
    snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

inline json threshold_spec_to_json(const ThresholdSpec& spec) {
    json out;
    if (const auto* c = std::get_if<ConstantThreshold>(&spec)) {
        out["type"] = "constant";
        out["gamma"] = c->gamma;
    } else if (const auto* f = std::get_if<FourierThreshold>(&spec)) {
        out["type"] = "fourier";
        out["gamma0"] = f->gamma0;
        out["gamma1"] = f->gamma1;
        out["gamma2"] = f->gamma2;
        out["k"] = f->k;
    } else {
        const auto& w = std::get<WaveletThreshold>(spec);
        out["type"] = "wavelet";
        out["family"] = wavelets::family_name(w.basis->family());
        out["vanishing_moments"] = w.basis->vanishing_moments();
        out["eval_depth"] = w.basis->eval_depth();
        out["resolution"] = w.coeffs.J;
        out["coefficients"] = w.coeffs.flatten();
    }
    return out;
}

inline wavelets::Family family_from_string(const std::string& name) {
    if (name == "haar") return wavelets::Family::Haar;
    if (name == "d" || name == "db" || name == "daubechies")
        return wavelets::Family::DaubechiesExtremalPhase;
    if (name == "la" || name == "sym" || name == "least-asymmetric")
        return wavelets::Family::DaubechiesLeastAsymmetric;
    throw ConfigError("unknown wavelet family '" + name + "' (use haar, d, or la)");
}

inline ThresholdSpec threshold_spec_from_json(const json& in) {
    const std::string type = in.at("type").get<std::string>();
    if (type == "constant") return ConstantThreshold{in.at("gamma").get<double>()};
    if (type == "fourier")
        return FourierThreshold{in.at("gamma0").get<double>(), in.at("gamma1").get<double>(),
                                in.at("gamma2").get<double>(), in.at("k").get<int>()};
    if (type == "wavelet") {
        const auto family = family_from_string(in.at("family").get<std::string>());
        const int n = in.at("vanishing_moments").get<int>();
        const int depth = in.value("eval_depth", 30);
        const int J = in.at("resolution").get<int>();
        const std::vector<double> flat = in.at("coefficients").get<std::vector<double>>();
        auto basis = std::make_shared<const wavelets::WaveletBasis>(
            wavelets::build_filter_bank(family, n), depth);
        return WaveletThreshold{std::move(basis), wavelets::WaveletCoefficients::from_flat(J, flat)};
    }
    throw ConfigError("unknown threshold type '" + type + "'");
}

inline json search_space_to_json(const SearchSpace& s) {
    return json{{"lower", s.bounds.lower},
                {"upper", s.bounds.upper},
                {"population", s.population},
                {"generations", s.generations},
                {"crossover", s.crossover},
                {"weight", s.weight},
                {"simplex_iterations", s.simplex_iterations},
                {"tolerance", s.tolerance},
                {"seed", s.seed}};
}

inline SearchSpace search_space_from_json(const json& in) {
    SearchSpace s;
    s.bounds.lower = in.at("lower").get<std::vector<double>>();
    s.bounds.upper = in.at("upper").get<std::vector<double>>();
    s.population = in.at("population").get<int>();
    s.generations = in.at("generations").get<int>();
    s.crossover = in.at("crossover").get<double>();
    s.weight = in.at("weight").get<double>();
    s.simplex_iterations = in.at("simplex_iterations").get<int>();
    s.tolerance = in.at("tolerance").get<double>();
    s.seed = in.at("seed").get<std::uint64_t>();
    return s;
}

inline std::string family_tag(ThresholdFamily family) {
    switch (family) {
        case ThresholdFamily::Constant: return "constant";
        case ThresholdFamily::Fourier: return "fourier";
        case ThresholdFamily::Wavelet: return "wavelet";
    }
    return "?";
}

inline ThresholdFamily family_tag_from_string(const std::string& tag) {
    if (tag == "constant") return ThresholdFamily::Constant;
    if (tag == "fourier") return ThresholdFamily::Fourier;
    if (tag == "wavelet") return ThresholdFamily::Wavelet;
    throw ConfigError("unknown model family '" + tag + "'");
}

inline json fit_result_to_json(const FitResult& fit) {
    json out;
    out["family"] = family_tag(fit.family);
    out["estimates"] = {{"phi0_low", fit.model.coeffs.phi0_low},
                        {"phi1_low", fit.model.coeffs.phi1_low},
                        {"phi0_high", fit.model.coeffs.phi0_high},
                        {"phi1_high", fit.model.coeffs.phi1_high},
                        {"sigma2", fit.sigma2_hat}};
    out["beta_hat"] = {fit.beta_hat.b1, fit.beta_hat.b2, fit.beta_hat.b3, fit.beta_hat.b4};
    out["theta_hat"] = fit.theta_hat;
    out["resolution"] = fit.resolution;
    out["fourier_k"] = fit.fourier_k;
    out["ssr"] = fit.ssr;
    out["sigma2_hat"] = fit.sigma2_hat;
    out["n_low"] = fit.n_low;
    out["n_high"] = fit.n_high;
    out["y0"] = fit.y0;
    out["threshold"] = threshold_spec_to_json(fit.model.threshold);
    out["search"] = search_space_to_json(fit.search);
    out["residuals"] = fit.residuals;
    out["threshold_path"] = fit.threshold_path;
    out["warnings"] = fit.warnings;
    json trace = json::array();
    for (const auto& [index, score] : fit.selection_trace) trace.push_back({{"candidate", index}, {"score", score}});
    out["selection_trace"] = trace;
    return out;
}

inline FitResult fit_result_from_json(const json& in) {
    FitResult fit;
    fit.family = family_tag_from_string(in.at("family").get<std::string>());
    const json& est = in.at("estimates");
    fit.model.coeffs.phi0_low = est.at("phi0_low").get<double>();
    fit.model.coeffs.phi1_low = est.at("phi1_low").get<double>();
    fit.model.coeffs.phi0_high = est.at("phi0_high").get<double>();
    fit.model.coeffs.phi1_high = est.at("phi1_high").get<double>();
    fit.model.threshold = threshold_spec_from_json(in.at("threshold"));
    const std::vector<double> beta = in.at("beta_hat").get<std::vector<double>>();
    fit.beta_hat = {beta.at(0), beta.at(1), beta.at(2), beta.at(3)};
    fit.theta_hat = in.at("theta_hat").get<std::vector<double>>();
    fit.resolution = in.at("resolution").get<int>();
    fit.fourier_k = in.at("fourier_k").get<int>();
    fit.ssr = in.at("ssr").get<double>();
    fit.sigma2_hat = in.at("sigma2_hat").get<double>();
    fit.model.sigma2 = fit.sigma2_hat;
    fit.n_low = in.at("n_low").get<int>();
    fit.n_high = in.at("n_high").get<int>();
    fit.y0 = in.at("y0").get<double>();
    fit.search = search_space_from_json(in.at("search"));
    fit.residuals = in.at("residuals").get<std::vector<double>>();
    fit.threshold_path = in.at("threshold_path").get<std::vector<double>>();
    fit.warnings = in.at("warnings").get<std::vector<std::string>>();
    for (const auto& entry : in.at("selection_trace"))
        fit.selection_trace.emplace_back(entry.at("candidate").get<int>(),
                                         entry.at("score").get<double>());
    return fit;
}

inline json bootstrap_result_to_json(const BootstrapResult& boot) {
    json out;
    out["requested"] = boot.requested;
    out["dropped"] = boot.dropped;
    out["alpha"] = boot.alpha;
    out["seed"] = boot.seed;
    out["c_crit"] = boot.band.c_crit;
    out["floored_points"] = boot.band.floored_points;
    json intervals;
    for (int p = 0; p < 5; ++p)
        intervals[studies::kParameterNames[p]] = {boot.intervals[p].first, boot.intervals[p].second};
    out["intervals"] = intervals;
    return out;
}

inline json study_report_to_json(const studies::StudyReport& report) {
    json rows = json::array();
    for (const auto& row : report.rows)
        rows.push_back({{"parameter", row.name},
                        {"true", row.truth},
                        {"estimate", row.mean_estimate},
                        {"rmse", row.rmse}});
    json histogram;
    for (const auto& [j, count] : report.resolution_histogram)
        histogram[std::to_string(j)] = count;
    return json{{"study", report.study},
                {"replications", report.replications},
                {"rows", rows},
                {"resolution_histogram", histogram},
                {"modal_resolution", report.modal_resolution}};
}

inline json coverage_report_to_json(const CoverageReport& report) {
    json params;
    for (int p = 0; p < 5; ++p)
        params[studies::kParameterNames[p]] = report.parameter_coverage[p];
    return json{{"monte_carlo_reps", report.monte_carlo_reps},
                {"parameter_coverage", params},
                {"band_coverage", report.band_coverage}};
}

inline json load_json(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open config file: " + path);
    try {
        return json::parse(file);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

inline void save_json(const std::string& path, const json& doc) {
    std::ofstream file(path);
    if (!file) throw ConfigError("cannot write output file: " + path);
    file << doc.dump(2) << "\n";
}

}  // namespace wtar::io
