#pragma once

#include "osc/decay.hpp"
#include "osc/grid.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace osc {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Run settings. File format (ini, '#' or ';' comments):
///   [tolerances]  name = value
///   [grid]        N = 256   L = 64
///   [constants]   C1 = 12   C2 = 0   C_star = 8   kappa = 0.05
///   [run]         seed = 1  output_dir = out
struct RunConfig {
    std::map<std::string, double> tolerances{{"quadrature", 1e-10}};
    int N = 256;
    double L = 64.0;
    int C1 = 12, C2 = 0;
    double C_star = 8.0;
    double kappa = 0.05;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir;  // empty: OSC_OUTPUT_DIR, then ./out

    /// Throws ConfigError on C1 != 2 C2 + 12, N not a power of two or a
    /// nonpositive tolerance.
    void validate() const;
    double tolerance(const std::string& name, double fallback) const;
    std::filesystem::path resolved_output_dir() const;
};

/// Reads an ini file into a config; unknown sections or keys are errors.
RunConfig load_config(const std::filesystem::path& path);

/// key = value lines in a fixed order; the config hash is taken over this text.
std::string canonical_text(const RunConfig& cfg);

/// 64-bit FNV-1a of canonical_text, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

/// CSV with '#'-prefixed metadata lines (config hash, seed, extras), then the
/// header row, then data. Numbers use %.17g so reruns are byte-identical.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const RunConfig& cfg, const std::vector<std::string>& header,
              const std::map<std::string, std::string>& extra_meta = {});
    void row(const std::vector<double>& values);
    void row(const std::vector<std::string>& cells);
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::size_t columns_;
    std::ofstream out_;
};

std::string format_number(double v);

struct PlotStyle {
    std::string title;
    std::string x_label = "scale";
    std::string y_label = "value";
    int width = 640, height = 440;
};

/// Log-log scatter with axes and the fitted line, as plain SVG (svg, line,
/// polyline, circle, text). The annotation reads "slope = <s>" with the fit's
/// slope when one is given. Throws std::invalid_argument on an empty series.
void emit_plot(const Series& series, const std::optional<DecayFit>& fit, const PlotStyle& style,
               const std::filesystem::path& path);

/// Text of the slope annotation used by emit_plot.
std::string slope_annotation(const DecayFit& fit);

/// Little-endian grid file: "OPLB", u32 N, f64 L, then N*N complex doubles
/// (re, im) with x the slow index.
void write_field(const GridField& f, const std::filesystem::path& path);
GridField read_field(const std::filesystem::path& path);

}  // namespace osc
