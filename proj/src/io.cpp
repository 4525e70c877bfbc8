#include "osc/io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>

namespace osc {

void RunConfig::validate() const
{
    if (C1 != 2 * C2 + 12)
        throw ConfigError("constants: C1 must equal 2 C2 + 12 (got C1 = " + std::to_string(C1) +
                          ", C2 = " + std::to_string(C2) + ")");
    if (N < 2 || !std::has_single_bit(static_cast<unsigned>(N)))
        throw ConfigError("grid: N must be a power of two (got " + std::to_string(N) + ")");
    if (!(L > 0.0)) throw ConfigError("grid: L must be positive");
    if (!(C_star >= 4.0)) throw ConfigError("constants: C_star must be >= 4");
    if (!(kappa > 0.0 && kappa < 1.0)) throw ConfigError("constants: kappa must lie in (0, 1)");
    for (const auto& [k, v] : tolerances)
        if (!(v > 0.0)) throw ConfigError("tolerances: " + k + " must be positive");
}

double RunConfig::tolerance(const std::string& name, double fallback) const
{
    const auto it = tolerances.find(name);
    return it == tolerances.end() ? fallback : it->second;
}

std::filesystem::path RunConfig::resolved_output_dir() const
{
    if (!output_dir.empty()) return output_dir;
    if (const char* env = std::getenv("OSC_OUTPUT_DIR"); env && *env) return env;
    return "out";
}

RunConfig load_config(const std::filesystem::path& path)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(path.string(), tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(e.what());
    }
    RunConfig cfg;
    cfg.tolerances.clear();
    auto number = [](const std::string& where, const std::string& text) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != text.size()) throw ConfigError(where + ": not a number: '" + text + "'");
        return v;
    };
    auto integer = [&](const std::string& where, const std::string& text) {
        const double v = number(where, text);
        if (v != std::floor(v)) throw ConfigError(where + ": not an integer: '" + text + "'");
        return static_cast<long long>(v);
    };
    for (const auto& [section, body] : tree) {
        for (const auto& [key, node] : body) {
            const std::string where = section + "." + key;
            const std::string text = node.get_value<std::string>();
            if (section == "tolerances") cfg.tolerances[key] = number(where, text);
            else if (section == "grid" && key == "N") cfg.N = static_cast<int>(integer(where, text));
            else if (section == "grid" && key == "L") cfg.L = number(where, text);
            else if (section == "constants" && key == "C1") cfg.C1 = static_cast<int>(integer(where, text));
            else if (section == "constants" && key == "C2") cfg.C2 = static_cast<int>(integer(where, text));
            else if (section == "constants" && key == "C_star") cfg.C_star = number(where, text);
            else if (section == "constants" && key == "kappa") cfg.kappa = number(where, text);
            else if (section == "run" && key == "seed") cfg.seed = static_cast<std::uint64_t>(integer(where, text));
            else if (section == "run" && key == "output_dir") cfg.output_dir = text;
            else throw ConfigError("unknown config key " + where);
        }
    }
    if (cfg.tolerances.empty()) cfg.tolerances = RunConfig{}.tolerances;
    cfg.validate();
    return cfg;
}

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string canonical_text(const RunConfig& cfg)
{
    std::ostringstream os;
    for (const auto& [k, v] : cfg.tolerances) os << "tolerances." << k << '=' << format_number(v) << '\n';
    os << "grid.N=" << cfg.N << '\n'
       << "grid.L=" << format_number(cfg.L) << '\n'
       << "constants.C1=" << cfg.C1 << '\n'
       << "constants.C2=" << cfg.C2 << '\n'
       << "constants.C_star=" << format_number(cfg.C_star) << '\n'
       << "constants.kappa=" << format_number(cfg.kappa) << '\n'
       << "run.seed=" << cfg.seed << '\n';
    return os.str();
}

std::string config_hash(const RunConfig& cfg)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : canonical_text(cfg)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const RunConfig& cfg, const std::vector<std::string>& header,
                     const std::map<std::string, std::string>& extra_meta)
    : path_(path), columns_(header.size())
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    out_.open(path, std::ios::binary);
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    out_ << "# config_hash=" << config_hash(cfg) << '\n' << "# seed=" << cfg.seed << '\n';
    for (const auto& [k, v] : extra_meta) out_ << "# " << k << '=' << v << '\n';
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells)
{
    if (cells.size() != columns_) throw std::invalid_argument("CsvWriter: row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
    if (!out_) throw std::runtime_error("write failed: " + path_.string());
}

void CsvWriter::row(const std::vector<double>& values)
{
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_number(v));
    row(cells);
}

std::string slope_annotation(const DecayFit& fit)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "slope = %.4f", fit.slope);
    return buf;
}

namespace {

std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

}  // namespace

void emit_plot(const Series& series, const std::optional<DecayFit>& fit, const PlotStyle& style,
               const std::filesystem::path& path)
{
    if (series.empty()) throw std::invalid_argument("emit_plot: empty series");
    std::vector<std::pair<double, double>> pts;
    for (auto [s, v] : series)
        if (s > 0.0 && v > 0.0) pts.emplace_back(std::log2(s), std::log2(v));
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (!pts.empty()) {
        x0 = x1 = pts[0].first;
        y0 = y1 = pts[0].second;
        for (auto [x, y] : pts) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (x1 - x0 < 1e-12) { x0 -= 0.5; x1 += 0.5; }
    if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
    const double padx = 0.05 * (x1 - x0), pady = 0.05 * (y1 - y0);
    x0 -= padx; x1 += padx; y0 -= pady; y1 += pady;
    const double W = style.width, H = style.height, ml = 70, mr = 20, mt = 40, mb = 50;
    auto X = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
    auto Y = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };
    auto num = [](double v) {
        char b[32];
        std::snprintf(b, sizeof b, "%.2f", v);
        return std::string(b);
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\"" << style.height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">" << xml_escape(style.title) << "</text>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\"" << H - mb
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">log2 "
       << xml_escape(style.x_label) << "</text>\n";
    os << "<text x=\"15\" y=\"" << H / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " << H / 2
       << ")\">log2 " << xml_escape(style.y_label) << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
        os << "<text x=\"" << num(X(xv)) << "\" y=\"" << H - mb + 16 << "\" text-anchor=\"middle\">" << num(xv)
           << "</text>\n";
        os << "<text x=\"" << ml - 6 << "\" y=\"" << num(Y(yv) + 4) << "\" text-anchor=\"end\">" << num(yv)
           << "</text>\n";
    }
    for (auto [x, y] : pts)
        os << "<circle cx=\"" << num(X(x)) << "\" cy=\"" << num(Y(y)) << "\" r=\"3\" fill=\"steelblue\"/>\n";
    if (fit) {
        const double xa = x0 + padx, xb = x1 - padx;
        os << "<polyline fill=\"none\" stroke=\"firebrick\" points=\"" << num(X(xa)) << ','
           << num(Y(fit->intercept + fit->slope * xa)) << ' ' << num(X(xb)) << ','
           << num(Y(fit->intercept + fit->slope * xb)) << "\"/>\n";
        os << "<text x=\"" << W - mr - 4 << "\" y=\"" << mt + 4 << "\" text-anchor=\"end\" class=\"slope\">"
           << slope_annotation(*fit) << "</text>\n";
    }
    os << "</svg>\n";

    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << os.str();
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {

static_assert(std::endian::native == std::endian::little, "grid files assume a little-endian host");

template <class T>
void put(std::ostream& os, T v)
{
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is)
{
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw std::runtime_error("grid file truncated");
    return v;
}

}  // namespace

void write_field(const GridField& f, const std::filesystem::path& path)
{
    if (f.nx != f.ny || f.Lx != f.Ly) throw std::invalid_argument("write_field: grid files hold square grids");
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write("OPLB", 4);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(f.nx));
    put<double>(out, f.Lx);
    for (int i = 0; i < f.nx; ++i)
        for (int k = 0; k < f.ny; ++k) {
            put<double>(out, f.data(i, k).real());
            put<double>(out, f.data(i, k).imag());
        }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

GridField read_field(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "OPLB", 4) != 0) throw std::runtime_error(path.string() + ": not a grid file");
    const auto n = get<std::uint32_t>(in);
    const auto L = get<double>(in);
    if (n < 2 || n > (1u << 15) || !std::has_single_bit(n)) throw std::runtime_error("grid file: bad N");
    GridField f(static_cast<int>(n), L);
    for (int i = 0; i < f.nx; ++i)
        for (int k = 0; k < f.ny; ++k) {
            const double re = get<double>(in);
            const double im = get<double>(in);
            f.data(i, k) = {re, im};
        }
    return f;
}

}  // namespace osc
