#include "qclab/io.hpp"

#include "qclab/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

namespace qclab::io {
namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// JSON has no token for non-finite numbers; quote them instead.
std::string json_number(double v) {
    if (std::isfinite(v)) return format_double(v);
    return "\"" + format_double(v) + "\"";
}

[[noreturn]] void bad_line(std::size_t line_no, const std::string& why) {
    fail(errc::io_error, "line " + std::to_string(line_no) + ": " + why);
}

double parse_double(std::string_view field, std::size_t line_no) {
    double v = 0.0;
    auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || end != field.data() + field.size()) {
        bad_line(line_no, "expected a number, got '" + std::string(field) + "'");
    }
    return v;
}

int parse_int(std::string_view field, std::size_t line_no) {
    int v = 0;
    auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || end != field.data() + field.size()) {
        bad_line(line_no, "expected an integer, got '" + std::string(field) + "'");
    }
    return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

// Yields (line_no, line) pairs past a verified header, tolerating CRLF and a
// missing final newline.
template <typename RowFn>
void for_each_csv_row(const std::string& text, std::string_view header, RowFn&& row) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line(text.data() + pos,
                              (eol == std::string::npos ? text.size() : eol) - pos);
        pos = (eol == std::string::npos) ? text.size() + 1 : eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        if (line_no == 1) {
            if (line != header) {
                bad_line(1, "expected header '" + std::string(header) + "'");
            }
            continue;
        }
        if (line.empty()) continue;
        row(line_no, line);
    }
}

Window hull_window(std::optional<Window> window, double lo, double hi) {
    if (window) return *window;
    if (lo > hi) return {-0.5, 0.5};
    return {lo - 0.5, hi + 0.5};
}

}  // namespace

std::string to_json(const ExponentialSum& series) {
    std::string out = "{\"terms\":[";
    bool first = true;
    for (const auto& t : series.terms()) {
        if (!first) out += ",";
        first = false;
        out += "{\"omega\":" + json_number(t.omega);
        out += ",\"re\":" + json_number(t.coeff.real());
        out += ",\"im\":" + json_number(t.coeff.imag()) + "}";
    }
    out += "]}\n";
    return out;
}

ExponentialSum series_from_json(const std::string& text, const ToleranceConfig& cfg) {
    auto doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) fail(errc::io_error, "malformed JSON document");
    if (!doc.is_object() || !doc.contains("terms") || !doc["terms"].is_array()) {
        fail(errc::io_error, "expected an object with a 'terms' array");
    }
    std::vector<Term> raw;
    raw.reserve(doc["terms"].size());
    for (const auto& entry : doc["terms"]) {
        if (!entry.is_object() || !entry.contains("omega") || !entry.contains("re") ||
            !entry.contains("im") || !entry["omega"].is_number() || !entry["re"].is_number() ||
            !entry["im"].is_number()) {
            fail(errc::io_error, "each term needs numeric 'omega', 're', 'im'");
        }
        raw.push_back({entry["omega"].get<double>(),
                       Complex(entry["re"].get<double>(), entry["im"].get<double>())});
    }
    return ExponentialSum::normalized(std::move(raw), cfg);
}

std::string to_csv(const ZeroSet& zeros) {
    std::string out = "position,multiplicity\n";
    for (const auto& z : zeros.entries()) {
        out += format_double(z.position) + "," + std::to_string(z.multiplicity) + "\n";
    }
    return out;
}

ZeroSet zero_set_from_csv(const std::string& text, std::optional<Window> window) {
    std::vector<ZeroEntry> entries;
    for_each_csv_row(text, "position,multiplicity", [&](std::size_t line_no, std::string_view line) {
        auto fields = split_fields(line);
        if (fields.size() != 2) bad_line(line_no, "expected 2 fields");
        entries.push_back({parse_double(fields[0], line_no), parse_int(fields[1], line_no)});
    });
    double lo = entries.empty() ? 1.0 : entries.front().position;
    double hi = entries.empty() ? -1.0 : entries.back().position;
    return ZeroSet::create(std::move(entries), hull_window(window, lo, hi));
}

std::string to_csv(const AtomicMeasure& measure) {
    std::string out = "position,mass_re,mass_im\n";
    for (const auto& a : measure.atoms()) {
        out += format_double(a.position) + "," + format_double(a.mass.real()) + "," +
               format_double(a.mass.imag()) + "\n";
    }
    return out;
}

AtomicMeasure measure_from_csv(const std::string& text, const ToleranceConfig& cfg,
                               std::optional<Window> window) {
    std::vector<Atom> atoms;
    for_each_csv_row(text, "position,mass_re,mass_im", [&](std::size_t line_no,
                                                           std::string_view line) {
        auto fields = split_fields(line);
        if (fields.size() != 3) bad_line(line_no, "expected 3 fields");
        atoms.push_back({parse_double(fields[0], line_no),
                         Complex(parse_double(fields[1], line_no),
                                 parse_double(fields[2], line_no))});
    });
    double lo = atoms.empty() ? 1.0 : atoms.front().position;
    double hi = atoms.empty() ? -1.0 : atoms.back().position;
    return AtomicMeasure::create(std::move(atoms), hull_window(window, lo, hi), cfg);
}

std::string to_csv(const GrowthProfile& profile) {
    std::string out = "radius,total_variation,log_tv_over_r\n";
    for (const auto& s : profile.samples) {
        out += format_double(s.radius) + "," + format_double(s.total_variation) + "," +
               format_double(s.log_tv_over_r) + "\n";
    }
    return out;
}

std::string poisson_report_csv(const std::vector<TestFunction>& family,
                               const std::vector<PoissonIdentity>& results) {
    if (family.size() != results.size()) {
        fail(errc::invalid_argument, "one verification result per test function required");
    }
    std::string out = "sigma,t0,omega0,lhs_re,lhs_im,rhs_re,rhs_im,residual\n";
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto& f = family[i];
        const auto& r = results[i];
        out += format_double(f.width()) + "," + format_double(f.center()) + "," +
               format_double(f.modulation()) + "," + format_double(r.lhs.real()) + "," +
               format_double(r.lhs.imag()) + "," + format_double(r.rhs.real()) + "," +
               format_double(r.rhs.imag()) + "," + format_double(r.residual) + "\n";
    }
    return out;
}

std::string periods_csv(const AlmostPeriods& periods) {
    std::string out = "tau\n";
    for (double tau : periods.periods) out += format_double(tau) + "\n";
    return out;
}

std::string displacement_csv(const ApDisplacement& displacement) {
    std::string out = "n,phi\n";
    for (const auto& s : displacement.phi) {
        out += std::to_string(s.index) + "," + format_double(s.value) + "\n";
    }
    return out;
}

std::string to_json(const RoundTripReport& report) {
    auto a = signed_indexing(report.original);
    auto b = signed_indexing(report.recovered);
    std::ptrdiff_t lo = std::max(a.min_index(), b.min_index());
    std::ptrdiff_t hi = std::min(a.max_index(), b.max_index());
    std::string out = "{\"matched_zero_pairs\":[";
    for (std::ptrdiff_t n = lo; n <= hi; ++n) {
        if (n != lo) out += ",";
        out += "{\"original\":" + json_number(a.at(n));
        out += ",\"reconstructed\":" + json_number(b.at(n)) + "}";
    }
    out += "],\"max_displacement\":" + json_number(report.max_displacement);
    out += ",\"ratio_log_slope\":{\"re\":" + json_number(report.ratio_log_slope.real());
    out += ",\"im\":" + json_number(report.ratio_log_slope.imag()) + "}";
    out += ",\"residual\":" + json_number(report.slope_residual) + "}\n";
    return out;
}

std::string to_json(const ProbeReport& report) {
    std::string out = "{\"name\":\"" + report.name + "\",\"per_radius\":[";
    for (std::size_t i = 0; i < report.per_radius.size(); ++i) {
        if (i != 0) out += ",";
        out += "{\"radius\":" + json_number(report.per_radius[i].radius);
        out += ",\"value\":" + json_number(report.per_radius[i].value) + "}";
    }
    out += "],\"verdict_metric\":" + json_number(report.verdict_metric) + "}\n";
    return out;
}

std::string to_csv(const ProbeReport& report) {
    std::string out = "radius,value\n";
    for (const auto& rv : report.per_radius) {
        out += format_double(rv.radius) + "," + format_double(rv.value) + "\n";
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) fail(errc::io_error, "read failure on '" + path + "'");
    return std::move(buffer).str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail(errc::io_error, "write failure on '" + path + "'");
}

}  // namespace qclab::io
