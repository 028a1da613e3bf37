#include <CLI11.hpp>

#include "qclab/almost_periodicity.hpp"
#include "qclab/atomic_measure.hpp"
#include "qclab/diffraction.hpp"
#include "qclab/errors.hpp"
#include "qclab/io.hpp"
#include "qclab/logging.hpp"
#include "qclab/poisson.hpp"
#include "qclab/probes.hpp"
#include "qclab/reconstruction.hpp"
#include "qclab/zero_finder.hpp"

#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace {

using namespace qclab;

// Flag values shared across subcommands.  A window given as "--window A B"
// arrives as a two-element vector; height 0 means "choose automatically".
struct Options {
    std::string input;
    std::string other;
    std::string spectrum;
    std::string output;
    std::vector<double> window;
    std::vector<double> radii;
    std::vector<double> search;
    double height = 0.0;
    double gamma_max = 6.0;
    double tol = 0.0;
    double probe_length = 0.0;
    double epsilon = 0.1;
    double stride = 0.25;
    double kernel_width = 0.4;
    double sample_step = 0.05;
    std::size_t max_terms = 0;
    std::string format = "json";
};

std::optional<Window> window_flag(const Options& opt) {
    if (opt.window.empty()) return std::nullopt;
    Window w{opt.window[0], opt.window[1]};
    if (!(w.lo < w.hi)) fail(errc::invalid_argument, "--window needs A < B");
    return w;
}

Window require_window(const Options& opt, const char* why) {
    auto w = window_flag(opt);
    if (!w) fail(errc::invalid_argument, std::string("--window is required ") + why);
    return *w;
}

ToleranceConfig make_config(const Options& opt) {
    ToleranceConfig cfg;
    if (opt.tol > 0.0) cfg.root_tol = opt.tol;
    if (opt.max_terms > 0) cfg.max_terms = opt.max_terms;
    cfg.validate();
    return cfg;
}

// Inputs are self-describing: a JSON document opens with '{', CSVs start
// with one of the two known headers.
using Input = std::variant<ExponentialSum, ZeroSet, AtomicMeasure>;

Input load_input(const std::string& path, const ToleranceConfig& cfg,
                 std::optional<Window> window) {
    std::string text = io::read_text_file(path);
    std::size_t at = text.find_first_not_of(" \t\r\n");
    if (at == std::string::npos) fail(errc::io_error, "'" + path + "' is empty");
    if (text[at] == '{') return io::series_from_json(text, cfg);
    std::size_t eol = text.find('\n', at);
    std::string_view header(text.data() + at, (eol == std::string::npos ? text.size() : eol) - at);
    if (!header.empty() && header.back() == '\r') header.remove_suffix(1);
    if (header == "position,multiplicity") return io::zero_set_from_csv(text.substr(at), window);
    if (header == "position,mass_re,mass_im") {
        return io::measure_from_csv(text.substr(at), cfg, window);
    }
    fail(errc::io_error, "'" + path + "' is neither a series JSON nor a known CSV");
}

ExponentialSum require_series(Input& in, const std::string& path) {
    if (auto* q = std::get_if<ExponentialSum>(&in)) return std::move(*q);
    fail(errc::invalid_argument, "'" + path + "' must contain a series JSON document");
}

// Zeros either come straight from a CSV or are found for a series over the
// window flag.
ZeroSet input_zeros(Input& in, const Options& opt, const ToleranceConfig& cfg) {
    if (auto* zs = std::get_if<ZeroSet>(&in)) return std::move(*zs);
    if (auto* q = std::get_if<ExponentialSum>(&in)) {
        Window w = require_window(opt, "to locate the zeros of a series");
        double strip = opt.height > 0.0 ? opt.height : select_height(*q, cfg);
        return find_real_zeros(*q, w, strip, cfg);
    }
    fail(errc::invalid_argument, "expected a zero-set CSV or a series JSON as input");
}

// A counting measure: zeros CSV and series inputs go through comb_measure,
// a measure CSV is taken as is.
AtomicMeasure input_measure(Input& in, const Options& opt, const ToleranceConfig& cfg) {
    if (auto* m = std::get_if<AtomicMeasure>(&in)) return std::move(*m);
    return comb_measure(input_zeros(in, opt, cfg));
}

AtomicMeasure input_spectrum_of(const ExponentialSum& q, const Options& opt,
                                const ToleranceConfig& cfg) {
    double s = opt.height > 0.0 ? opt.height : select_height(q, cfg);
    return diffraction_spectrum(q, s, opt.gamma_max, cfg);
}

void emit(const Options& opt, const std::string& payload) {
    if (opt.output.empty()) {
        std::fwrite(payload.data(), 1, payload.size(), stdout);
    } else {
        io::write_text_file(opt.output, payload);
    }
}

std::string render_probe(const ProbeReport& report, const Options& opt) {
    if (opt.format == "csv") return io::to_csv(report);
    return io::to_json(report);
}

// Largest ball radius guaranteed strictly inside both windows around 0.
double default_reach(const Window& a, const Window& b) {
    double reach = std::min(std::min(-a.lo, a.hi), std::min(-b.lo, b.hi));
    if (!(reach > 0.0)) {
        fail(errc::window_too_small, "windows must surround 0 for ball probes");
    }
    return reach;
}

std::vector<double> probe_radii(const Options& opt, const Window& a, const Window& b) {
    if (!opt.radii.empty()) return opt.radii;
    double reach = 0.999 * default_reach(a, b);
    return {0.25 * reach, 0.5 * reach, 0.75 * reach, reach};
}

int run_zeros(const Options& opt, const ToleranceConfig& cfg) {
    auto in = load_input(opt.input, cfg, window_flag(opt));
    auto q = require_series(in, opt.input);
    Window w = require_window(opt, "to bound the zero search");
    double strip = opt.height > 0.0 ? opt.height : select_height(q, cfg);
    auto zs = find_real_zeros(q, w, strip, cfg);
    QCLAB_INFO("found " << zs.total_count() << " zeros in [" << w.lo << ", " << w.hi << "]");
    emit(opt, io::to_csv(zs));
    return 0;
}

int run_spectrum(const Options& opt, const ToleranceConfig& cfg) {
    auto in = load_input(opt.input, cfg, window_flag(opt));
    auto q = require_series(in, opt.input);
    auto m_hat = input_spectrum_of(q, opt, cfg);
    QCLAB_INFO("spectrum carries " << m_hat.atoms().size() << " atoms up to |gamma| = "
                                   << opt.gamma_max);
    emit(opt, io::to_csv(m_hat));
    return 0;
}

int run_reconstruct(const Options& opt, const ToleranceConfig& cfg) {
    auto in = load_input(opt.input, cfg, window_flag(opt));
    AtomicMeasure m_hat = [&] {
        if (auto* m = std::get_if<AtomicMeasure>(&in)) return std::move(*m);
        auto q = require_series(in, opt.input);
        return input_spectrum_of(q, opt, cfg);
    }();
    double density = m_hat.mass_at(0.0, cfg.freq_merge_tol).real();
    double y0 = opt.height;
    if (!(y0 > 0.0)) {
        double reach = std::min(-m_hat.window().lo, m_hat.window().hi);
        auto profile =
            growth_profile(m_hat, {0.25 * reach, 0.5 * reach, 0.75 * reach, 0.9999 * reach});
        y0 = std::max(1.0, 2.0 * profile.max_slope());
    }
    auto rec = reconstruct_series(m_hat, density, y0, cfg);
    QCLAB_INFO("reconstructed at height " << rec.height << " with density " << rec.density
                                          << ", dropped mass " << rec.dropped_mass);
    emit(opt, io::to_json(rec.remapped));
    return 0;
}

int run_roundtrip(const Options& opt, const ToleranceConfig& cfg) {
    auto in = load_input(opt.input, cfg, window_flag(opt));
    auto q = require_series(in, opt.input);
    Window w = require_window(opt, "to bound the zero search");
    auto report = round_trip_report(q, w, cfg, opt.gamma_max, opt.height);
    QCLAB_INFO("matched " << report.matched_pairs << " zero pairs, max displacement "
                          << report.max_displacement);
    emit(opt, io::to_json(report));
    return 0;
}

int run_verify_poisson(const Options& opt, const ToleranceConfig& cfg) {
    auto in = load_input(opt.input, cfg, window_flag(opt));
    AtomicMeasure mu;
    AtomicMeasure mu_hat;
    if (auto* q = std::get_if<ExponentialSum>(&in)) {
        mu_hat = input_spectrum_of(*q, opt, cfg);
        mu = comb_measure(input_zeros(in, opt, cfg));
    } else {
        if (opt.spectrum.empty()) {
            fail(errc::invalid_argument, "CSV input needs --spectrum with the transform");
        }
        mu = input_measure(in, opt, cfg);
        auto spec_in = load_input(opt.spectrum, cfg, std::nullopt);
        if (auto* m = std::get_if<AtomicMeasure>(&spec_in)) {
            mu_hat = std::move(*m);
        } else {
            fail(errc::invalid_argument, "--spectrum must be a measure CSV");
        }
    }
    auto family = gaussian_family();
    std::vector<PoissonIdentity> results;
    results.reserve(family.size());
    for (const auto& f : family) results.push_back(verify_poisson(mu, mu_hat, f));
    emit(opt, io::poisson_report_csv(family, results));
    return 0;
}

int run_density(const Options& opt, const ToleranceConfig& cfg) {
    auto in = load_input(opt.input, cfg, window_flag(opt));
    auto zs = input_zeros(in, opt, cfg);
    double probe = opt.probe_length > 0.0 ? opt.probe_length : zs.window().length() / 4.0;
    auto est = density(zs, probe);
    char buf[160];
    std::snprintf(buf, sizeof buf, "density,uncertainty,low,high\n%.17g,%.17g,%.17g,%.17g\n",
                  est.density, est.uncertainty, est.low, est.high);
    emit(opt, buf);
    return 0;
}

int run_almost_periods(const Options& opt, const ToleranceConfig& cfg) {
    auto in = load_input(opt.input, cfg, window_flag(opt));
    auto zs = input_zeros(in, opt, cfg);
    auto mu = comb_measure(zs);
    auto kernel = TriangleKernel::create(opt.kernel_width);

    // Convolution needs the kernel support inside the measure window, so the
    // sampling grid stays one kernel width plus one step clear of the edges.
    double margin = opt.kernel_width + opt.sample_step;
    Window grid{mu.window().lo + margin, mu.window().hi - margin};
    if (!(grid.lo < grid.hi)) {
        fail(errc::window_too_small, "window too narrow for the smoothing kernel");
    }
    auto g = sample([&](double t) { return convolve(mu, kernel, t).value; }, grid,
                    opt.sample_step);

    Window search = opt.search.empty() ? Window{opt.stride, g.span() / 2.0}
                                       : Window{opt.search[0], opt.search[1]};
    auto periods = almost_periods(g, opt.epsilon, search, opt.stride);
    QCLAB_INFO(periods.periods.size() << " almost periods, max gap " << periods.max_gap);
    emit(opt, io::periods_csv(periods));
    return 0;
}

int run_probe_uniqueness(const Options& opt, const ToleranceConfig& cfg) {
    auto in = load_input(opt.input, cfg, window_flag(opt));
    auto mu = input_measure(in, opt, cfg);
    auto other_in = load_input(opt.other, cfg, window_flag(opt));
    auto nu = input_measure(other_in, opt, cfg);
    auto report = probe_uniqueness(mu, nu, probe_radii(opt, mu.window(), nu.window()));
    emit(opt, render_probe(report, opt));
    return 0;
}

int run_probe_perturbation(const Options& opt, const ToleranceConfig& cfg) {
    auto in = load_input(opt.input, cfg, window_flag(opt));
    auto a = input_zeros(in, opt, cfg);
    auto other_in = load_input(opt.other, cfg, window_flag(opt));
    auto c = input_zeros(other_in, opt, cfg);
    auto report = probe_perturbation(a, c);
    emit(opt, render_probe(report, opt));
    return 0;
}

int run_probe_lattice(const Options& opt, const ToleranceConfig& cfg) {
    auto in = load_input(opt.input, cfg, window_flag(opt));
    ZeroSet zs;
    AtomicMeasure m_hat;
    if (auto* q = std::get_if<ExponentialSum>(&in)) {
        m_hat = input_spectrum_of(*q, opt, cfg);
        zs = input_zeros(in, opt, cfg);
    } else {
        if (opt.spectrum.empty()) {
            fail(errc::invalid_argument, "zeros CSV input needs --spectrum with the transform");
        }
        zs = input_zeros(in, opt, cfg);
        auto spec_in = load_input(opt.spectrum, cfg, std::nullopt);
        if (auto* m = std::get_if<AtomicMeasure>(&spec_in)) {
            m_hat = std::move(*m);
        } else {
            fail(errc::invalid_argument, "--spectrum must be a measure CSV");
        }
    }
    auto report = probe_lattice_structure(zs, m_hat, cfg);
    emit(opt, render_probe(report, opt));
    return 0;
}

int run_probe_growth(const Options& opt, const ToleranceConfig& cfg) {
    auto in = load_input(opt.input, cfg, window_flag(opt));
    auto mu = input_measure(in, opt, cfg);
    auto report = probe_mass_growth(mu, probe_radii(opt, mu.window(), mu.window()));
    emit(opt, render_probe(report, opt));
    return 0;
}

void add_common_flags(CLI::App* sub, Options& opt, bool needs_input = true) {
    auto* input = sub->add_option("--input", opt.input,
                                  "series JSON, zero-set CSV, or measure CSV");
    if (needs_input) input->required();
    sub->add_option("--output", opt.output, "write the result here instead of stdout");
    sub->add_option("--window", opt.window, "real-axis window A B")->expected(2);
    sub->add_option("--height", opt.height, "line height / strip half-height (0 = automatic)");
    sub->add_option("--gamma-window", opt.gamma_max, "spectrum frequency cutoff");
    sub->add_option("--tol", opt.tol, "located-zero accuracy (default 1e-10)");
    sub->add_option("--max-terms", opt.max_terms, "series term cap");
    sub->add_option("--format", opt.format, "report encoding, json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exponential-sum zero sets and their pure-point spectra"};
    app.require_subcommand(1);
    Options opt;

    auto* zeros = app.add_subcommand("zeros", "locate the real zeros of a series");
    add_common_flags(zeros, opt);
    auto* spectrum = app.add_subcommand("spectrum", "atoms of the transformed counting measure");
    add_common_flags(spectrum, opt);
    auto* reconstruct =
        app.add_subcommand("reconstruct", "rebuild a zero-carrying series from a spectrum");
    add_common_flags(reconstruct, opt);
    auto* roundtrip =
        app.add_subcommand("roundtrip", "zeros -> spectrum -> reconstruction -> zeros report");
    add_common_flags(roundtrip, opt);
    auto* poisson =
        app.add_subcommand("verify-poisson", "check the summation identity on Gaussian probes");
    add_common_flags(poisson, opt);
    poisson->add_option("--spectrum", opt.spectrum, "measure CSV with the transform");
    auto* dens = app.add_subcommand("density", "windowed zero-counting density");
    add_common_flags(dens, opt);
    dens->add_option("--probe-length", opt.probe_length,
                     "count window length (default: a quarter of the window)");
    auto* almost = app.add_subcommand("almost-periods",
                                      "epsilon-almost periods of the smoothed counting measure");
    add_common_flags(almost, opt);
    almost->add_option("--epsilon", opt.epsilon, "sup-norm tolerance");
    almost->add_option("--search", opt.search, "shift search range LO HI")->expected(2);
    almost->add_option("--stride", opt.stride, "shift grid spacing");
    almost->add_option("--kernel-width", opt.kernel_width, "triangle kernel half-width");
    almost->add_option("--step", opt.sample_step, "sampling grid step");
    auto* uniq = app.add_subcommand("probe-uniqueness", "ball-normalized distance of two measures");
    add_common_flags(uniq, opt);
    uniq->add_option("--other", opt.other, "second measure or zero set")->required();
    uniq->add_option("--radii", opt.radii, "ball radii (default: quarters of the reach)");
    auto* perturb =
        app.add_subcommand("probe-perturbation", "shell-wise displacement of two zero sets");
    add_common_flags(perturb, opt);
    perturb->add_option("--other", opt.other, "second zero set")->required();
    auto* lattice = app.add_subcommand("probe-lattice",
                                       "cluster zeros modulo periods suggested by the spectrum");
    add_common_flags(lattice, opt);
    lattice->add_option("--spectrum", opt.spectrum, "measure CSV with the transform");
    auto* growth = app.add_subcommand("probe-growth", "ball mass over radius");
    add_common_flags(growth, opt);
    growth->add_option("--radii", opt.radii, "ball radii (default: quarters of the reach)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        auto cfg = make_config(opt);
        if (zeros->parsed()) return run_zeros(opt, cfg);
        if (spectrum->parsed()) return run_spectrum(opt, cfg);
        if (reconstruct->parsed()) return run_reconstruct(opt, cfg);
        if (roundtrip->parsed()) return run_roundtrip(opt, cfg);
        if (poisson->parsed()) return run_verify_poisson(opt, cfg);
        if (dens->parsed()) return run_density(opt, cfg);
        if (almost->parsed()) return run_almost_periods(opt, cfg);
        if (uniq->parsed()) return run_probe_uniqueness(opt, cfg);
        if (perturb->parsed()) return run_probe_perturbation(opt, cfg);
        if (lattice->parsed()) return run_probe_lattice(opt, cfg);
        if (growth->parsed()) return run_probe_growth(opt, cfg);
        return 2;
    } catch (const qclab::error& e) {
        log_message(log_level::error, e.what());
        return e.numerical() ? 3 : 2;
    } catch (const std::exception& e) {
        log_message(log_level::error, e.what());
        return 2;
    }
}
