#include "qclab/exponential_sum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qclab/errors.hpp"
#include "qclab/logging.hpp"

namespace qclab {
namespace {

// Direct pair products are materialized below this count; above it an open
// addressing accumulator keyed by quantized frequency keeps memory bounded.
constexpr std::size_t dense_pair_cutoff = 200000;
// Hard ceiling on pair iterations actually performed by one multiplication.
constexpr std::size_t pair_iteration_budget = 400000000;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Tail-budget pruning for the series expansions: keeps everything whose loss
// could not be absorbed by a tenth of the tail target spread over max_terms.
ToleranceConfig series_internal(const ToleranceConfig& cfg) {
    ToleranceConfig t = cfg;
    double floor = cfg.series_tail_target / (10.0 * static_cast<double>(cfg.max_terms));
    t.prune_threshold = std::min(cfg.prune_threshold, std::max(floor, 1e-300));
    return t;
}

struct HashAccumulator {
    struct Slot {
        std::int64_t key;
        Complex sum;
        double weighted_freq;
        double weight;
    };

    static constexpr std::int64_t empty_key = std::numeric_limits<std::int64_t>::min();

    explicit HashAccumulator(std::size_t expected, std::size_t max_entries)
        : entry_cap(max_entries) {
        std::size_t cap = 1024;
        while (cap < 2 * expected) cap <<= 1;
        slots.assign(cap, Slot{empty_key, Complex{}, 0.0, 0.0});
    }

    static std::size_t hash_key(std::int64_t key) {
        auto x = static_cast<std::uint64_t>(key);
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return static_cast<std::size_t>(x ^ (x >> 31));
    }

    void insert(std::int64_t key, double freq, Complex value) {
        std::size_t mask = slots.size() - 1;
        std::size_t i = hash_key(key) & mask;
        while (true) {
            Slot& s = slots[i];
            if (s.key == key) break;
            if (s.key == empty_key) {
                if (++count > entry_cap) {
                    fail(errc::too_many_terms,
                         "product accumulates more than " + std::to_string(entry_cap) +
                             " distinct frequencies");
                }
                s.key = key;
                break;
            }
            i = (i + 1) & mask;
        }
        Slot& s = slots[i];
        double w = std::abs(value);
        s.sum += value;
        s.weighted_freq += w * freq;
        s.weight += w;
        if (2 * count > slots.size()) grow();
    }

    void grow() {
        std::vector<Slot> old = std::move(slots);
        slots.assign(old.size() * 2, Slot{empty_key, Complex{}, 0.0, 0.0});
        std::size_t mask = slots.size() - 1;
        for (const Slot& s : old) {
            if (s.key == empty_key) continue;
            std::size_t i = hash_key(s.key) & mask;
            while (slots[i].key != empty_key) i = (i + 1) & mask;
            slots[i] = s;
        }
    }

    std::vector<Term> collect(double quantum) const {
        std::vector<Term> out;
        out.reserve(count);
        for (const Slot& s : slots) {
            if (s.key == empty_key) continue;
            double freq = s.weight > 0 ? s.weighted_freq / s.weight
                                       : static_cast<double>(s.key) * quantum;
            out.push_back({freq, s.sum});
        }
        return out;
    }

    std::vector<Slot> slots;
    std::size_t count = 0;
    std::size_t entry_cap;
};

}  // namespace

ExponentialSum ExponentialSum::from_sorted_unchecked(std::vector<Term> terms) {
    ExponentialSum s;
    s.terms_ = std::move(terms);
    return s;
}

ExponentialSum ExponentialSum::normalized(std::vector<Term> raw, const ToleranceConfig& cfg) {
    cfg.validate();
    for (const Term& t : raw) {
        if (!std::isfinite(t.omega) || !std::isfinite(t.coeff.real()) ||
            !std::isfinite(t.coeff.imag())) {
            fail(errc::invalid_argument, "non-finite frequency or coefficient");
        }
    }
    std::sort(raw.begin(), raw.end(),
              [](const Term& a, const Term& b) { return a.omega < b.omega; });

    std::vector<Term> out;
    std::size_t i = 0;
    while (i < raw.size()) {
        std::size_t j = i + 1;
        while (j < raw.size() && raw[j].omega - raw[j - 1].omega <= cfg.freq_merge_tol) ++j;
        Complex sum{};
        double weight = 0.0;
        double weighted_freq = 0.0;
        for (std::size_t k = i; k < j; ++k) {
            double w = std::abs(raw[k].coeff);
            sum += raw[k].coeff;
            weight += w;
            weighted_freq += w * raw[k].omega;
        }
        double rep;
        if (raw[i].omega == raw[j - 1].omega) {
            rep = raw[i].omega;
        } else if (weight > 0.0) {
            rep = weighted_freq / weight;
        } else {
            rep = 0.5 * (raw[i].omega + raw[j - 1].omega);
        }
        if (std::abs(sum) >= cfg.prune_threshold) out.push_back({rep, sum});
        i = j;
    }
    if (out.size() > cfg.max_terms) {
        fail(errc::too_many_terms, std::to_string(out.size()) + " terms exceed the cap of " +
                                       std::to_string(cfg.max_terms));
    }
    return from_sorted_unchecked(std::move(out));
}

ExponentialSum ExponentialSum::constant(Complex value) {
    if (value == Complex{}) return {};
    return from_sorted_unchecked({Term{0.0, value}});
}

ExponentialSum ExponentialSum::harmonic(double omega, Complex coeff) {
    if (!std::isfinite(omega)) fail(errc::invalid_argument, "non-finite frequency");
    if (coeff == Complex{}) return {};
    return from_sorted_unchecked({Term{omega, coeff}});
}

double ExponentialSum::wiener_norm() const {
    double norm = 0.0;
    for (const Term& t : terms_) norm += std::abs(t.coeff);
    return norm;
}

double ExponentialSum::min_frequency() const {
    if (terms_.empty()) fail(errc::empty_series, "min_frequency of an empty sum");
    return terms_.front().omega;
}

double ExponentialSum::max_frequency() const {
    if (terms_.empty()) fail(errc::empty_series, "max_frequency of an empty sum");
    return terms_.back().omega;
}

Complex ExponentialSum::evaluate(Complex z) const {
    Complex acc{};
    for (const Term& t : terms_) {
        acc += t.coeff * std::exp(Complex(0.0, two_pi * t.omega) * z);
    }
    return acc;
}

Complex ExponentialSum::coefficient(double omega, double tol) const {
    Complex acc{};
    auto it = std::lower_bound(terms_.begin(), terms_.end(), omega - tol,
                               [](const Term& t, double v) { return t.omega < v; });
    for (; it != terms_.end() && it->omega <= omega + tol; ++it) acc += it->coeff;
    return acc;
}

ExponentialSum add(const ExponentialSum& p, const ExponentialSum& q, const ToleranceConfig& cfg) {
    std::vector<Term> raw;
    raw.reserve(p.size() + q.size());
    raw.insert(raw.end(), p.terms().begin(), p.terms().end());
    raw.insert(raw.end(), q.terms().begin(), q.terms().end());
    return ExponentialSum::normalized(std::move(raw), cfg);
}

ExponentialSum mul(const ExponentialSum& p, const ExponentialSum& q, const ToleranceConfig& cfg) {
    cfg.validate();
    if (p.empty() || q.empty()) return {};
    const std::vector<Term>& outer = p.terms();

    // Inner side sorted by descending magnitude so each outer term can stop at
    // the first pair that is certifiably negligible: every output frequency
    // receives at most min(|P|,|Q|) contributions, so pairs below
    // prune_threshold / (4 min) shift any merged coefficient by less than a
    // quarter of the prune threshold applied afterwards anyway.
    std::vector<Term> inner(q.terms());
    std::sort(inner.begin(), inner.end(),
              [](const Term& a, const Term& b) { return std::abs(a.coeff) > std::abs(b.coeff); });
    double skip_floor =
        cfg.prune_threshold / (4.0 * static_cast<double>(std::min(p.size(), q.size())));

    std::size_t pair_count = p.size() * q.size();
    std::size_t iterations = 0;

    if (pair_count <= dense_pair_cutoff) {
        std::vector<Term> raw;
        raw.reserve(pair_count);
        for (const Term& a : outer) {
            double mag = std::abs(a.coeff);
            for (const Term& b : inner) {
                if (mag * std::abs(b.coeff) < skip_floor) break;
                raw.push_back({a.omega + b.omega, a.coeff * b.coeff});
            }
        }
        return ExponentialSum::normalized(std::move(raw), cfg);
    }

    double quantum = cfg.freq_merge_tol / 4.0;
    double max_abs_freq = std::max(std::abs(p.min_frequency()), std::abs(p.max_frequency())) +
                          std::max(std::abs(q.min_frequency()), std::abs(q.max_frequency()));
    if (max_abs_freq / quantum > 9e17) {
        fail(errc::invalid_argument, "frequencies too large for merge quantization");
    }

    HashAccumulator acc(cfg.max_terms, 8 * cfg.max_terms);
    for (const Term& a : outer) {
        double mag = std::abs(a.coeff);
        for (const Term& b : inner) {
            if (mag * std::abs(b.coeff) < skip_floor) break;
            if (++iterations > pair_iteration_budget) {
                fail(errc::too_many_terms, "product exceeds the pair iteration budget");
            }
            double freq = a.omega + b.omega;
            acc.insert(std::llround(freq / quantum), freq, a.coeff * b.coeff);
        }
    }
    return ExponentialSum::normalized(acc.collect(quantum), cfg);
}

ExponentialSum scale(const ExponentialSum& p, Complex factor) {
    if (factor == Complex{}) return {};
    std::vector<Term> out;
    out.reserve(p.size());
    for (const Term& t : p.terms()) {
        Complex c = t.coeff * factor;
        if (c != Complex{}) out.push_back({t.omega, c});
    }
    return ExponentialSum::from_sorted_unchecked(std::move(out));
}

ExponentialSum differentiate(const ExponentialSum& p) {
    std::vector<Term> out;
    out.reserve(p.size());
    for (const Term& t : p.terms()) {
        Complex c = t.coeff * Complex(0.0, two_pi * t.omega);
        if (c != Complex{}) out.push_back({t.omega, c});
    }
    return ExponentialSum::from_sorted_unchecked(std::move(out));
}

ExponentialSum restrict_to_line(const ExponentialSum& q, double y) {
    if (!std::isfinite(y)) fail(errc::invalid_argument, "line height must be finite");
    std::vector<Term> out;
    out.reserve(q.size());
    for (const Term& t : q.terms()) {
        double exponent = -two_pi * t.omega * y;
        if (exponent + std::log(std::abs(t.coeff)) > 700.0) {
            fail(errc::invalid_argument, "line restriction overflows at frequency " +
                                             fmt_double(t.omega));
        }
        Complex c = t.coeff * std::exp(exponent);
        if (c != Complex{}) out.push_back({t.omega, c});
    }
    return ExponentialSum::from_sorted_unchecked(std::move(out));
}

double edge_remainder_norm(const ExponentialSum& q, double height, LineSide side) {
    if (q.empty()) fail(errc::empty_series, "edge remainder of an empty sum");
    if (!(height > 0)) fail(errc::invalid_argument, "line height must be positive");
    const Term& edge = side == LineSide::upper ? q.terms().front() : q.terms().back();
    double norm = 0.0;
    for (const Term& t : q.terms()) {
        if (&t == &edge) continue;
        norm += std::abs(t.coeff / edge.coeff) *
                std::exp(-two_pi * std::abs(t.omega - edge.omega) * height);
    }
    return norm;
}

ExponentialSum exp_sum(const ExponentialSum& q, const ToleranceConfig& cfg, double norm_hint) {
    cfg.validate();
    if (!(norm_hint >= 0)) fail(errc::invalid_argument, "norm_hint must be non-negative");
    double r = std::max(q.wiener_norm(), norm_hint);
    if (q.empty()) return ExponentialSum::constant(1.0);
    if (!std::isfinite(r)) fail(errc::invalid_argument, "non-finite norm");

    double log_tail = std::log(cfg.series_tail_target);
    std::size_t n_terms = 0;
    while (r + static_cast<double>(n_terms) * std::log(r) -
               std::lgamma(static_cast<double>(n_terms) + 1.0) >
           log_tail) {
        if (++n_terms > 100000) {
            fail(errc::too_many_terms, "exp series does not reach the tail target");
        }
    }

    ToleranceConfig icfg = series_internal(cfg);
    ExponentialSum result = ExponentialSum::constant(1.0);
    ExponentialSum power = ExponentialSum::constant(1.0);
    for (std::size_t n = 1; n <= n_terms; ++n) {
        power = mul(power, q, icfg);
        power = scale(power, 1.0 / static_cast<double>(n));
        result = add(result, power, icfg);
    }
    QCLAB_DEBUG("exp_sum: norm " << r << ", " << n_terms << " powers, " << result.size()
                                 << " terms");
    return result;
}

ExponentialSum log1p_sum(const ExponentialSum& h, const ToleranceConfig& cfg) {
    cfg.validate();
    if (h.empty()) return {};
    double r = h.wiener_norm();
    if (!(r < 1.0)) {
        fail(errc::norm_not_less_than_one, "log series needs norm < 1, got " + fmt_double(r));
    }

    double log_tail = std::log(cfg.series_tail_target);
    double log_r = std::log(r);
    std::size_t n_terms = 1;
    while (static_cast<double>(n_terms + 1) * log_r -
               std::log(static_cast<double>(n_terms + 1)) - std::log1p(-r) >
           log_tail) {
        if (++n_terms > 1000000) {
            fail(errc::too_many_terms, "log series does not reach the tail target");
        }
    }

    ToleranceConfig icfg = series_internal(cfg);
    ExponentialSum result = h;
    ExponentialSum power = h;
    for (std::size_t n = 2; n <= n_terms; ++n) {
        power = mul(power, h, icfg);
        double coeff = (n % 2 == 0 ? -1.0 : 1.0) / static_cast<double>(n);
        result = add(result, scale(power, coeff), icfg);
    }
    QCLAB_DEBUG("log1p_sum: norm " << r << ", " << n_terms << " powers, " << result.size()
                                   << " terms");
    return result;
}

ExponentialSum log_derivative_series(const ExponentialSum& q, double height, LineSide side,
                                     const ToleranceConfig& cfg) {
    cfg.validate();
    if (q.empty()) fail(errc::empty_series, "log derivative of an empty sum");
    if (!(height > 0)) fail(errc::invalid_argument, "line height must be positive");

    ToleranceConfig icfg = series_internal(cfg);
    const Term& edge = side == LineSide::upper ? q.terms().front() : q.terms().back();

    std::vector<Term> raw;
    raw.reserve(q.size() - 1);
    for (const Term& t : q.terms()) {
        if (&t == &edge) continue;
        double gamma = t.omega - edge.omega;
        raw.push_back({gamma, t.coeff / edge.coeff * std::exp(-two_pi * std::abs(gamma) * height)});
    }
    ExponentialSum remainder = ExponentialSum::normalized(std::move(raw), icfg);

    double r = remainder.wiener_norm();
    if (!(r < 1.0)) {
        fail(errc::factorization_failed,
             "edge remainder norm " + fmt_double(r) + " at height " + fmt_double(height) +
                 " admits zeros on the line");
    }

    ExponentialSum constant_part = ExponentialSum::constant(Complex(0.0, two_pi * edge.omega));
    if (remainder.empty()) return constant_part;

    // (log(1+H))' = H' * sum_k (-H)^k; the geometric tail after K powers is
    // bounded by |H'| r^{K+1} / (1-r).
    ExponentialSum derivative = differentiate(remainder);
    double dnorm = derivative.wiener_norm();
    double log_tail = std::log(cfg.series_tail_target);
    std::size_t powers = 0;
    if (dnorm > 0.0) {
        double log_r = std::log(r);
        while (std::log(dnorm) + static_cast<double>(powers + 1) * log_r - std::log1p(-r) >
               log_tail) {
            if (++powers > 1000000) {
                fail(errc::too_many_terms, "geometric series does not reach the tail target");
            }
        }
    }

    ExponentialSum geometric = ExponentialSum::constant(1.0);
    ExponentialSum power = ExponentialSum::constant(1.0);
    for (std::size_t k = 1; k <= powers; ++k) {
        power = mul(power, remainder, icfg);
        geometric = add(geometric, scale(power, k % 2 == 0 ? 1.0 : -1.0), icfg);
    }
    ExponentialSum series = mul(derivative, geometric, icfg);
    QCLAB_DEBUG("log_derivative_series: remainder norm " << r << ", " << powers << " powers, "
                                                         << series.size() << " terms");
    return add(series, constant_part, icfg);
}

}  // namespace qclab
