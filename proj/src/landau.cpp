#include "hyperlab/landau.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hyperlab {

namespace {

BigInt parse_integer(std::string_view digits, std::string_view whole) {
    if (digits.empty()) throw std::invalid_argument("parse_rational: malformed number '" + std::string(whole) + "'");
    BigInt v = 0;
    for (char c : digits) {
        if (c < '0' || c > '9')
            throw std::invalid_argument("parse_rational: malformed number '" + std::string(whole) + "'");
        v = v * 10 + (c - '0');
    }
    return v;
}

void require_level(std::int64_t k, std::int64_t m, const Rational& B, int genus) {
    if (k < 1) throw std::invalid_argument("landau: k must be >= 1");
    if (!quantization_check(B, genus))
        throw std::invalid_argument("landau: B violates the quantization condition 2B(g-1) in Z");
    const std::int64_t n = level_count(k, B);
    if (m < 0 || m >= n)
        throw std::invalid_argument("landau: m out of range [0, floor(kB))");
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    bool neg = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    Rational q;
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const BigInt num = parse_integer(s.substr(0, slash), text);
        const BigInt den = parse_integer(s.substr(slash + 1), text);
        if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
        q = Rational(num, den);
    } else if (const auto dot = s.find('.'); dot != std::string_view::npos) {
        const std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
        const BigInt whole = ip.empty() ? BigInt(0) : parse_integer(ip, text);
        const BigInt frac = fp.empty() ? BigInt(0) : parse_integer(fp, text);
        if (ip.empty() && fp.empty())
            throw std::invalid_argument("parse_rational: malformed number '" + std::string(text) + "'");
        BigInt scale = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
        q = Rational(whole * scale + frac, scale);
    } else {
        q = Rational(parse_integer(s, text));
    }
    return neg ? Rational(-q) : q;
}

std::string format_rational(const Rational& q) {
    return boost::multiprecision::numerator(q).str() + "/" +
           boost::multiprecision::denominator(q).str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

bool quantization_check(const Rational& B, int genus) {
    if (genus < 2) throw std::invalid_argument("quantization_check: genus must be >= 2");
    const Rational v = 2 * B * (genus - 1);
    return boost::multiprecision::denominator(v) == 1;
}

std::int64_t level_count(std::int64_t k, const Rational& B) {
    const Rational kb = B * k;
    BigInt q = boost::multiprecision::numerator(kb) / boost::multiprecision::denominator(kb);
    if (kb < 0 && q * boost::multiprecision::denominator(kb) != boost::multiprecision::numerator(kb))
        q -= 1;
    return q.convert_to<std::int64_t>();
}

Rational eigenvalue(std::int64_t k, std::int64_t m, const Rational& B, int genus) {
    require_level(k, m, B, genus);
    return B * k * (Rational(2 * m + 1, 2)) - Rational(BigInt(m) * (m + 1), 2);
}

LandauLevel landau_level(std::int64_t k, std::int64_t m, const Rational& B, int genus) {
    return {k, m, B, eigenvalue(k, m, B, genus), level_count(k, B)};
}

Rational scaled_top_level_exact(std::int64_t k, const Rational& B, int genus) {
    const std::int64_t n = level_count(k, B);
    return eigenvalue(k, n - 1, B, genus) / (BigInt(k) * k);
}

double scaled_top_level(std::int64_t k, const Rational& B, int genus) {
    return to_double(scaled_top_level_exact(k, B, genus));
}

double beta(double s, double B) {
    if (!(B > 0)) throw std::invalid_argument("beta: B must be positive");
    if (!(s >= 0 && s <= B)) throw std::invalid_argument("beta: s must lie in [0, B]");
    return B * s - 0.5 * s * s;
}

double symbol_a(double p, double B) {
    if (!(B > 0)) throw std::invalid_argument("symbol_a: B must be positive");
    const double ec = 0.5 * B * B;
    if (!(p >= 0 && p <= ec)) throw std::invalid_argument("symbol_a: p must lie in [0, B^2/2]");
    // B - sqrt(B^2 - 2p) without cancellation at small p.
    return 2.0 * p / (B + std::sqrt(std::max(0.0, B * B - 2.0 * p)));
}

Rational weinstein_identity_residual(std::int64_t k, std::int64_t m, const Rational& B,
                                     int genus) {
    const Rational lambda = eigenvalue(k, m, B, genus);
    const Rational inv_k(1, k);
    const Rational a(m, k);
    const Rational rhs = B * (a + inv_k / 2) - a * (a + inv_k) / 2;
    return lambda / (BigInt(k) * k) - rhs;
}

WeinsteinModel WeinsteinModel::consecutive(std::int64_t k, std::int64_t count, int multiplicity) {
    if (k < 1) throw std::invalid_argument("WeinsteinModel: k must be >= 1");
    if (count < 0 || multiplicity < 1)
        throw std::invalid_argument("WeinsteinModel: invalid level count or multiplicity");
    WeinsteinModel w;
    w.k = k;
    for (std::int64_t m = 0; m < count; ++m)
        for (int r = 0; r < multiplicity; ++r) w.levels.push_back(m);
    return w;
}

std::vector<double> WeinsteinModel::spectrum() const {
    std::vector<double> s;
    s.reserve(levels.size());
    for (auto m : levels) s.push_back(static_cast<double>(m) / static_cast<double>(k));
    return s;
}

std::int64_t projector_nodes(const WeinsteinModel& model, std::int64_t m) {
    std::int64_t top = m;
    for (auto l : model.levels) top = std::max(top, l);
    return top + 2;
}

Diagonal projector(const WeinsteinModel& model, std::int64_t m) {
    if (m < 0) throw std::invalid_argument("projector: m must be >= 0");
    for (auto l : model.levels)
        if (l < 0) throw std::invalid_argument("projector: levels must be non-negative");
    const std::int64_t nodes = projector_nodes(model, m);
    Diagonal out(model.levels.size());
    for (std::size_t r = 0; r < model.levels.size(); ++r) {
        // e^{i t_j k A} acts on this entry by e^{i t_j level}; reduce the phase
        // index modulo the node count in integers.
        const std::int64_t freq = model.levels[r] - m;
        std::complex<double> acc = 0.0;
        for (std::int64_t j = 0; j < nodes; ++j) {
            std::int64_t p = (j * freq) % nodes;
            if (p < 0) p += nodes;
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(p) /
                                 static_cast<double>(nodes);
            acc += std::polar(1.0, angle);
        }
        out[r] = acc / static_cast<double>(nodes);
    }
    return out;
}

double circle_periodicity(const WeinsteinModel& model) {
    return circle_periodicity(model.k, model.spectrum());
}

double circle_periodicity(std::int64_t k, const std::vector<double>& spectrum) {
    double worst = 0.0;
    for (double lambda : spectrum) {
        const double x = static_cast<double>(k) * lambda;
        const double frac = x - std::round(x);
        worst = std::max(worst, std::abs(std::polar(1.0, 2.0 * std::numbers::pi * frac) - 1.0));
    }
    return worst;
}

}  // namespace hyperlab
