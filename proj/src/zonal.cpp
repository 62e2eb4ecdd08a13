#include "hyperlab/zonal.hpp"

#include "hyperlab/parallel.hpp"
#include "hyperlab/rng.hpp"
#include "hyperlab/simd/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hyperlab {

ZonalTorus::ZonalTorus(const MagneticParams& params, const GroupElement& anchor)
    : params_(params),
      anchor_(anchor),
      generator_(hyperlab::generator(params)),
      period_(primitive_period(params)) {}

GroupElement ZonalTorus::point(double theta, double t) const {
    return (anchor_ * exp_algebra(kV, theta) * exp_algebra(generator_, t)).renormalized();
}

GroupElement ZonalTorus::reduced_point(double theta, double t) const {
    return reduce_frame(point(theta, t)).frame;
}

double defect_moment(const ZonalTorus& torus, const FrameFunction& f, int grid_theta,
                     int grid_t) {
    if (grid_theta < kMinMomentGrid || grid_t < kMinMomentGrid)
        throw std::invalid_argument("defect_moment: grids must be >= 32");
    const double dtheta = 2.0 * std::numbers::pi / grid_theta;
    const double dt = torus.period() / grid_t;
    double sum = 0.0;
    for (int a = 0; a < grid_theta; ++a)
        for (int b = 0; b < grid_t; ++b)
            sum += f(torus.reduced_point((a + 0.5) * dtheta, (b + 0.5) * dt));
    return sum / (static_cast<double>(grid_theta) * grid_t);
}

double defect_moment(const ZonalTorus& torus, const Observable& obs, int grid_theta, int grid_t) {
    return defect_moment(
        torus, [&obs](const GroupElement& g) { return obs.at_reduced(g); }, grid_theta, grid_t);
}

double RadialHistogram::pdf(std::size_t b) const {
    return static_cast<double>(counts.at(b)) / (static_cast<double>(total) * bin_width);
}

double RadialHistogram::mass() const {
    std::uint64_t s = overflow;
    for (auto c : counts) s += c;
    return total == 0 ? 0.0 : static_cast<double>(s) / static_cast<double>(total);
}

double max_excursion(const MagneticParams& params) {
    // cosh r(t) = 1 + sin^2(wt) (K - 1) with K = (B^2 + 2E) / (B^2 - 2E).
    const double b2 = params.B * params.B, e2 = 2.0 * params.E;
    if (!(b2 > e2)) throw std::invalid_argument("max_excursion: parameters are not elliptic");
    return std::acosh((b2 + e2) / (b2 - e2));
}

int default_radial_bins(const MagneticParams& params) {
    return static_cast<int>(std::ceil(max_excursion(params) / kRadialBinWidth)) + 1;
}

RadialHistogram radial_density(const ZonalTorus& torus, std::int64_t n, std::uint64_t seed,
                               int bins, int shards) {
    if (n < kMinRadialSamples) throw std::invalid_argument("radial_density: n must be >= 1e5");
    if (bins < 1) throw std::invalid_argument("radial_density: bins must be >= 1");
    const auto count = static_cast<std::size_t>(n);
    const int nshards = std::max(1, shards);
    std::vector<RadialHistogram> parts(static_cast<std::size_t>(nshards));
    const AlgebraElement y = torus.generator();
    const double period = torus.period();
    constexpr std::size_t kChunk = 1024;

    for_shards(count, nshards, [&](int s, std::size_t lo, std::size_t hi) {
        RadialHistogram& h = parts[static_cast<std::size_t>(s)];
        h.counts.assign(static_cast<std::size_t>(bins), 0);
        simd::FrameBatch batch;
        std::vector<double> cosh_r;
        for (std::size_t base = lo; base < hi; base += kChunk) {
            const std::size_t m = std::min(kChunk, hi - base);
            batch.resize(m);
            cosh_r.resize(m);
            for (std::size_t j = 0; j < m; ++j) {
                IndexedStream rng(seed, base + j);
                const double theta = 2.0 * std::numbers::pi * rng.uniform();
                const double t = period * rng.uniform();
                // Distances are measured from the anchor's base point.
                batch.set(j, (exp_algebra(kV, theta) * exp_algebra(y, t)));
            }
            simd::active().frame_cosh_radius(batch.span(), cosh_r.data());
            for (std::size_t j = 0; j < m; ++j) {
                const double q = std::max(0.0, cosh_r[j] - 1.0);
                const double r = std::log1p(q + std::sqrt(q * (q + 2.0)));
                const auto b = static_cast<std::size_t>(r / kRadialBinWidth);
                if (b < h.counts.size()) ++h.counts[b];
                else ++h.overflow;
            }
        }
    });

    RadialHistogram out;
    out.bin_width = kRadialBinWidth;
    out.counts.assign(static_cast<std::size_t>(bins), 0);
    out.total = count;
    for (const auto& p : parts) {
        for (std::size_t b = 0; b < p.counts.size(); ++b) out.counts[b] += p.counts[b];
        out.overflow += p.overflow;
    }
    return out;
}

BlowupFit blowup_fit(const RadialHistogram& hist, double window) {
    std::vector<double> x, y;
    for (std::size_t b = 0; b < hist.counts.size() && hist.r_mid(b) <= window; ++b) {
        if (hist.counts[b] == 0) throw std::invalid_argument("blowup_fit: empty bin in fit window");
        const double r = hist.r_mid(b);
        const double alpha = hist.pdf(b) / (2.0 * std::numbers::pi * std::sinh(r));
        x.push_back(std::log(r));
        y.push_back(std::log(alpha));
    }
    if (x.size() < 8) throw std::invalid_argument("blowup_fit: need >= 8 bins in the fit window");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    const double slope = sxy / sxx;
    BlowupFit fit;
    fit.q = -slope;
    fit.c = std::exp(my - slope * mx);
    fit.bins_used = static_cast<int>(x.size());
    fit.window = window;
    return fit;
}

DensityConstants density_constants(const MagneticParams& params, const BlowupFit& fit) {
    if (!(params.E > 0)) throw std::invalid_argument("density_constants: E must be positive");
    const double te = *params.period_scale();
    const double period = primitive_period(params);
    DensityConstants c;
    c.fitted = fit.c;
    c.from_area_formula = 1.0 / (4.0 * std::numbers::pi * te * params.E);
    c.from_orbit_speed = 2.0 / (std::sqrt(2.0 * params.E) * period) / (2.0 * std::numbers::pi);
    c.ratio = c.from_area_formula / c.from_orbit_speed;
    return c;
}

}  // namespace hyperlab
