#include "hyperlab/ergodic.hpp"

#include "hyperlab/fuchsian.hpp"
#include "hyperlab/parallel.hpp"
#include "hyperlab/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace hyperlab {

namespace {

void check_step(double T, double dt) {
    if (!(dt > 0 && dt <= 0.1)) throw std::invalid_argument("birkhoff: dt must lie in (0, 0.1]");
    if (!(T >= dt) || !std::isfinite(T)) throw std::invalid_argument("birkhoff: T must be >= dt");
}

long step_count(double T, double dt) {
    const double q = T / dt;
    const double r = std::round(q);
    if (std::abs(q - r) <= 1e-9 * std::max(1.0, r)) return static_cast<long>(r);
    return static_cast<long>(std::ceil(q));
}

// One pass along each orbit with step h, recording running sums at the
// requested sample counts (sorted ascending).
void run_orbits(const Observable& obs, std::span<const GroupElement> frames,
                const AlgebraElement& y, double h, std::span<const long> checkpoints,
                std::span<const std::size_t> columns, std::vector<std::vector<double>>& out,
                std::size_t row0) {
    const std::size_t n = frames.size();
    if (n == 0) return;
    simd::FrameBatch batch(frames);
    const auto& kern = simd::active();
    std::vector<double> re(n), im(n), sums(n, 0.0);
    std::vector<std::uint8_t> inside(n);

    auto settle = [&] {
        for (std::size_t k = 0; k < n; ++k) batch.set(k, batch.get(k).renormalized());
        kern.base_points(batch.span(), re.data(), im.data());
        in_domain_batch(re, im, inside);
        for (std::size_t k = 0; k < n; ++k) {
            if (!inside[k]) batch.set(k, reduce_frame(batch.get(k)).frame);
            sums[k] += obs.at_reduced(batch.get(k));
        }
    };

    // Reduce the starting frames so every orbit starts from the same lift.
    for (std::size_t k = 0; k < n; ++k) batch.set(k, reduce_frame(frames[k]).frame);
    kern.right_multiply(batch.span(), exp_algebra(y, 0.5 * h));
    settle();
    const GroupElement step = exp_algebra(y, h);
    long done = 1;
    std::size_t next = 0;
    while (next < checkpoints.size()) {
        while (next < checkpoints.size() && checkpoints[next] == done) {
            for (std::size_t k = 0; k < n; ++k)
                out[row0 + k][columns[next]] = sums[k] / static_cast<double>(done);
            ++next;
        }
        if (next == checkpoints.size()) break;
        kern.right_multiply(batch.span(), step);
        settle();
        ++done;
    }
}

}  // namespace

std::vector<std::vector<double>> birkhoff_table(const Observable& obs,
                                                std::span<const GroupElement> frames,
                                                const AlgebraElement& y,
                                                std::span<const double> horizons, double dt,
                                                int shards) {
    std::vector<std::vector<double>> out(frames.size(), std::vector<double>(horizons.size()));
    if (obs.is_constant()) {
        const double v = obs(GroupElement::identity());
        for (const double T : horizons) check_step(T, dt);
        for (auto& row : out) std::fill(row.begin(), row.end(), v);
        return out;
    }
    // Group horizons by their midpoint step h = T / n.
    std::map<double, std::vector<std::pair<long, std::size_t>>> groups;
    for (std::size_t j = 0; j < horizons.size(); ++j) {
        check_step(horizons[j], dt);
        const long n = step_count(horizons[j], dt);
        groups[horizons[j] / static_cast<double>(n)].emplace_back(n, j);
    }
    for (auto& [h, members] : groups) {
        std::sort(members.begin(), members.end());
        std::vector<long> checkpoints;
        std::vector<std::size_t> columns;
        for (const auto& [n, j] : members) {
            checkpoints.push_back(n);
            columns.push_back(j);
        }
        for_shards(frames.size(), shards, [&](int, std::size_t lo, std::size_t hi) {
            run_orbits(obs, frames.subspan(lo, hi - lo), y, h, checkpoints, columns, out, lo);
        });
    }
    return out;
}

double birkhoff(const Observable& obs, const GroupElement& frame, const AlgebraElement& y,
                double T, double dt) {
    const double horizon[1] = {T};
    return birkhoff_table(obs, std::span(&frame, 1), y, horizon, dt)[0][0];
}

DecayTable equidistribution_scan(const Observable& obs, std::span<const GroupElement> states,
                                 const AlgebraElement& y, std::vector<double> horizons,
                                 double reference, double dt, int shards) {
    if (states.size() < 10) throw std::invalid_argument("equidistribution_scan: need >= 10 states");
    if (horizons.size() < 4)
        throw std::invalid_argument("equidistribution_scan: need >= 4 horizons");
    std::sort(horizons.begin(), horizons.end());
    if (std::adjacent_find(horizons.begin(), horizons.end()) != horizons.end())
        throw std::invalid_argument("equidistribution_scan: horizons must be distinct");
    const auto table = birkhoff_table(obs, states, y, horizons, dt, shards);
    DecayTable out;
    out.horizons = horizons;
    out.reference = reference;
    out.sup_errors.assign(horizons.size(), 0.0);
    for (const auto& row : table)
        for (std::size_t j = 0; j < row.size(); ++j)
            out.sup_errors[j] = std::max(out.sup_errors[j], std::abs(row[j] - reference));
    return out;
}

ThetaFit decay_fit(const DecayTable& table) {
    if (table.horizons.size() != table.sup_errors.size())
        throw std::invalid_argument("decay_fit: column lengths differ");
    std::vector<double> x, yv;
    for (std::size_t j = 0; j < table.horizons.size(); ++j) {
        if (j > 0 && !(table.horizons[j] > table.horizons[j - 1]))
            throw std::invalid_argument("decay_fit: horizons must be strictly increasing");
        if (table.horizons[j] < kFitMinHorizon) continue;
        const double e = table.sup_errors[j];
        if (e < 0 || !std::isfinite(e)) throw std::invalid_argument("decay_fit: invalid error value");
        if (e == 0) throw ExactConvergence("decay_fit: zero error row (exact convergence)");
        x.push_back(std::log(table.horizons[j]));
        yv.push_back(std::log(e));
    }
    if (x.size() < 4) throw std::invalid_argument("decay_fit: need >= 4 rows with T >= 10");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += yv[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (yv[k] - my);
        syy += (yv[k] - my) * (yv[k] - my);
    }
    const double slope = sxy / sxx;
    ThetaFit fit;
    fit.theta = -slope;
    fit.rows_used = static_cast<int>(x.size());
    const double ss_res = std::max(0.0, syy - slope * sxy);
    fit.r_squared = syy > 0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return fit;
}

void write_csv(std::ostream& os, const DecayTable& table) {
    os << "T,sup_error\n";
    char buf[64];
    for (std::size_t j = 0; j < table.horizons.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", table.horizons[j], table.sup_errors[j]);
        os << buf;
    }
}

DecayTable read_decay_csv(std::istream& is) {
    DecayTable t;
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("decay csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "T,sup_error") throw std::invalid_argument("decay csv: expected header T,sup_error");
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("decay csv: malformed row");
        try {
            t.horizons.push_back(std::stod(line.substr(0, comma)));
            t.sup_errors.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::logic_error&) {
            throw std::invalid_argument("decay csv: non-numeric field in '" + line + "'");
        }
    }
    return t;
}

}  // namespace hyperlab
