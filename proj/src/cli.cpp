#include "hyperlab/cli.hpp"

#include "hyperlab/ergodic.hpp"
#include "hyperlab/fuchsian.hpp"
#include "hyperlab/landau.hpp"
#include "hyperlab/magnetic.hpp"
#include "hyperlab/observables.hpp"
#include "hyperlab/rng.hpp"
#include "hyperlab/zonal.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace hyperlab::cli {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Options {
    std::string B = "2";
    std::string E = "1";
    std::int64_t k = 10;
    std::optional<std::int64_t> m;
    std::uint64_t seed = 1;
    std::int64_t n = 0;  // 0: subcommand default
    std::string horizons = "10,100,1000,10000";
    double r0 = 1.2;
    std::string output;
    std::string format = "json";
    int shards = 1;
    bool timing = false;

    double t = 1.0;
    double t_max = 50.0;
    int points = 64;
    std::string generator = "horocycle";
    double center_re = 0.0;
    double center_im = 1.0;
    int fiber_mode = 0;
    int states = 20;
    double dt = kDefaultBirkhoffStep;
    std::string input;
    std::int64_t k_max = 200;
    std::string b_list = "1/2,1,3/2,2";
    std::int64_t levels = 64;
    int multiplicity = 1;
    int grid = 64;
    int bins = 0;
};

struct Output {
    Json report = Json::object();
    std::optional<std::string> csv;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_number(const std::string& text, const char* flag) {
    try {
        return to_double(parse_rational(text));
    } catch (const std::invalid_argument&) {
        throw UsageError(std::string("invalid value for --") + flag + ": '" + text + "'");
    }
}

MagneticParams params_of(const Options& o) {
    return MagneticParams(parse_number(o.B, "B"), parse_number(o.E, "E"));
}

std::vector<double> parse_horizons(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw UsageError("invalid horizon '" + item + "'");
        }
        if (used != item.size()) throw UsageError("invalid horizon '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// Adding 0.0 maps -0.0 to 0.0.
Json frame_json(const GroupElement& g) {
    return Json::array({g.m11 + 0.0, g.m12 + 0.0, g.m21 + 0.0, g.m22 + 0.0});
}

Json point_json(HalfPlanePoint z) { return Json::array({z.re, z.im}); }

std::int64_t samples(const Options& o, std::int64_t fallback) { return o.n > 0 ? o.n : fallback; }

void require_json(const Options& o, const char* cmd) {
    if (o.format != "json")
        throw UsageError(std::string(cmd) + ": only --format json is supported");
}

Json observable_json(const Observable& obs) {
    nlohmann::json j;
    to_json(j, obs);
    return Json::parse(j.dump());
}

Observable observable_of(const Options& o) {
    return Observable({o.center_re, o.center_im}, o.r0, o.fiber_mode);
}

// Subcommands ---------------------------------------------------------------

Output cmd_classify(const Options& o) {
    require_json(o, "classify");
    const MagneticParams p = params_of(o);
    Output out;
    auto& r = out.report;
    r["B"] = p.B;
    r["E"] = p.E;
    r["regime"] = to_string(classify(p));
    r["E_c"] = p.critical_energy();
    r["det"] = (p.B * p.B - 2.0 * p.E) / 4.0;
    if (const auto te = p.period_scale()) r["T_E"] = *te;
    r["lyapunov_rate"] = lyapunov_rate(p);
    r["quantized"] = p.quantized();
    return out;
}

Output cmd_flow(const Options& o) {
    require_json(o, "flow");
    const MagneticParams p = params_of(o);
    if (!std::isfinite(o.t)) throw UsageError("flow: --t must be finite");
    const GroupElement start = haar_sample(1, o.seed, 1).front();
    const PhaseState s0 = make_state(start, p);
    const PhaseState s1 = flow(s0, o.t);
    Output out;
    auto& r = out.report;
    r["B"] = p.B;
    r["E"] = p.E;
    r["t"] = o.t;
    r["regime"] = to_string(classify(p));
    r["initial_frame"] = frame_json(s0.frame);
    r["initial_base"] = point_json(s0.base());
    r["final_frame"] = frame_json(s1.frame);
    r["final_base"] = point_json(s1.base());
    r["final_in_domain"] = in_domain(s1.base());
    r["base_displacement"] = quotient_distance(s0.base(), s1.base());
    return out;
}

Output cmd_period(const Options& o) {
    require_json(o, "period");
    const MagneticParams p = params_of(o);
    const double ts = primitive_period(p);
    const GroupElement g = exp_algebra(generator(p), ts);
    Output out;
    auto& r = out.report;
    r["B"] = p.B;
    r["E"] = p.E;
    r["t_star"] = ts;
    r["two_pi_T_E"] = 2.0 * std::numbers::pi * *p.period_scale();
    r["return_residual"] = projective_distance(g, GroupElement::identity());
    return out;
}

Output cmd_lyapunov(const Options& o) {
    const MagneticParams p = params_of(o);
    const GrowthFit fit = derivative_growth_fit(p, o.t_max, o.points);
    Output out;
    auto& r = out.report;
    r["B"] = p.B;
    r["E"] = p.E;
    r["t_max"] = o.t_max;
    r["points"] = o.points;
    r["lyapunov_rate"] = lyapunov_rate(p);
    r["fit_rate"] = fit.rate;
    r["poly_degree"] = fit.poly_degree;
    if (o.format == "csv") {
        std::string csv = "t,log_adjoint_norm\n";
        for (std::size_t j = 0; j < fit.times.size(); ++j)
            csv += fmt17(fit.times[j]) + "," + fmt17(fit.log_norms[j]) + "\n";
        out.csv = csv;
    }
    return out;
}

Output cmd_conjugacy(const Options& o) {
    require_json(o, "conjugacy");
    const MagneticParams p = params_of(o);
    const ConjugacyReport c = conjugacy_check(p);
    Output out;
    auto& r = out.report;
    r["B"] = p.B;
    r["E"] = p.E;
    r["class"] = to_string(c.normal.cls);
    r["scale"] = c.normal.scale;
    if (const auto te = p.period_scale()) r["T_E"] = *te;
    r["conjugator"] = frame_json(c.normal.conjugator);
    r["flow_residual"] = c.flow_residual;
    r["scale_residual"] = c.scale_residual;
    r["residual"] = c.residual();
    return out;
}

Output cmd_ergodic_scan(const Options& o) {
    AlgebraElement y;
    Json gen;
    if (o.generator == "horocycle") {
        y = kUplus;
    } else if (o.generator == "geodesic") {
        y = kX;
    } else if (o.generator == "magnetic") {
        const MagneticParams p = params_of(o);
        y = generator(p);
        gen["B"] = p.B;
        gen["E"] = p.E;
    } else {
        throw UsageError("ergodic-scan: --generator must be horocycle, geodesic or magnetic");
    }
    if (o.states < 1) throw UsageError("ergodic-scan: --states must be >= 1");
    const Observable obs = observable_of(o);
    const std::vector<GroupElement> states = haar_sample(o.states, derive_seed(o.seed, 1), o.shards);
    const MonteCarloEstimate ref =
        liouville_average(obs, samples(o, 1000000), derive_seed(o.seed, 2), o.shards);
    DecayTable table = equidistribution_scan(obs, states, y, parse_horizons(o.horizons), ref.mean,
                                             o.dt, o.shards);

    Output out;
    auto& r = out.report;
    gen["name"] = o.generator;
    gen["matrix"] = Json::array({y.a11, y.a12, y.a21, -y.a11});
    r["generator"] = gen;
    r["observable"] = observable_json(obs);
    r["states"] = o.states;
    r["dt"] = o.dt;
    r["reference"] = ref.mean;
    r["reference_stderr"] = ref.stderr_;
    r["horizons"] = table.horizons;
    r["sup_errors"] = table.sup_errors;
    try {
        const ThetaFit fit = decay_fit(table);
        r["fit"] = {{"theta", fit.theta}, {"r_squared", fit.r_squared}, {"rows_used", fit.rows_used}};
    } catch (const ExactConvergence&) {
        r["fit"] = {{"exact_convergence", true}};
    } catch (const std::invalid_argument& e) {
        r["fit"] = {{"error", e.what()}};
    }
    if (o.format == "csv") {
        std::ostringstream os;
        write_csv(os, table);
        out.csv = os.str();
    }
    return out;
}

Output cmd_decay_fit(const Options& o) {
    require_json(o, "decay-fit");
    if (o.input.empty()) throw UsageError("decay-fit: --input is required");
    std::ifstream in(o.input, std::ios::binary);
    if (!in) throw std::runtime_error("decay-fit: cannot open '" + o.input + "'");
    DecayTable table;
    try {
        table = read_decay_csv(in);
    } catch (const std::exception& e) {
        throw UsageError(std::string("decay-fit: ") + e.what());
    }
    Output out;
    auto& r = out.report;
    r["input"] = std::filesystem::path(o.input).filename().string();
    r["rows"] = table.horizons.size();
    try {
        const ThetaFit fit = decay_fit(table);
        r["theta"] = fit.theta;
        r["r_squared"] = fit.r_squared;
        r["rows_used"] = fit.rows_used;
        r["exact_convergence"] = false;
    } catch (const ExactConvergence&) {
        r["exact_convergence"] = true;
    }
    return out;
}

Output cmd_spectra(const Options& o) {
    const Rational B = parse_rational(o.B);
    if (!(B > 0)) throw UsageError("spectra: --B must be positive");
    if (o.k < 1) throw UsageError("spectra: --k must be >= 1");
    if (!quantization_check(B)) throw UsageError("spectra: B violates the quantization condition");
    const std::int64_t nk = level_count(o.k, B);
    const Rational k2 = Rational(BigInt(o.k) * o.k);

    Output out;
    auto& r = out.report;
    r["B"] = format_rational(B);
    r["k"] = o.k;
    r["level_count"] = nk;
    r["E_c"] = format_rational(B * B / 2);
    if (o.m) {
        const Rational lambda = eigenvalue(o.k, *o.m, B);
        r["m"] = *o.m;
        r["lambda"] = format_rational(lambda);
        r["lambda_float"] = to_double(lambda);
        r["scaled"] = to_double(lambda / k2);
    } else if (nk > 0) {
        const Rational top = scaled_top_level_exact(o.k, B);
        r["scaled_top_level"] = format_rational(top);
        r["scaled_top_level_float"] = to_double(top);
    }
    if (o.format == "csv") {
        std::string csv = "k,m,numerator,denominator,lambda_float\n";
        const std::int64_t lo = o.m ? *o.m : 0, hi = o.m ? *o.m + 1 : nk;
        for (std::int64_t m = lo; m < hi; ++m) {
            const Rational lambda = eigenvalue(o.k, m, B);
            csv += std::to_string(o.k) + "," + std::to_string(m) + "," +
                   boost::multiprecision::numerator(lambda).str() + "," +
                   boost::multiprecision::denominator(lambda).str() + "," +
                   fmt17(to_double(lambda)) + "\n";
        }
        out.csv = csv;
    } else if (!o.m) {
        Json levels = Json::array();
        for (std::int64_t m = 0; m < nk; ++m) {
            const Rational lambda = eigenvalue(o.k, m, B);
            levels.push_back({{"m", m}, {"lambda", format_rational(lambda)},
                              {"lambda_float", to_double(lambda)}});
        }
        r["levels"] = levels;
    }
    return out;
}

Output cmd_identity_sweep(const Options& o) {
    require_json(o, "identity-sweep");
    if (o.k_max < 1) throw UsageError("identity-sweep: --k-max must be >= 1");
    std::vector<Rational> fields;
    for (const auto& s : split_list(o.b_list)) {
        const Rational B = parse_rational(s);
        if (!(B > 0) || !quantization_check(B))
            throw UsageError("identity-sweep: invalid field '" + s + "'");
        fields.push_back(B);
    }
    if (fields.empty()) throw UsageError("identity-sweep: --B-list is empty");

    std::int64_t checked = 0, nonzero = 0, non_monotone = 0;
    for (const auto& B : fields)
        for (std::int64_t k = 1; k <= o.k_max; ++k) {
            const std::int64_t nk = level_count(k, B);
            Rational prev;
            for (std::int64_t m = 0; m < nk; ++m) {
                ++checked;
                if (weinstein_identity_residual(k, m, B) != 0) ++nonzero;
                const Rational lambda = eigenvalue(k, m, B);
                if (m > 0 && !(lambda > prev)) ++non_monotone;
                prev = lambda;
            }
        }

    Json tops = Json::array();
    for (const auto& B : fields)
        for (std::int64_t k : {10, 100, 1000, 10000}) {
            if (level_count(k, B) < 1) continue;
            const Rational top = scaled_top_level_exact(k, B);
            const Rational ec = B * B / 2;
            const Rational gap = ec - top;
            const Rational kb = B * k;
            tops.push_back({{"B", format_rational(B)},
                            {"k", k},
                            {"scaled_top_level", format_rational(top)},
                            {"gap", to_double(gap)},
                            {"bound", to_double(B / k)},
                            {"within_bound", gap >= 0 && gap <= B / k},
                            {"kB_integer", boost::multiprecision::denominator(kb) == 1},
                            {"exact", gap == 0}});
        }

    Output out;
    auto& r = out.report;
    r["k_max"] = o.k_max;
    Json bl = Json::array();
    for (const auto& B : fields) bl.push_back(format_rational(B));
    r["fields"] = bl;
    r["checked"] = checked;
    r["nonzero_residuals"] = nonzero;
    r["non_monotone"] = non_monotone;
    r["top_level"] = tops;
    return out;
}

Output cmd_projector_check(const Options& o) {
    require_json(o, "projector-check");
    if (o.levels < 1) throw UsageError("projector-check: --levels must be >= 1");
    const WeinsteinModel model = WeinsteinModel::consecutive(o.k, o.levels, o.multiplicity);
    const std::size_t dim = model.dimension();
    std::vector<Diagonal> proj;
    for (std::int64_t m = 0; m < o.levels; ++m) proj.push_back(projector(model, m));
    double idem = 0.0, orth = 0.0, comp = 0.0, exact = 0.0;
    for (std::size_t a = 0; a < proj.size(); ++a) {
        for (std::size_t r = 0; r < dim; ++r) {
            idem = std::max(idem, std::abs(proj[a][r] * proj[a][r] - proj[a][r]));
            const double want = model.levels[r] == static_cast<std::int64_t>(a) ? 1.0 : 0.0;
            exact = std::max(exact, std::abs(proj[a][r] - want));
        }
        for (std::size_t b = a + 1; b < proj.size(); ++b)
            for (std::size_t r = 0; r < dim; ++r)
                orth = std::max(orth, std::abs(proj[a][r] * proj[b][r]));
    }
    for (std::size_t r = 0; r < dim; ++r) {
        std::complex<double> s = 0.0;
        for (const auto& pm : proj) s += pm[r];
        comp = std::max(comp, std::abs(s - 1.0));
    }
    Output out;
    auto& r = out.report;
    r["k"] = o.k;
    r["levels"] = o.levels;
    r["multiplicity"] = o.multiplicity;
    r["dimension"] = dim;
    r["nodes"] = projector_nodes(model, o.levels - 1);
    r["idempotence"] = idem;
    r["orthogonality"] = orth;
    r["completeness"] = comp;
    r["indicator_error"] = exact;
    r["circle_periodicity"] = circle_periodicity(model);
    return out;
}

Output cmd_zonal_moment(const Options& o) {
    require_json(o, "zonal-moment");
    const MagneticParams p = params_of(o);
    const ZonalTorus torus(p);
    const Observable obs = observable_of(o);
    Output out;
    auto& r = out.report;
    r["B"] = p.B;
    r["E"] = p.E;
    r["observable"] = observable_json(obs);
    r["t_star"] = torus.period();
    r["grid"] = o.grid;
    r["moment"] = defect_moment(torus, obs, o.grid, o.grid);
    r["moment_refined"] = defect_moment(torus, obs, 2 * o.grid, 2 * o.grid);
    r["normalization"] = defect_moment(torus, Observable::constant(1.0), o.grid, o.grid);
    return out;
}

Output cmd_zonal_density(const Options& o) {
    const MagneticParams p = params_of(o);
    const ZonalTorus torus(p);
    const std::int64_t n = samples(o, 10000000);
    const int bins = o.bins > 0 ? o.bins : default_radial_bins(p);
    const RadialHistogram h = radial_density(torus, n, o.seed, bins, o.shards);
    const BlowupFit fit = blowup_fit(h);
    const DensityConstants c = density_constants(p, fit);
    Output out;
    auto& r = out.report;
    r["B"] = p.B;
    r["E"] = p.E;
    r["n"] = n;
    r["bins"] = bins;
    r["bin_width"] = h.bin_width;
    r["q"] = fit.q;
    r["c"] = fit.c;
    r["window"] = fit.window;
    r["bins_used"] = fit.bins_used;
    r["pdf0"] = h.pdf(0);
    r["pdf0_oracle"] = 2.0 / (std::sqrt(2.0 * p.E) * torus.period());
    r["mass"] = h.mass();
    r["overflow"] = h.overflow;
    r["constants"] = {{"fitted", c.fitted},
                      {"from_area_formula", c.from_area_formula},
                      {"from_orbit_speed", c.from_orbit_speed},
                      {"ratio", c.ratio}};
    if (o.format == "csv") {
        std::string csv = "r_mid,pdf,count\n";
        for (std::size_t b = 0; b < h.counts.size(); ++b)
            csv += fmt17(h.r_mid(b)) + "," + fmt17(h.pdf(b)) + "," + std::to_string(h.counts[b]) + "\n";
        out.csv = csv;
    }
    return out;
}

Output cmd_haar_sample(const Options& o) {
    const std::int64_t n = samples(o, 1000);
    const HaarSampleResult res = haar_sample_with_stats(n, o.seed, o.shards);
    Output out;
    auto& r = out.report;
    r["n"] = n;
    r["candidates"] = res.candidates;
    if (o.format == "csv") {
        std::string csv = "m11,m12,m21,m22,re,im,angle\n";
        for (const auto& g : res.frames) {
            const HalfPlanePoint z = base_point(g);
            csv += fmt17(g.m11) + "," + fmt17(g.m12) + "," + fmt17(g.m21) + "," + fmt17(g.m22) +
                   "," + fmt17(z.re) + "," + fmt17(z.im) + "," + fmt17(frame_angle(g)) + "\n";
        }
        out.csv = csv;
    } else {
        Json frames = Json::array();
        for (const auto& g : res.frames) frames.push_back(frame_json(g));
        r["frames"] = frames;
    }
    return out;
}

Output cmd_area_check(const Options& o) {
    require_json(o, "area-check");
    const std::int64_t n = samples(o, 1000000);
    const HaarSampleResult res = haar_sample_with_stats(n, o.seed, o.shards);
    const double acceptance =
        res.candidates == 0 ? 0.0 : static_cast<double>(n) / static_cast<double>(res.candidates);
    const double disk = sampling_disk_area(bolza().domain);
    const double area = acceptance * disk;
    const double expected = 4.0 * std::numbers::pi;
    Output out;
    auto& r = out.report;
    r["n"] = n;
    r["candidates"] = res.candidates;
    r["acceptance"] = acceptance;
    r["acceptance_expected"] = expected / disk;
    r["disk_area"] = disk;
    r["area"] = area;
    r["area_expected"] = expected;
    r["relative_error"] = std::abs(area - expected) / expected;
    return out;
}

// Plumbing ------------------------------------------------------------------

using Handler = std::function<Output(const Options&)>;

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--seed", o.seed, "RNG seed");
    sub->add_option("--shards", o.shards, "worker shards (output is independent of this)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--output", o.output, "write the report here instead of stdout");
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--timing", o.timing, "record wall_time_ms");
}

void add_params(CLI::App* sub, Options& o) {
    sub->add_option("--B", o.B, "magnetic field strength");
    sub->add_option("--E", o.E, "energy");
}

void add_observable(CLI::App* sub, Options& o) {
    sub->add_option("--r0", o.r0, "bump radius");
    sub->add_option("--center-re", o.center_re, "bump center, real part");
    sub->add_option("--center-im", o.center_im, "bump center, imaginary part");
    sub->add_option("--fiber-mode", o.fiber_mode, "fiber Fourier mode");
}

Json config_echo(const CLI::App* sub) {
    static const std::vector<std::string> skip = {"help", "shards", "output", "timing"};
    Json echo = Json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt->get_lnames().empty()) continue;
        const std::string& name = opt->get_lnames().front();
        if (std::find(skip.begin(), skip.end(), name) != skip.end()) continue;
        if (opt->count() > 0) {
            std::string v;
            for (const auto& s : opt->results()) v += (v.empty() ? "" : ",") + s;
            echo[name] = v;
        } else {
            echo[name] = opt->get_default_str();
        }
    }
    return echo;
}

std::string sidecar_path(const std::string& path) { return path + ".json"; }

}  // namespace

void write_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename onto '" + path + "': " + ec.message());
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"hyperlab: magnetic flows, equidistribution and Landau levels on the Bolza surface",
                 "hyperlab"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1, 1);

    std::vector<std::pair<CLI::App*, Handler>> commands;
    auto add = [&](const char* name, const char* help, Handler h) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->option_defaults()->always_capture_default();
        add_common(sub, o);
        commands.emplace_back(sub, std::move(h));
        return sub;
    };

    add_params(add("classify", "regime, E_c, T_E and det Y", cmd_classify), o);
    {
        auto* s = add("flow", "flow a Haar-random state for time t", cmd_flow);
        add_params(s, o);
        s->add_option("--t", o.t, "flow time");
    }
    add_params(add("period", "primitive period of an elliptic flow", cmd_period), o);
    {
        auto* s = add("lyapunov", "growth rate of the linearized flow", cmd_lyapunov);
        add_params(s, o);
        s->add_option("--t-max", o.t_max, "largest fit time");
        s->add_option("--points", o.points, "log-grid size");
    }
    add_params(add("conjugacy", "normal form and conjugacy residual", cmd_conjugacy), o);
    {
        auto* s = add("ergodic-scan", "Birkhoff sup-error table over horizons", cmd_ergodic_scan);
        add_params(s, o);
        add_observable(s, o);
        s->add_option("--generator", o.generator, "horocycle, geodesic or magnetic");
        s->add_option("--states", o.states, "number of Haar-random states");
        s->add_option("--horizons", o.horizons, "comma-separated horizons");
        s->add_option("--dt", o.dt, "quadrature step");
        s->add_option("--n", o.n, "Liouville reference samples [1000000]");
    }
    {
        auto* s = add("decay-fit", "fit the decay exponent of a scan table", cmd_decay_fit);
        s->add_option("--input", o.input, "CSV written by ergodic-scan --format csv");
    }
    {
        auto* s = add("spectra", "Landau levels in exact arithmetic", cmd_spectra);
        s->add_option("--B", o.B, "magnetic field strength (rational)");
        s->add_option("--k", o.k, "tensor power");
        s->add_option("--m", o.m, "level index (all levels when omitted)");
    }
    {
        auto* s = add("identity-sweep", "exhaustive Landau identity check", cmd_identity_sweep);
        s->add_option("--k-max", o.k_max, "largest k");
        s->add_option("--B-list", o.b_list, "comma-separated rational fields");
    }
    {
        auto* s = add("projector-check", "Fourier projectors of the diagonal model",
                      cmd_projector_check);
        s->add_option("--k", o.k, "tensor power");
        s->add_option("--levels", o.levels, "number of consecutive levels");
        s->add_option("--multiplicity", o.multiplicity, "multiplicity of each level");
    }
    {
        auto* s = add("zonal-moment", "torus average of a bump observable", cmd_zonal_moment);
        add_params(s, o);
        add_observable(s, o);
        s->add_option("--grid", o.grid, "midpoint grid per axis");
    }
    {
        auto* s = add("zonal-density", "radial density of the torus projection",
                      cmd_zonal_density);
        add_params(s, o);
        s->add_option("--n", o.n, "samples [10000000]");
        s->add_option("--bins", o.bins, "histogram bins (0: cover the orbit)");
    }
    {
        auto* s = add("haar-sample", "Haar-random frames on the quotient", cmd_haar_sample);
        s->add_option("--n", o.n, "samples [1000]");
    }
    {
        auto* s = add("area-check", "Monte-Carlo area of the surface", cmd_area_check);
        s->add_option("--n", o.n, "samples [1000000]");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    CLI::App* sub = nullptr;
    Handler handler;
    for (auto& [s, h] : commands)
        if (s->parsed()) {
            sub = s;
            handler = h;
        }
    if (sub == nullptr) {
        err << app.help();
        return kExitUsage;
    }

    try {
        const auto t0 = std::chrono::steady_clock::now();
        Output result = handler(o);
        const auto t1 = std::chrono::steady_clock::now();

        Json report = Json::object();
        report["tool_version"] = kToolVersion;
        report["subcommand"] = sub->get_name();
        report["config_echo"] = config_echo(sub);
        report["seed"] = o.seed;
        if (o.timing)
            report["wall_time_ms"] =
                std::chrono::duration<double, std::milli>(t1 - t0).count();
        else
            report["wall_time_ms"] = nullptr;
        for (auto& [key, value] : result.report.items()) report[key] = value;
        const std::string json_text = report.dump(2) + "\n";

        if (result.csv) {
            if (o.output.empty()) {
                out << *result.csv;
            } else {
                write_atomic(o.output, *result.csv);
                write_atomic(sidecar_path(o.output), json_text);
            }
        } else if (o.output.empty()) {
            out << json_text;
        } else {
            write_atomic(o.output, json_text);
        }
        return kExitOk;
    } catch (const ExactConvergence& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace hyperlab::cli
