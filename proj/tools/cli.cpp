#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "photocount/counting.hpp"
#include "photocount/errors.hpp"
#include "photocount/io.hpp"
#include "photocount/media.hpp"
#include "photocount/random.hpp"
#include "photocount/rmt.hpp"
#include "report.hpp"

namespace photocount::cli {

namespace {

constexpr int kCumulantOrder = 4;

template <typename T>
struct Flag {
    T value{};
    CLI::Option* option = nullptr;

    bool given() const { return option != nullptr && option->count() > 0; }
};

template <typename T>
CLI::Option* bind_flag(CLI::App* app, Flag<T>& flag, const std::string& name, const std::string& help) {
    return flag.option = app->add_option(name, flag.value, help);
}

// Picks the flag if given, else the model-file value, else the default.
template <typename T, typename U>
T resolve(const Flag<T>& flag, const std::optional<U>& file, T fallback) {
    if (flag.given()) return flag.value;
    if (file) return static_cast<T>(*file);
    return fallback;
}

struct Common {
    Flag<std::string> format{"csv"};
    Flag<std::string> out;
};

struct Occupation {
    Flag<double> f, omega, temperature;
};

void bind_common(CLI::App* app, Common& c) {
    bind_flag(app, c.format, "--format", "Output format: csv or json");
    bind_flag(app, c.out, "--out", "Write data to this file instead of standard output");
}

void bind_occupation(CLI::App* app, Occupation& o) {
    bind_flag(app, o.f, "--f", "Occupation factor f (f > 0 absorbing, f <= -1 amplifying)");
    bind_flag(app, o.omega, "--omega", "Frequency; with --T gives f = 1 / (exp(omega / T) - 1)");
    bind_flag(app, o.temperature, "--T", "Signed temperature, same units as --omega");
}

// Flag --f beats --omega/--T, which beat the file's f, then its omega/T.
OccupationFactor resolve_occupation(const Occupation& o, const ModelFile& file, double fallback) {
    if (o.f.given() && (o.omega.given() || o.temperature.given()))
        throw DomainError("give either --f or --omega with --T, not both");
    if (o.omega.given() != o.temperature.given()) throw DomainError("--omega and --T must be given together");
    if (o.f.given()) return OccupationFactor(o.f.value);
    if (o.omega.given()) return bose_einstein(o.omega.value, o.temperature.value);
    if (file.f) return OccupationFactor(*file.f);
    if (file.omega.has_value() != file.temperature.has_value())
        throw DomainError("model file: omega and T must be given together");
    if (file.omega) return bose_einstein(*file.omega, *file.temperature);
    return OccupationFactor(fallback);
}

void warn(std::ostream& err, const std::string& message) { err << "warning: " << message << '\n'; }

void emit(const Report& report, const Common& c, std::ostream& out) {
    const Format format = parse_format(c.format.value);
    if (!c.out.given()) {
        write_report(out, report, format);
        return;
    }
    std::ofstream file(c.out.value);
    if (!file) throw DomainError("cannot write '" + c.out.value + "'");
    write_report(file, report, format);
}

void add_pmf_table(Report& report, const PhotocountPMF& pmf) {
    report.columns = {"n", "probability", "cumulative"};
    double cumulative = 0.0;
    for (std::size_t n = 0; n < pmf.probs.size(); ++n) {
        cumulative += pmf.probs[n];
        report.rows.push_back({static_cast<double>(n), pmf.probs[n], cumulative});
    }
}

// Without an explicit n_max the table doubles from 64 until the tail mass
// is below the default bound.
template <typename Build>
PhotocountPMF table_pmf(std::optional<std::size_t> n_max, Build&& build) {
    constexpr std::size_t kAutoStart = 64, kAutoLimit = std::size_t{1} << 16;
    if (n_max) return build(*n_max);
    for (std::size_t n = kAutoStart;; n *= 2) {
        auto pmf = build(n);
        if (!pmf.warning || n >= kAutoLimit) return pmf;
    }
}

void check_pmf(const PhotocountPMF& pmf, std::ostream& err) {
    if (pmf.warning) warn(err, *pmf.warning + "; raise --n-max");
}

// Shared statistics block for any explicit strengths set.
void add_strength_statistics(Report& report, const ScatteringStrengths& strengths,
                             const CountingWindow& window, OccupationFactor f, std::optional<std::size_t> n_max,
                             std::ostream& err) {
    const auto kappa = factorial_cumulants(strengths, window, f, kCumulantOrder);
    const auto moments = mean_variance(kappa);
    const double effective = nu_eff(strengths, window);
    const auto pmf =
        table_pmf(n_max, [&](std::size_t n) { return pmf_from_strengths(strengths, window, f, n); });
    check_pmf(pmf, err);
    add_pmf_table(report, pmf);
    report.add("nu_eff", effective);
    report.add("nu_eff_ratio", effective / window.nu());
    for (int p = 1; p <= kCumulantOrder; ++p) report.add("kappa_" + std::to_string(p), kappa[p]);
    report.add("mean", moments.mean);
    report.add("variance", moments.variance);
    report.add("truncation_mass", pmf.truncation_mass);
}

// ---- blackbody -------------------------------------------------------------

struct BlackbodyArgs {
    Common common;
    Occupation occupation;
    Flag<double> nu{1.0};
    Flag<int> modes{1};
    Flag<std::size_t> n_max;
};

Report cmd_blackbody(const BlackbodyArgs& a, std::ostream& err) {
    const auto f = resolve_occupation(a.occupation, {}, 1.0);
    const auto window = CountingWindow::from_nu(a.modes.value, a.nu.value);
    const auto pmf = table_pmf(a.n_max.given() ? std::optional(a.n_max.value) : std::nullopt,
                               [&](std::size_t n) { return black_body_pmf(window, f, n); });
    check_pmf(pmf, err);

    Report report;
    add_pmf_table(report, pmf);
    const double mean = window.nu() * f.value();
    const double variance = mean * (1.0 + mean / window.nu());
    report.add("nu", window.nu());
    report.add("f", f.value());
    report.add("mean", mean);
    report.add("variance", variance);
    report.add("variance_over_mean", variance / mean);
    report.add("table_mean", pmf.mean());
    report.add("table_variance", pmf.variance());
    report.add("truncation_mass", pmf.truncation_mass);
    return report;
}

// ---- medium ----------------------------------------------------------------

struct MediumArgs {
    Common common;
    Occupation occupation;
    Flag<std::string> model_file;
    Flag<std::string> medium;
    Flag<std::string> regime;
    Flag<double> gamma;
    Flag<int> modes;
    Flag<double> nu;
    Flag<std::size_t> n_max;
    Flag<std::uint64_t> seed;
    bool closed_form = false;
};

Report cmd_medium(const MediumArgs& a, std::ostream& err) {
    const ModelFile file = a.model_file.given() ? read_model_file(a.model_file.value) : ModelFile{};

    const Medium medium = a.medium.given() ? parse_medium(a.medium.value)
                          : file.medium   ? *file.medium
                                          : throw DomainError("medium: --medium (slab|cavity) is required");
    const Regime regime = a.regime.given() ? parse_regime(a.regime.value) : file.regime.value_or(Regime::Absorbing);
    if (!a.gamma.given() && !file.gamma) throw DomainError("medium: --gamma is required");
    const double gamma = resolve(a.gamma, file.gamma, 0.0);
    const int modes = resolve(a.modes, file.modes, 100);
    const double nu = resolve(a.nu, file.nu, static_cast<double>(modes));
    const auto n_max = a.n_max.given() ? std::optional(a.n_max.value) : file.n_max;
    const std::uint64_t seed = resolve(a.seed, file.seed, kDefaultSeed);
    const auto f = resolve_occupation(a.occupation, file, regime == Regime::Absorbing ? 1.0 : -1.0);
    if (f.regime() != regime)
        throw RegimeError("occupation factor sign does not match the " + std::string(to_string(regime)) +
                          " regime");
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");

    const auto status = threshold_check({medium, gamma, regime});
    if (status == ThresholdStatus::AboveThreshold) {
        std::ostringstream msg;
        msg << "AboveThreshold: amplifying " << to_string(medium);
        if (medium == Medium::Slab) msg << " lases for any gain";
        else msg << " needs gamma < 1 (got " << gamma << ")";
        throw ThresholdError(msg.str());
    }
    if (status == ThresholdStatus::NearThresholdWarning)
        warn(err, "gamma close to the laser threshold; linear amplification may not hold");

    Report report;
    report.add("medium", std::string(to_string(medium)));
    report.add("regime", std::string(to_string(regime)));
    report.add("gamma", gamma);
    report.add("N", static_cast<std::uint64_t>(modes));
    report.add("nu", nu);
    report.add("f", f.value());
    report.add("threshold_status", std::string(to_string(status)));

    const double ratio = medium == Medium::Slab ? nu_eff_slab(gamma) : nu_eff_cavity(gamma, regime);
    const double mean = medium == Medium::Slab ? mean_count_slab(gamma, nu, f)
                                               : mean_count_cavity(gamma, regime, nu, f);
    report.add("closed_form_nu_eff_ratio", ratio);
    report.add("closed_form_mean", mean);

    if (a.closed_form) {
        const double kappa2 = mean * mean / (ratio * nu);  // nu_eff = kappa_1^2 / kappa_2
        report.add("nu_eff", ratio * nu);
        report.add("nu_eff_ratio", ratio);
        report.add("kappa_1", mean);
        report.add("kappa_2", kappa2);
        report.add("mean", mean);
        report.add("variance", mean + kappa2);
        return report;
    }

    // Strengths sampled from the analytic density; an amplifying cavity is
    // the dual of the absorbing one at the same gamma.
    std::optional<StrengthDensity> density;
    bool valid = true;
    if (medium == Medium::Slab) {
        const SlabModel model(gamma, modes);
        density = slab_density(model);
        valid = model.density_valid();
        report.add("density", std::string("slab"));
    } else {
        const CavityModel model(gamma, Regime::Absorbing, modes);
        if (gamma > 0.1 && gamma < 10.0)
            throw DomainError("no analytic cavity density for 0.1 < gamma < 10; use --closed-form or rmt");
        density = cavity_density(model);
        valid = model.weak_density_valid() || gamma >= 10.0;
        report.add("density", std::string(gamma <= 0.1 ? "cavity_weak" : "slab"));
    }
    if (!valid) warn(err, "density outside its validity regime; sampled statistics are approximate");
    report.add("density_valid", valid);
    report.add("seed", static_cast<std::uint64_t>(seed));

    auto strengths = sample_strengths_from_density(*density, static_cast<std::size_t>(modes), seed,
                                                   SamplingScheme::Stratified);
    if (regime == Regime::Amplifying) strengths = dual_strengths(strengths);
    add_strength_statistics(report, strengths, CountingWindow::from_nu(modes, nu), f, n_max, err);
    return report;
}

// ---- fig2 ------------------------------------------------------------------

struct Fig2Args {
    Common common;
    Flag<double> gamma_min{1e-4};
    Flag<double> gamma_max{1e3};
    Flag<int> points{71};
};

Report cmd_fig2(const Fig2Args& a) {
    const double lo = a.gamma_min.value, hi = a.gamma_max.value;
    if (!(lo > 0.0) || !(hi > lo)) throw DomainError("fig2 needs 0 < gamma-min < gamma-max");
    if (a.points.value < 2) throw DomainError("fig2 needs at least 2 points");
    const double l0 = std::log10(lo), step = (std::log10(hi) - l0) / (a.points.value - 1);

    Report report;
    report.columns = {"gamma", "slab_absorbing", "cavity_absorbing", "cavity_amplifying"};
    for (int k = 0; k < a.points.value; ++k) {
        const double gamma = std::pow(10.0, l0 + step * k);
        Report::Cell amplifying;
        if (gamma < 1.0) amplifying = nu_eff_cavity(gamma, Regime::Amplifying);
        report.rows.push_back(
            {gamma, nu_eff_slab(gamma), nu_eff_cavity(gamma, Regime::Absorbing), amplifying});
    }
    return report;
}

// ---- rmt -------------------------------------------------------------------

struct RmtArgs {
    Common common;
    Flag<int> levels{400};
    Flag<int> modes{20};
    Flag<double> gamma{0.05};
    Flag<int> samples{200};
    Flag<std::uint64_t> seed{kDefaultSeed};
    Flag<int> bins{50};
    Flag<std::string> strengths_out;
    Flag<unsigned> workers{0};
};

Report cmd_rmt(const RmtArgs& a, std::ostream& err) {
    EnsembleConfig config;
    config.levels = a.levels.value;
    config.channels = a.modes.value;
    config.gamma = a.gamma.value;
    config.samples = a.samples.value;
    config.seed = a.seed.value;
    config.validate();
    if (a.bins.value < 1) throw DomainError("--bins must be positive");

    const auto spectra = sample_ensemble(config, a.workers.value);
    const auto pooled = spectra.pooled();
    const auto histogram = empirical_density(spectra, static_cast<std::size_t>(a.bins.value));
    if (spectra.resamples > 0) warn(err, std::to_string(spectra.resamples) + " near-singular draws resampled");

    if (a.strengths_out.given()) {
        std::ofstream file(a.strengths_out.value);
        if (!file) throw DomainError("cannot write '" + a.strengths_out.value + "'");
        std::ostringstream header;
        header << "pooled rmt strengths M=" << config.levels << " N=" << config.channels
               << " gamma=" << format_real(config.gamma) << " samples=" << config.samples
               << " seed=" << config.seed;
        write_strengths(file, pooled, header.str());
    }

    std::optional<StrengthDensity> density;
    std::string density_name = "none";
    const CavityModel model(config.gamma, Regime::Absorbing, config.channels);
    if (config.gamma <= 0.1 || config.gamma >= 10.0) {
        density = cavity_density(model);
        density_name = config.gamma <= 0.1 ? "cavity_weak" : "slab";
    } else {
        warn(err, "no analytic density for 0.1 < gamma < 10; reporting the histogram only");
    }

    Report report;
    report.columns = {"sigma_lower", "sigma_upper", "empirical_density", "std_error", "analytic_density"};
    for (std::size_t b = 0; b < histogram.bins(); ++b) {
        Report::Cell analytic;
        if (density)
            analytic = (density->cdf(histogram.edge(b + 1)) - density->cdf(histogram.edge(b))) / histogram.width();
        report.rows.push_back(
            {histogram.edge(b), histogram.edge(b + 1), histogram.density[b], histogram.std_error[b], analytic});
    }

    const auto values = pooled.values();
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double ratio = nu_eff_ratio(pooled);
    const double closed = nu_eff_cavity(config.gamma, Regime::Absorbing);
    report.add("M", static_cast<std::uint64_t>(config.levels));
    report.add("N", static_cast<std::uint64_t>(config.channels));
    report.add("gamma", config.gamma);
    report.add("samples", static_cast<std::uint64_t>(config.samples));
    report.add("seed", static_cast<std::uint64_t>(config.seed));
    report.add("resamples", static_cast<std::uint64_t>(spectra.resamples));
    report.add("sigma_min", *lo);
    report.add("sigma_max", *hi);
    report.add("near_unitary", 1.0 - *lo < 1e-3);
    report.add("nu_eff_ratio", ratio);
    report.add("closed_form_nu_eff_ratio", closed);
    report.add("nu_eff_relative_error", ratio / closed - 1.0);
    if (config.gamma < 1.0 && *lo > 0.0) {
        report.add("dual_nu_eff_ratio", nu_eff_ratio(dual_strengths(pooled)));
        report.add("closed_form_dual_nu_eff_ratio", nu_eff_cavity(config.gamma, Regime::Amplifying));
    }
    report.add("analytic_density", density_name);
    if (density) report.add("l1_distance", l1_distance(histogram, *density));
    return report;
}

// ---- custom ----------------------------------------------------------------

struct CustomArgs {
    Common common;
    Occupation occupation;
    Flag<std::string> strengths_in;
    Flag<double> nu;
    Flag<std::size_t> n_max;
};

Report cmd_custom(const CustomArgs& a, std::ostream& err) {
    const auto strengths = read_strengths_file(a.strengths_in.value);
    const int modes = static_cast<int>(strengths.size());
    const auto f = resolve_occupation(a.occupation, {}, strengths.regime() == Regime::Absorbing ? 1.0 : -1.0);
    const double nu = a.nu.given() ? a.nu.value : static_cast<double>(modes);
    const auto window = CountingWindow::from_nu(modes, nu);

    Report report;
    report.add("N", static_cast<std::uint64_t>(modes));
    report.add("nu", nu);
    report.add("f", f.value());
    report.add("regime", std::string(to_string(strengths.regime())));
    add_strength_statistics(report, strengths, window, f,
                            a.n_max.given() ? std::optional(a.n_max.value) : std::nullopt, err);
    return report;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Photocount statistics of radiation from random media", "photocount"};
    app.require_subcommand(1);

    BlackbodyArgs bb;
    auto* blackbody = app.add_subcommand("blackbody", "Negative-binomial black-body photocount table");
    bind_common(blackbody, bb.common);
    bind_occupation(blackbody, bb.occupation);
    bind_flag(blackbody, bb.nu, "--nu", "Degrees of freedom nu = N t delta_omega / 2pi (default 1)");
    bind_flag(blackbody, bb.modes, "--N", "Mode count (default 1)");
    bind_flag(blackbody, bb.n_max, "--n-max", "Largest count in the table (default: grow until the tail is below 1e-10)");

    MediumArgs md;
    auto* medium = app.add_subcommand("medium", "Slab or cavity statistics from the analytic models");
    bind_common(medium, md.common);
    bind_occupation(medium, md.occupation);
    bind_flag(medium, md.model_file, "--model", "key = value model file; flags override its entries");
    bind_flag(medium, md.medium, "--medium", "slab or cavity");
    bind_flag(medium, md.regime, "--regime", "absorbing (default) or amplifying");
    bind_flag(medium, md.gamma, "--gamma", "Normalized absorption or amplification rate");
    bind_flag(medium, md.modes, "--N", "Mode count (default 100)");
    bind_flag(medium, md.nu, "--nu", "Degrees of freedom (default N)");
    bind_flag(medium, md.n_max, "--n-max", "Largest count in the table (default: grow until the tail is below 1e-10)");
    bind_flag(medium, md.seed, "--seed", "Seed for strengths sampling");
    medium->add_flag("--closed-form", md.closed_form, "Use the closed forms only, no sampled strengths");

    Fig2Args fg;
    auto* fig2 = app.add_subcommand("fig2", "nu_eff / nu against gamma for slab and cavity");
    bind_common(fig2, fg.common);
    bind_flag(fig2, fg.gamma_min, "--gamma-min", "Smallest gamma (default 1e-4)");
    bind_flag(fig2, fg.gamma_max, "--gamma-max", "Largest gamma (default 1e3)");
    bind_flag(fig2, fg.points, "--points", "Log-spaced grid points (default 71)");

    RmtArgs rm;
    auto* rmt = app.add_subcommand("rmt", "Random-matrix ensemble of an absorbing chaotic cavity");
    bind_common(rmt, rm.common);
    bind_flag(rmt, rm.levels, "--M", "Internal levels (default 400)");
    bind_flag(rmt, rm.modes, "--N", "Channels (default 20)");
    bind_flag(rmt, rm.gamma, "--gamma", "Absorption rate tau_dwell / tau_a (default 0.05)");
    bind_flag(rmt, rm.samples, "--samples", "Ensemble size (default 200)");
    bind_flag(rmt, rm.seed, "--seed", "Ensemble seed");
    bind_flag(rmt, rm.bins, "--bins", "Histogram bins on [0, 1] (default 50)");
    bind_flag(rmt, rm.strengths_out, "--strengths", "Write pooled strengths to this file");
    bind_flag(rmt, rm.workers, "--workers", "Threads (default: all cores)");

    CustomArgs cu;
    auto* custom = app.add_subcommand("custom", "Statistics for strengths read from a file");
    bind_common(custom, cu.common);
    bind_occupation(custom, cu.occupation);
    bind_flag(custom, cu.strengths_in, "--strengths", "Strengths file, one sigma per line")->required();
    bind_flag(custom, cu.nu, "--nu", "Degrees of freedom (default: number of strengths)");
    bind_flag(custom, cu.n_max, "--n-max", "Largest count in the table (default: grow until the tail is below 1e-10)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*blackbody) emit(cmd_blackbody(bb, err), bb.common, out);
        else if (*medium) emit(cmd_medium(md, err), md.common, out);
        else if (*fig2) emit(cmd_fig2(fg), fg.common, out);
        else if (*rmt) emit(cmd_rmt(rm, err), rm.common, out);
        else if (*custom) emit(cmd_custom(cu, err), cu.common, out);
    } catch (const ThresholdError& e) {
        err << "error: " << e.what() << '\n';
        return kExitThreshold;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConvergence;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitOk;
}

}  // namespace photocount::cli
