#include "gpz/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <nlohmann/json.hpp>

#include "gpz/errors.hpp"
#include "gpz/quadrature.hpp"

namespace gpz {

namespace {

constexpr double kAtomMergeTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

// x with P(|N(0,1)| <= x) = 1 - 1e-6, solved once by bisection on erf.
double gaussian_tail_quantile() {
    static const double q = [] {
        double lo = 4.0, hi = 6.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (std::erf(mid / std::sqrt(2.0)) < 1.0 - 1e-6) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    }();
    return q;
}

std::vector<Atom> merge_atoms(std::vector<Atom> atoms) {
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.frequency < b.frequency; });
    std::vector<Atom> out;
    for (const Atom& a : atoms) {
        if (!out.empty() && a.frequency - out.back().frequency <= kAtomMergeTol) {
            Atom& last = out.back();
            const double m = last.mass + a.mass;
            last.frequency = (last.frequency * last.mass + a.frequency * a.mass) / m;
            last.mass = m;
        } else {
            out.push_back(a);
        }
    }
    return out;
}

struct SegmentCoef {
    double a, b, c0, c1;
};

// Piecewise-linear coefficients of a tabulated density on [grid_i, grid_{i+1}].
std::vector<SegmentCoef> segments(const DensityMeasure& d) {
    std::vector<SegmentCoef> segs;
    for (std::size_t i = 0; i + 1 < d.grid.size(); ++i) {
        const double a = d.grid[i], b = d.grid[i + 1];
        const double c1 = (d.values[i + 1] - d.values[i]) / (b - a);
        const double c0 = d.values[i] - c1 * a;
        segs.push_back({a, b, c0, c1});
    }
    return segs;
}

// int x^p mu(dx) for even p; closed forms per variant.
double moment(const SpectralMeasure& mu, int p);

double density_moment(const DensityMeasure& d, int p) {
    switch (d.form) {
        case DensityMeasure::Form::Uniform:
            // mass * h^p / (p+1)
            return d.mass * std::pow(d.param, p) / (p + 1.0);
        case DensityMeasure::Form::Gaussian: {
            // mass * sigma^p * (p-1)!!
            double dblfact = 1.0;
            for (int k = p - 1; k > 1; k -= 2) dblfact *= k;
            return d.mass * std::pow(d.param, p) * dblfact;
        }
        case DensityMeasure::Form::Tabulated: {
            double sum = 0.0;
            for (const SegmentCoef& s : segments(d)) {
                sum += poly_moment(s.a, s.b, s.c0, s.c1, p);
            }
            return 2.0 * sum;  // even extension
        }
    }
    return 0.0;
}

double moment(const SpectralMeasure& mu, int p) {
    if (const auto* a = mu.get_if<AtomicMeasure>()) {
        double sum = 0.0;
        for (const Atom& at : a->atoms) sum += at.mass * std::pow(at.frequency, p);
        return sum;
    }
    if (const auto* d = mu.get_if<DensityMeasure>()) {
        return p == 0 ? d->mass : density_moment(*d, p);
    }
    if (const auto* c = mu.get_if<CosineProductMeasure>()) {
        if (p == 0) return 1.0;
        if (p == 2) return c->lambda.sum_l2sq();
        if (p == 4) {
            // E (sum lam_k eps_k)^4 = 3 (sum lam^2)^2 - 2 sum lam^4
            const double s2 = c->lambda.sum_l2sq();
            return 3.0 * s2 * s2 - 2.0 * c->lambda.tail_power(0, 4);
        }
        throw config_error("cosine-product moments implemented for p in {0,2,4}");
    }
    const auto& mix = std::get<MixtureMeasure>(mu.data());
    double sum = 0.0;
    for (const WeightedComponent& wc : mix.components) sum += wc.weight * moment(wc.measure, p);
    return sum;
}

} // namespace

SpectralMeasure SpectralMeasure::atomic(std::vector<Atom> atoms) {
    if (atoms.empty()) throw config_error("atomic measure needs at least one atom");
    for (const Atom& a : atoms) {
        if (!(a.frequency >= 0.0)) throw config_error("atom frequencies must be >= 0");
        if (!(a.mass > 0.0) || !std::isfinite(a.mass)) {
            throw config_error("atom masses must be positive and finite");
        }
    }
    return SpectralMeasure(AtomicMeasure{merge_atoms(std::move(atoms))});
}

SpectralMeasure SpectralMeasure::uniform_density(double half_width, double mass) {
    if (!(half_width > 0.0) || !(mass > 0.0)) {
        throw config_error("uniform density needs positive half-width and mass");
    }
    DensityMeasure d;
    d.form = DensityMeasure::Form::Uniform;
    d.param = half_width;
    d.mass = mass;
    return SpectralMeasure(std::move(d));
}

SpectralMeasure SpectralMeasure::gaussian_density(double sigma, double mass) {
    if (!(sigma > 0.0) || !(mass > 0.0)) {
        throw config_error("gaussian density needs positive sigma and mass");
    }
    DensityMeasure d;
    d.form = DensityMeasure::Form::Gaussian;
    d.param = sigma;
    d.mass = mass;
    return SpectralMeasure(std::move(d));
}

SpectralMeasure SpectralMeasure::tabulated_density(std::vector<double> grid,
                                                   std::vector<double> values) {
    if (grid.size() < 2 || grid.size() != values.size()) {
        throw config_error("tabulated density needs matching grid/values with >= 2 points");
    }
    if (!(grid.front() >= 0.0)) {
        throw config_error("tabulated grid is the nonnegative half-line representation");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw config_error("tabulated grid must be increasing");
    }
    double vmax = 0.0;
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw config_error("tabulated density values must be finite and >= 0");
        }
        vmax = std::max(vmax, v);
    }
    if (vmax == 0.0) throw config_error("tabulated density has zero mass");
    DensityMeasure d;
    d.form = DensityMeasure::Form::Tabulated;
    d.grid = std::move(grid);
    d.values = std::move(values);
    d.mass = 0.0;
    for (const SegmentCoef& s : segments(d)) d.mass += poly_moment(s.a, s.b, s.c0, s.c1, 0);
    d.mass *= 2.0;
    return SpectralMeasure(std::move(d));
}

SpectralMeasure SpectralMeasure::cosine_product(LambdaSequence lambda) {
    return SpectralMeasure(CosineProductMeasure{std::move(lambda)});
}

SpectralMeasure SpectralMeasure::mixture(std::vector<std::pair<double, SpectralMeasure>> comps) {
    if (comps.empty()) throw config_error("mixture needs at least one component");
    MixtureMeasure mix;
    for (auto& [w, m] : comps) {
        if (!(w > 0.0)) throw config_error("mixture weights must be positive");
        mix.components.push_back(WeightedComponent{w, std::move(m)});
    }
    return SpectralMeasure(std::move(mix));
}

double total_mass(const SpectralMeasure& mu) { return moment(mu, 0); }
double second_moment(const SpectralMeasure& mu) { return moment(mu, 2); }
double fourth_moment(const SpectralMeasure& mu) { return moment(mu, 4); }

SpectralMeasure rescale(const SpectralMeasure& mu, double mass_scale, double frequency_scale) {
    if (!(mass_scale > 0.0) || !(frequency_scale > 0.0)) {
        throw config_error("rescale factors must be positive");
    }
    if (const auto* a = mu.get_if<AtomicMeasure>()) {
        std::vector<Atom> atoms = a->atoms;
        for (Atom& at : atoms) {
            at.frequency *= frequency_scale;
            at.mass *= mass_scale;
        }
        return SpectralMeasure::atomic(std::move(atoms));
    }
    if (const auto* d = mu.get_if<DensityMeasure>()) {
        switch (d->form) {
            case DensityMeasure::Form::Uniform:
                return SpectralMeasure::uniform_density(d->param * frequency_scale,
                                                        d->mass * mass_scale);
            case DensityMeasure::Form::Gaussian:
                return SpectralMeasure::gaussian_density(d->param * frequency_scale,
                                                         d->mass * mass_scale);
            case DensityMeasure::Form::Tabulated: {
                std::vector<double> grid = d->grid;
                std::vector<double> values = d->values;
                for (double& g : grid) g *= frequency_scale;
                for (double& v : values) v *= mass_scale / frequency_scale;
                return SpectralMeasure::tabulated_density(std::move(grid), std::move(values));
            }
        }
    }
    if (const auto* c = mu.get_if<CosineProductMeasure>()) {
        if (mass_scale != 1.0) {
            throw config_error("cosine-product measures carry unit mass; cannot rescale mass");
        }
        return SpectralMeasure::cosine_product(c->lambda.scaled(frequency_scale));
    }
    const auto& mix = std::get<MixtureMeasure>(mu.data());
    std::vector<std::pair<double, SpectralMeasure>> comps;
    for (const WeightedComponent& wc : mix.components) {
        comps.emplace_back(wc.weight * mass_scale, rescale(wc.measure, 1.0, frequency_scale));
    }
    return SpectralMeasure::mixture(std::move(comps));
}

std::pair<SpectralMeasure, NormalizationRecord> normalize(const SpectralMeasure& mu) {
    const double m = total_mass(mu);
    const double s = second_moment(mu);
    if (!(m > 0.0) || !std::isfinite(m)) throw config_error("normalize: total mass must be positive");
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw config_error("normalize: second moment must be positive (degenerate input)");
    }
    const double eps = std::numeric_limits<double>::epsilon();
    if (std::abs(m - 1.0) <= 4 * eps && std::abs(s - 1.0) <= 4 * eps) {
        return {mu, NormalizationRecord{1.0, 1.0}};
    }
    const double alpha = std::sqrt(m / s);
    NormalizationRecord rec{1.0 / m, alpha};
    return {rescale(mu, rec.mass_scale, rec.frequency_scale), rec};
}

std::optional<std::vector<Atom>> try_flatten_atoms(const SpectralMeasure& mu) {
    if (const auto* a = mu.get_if<AtomicMeasure>()) return a->atoms;
    if (const auto* mix = mu.get_if<MixtureMeasure>()) {
        std::vector<Atom> all;
        for (const WeightedComponent& wc : mix->components) {
            auto sub = try_flatten_atoms(wc.measure);
            if (!sub) return std::nullopt;
            for (Atom at : *sub) {
                at.mass *= wc.weight;
                all.push_back(at);
            }
        }
        return merge_atoms(std::move(all));
    }
    return std::nullopt;
}

bool is_degenerate(const SpectralMeasure& mu) {
    const auto atoms = try_flatten_atoms(mu);
    return atoms && atoms->size() == 1;
}

std::vector<Atom> atom_list(const SpectralMeasure& mu) {
    if (const auto* a = mu.get_if<AtomicMeasure>()) return a->atoms;
    if (mu.get_if<DensityMeasure>()) return {};
    if (const auto* c = mu.get_if<CosineProductMeasure>()) {
        const CantorVerdict v = cantor_criterion(c->lambda, 64);
        if (v.status == CantorVerdict::Status::Holds) return {};
        throw unknown_structure_error(
            "cosine product fails the Cantor criterion; atomic structure undetermined");
    }
    const auto& mix = std::get<MixtureMeasure>(mu.data());
    std::vector<Atom> all;
    for (const WeightedComponent& wc : mix.components) {
        for (Atom at : atom_list(wc.measure)) {
            at.mass *= wc.weight;
            all.push_back(at);
        }
    }
    return merge_atoms(std::move(all));
}

bool regular_at(const SpectralMeasure& mu, double x, double half_width) {
    if (!(half_width > 0.0)) throw config_error("regular_at needs half_width > 0");
    const double lo = x - half_width, hi = x + half_width;
    auto window_hits = [&](double point) { return point > lo && point < hi; };

    if (const auto* a = mu.get_if<AtomicMeasure>()) {
        for (const Atom& at : a->atoms) {
            if (window_hits(at.frequency) || window_hits(-at.frequency)) return false;
        }
        return true;
    }
    if (mu.get_if<DensityMeasure>()) {
        return true;  // bounded densities are locally L^2 everywhere
    }
    if (const auto* c = mu.get_if<CosineProductMeasure>()) {
        const double b = c->lambda.tail_l1(0);
        if (std::isfinite(b) && (lo > b || hi < -b)) return true;  // zero measure locally
        throw unknown_structure_error(
            "local regularity of a cosine-product measure is undetermined");
    }
    const auto& mix = std::get<MixtureMeasure>(mu.data());
    for (const WeightedComponent& wc : mix.components) {
        if (!regular_at(wc.measure, x, half_width)) return false;
    }
    return true;
}

double support_bound(const SpectralMeasure& mu) {
    if (const auto* a = mu.get_if<AtomicMeasure>()) {
        double b = 0.0;
        for (const Atom& at : a->atoms) b = std::max(b, at.frequency);
        return b;
    }
    if (const auto* d = mu.get_if<DensityMeasure>()) {
        switch (d->form) {
            case DensityMeasure::Form::Uniform: return d->param;
            case DensityMeasure::Form::Gaussian: return d->param * gaussian_tail_quantile();
            case DensityMeasure::Form::Tabulated: return d->grid.back();
        }
    }
    if (const auto* c = mu.get_if<CosineProductMeasure>()) {
        const double r0 = c->lambda.tail_l1(0);
        if (std::isfinite(r0)) return r0;
        // Hoeffding: P(|Y| > t) <= 2 exp(-t^2 / (2 sum lam^2)).
        return 5.5 * std::sqrt(c->lambda.sum_l2sq());
    }
    const auto& mix = std::get<MixtureMeasure>(mu.data());
    double b = 0.0;
    for (const WeightedComponent& wc : mix.components) b = std::max(b, support_bound(wc.measure));
    return b;
}

double density_value(const DensityMeasure& d, double x) {
    const double ax = std::abs(x);
    switch (d.form) {
        case DensityMeasure::Form::Uniform:
            return ax <= d.param ? d.mass / (2.0 * d.param) : 0.0;
        case DensityMeasure::Form::Gaussian:
            return d.mass * std::exp(-0.5 * ax * ax / (d.param * d.param)) /
                   (d.param * std::sqrt(2.0 * std::numbers::pi));
        case DensityMeasure::Form::Tabulated: {
            if (ax < d.grid.front() || ax > d.grid.back()) return 0.0;
            auto it = std::upper_bound(d.grid.begin(), d.grid.end(), ax);
            std::size_t hi = static_cast<std::size_t>(it - d.grid.begin());
            if (hi == 0) return d.values.front();
            if (hi >= d.grid.size()) return d.values.back();
            const double w = (ax - d.grid[hi - 1]) / (d.grid[hi] - d.grid[hi - 1]);
            return d.values[hi - 1] * (1.0 - w) + d.values[hi] * w;
        }
    }
    return 0.0;
}

nlohmann::json measure_to_json(const SpectralMeasure& mu) {
    nlohmann::json j;
    if (const auto* a = mu.get_if<AtomicMeasure>()) {
        j["variant"] = "atomic";
        nlohmann::json atoms = nlohmann::json::array();
        for (const Atom& at : a->atoms) {
            atoms.push_back({{"frequency", at.frequency}, {"mass", at.mass}});
        }
        j["atoms"] = std::move(atoms);
        return j;
    }
    if (const auto* d = mu.get_if<DensityMeasure>()) {
        j["variant"] = "density";
        switch (d->form) {
            case DensityMeasure::Form::Uniform:
                j["builtin"] = "uniform";
                j["params"] = {{"half_width", d->param}, {"mass", d->mass}};
                break;
            case DensityMeasure::Form::Gaussian:
                j["builtin"] = "gaussian";
                j["params"] = {{"sigma", d->param}, {"mass", d->mass}};
                break;
            case DensityMeasure::Form::Tabulated:
                j["grid"] = d->grid;
                j["values"] = d->values;
                break;
        }
        return j;
    }
    if (const auto* c = mu.get_if<CosineProductMeasure>()) {
        j["variant"] = "cosine_product";
        j["scale"] = c->lambda.scale();
        switch (c->lambda.kind()) {
            case LambdaSequence::Kind::Geometric:
                j["kind"] = "geometric";
                j["ratio"] = c->lambda.ratio();
                break;
            case LambdaSequence::Kind::Factorial: j["kind"] = "factorial"; break;
            case LambdaSequence::Kind::Harmonic: j["kind"] = "harmonic"; break;
            case LambdaSequence::Kind::Custom:
                j["kind"] = "custom";
                j["values"] = c->lambda.custom_values();
                break;
        }
        return j;
    }
    const auto& mix = std::get<MixtureMeasure>(mu.data());
    j["variant"] = "mixture";
    nlohmann::json comps = nlohmann::json::array();
    for (const WeightedComponent& wc : mix.components) {
        comps.push_back({{"weight", wc.weight}, {"measure", measure_to_json(wc.measure)}});
    }
    j["components"] = std::move(comps);
    return j;
}

SpectralMeasure measure_from_json(const nlohmann::json& j) {
    try {
        const std::string variant = j.at("variant").get<std::string>();
        if (variant == "atomic") {
            std::vector<Atom> atoms;
            for (const auto& a : j.at("atoms")) {
                atoms.push_back(
                    Atom{a.at("frequency").get<double>(), a.at("mass").get<double>()});
            }
            return SpectralMeasure::atomic(std::move(atoms));
        }
        if (variant == "density") {
            if (j.contains("builtin")) {
                const std::string b = j.at("builtin").get<std::string>();
                const auto& p = j.at("params");
                const double mass = p.value("mass", 1.0);
                if (b == "uniform") {
                    return SpectralMeasure::uniform_density(p.at("half_width").get<double>(), mass);
                }
                if (b == "gaussian") {
                    return SpectralMeasure::gaussian_density(p.value("sigma", 1.0), mass);
                }
                throw config_error("unknown builtin density: " + b);
            }
            return SpectralMeasure::tabulated_density(j.at("grid").get<std::vector<double>>(),
                                                      j.at("values").get<std::vector<double>>());
        }
        if (variant == "cosine_product") {
            const std::string kind = j.at("kind").get<std::string>();
            const double scale = j.value("scale", 1.0);
            if (kind == "geometric") {
                return SpectralMeasure::cosine_product(
                    LambdaSequence::geometric(j.at("ratio").get<double>(), scale));
            }
            if (kind == "factorial") {
                return SpectralMeasure::cosine_product(LambdaSequence::factorial(scale));
            }
            if (kind == "harmonic") {
                return SpectralMeasure::cosine_product(LambdaSequence::harmonic(scale));
            }
            if (kind == "custom") {
                return SpectralMeasure::cosine_product(
                    LambdaSequence::custom(j.at("values").get<std::vector<double>>(), scale));
            }
            throw config_error("unknown lambda kind: " + kind);
        }
        if (variant == "mixture") {
            std::vector<std::pair<double, SpectralMeasure>> comps;
            for (const auto& c : j.at("components")) {
                comps.emplace_back(c.at("weight").get<double>(),
                                   measure_from_json(c.at("measure")));
            }
            return SpectralMeasure::mixture(std::move(comps));
        }
        throw config_error("unknown measure variant: " + variant);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("malformed measure JSON: ") + e.what());
    }
}

} // namespace gpz
