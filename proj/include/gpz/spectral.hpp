#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gpz/bernoulli.hpp"

namespace gpz {

// One symmetric atom pair of a spectral measure: frequency f >= 0 carrying
// total mass m, split as (m/2) delta_{+f} + (m/2) delta_{-f}; frequency 0
// carries the full mass at the origin.
struct Atom {
    double frequency = 0.0;
    double mass = 0.0;
};

struct AtomicMeasure {
    std::vector<Atom> atoms;  // sorted by frequency, duplicates merged
};

// Even density, either a builtin closed form or a piecewise-linear table on a
// nonnegative grid (extended evenly to the negative axis).
struct DensityMeasure {
    enum class Form { Uniform, Gaussian, Tabulated };
    Form form = Form::Uniform;
    double mass = 1.0;
    double param = 1.0;  // half-width (Uniform) or sigma (Gaussian)
    std::vector<double> grid;
    std::vector<double> values;
};

struct CosineProductMeasure {
    LambdaSequence lambda;
};

struct WeightedComponent;

struct MixtureMeasure {
    std::vector<WeightedComponent> components;
};

// Symmetric finite spectral measure with finite second moment. Symmetry is
// structural: every variant stores only the nonnegative-frequency data.
class SpectralMeasure {
public:
    using Data = std::variant<AtomicMeasure, DensityMeasure, CosineProductMeasure, MixtureMeasure>;

    static SpectralMeasure atomic(std::vector<Atom> atoms);
    static SpectralMeasure uniform_density(double half_width, double mass = 1.0);
    static SpectralMeasure gaussian_density(double sigma, double mass = 1.0);
    static SpectralMeasure tabulated_density(std::vector<double> grid, std::vector<double> values);
    static SpectralMeasure cosine_product(LambdaSequence lambda);
    static SpectralMeasure mixture(std::vector<std::pair<double, SpectralMeasure>> components);

    const Data& data() const { return data_; }

    template <typename T>
    const T* get_if() const { return std::get_if<T>(&data_); }

private:
    explicit SpectralMeasure(Data d) : data_(std::move(d)) {}
    Data data_;
};

struct WeightedComponent {
    double weight = 0.0;
    SpectralMeasure measure;
};

struct NormalizationRecord {
    double mass_scale = 1.0;       // multiplies masses / weights
    double frequency_scale = 1.0;  // multiplies frequencies (alpha)
};

double total_mass(const SpectralMeasure& mu);
double second_moment(const SpectralMeasure& mu);   // int x^2 mu(dx)
double fourth_moment(const SpectralMeasure& mu);   // int x^4 mu(dx)

// Rescales to total mass 1 and second moment 1 (so C(0)=1, -C''(0)=1).
std::pair<SpectralMeasure, NormalizationRecord> normalize(const SpectralMeasure& mu);

// Applies a normalization record (mass multiplier, frequency multiplier).
SpectralMeasure rescale(const SpectralMeasure& mu, double mass_scale, double frequency_scale);

// True iff the structural representation is a single symmetric atom pair
// (or a lone atom at 0).
bool is_degenerate(const SpectralMeasure& mu);

// Explicit atoms. Empty for densities and for cosine products that satisfy the
// Cantor criterion; throws unknown_structure_error otherwise.
std::vector<Atom> atom_list(const SpectralMeasure& mu);

// True iff mu restricted to (x - half_width, x + half_width) has an L^2
// density there. Throws unknown_structure_error when the window meets the
// support of a cosine-product component.
bool regular_at(const SpectralMeasure& mu, double x, double half_width);

// Upper frequency bound: exact support edge where the measure is compactly
// supported, the 1 - 1e-6 quantile otherwise.
double support_bound(const SpectralMeasure& mu);

// Atoms of measures that are purely atomic through mixtures; nullopt otherwise.
std::optional<std::vector<Atom>> try_flatten_atoms(const SpectralMeasure& mu);

// Pointwise density value of a Density variant at signed x (even extension).
double density_value(const DensityMeasure& d, double x);

nlohmann::json measure_to_json(const SpectralMeasure& mu);
SpectralMeasure measure_from_json(const nlohmann::json& j);

} // namespace gpz
