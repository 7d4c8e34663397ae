#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crl/preprocess.hpp"

namespace crl {

inline constexpr int kDensityBins = 50;

struct Quartiles {
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double iqr() const { return q3 - q1; }
};

struct DensityPeak {
    double height = 0.0;   // count / (n_class * bin width)
    double location = 0.0; // midpoint of the peak bin
};

struct ClassStats {
    std::size_t count = 0;
    double mean = 0.0; // bar-height analog of the per-class magnitude
    double spread = 0.0; // IQR
    DensityPeak peak;
};

struct FeatureProfile {
    std::string name;
    std::optional<double> correlation_with_target; // empty when degenerate
    double variance = 0.0; // population
    std::optional<double> skewness;
    Quartiles quartiles;
    std::size_t outlier_count = 0; // 1.5*IQR fence rule
    bool balanced = false;         // minority/majority mean magnitude > 0.6
    ClassStats no_risk;            // target 0
    ClassStats risk;               // target 1
    std::size_t observed = 0;      // non-missing cells profiled
};

struct SelectionReport {
    double threshold = 0.1;
    struct Entry {
        std::string name;
        std::optional<double> correlation;
    };
    std::vector<Entry> stage1_included;
    std::vector<Entry> stage1_dropped;
    std::vector<std::string> stage2_dropped;     // configured manual drops
    std::vector<std::string> degenerate_flagged; // kept but zero spread + zero variance
    std::vector<std::string> final_features;
};

// Pairwise-complete Pearson r. Missing-aware: pairs with a NaN on either
// side are skipped. Returns nullopt when fewer than two complete pairs
// remain or either side is constant. Throws LengthMismatch.
std::optional<double> pearson_correlation(std::span<const double> x,
                                          std::span<const double> y);

// One r per feature column against the binary target.
std::vector<std::optional<double>> correlation_with_target(const NumericTable& table);

// Full pairwise matrix over the feature columns plus the target (last row
// and column). Degenerate pairs come back as NaN.
std::vector<std::vector<double>> correlation_matrix(const NumericTable& table);

// Fisher-Pearson g1 with population moments; NaNs are skipped. Throws
// DegenerateDistribution on zero variance, requires >= 3 observed values.
double skewness(std::span<const double> values);

// Linear-interpolation quartiles over the observed (non-NaN) values.
Quartiles quartiles(std::span<const double> values);

FeatureProfile profile_feature(const std::string& name, std::span<const double> column,
                               std::span<const std::uint8_t> labels);

SelectionReport select_features(const std::vector<FeatureProfile>& profiles,
                                double threshold,
                                const std::vector<std::string>& manual_drops);

} // namespace crl
