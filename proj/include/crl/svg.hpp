#pragma once

#include <string>
#include <vector>

namespace crl {

struct RocSeries {
    std::string label;
    std::vector<double> fpr;
    std::vector<double> tpr;
    double auc = 0.0;
};

// Plain-text SVG of one or more ROC curves with axes and an AUC legend.
std::string roc_svg(const std::vector<RocSeries>& series);

// Correlation heat map: grid of cells colored blue (-1) .. white (0) .. red (+1).
std::string correlation_heatmap_svg(const std::vector<std::string>& names,
                                    const std::vector<std::vector<double>>& matrix);

} // namespace crl
