#pragma once

#include <string>
#include <vector>

namespace spheroseg {

/// n blocks (images) x k treatments (observer pairs) of metric values.
struct BlockMatrix {
    std::vector<std::vector<double>> values;  // values[block][treatment]
    std::vector<std::string> labels;          // treatment names

    std::size_t blocks() const { return values.size(); }
    std::size_t treatments() const { return values.empty() ? 0 : values.front().size(); }
};

struct FriedmanResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::vector<double> rank_sums;  // per treatment
};

struct DunnComparison {
    std::size_t i = 0, j = 0;  // treatment indices
    double z = 0.0;
    double p_raw = 1.0;
    double p_adjusted = 1.0;
    bool significant = false;
};

/// Tie-corrected Friedman test (mean ranks on ties, chi-square with
/// k-1 dof). All-tied data gives statistic 0, p 1.
FriedmanResult friedman(const BlockMatrix& matrix);

/// Dunn pairwise post-hoc with Bonferroni adjustment over k(k-1)/2 pairs.
std::vector<DunnComparison> dunn_bonferroni(const BlockMatrix& matrix, double alpha);

/// Chi-square survival function via the regularized upper incomplete gamma.
double chi2_sf(double x, int dof);

/// Standard normal survival function.
double normal_sf(double z);

}  // namespace spheroseg
