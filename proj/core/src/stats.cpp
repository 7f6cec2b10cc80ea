#include "spheroseg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "spheroseg/errors.hpp"

namespace spheroseg {

namespace {

// Regularized upper incomplete gamma Q(a,x): series for x < a+1,
// continued fraction (modified Lentz) otherwise.
double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) {
        throw Error(ErrorCode::InvalidArgument, "gamma_q: domain error");
    }
    if (x == 0.0) return 1.0;

    const double lg = std::lgamma(a);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min() / eps;

    if (x < a + 1.0) {
        // P(a,x) series, Q = 1 - P
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int i = 0; i < 1000; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * eps) break;
        }
        const double p = sum * std::exp(-x + a * std::log(x) - lg);
        return 1.0 - p;
    }

    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return std::exp(-x + a * std::log(x) - lg) * h;
}

// mean ranks within one block, ties averaged
std::vector<double> block_ranks(const std::vector<double>& row) {
    const std::size_t k = row.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });

    std::vector<double> ranks(k, 0.0);
    std::size_t i = 0;
    while (i < k) {
        std::size_t j = i;
        while (j + 1 < k && row[order[j + 1]] == row[order[i]]) ++j;
        const double mean_rank = (double(i) + double(j)) / 2.0 + 1.0;
        for (std::size_t q = i; q <= j; ++q) ranks[order[q]] = mean_rank;
        i = j + 1;
    }
    return ranks;
}

void check_matrix(const BlockMatrix& m) {
    if (m.blocks() < 2 || m.treatments() < 2) {
        throw Error(ErrorCode::InvalidArgument, "need at least 2 blocks and 2 treatments");
    }
    for (const auto& row : m.values) {
        if (row.size() != m.treatments()) {
            throw Error(ErrorCode::InvalidArgument, "ragged block matrix");
        }
    }
}

}  // namespace

double chi2_sf(double x, int dof) {
    if (dof < 1) throw Error(ErrorCode::InvalidArgument, "chi2_sf: dof must be >= 1");
    if (x < 0.0) throw Error(ErrorCode::InvalidArgument, "chi2_sf: x must be >= 0");
    return gamma_q(dof / 2.0, x / 2.0);
}

double normal_sf(double z) {
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

FriedmanResult friedman(const BlockMatrix& matrix) {
    check_matrix(matrix);
    const std::size_t n = matrix.blocks();
    const std::size_t k = matrix.treatments();

    FriedmanResult res;
    res.rank_sums.assign(k, 0.0);
    double sum_sq_ranks = 0.0;  // A = sum of squared cell ranks
    for (const auto& row : matrix.values) {
        const auto ranks = block_ranks(row);
        for (std::size_t j = 0; j < k; ++j) {
            res.rank_sums[j] += ranks[j];
            sum_sq_ranks += ranks[j] * ranks[j];
        }
    }

    const double c = double(n) * k * (k + 1.0) * (k + 1.0) / 4.0;
    const double denom = sum_sq_ranks - c;
    if (denom <= 0.0) {
        // every row fully tied: no discrimination
        res.statistic = 0.0;
        res.p_value = 1.0;
        return res;
    }
    double num = 0.0;
    const double expected = double(n) * (k + 1.0) / 2.0;
    for (std::size_t j = 0; j < k; ++j) {
        num += (res.rank_sums[j] - expected) * (res.rank_sums[j] - expected);
    }
    res.statistic = (k - 1.0) * num / denom;
    res.p_value = chi2_sf(res.statistic, int(k) - 1);
    return res;
}

std::vector<DunnComparison> dunn_bonferroni(const BlockMatrix& matrix, double alpha) {
    const FriedmanResult fr = friedman(matrix);
    const std::size_t n = matrix.blocks();
    const std::size_t k = matrix.treatments();
    const double se = std::sqrt(double(k) * (k + 1.0) / (6.0 * double(n)));
    const double m = double(k) * (k - 1.0) / 2.0;  // number of pairs

    std::vector<DunnComparison> out;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            DunnComparison d;
            d.i = i;
            d.j = j;
            d.z = (fr.rank_sums[i] / n - fr.rank_sums[j] / n) / se;
            d.p_raw = 2.0 * normal_sf(std::abs(d.z));
            d.p_adjusted = std::min(1.0, d.p_raw * m);
            d.significant = d.p_adjusted < alpha;
            out.push_back(d);
        }
    }
    return out;
}

}  // namespace spheroseg
