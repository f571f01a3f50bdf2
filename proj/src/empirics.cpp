#include "rlab/empirics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace rlab {

namespace {

// Power sums sum y^r, r = 1..6, over a range of the (globally centered)
// sample; the jackknife subtracts per-block sums from the totals.
using PowerSums = std::array<double, 7>;  // index r, [0] unused

PowerSums power_sums(const std::vector<double>& y, std::size_t lo,
                     std::size_t hi) {
    PowerSums s{};
    for (std::size_t i = lo; i < hi; ++i) {
        const double v = y[i];
        const double v2 = v * v;
        const double v3 = v2 * v;
        s[1] += v;
        s[2] += v2;
        s[3] += v3;
        s[4] += v2 * v2;
        s[5] += v2 * v3;
        s[6] += v3 * v3;
    }
    return s;
}

struct KEstimates {
    double k2, k3, k4, k6;
};

// k-statistics from power sums over n points.  Central moments come from the
// raw moments of the centered data, which keeps the same code path exact for
// the leave-block-out samples (whose mean is no longer zero).
KEstimates k_from_sums(const PowerSums& s, double n) {
    const double m1 = s[1] / n;
    const double M2 = s[2] / n, M3 = s[3] / n, M4 = s[4] / n, M5 = s[5] / n,
                 M6 = s[6] / n;
    const double m1_2 = m1 * m1;
    const double c2 = M2 - m1_2;
    const double c3 = M3 - 3 * m1 * M2 + 2 * m1 * m1_2;
    const double c4 = M4 - 4 * m1 * M3 + 6 * m1_2 * M2 - 3 * m1_2 * m1_2;
    const double c6 = M6 - 6 * m1 * M5 + 15 * m1_2 * M4 -
                      20 * m1 * m1_2 * M3 + 15 * m1_2 * m1_2 * M2 -
                      5 * m1_2 * m1_2 * m1_2;
    KEstimates k;
    k.k2 = n / (n - 1) * c2;
    k.k3 = n * n / ((n - 1) * (n - 2)) * c3;
    k.k4 = n * n * ((n + 1) * c4 - 3 * (n - 1) * c2 * c2) /
           ((n - 1) * (n - 2) * (n - 3));
    // sixth cumulant from central moments (estimator bias O(1/n))
    k.k6 = c6 - 15 * c4 * c2 - 10 * c3 * c3 + 30 * c2 * c2 * c2;
    return k;
}

}  // namespace

SampleStats k_statistics(const std::vector<double>& sample) {
    const std::size_t n = sample.size();
    if (n < 8)
        throw std::invalid_argument("k_statistics: need at least 8 observations");

    double mean = 0.0;
    for (double v : sample) mean += v;
    mean /= static_cast<double>(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = sample[i] - mean;

    const std::size_t B = std::min<std::size_t>(32, n);
    std::vector<PowerSums> block(B);
    PowerSums total{};
    std::vector<std::size_t> edge(B + 1);
    for (std::size_t b = 0; b <= B; ++b) edge[b] = b * n / B;
    for (std::size_t b = 0; b < B; ++b) {
        block[b] = power_sums(y, edge[b], edge[b + 1]);
        for (int r = 1; r <= 6; ++r) total[r] += block[b][r];
    }

    const KEstimates full = k_from_sums(total, static_cast<double>(n));
    SampleStats out;
    out.n = static_cast<long long>(n);
    out.k2 = full.k2;
    out.k3 = full.k3;
    out.k4 = full.k4;
    out.k6 = full.k6;

    std::vector<KEstimates> jk(B);
    std::array<double, 4> acc{}, acc2{};
    for (std::size_t b = 0; b < B; ++b) {
        PowerSums rest{};
        for (int r = 1; r <= 6; ++r) rest[r] = total[r] - block[b][r];
        const double nr = static_cast<double>(n - (edge[b + 1] - edge[b]));
        jk[b] = k_from_sums(rest, nr);
        const std::array<double, 4> vals{jk[b].k2, jk[b].k3, jk[b].k4,
                                         jk[b].k6};
        for (int j = 0; j < 4; ++j) {
            acc[j] += vals[j];
            acc2[j] += vals[j] * vals[j];
        }
    }
    const double Bd = static_cast<double>(B);
    std::array<double, 4> se{};
    for (int j = 0; j < 4; ++j) {
        const double var = std::max(0.0, acc2[j] / Bd - (acc[j] / Bd) * (acc[j] / Bd));
        se[j] = std::sqrt((Bd - 1.0) * var);
    }
    out.se2 = se[0];
    out.se3 = se[1];
    out.se4 = se[2];
    out.se6 = se[3];
    return out;
}

CfEstimate empirical_cf(const std::vector<double>& sample, double u) {
    const std::size_t n = sample.size();
    if (n < 1) throw std::invalid_argument("empirical_cf: empty sample");
    double sc = 0.0, ss = 0.0, sc2 = 0.0, ss2 = 0.0;
    for (double v : sample) {
        const double c = std::cos(u * v);
        const double s = std::sin(u * v);
        sc += c;
        ss += s;
        sc2 += c * c;
        ss2 += s * s;
    }
    const double nd = static_cast<double>(n);
    CfEstimate out;
    out.re = sc / nd;
    out.im = ss / nd;
    if (n >= 2) {
        const double vc = std::max(0.0, (sc2 - sc * sc / nd) / (nd - 1.0));
        const double vs = std::max(0.0, (ss2 - ss * ss / nd) / (nd - 1.0));
        out.se = std::sqrt((vc + vs) / nd);
    }
    return out;
}

double wasserstein1(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("wasserstein1: empty sample");
    std::vector<double> sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const std::size_t n = sa.size(), m = sb.size();
    if (n == m) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += std::abs(sa[i] - sb[i]);
        return acc / static_cast<double>(n);
    }
    // integral of |F_a^{-1} - F_b^{-1}| over the merged quantile grid
    double acc = 0.0, q = 0.0;
    std::size_t i = 0, j = 0;
    while (i < n && j < m) {
        const double qa = static_cast<double>(i + 1) / n;
        const double qb = static_cast<double>(j + 1) / m;
        const double qn = std::min(qa, qb);
        acc += (qn - q) * std::abs(sa[i] - sb[j]);
        q = qn;
        if (qa <= qn + 1e-15) ++i;
        if (qb <= qn + 1e-15) ++j;
    }
    return acc;
}

SlopeFit loglog_slope(const std::vector<double>& xs,
                      const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 3)
        throw std::invalid_argument(
            "loglog_slope: need >= 3 points with matching lengths");
    const std::size_t n = xs.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
            throw std::domain_error("loglog_slope: values must be positive");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0))
        throw std::invalid_argument("loglog_slope: xs must not be all equal");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - my - fit.slope * (lx[i] - mx);
        ssr += r * r;
    }
    fit.stderr_ = std::sqrt(std::max(0.0, ssr / static_cast<double>(n - 2)) / sxx);
    return fit;
}

}  // namespace rlab
