#include "critfluct/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace critfluct {

double LogHistogram::center(int i) const { return std::sqrt(edges[i] * edges[i + 1]); }

LogHistogram log_bin(const std::vector<double>& magnitudes, int nbins, double lo, double hi) {
    if (nbins < 2) throw ConfigError("log histogram needs at least 2 bins");
    if (!(lo > 0.0) || !(hi > lo)) throw ConfigError("log histogram window must satisfy 0 < lo < hi");

    LogHistogram h;
    h.edges.resize(nbins + 1);
    double llo = std::log10(lo), lhi = std::log10(hi);
    for (int i = 0; i <= nbins; ++i)
        h.edges[i] = std::pow(10.0, llo + (lhi - llo) * i / nbins);
    h.edges.front() = lo;
    h.edges.back() = hi;
    h.counts.assign(nbins, 0);

    double lw = (lhi - llo) / nbins;
    for (double m : magnitudes) {
        if (m == 0.0) {
            ++h.excluded_zero;
            continue;
        }
        double a = std::abs(m);
        if (a < lo || a > hi) {
            ++h.excluded_outside;
            continue;
        }
        int idx = static_cast<int>((std::log10(a) - llo) / lw);
        idx = std::clamp(idx, 0, nbins - 1);
        // Round-off from the log can straddle an edge by one bin.
        if (a < h.edges[idx] && idx > 0) --idx;
        else if (a >= h.edges[idx + 1] && idx < nbins - 1) ++idx;
        ++h.counts[idx];
        ++h.included;
    }
    if (h.included == 0) throw EmptyHistogramError("no nonzero samples inside the histogram window");

    h.densities.resize(nbins);
    for (int i = 0; i < nbins; ++i)
        h.densities[i] = h.counts[i] / (static_cast<double>(h.included) * (h.edges[i + 1] - h.edges[i]));
    return h;
}

PowerLawFit fit_power_law(const LogHistogram& hist, double lo, double hi) {
    if (!(lo > 0.0) || !(hi > lo)) throw ConfigError("fit window must satisfy 0 < lo < hi");

    std::vector<double> xs, ys;
    int used = 0;
    for (int i = 0; i < hist.nbins(); ++i) {
        // Only nonempty bins lying fully inside the window enter the fit; the
        // tolerance absorbs round-off in the log-spaced edges.
        if (hist.counts[i] == 0) continue;
        if (hist.edges[i] < lo * (1.0 - 1e-12) || hist.edges[i + 1] > hi * (1.0 + 1e-12)) continue;
        xs.push_back(std::log10(hist.center(i)));
        ys.push_back(std::log10(hist.densities[i]));
        ++used;
    }
    if (used < 5) {
        std::ostringstream msg;
        msg << "need at least 5 nonempty bins inside the fit window, found " << used;
        throw InsufficientDataError(msg.str());
    }

    size_t m = xs.size();
    double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
    double my = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < m; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw InsufficientDataError("fit window has no spread in log magnitude");
    double slope = sxy / sxx;
    double icpt = my - slope * mx;

    double sse = 0.0, sst = 0.0;
    for (size_t i = 0; i < m; ++i) {
        double r = ys[i] - (icpt + slope * xs[i]);
        sse += r * r;
        sst += (ys[i] - my) * (ys[i] - my);
    }

    PowerLawFit fit;
    fit.k = -slope;  // density ∝ magnitude^{-k}
    fit.stderr_k = m > 2 ? std::sqrt(sse / ((m - 2) * sxx)) : 0.0;
    fit.intercept = icpt;
    fit.r_squared = sst > 0.0 ? 1.0 - sse / sst : 1.0;
    fit.window_lo = lo;
    fit.window_hi = hi;
    fit.bins_used = used;
    fit.n_samples = hist.included;
    fit.excluded_zeros = hist.excluded_zero;
    return fit;
}

std::pair<double, double> default_fit_window(const std::vector<double>& magnitudes, int nbins) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (double m : magnitudes) {
        double a = std::abs(m);
        if (a == 0.0) continue;
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    if (!(hi > 0.0)) throw InsufficientDataError("all magnitudes are zero, no fit window");
    if (hi <= lo) {
        lo *= 0.5;
        hi *= 2.0;
    }
    LogHistogram h = log_bin(magnitudes, nbins, lo, hi);

    // Longest contiguous run of bins holding >= 10 samples that contains the
    // peak bin, then half a decade shaved off each end when enough remains.
    int peak = static_cast<int>(std::max_element(h.counts.begin(), h.counts.end()) - h.counts.begin());
    if (h.counts[peak] < 10)
        throw InsufficientDataError("peak bin holds fewer than 10 samples, no usable window");
    int a = peak, b = peak;
    while (a > 0 && h.counts[a - 1] >= 10) --a;
    while (b + 1 < nbins && h.counts[b + 1] >= 10) ++b;

    double lw = std::log10(h.edges[1] / h.edges[0]);
    int trim = lw > 0.0 ? static_cast<int>(std::floor(0.5 / lw)) : 0;
    if (b - a + 1 - 2 * trim >= 5) {
        a += trim;
        b -= trim;
    }
    return {h.edges[a], h.edges[b + 1]};
}

std::pair<PowerLawFit, PowerLawFit> scaling_exponent_invariance(const std::vector<double>& magnitudes,
                                                                double c, int nbins, double lo,
                                                                double hi) {
    if (c == 0.0) throw ConfigError("scale factor must be nonzero");
    double s = std::abs(c);
    PowerLawFit base = fit_power_law(log_bin(magnitudes, nbins, lo, hi), lo, hi);

    std::vector<double> scaled(magnitudes.size());
    std::transform(magnitudes.begin(), magnitudes.end(), scaled.begin(),
                   [c](double m) { return c * m; });
    PowerLawFit moved = fit_power_law(log_bin(scaled, nbins, s * lo, s * hi), s * lo, s * hi);
    return {base, moved};
}

double moment(const std::vector<double>& samples, int m) {
    if (samples.empty()) throw InsufficientDataError("moment of an empty sample");
    if (m < 1) throw ConfigError("moment order must be a positive integer");
    double acc = 0.0;
    for (double v : samples) {
        double p = 1.0;
        for (int i = 0; i < m; ++i) p *= v;
        acc += p;
    }
    return acc / samples.size();
}

double ks_distance(std::vector<double> samples, const std::vector<double>& grid,
                   const std::vector<double>& density) {
    if (grid.size() != density.size() || grid.size() < 2)
        throw ConfigError("ks grid and density must align with at least 2 points");
    for (size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw ConfigError("ks grid must be strictly increasing");
    if (samples.empty()) throw InsufficientDataError("ks distance of an empty sample");

    // Trapezoid CDF of the model density, renormalized so both sides end at 1.
    std::vector<double> cdf(grid.size(), 0.0);
    for (size_t i = 1; i < grid.size(); ++i)
        cdf[i] = cdf[i - 1] + 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
    double total = cdf.back();
    if (!(total > 0.0)) throw InsufficientDataError("model density integrates to zero on the ks grid");
    for (double& v : cdf) v /= total;

    std::sort(samples.begin(), samples.end());
    double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        auto it = std::upper_bound(samples.begin(), samples.end(), grid[i]);
        double emp = static_cast<double>(it - samples.begin()) / n;
        d = std::max(d, std::abs(emp - cdf[i]));
    }
    return d;
}

}  // namespace critfluct
