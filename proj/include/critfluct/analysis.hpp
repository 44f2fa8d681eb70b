#pragma once

#include <utility>
#include <vector>

#include "critfluct/errors.hpp"

namespace critfluct {

// Histogram over log-spaced bins of sample magnitudes. Zeros never enter
// (their count is reported) and neither do values outside [lo, hi]. Densities
// are count / (included * bin_width), so density * width sums to 1 over the
// included samples.
struct LogHistogram {
    std::vector<double> edges;    // nbins + 1, log-spaced over [lo, hi]
    std::vector<long long> counts;
    std::vector<double> densities;
    long long included = 0;
    long long excluded_zero = 0;
    long long excluded_outside = 0;

    int nbins() const { return static_cast<int>(counts.size()); }
    double width(int i) const { return edges[i + 1] - edges[i]; }
    double center(int i) const;  // geometric bin center
};

LogHistogram log_bin(const std::vector<double>& magnitudes, int nbins, double lo, double hi);

// Least-squares line through (log center, log density) of the nonempty bins
// inside [lo, hi]; k is minus the slope, stderr_k comes from the fit
// residuals. Fewer than 5 usable bins is an InsufficientDataError.
struct PowerLawFit {
    double k = 0.0;
    double stderr_k = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    int bins_used = 0;
    long long n_samples = 0;       // included samples of the source histogram
    long long excluded_zeros = 0;
};

PowerLawFit fit_power_law(const LogHistogram& hist, double lo, double hi);

// Default fit window: the maximal contiguous run of bins holding at least 10
// samples around the peak bin, trimmed by half a decade at each end.
std::pair<double, double> default_fit_window(const std::vector<double>& magnitudes, int nbins);

// Fits the samples on (lo, hi) and the samples scaled by c on (|c| lo, |c| hi)
// with identical binning; a power law keeps its exponent under linear maps, so
// the two fitted k agree.
std::pair<PowerLawFit, PowerLawFit> scaling_exponent_invariance(const std::vector<double>& magnitudes,
                                                                double c, int nbins, double lo,
                                                                double hi);

// Sample moment <x^m>.
double moment(const std::vector<double>& samples, int m);

// Kolmogorov-Smirnov distance between the empirical CDF of `samples` and the
// CDF obtained by trapezoid-integrating the (grid, density) curve. The grid
// must be strictly increasing; the integrated density is renormalized to 1.
double ks_distance(std::vector<double> samples, const std::vector<double>& grid,
                   const std::vector<double>& density);

}  // namespace critfluct
