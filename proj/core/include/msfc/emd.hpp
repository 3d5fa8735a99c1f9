#pragma once

#include <cstddef>
#include <vector>

namespace msfc::emd {

// ============================================================================
// Types
// ============================================================================

/// Local extremum of a sampled signal. Boundary-extended extrema may carry
/// indices < 0 or >= N; interior extrema always lie in [1, N-2].
struct Extremum {
  double index = 0.0;
  double value = 0.0;
};

/// How envelope knots are handled at the series ends.
///  - Sbm: synthetic extrema beyond each end, extrapolated from the slopes of
///    the two nearest same-kind extrema.
///  - Mirror: nearest extrema reflected across each end.
///  - Truncate: no synthetic extrema; the raw series endpoints serve as
///    envelope knots, the untreated baseline that produces the classical
///    end effect.
enum class BoundaryMode { Sbm, Mirror, Truncate };

struct SiftConfig {
  double sd_threshold = 0.3;
  int max_sift_iterations = 10;
  int max_imfs = 12;
  BoundaryMode boundary_mode = BoundaryMode::Sbm;
};

struct Decomposition {
  std::vector<std::vector<double>> imfs;  // highest frequency first
  std::vector<double> residue;

  std::size_t n_components() const { return imfs.size() + 1; }
};

struct ExtremaPair {
  std::vector<Extremum> maxima;
  std::vector<Extremum> minima;
};

struct ExtendedExtrema {
  std::vector<Extremum> maxima;
  std::vector<Extremum> minima;
  bool used_fallback = false;  // endpoint replication instead of slope rule
};

// ============================================================================
// Operations
// ============================================================================

/// Interior extrema, sorted by index. A plateau (run of equal values flanked
/// by strictly lower/higher neighbours) contributes one extremum at the run's
/// centre sample, left-centre for even runs. Monotone signals yield empty
/// lists.
ExtremaPair find_extrema(const std::vector<double>& signal);

/// Slope-based boundary extension: appends one synthetic maximum and minimum
/// beyond each end by linearly extrapolating the line through the two
/// nearest same-kind extrema. If the signal endpoint pierces the implied
/// envelope at that end, the endpoint itself is inserted as an extremum of
/// the violated kind. With fewer than 2 maxima or 2 minima the endpoints are
/// replicated as both boundary max and min (flagged).
ExtendedExtrema extend_extrema_sbm(const std::vector<Extremum>& maxima,
                                   const std::vector<Extremum>& minima,
                                   const std::vector<double>& signal);

/// Mirror boundary extension: the extrema nearest each end are reflected
/// across it. Falls back to endpoint replication like the slope rule when
/// either kind has no interior extremum.
ExtendedExtrema extend_extrema_mirror(const std::vector<Extremum>& maxima,
                                      const std::vector<Extremum>& minima,
                                      const std::vector<double>& signal);

/// Natural cubic spline through the extrema, evaluated at indices 0..n-1.
/// Two knots degenerate to a line; evaluation outside the knot range uses
/// the boundary segments. Throws NumericError with fewer than 2 knots.
std::vector<double> spline_envelope(const std::vector<Extremum>& extrema,
                                    std::size_t n);

/// One round of sifting: repeatedly subtracts the mean envelope until the
/// Huang SD criterion drops below config.sd_threshold or the iteration cap is
/// reached. Throws NumericError when the signal has fewer than 2 maxima or
/// 2 minima (not siftable; callers treat such a signal as residue).
std::vector<double> sift(const std::vector<double>& signal,
                         const SiftConfig& config);

/// Full decomposition: sifts successive residues until the residue is
/// monotone, has fewer than 2 extrema of either kind, or max_imfs is reached.
std::vector<double> reconstruct(const Decomposition& dec);
Decomposition decompose(const std::vector<double>& signal,
                        const SiftConfig& config);

}  // namespace msfc::emd
