#include "msfc/emd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "msfc/errors.hpp"

namespace msfc::emd {

namespace {

// Natural cubic spline over strictly increasing knots. Second derivatives
// vanish at the first and last knot; evaluation outside the knot range
// continues the boundary segments.
class NaturalCubicSpline {
 public:
  explicit NaturalCubicSpline(const std::vector<Extremum>& knots) {
    const std::size_t k = knots.size();
    if (k < 2) throw NumericError("spline needs at least 2 knots");
    x_.resize(k);
    y_.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      x_[i] = knots[i].index;
      y_[i] = knots[i].value;
      if (i > 0 && !(x_[i] > x_[i - 1])) {
        throw NumericError("spline knots not strictly increasing");
      }
    }
    m_.assign(k, 0.0);  // second derivatives; ends stay 0 (natural)
    if (k > 2) {
      // Thomas algorithm on the interior tridiagonal system.
      const std::size_t kk = k - 2;
      std::vector<double> diag(kk), rhs(kk), upper(kk);
      for (std::size_t i = 0; i < kk; ++i) {
        const double h0 = x_[i + 1] - x_[i];
        const double h1 = x_[i + 2] - x_[i + 1];
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((y_[i + 2] - y_[i + 1]) / h1 -
                        (y_[i + 1] - y_[i]) / h0);
      }
      for (std::size_t i = 1; i < kk; ++i) {
        const double lower = x_[i + 1] - x_[i];  // h0 of row i
        const double w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
      }
      m_[kk] = rhs[kk - 1] / diag[kk - 1];
      for (std::size_t i = kk - 1; i >= 1; --i) {
        m_[i] = (rhs[i - 1] - upper[i - 1] * m_[i + 1]) / diag[i - 1];
      }
    }
  }

  double operator()(double x) const {
    // Boundary segments extend beyond the knot range.
    std::size_t seg = 0;
    if (x >= x_.back()) {
      seg = x_.size() - 2;
    } else if (x > x_.front()) {
      seg = static_cast<std::size_t>(
                std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) -
            1;
    }
    const double h = x_[seg + 1] - x_[seg];
    const double a = (x_[seg + 1] - x) / h;
    const double b = (x - x_[seg]) / h;
    return a * y_[seg] + b * y_[seg + 1] +
           ((a * a * a - a) * m_[seg] + (b * b * b - b) * m_[seg + 1]) *
               (h * h) / 6.0;
  }

 private:
  std::vector<double> x_, y_, m_;
};

void insert_sorted(std::vector<Extremum>& list, Extremum e) {
  auto pos = std::lower_bound(
      list.begin(), list.end(), e,
      [](const Extremum& a, const Extremum& b) { return a.index < b.index; });
  list.insert(pos, e);
}

// Value at `at` of the line through the two extrema.
double line_through(const Extremum& a, const Extremum& b, double at) {
  return a.value + (at - a.index) * (b.value - a.value) / (b.index - a.index);
}

ExtendedExtrema endpoint_fallback(const std::vector<Extremum>& maxima,
                                  const std::vector<Extremum>& minima,
                                  const std::vector<double>& signal) {
  ExtendedExtrema ext{maxima, minima, true};
  const auto n = static_cast<double>(signal.size());
  const Extremum left{0.0, signal.front()};
  const Extremum right{n - 1.0, signal.back()};
  insert_sorted(ext.maxima, left);
  insert_sorted(ext.maxima, right);
  insert_sorted(ext.minima, left);
  insert_sorted(ext.minima, right);
  return ext;
}

}  // namespace

// ============================================================================
// find_extrema
// ============================================================================

ExtremaPair find_extrema(const std::vector<double>& signal) {
  ExtremaPair out;
  const std::size_t n = signal.size();
  if (n < 3) return out;

  std::size_t i = 0;
  while (i < n) {
    // Maximal run of equal values [i, j).
    std::size_t j = i + 1;
    while (j < n && signal[j] == signal[i]) ++j;
    const bool has_left = i > 0;
    const bool has_right = j < n;
    if (has_left && has_right) {
      const double v = signal[i];
      const std::size_t center = i + (j - 1 - i) / 2;  // left-centre if even
      if (signal[i - 1] < v && signal[j] < v) {
        out.maxima.push_back({static_cast<double>(center), v});
      } else if (signal[i - 1] > v && signal[j] > v) {
        out.minima.push_back({static_cast<double>(center), v});
      }
    }
    i = j;
  }
  return out;
}

// ============================================================================
// Boundary extension
// ============================================================================

ExtendedExtrema extend_extrema_sbm(const std::vector<Extremum>& maxima,
                                   const std::vector<Extremum>& minima,
                                   const std::vector<double>& signal) {
  if (signal.size() < 4) throw DataError("signal too short for extension");
  if (maxima.size() < 2 || minima.size() < 2) {
    return endpoint_fallback(maxima, minima, signal);
  }

  ExtendedExtrema ext{maxima, minima, false};
  const double right_end = static_cast<double>(signal.size()) - 1.0;

  // Synthetic extrema sit on the line through the two nearest same-kind
  // extrema, at the mirrored spacing, clamped to lie strictly outside the
  // sample range so knots never collide.
  const auto extend = [&](std::vector<Extremum>& list) {
    const Extremum a0 = list[0];
    const Extremum a1 = list[1];
    const Extremum z0 = list[list.size() - 1];
    const Extremum z1 = list[list.size() - 2];
    const double li = std::min(a0.index - (a1.index - a0.index), -1.0);
    const double ri = std::max(z0.index + (z0.index - z1.index),
                               right_end + 1.0);
    list.insert(list.begin(), Extremum{li, line_through(a0, a1, li)});
    list.push_back(Extremum{ri, line_through(z1, z0, ri)});
  };
  extend(ext.maxima);
  extend(ext.minima);

  // Endpoint guard: if an endpoint pierces the implied envelope (the
  // extrapolated same-kind extrema line), insert it as a knot of the
  // violated kind.
  const auto guard = [&](double at, double endpoint_value) {
    // maxima[1]/maxima[2] are the two original near-end extrema after the
    // left insertion; at the right end use the last two originals.
    const double upper = (at == 0.0)
                             ? line_through(ext.maxima[1], ext.maxima[2], at)
                             : line_through(ext.maxima[ext.maxima.size() - 3],
                                            ext.maxima[ext.maxima.size() - 2],
                                            at);
    const double lower = (at == 0.0)
                             ? line_through(ext.minima[1], ext.minima[2], at)
                             : line_through(ext.minima[ext.minima.size() - 3],
                                            ext.minima[ext.minima.size() - 2],
                                            at);
    if (endpoint_value > upper) {
      insert_sorted(ext.maxima, {at, endpoint_value});
    }
    if (endpoint_value < lower) {
      insert_sorted(ext.minima, {at, endpoint_value});
    }
  };
  guard(0.0, signal.front());
  guard(right_end, signal.back());
  return ext;
}

ExtendedExtrema extend_extrema_mirror(const std::vector<Extremum>& maxima,
                                      const std::vector<Extremum>& minima,
                                      const std::vector<double>& signal) {
  if (signal.size() < 4) throw DataError("signal too short for extension");
  if (maxima.empty() || minima.empty()) {
    return endpoint_fallback(maxima, minima, signal);
  }
  ExtendedExtrema ext{maxima, minima, false};
  const double right_end = static_cast<double>(signal.size()) - 1.0;
  const auto mirror = [&](std::vector<Extremum>& list) {
    const Extremum left{-list.front().index, list.front().value};
    const Extremum right{2.0 * right_end - list.back().index,
                         list.back().value};
    list.insert(list.begin(), left);
    list.push_back(right);
  };
  mirror(ext.maxima);
  mirror(ext.minima);
  return ext;
}

// ============================================================================
// Envelopes and sifting
// ============================================================================

std::vector<double> spline_envelope(const std::vector<Extremum>& extrema,
                                    std::size_t n) {
  NaturalCubicSpline spline(extrema);
  std::vector<double> env(n);
  for (std::size_t i = 0; i < n; ++i) {
    env[i] = spline(static_cast<double>(i));
  }
  return env;
}

namespace {

// Envelope-mean subtraction loop shared by sift() and decompose().
// Precondition (>= 2 maxima and minima) already checked by the caller.
std::vector<double> sift_prechecked(std::vector<double> h,
                                    const SiftConfig& config) {
  const std::size_t n = h.size();
  for (int iter = 0; iter < config.max_sift_iterations; ++iter) {
    ExtremaPair ex = find_extrema(h);
    if (ex.maxima.size() < 2 || ex.minima.size() < 2) break;

    ExtendedExtrema ext;
    switch (config.boundary_mode) {
      case BoundaryMode::Sbm:
        ext = extend_extrema_sbm(ex.maxima, ex.minima, h);
        break;
      case BoundaryMode::Mirror:
        ext = extend_extrema_mirror(ex.maxima, ex.minima, h);
        break;
      case BoundaryMode::Truncate:
        // Untreated sifting: the raw endpoints serve as envelope knots for
        // both envelopes, the classical source of the end effect.
        ext = endpoint_fallback(ex.maxima, ex.minima, h);
        ext.used_fallback = false;
        break;
    }

    const std::vector<double> upper = spline_envelope(ext.maxima, n);
    const std::vector<double> lower = spline_envelope(ext.minima, n);

    double num = 0.0;  // sum of squared mean envelope = (h_prev - h_new)^2
    double den = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double mean = 0.5 * (upper[t] + lower[t]);
      num += mean * mean;
      den += h[t] * h[t];
      h[t] -= mean;
    }
    const double sd = den > 0.0 ? num / den : 0.0;
    if (sd < config.sd_threshold) break;
  }
  return h;
}

}  // namespace

std::vector<double> sift(const std::vector<double>& signal,
                         const SiftConfig& config) {
  ExtremaPair ex = find_extrema(signal);
  if (ex.maxima.size() < 2 || ex.minima.size() < 2) {
    throw NumericError("signal not siftable: needs >= 2 maxima and minima");
  }
  return sift_prechecked(signal, config);
}

// ============================================================================
// Decomposition
// ============================================================================

Decomposition decompose(const std::vector<double>& signal,
                        const SiftConfig& config) {
  if (signal.size() < 8) {
    throw DataError("signal too short to decompose (need >= 8 samples)");
  }
  Decomposition dec;
  dec.residue = signal;
  while (static_cast<int>(dec.imfs.size()) < config.max_imfs) {
    ExtremaPair ex = find_extrema(dec.residue);
    if (ex.maxima.size() < 2 || ex.minima.size() < 2) break;
    std::vector<double> imf = sift_prechecked(dec.residue, config);
    for (std::size_t t = 0; t < dec.residue.size(); ++t) {
      dec.residue[t] -= imf[t];
    }
    dec.imfs.push_back(std::move(imf));
  }
  return dec;
}

std::vector<double> reconstruct(const Decomposition& dec) {
  std::vector<double> sum = dec.residue;
  for (const auto& imf : dec.imfs) {
    if (imf.size() != sum.size()) {
      throw DataError("corrupt decomposition: component length mismatch");
    }
    for (std::size_t t = 0; t < sum.size(); ++t) sum[t] += imf[t];
  }
  return sum;
}

}  // namespace msfc::emd
