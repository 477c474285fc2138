#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

namespace nsp::numerics {

/// Root of a function that is non-negative at `lo`, non-positive at `hi`
/// and changes sign once in between. Stops when |f(mid)| < f_tol or the
/// bracket can no longer be split.
template <typename F>
double bisect_decreasing(F&& f, double lo, double hi, double f_tol = 1e-12) {
    double f_lo = f(lo);
    if (f_lo <= 0.0) return lo;
    if (f(hi) >= 0.0) return hi;
    for (int i = 0; i < 400; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double f_mid = f(mid);
        if (std::abs(f_mid) < f_tol) return mid;
        if (f_mid > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Smallest x in [lo, hi] with pred(x) true, for a predicate that is
/// false then true along the interval. Returns hi if pred(hi) is the first
/// true point reached.
template <typename Pred>
double bisect_predicate(Pred&& pred, double lo, double hi, double x_tol = 1e-14) {
    if (pred(lo)) return lo;
    while (hi - lo > x_tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (pred(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

struct Maximum {
    double x;
    double value;
};

/// Golden-section search for the maximum of a unimodal function on [a, b].
template <typename F>
Maximum golden_section_max(F&& f, double a, double b, double x_tol = 1e-12) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < 200 && (b - a) > x_tol; ++i) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

/// Global maximum over [lo, hi]: an even scan of `points` nodes locates the
/// best node (ties go to the smaller x), then golden-section refines inside
/// the two neighbouring cells. The refined point is kept only if it does not
/// lose to the best node.
template <typename F>
Maximum scan_then_refine_max(F&& f, double lo, double hi, std::size_t points) {
    const double step = (hi - lo) / static_cast<double>(points - 1);
    std::size_t best = 0;
    double best_value = f(lo);
    for (std::size_t i = 1; i < points; ++i) {
        const double x = (i + 1 == points) ? hi : lo + step * static_cast<double>(i);
        const double v = f(x);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    const double x_best = (best + 1 == points) ? hi : lo + step * static_cast<double>(best);
    const double a = best == 0 ? lo : x_best - step;
    const double b = best + 1 == points ? hi : x_best + step;
    const Maximum refined = golden_section_max(f, a, b);
    if (refined.value >= best_value) return refined;
    return {x_best, best_value};
}

}  // namespace nsp::numerics
