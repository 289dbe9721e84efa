#include "voronet/cubature.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace voronet::cubature {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (positive abscissae;
// odd indices are the embedded Gauss points, index 7 is the midpoint).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
    double a = 0.0, b = 0.0;
    double value = 0.0, error = 0.0;
};

void eval_gk15(const std::function<double(double)>& f, Interval& iv) {
    const double centre = 0.5 * (iv.a + iv.b);
    const double hlgth = 0.5 * (iv.b - iv.a);
    double fv[15];
    const double fc = f(centre);
    fv[14] = fc;
    double resg = kWg[3] * fc;
    double resk = kWgk[7] * fc;
    for (int j = 0; j < 3; ++j) {
        const double dx = hlgth * kXgk[2 * j + 1];
        const double f1 = f(centre - dx);
        const double f2 = f(centre + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        resg += kWg[j] * (f1 + f2);
        resk += kWgk[2 * j + 1] * (f1 + f2);
    }
    for (int j = 0; j < 4; ++j) {
        const double dx = hlgth * kXgk[2 * j];
        const double f1 = f(centre - dx);
        const double f2 = f(centre + dx);
        fv[6 + 2 * j] = f1;
        fv[7 + 2 * j] = f2;
        resk += kWgk[2 * j] * (f1 + f2);
    }
    // Scale the raw |K15 - G7| difference by the integrand's deviation from
    // its mean, as in the classic 15-point scheme; this damps the estimate on
    // smooth stretches and inflates it near kinks.
    const double reskh = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 3; ++j) {
        resasc += kWgk[2 * j + 1] * (std::abs(fv[2 * j] - reskh) + std::abs(fv[2 * j + 1] - reskh));
    }
    for (int j = 0; j < 4; ++j) {
        resasc += kWgk[2 * j] * (std::abs(fv[6 + 2 * j] - reskh) + std::abs(fv[7 + 2 * j] - reskh));
    }
    resasc *= std::abs(hlgth);
    iv.value = resk * hlgth;
    double err = std::abs((resk - resg) * hlgth);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    iv.error = err;
}

// Genz-Malik degree-7 rule with embedded degree-5 estimate over a box.
struct GmRule {
    int d = 0;
    std::uint64_t points = 0;
    double w[5] = {};   // degree-7 weights: centre, lam2 pair, lam3 pair, lam4 pairs, corners
    double we[4] = {};  // embedded degree-5 weights (no corner term)
};

GmRule make_gm_rule(int d) {
    GmRule r;
    r.d = d;
    const double dd = d;
    const double two_d = std::ldexp(1.0, d);
    r.points = 1 + 4 * static_cast<std::uint64_t>(d) +
               2 * static_cast<std::uint64_t>(d) * (d - 1) + (std::uint64_t{1} << d);
    r.w[0] = two_d * (12824.0 - 9120.0 * dd + 400.0 * dd * dd) / 19683.0;
    r.w[1] = two_d * 980.0 / 6561.0;
    r.w[2] = two_d * (1820.0 - 400.0 * dd) / 19683.0;
    r.w[3] = two_d * 200.0 / 19683.0;
    r.w[4] = 6859.0 / 19683.0;
    r.we[0] = two_d * (729.0 - 950.0 * dd + 50.0 * dd * dd) / 729.0;
    r.we[1] = two_d * 245.0 / 486.0;
    r.we[2] = two_d * (265.0 - 100.0 * dd) / 1458.0;
    r.we[3] = two_d * 25.0 / 729.0;
    return r;
}

struct Box {
    std::vector<double> centre;
    std::vector<double> half;
    double value = 0.0, error = 0.0;
    int split_dim = 0;
};

const double kLam2 = std::sqrt(9.0 / 70.0);
const double kLam3 = std::sqrt(9.0 / 10.0);
const double kLam4 = std::sqrt(9.0 / 10.0);
const double kLam5 = std::sqrt(9.0 / 19.0);
const double kDivRatio = (9.0 / 70.0) / (9.0 / 10.0);  // lam2^2 / lam3^2

void eval_gm(const std::function<double(std::span<const double>)>& f, const GmRule& rule,
             Box& box, std::vector<double>& pt, std::vector<double>& divdiff) {
    const int d = rule.d;
    pt.assign(box.centre.begin(), box.centre.end());
    const double f0 = f(pt);
    double sum2 = 0.0, sum3 = 0.0, sum4 = 0.0, sum5 = 0.0;
    divdiff.assign(static_cast<std::size_t>(d), 0.0);
    for (int i = 0; i < d; ++i) {
        const double c = box.centre[i];
        const double h = box.half[i];
        pt[i] = c - kLam2 * h;
        const double f2a = f(pt);
        pt[i] = c + kLam2 * h;
        const double f2b = f(pt);
        pt[i] = c - kLam3 * h;
        const double f3a = f(pt);
        pt[i] = c + kLam3 * h;
        const double f3b = f(pt);
        pt[i] = c;
        sum2 += f2a + f2b;
        sum3 += f3a + f3b;
        divdiff[static_cast<std::size_t>(i)] =
            std::abs(f2a + f2b - 2.0 * f0 - kDivRatio * (f3a + f3b - 2.0 * f0));
    }
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            const double ci = box.centre[i], hi = kLam4 * box.half[i];
            const double cj = box.centre[j], hj = kLam4 * box.half[j];
            for (int si = -1; si <= 1; si += 2) {
                for (int sj = -1; sj <= 1; sj += 2) {
                    pt[i] = ci + si * hi;
                    pt[j] = cj + sj * hj;
                    sum4 += f(pt);
                }
            }
            pt[i] = ci;
            pt[j] = cj;
        }
    }
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
        for (int i = 0; i < d; ++i) {
            const double s = (mask >> i) & 1 ? kLam5 : -kLam5;
            pt[i] = box.centre[i] + s * box.half[i];
        }
        sum5 += f(pt);
    }
    double volscale = 1.0;
    for (int i = 0; i < d; ++i) volscale *= box.half[i];
    const double v7 =
        rule.w[0] * f0 + rule.w[1] * sum2 + rule.w[2] * sum3 + rule.w[3] * sum4 + rule.w[4] * sum5;
    const double v5 = rule.we[0] * f0 + rule.we[1] * sum2 + rule.we[2] * sum3 + rule.we[3] * sum4;
    box.value = volscale * v7;
    box.error = volscale * std::abs(v7 - v5);
    // Split along the axis with the largest fourth divided difference; fall
    // back to the widest axis when the integrand looks flat.
    int best = 0;
    double best_diff = -1.0;
    for (int i = 0; i < d; ++i) {
        if (divdiff[static_cast<std::size_t>(i)] > best_diff) {
            best_diff = divdiff[static_cast<std::size_t>(i)];
            best = i;
        }
    }
    if (best_diff <= 0.0) {
        for (int i = 1; i < d; ++i) {
            if (box.half[i] > box.half[best]) best = i;
        }
    }
    box.split_dim = best;
}

void split_region(const Interval& parent, Interval& left, Interval& right) {
    const double mid = 0.5 * (parent.a + parent.b);
    left.a = parent.a;
    left.b = mid;
    right.a = mid;
    right.b = parent.b;
}

void split_region(const Box& parent, Box& left, Box& right) {
    left.centre = parent.centre;
    left.half = parent.half;
    const int k = parent.split_dim;
    left.half[k] *= 0.5;
    right = left;
    left.centre[k] -= left.half[k];
    right.centre[k] += right.half[k];
}

template <typename Region>
Result run_adaptive(std::vector<Region>& heap, std::uint64_t evals_so_far,
                    std::uint64_t evals_per_split, double rel_tol, double abs_tol,
                    std::uint64_t max_evals, const std::function<void(Region&)>& eval_region) {
    auto by_error = [](const Region& x, const Region& y) { return x.error < y.error; };
    std::make_heap(heap.begin(), heap.end(), by_error);
    double total_value = 0.0, total_error = 0.0;
    for (const auto& r : heap) {
        total_value += r.value;
        total_error += r.error;
    }
    std::uint64_t evals = evals_so_far;
    while (total_error > std::max(abs_tol, rel_tol * std::abs(total_value)) &&
           evals + evals_per_split <= max_evals) {
        std::pop_heap(heap.begin(), heap.end(), by_error);
        Region worst = std::move(heap.back());
        heap.pop_back();
        total_value -= worst.value;
        total_error -= worst.error;
        Region left, right;
        split_region(worst, left, right);
        eval_region(left);
        eval_region(right);
        evals += evals_per_split;
        total_value += left.value + right.value;
        total_error += left.error + right.error;
        heap.push_back(std::move(left));
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back(std::move(right));
        std::push_heap(heap.begin(), heap.end(), by_error);
    }
    // Re-sum from scratch: the running totals accumulate cancellation noise
    // over many thousands of splits.
    total_value = 0.0;
    total_error = 0.0;
    for (const auto& r : heap) {
        total_value += r.value;
        total_error += r.error;
    }
    Result out;
    out.value = total_value;
    out.error = total_error;
    out.evaluations = evals;
    out.converged = total_error <= std::max(abs_tol, rel_tol * std::abs(total_value));
    return out;
}

}  // namespace

Result integrate_1d(const std::function<double(double)>& f, double a, double b, double rel_tol,
                    double abs_tol, std::uint64_t max_evals) {
    if (a == b) return Result{0.0, 0.0, 0, true};
    std::vector<Interval> heap(1);
    heap[0].a = a;
    heap[0].b = b;
    eval_gk15(f, heap[0]);
    std::function<void(Interval&)> eval = [&f](Interval& iv) { eval_gk15(f, iv); };
    return run_adaptive<Interval>(heap, 15, 30, rel_tol, abs_tol, max_evals, eval);
}

Result integrate(const std::function<double(std::span<const double>)>& f,
                 std::span<const double> lo, std::span<const double> hi, double rel_tol,
                 double abs_tol, std::uint64_t max_evals) {
    const int d = static_cast<int>(lo.size());
    const GmRule rule = make_gm_rule(d);
    std::vector<double> pt, divdiff;
    std::vector<Box> heap(1);
    heap[0].centre.resize(static_cast<std::size_t>(d));
    heap[0].half.resize(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        heap[0].centre[static_cast<std::size_t>(i)] = 0.5 * (lo[i] + hi[i]);
        heap[0].half[static_cast<std::size_t>(i)] = 0.5 * (hi[i] - lo[i]);
    }
    eval_gm(f, rule, heap[0], pt, divdiff);
    std::function<void(Box&)> eval = [&](Box& box) { eval_gm(f, rule, box, pt, divdiff); };
    return run_adaptive<Box>(heap, rule.points, 2 * rule.points, rel_tol, abs_tol, max_evals,
                             eval);
}

NodesWeights gauss_legendre(int n) {
    NodesWeights out;
    out.nodes.resize(static_cast<std::size_t>(n));
    out.weights.resize(static_cast<std::size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton iteration from the Chebyshev-based initial guess.
        double z = std::cos(3.141592653589793238462643 * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15) break;
        }
        out.nodes[static_cast<std::size_t>(i)] = -z;
        out.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
        out.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * pp * pp);
        out.weights[static_cast<std::size_t>(n - 1 - i)] =
            out.weights[static_cast<std::size_t>(i)];
    }
    return out;
}

NodesWeights gauss_laguerre(int n) {
    NodesWeights out;
    out.nodes.resize(static_cast<std::size_t>(n));
    out.weights.resize(static_cast<std::size_t>(n));
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * n);
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * n);
        } else {
            const double ai = i - 1;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - out.nodes[static_cast<std::size_t>(i - 2)]);
        }
        double pp = 0.0, p2 = 0.0;
        for (int iter = 0; iter < 200; ++iter) {
            double p1 = 1.0;
            p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0 - z) * p2 - j * p3) / (j + 1.0);
            }
            // L'_n(z) = n (L_n(z) - L_{n-1}(z)) / z
            pp = n * (p1 - p2) / z;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-14 * std::max(1.0, std::abs(z))) break;
        }
        out.nodes[static_cast<std::size_t>(i)] = z;
        out.weights[static_cast<std::size_t>(i)] = -1.0 / (pp * n * p2);
    }
    return out;
}

}  // namespace voronet::cubature
