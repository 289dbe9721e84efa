#include "voronet/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace voronet::geometry {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sacos(double v) { return std::acos(std::clamp(v, -1.0, 1.0)); }

double centre_dist(const Disk& a, const Disk& b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct P2 {
    double x = 0.0, y = 0.0;
};

bool point_in(const P2& p, const Disk& d, double tol) {
    return std::hypot(p.x - d.x, p.y - d.y) <= d.r + tol;
}

// Both crossing points of two properly intersecting circles.
std::array<P2, 2> circle_crossings(const Disk& a, const Disk& b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double d = std::hypot(dx, dy);
    const double l = (d * d + a.r * a.r - b.r * b.r) / (2.0 * d);
    const double h = std::sqrt(std::max(a.r * a.r - l * l, 0.0));
    const double ux = dx / d, uy = dy / d;
    return {P2{a.x + l * ux - h * uy, a.y + l * uy + h * ux},
            P2{a.x + l * ux + h * uy, a.y + l * uy - h * ux}};
}

double circular_segment(double r, double theta) { return 0.5 * r * r * (theta - std::sin(theta)); }

// Area of the segment of `d` cut off by chord pq, on whichever side bounds the
// common intersection: the minor arc if its midpoint lies in both other disks,
// the major arc otherwise.
double boundary_segment(const Disk& d, const P2& p, const P2& q, const Disk& o1, const Disk& o2,
                        double tol) {
    const double u1x = (p.x - d.x) / d.r, u1y = (p.y - d.y) / d.r;
    const double u2x = (q.x - d.x) / d.r, u2y = (q.y - d.y) / d.r;
    const double theta = sacos(u1x * u2x + u1y * u2y);  // minor angle, [0, pi]
    double bx = u1x + u2x, by = u1y + u2y;
    double bn = std::hypot(bx, by);
    if (bn < 1e-9) {
        // Antipodal vertices: both arcs are half circles, either midpoint works.
        bx = -u1y;
        by = u1x;
        bn = 1.0;
    }
    const P2 mid{d.x + d.r * bx / bn, d.y + d.r * by / bn};
    const bool minor = point_in(mid, o1, tol) && point_in(mid, o2, tol);
    return circular_segment(d.r, minor ? theta : 2.0 * kPi - theta);
}

enum class GridMode { Union, Intersection };

// Quadtree refinement over the bounding box. A rectangle is inside a disk iff
// all four corners are (the disk is convex); it misses a disk iff the clamped
// box distance reaches the radius. Refinement stops once the total area of
// still-ambiguous cells is below 2*abs_tol; counting half of it bounds the
// error by abs_tol.
double grid_area(std::span<const Disk> disks, GridMode mode, double abs_tol) {
    double x0, x1, y0, y1;
    if (mode == GridMode::Union) {
        x0 = y0 = std::numeric_limits<double>::infinity();
        x1 = y1 = -std::numeric_limits<double>::infinity();
        for (const Disk& d : disks) {
            x0 = std::min(x0, d.x - d.r);
            x1 = std::max(x1, d.x + d.r);
            y0 = std::min(y0, d.y - d.r);
            y1 = std::max(y1, d.y + d.r);
        }
    } else {
        x0 = y0 = -std::numeric_limits<double>::infinity();
        x1 = y1 = std::numeric_limits<double>::infinity();
        for (const Disk& d : disks) {
            x0 = std::max(x0, d.x - d.r);
            x1 = std::min(x1, d.x + d.r);
            y0 = std::max(y0, d.y - d.r);
            y1 = std::min(y1, d.y + d.r);
        }
    }
    if (!(x0 < x1) || !(y0 < y1)) return 0.0;

    struct Cell {
        double cx, cy, hx, hy;
    };
    auto classify = [&](const Cell& c) {
        int state = 0;  // 0 = boundary, 1 = inside, -1 = outside
        bool any_in = false, all_in = true, any_out = false, all_out = true;
        for (const Disk& d : disks) {
            const double bx = std::max(0.0, std::abs(c.cx - d.x) - c.hx);
            const double by = std::max(0.0, std::abs(c.cy - d.y) - c.hy);
            const bool misses = bx * bx + by * by >= d.r * d.r;
            bool contains = false;
            if (!misses) {
                contains = true;
                for (int sx = -1; sx <= 1 && contains; sx += 2) {
                    for (int sy = -1; sy <= 1; sy += 2) {
                        const double px = c.cx + sx * c.hx - d.x;
                        const double py = c.cy + sy * c.hy - d.y;
                        if (px * px + py * py > d.r * d.r) {
                            contains = false;
                            break;
                        }
                    }
                }
            }
            any_in = any_in || contains;
            all_in = all_in && contains;
            any_out = any_out || misses;
            all_out = all_out && misses;
        }
        if (mode == GridMode::Union) {
            if (any_in) state = 1;
            else if (all_out) state = -1;
        } else {
            if (all_in) state = 1;
            else if (any_out) state = -1;
        }
        return state;
    };

    std::vector<Cell> frontier;
    double area_in = 0.0;
    double uncertain = 0.0;
    {
        const Cell root{0.5 * (x0 + x1), 0.5 * (y0 + y1), 0.5 * (x1 - x0), 0.5 * (y1 - y0)};
        const int s = classify(root);
        if (s == 1) return 4.0 * root.hx * root.hy;
        if (s == -1) return 0.0;
        frontier.push_back(root);
        uncertain = 4.0 * root.hx * root.hy;
    }
    std::size_t processed = 0;
    constexpr std::size_t kBudget = 30'000'000;
    while (!frontier.empty() && uncertain > 2.0 * abs_tol &&
           processed + 4 * frontier.size() <= kBudget) {
        std::vector<Cell> next;
        next.reserve(2 * frontier.size());
        uncertain = 0.0;
        for (const Cell& cell : frontier) {
            const double hx = 0.5 * cell.hx, hy = 0.5 * cell.hy;
            for (int sx = -1; sx <= 1; sx += 2) {
                for (int sy = -1; sy <= 1; sy += 2) {
                    const Cell child{cell.cx + sx * hx, cell.cy + sy * hy, hx, hy};
                    ++processed;
                    const int s = classify(child);
                    if (s == 1) {
                        area_in += 4.0 * hx * hy;
                    } else if (s == 0) {
                        uncertain += 4.0 * hx * hy;
                        next.push_back(child);
                    }
                }
            }
        }
        frontier = std::move(next);
    }
    return area_in + 0.5 * uncertain;
}

// Triple intersection when all three circles pass through one point v. Vertex
// counting degenerates there (v is a crossing of every pair), but in polar
// coordinates about v each disk is { rho <= 2 r_j cos(phi - theta_j) } with
// (r_j, theta_j) the polar centre offset, so the area is the integral of half
// the squared pointwise minimum, in closed form between breakpoints. Disks
// anchored to a common cell seed hit this case on every call.
double triple_common_point(const Disk& a, const Disk& b, const Disk& c, const P2& v) {
    const Disk* disks[3] = {&a, &b, &c};
    double rho[3], th[3];
    for (int j = 0; j < 3; ++j) {
        const double cx = disks[j]->x - v.x, cy = disks[j]->y - v.y;
        rho[j] = std::hypot(cx, cy);
        if (rho[j] == 0.0) return 0.0;  // circle degenerates to the point v
        th[j] = std::atan2(cy, cx);
    }
    auto wrap = [](double t) {
        t = std::fmod(t, 2.0 * kPi);
        return t < 0.0 ? t + 2.0 * kPi : t;
    };
    // Breakpoints: support edges theta_j +- pi/2, plus angles where two
    // support radii cross (r_i cos(phi - th_i) = r_j cos(phi - th_j) is a
    // single harmonic in phi with two roots).
    std::array<double, 13> brk;
    std::size_t n = 0;
    for (int j = 0; j < 3; ++j) {
        brk[n++] = wrap(th[j] - 0.5 * kPi);
        brk[n++] = wrap(th[j] + 0.5 * kPi);
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            const double ax = disks[i]->x - disks[j]->x;
            const double ay = disks[i]->y - disks[j]->y;
            if (ax == 0.0 && ay == 0.0) continue;  // coincident circles
            const double phi = std::atan2(-ax, ay);
            brk[n++] = wrap(phi);
            brk[n++] = wrap(phi + kPi);
        }
    }
    std::sort(brk.begin(), brk.begin() + n);
    brk[n] = brk[0] + 2.0 * kPi;
    double area = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        const double lo = brk[s], hi = brk[s + 1];
        if (hi - lo < 1e-14) continue;
        const double mid = 0.5 * (lo + hi);
        int best = -1;
        double least = 0.0;
        for (int j = 0; j < 3; ++j) {
            const double support = 2.0 * rho[j] * std::cos(mid - th[j]);
            if (support <= 0.0) {
                best = -1;
                break;
            }
            if (best < 0 || support < least) {
                best = j;
                least = support;
            }
        }
        if (best < 0) continue;
        // Integral of 2 r^2 cos^2(phi - theta) over [lo, hi].
        const double u1 = lo - th[best], u2 = hi - th[best];
        area += rho[best] * rho[best] *
                ((u2 - u1) + std::sin(u2) * std::cos(u2) - std::sin(u1) * std::cos(u1));
    }
    return area;
}

// Exact triple intersection for the generic crossing pattern; returns NaN when
// the vertex pattern is inconsistent (near tangency) and a caller should fall
// back to the grid.
double triple_exact(const Disk& a, const Disk& b, const Disk& c) {
    const Disk* disks[3] = {&a, &b, &c};
    const double scale = std::max({a.r, b.r, c.r});
    const double tol = 1e-10 * std::max(scale, 1.0);

    // Pairwise containment or separation short-circuits the vertex hunt.
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            const double d = centre_dist(*disks[i], *disks[j]);
            if (d + disks[j]->r <= disks[i]->r + tol) {
                // Disk j is inside disk i; the triple reduces to a lens.
                const int k = 3 - i - j;
                return lens_area(*disks[j], *disks[k]);
            }
        }
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            if (centre_dist(*disks[i], *disks[j]) >= disks[i]->r + disks[j]->r - tol) return 0.0;
        }
    }

    // All pairs cross properly. If a crossing of the first pair lies on the
    // third circle, all three circles share that point and the vertex pattern
    // below would be meaningless; switch to the polar sweep about it.
    for (const P2& p : circle_crossings(a, b)) {
        if (std::abs(std::hypot(p.x - c.x, p.y - c.y) - c.r) <= 1e-9 * std::max(scale, 1.0)) {
            return triple_common_point(a, b, c, p);
        }
    }

    // Collect crossing points lying in the third disk.
    std::array<std::array<P2, 2>, 3> pts;   // per pair (0:01, 1:02, 2:12)
    std::array<int, 3> count{};
    std::array<P2, 3> vertex{};             // the inside point when count == 1
    const int pair_i[3] = {0, 0, 1};
    const int pair_j[3] = {1, 2, 2};
    for (int e = 0; e < 3; ++e) {
        const int i = pair_i[e], j = pair_j[e], k = 3 - i - j;
        pts[e] = circle_crossings(*disks[i], *disks[j]);
        for (const P2& p : pts[e]) {
            if (point_in(p, *disks[k], tol)) {
                if (count[e] == 0) vertex[e] = p;
                ++count[e];
            }
        }
    }
    const int twos = static_cast<int>(std::count(count.begin(), count.end(), 2));
    const int ones = static_cast<int>(std::count(count.begin(), count.end(), 1));
    if (twos == 0 && ones == 0) return 0.0;
    if (twos > 0 && ones == 0) {
        // Some pair's lens lies entirely inside the third disk; the triple is
        // that lens (all such candidates coincide up to rounding).
        double best = std::numeric_limits<double>::infinity();
        for (int e = 0; e < 3; ++e) {
            if (count[e] == 2) best = std::min(best, lens_area(*disks[pair_i[e]], *disks[pair_j[e]]));
        }
        return best;
    }
    if (ones != 3 || twos != 0) return std::numeric_limits<double>::quiet_NaN();

    // Circular triangle: inner straight triangle plus one bounding segment per
    // circle. The two vertices on circle k come from the pairs involving k.
    const P2& v01 = vertex[0];
    const P2& v02 = vertex[1];
    const P2& v12 = vertex[2];
    const double tri = 0.5 * std::abs((v02.x - v01.x) * (v12.y - v01.y) -
                                      (v12.x - v01.x) * (v02.y - v01.y));
    double area = tri;
    area += boundary_segment(a, v01, v02, b, c, tol);
    area += boundary_segment(b, v01, v12, a, c, tol);
    area += boundary_segment(c, v02, v12, a, b, tol);
    const double upper = std::min({lens_area(a, b), lens_area(a, c), lens_area(b, c)});
    if (!(area >= -tol && area <= upper + std::max(1e-9, 1e-9 * upper))) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return std::clamp(area, 0.0, upper);
}

double grid_tol_for(std::span<const Disk> disks) {
    double sum = 0.0;
    for (const Disk& d : disks) sum += disk_area(d);
    return std::max(1e-12, 1e-4 * sum);
}

}  // namespace

double disk_area(const Disk& d) { return kPi * d.r * d.r; }

double lens_area(const Disk& a, const Disk& b) {
    if (a.r <= 0.0 || b.r <= 0.0) return 0.0;
    const double d = centre_dist(a, b);
    if (d >= a.r + b.r) return 0.0;
    if (d <= std::abs(a.r - b.r)) {
        const double r = std::min(a.r, b.r);
        return kPi * r * r;
    }
    const double r1 = a.r, r2 = b.r;
    const double t = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
    return r1 * r1 * sacos((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)) +
           r2 * r2 * sacos((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)) -
           0.5 * std::sqrt(std::max(t, 0.0));
}

namespace detail {

double union_area_grid(std::span<const Disk> disks, double abs_tol) {
    std::vector<Disk> live;
    for (const Disk& d : disks) {
        if (d.r > 0.0) live.push_back(d);
    }
    if (live.empty()) return 0.0;
    return grid_area(live, GridMode::Union, abs_tol);
}

double triple_intersection_area(const Disk& a, const Disk& b, const Disk& c) {
    if (a.r <= 0.0 || b.r <= 0.0 || c.r <= 0.0) return 0.0;
    const double exact = triple_exact(a, b, c);
    if (std::isfinite(exact)) return exact;
    const Disk trio[3] = {a, b, c};
    const double min_area = std::min({disk_area(a), disk_area(b), disk_area(c)});
    return grid_area(trio, GridMode::Intersection, std::max(1e-12, 1e-5 * min_area));
}

}  // namespace detail

double union_area(std::span<const Disk> disks) { return union_area(disks, grid_tol_for(disks)); }

double union_area(std::span<const Disk> disks, double abs_tol) {
    // Drop empty disks and disks nested inside another; neither changes the
    // union, and removing them keeps the n <= 3 exact path in its generic case.
    std::vector<Disk> live;
    for (const Disk& d : disks) {
        if (d.r > 0.0) live.push_back(d);
    }
    std::vector<Disk> kept;
    for (std::size_t i = 0; i < live.size(); ++i) {
        bool nested = false;
        for (std::size_t j = 0; j < live.size() && !nested; ++j) {
            if (i == j) continue;
            const double d = centre_dist(live[i], live[j]);
            const bool j_bigger =
                live[j].r > live[i].r || (live[j].r == live[i].r && j < i);
            nested = j_bigger && d + live[i].r <= live[j].r + 1e-14 * live[j].r;
        }
        if (!nested) kept.push_back(live[i]);
    }
    if (kept.empty()) return 0.0;

    double lower = 0.0, upper = 0.0;
    for (const Disk& d : kept) {
        lower = std::max(lower, disk_area(d));
        upper += disk_area(d);
    }
    double value;
    if (kept.size() == 1) {
        value = disk_area(kept[0]);
    } else if (kept.size() == 2) {
        value = disk_area(kept[0]) + disk_area(kept[1]) - lens_area(kept[0], kept[1]);
    } else if (kept.size() == 3) {
        value = disk_area(kept[0]) + disk_area(kept[1]) + disk_area(kept[2]) -
                lens_area(kept[0], kept[1]) - lens_area(kept[0], kept[2]) -
                lens_area(kept[1], kept[2]) +
                detail::triple_intersection_area(kept[0], kept[1], kept[2]);
    } else {
        value = grid_area(kept, GridMode::Union, abs_tol);
    }
    return std::clamp(value, lower, upper);
}

}  // namespace voronet::geometry
