#include "matmax/convexgeom.hpp"

#include "matmax/rng.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace matmax {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kPruneTol = 1e-12;     // relative collinearity tolerance
constexpr int kCornerEnumMax = 16;      // exact sign-corner enumeration limit
constexpr int kZonoCloudCornerMax = 10; // corner conversion limit for d >= 3 clouds

double cross2(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

double max_norm(const std::vector<Vec>& pts)
{
    double m = 0.0;
    for (const Vec& p : pts)
        m = std::max(m, p.norm());
    return m;
}

void check_finite(const std::vector<Vec>& pts, const char* who)
{
    for (const Vec& p : pts)
        if (!p.all_finite())
            throw std::invalid_argument(std::string(who) + ": non-finite coordinate");
}

// Andrew monotone chain. Pops on cross <= eps_area, so the output is strictly
// convex up to that area tolerance. Returns 1 point for a degenerate cloud
// and 2 endpoints for a collinear one.
std::vector<Vec> planar_hull(std::vector<Vec> pts, double eps_area)
{
    std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
        return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec& a, const Vec& b) { return a[0] == b[0] && a[1] == b[1]; }),
              pts.end());
    const std::size_t n = pts.size();
    if (n <= 2)
        return pts;

    auto turn = [&](const Vec& o, const Vec& a, const Vec& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };

    std::vector<Vec> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && turn(hull[k - 2], hull[k - 1], pts[i]) <= eps_area)
            --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && turn(hull[k - 2], hull[k - 1], pts[i]) <= eps_area)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1); // last point repeats the first
    return hull;
}

SymBody make_zero(int dim)
{
    SymBody b = SymBody::zonotope(dim, {});
    return b;
}

// Canonical polygon from an arbitrary planar point cloud: symmetric closure,
// convex hull, collinear pruning, exact +/- vertex pairing.
SymBody make_polygon_normalized(std::vector<Vec> pts, double defect, bool approx)
{
    check_finite(pts, "polygon");
    const std::size_t n0 = pts.size();
    for (std::size_t i = 0; i < n0; ++i)
        pts.push_back(-pts[i]);

    const double scale = max_norm(pts);
    if (pts.empty() || scale == 0.0) {
        SymBody z = make_zero(2);
        z.add_defect(defect);
        if (approx)
            z.mark_approximate();
        return z;
    }

    // Collinear cloud: the body is a segment through the origin.
    Vec vmax(2);
    for (const Vec& p : pts)
        if (p.norm2() > vmax.norm2())
            vmax = p;
    bool collinear = true;
    for (const Vec& p : pts)
        if (std::abs(cross2(vmax, p)) > kPruneTol * scale * scale) {
            collinear = false;
            break;
        }

    std::vector<Vec> verts;
    if (collinear) {
        verts = {vmax, -vmax};
    } else {
        verts = planar_hull(std::move(pts), 2.0 * kPruneTol * scale * scale);
        if (verts.size() % 2 != 0) {
            // Rounding split an antipodal pair across the prune threshold;
            // one coarser pass restores the even symmetric structure.
            std::vector<Vec> again = verts;
            for (const Vec& v : verts)
                again.push_back(-v);
            verts = planar_hull(std::move(again), 8.0 * kPruneTol * scale * scale);
        }
        if (verts.size() % 2 == 0 && verts.size() >= 4) {
            // Antipodal pairing at offset n/2; average only when the hull
            // really is symmetric (it is, for exactly symmetric input).
            const std::size_t half = verts.size() / 2;
            bool paired = true;
            for (std::size_t i = 0; i < half && paired; ++i)
                paired = (verts[i] + verts[i + half]).norm() <= 1e-9 * std::max(1.0, scale);
            for (std::size_t i = 0; paired && i < half; ++i) {
                const Vec w = (verts[i] - verts[i + half]) * 0.5;
                verts[i] = w;
                verts[i + half] = -w;
            }
        } else if (verts.size() == 2) {
            const Vec w = (verts[0] - verts[1]) * 0.5;
            verts = {w, -w};
        }
    }

    if (verts.size() == 1 || (verts.size() == 2 && verts[0].norm() == 0.0)) {
        SymBody z = make_zero(2);
        z.add_defect(defect);
        if (approx)
            z.mark_approximate();
        return z;
    }

    SymBody out = SymBody::polygon_raw(2, std::move(verts));
    out.add_defect(defect);
    if (approx)
        out.mark_approximate();
    return out;
}

// Boundary chain of a planar zonotope: orient generators into the upper half
// plane, sort by angle, and accumulate. The chain plus its reflection visits
// every vertex.
std::vector<Vec> zonotope_chain(const std::vector<Vec>& gens)
{
    std::vector<Vec> oriented;
    oriented.reserve(gens.size());
    for (const Vec& g : gens) {
        if (g[0] == 0.0 && g[1] == 0.0)
            continue;
        oriented.push_back((g[1] > 0.0 || (g[1] == 0.0 && g[0] > 0.0)) ? g : -g);
    }
    std::sort(oriented.begin(), oriented.end(), [](const Vec& a, const Vec& b) {
        return std::atan2(a[1], a[0]) < std::atan2(b[1], b[0]);
    });
    std::vector<Vec> chain;
    chain.reserve(oriented.size() + 1);
    Vec v(2);
    for (const Vec& g : oriented)
        v = v - g;
    chain.push_back(v);
    for (std::size_t k = 0; k + 1 < oriented.size(); ++k) {
        v = v + oriented[k] * 2.0;
        chain.push_back(v);
    }
    return chain;
}

double point_segment_distance(const Vec& p, const Vec& a, const Vec& b)
{
    const Vec ab = b - a;
    const double len2 = ab.norm2();
    if (len2 == 0.0)
        return (p - a).norm();
    double t = (p - a).dot(ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

// Exact euclidean distance from a point to a canonical polygon body.
double point_to_polygon_distance(const Vec& p, const std::vector<Vec>& verts)
{
    if (verts.empty())
        return p.norm();
    if (verts.size() == 1)
        return (p - verts[0]).norm();
    if (verts.size() == 2)
        return point_segment_distance(p, verts[0], verts[1]);
    bool inside = true;
    double dist = std::numeric_limits<double>::infinity();
    const std::size_t n = verts.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Vec& a = verts[k];
        const Vec& b = verts[(k + 1) % n];
        if (cross2(b - a, p - a) < 0.0)
            inside = false;
        dist = std::min(dist, point_segment_distance(p, a, b));
    }
    return inside ? 0.0 : dist;
}

// Outer simplification: intersect supporting half planes in `cap` sampled
// directions. The returned body contains the input; the Hausdorff gap is
// measured exactly and accumulated as defect.
SymBody simplify_outer(const SymBody& poly, int cap)
{
    const int half = std::max(cap, 8) / 2;
    std::vector<double> h(static_cast<std::size_t>(half));
    std::vector<Vec> normals(static_cast<std::size_t>(half));
    for (int t = 0; t < half; ++t) {
        const double ang = kPi * static_cast<double>(t) / half;
        Vec u{std::cos(ang), std::sin(ang)};
        normals[static_cast<std::size_t>(t)] = u;
        h[static_cast<std::size_t>(t)] = support(poly, u);
    }
    auto normal_at = [&](int k) { return k < half ? normals[static_cast<std::size_t>(k)] : -normals[static_cast<std::size_t>(k - half)]; };
    auto offset_at = [&](int k) { return h[static_cast<std::size_t>(k % half)]; };

    const int total = 2 * half;
    std::vector<Vec> outer;
    outer.reserve(static_cast<std::size_t>(total));
    for (int k = 0; k < total; ++k) {
        const Vec n0 = normal_at(k);
        const Vec n1 = normal_at((k + 1) % total);
        const double det = cross2(n0, n1);
        const double b0 = offset_at(k), b1 = offset_at((k + 1) % total);
        outer.push_back(Vec{(b0 * n1[1] - b1 * n0[1]) / det, (b1 * n0[0] - b0 * n1[0]) / det});
    }

    double gap = 0.0;
    for (const Vec& w : outer)
        gap = std::max(gap, point_to_polygon_distance(w, poly.points()));

    SymBody out = make_polygon_normalized(std::move(outer), poly.defect(), true);
    out.add_defect(gap);
    return out;
}

SymBody apply_budget(SymBody b, const ApproxBudget& budget)
{
    if (budget.max_vertices > 0 && b.rep() == BodyRep::polygon && b.dim() == 2
        && static_cast<int>(b.points().size()) > budget.max_vertices)
        return simplify_outer(b, budget.max_vertices);
    return b;
}

// Minkowski sum of two canonical CCW polygons by merging edge sequences in
// angular order; O(v1 + v2).
std::vector<Vec> minkowski_chain(const std::vector<Vec>& pin, const std::vector<Vec>& qin)
{
    auto bottom_rotate = [](std::vector<Vec> v) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i][1] < v[best][1] || (v[i][1] == v[best][1] && v[i][0] < v[best][0]))
                best = i;
        std::rotate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(best), v.end());
        return v;
    };
    const std::vector<Vec> p = bottom_rotate(pin);
    const std::vector<Vec> q = bottom_rotate(qin);

    auto edge_angle = [](const Vec& e) {
        double a = std::atan2(e[1], e[0]);
        if (a < 0.0)
            a += 2.0 * kPi;
        return a;
    };
    auto edge_of = [](const std::vector<Vec>& v, std::size_t k) { return v[(k + 1) % v.size()] - v[k]; };

    std::vector<Vec> out;
    out.reserve(p.size() + q.size());
    Vec cur = p[0] + q[0];
    out.push_back(cur);
    std::size_t i = 0, j = 0;
    while (i < p.size() || j < q.size()) {
        Vec step(2);
        if (j >= q.size()) {
            step = edge_of(p, i++);
        } else if (i >= p.size()) {
            step = edge_of(q, j++);
        } else {
            const Vec ep = edge_of(p, i), eq = edge_of(q, j);
            if (edge_angle(ep) <= edge_angle(eq)) {
                step = ep;
                ++i;
            } else {
                step = eq;
                ++j;
            }
        }
        cur = cur + step;
        out.push_back(cur);
    }
    out.pop_back(); // closes back at the start
    return out;
}

double corner_max_norm(const std::vector<Vec>& gens, int d)
{
    const int m = static_cast<int>(gens.size());
    Vec c(d);
    for (const Vec& g : gens)
        c = c + g;
    double best2 = c.norm2();
    std::vector<double> sign(static_cast<std::size_t>(m), 1.0);
    const std::uint32_t count = 1u << m;
    for (std::uint32_t k = 1; k < count; ++k) {
        const int t = std::countr_zero(k);
        sign[static_cast<std::size_t>(t)] = -sign[static_cast<std::size_t>(t)];
        c = c + gens[static_cast<std::size_t>(t)] * (2.0 * sign[static_cast<std::size_t>(t)]);
        best2 = std::max(best2, c.norm2());
    }
    return std::sqrt(best2);
}

Vec corner_for_direction(const std::vector<Vec>& gens, int d, const Vec& u)
{
    Vec c(d);
    for (const Vec& g : gens)
        c = c + (g.dot(u) >= 0.0 ? g : -g);
    return c;
}

double sampled_zonotope_magnitude(const std::vector<Vec>& gens, int d)
{
    const std::vector<Vec>& dirs = sphere_directions(d);
    double best2 = -1.0;
    Vec bestc(d);
    for (const Vec& u : dirs) {
        const Vec c = corner_for_direction(gens, d, u);
        const double n2 = c.norm2();
        if (n2 > best2) {
            best2 = n2;
            bestc = c;
        }
    }
    // Local ascent: u <- c/|c| monotonically increases the corner norm.
    for (int it = 0; it < 200 && best2 > 0.0; ++it) {
        const Vec u = bestc * (1.0 / std::sqrt(best2));
        const Vec c = corner_for_direction(gens, d, u);
        const double n2 = c.norm2();
        if (n2 <= best2 * (1.0 + 1e-15))
            break;
        best2 = n2;
        bestc = c;
    }
    return best2 < 0.0 ? 0.0 : std::sqrt(best2);
}

// Point-cloud stand-in for a d >= 3 zonotope: exact sign corners when small,
// support points in sampled directions otherwise (inner, flagged approximate).
std::pair<std::vector<Vec>, bool> zonotope_cloud(const std::vector<Vec>& gens, int d)
{
    const int m = static_cast<int>(gens.size());
    std::vector<Vec> pts;
    if (m <= kZonoCloudCornerMax) {
        const std::uint32_t count = m == 0 ? 1 : (1u << m);
        for (std::uint32_t mask = 0; mask < count; ++mask) {
            Vec c(d);
            for (int t = 0; t < m; ++t)
                c = c + gens[static_cast<std::size_t>(t)] * ((mask >> t) & 1u ? -1.0 : 1.0);
            pts.push_back(c);
        }
        return {std::move(pts), false};
    }
    for (const Vec& u : sphere_directions(d)) {
        const Vec c = corner_for_direction(gens, d, u);
        pts.push_back(c);
        pts.push_back(-c);
    }
    return {std::move(pts), true};
}

} // namespace

SymBody SymBody::zero(int dim) { return zonotope(dim, {}); }

SymBody SymBody::segment(const Vec& v)
{
    if (v.dim() < 1 || v.dim() > kMaxDim)
        throw std::invalid_argument("segment: bad dimension");
    std::vector<Vec> gens;
    if (v.norm2() > 0.0)
        gens.push_back(v);
    return zonotope(v.dim(), std::move(gens));
}

SymBody SymBody::polygon(std::vector<Vec> vertices)
{
    for (const Vec& v : vertices)
        if (v.dim() != 2)
            throw std::invalid_argument("polygon: vertices must be 2-dimensional");
    return make_polygon_normalized(std::move(vertices), 0.0, false);
}

SymBody SymBody::polygon_raw(int dim, std::vector<Vec> vertices)
{
    SymBody b;
    b.dim_ = dim;
    b.rep_ = BodyRep::polygon;
    b.pts_ = std::move(vertices);
    return b;
}

SymBody SymBody::zonotope(int dim, std::vector<Vec> generators)
{
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("zonotope: bad dimension");
    check_finite(generators, "zonotope");
    std::vector<Vec> gens;
    gens.reserve(generators.size());
    for (const Vec& g : generators) {
        if (g.dim() != dim)
            throw std::invalid_argument("zonotope: generator dimension mismatch");
        if (g.norm2() > 0.0)
            gens.push_back(g);
    }
    SymBody b;
    b.dim_ = dim;
    b.rep_ = BodyRep::zonotope;
    b.pts_ = std::move(gens);
    return b;
}

SymBody SymBody::vertex_hull(int dim, std::vector<Vec> points)
{
    if (dim < 2 || dim > kMaxDim)
        throw std::invalid_argument("vertex_hull: bad dimension");
    if (dim == 2)
        return make_polygon_normalized(std::move(points), 0.0, false);
    check_finite(points, "vertex_hull");
    // Keep the full symmetric cloud so pairwise Minkowski sums stay valid.
    std::vector<Vec> full;
    full.reserve(points.size() * 2);
    for (const Vec& p : points) {
        if (p.dim() != dim)
            throw std::invalid_argument("vertex_hull: point dimension mismatch");
        full.push_back(p);
        full.push_back(-p);
    }
    SymBody b;
    b.dim_ = dim;
    b.rep_ = BodyRep::polygon;
    b.pts_ = std::move(full);
    return b;
}

double support(const SymBody& b, const Vec& u)
{
    if (u.dim() != b.dim())
        throw std::invalid_argument("support: direction dimension mismatch");
    if (!u.all_finite() || u.norm2() == 0.0)
        throw std::invalid_argument("support: direction must be nonzero and finite");
    if (b.rep() == BodyRep::zonotope) {
        double s = 0.0;
        for (const Vec& g : b.points())
            s += std::abs(g.dot(u));
        return s;
    }
    double best = 0.0;
    for (const Vec& p : b.points())
        best = std::max(best, p.dot(u));
    return best;
}

double magnitude(const SymBody& b)
{
    if (b.rep() == BodyRep::polygon)
        return max_norm(b.points());
    const int d = b.dim();
    const auto& gens = b.points();
    if (gens.empty())
        return 0.0;
    if (d == 1) {
        double s = 0.0;
        for (const Vec& g : gens)
            s += std::abs(g[0]);
        return s;
    }
    if (d == 2) {
        const std::vector<Vec> chain = zonotope_chain(gens);
        return max_norm(chain);
    }
    if (static_cast<int>(gens.size()) <= kCornerEnumMax)
        return corner_max_norm(gens, d);
    return sampled_zonotope_magnitude(gens, d);
}

SymBody linear_image(const Matrix& m, const SymBody& b)
{
    if (m.dim() != b.dim())
        throw std::invalid_argument("linear_image: dimension mismatch");
    if (!m.all_finite())
        throw std::invalid_argument("linear_image: non-finite matrix");
    std::vector<Vec> mapped;
    mapped.reserve(b.points().size());
    for (const Vec& p : b.points())
        mapped.push_back(m * p);
    double defect = b.defect();
    if (defect > 0.0)
        defect *= op_norm(m);

    if (b.rep() == BodyRep::zonotope) {
        SymBody out = SymBody::zonotope(b.dim(), std::move(mapped));
        out.add_defect(defect);
        if (b.approximate())
            out.mark_approximate();
        return out;
    }
    if (b.dim() == 2)
        return make_polygon_normalized(std::move(mapped), defect, b.approximate());
    // d >= 3 cloud: the stored points are already a full symmetric set.
    SymBody out = SymBody::polygon_raw(b.dim(), std::move(mapped));
    out.add_defect(defect);
    if (b.approximate())
        out.mark_approximate();
    return out;
}

SymBody to_polygon(const SymBody& b)
{
    if (b.dim() != 2)
        throw std::invalid_argument("to_polygon: only d = 2");
    if (b.rep() == BodyRep::polygon)
        return b;
    const std::vector<Vec> chain = zonotope_chain(b.points());
    SymBody out = make_polygon_normalized(chain, b.defect(), b.approximate());
    return out;
}

SymBody scale_body(const SymBody& b, double t)
{
    if (!std::isfinite(t))
        throw std::invalid_argument("scale_body: non-finite factor");
    const double a = std::abs(t);
    if (a == 0.0) {
        SymBody z = make_zero(b.dim());
        return z;
    }
    std::vector<Vec> pts;
    pts.reserve(b.points().size());
    for (const Vec& p : b.points())
        pts.push_back(p * a);
    SymBody out;
    if (b.rep() == BodyRep::zonotope)
        out = SymBody::zonotope(b.dim(), std::move(pts));
    else
        out = SymBody::polygon_raw(b.dim(), std::move(pts));
    out.add_defect(b.defect() * a);
    if (b.approximate())
        out.mark_approximate();
    return out;
}

SymBody minkowski_avg(const std::vector<SymBody>& bodies, const std::vector<double>& weights,
                      const ApproxBudget& budget)
{
    if (bodies.empty())
        throw std::invalid_argument("minkowski_avg: empty body list");
    if (bodies.size() != weights.size())
        throw std::invalid_argument("minkowski_avg: weight count mismatch");
    const int d = bodies.front().dim();
    long double wsum = 0.0L;
    for (double w : weights) {
        if (!(w > 0.0))
            throw std::invalid_argument("minkowski_avg: weights must be positive");
        wsum += static_cast<long double>(w);
    }
    if (std::abs(static_cast<double>(wsum) - 1.0) > 1e-12)
        throw std::invalid_argument("minkowski_avg: weights must sum to 1");
    for (const SymBody& b : bodies)
        if (b.dim() != d)
            throw std::invalid_argument("minkowski_avg: dimension mismatch");

    bool all_zono = true;
    for (const SymBody& b : bodies)
        if (b.rep() != BodyRep::zonotope)
            all_zono = false;

    if (all_zono) {
        std::vector<Vec> gens;
        double defect = 0.0;
        bool approx = false;
        for (std::size_t k = 0; k < bodies.size(); ++k) {
            for (const Vec& g : bodies[k].points())
                gens.push_back(g * weights[k]);
            defect += bodies[k].defect() * weights[k];
            approx = approx || bodies[k].approximate();
        }
        SymBody out = SymBody::zonotope(d, std::move(gens));
        out.add_defect(defect);
        if (approx)
            out.mark_approximate();
        return out;
    }

    if (d == 1) {
        // All d = 1 bodies are intervals; the weighted sum is an interval.
        double r = 0.0;
        double defect = 0.0;
        for (std::size_t k = 0; k < bodies.size(); ++k) {
            r += weights[k] * magnitude(bodies[k]);
            defect += bodies[k].defect() * weights[k];
        }
        SymBody out = SymBody::segment(Vec{r});
        out.add_defect(defect);
        return out;
    }

    if (d == 2) {
        SymBody acc = scale_body(to_polygon(bodies[0]), weights[0]);
        for (std::size_t k = 1; k < bodies.size(); ++k) {
            const SymBody next = scale_body(to_polygon(bodies[k]), weights[k]);
            if (next.is_zero())
                continue;
            if (acc.is_zero()) {
                acc = next;
                continue;
            }
            std::vector<Vec> chain = minkowski_chain(acc.points(), next.points());
            SymBody merged = make_polygon_normalized(std::move(chain), acc.defect() + next.defect(),
                                                     acc.approximate() || next.approximate());
            acc = apply_budget(std::move(merged), budget);
        }
        return acc;
    }

    // d >= 3: fold point clouds; conv(A) + conv(B) = conv(A + B).
    auto cloud_of = [&](const SymBody& b, bool& approx) -> std::vector<Vec> {
        if (b.rep() == BodyRep::polygon)
            return b.points();
        auto [pts, sampled] = zonotope_cloud(b.points(), d);
        approx = approx || sampled;
        return pts;
    };
    bool approx = false;
    double defect = 0.0;
    std::vector<Vec> acc;
    for (std::size_t k = 0; k < bodies.size(); ++k) {
        bool sampled = bodies[k].approximate();
        std::vector<Vec> pts = cloud_of(bodies[k], sampled);
        for (Vec& p : pts)
            p = p * weights[k];
        defect += bodies[k].defect() * weights[k];
        approx = approx || sampled;
        if (k == 0) {
            acc = std::move(pts);
            continue;
        }
        std::vector<Vec> sum;
        sum.reserve(acc.size() * pts.size());
        for (const Vec& a : acc)
            for (const Vec& p : pts)
                sum.push_back(a + p);
        acc = std::move(sum);
        // Keep cloud size in check with support-extremal subsampling.
        const std::size_t cap = 4096;
        if (acc.size() > cap) {
            std::vector<Vec> kept;
            kept.reserve(sphere_directions(d).size());
            for (const Vec& u : sphere_directions(d)) {
                double best = -std::numeric_limits<double>::infinity();
                std::size_t arg = 0;
                for (std::size_t t = 0; t < acc.size(); ++t) {
                    const double v = acc[t].dot(u);
                    if (v > best) {
                        best = v;
                        arg = t;
                    }
                }
                kept.push_back(acc[arg]);
            }
            acc = std::move(kept);
            approx = true;
        }
    }
    // The folded cloud is already symmetric (sums of symmetric clouds).
    SymBody res = SymBody::polygon_raw(d, std::move(acc));
    res.add_defect(defect);
    if (approx)
        res.mark_approximate();
    return res;
}

SymBody hull_union(const std::vector<SymBody>& bodies, const ApproxBudget& budget)
{
    if (bodies.empty())
        throw std::invalid_argument("hull_union: empty body list");
    const int d = bodies.front().dim();
    for (const SymBody& b : bodies)
        if (b.dim() != d)
            throw std::invalid_argument("hull_union: dimension mismatch");

    double defect = 0.0;
    bool approx = false;
    for (const SymBody& b : bodies) {
        defect = std::max(defect, b.defect());
        approx = approx || b.approximate();
    }

    if (d == 1) {
        double r = 0.0;
        for (const SymBody& b : bodies)
            r = std::max(r, magnitude(b));
        SymBody out = SymBody::segment(Vec{r});
        out.add_defect(defect);
        if (approx)
            out.mark_approximate();
        return out;
    }

    if (d == 2) {
        std::vector<Vec> pts;
        for (const SymBody& b : bodies) {
            const SymBody poly = to_polygon(b);
            pts.insert(pts.end(), poly.points().begin(), poly.points().end());
        }
        SymBody out = make_polygon_normalized(std::move(pts), defect, approx);
        return apply_budget(std::move(out), budget);
    }

    std::vector<Vec> pts;
    for (const SymBody& b : bodies) {
        if (b.rep() == BodyRep::polygon) {
            pts.insert(pts.end(), b.points().begin(), b.points().end());
        } else {
            auto [cloud, sampled] = zonotope_cloud(b.points(), d);
            approx = approx || sampled;
            pts.insert(pts.end(), cloud.begin(), cloud.end());
        }
    }
    // Corner and sample clouds are symmetric already; no closure needed.
    SymBody out = SymBody::polygon_raw(d, std::move(pts));
    out.add_defect(defect);
    if (approx)
        out.mark_approximate();
    return out;
}

bool contains(const SymBody& a, const SymBody& b, double tol)
{
    if (a.dim() != b.dim())
        throw std::invalid_argument("contains: dimension mismatch");
    const double eff = tol + a.defect() + b.defect();
    if (b.is_zero())
        return true;
    const int d = a.dim();

    if (d == 1)
        return magnitude(b) <= magnitude(a) + eff;

    if (d == 2) {
        const SymBody bp = to_polygon(b);
        const SymBody ap = to_polygon(a);
        const auto& bv = bp.points();
        const auto& av = ap.points();
        if (av.empty()) {
            for (const Vec& p : bv)
                if (p.norm() > eff)
                    return false;
            return true;
        }
        if (av.size() == 2) {
            const Vec v = av[0];
            const double len = v.norm();
            for (const Vec& p : bv) {
                if (std::abs(cross2(v, p)) / len > eff)
                    return false;
                if (std::abs(p.dot(v)) / len > len + eff)
                    return false;
            }
            return true;
        }
        const std::size_t n = av.size();
        for (std::size_t k = 0; k < n; ++k) {
            const Vec& v0 = av[k];
            const Vec e = av[(k + 1) % n] - v0;
            const double elen = e.norm();
            if (elen == 0.0)
                continue;
            const Vec normal{e[1] / elen, -e[0] / elen};
            const double h = normal.dot(v0);
            for (const Vec& p : bv)
                if (normal.dot(p) > h + eff)
                    return false;
        }
        return true;
    }

    for (const Vec& u : sphere_directions(d))
        if (support(b, u) > support(a, u) + eff)
            return false;
    return true;
}

double containment_gap(const SymBody& a, const SymBody& b)
{
    if (a.dim() != b.dim())
        throw std::invalid_argument("containment_gap: dimension mismatch");
    if (b.is_zero())
        return 0.0;
    const int d = a.dim();
    if (d == 1)
        return std::max(0.0, magnitude(b) - magnitude(a));
    if (d == 2) {
        const SymBody bp = to_polygon(b);
        const SymBody ap = to_polygon(a);
        double gap = 0.0;
        for (const Vec& p : bp.points())
            gap = std::max(gap, point_to_polygon_distance(p, ap.points()));
        return gap;
    }
    double gap = 0.0;
    for (const Vec& u : sphere_directions(d))
        gap = std::max(gap, support(b, u) - support(a, u));
    return gap;
}

bool body_equal(const SymBody& a, const SymBody& b, double tol)
{
    return contains(a, b, tol) && contains(b, a, tol);
}

const std::vector<Vec>& sphere_directions(int d)
{
    static const std::array<std::vector<Vec>, kMaxDim + 1> tables = [] {
        std::array<std::vector<Vec>, kMaxDim + 1> t;
        // d = 2: evenly spaced angles.
        {
            std::vector<Vec>& v = t[2];
            const int n = 1024;
            v.reserve(n);
            for (int i = 0; i < n; ++i) {
                const double a = 2.0 * kPi * i / n;
                v.push_back(Vec{std::cos(a), std::sin(a)});
            }
        }
        // d = 3: Fibonacci sphere.
        {
            std::vector<Vec>& v = t[3];
            const int n = 2048;
            const double golden = kPi * (3.0 - std::sqrt(5.0));
            v.reserve(n);
            for (int i = 0; i < n; ++i) {
                const double z = 1.0 - (2.0 * i + 1.0) / n;
                const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
                const double a = golden * i;
                v.push_back(Vec{r * std::cos(a), r * std::sin(a), z});
            }
        }
        // d >= 4: Halton sequence mapped through Box-Muller.
        const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
        auto radical_inverse = [](int base, int idx) {
            double f = 1.0, r = 0.0;
            while (idx > 0) {
                f /= base;
                r += f * (idx % base);
                idx /= base;
            }
            return r;
        };
        for (int d0 = 4; d0 <= kMaxDim; ++d0) {
            std::vector<Vec>& v = t[static_cast<std::size_t>(d0)];
            const int n = 2048;
            v.reserve(n);
            for (int i = 1; v.size() < static_cast<std::size_t>(n); ++i) {
                Vec x(d0);
                for (int k = 0; k < d0; k += 2) {
                    const double u1 = std::max(radical_inverse(primes[k % 8], i), 1e-12);
                    const double u2 = radical_inverse(primes[(k + 1) % 8], i);
                    const double r = std::sqrt(-2.0 * std::log(u1));
                    x[k] = r * std::cos(2.0 * kPi * u2);
                    if (k + 1 < d0)
                        x[k + 1] = r * std::sin(2.0 * kPi * u2);
                }
                const double nn = x.norm();
                if (nn > 1e-9)
                    v.push_back(x * (1.0 / nn));
            }
        }
        return t;
    }();
    if (d < 2 || d > kMaxDim)
        throw std::invalid_argument("sphere_directions: dimension out of range");
    return tables[static_cast<std::size_t>(d)];
}

SetField::SetField(const Grid& grid, int d) : grid_(grid), d_(d)
{
    if (d < 1 || d > kMaxDim)
        throw std::invalid_argument("SetField: dimension out of range");
    bodies_.assign(static_cast<std::size_t>(grid.cell_count()), SymBody::zero(d));
}

void SetField::set(long cell, SymBody b)
{
    if (b.dim() != d_)
        throw std::invalid_argument("SetField: body dimension mismatch");
    bodies_[static_cast<std::size_t>(cell)] = std::move(b);
}

std::vector<int> SetField::approx_flags() const
{
    std::vector<int> flags(bodies_.size(), 0);
    for (std::size_t i = 0; i < bodies_.size(); ++i)
        flags[i] = bodies_[i].approximate() ? 1 : 0;
    return flags;
}

double SetField::max_defect() const
{
    double m = 0.0;
    for (const SymBody& b : bodies_)
        m = std::max(m, b.defect());
    return m;
}

ScalarField set_magnitude_field(const SetField& f)
{
    ScalarField out(f.grid());
    for (long c = 0; c < f.grid().cell_count(); ++c)
        out.set(c, magnitude(f.at(c)));
    return out;
}

SymBody body_average(const VectorField& f, const Region& e)
{
    validate_region(f.grid(), e);
    const double inv = 1.0 / static_cast<double>(e.cell_count());
    std::vector<Vec> gens;
    gens.reserve(static_cast<std::size_t>(e.cell_count()));
    for (int i = e.i0; i < e.i1; ++i)
        for (int j = e.j0; j < e.j1; ++j)
            gens.push_back(f.at(i, j) * inv);
    return SymBody::zonotope(f.dim(), std::move(gens));
}

Selection sample_selection(const SetField& f, std::uint64_t seed)
{
    Selection sel;
    sel.values = VectorField(f.grid(), f.dim());
    for (long c = 0; c < f.grid().cell_count(); ++c) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(c));
        const SymBody& b = f.at(c);
        Vec v(f.dim());
        if (b.is_zero()) {
            sel.values.set(c, v);
            continue;
        }
        if (b.rep() == BodyRep::zonotope) {
            for (const Vec& g : b.points())
                v = v + (rng.coin() ? g : -g);
        } else if (rng.coin()) {
            v = b.points()[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(b.points().size())))];
        } else {
            const std::size_t n = b.points().size();
            std::vector<double> w(n);
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                w[k] = rng.uniform();
                s += w[k];
            }
            if (s == 0.0) {
                v = b.points().front();
            } else {
                for (std::size_t k = 0; k < n; ++k)
                    v = v + b.points()[k] * (w[k] / s);
            }
        }
        sel.values.set(c, v);
    }
    return sel;
}

double lp_norm_set(const WeightField& w, const SetField& f, double p)
{
    if (!(w.grid() == f.grid()) || w.dim() != f.dim())
        throw std::invalid_argument("lp_norm_set: shape mismatch");
    ScalarField mags(f.grid());
    for (long c = 0; c < f.grid().cell_count(); ++c)
        mags.set(c, magnitude(linear_image(w.at(c), f.at(c))));
    return lp_norm_scalar(mags, p);
}

} // namespace matmax
