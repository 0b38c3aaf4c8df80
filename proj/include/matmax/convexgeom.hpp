#pragma once

#include "matmax/grid.hpp"
#include "matmax/linalg.hpp"

#include <cstdint>
#include <vector>

namespace matmax {

enum class BodyRep { polygon, zonotope };

/// Vertex-growth control for long Minkowski cascades. When a polygon exceeds
/// max_vertices it is replaced by a support-sampled outer approximation and
/// the Hausdorff bound of that step is accumulated on the body, so downstream
/// containment tests can widen their tolerance honestly. 0 disables the cap.
struct ApproxBudget {
    int max_vertices = 256;

    static ApproxBudget unlimited() { return ApproxBudget{0}; }
};

/// A compact, convex, origin-symmetric body in R^d.
///
/// Two representations are kept side by side:
///  - polygon: for d = 2 a counterclockwise strictly convex symmetric vertex
///    list (always canonicalized); for d >= 3 an unordered symmetric point
///    cloud whose convex hull is the body.
///  - zonotope: generators g_1..g_m meaning { sum phi_i g_i : |phi_i| <= 1 }.
///
/// The empty point/generator list denotes the degenerate body {0}.
class SymBody {
public:
    SymBody() : dim_(2), rep_(BodyRep::polygon) {}

    static SymBody zero(int dim);
    /// conv{-v, v}, any dimension (stored as a one-generator zonotope).
    static SymBody segment(const Vec& v);
    /// d = 2 polygon from a vertex list; the list is symmetrized, convexified
    /// and pruned (collinear tolerance 1e-12 relative).
    static SymBody polygon(std::vector<Vec> vertices);
    static SymBody zonotope(int dim, std::vector<Vec> generators);
    /// d >= 3 hull-of-points body. The points are kept as given.
    static SymBody vertex_hull(int dim, std::vector<Vec> points);
    /// Trusted constructor for an already-canonical vertex list (internal).
    static SymBody polygon_raw(int dim, std::vector<Vec> vertices);

    int dim() const { return dim_; }
    BodyRep rep() const { return rep_; }
    /// Vertices for polygon rep, generators for zonotope rep.
    const std::vector<Vec>& points() const { return pts_; }
    bool is_zero() const { return pts_.empty(); }

    /// Accumulated Hausdorff distance bound between this representation and
    /// the exact body it stands for (0 = exact).
    double defect() const { return defect_; }
    bool approximate() const { return defect_ > 0.0 || approx_; }

    void add_defect(double h)
    {
        defect_ += h;
        if (h > 0.0)
            approx_ = true;
    }
    void mark_approximate() { approx_ = true; }

private:
    int dim_;
    BodyRep rep_;
    std::vector<Vec> pts_;
    double defect_ = 0.0;
    bool approx_ = false;
};

/// Support function h_B(u) = max{ a.u : a in B }. u must be nonzero.
double support(const SymBody& b, const Vec& u);

/// |B| = max{ |a| : a in B }. Exact for polygons, d <= 2 zonotopes, and
/// d >= 3 zonotopes with at most 16 generators (sign-corner enumeration);
/// larger d >= 3 zonotopes use 2048 low-discrepancy directions plus a local
/// ascent and the value is a lower bound (relative defect <~ 1e-3).
double magnitude(const SymBody& b);

/// M B = { M a : a in B }. Exact in both representations.
SymBody linear_image(const Matrix& m, const SymBody& b);

/// Weighted Minkowski sum  sum_i w_i B_i  with positive weights summing to 1
/// (within 1e-12). Polygons merge pairwise by sorted edge normals; zonotopes
/// concatenate scaled generators.
SymBody minkowski_avg(const std::vector<SymBody>& bodies, const std::vector<double>& weights,
                      const ApproxBudget& budget = {});

/// Convex hull of the union. Polygon output for d = 2 (exact); point-cloud
/// body over concatenated vertex samples for d >= 3 (inner approximation for
/// zonotope inputs with many generators).
SymBody hull_union(const std::vector<SymBody>& bodies, const ApproxBudget& budget = {});

/// True iff B is contained in A up to tol plus both accumulated defects.
/// Exact support tests over edge normals for d = 2; sampled directions d >= 3.
bool contains(const SymBody& a, const SymBody& b, double tol);

/// Largest distance by which B escapes A; 0 when contained. Exact euclidean
/// distance for d <= 2, largest sampled support excess for d >= 3.
double containment_gap(const SymBody& a, const SymBody& b);

/// Mutual containment at tol.
bool body_equal(const SymBody& a, const SymBody& b, double tol);

/// Exact conversion of a d = 2 body to polygon representation.
SymBody to_polygon(const SymBody& b);

SymBody scale_body(const SymBody& b, double t);

/// 2048 fixed low-discrepancy unit vectors in R^d (1024 for d = 2).
const std::vector<Vec>& sphere_directions(int d);

/// Piecewise-constant field of symmetric convex bodies.
class SetField {
public:
    SetField() = default;
    SetField(const Grid& grid, int d);

    const Grid& grid() const { return grid_; }
    int dim() const { return d_; }
    const SymBody& at(long cell) const { return bodies_[static_cast<std::size_t>(cell)]; }
    const SymBody& at(int i, int j) const { return at(grid_.cell_index(i, j)); }
    void set(long cell, SymBody b);
    void set(int i, int j, SymBody b) { set(grid_.cell_index(i, j), std::move(b)); }

    /// 1 per cell whose body is approximate.
    std::vector<int> approx_flags() const;
    double max_defect() const;

private:
    Grid grid_;
    int d_ = 0;
    std::vector<SymBody> bodies_;
};

/// Per-cell magnitudes |F(x)| as a scalar field.
ScalarField set_magnitude_field(const SetField& f);

/// A pointwise choice s(x) in F(x).
struct Selection {
    VectorField values;
};

/// The convex body average over E: the zonotope with generators
/// { f(y)/#E : y in E }.
SymBody body_average(const VectorField& f, const Region& e);

/// Random selection, one draw per cell: a vertex or a convex combination of
/// vertices for polygons, a sign corner for zonotopes. Deterministic in
/// (seed, cell) regardless of evaluation order.
Selection sample_selection(const SetField& f, std::uint64_t seed);

/// L^p norm of x -> |W(x) F(x)| under the weighted_lp_norm conventions.
double lp_norm_set(const WeightField& w, const SetField& f, double p);

} // namespace matmax
