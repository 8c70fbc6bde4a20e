#include "santalo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace santalo {

namespace {

double point_scale(const std::vector<Vec>& pts)
{
    double s = 0.0;
    for (const Vec& p : pts) s = std::max(s, p.cwiseAbs().maxCoeff());
    return std::max(s, 1.0);
}

// Calls f on every k-subset of {0..n-1} in lexicographic order.
template <class F>
void for_each_subset(int n, int k, F&& f)
{
    if (k > n) return;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        f(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

int affine_rank(const std::vector<Vec>& pts, double tol)
{
    const int d = static_cast<int>(pts[0].size());
    Mat D(d, pts.size() - 1);
    for (std::size_t i = 1; i < pts.size(); ++i) D.col(i - 1) = pts[i] - pts[0];
    if (D.cols() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(D);
    int r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > tol) ++r;
    return r;
}

// Orthonormal basis of the complement of the unit vector n (columns).
Mat complement_basis(const Vec& n)
{
    const Mat col = n;
    Eigen::HouseholderQR<Mat> qr(col);
    Mat Q = qr.householderQ() * Mat::Identity(n.size(), n.size());
    return Q.rightCols(n.size() - 1);
}

BodyMeasures polytope_measures(const std::vector<Vec>& pts)
{
    const int d = static_cast<int>(pts[0].size());
    BodyMeasures m;
    if (d == 1) {
        double lo = pts[0][0], hi = pts[0][0];
        for (const Vec& p : pts) lo = std::min(lo, p[0]), hi = std::max(hi, p[0]);
        m.volume = hi - lo;
        m.centroid = Vec::Constant(1, 0.5 * (lo + hi));
        return m;
    }
    const auto facets = hull_facets(pts);
    Vec apex = Vec::Zero(d);
    for (const Vec& p : pts) apex += p;
    apex /= static_cast<double>(pts.size());
    m.centroid = Vec::Zero(d);
    for (const Facet& f : facets) {
        const double h = f.offset - f.normal.dot(apex);
        const Mat B = complement_basis(f.normal);
        const Vec& origin = pts[f.vertices[0]];
        std::vector<Vec> local;
        for (int i : f.vertices) local.push_back(B.transpose() * (pts[i] - origin));
        const BodyMeasures fm = polytope_measures(local);
        const Vec fc = origin + B * fm.centroid;
        const double cone = h * fm.volume / d;
        m.volume += cone;
        m.centroid += cone * (apex + (static_cast<double>(d) / (d + 1)) * (fc - apex));
    }
    m.centroid /= m.volume;
    return m;
}

double ellipsoid_support(const Ellipsoid& E, const Vec& u)
{
    return E.center.dot(u) + std::sqrt(u.dot(E.shape.llt().solve(u)));
}

// Points whose support values define a radial body's discrete hull.
std::vector<Vec> radial_points(const RadialBody& r)
{
    std::vector<Vec> pts(r.grid.size());
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = r.center + r.radii[i] * r.grid.directions[i];
    return pts;
}

double max_dot(const std::vector<Vec>& pts, const Vec& u)
{
    double best = -kInf;
    for (const Vec& p : pts) best = std::max(best, p.dot(u));
    return best;
}

}  // namespace

std::vector<Facet> hull_facets(const std::vector<Vec>& points)
{
    require(!points.empty(), "degenerate body");
    const int d = static_cast<int>(points[0].size());
    require(d >= 1 && d <= kMaxDim, "dimension must be in 1..4");
    for (const Vec& p : points) require(p.size() == d, "points have mixed dimensions");
    require(static_cast<int>(points.size()) >= d + 1, "degenerate body");
    const double scale = point_scale(points);
    const double tol = 1e-10 * scale;
    require(affine_rank(points, 1e-12 * scale) == d, "degenerate body");

    std::vector<Facet> facets;
    const int n = static_cast<int>(points.size());
    if (d == 1) {
        double lo = points[0][0], hi = points[0][0];
        for (const Vec& p : points) lo = std::min(lo, p[0]), hi = std::max(hi, p[0]);
        Facet a{Vec::Constant(1, 1.0), hi, {}}, b{Vec::Constant(1, -1.0), -lo, {}};
        for (int i = 0; i < n; ++i) {
            if (std::abs(points[i][0] - hi) <= tol) a.vertices.push_back(i);
            if (std::abs(points[i][0] - lo) <= tol) b.vertices.push_back(i);
        }
        return {a, b};
    }
    for_each_subset(n, d, [&](const std::vector<int>& idx) {
        Mat D(d - 1, d);
        for (int i = 1; i < d; ++i) D.row(i - 1) = (points[idx[i]] - points[idx[0]]).transpose();
        Eigen::JacobiSVD<Mat> svd(D, Eigen::ComputeFullV);
        if (svd.singularValues()[d - 2] <= 1e-9 * scale) return;
        Vec normal = svd.matrixV().col(d - 1);
        double offset = normal.dot(points[idx[0]]);
        int above = 0, below = 0;
        for (const Vec& p : points) {
            const double s = normal.dot(p) - offset;
            if (s > tol) ++above;
            if (s < -tol) ++below;
            if (above && below) return;
        }
        if (above) normal = -normal, offset = -offset;
        for (const Facet& f : facets)
            if ((f.normal - normal).norm() < 1e-9 && std::abs(f.offset - offset) < tol) return;
        Facet f{normal, offset, {}};
        for (int i = 0; i < n; ++i)
            if (std::abs(normal.dot(points[i]) - offset) <= tol) f.vertices.push_back(i);
        // Refit the plane through every incident point to damp rounding in the subset choice.
        if (static_cast<int>(f.vertices.size()) > d) {
            Vec mean = Vec::Zero(d);
            for (int i : f.vertices) mean += points[i];
            mean /= static_cast<double>(f.vertices.size());
            Mat C(f.vertices.size(), d);
            for (std::size_t r = 0; r < f.vertices.size(); ++r) C.row(r) = (points[f.vertices[r]] - mean).transpose();
            Eigen::JacobiSVD<Mat> fit(C, Eigen::ComputeFullV);
            Vec refined = fit.matrixV().col(d - 1);
            if (refined.dot(normal) < 0) refined = -refined;
            f.normal = refined;
            f.offset = refined.dot(mean);
        }
        facets.push_back(std::move(f));
    });
    require(static_cast<int>(facets.size()) >= d + 1, "degenerate body");
    return facets;
}

ConvexBody::ConvexBody(int dim, Rep rep, Vec interior) : dim_(dim), rep_(std::move(rep)), interior_(std::move(interior)) {}

ConvexBody ConvexBody::polytope(const std::vector<Vec>& points)
{
    auto facets = hull_facets(points);
    const int d = static_cast<int>(points[0].size());
    std::vector<int> remap(points.size(), -1);
    Polytope P;
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::vector<Vec> normals;
        for (const Facet& f : facets)
            if (std::find(f.vertices.begin(), f.vertices.end(), static_cast<int>(i)) != f.vertices.end())
                normals.push_back(f.normal);
        if (static_cast<int>(normals.size()) < d) continue;
        Mat N(d, normals.size());
        for (std::size_t k = 0; k < normals.size(); ++k) N.col(k) = normals[k];
        Eigen::JacobiSVD<Mat> svd(N);
        if (svd.singularValues()[d - 1] <= 1e-9) continue;
        bool dup = false;
        for (std::size_t k = 0; k < P.vertices.size() && !dup; ++k)
            if ((P.vertices[k] - points[i]).norm() <= 1e-12 * point_scale(points)) {
                remap[i] = static_cast<int>(k);
                dup = true;
            }
        if (dup) continue;
        remap[i] = static_cast<int>(P.vertices.size());
        P.vertices.push_back(points[i]);
    }
    for (Facet& f : facets) {
        std::vector<int> v;
        for (int i : f.vertices)
            if (remap[i] >= 0 && std::find(v.begin(), v.end(), remap[i]) == v.end()) v.push_back(remap[i]);
        f.vertices = std::move(v);
    }
    P.facets = std::move(facets);
    Vec mean = Vec::Zero(d);
    for (const Vec& v : P.vertices) mean += v;
    mean /= static_cast<double>(P.vertices.size());
    return ConvexBody(d, std::move(P), mean);
}

ConvexBody ConvexBody::ellipsoid(const Vec& center, const Mat& shape)
{
    const int d = static_cast<int>(center.size());
    require(d >= 1 && d <= kMaxDim, "dimension must be in 1..4");
    require(shape.rows() == d && shape.cols() == d, "shape matrix dimension does not match center");
    require(is_spd(shape), "shape matrix must be symmetric positive definite");
    const Mat sym = 0.5 * (shape + shape.transpose());
    return ConvexBody(d, Ellipsoid{center, sym}, center);
}

ConvexBody ConvexBody::ball(int dim, double radius)
{
    require(radius > 0.0, "radius must be positive");
    return ellipsoid(Vec::Zero(dim), Mat::Identity(dim, dim) / (radius * radius));
}

ConvexBody ConvexBody::radial(SphereGrid grid, std::vector<double> radii, const Vec& center)
{
    const int d = static_cast<int>(center.size());
    require(d >= 1 && d <= kMaxDim, "dimension must be in 1..4");
    require(grid.dim == d, "sphere grid dimension does not match center");
    require(radii.size() == grid.size(), "radii count does not match the sphere grid");
    for (double r : radii) require(r > 0.0 && std::isfinite(r), "radii must be positive");
    return ConvexBody(d, RadialBody{std::move(grid), std::move(radii), center}, center);
}

ConvexBody ConvexBody::radial_ball(int dim, double radius, int sphere_size)
{
    SphereGrid g = make_sphere_grid(dim, sphere_size);
    std::vector<double> r(g.size(), radius);
    return radial(std::move(g), std::move(r), Vec::Zero(dim));
}

double ConvexBody::support(const Vec& u) const
{
    if (const auto* P = std::get_if<Polytope>(&rep_)) return max_dot(P->vertices, u);
    if (const auto* E = std::get_if<Ellipsoid>(&rep_)) return ellipsoid_support(*E, u);
    const auto& R = std::get<RadialBody>(rep_);
    double best = -kInf;
    for (std::size_t i = 0; i < R.grid.size(); ++i) best = std::max(best, (R.center + R.radii[i] * R.grid.directions[i]).dot(u));
    return best;
}

double ConvexBody::radial_function(const Vec& p, const Vec& u) const
{
    if (const auto* P = std::get_if<Polytope>(&rep_)) {
        double best = kInf;
        for (const Facet& f : P->facets) {
            const double nu = f.normal.dot(u);
            if (nu > 0.0) best = std::min(best, (f.offset - f.normal.dot(p)) / nu);
        }
        return best;
    }
    if (const auto* E = std::get_if<Ellipsoid>(&rep_)) {
        const Vec d = p - E->center;
        const double a = u.dot(E->shape * u), b = u.dot(E->shape * d), c = d.dot(E->shape * d) - 1.0;
        return (-b + std::sqrt(b * b - a * c)) / a;
    }
    const auto& R = std::get<RadialBody>(rep_);
    if ((p - R.center).norm() <= 1e-12) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < R.grid.size(); ++i)
            if (R.grid.directions[i].dot(u) > R.grid.directions[best].dot(u)) best = i;
        return R.radii[best];
    }
    // Off-center: intersect the ray with the supporting halfspaces at the grid normals.
    const auto pts = radial_points(R);
    double best = kInf;
    for (const Vec& v : R.grid.directions) {
        const double vu = v.dot(u);
        if (vu > 0.0) best = std::min(best, (max_dot(pts, v) - v.dot(p)) / vu);
    }
    return best;
}

double ConvexBody::interior_margin(const Vec& x) const
{
    if (const auto* P = std::get_if<Polytope>(&rep_)) {
        double m = kInf;
        for (const Facet& f : P->facets) m = std::min(m, f.offset - f.normal.dot(x));
        return m;
    }
    if (const auto* E = std::get_if<Ellipsoid>(&rep_)) {
        const Vec d = x - E->center;
        Eigen::SelfAdjointEigenSolver<Mat> es(E->shape);
        return (1.0 - std::sqrt(d.dot(E->shape * d))) / std::sqrt(es.eigenvalues().maxCoeff());
    }
    const auto& R = std::get<RadialBody>(rep_);
    const auto pts = radial_points(R);
    double m = kInf;
    for (const Vec& v : R.grid.directions) m = std::min(m, max_dot(pts, v) - v.dot(x));
    return m;
}

double ConvexBody::diameter() const
{
    if (const auto* P = std::get_if<Polytope>(&rep_)) {
        double d = 0.0;
        for (const Vec& a : P->vertices)
            for (const Vec& b : P->vertices) d = std::max(d, (a - b).norm());
        return d;
    }
    if (const auto* E = std::get_if<Ellipsoid>(&rep_)) {
        Eigen::SelfAdjointEigenSolver<Mat> es(E->shape);
        return 2.0 / std::sqrt(es.eigenvalues().minCoeff());
    }
    const auto& R = std::get<RadialBody>(rep_);
    return 2.0 * *std::max_element(R.radii.begin(), R.radii.end());
}

ConvexBody ConvexBody::affine_image(const Mat& M, const Vec& t) const
{
    require(M.rows() == dim_ && M.cols() == dim_ && t.size() == dim_, "affine map dimension mismatch");
    Eigen::FullPivLU<Mat> lu(M);
    require(lu.isInvertible(), "affine map must be invertible");
    if (const auto* P = std::get_if<Polytope>(&rep_)) {
        std::vector<Vec> v;
        for (const Vec& p : P->vertices) v.push_back(M * p + t);
        return polytope(v);
    }
    if (const auto* E = std::get_if<Ellipsoid>(&rep_)) {
        const Mat Minv = lu.inverse();
        const Mat A = Minv.transpose() * E->shape * Minv;
        return ellipsoid(M * E->center + t, 0.5 * (A + A.transpose()));
    }
    const auto& R = std::get<RadialBody>(rep_);
    const double s = M(0, 0);
    require((M - s * Mat::Identity(dim_, dim_)).cwiseAbs().maxCoeff() == 0.0 && s > 0.0,
            "radial bodies support only positive scalings and translations");
    std::vector<double> radii = R.radii;
    for (double& r : radii) r *= s;
    return radial(R.grid, std::move(radii), s * R.center + t);
}

ConvexBody ConvexBody::translated(const Vec& t) const { return affine_image(Mat::Identity(dim_, dim_), t); }

ConvexBody ConvexBody::scaled(double s) const { return affine_image(s * Mat::Identity(dim_, dim_), Vec::Zero(dim_)); }

BodyMeasures body_measures(const ConvexBody& K)
{
    const int n = K.dim();
    if (K.is_polytope()) {
        BodyMeasures m = polytope_measures(K.as_polytope().vertices);
        require(m.volume > 0.0, "degenerate body");
        return m;
    }
    if (K.is_ellipsoid()) {
        const auto& E = K.as_ellipsoid();
        return {unit_ball_volume(n) / std::sqrt(E.shape.determinant()), E.center};
    }
    const auto& R = K.as_radial();
    double vol = 0.0;
    Vec moment = Vec::Zero(n);
    for (std::size_t i = 0; i < R.grid.size(); ++i) {
        const double rn = std::pow(R.radii[i], n);
        vol += R.grid.weights[i] * rn / n;
        moment += R.grid.weights[i] * rn * R.radii[i] / (n + 1) * R.grid.directions[i];
    }
    return {vol, R.center + moment / vol};
}

Ellipsoid polar_ellipsoid(const Ellipsoid& E, const Vec& z)
{
    const Vec d = E.center - z;
    require(d.dot(E.shape * d) < 1.0 - 1e-12, "center not interior");
    const Mat M = E.shape.inverse() - d * d.transpose();
    const Vec Md = M.llt().solve(d);
    const Mat A = M / (1.0 + d.dot(Md));
    return {z - Md, 0.5 * (A + A.transpose())};
}

ConvexBody polar_body(const ConvexBody& K, const Vec& z)
{
    require(z.size() == K.dim(), "center dimension does not match body");
    if (K.is_polytope()) {
        const auto& P = K.as_polytope();
        const double scale = std::max(1.0, K.diameter());
        std::vector<Vec> v;
        for (const Facet& f : P.facets) {
            const double h = f.offset - f.normal.dot(z);
            require(h > 1e-12 * scale, "center not interior");
            v.push_back(z + f.normal / h);
        }
        return ConvexBody::polytope(v);
    }
    if (K.is_ellipsoid()) {
        const Ellipsoid E = polar_ellipsoid(K.as_ellipsoid(), z);
        return ConvexBody::ellipsoid(E.center, E.shape);
    }
    const auto& R = K.as_radial();
    const auto pts = radial_points(R);
    std::vector<double> radii(R.grid.size());
    for (std::size_t i = 0; i < R.grid.size(); ++i) {
        const Vec& u = R.grid.directions[i];
        const double h = max_dot(pts, u) - z.dot(u);
        require(h > 1e-12, "center not interior");
        radii[i] = 1.0 / h;
    }
    return ConvexBody::radial(R.grid, std::move(radii), z);
}

double volume_product(const ConvexBody& K, const Vec& z)
{
    return body_measures(K).volume * body_measures(polar_body(K, z)).volume;
}

Vec polar_volume_gradient(const ConvexBody& K, const Vec& z)
{
    const BodyMeasures m = body_measures(polar_body(K, z));
    return (K.dim() + 1) * m.volume * (m.centroid - z);
}

namespace {

double polar_volume(const ConvexBody& K, const Vec& z)
{
    if (!(K.interior_margin(z) > 0.0)) return kInf;
    try {
        return body_measures(polar_body(K, z)).volume;
    } catch (const DomainError&) {
        return kInf;
    }
}

// Golden-section search of F along z + t e_k for every axis.
Vec coordinate_sweep(const ConvexBody& K, Vec z)
{
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int k = 0; k < K.dim(); ++k) {
        const double r = std::max(K.interior_margin(z), 1e-12);
        double a = -r, b = r;
        auto F = [&](double t) {
            Vec y = z;
            y[k] += t;
            return polar_volume(K, y);
        };
        double c = b - invphi * (b - a), d = a + invphi * (b - a);
        double fc = F(c), fd = F(d);
        for (int it = 0; it < 200 && b - a > 1e-14 * (1.0 + r); ++it) {
            if (fc < fd) {
                b = d, d = c, fd = fc;
                c = b - invphi * (b - a), fc = F(c);
            } else {
                a = c, c = d, fc = fd;
                d = a + invphi * (b - a), fd = F(d);
            }
        }
        z[k] += 0.5 * (a + b);
    }
    return z;
}

}  // namespace

SantaloPoint santalo_point(const ConvexBody& K, double tol, int max_iter)
{
    require(tol > 0.0, "tolerance must be positive");
    const int n = K.dim();
    Vec z = body_measures(K).centroid;
    if (!(K.interior_margin(z) > 0.0)) z = K.interior_point();
    const double h = 1e-5 * std::max(K.diameter(), 1e-3);
    double Fz = polar_volume(K, z);
    Vec g = polar_volume_gradient(K, z);
    Vec best = z;
    double best_g = g.norm();
    int stalls = 0;
    for (int it = 0; it < max_iter; ++it) {
        if (g.norm() < best_g) best = z, best_g = g.norm();
        if (g.norm() < tol) return {z, body_measures(K).volume * Fz, g.norm(), it};
        Mat H(n, n);
        for (int j = 0; j < n; ++j) {
            Vec zp = z, zm = z;
            zp[j] += h;
            zm[j] -= h;
            H.col(j) = (polar_volume_gradient(K, zp) - polar_volume_gradient(K, zm)) / (2.0 * h);
        }
        H = 0.5 * (H + H.transpose());
        Eigen::LLT<Mat> llt(H);
        Vec step = llt.info() == Eigen::Success ? Vec(-llt.solve(g)) : Vec(-g / std::max(g.norm(), 1.0));
        bool accepted = false;
        for (double t = 1.0; t > 1e-12; t *= 0.5) {
            const Vec y = z + t * step;
            const double Fy = polar_volume(K, y);
            if (!std::isfinite(Fy)) continue;
            const Vec gy = polar_volume_gradient(K, y);
            if (Fy < Fz + 1e-4 * t * g.dot(step) || gy.norm() < g.norm()) {
                z = y, Fz = Fy, g = gy;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            z = coordinate_sweep(K, z);
            Fz = polar_volume(K, z);
            g = polar_volume_gradient(K, z);
            if (++stalls > 3) break;
        }
    }
    if (g.norm() < tol) return {z, body_measures(K).volume * Fz, g.norm(), max_iter};
    throw NoConvergence("no convergence", best);
}

Ellipsoid min_volume_enclosing_ellipsoid(const std::vector<Vec>& points, double tol, int max_iter)
{
    require(!points.empty(), "degenerate body");
    const int d = static_cast<int>(points[0].size());
    const int m = static_cast<int>(points.size());
    require(m >= d + 1, "degenerate body");
    Mat Q(d + 1, m);
    for (int i = 0; i < m; ++i) {
        Q.col(i).head(d) = points[i];
        Q(d, i) = 1.0;
    }
    Vec u = Vec::Constant(m, 1.0 / m);
    const double D = d + 1.0;
    for (int it = 0; it < max_iter; ++it) {
        const Mat X = Q * u.asDiagonal() * Q.transpose();
        Eigen::LLT<Mat> llt(X);
        require(llt.info() == Eigen::Success, "degenerate body");
        const Mat S = llt.solve(Q);
        Vec w(m);
        for (int i = 0; i < m; ++i) w[i] = Q.col(i).dot(S.col(i));
        int j = 0, k = -1;
        for (int i = 0; i < m; ++i) {
            if (w[i] > w[j]) j = i;
            if (u[i] > 0.0 && (k < 0 || w[i] < w[k])) k = i;
        }
        const double up = w[j] / D - 1.0, down = 1.0 - w[k] / D;
        if (std::max(up, down) <= tol) break;
        if (up >= down) {
            const double beta = (w[j] - D) / (D * (w[j] - 1.0));
            u *= 1.0 - beta;
            u[j] += beta;
        } else {
            const double beta = std::min((D - w[k]) / (D * (w[k] - 1.0)), u[k] / (1.0 - u[k]));
            u *= 1.0 + beta;
            u[k] -= beta;
            if (u[k] < 0.0) u[k] = 0.0;
        }
    }
    Vec c = Vec::Zero(d);
    for (int i = 0; i < m; ++i) c += u[i] * points[i];
    Mat S = Mat::Zero(d, d);
    for (int i = 0; i < m; ++i) S += u[i] * (points[i] - c) * (points[i] - c).transpose();
    Mat A = S.inverse() / d;
    double worst = 0.0;
    for (const Vec& p : points) worst = std::max(worst, (p - c).dot(A * (p - c)));
    A /= worst;
    return {c, 0.5 * (A + A.transpose())};
}

double bm_ball_upper(const ConvexBody& K)
{
    if (K.is_ellipsoid()) return 0.0;
    require(K.is_polytope(), "bm_ball_upper needs a polytope or an ellipsoid");
    const auto& P = K.as_polytope();

    // Löwner ellipsoid contains K; shrink it about its center until it fits.
    const Ellipsoid outer = min_volume_enclosing_ellipsoid(P.vertices);
    const Mat outer_inv = outer.shape.inverse();
    double s = kInf;
    for (const Facet& f : P.facets)
        s = std::min(s, (f.offset - f.normal.dot(outer.center)) / std::sqrt(f.normal.dot(outer_inv * f.normal)));
    require(s > 0.0, "degenerate body");
    const double lambda_outer = 1.0 / s;

    // Polar of the Löwner ellipsoid of K^x lies inside K; inflate it to cover K.
    const Vec& x = K.interior_point();
    const ConvexBody polar = polar_body(K, x);
    const Ellipsoid dual_outer = min_volume_enclosing_ellipsoid(polar.as_polytope().vertices);
    const Ellipsoid inner = polar_ellipsoid(dual_outer, x);
    double t = 0.0;
    for (const Vec& v : P.vertices) t = std::max(t, (v - inner.center).dot(inner.shape * (v - inner.center)));
    const double lambda_inner = std::sqrt(t);

    return std::log(std::max(1.0, std::min(lambda_outer, lambda_inner)));
}

bool contains(const ConvexBody& outer, const ConvexBody& inner, double tol)
{
    require(outer.dim() == inner.dim(), "bodies have different dimensions");
    if (outer.is_polytope()) {
        for (const Facet& f : outer.as_polytope().facets)
            if (inner.support(f.normal) > f.offset + tol) return false;
        return true;
    }
    if (outer.is_ellipsoid() && !inner.is_ellipsoid()) {
        const auto& E = outer.as_ellipsoid();
        const std::vector<Vec> pts = inner.is_polytope() ? inner.as_polytope().vertices : radial_points(inner.as_radial());
        // Compare Minkowski gauge against 1 with tol measured as a length along the ray.
        const double rmin = 1.0 / std::sqrt(Eigen::SelfAdjointEigenSolver<Mat>(E.shape).eigenvalues().maxCoeff());
        for (const Vec& p : pts) {
            const double gauge = std::sqrt((p - E.center).dot(E.shape * (p - E.center)));
            if ((gauge - 1.0) * rmin > tol) return false;
        }
        return true;
    }
    const SphereGrid grid = make_sphere_grid(outer.dim());
    for (const Vec& u : grid.directions)
        if (inner.support(u) > outer.support(u) + tol) return false;
    return true;
}

SandwichReport sandwich_check(const SandwichInput& in)
{
    const int n = in.body.dim();
    require(in.ellipsoid.dim() == n && in.w.size() == n, "sandwich inputs have mismatched dimensions");
    require(in.ellipsoid.is_ellipsoid(), "sandwich ellipsoid must be an ellipsoid");
    require(in.ellipsoid.as_ellipsoid().center.norm() <= 1e-12, "sandwich ellipsoid must be centered at the origin");
    require(in.mu > 0.0 && in.mu < 1.0 / (n + 1), "mu must lie in (0, 1/(n+1))");
    SandwichReport r;
    r.centroid_offset = body_measures(in.body).centroid.norm();
    if (r.centroid_offset > 1e-8 * in.body.diameter())
        throw DomainError("precondition violated: centroid of K is not the origin");
    const ConvexBody shifted = in.body.translated(-in.w);
    const ConvexBody& E = in.ellipsoid;
    r.hypothesis_ok = contains(shifted, E) && contains(E.scaled(1.0 + in.mu), shifted);
    const double q = in.mu * std::sqrt(n + 1.0);
    r.conclusion_ok = contains(in.body, E.scaled(1.0 - q)) && contains(E.scaled(1.0 + 2.0 * q), in.body);
    return r;
}

double vertex_hausdorff(const std::vector<Vec>& a, const std::vector<Vec>& b)
{
    auto one_sided = [](const std::vector<Vec>& x, const std::vector<Vec>& y) {
        double worst = 0.0;
        for (const Vec& p : x) {
            double best = kInf;
            for (const Vec& q : y) best = std::min(best, (p - q).norm());
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

namespace exact {

namespace {
Rational cross(const Point2& o, const Point2& a, const Point2& b)
{
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}
}  // namespace

Point2 from_double(double x, double y) { return {Rational(x), Rational(y)}; }

std::vector<Point2> hull(std::vector<Point2> pts)
{
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) throw DomainError("degenerate body");
    std::vector<Point2> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i - 1]) <= 0) --k;
        h[k++] = pts[i - 1];
    }
    h.resize(k - 1);
    if (h.size() < 3) throw DomainError("degenerate body");
    return h;
}

std::vector<Point2> polar(const std::vector<Point2>& polygon, const Point2& z)
{
    const auto P = hull(polygon);
    std::vector<Point2> out;
    for (std::size_t i = 0; i < P.size(); ++i) {
        const Point2& a = P[i];
        const Point2& b = P[(i + 1) % P.size()];
        if (cross(a, b, z) <= 0) throw DomainError("center not interior");
        const Rational p0 = a[0] - z[0], p1 = a[1] - z[1], q0 = b[0] - z[0], q1 = b[1] - z[1];
        const Rational det = p0 * q1 - p1 * q0;
        out.push_back({(q1 - p1) / det + z[0], (p0 - q0) / det + z[1]});
    }
    return hull(out);
}

Rational area(const std::vector<Point2>& polygon)
{
    Rational s = 0;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const Point2& a = polygon[i];
        const Point2& b = polygon[(i + 1) % polygon.size()];
        s += a[0] * b[1] - a[1] * b[0];
    }
    return abs(s) / 2;
}

}  // namespace exact

}  // namespace santalo
