#include "santalo/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace santalo {

MinimizeResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0, const Vec& step, double ftol,
                           double xtol, int max_evals)
{
    const int n = static_cast<int>(x0.size());
    std::vector<Vec> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    for (int i = 0; i < n; ++i) pts[i + 1][i] += step[i];
    MinimizeResult r;
    auto eval = [&](const Vec& x) {
        ++r.evals;
        const double v = f(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };
    for (int i = 0; i <= n; ++i) vals[i] = eval(pts[i]);
    std::vector<int> order(n + 1);
    while (true) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
        std::vector<Vec> p2;
        std::vector<double> v2;
        for (int i : order) p2.push_back(pts[i]), v2.push_back(vals[i]);
        pts.swap(p2);
        vals.swap(v2);
        double diam = 0.0;
        for (int i = 1; i <= n; ++i) diam = std::max(diam, (pts[i] - pts[0]).cwiseAbs().maxCoeff());
        if (std::abs(vals[n] - vals[0]) <= ftol && diam <= xtol) {
            r.converged = true;
            break;
        }
        if (r.evals >= max_evals) break;
        Vec centroid = Vec::Zero(n);
        for (int i = 0; i < n; ++i) centroid += pts[i];
        centroid /= n;
        const Vec xr = centroid + (centroid - pts[n]);
        const double fr = eval(xr);
        if (fr < vals[0]) {
            const Vec xe = centroid + 2.0 * (centroid - pts[n]);
            const double fe = eval(xe);
            if (fe < fr) pts[n] = xe, vals[n] = fe;
            else pts[n] = xr, vals[n] = fr;
            continue;
        }
        if (fr < vals[n - 1]) {
            pts[n] = xr, vals[n] = fr;
            continue;
        }
        const bool outside = fr < vals[n];
        const Vec xc = outside ? Vec(centroid + 0.5 * (xr - centroid)) : Vec(centroid + 0.5 * (pts[n] - centroid));
        const double fc = eval(xc);
        if (fc < (outside ? fr : vals[n])) {
            pts[n] = xc, vals[n] = fc;
            continue;
        }
        for (int i = 1; i <= n; ++i) {
            pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
            vals[i] = eval(pts[i]);
        }
    }
    r.x = pts[0];
    r.value = vals[0];
    return r;
}

}  // namespace santalo
