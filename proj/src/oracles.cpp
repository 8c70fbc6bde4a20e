#include "santalo/oracles.hpp"

#include "santalo/error.hpp"

#include <algorithm>

namespace santalo::oracle {

void conjugate_1d_brute(std::span<const double> u, std::span<const double> F, std::span<const double> v,
                        std::span<double> out)
{
    for (std::size_t j = 0; j < v.size(); ++j) {
        double best = -kInf;
        for (std::size_t i = 0; i < u.size(); ++i)
            if (!is_inf(F[i])) best = std::max(best, u[i] * v[j] - F[i]);
        out[j] = best;
    }
}

GridField legendre_brute(const GridField& field, const Vec& z, const GridSpec& out)
{
    const GridSpec& in = field.grid();
    std::vector<double> values(out.size(), -kInf);
    for (std::size_t j = 0; j < out.size(); ++j) {
        const Vec y = out.node(j) - z;
        for (std::size_t i = 0; i < in.size(); ++i) {
            if (is_inf(field[i])) continue;
            values[j] = std::max(values[j], (in.node(i) - z).dot(y) - field[i]);
        }
    }
    return GridField(out, std::move(values));
}

double fenchel_young_gap_brute(const GridField& phi, const GridField& psi, const Vec& z)
{
    double gap = kInf;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (is_inf(phi[i])) continue;
        const Vec x = phi.grid().node(i) - z;
        for (std::size_t j = 0; j < psi.size(); ++j) {
            if (is_inf(psi[j])) continue;
            gap = std::min(gap, phi[i] + psi[j] - x.dot(psi.grid().node(j) - z));
        }
    }
    require(!is_inf(gap), "vacuous");
    return gap;
}

}  // namespace santalo::oracle
