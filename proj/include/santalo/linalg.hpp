#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace santalo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

constexpr int kMaxDim = 4;

/// Volume of the unit Euclidean ball in dimension n.
inline double unit_ball_volume(int n)
{
    return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

/// Surface area of the unit sphere S^{n-1}.
inline double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

/// Applies g to the eigenvalues of a symmetric matrix.
template <class F>
Mat spectral_map(const Mat& sym, F g)
{
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (sym + sym.transpose()));
    Vec ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev[i] = g(ev[i]);
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

inline Mat sym_sqrt(const Mat& spd) { return spectral_map(spd, [](double x) { return std::sqrt(x); }); }
inline Mat sym_inv_sqrt(const Mat& spd) { return spectral_map(spd, [](double x) { return 1.0 / std::sqrt(x); }); }
inline Mat sym_exp(const Mat& sym) { return spectral_map(sym, [](double x) { return std::exp(x); }); }
inline Mat sym_log(const Mat& spd) { return spectral_map(spd, [](double x) { return std::log(x); }); }

inline double spectral_norm(const Mat& m)
{
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

inline bool is_spd(const Mat& m, double tol = 0.0)
{
    if (m.rows() != m.cols() || m.rows() == 0) return false;
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + m.cwiseAbs().maxCoeff())) return false;
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    return es.eigenvalues().minCoeff() > tol;
}

/// Packs the upper triangle of a symmetric matrix row by row.
inline Vec pack_sym(const Mat& s)
{
    const auto n = s.rows();
    Vec out(n * (n + 1) / 2);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) out[k++] = s(i, j);
    return out;
}

inline Mat unpack_sym(const Vec& packed, Eigen::Index n)
{
    Mat s(n, n);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) s(i, j) = s(j, i) = packed[k++];
    return s;
}

}  // namespace santalo
