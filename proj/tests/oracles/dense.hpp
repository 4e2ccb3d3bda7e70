// Dense-matrix reference implementations. Slow and literal; small N only.
#pragma once

#include "ruenergy/dsp.hpp"
#include "ruenergy/pa.hpp"
#include "ruenergy/receiver.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <span>

namespace oracle {

using ruenergy::cplx;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Vec to_vec(std::span<const cplx> v) {
    Vec out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

/// Unitary DFT matrix, F(k, n) = exp(-j 2 pi k n / N) / sqrt(N).
inline Mat dft_matrix(Eigen::Index n) {
    Mat f(n, n);
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index t = 0; t < n; ++t)
            f(k, t) = std::polar(1.0 / std::sqrt(static_cast<double>(n)),
                                 -2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n));
    return f;
}

/// Circulant channel matrix of the zero-padded impulse response.
inline Mat circulant(std::span<const cplx> taps, Eigen::Index n) {
    Mat h = Mat::Zero(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (std::size_t l = 0; l < taps.size(); ++l) h(r, (r - static_cast<Eigen::Index>(l) + n) % n) = taps[l];
    return h;
}

/// N x M tone-mapping matrix in FFT bin order for centered-grid indices.
inline Mat mapping_matrix(std::span<const std::size_t> mapping, std::size_t n) {
    Mat t = Mat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(mapping.size()));
    for (std::size_t i = 0; i < mapping.size(); ++i)
        t(static_cast<Eigen::Index>(ruenergy::dsp::centered_to_bin(mapping[i], n)), static_cast<Eigen::Index>(i)) = 1.0;
    return t;
}

/// Exact MMSE with the data-dependent effective channel
/// H_eff = F_N H Q(x) F_N^H (drive scale folded in):
///   d_hat = F_M^H T^H H_eff^H (H_eff H_eff^H + sigma^2 I)^-1 Y.
/// Y is rebuilt in FFT bin order from the trial's received grid.
inline Vec full_mmse(const ruenergy::receiver::TrialSignals& t, ruenergy::WaveformKind kind,
                     const ruenergy::pa::RappModel& rapp) {
    const auto n = static_cast<Eigen::Index>(t.tx.size());
    const auto m = static_cast<Eigen::Index>(t.mapping.size());
    const Mat f = dft_matrix(n);
    Mat q = Mat::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) q(i, i) = ruenergy::pa::complex_gain(t.drive[i], rapp) * t.scale;
    const Mat h_eff = f * circulant(t.channel.taps, n) * q * f.adjoint();
    Vec y(n);
    for (Eigen::Index k = 0; k < n; ++k)
        y(k) = t.rx_grid[ruenergy::dsp::bin_to_centered(static_cast<std::size_t>(k), static_cast<std::size_t>(n))];
    const Mat gram = h_eff * h_eff.adjoint() + t.noise_variance * Mat::Identity(n, n);
    const Vec x_hat = h_eff.adjoint() * gram.ldlt().solve(y);
    const Vec tones = mapping_matrix(t.mapping, static_cast<std::size_t>(n)).transpose() * x_hat;
    if (kind == ruenergy::WaveformKind::CpOfdm) return tones;
    return dft_matrix(m).adjoint() * tones;
}

} // namespace oracle
