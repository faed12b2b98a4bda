#pragma once

namespace gaurast {

// 3DGS reference-implementation thresholds, FP32.
inline constexpr float kAlphaSkip = 1.0f / 255.0f;    // contributions below this are skipped
inline constexpr float kAlphaClamp = 0.99f;           // alpha is clamped to at most this
inline constexpr float kTransmittanceMin = 1.0f / 255.0f;  // pixel terminates below this
inline constexpr float kCovLowPass = 0.3f;            // added to the 2D covariance diagonal
inline constexpr float kBinSigma = 3.0f;              // bounding-box radius in sigmas

}  // namespace gaurast
