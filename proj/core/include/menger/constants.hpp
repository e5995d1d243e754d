#pragma once

namespace menger::calib {

// Frozen calibration constants for the Gram-Schmidt / frame-perturbation
// bounds.  The theory only guarantees existence of dimension-dependent
// constants; the values below were fixed once by a randomized sweep
// (10^5 near-orthonormal bases per m, m <= 6, eps <= 0.01) and are asserted
// by the property tests.  c_gs bounds max_i |v_i - vhat_i| / eps for a
// unit-scale eps-perturbed basis; the sweep saturates near 2m, 10m leaves
// headroom.
inline double c_gs(int m) { return 10.0 * m; }

// Projection-angle constant: an orthonormal basis of V with
// |perp_U(vhat_i)| <= t for all i gives d_Gr(U,V) <= 2 m (1 + c_gs) t.
inline double c_pi(int m) { return 2.0 * m * (1.0 + c_gs(m)); }

// Largest basis distortion for which the perturbation bound below is served:
// eps_red = 1 / (2 c_pi c_gs).
inline double eps_red(int m) { return 0.5 / (c_pi(m) * c_gs(m)); }

}  // namespace menger::calib
