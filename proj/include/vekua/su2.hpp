#pragma once

#include <Eigen/Core>

namespace vekua::su2 {

// Basis of the spin-l space ordered by ascending m: row i <-> two_m = -two_l + 2 i.
inline int row_of(int two_l, int two_m) { return (two_m + two_l) / 2; }

/// Hermitian generators J_x, J_y, J_z in the Condon-Shortley basis.
Eigen::MatrixXcd jx(int two_l);
Eigen::MatrixXcd jy(int two_l);
Eigen::MatrixXcd jz(int two_l);

/// Representation matrix exp(-i angle axis.J) of the group element with that rotation vector.
Eigen::MatrixXcd irrep(int two_l, const Eigen::Vector3d& axis, double angle);

/// Sign s with conj(t^l_{nm}) = s * t^l_{-n,-m}; equals (-1)^{m-n}.
int conjugation_sign(int two_m, int two_n);

/// Largest |conj(t_{nm}(U)) - s t_{-n,-m}(U)| over `samples` random group elements.
/// Brute-force check of conjugation_sign against explicit representation matrices.
double conjugation_convention_residual(int two_l, int samples, unsigned seed);

}  // namespace vekua::su2
