#pragma once

namespace halfdisk {

/// Jacobi amplitude am(u, k) and the three basic elliptic functions at (u, k).
/// The amplitude carries the full quasi-periodic extension:
///   am(u + 4K) = am(u) + 2*pi.
struct JacobiValues {
  double sn = 0.0;
  double cn = 1.0;
  double dn = 1.0;
  double am = 0.0;
};

/// Complete elliptic integral of the first kind K(k), modulus convention.
/// Requires k in [0, 1); k == 1 raises a divergence error, values outside
/// [0, 1] raise a domain error.
double complete_K(double k);

/// Complete elliptic integral of the second kind E(k) for k in [0, 1].
double complete_E(double k);

/// Incomplete elliptic integral of the first kind F(phi, k) for k in [0, 1),
/// extended to all finite phi by F(phi + pi, k) = F(phi, k) + 2 K(k).
double incomplete_F(double phi, double k);

/// Incomplete elliptic integral of the second kind E(phi, k) for k in [0, 1),
/// extended to all finite phi by E(phi + pi, k) = E(phi, k) + 2 E(k).
double incomplete_E(double phi, double k);

/// Jacobi elliptic functions for k in [0, 1] and finite u. At k == 1 the
/// hyperbolic limit is returned: sn = tanh u, cn = dn = sech u,
/// am = gd(u) = atan(sinh u).
JacobiValues jacobi(double u, double k);

/// Jacobi epsilon function: eps(u, k) = E(am(u, k), k) = integral of dn^2
/// from 0 to u. Requires k in [0, 1]; at k == 1 it equals tanh u.
double jacobi_epsilon(double u, double k);

/// Carlson symmetric forms, exposed for cross-checking. At most one of the
/// first arguments of carlson_rf may be zero; carlson_rd requires z > 0.
double carlson_rf(double x, double y, double z);
double carlson_rd(double x, double y, double z);

}  // namespace halfdisk
