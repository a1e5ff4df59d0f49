#pragma once

namespace curvq {

enum class BesselKind { J, Y, I, K };

/// Bessel functions of integer order n >= 0 and real argument.
/// J, I accept x >= 0; Y, K require x > 0 (DomainError otherwise).
double bessel(BesselKind kind, int order, double x);

inline double bessel_j(int n, double x) { return bessel(BesselKind::J, n, x); }
inline double bessel_y(int n, double x) { return bessel(BesselKind::Y, n, x); }
inline double bessel_i(int n, double x) { return bessel(BesselKind::I, n, x); }
inline double bessel_k(int n, double x) { return bessel(BesselKind::K, n, x); }

}  // namespace curvq
