#pragma once

namespace pssmp {

// Lanczos approximation (g = 7, 9 terms) with reflection below 1/2.
double lanczos_gamma(double x);

// Modified Bessel functions of order a >= 0 for z > 0.
// I_a: power series for z <= bessel_switch(a), Hankel asymptotic expansion beyond.
// K_a: trapezoid rule on K_a(z) = int_0^inf exp(-z cosh t) cosh(a t) dt for
// z <= bessel_switch(a), Hankel asymptotic expansion beyond.
double bessel_I(double a, double z);
double bessel_K(double a, double z);
// log I_a(z) and log K_a(z), usable where the functions themselves over/underflow.
double log_bessel_I(double a, double z);
double log_bessel_K(double a, double z);
double bessel_switch(double a);

}  // namespace pssmp
