//! Special functions: complex digamma and overflow-safe Bose/Fermi helpers.

use num_complex::Complex;

use crate::real::{c, Real};

/// B_{2k} / (2k) for k = 1..=8.
const ASYMPTOTIC: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

/// Digamma ψ(z) for complex z away from the non-positive integers.
///
/// Shifts with ψ(z) = ψ(z+1) − 1/z until |z| ≥ 10, then sums eight terms of
/// the asymptotic series.
pub fn digamma<T: Real>(z: Complex<T>) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    let ten: T = c(10.0);
    let mut z = z;
    let mut acc = Complex::new(T::zero(), T::zero());
    while z.norm() < ten {
        acc = acc - one / z;
        z = z + one;
    }
    let inv = one / z;
    let inv2 = inv * inv;
    let mut series = Complex::new(T::zero(), T::zero());
    let mut pow = inv2;
    for coef in ASYMPTOTIC {
        series = series + pow * c::<T>(coef);
        pow = pow * inv2;
    }
    acc + z.ln() - inv * c::<T>(0.5) - series
}

/// x / (eˣ − 1), equal to 1 at x = 0.
#[inline]
pub fn x_over_expm1<T: Real>(x: T) -> T {
    if x == T::zero() {
        T::one()
    } else {
        x / x.exp_m1()
    }
}

/// Signed Bose function 1/(e^{x} − 1) for x ≠ 0; for x < 0 equals −(1 + n(|x|)).
#[inline]
pub fn bose_x<T: Real>(x: T) -> T {
    T::one() / x.exp_m1()
}

/// Fermi function 1/(eˣ + 1), evaluated without overflow.
#[inline]
pub fn fermi_x<T: Real>(x: T) -> T {
    if x > T::zero() {
        let e = (-x).exp();
        e / (T::one() + e)
    } else {
        T::one() / (T::one() + x.exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn digamma_known_values() {
        let h = digamma(Complex::new(0.5, 0.0));
        assert!((h.re - (-EULER_GAMMA - 2.0 * 2f64.ln())).abs() < 1e-14);
        assert!(h.im.abs() < 1e-15);
        let one = digamma(Complex::new(1.0, 0.0));
        assert!((one.re + EULER_GAMMA).abs() < 1e-14);
        let big = digamma(Complex::new(20.0, 0.0));
        // ψ(20) = H_19 − γ
        let h19: f64 = (1..20).map(|k| 1.0 / k as f64).sum();
        assert!((big.re - (h19 - EULER_GAMMA)).abs() < 1e-14);
    }

    #[test]
    fn digamma_imaginary_part_on_half_line() {
        // Im ψ(1/2 + iy) = (π/2) tanh(πy)
        for y in [0.01, 0.3, 1.0, 4.0, 25.0] {
            let v = digamma(Complex::new(0.5, y));
            let expect = std::f64::consts::FRAC_PI_2 * (std::f64::consts::PI * y).tanh();
            assert!((v.im - expect).abs() < 1e-13, "y={y}: {} vs {expect}", v.im);
        }
    }

    #[test]
    fn digamma_recurrence() {
        let z = Complex::new(0.3f64, -1.7);
        let lhs = digamma(z + 1.0);
        let rhs = digamma(z) + 1.0 / z;
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn occupation_helpers() {
        assert_eq!(x_over_expm1(0.0), 1.0);
        assert!((x_over_expm1(1e-10f64) - 1.0).abs() < 1e-10);
        assert!((bose_x(2f64.ln()) - 1.0).abs() < 1e-15);
        assert!((bose_x(-0.4f64) + 1.0 + bose_x(0.4)).abs() < 1e-14);
        assert_eq!(fermi_x(0.0), 0.5);
        assert!(fermi_x(800.0) >= 0.0 && fermi_x(-800.0) == 1.0);
    }
}
