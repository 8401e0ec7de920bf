//! Reservoir occupation functions and bath correlation rates.
//!
//! With ħ = 1 the rate W_{nm} carries units of ω_ref; the bosonic rate is
//!
//! W(ω) = lim_{λ→0} Σ_p ∫₀^∞ dω' n^{p+}(ω') J(ω') / (λ + iω − ipω'),
//!
//! whose real part is πJ(ω)n(ω) and whose imaginary part is the principal
//! value ∫ J(ω')n(ω')/(ω' − ω) dω' over the full line (odd extension of J).

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::{Reservoir, SpectralDensity, Statistics};
use crate::quad::{
    integrate, integrate_from_neg_infinity, integrate_to_infinity, Estimate, QuadOptions,
};
use crate::real::{c, Real};
use crate::sign::Sign;
use crate::special::{bose_x, digamma, fermi_x, x_over_expm1};

/// n^{pν}: the equilibrium weight of a reservoir two-point function.
///
/// n^+ = 1/(e^{β(ω−μ)} ∓ 1) (upper sign Bose) and n^− = 1 ± n^+; the product
/// pν selects which one.
pub fn occupation<T: Real>(stat: Statistics, w: T, beta: T, mu: T, p: Sign, nu: Sign) -> Result<T> {
    if !(beta > T::zero()) {
        return Err(Error::Domain("occupation needs beta > 0".into()));
    }
    let x = beta * (w - mu);
    let s = p * nu;
    match stat {
        Statistics::Bose => {
            if s == Sign::Plus && w <= T::zero() {
                return Err(Error::Domain("Bose occupation n^+ needs omega > 0".into()));
            }
            if w == mu {
                return Err(Error::Domain(
                    "Bose occupation diverges at omega = mu".into(),
                ));
            }
            Ok(match s {
                Sign::Plus => bose_x(x),
                Sign::Minus => -bose_x(-x),
            })
        }
        Statistics::Fermi => Ok(match s {
            Sign::Plus => fermi_x(x),
            Sign::Minus => fermi_x(-x),
        }),
    }
}

/// Ohmic-Drude spectral density, odd in ω.
pub fn spectral_density<T: Real>(j: &SpectralDensity<T>, w: T) -> T {
    j.eval(w)
}

/// J(ω)·n(ω) with the signed Bose function, continuous through ω = 0
/// (limit α/β).
#[inline]
pub fn j_times_n<T: Real>(j: &SpectralDensity<T>, w: T, beta: T) -> T {
    j.over_omega(w) * x_over_expm1(beta * w) / beta
}

/// dn/dT of the signed Bose function, odd in ω: ω / (4T² sinh²(ω/2T)).
pub fn dn_dt_signed<T: Real>(w: T, t: T) -> T {
    if w == T::zero() {
        return T::zero();
    }
    let a = w.abs();
    let v = dn_d_delta_t(a, t);
    if w > T::zero() {
        v
    } else {
        -v
    }
}

/// Temperature derivative of the Bose function, ω / (4T² sinh²(ω/2T)).
///
/// Written as (ω/T²)·e^{−x}/(1 − e^{−x})² with x = ω/T so that large x
/// underflows to zero instead of overflowing.
pub fn dn_d_delta_t<T: Real>(w: T, t: T) -> T {
    let x = w / t;
    let e = (-x).exp();
    let d = (-x).exp_m1();
    w / (t * t) * e / (d * d)
}

fn bose_spectral<T: Real>(bath: &Reservoir<T>) -> Result<&SpectralDensity<T>> {
    match (bath.statistics(), bath.spectral()) {
        (Statistics::Bose, Some(j)) => Ok(j),
        _ => Err(Error::Unsupported(format!(
            "bath {}: correlation rate W is defined for bosonic reservoirs; use fermi_pv_integral",
            bath.id
        ))),
    }
}

const MATSUBARA_CAP: usize = 1_000_000;

/// Σ_{n≥1} ν_n / ((ω_c² − ν_n²)(ω² + ν_n²)) with ν_n = 2πn/β.
///
/// Direct summation plus a midpoint-integral tail with first derivative
/// correction; the term count doubles until two successive estimates agree.
pub fn matsubara_sum<T: Real>(w: T, omega_c: T, beta: T, tol: T) -> Result<T> {
    let a = c::<T>(2.0) * T::PI() / beta;
    let wc2 = omega_c * omega_c;
    let w2 = w * w;
    let nearest = (omega_c / a).round();
    if nearest >= T::one() && (omega_c - nearest * a).abs() <= c::<T>(1e-9) * omega_c {
        return Err(Error::Numeric(format!(
            "cutoff {omega_c} coincides with Matsubara frequency n = {nearest} at beta = {beta}; nudge the temperature"
        )));
    }
    let term = |n: T| {
        let nu = a * n;
        nu / ((wc2 - nu * nu) * (w2 + nu * nu))
    };
    let s = wc2 + w2;
    let tail = |n: usize| {
        let x = T::count(n) + c(0.5);
        let nu = a * x;
        let u = nu * nu;
        let integral = (-(s / (u + w2))).ln_1p() / (c::<T>(2.0) * a * s);
        let d = (wc2 - u) * (w2 + u);
        let dg = (d - c::<T>(2.0) * u * (wc2 - w2 - c::<T>(2.0) * u)) / (d * d);
        integral - a * dg / c(24.0)
    };
    let scale = omega_c.max(w.abs());
    let mut n = ((c::<T>(8.0) * scale / a)
        .ceil()
        .to_usize()
        .unwrap_or(MATSUBARA_CAP))
    .max(32);
    let mut partial = T::zero();
    let mut done = 0usize;
    let mut prev: Option<T> = None;
    loop {
        // Sum in reverse within each block to keep the small tail terms accurate.
        let mut block = T::zero();
        for k in (done + 1..=n).rev() {
            block += term(T::count(k));
        }
        partial += block;
        done = n;
        let est = partial + tail(n);
        if let Some(p) = prev {
            if (est - p).abs() <= tol * est.abs().max(T::min_positive_value()) {
                return Ok(est);
            }
        }
        if n >= MATSUBARA_CAP {
            return Err(Error::Numeric(format!(
                "Matsubara sum not converged after {n} terms"
            )));
        }
        prev = Some(est);
        n = (2 * n).min(MATSUBARA_CAP);
    }
}

/// Bosonic correlation rate W(ω_nm) from the closed Matsubara form.
pub fn w_rate<T: Real>(w: T, bath: &Reservoir<T>) -> Result<Complex<T>> {
    let j = bose_spectral(bath)?;
    let beta = bath.beta;
    let pi = T::PI();
    let half: T = c(0.5);
    let re = pi * j_times_n(j, w, beta);
    if j.alpha == T::zero() {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let wc = j.omega_c;
    let sum = matsubara_sum(w, wc, beta, c(1e-13))?;
    let cot = T::one() / (beta * wc * half).tan();
    let im = -half * pi * (j.eval(w) * cot + wc * j.over_omega(w))
        + c::<T>(2.0) * pi * j.alpha * wc * wc * w / beta * sum;
    Ok(Complex::new(re, im))
}

/// W̄(ω) = ω·W(ω). The equal-time term i⟨B B⟩ is omitted: it enters every
/// current as i·Tr(Q²ρ)·const, whose real part vanishes.
pub fn wbar_rate<T: Real>(w: T, bath: &Reservoir<T>) -> Result<Complex<T>> {
    Ok(w_rate(w, bath)? * w)
}

/// Independent evaluation of W by numerical quadrature: the real part from
/// the δ-function limit of the Lorentzian, the imaginary part as a principal
/// value integral over the real line.
pub fn w_rate_pv_oracle<T: Real>(
    w: T,
    bath: &Reservoir<T>,
    opts: QuadOptions<T>,
) -> Result<Estimate<Complex<T>>> {
    let j = *bose_spectral(bath)?;
    let beta = bath.beta;
    let f = move |x: T| j_times_n(&j, x, beta);
    let fw = f(w);
    let temp = T::one() / beta;
    let h = c::<T>(0.5) * w.abs().max(temp);
    let reg = |x: T| {
        if x == w {
            T::zero()
        } else {
            (f(x) - fw) / (x - w)
        }
    };
    let mut value = T::zero();
    let mut error = T::zero();
    let mut add = |e: Estimate<T>| {
        value += e.value;
        error += e.error;
    };
    add(integrate(reg, w - h, w, opts)?);
    add(integrate(reg, w, w + h, opts)?);
    let hi = (w + h).max(T::zero()) + c::<T>(60.0) * temp + c::<T>(4.0) * j.omega_c;
    add(integrate(|x| f(x) / (x - w), w + h, hi, opts)?);
    add(integrate_to_infinity(|x| f(x) / (x - w), hi, opts)?);
    let lo = (w - h).min(T::zero()) - c::<T>(20.0) * j.omega_c;
    add(integrate(|x| f(x) / (x - w), lo, w - h, opts)?);
    add(integrate_from_neg_infinity(|x| f(x) / (x - w), lo, opts)?);
    Ok(Estimate {
        value: Complex::new(T::PI() * fw, value),
        error: Complex::new(T::zero(), error),
    })
}

/// Fermi function f(E) = 1/(e^{β(E−μ)} + 1).
pub fn fermi<T: Real>(e: T, mu: T, beta: T) -> T {
    fermi_x(beta * (e - mu))
}

/// PV∫ f(ε)/(ε − E) dε − iπ f(E) over a wide band of half-width W:
/// Re ψ(1/2 + i(E−μ)/2πT) − ln(W/2πT) − i[π/2 − Im ψ(1/2 + i(E−μ)/2πT)].
pub fn fermi_pv_integral<T: Real>(e: T, mu: T, t: T, band: T) -> Complex<T> {
    let two_pi_t = c::<T>(2.0) * T::PI() * t;
    let psi = digamma(Complex::new(c(0.5), (e - mu) / two_pi_t));
    Complex::new(psi.re - (band / two_pi_t).ln(), -(T::FRAC_PI_2() - psi.im))
}
