//! Heat and particle currents, thermal conductance and the closed forms for
//! a qubit and a single-level dot.
//!
//! Two-terminal conventions: the first coupling of the model is the left
//! reservoir L, the second the right reservoir R. Conductances are
//! κ = ∂I_R/∂ΔT at T_L = T + ΔT, T_R = T, so heat flowing from a hot L into R
//! is positive.

use crate::bath::{dn_d_delta_t, dn_dt_signed, fermi};
use crate::error::{invalid, Error, Result};
use crate::linalg::{Lu, RMatrix};
use crate::model::{JunctionModel, Reservoir, SpectralDensity};
use crate::quad::{integrate_split, QuadOptions};
use crate::real::{c, Real};
use crate::redfield::{
    build_current_kernel_2nd, build_k2_boson, gamma_rates, pair_baths, BathRates, DotLead,
    RateMatrix,
};
use crate::steady::{
    cluster_bohr_frequencies, full_secular_steady, gamma_scale, partial_secular_steady, SteadyState,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Second,
    Fourth,
    SecondPlusFourth,
}

/// Heat current into each reservoir.
#[derive(Clone, Debug, PartialEq)]
pub struct CurrentResult<T: Real> {
    pub ids: Vec<String>,
    pub heat: Vec<T>,
    /// Σ of |terms| entering each current; sets the roundoff floor.
    pub gross: Vec<T>,
    pub order: Order,
}

impl<T: Real> CurrentResult<T> {
    pub fn get(&self, id: &str) -> Option<T> {
        self.ids.iter().position(|k| k == id).map(|i| self.heat[i])
    }

    /// |Σ_r I_r|.
    pub fn conservation_defect(&self) -> T {
        self.heat.iter().copied().sum::<T>().abs()
    }

    pub fn max_abs(&self) -> T {
        self.heat.iter().fold(T::zero(), |a, x| a.max(x.abs()))
    }

    /// |Σ_r I_r| ≤ tol·max|I_r|, with a floor of a few ulps of the gross flow.
    pub fn is_conserved(&self, tol: T) -> bool {
        let gross = self.gross.iter().fold(T::zero(), |a, &x| a.max(x));
        self.conservation_defect() <= tol * self.max_abs() + c::<T>(8.0) * T::epsilon() * gross
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kappa2Method {
    Analytic,
    FiniteDifference,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SecularMode<T> {
    Full,
    /// Keeps coherences with |ω_nm| ≤ factor·γ_scale.
    Partial {
        factor: T,
        lamb_shift: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConductanceResult<T: Real> {
    pub kappa2: T,
    pub kappa4: T,
    pub total: T,
    pub temperature: T,
    pub method: Kappa2Method,
}

/// I_r = Σ_{n,m} ω_mn Γ^r_{nm} ρ_mm.
pub fn heat_current_2nd_secular<T: Real>(
    model: &JunctionModel<T>,
    rates: &BathRates<T>,
    rho: &SteadyState<T>,
) -> CurrentResult<T> {
    let pops = rho.populations();
    let (heat, gross) = rates
        .per_bath
        .iter()
        .map(|g| secular_current_terms(model, g, &pops))
        .unzip();
    CurrentResult {
        ids: rates.ids.clone(),
        heat,
        gross,
        order: Order::Second,
    }
}

fn secular_current<T: Real>(model: &JunctionModel<T>, g: &RateMatrix<T>, pops: &[T]) -> T {
    secular_current_terms(model, g, pops).0
}

fn secular_current_terms<T: Real>(
    model: &JunctionModel<T>,
    g: &RateMatrix<T>,
    pops: &[T],
) -> (T, T) {
    let d = model.dim();
    let mut acc = T::zero();
    let mut gross = T::zero();
    for n in 0..d {
        for m in 0..d {
            if n != m {
                let term = model.bohr(m, n) * g.get(n, m) * pops[m];
                acc += term;
                gross += term.abs();
            }
        }
    }
    (acc, gross)
}

/// Heat current into `r` including every coherence of ρ.
pub fn heat_current_2nd_general<T: Real>(
    model: &JunctionModel<T>,
    baths: &[Reservoir<T>],
    r: &str,
    rho: &SteadyState<T>,
) -> Result<T> {
    let k = build_current_kernel_2nd(model, baths, r)?;
    Ok(k.current(&rho.rho))
}

/// Steady state for the given bath temperatures.
pub fn steady_state<T: Real>(
    model: &JunctionModel<T>,
    baths: &[Reservoir<T>],
    mode: SecularMode<T>,
) -> Result<SteadyState<T>> {
    match mode {
        SecularMode::Full => full_secular_steady(&gamma_rates(model, baths)?.total),
        SecularMode::Partial { factor, lamb_shift } => {
            let k2 = build_k2_boson(model, baths)?;
            let clusters = cluster_bohr_frequencies(model, gamma_scale(&k2), factor)?;
            partial_secular_steady(model, &k2, &clusters, lamb_shift)
        }
    }
}

/// Second-order heat currents into every reservoir.
pub fn heat_currents_2nd<T: Real>(
    model: &JunctionModel<T>,
    baths: &[Reservoir<T>],
    mode: SecularMode<T>,
) -> Result<CurrentResult<T>> {
    let rho = steady_state(model, baths, mode)?;
    match mode {
        SecularMode::Full => Ok(heat_current_2nd_secular(
            model,
            &gamma_rates(model, baths)?,
            &rho,
        )),
        SecularMode::Partial { .. } => {
            let ids: Vec<String> = model.reservoir_ids().map(String::from).collect();
            let mut heat = Vec::with_capacity(ids.len());
            let mut gross = Vec::with_capacity(ids.len());
            for id in &ids {
                let (i, g) =
                    build_current_kernel_2nd(model, baths, id)?.current_with_gross(&rho.rho);
                heat.push(i);
                gross.push(g);
            }
            Ok(CurrentResult {
                ids,
                heat,
                gross,
                order: Order::Second,
            })
        }
    }
}

fn two_terminal<'a, T: Real>(
    model: &'a JunctionModel<T>,
    baths: &'a [Reservoir<T>],
) -> Result<[(&'a RMatrix<T>, &'a Reservoir<T>); 2]> {
    let pairs = pair_baths(model, baths)?;
    match pairs.as_slice() {
        [l, r] => Ok([*l, *r]),
        _ => Err(Error::Unsupported(format!(
            "expected two reservoirs, got {}",
            pairs.len()
        ))),
    }
}

fn at_temperatures<T: Real>(
    model: &JunctionModel<T>,
    baths: &[Reservoir<T>],
    tl: T,
    tr: T,
) -> Result<Vec<Reservoir<T>>> {
    let [(_, l), (_, r)] = two_terminal(model, baths)?;
    Ok(vec![l.with_temperature(tl), r.with_temperature(tr)])
}

/// Second-order linear conductance κ2 at temperature `t`.
///
/// The analytic method differentiates the Bose factors of L inside the
/// secular current: Γ dρ = −(∂Γ^L/∂T) ρ with Σ dρ = 0 and
/// κ2 = Σ ω_mn Γ^R_nm dρ_mm. The partial-secular mode only supports the
/// finite-difference method (step 1e-4·T, clusters fixed at equilibrium).
pub fn kappa2<T: Real>(
    model: &JunctionModel<T>,
    baths: &[Reservoir<T>],
    t: T,
    mode: SecularMode<T>,
    method: Kappa2Method,
) -> Result<T> {
    if !(t > T::zero()) {
        return invalid("temperature must be positive");
    }
    let eq = at_temperatures(model, baths, t, t)?;
    match (mode, method) {
        (SecularMode::Full, Kappa2Method::Analytic) => kappa2_secular_analytic(model, &eq, t),
        (SecularMode::Full, Kappa2Method::FiniteDifference) => {
            let h = c::<T>(1e-4) * t;
            let current = |tl: T| -> Result<T> {
                let b = at_temperatures(model, baths, tl, t)?;
                let rates = gamma_rates(model, &b)?;
                let rho = full_secular_steady(&rates.total)?;
                Ok(secular_current(
                    model,
                    &rates.per_bath[1],
                    &rho.populations(),
                ))
            };
            Ok((current(t + h)? - current(t - h)?) / (h + h))
        }
        (SecularMode::Partial { .. }, Kappa2Method::Analytic) => Err(Error::Unsupported(
            "analytic conductance needs the full secular solver; use finite differences".into(),
        )),
        (SecularMode::Partial { factor, lamb_shift }, Kappa2Method::FiniteDifference) => {
            let k_eq = build_k2_boson(model, &eq)?;
            let clusters = cluster_bohr_frequencies(model, gamma_scale(&k_eq), factor)?;
            let r_id = eq[1].id.clone();
            let kr = build_current_kernel_2nd(model, &eq, &r_id)?;
            let h = c::<T>(1e-4) * t;
            let current = |tl: T| -> Result<T> {
                let b = at_temperatures(model, baths, tl, t)?;
                let k2 = build_k2_boson(model, &b)?;
                let rho = partial_secular_steady(model, &k2, &clusters, lamb_shift)?;
                Ok(kr.current(&rho.rho))
            };
            Ok((current(t + h)? - current(t - h)?) / (h + h))
        }
    }
}

fn kappa2_secular_analytic<T: Real>(
    model: &JunctionModel<T>,
    eq: &[Reservoir<T>],
    t: T,
) -> Result<T> {
    let rates = gamma_rates(model, eq)?;
    let rho = full_secular_steady(&rates.total)?.populations();
    let [(ql, bl), _] = two_terminal(model, eq)?;
    let j = bl.spectral().expect("bosonic reservoir");
    let d = model.dim();
    let dg = rate_temperature_derivative(model, ql, j, t);
    let mut a = rates.total.matrix().clone();
    let mut rhs: Vec<T> = dg.matrix().mul_vec(&rho).into_iter().map(|x| -x).collect();
    for k in 0..d {
        a[(0, k)] = T::one();
    }
    rhs[0] = T::zero();
    let drho = Lu::new(&a)?.solve(&rhs);
    Ok(secular_current(model, &rates.per_bath[1], &drho))
}

fn require_gap<T: Real>(n: usize, m: usize, w: T) -> Result<()> {
    if w == T::zero() {
        return Err(Error::Degenerate(format!(
            "levels {m} and {n} are degenerate"
        )));
    }
    Ok(())
}

/// S = Σ_{m≠0} Q_{R,m0} Q_{L,0m} / ω_m0.
fn ground_state_sum<T: Real>(
    model: &JunctionModel<T>,
    ql: &RMatrix<T>,
    qr: &RMatrix<T>,
) -> Result<T> {
    let mut s = T::zero();
    for m in 1..model.dim() {
        let p = qr[(m, 0)] * ql[(0, m)];
        if p == T::zero() {
            continue;
        }
        let w = model.bohr(m, 0);
        require_gap(m, 0, w)?;
        s += p / w;
    }
    Ok(s)
}

/// Low-temperature fourth-order conductance
/// κ4 = (32α²π⁵T³/15) Σ_{k,m≠0} Q_{R,m0}Q_{L,0m}Q_{L,0k}Q_{R,k0}/(ω_m0 ω_k0)
/// evaluated as the perfect square (32α²π⁵T³/15)·S².
pub fn kappa4_low_t<T: Real>(model: &JunctionModel<T>, alpha: T, t: T) -> Result<T> {
    let couplings = model.couplings();
    if couplings.len() != 2 {
        return Err(Error::Unsupported(
            "fourth-order conductance needs exactly two reservoirs".into(),
        ));
    }
    if model.dim() < 2 || !(model.bohr(1, 0) > T::zero()) {
        return Err(Error::Degenerate(
            "fourth-order conductance needs a gapped ground state".into(),
        ));
    }
    let s = ground_state_sum(model, &couplings[0].1, &couplings[1].1)?;
    Ok(kappa4_prefactor(alpha, t) * s * s)
}

/// 32α²π⁵T³/15.
pub fn kappa4_prefactor<T: Real>(alpha: T, t: T) -> T {
    c::<T>(32.0) * alpha * alpha * T::PI().powi(5) * t * t * t / c(15.0)
}

fn quad_opts<T: Real>() -> QuadOptions<T> {
    QuadOptions {
        abs_tol: T::min_positive_value(),
        rel_tol: c(1e-11),
        max_intervals: 4000,
    }
}

/// 8π ∫₀^{ω_hi} ω·weight(ω)·J_r(ω)J_r̄(ω) dω with ω_hi = max(50·T_max, 10ω_c).
fn fourth_order_integral<T: Real>(
    jr: &SpectralDensity<T>,
    jrb: &SpectralDensity<T>,
    t_scale: T,
    t_max: T,
    weight: impl Fn(T) -> T,
) -> Result<T> {
    let wc = jr.omega_c.max(jrb.omega_c);
    let hi = (c::<T>(50.0) * t_max).max(c::<T>(10.0) * wc);
    let f = |w: T| {
        if w == T::zero() {
            T::zero()
        } else {
            w * weight(w) * jr.eval(w) * jrb.eval(w)
        }
    };
    let mut breaks: Vec<T> = [1.0, 4.0, 10.0, 20.0, 40.0, 80.0]
        .iter()
        .map(|&k| c::<T>(k) * t_scale)
        .collect();
    breaks.push(wc);
    let e = integrate_split(f, T::zero(), hi, &breaks, quad_opts())?;
    Ok(c::<T>(8.0) * T::PI() * e.value)
}

/// Low-temperature fourth-order current kernel 2Re K^(4)_{Ir,mmnn} (m ≠ n)
/// with the principal part neglected:
/// 8π ∫dω ω[n_r̄ − n_r] J_r J_r̄ · Σ_{k≠n} Q_{r,mn}Q_{r̄,nm}Q_{r̄,nk}Q_{r,kn}/(ω_mn ω_kn).
/// The diagonal of the returned matrix is zero.
pub fn current_kernel_4th_low_t<T: Real>(
    model: &JunctionModel<T>,
    baths: &[Reservoir<T>],
    r: &str,
) -> Result<RMatrix<T>> {
    let pairs = two_terminal(model, baths)?;
    let (ri, rb) = match pairs.iter().position(|(_, b)| b.id == r) {
        Some(i) => (i, 1 - i),
        None => return invalid(format!("unknown reservoir {r:?}")),
    };
    let (qr, bath_r) = pairs[ri];
    let (qb, bath_b) = pairs[rb];
    let spec = |b: &Reservoir<T>| {
        b.spectral().copied().ok_or_else(|| {
            Error::Unsupported(format!(
                "reservoir {}: fourth-order kernel is bosonic",
                b.id
            ))
        })
    };
    let (jr, jb) = (spec(bath_r)?, spec(bath_b)?);
    let (br, bb) = (bath_r.beta, bath_b.beta);
    let t_max = (T::one() / br).max(T::one() / bb);
    let t_min = (T::one() / br).min(T::one() / bb);
    let integral = if br == bb {
        T::zero()
    } else {
        fourth_order_integral(&jr, &jb, t_min, t_max, |w| {
            crate::special::bose_x(bb * w) - crate::special::bose_x(br * w)
        })?
    };
    coupling_sum_matrix(model, qr, qb, integral)
}

fn coupling_sum_matrix<T: Real>(
    model: &JunctionModel<T>,
    qr: &RMatrix<T>,
    qb: &RMatrix<T>,
    integral: T,
) -> Result<RMatrix<T>> {
    let d = model.dim();
    let mut out = RMatrix::zeros(d, d);
    for m in 0..d {
        for n in 0..d {
            if m == n {
                continue;
            }
            let head = qr[(m, n)] * qb[(n, m)];
            if head == T::zero() {
                continue;
            }
            let wmn = model.bohr(m, n);
            require_gap(m, n, wmn)?;
            let mut s = T::zero();
            for k in 0..d {
                if k == n {
                    continue;
                }
                let p = qb[(n, k)] * qr[(k, n)];
                if p == T::zero() {
                    continue;
                }
                let wkn = model.bohr(k, n);
                require_gap(k, n, wkn)?;
                s += p / wkn;
            }
            out[(m, n)] = integral * head * s / wmn;
        }
    }
    Ok(out)
}

/// κ4 from the quadrature kernel with ρ = |0⟩⟨0|: ∂/∂ΔT of Σ_{m≠0} 2Re K^(4)_{IR,mm00},
/// the Bose difference replaced by ∂n/∂T.
pub fn kappa4_from_kernel<T: Real>(
    model: &JunctionModel<T>,
    baths: &[Reservoir<T>],
    t: T,
) -> Result<T> {
    let [(ql, bl), (qr, br)] = two_terminal(model, baths)?;
    let spec = |b: &Reservoir<T>| {
        b.spectral().copied().ok_or_else(|| {
            Error::Unsupported(format!(
                "reservoir {}: fourth-order kernel is bosonic",
                b.id
            ))
        })
    };
    let (jl, jr) = (spec(bl)?, spec(br)?);
    let integral = fourth_order_integral(&jr, &jl, t, t, |w| dn_d_delta_t(w, t))?;
    let m = coupling_sum_matrix(model, qr, ql, integral)?;
    Ok((1..model.dim()).map(|k| m[(k, 0)]).sum())
}

/// Total conductance κ2 + κ4 at temperature `t` for two identical baths of
/// coupling `alpha`.
pub fn conductance<T: Real>(
    model: &JunctionModel<T>,
    baths: &[Reservoir<T>],
    t: T,
    mode: SecularMode<T>,
    method: Kappa2Method,
    alpha: T,
) -> Result<ConductanceResult<T>> {
    let k2 = kappa2(model, baths, t, mode, method)?;
    let k4 = kappa4_low_t(model, alpha, t)?;
    Ok(ConductanceResult {
        kappa2: k2,
        kappa4: k4,
        total: k2 + k4,
        temperature: t,
        method,
    })
}

/// Closed forms for a qubit junction.
pub mod tls {
    use super::*;

    /// Bose function n(ω) at temperature t.
    fn bose<T: Real>(w: T, t: T) -> T {
        crate::special::bose_x(w / t)
    }

    /// Heat current into R, ω γ^R γ^L (n_L − n_R) / (γ^R(1 + 2n_R) + γ^L(1 + 2n_L)).
    /// Swap the arguments for the current into L.
    pub fn current<T: Real>(omega10: T, gamma_l: T, gamma_r: T, tl: T, tr: T) -> T {
        let (nl, nr) = (bose(omega10, tl), bose(omega10, tr));
        let one = T::one();
        let two: T = c(2.0);
        omega10 * gamma_r * gamma_l * (nl - nr)
            / (gamma_r * (one + two * nr) + gamma_l * (one + two * nl))
    }

    /// γ^l = 2π J_l(ω_10) Q²_{l,01}.
    pub fn gamma<T: Real>(j: &SpectralDensity<T>, omega10: T, q01: T) -> T {
        c::<T>(2.0) * T::PI() * j.eval(omega10) * q01 * q01
    }

    /// Exact derivative of [`current`]: γ^Lγ^R/(γ^L+γ^R) · x²/(2 sinh x), x = ω_10/T.
    pub fn kappa2_gamma<T: Real>(omega10: T, gamma_l: T, gamma_r: T, t: T) -> T {
        let x = omega10 / t;
        gamma_l * gamma_r / (gamma_l + gamma_r) * x * x / (c::<T>(2.0) * x.sinh())
    }

    /// Ohmic form α η ω_10 x²/(2 sinh x) with η = 2πQ_R²Q_L²/(Q_R²+Q_L²).
    pub fn kappa2<T: Real>(omega10: T, alpha: T, eta: T, t: T) -> T {
        let x = omega10 / t;
        alpha * eta * omega10 * x * x / (c::<T>(2.0) * x.sinh())
    }

    pub fn eta<T: Real>(q_l01: T, q_r01: T) -> T {
        let (l2, r2) = (q_l01 * q_l01, q_r01 * q_r01);
        c::<T>(2.0) * T::PI() * l2 * r2 / (l2 + r2)
    }

    /// (32α²π⁵T³/15) Q_R²Q_L²/ω_10².
    pub fn kappa4<T: Real>(omega10: T, alpha: T, q_l01: T, q_r01: T, t: T) -> T {
        kappa4_prefactor(alpha, t) * q_r01 * q_r01 * q_l01 * q_l01 / (omega10 * omega10)
    }

    /// Bundle of the three closed forms for ohmic baths J ≃ αω.
    pub fn closed_forms<T: Real>(
        omega10: T,
        alpha: T,
        q_l01: T,
        q_r01: T,
        tl: T,
        tr: T,
    ) -> (T, T, T) {
        let g = |q: T| c::<T>(2.0) * T::PI() * alpha * omega10 * q * q;
        let i2 = current(omega10, g(q_l01), g(q_r01), tl, tr);
        let k2 = kappa2(omega10, alpha, eta(q_l01, q_r01), tr);
        let k4 = kappa4(omega10, alpha, q_l01, q_r01, tr);
        (i2, k2, k4)
    }
}

/// Which lead a dot current refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lead {
    Left,
    Right,
}

/// Currents into one lead of the single-level dot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DotCurrents<T: Real> {
    pub particle: T,
    pub energy: T,
    pub heat: T,
}

/// Sequential-tunneling currents into lead `r`:
/// I_p = 2γ^Lγ^R (f_r̄ − f_r) / Σ_l γ^l (1 + f_l), I_E = Δ·I_p, I_h = I_E − μ_r I_p.
pub fn dot_transport<T: Real>(
    delta: T,
    left: DotLead<T>,
    right: DotLead<T>,
    r: Lead,
) -> DotCurrents<T> {
    let (fl, fr) = (
        fermi(delta, left.mu, left.beta),
        fermi(delta, right.mu, right.beta),
    );
    let den = left.gamma * (T::one() + fl) + right.gamma * (T::one() + fr);
    let (f_r, f_rb, mu_r) = match r {
        Lead::Left => (fl, fr, left.mu),
        Lead::Right => (fr, fl, right.mu),
    };
    let particle = c::<T>(2.0) * left.gamma * right.gamma * (f_rb - f_r) / den;
    let energy = delta * particle;
    DotCurrents {
        particle,
        energy,
        heat: energy - mu_r * particle,
    }
}

/// Linear thermal conductance of the dot at μ_L = μ_R = 0:
/// κ = Δ²/(2T²) · γ^Lγ^R/(γ^L+γ^R) / ((1 + f(Δ)) cosh²(Δ/2T)).
pub fn dot_kappa2<T: Real>(delta: T, gamma_l: T, gamma_r: T, t: T) -> T {
    let f = fermi(delta, T::zero(), T::one() / t);
    let ch = (delta / (c::<T>(2.0) * t)).cosh();
    delta * delta / (c::<T>(2.0) * t * t) * gamma_l * gamma_r
        / (gamma_l + gamma_r)
        / ((T::one() + f) * ch * ch)
}

/// Heat current into R assembled from the rate solution (independent of the
/// closed form above).
pub fn dot_heat_from_rates<T: Real>(delta: T, left: DotLead<T>, right: DotLead<T>) -> Result<T> {
    let leads = [("L".to_string(), left), ("R".to_string(), right)];
    let rates = crate::redfield::fermion_dot_rates(delta, &leads)?;
    let rho = full_secular_steady(&rates.total)?.populations();
    let g = &rates.per_bath[1];
    // Electrons entering R: transitions σ → 0 through R.
    let into_r = (1..3).map(|s| g.get(0, s) * rho[s]).sum::<T>()
        - (1..3).map(|s| g.get(s, 0) * rho[0]).sum::<T>();
    Ok((delta - right.mu) * into_r)
}

/// Gibbs populations for checks at equal temperatures.
pub fn gibbs<T: Real>(model: &JunctionModel<T>, t: T) -> Vec<T> {
    let e0 = model.omega()[0];
    let w: Vec<T> = model
        .omega()
        .iter()
        .map(|&e| (-(e - e0) / t).exp())
        .collect();
    let z: T = w.iter().copied().sum();
    w.into_iter().map(|x| x / z).collect()
}

/// ∂Γ^l/∂T_l: the rates of one bath with n replaced by ∂n/∂T.
pub fn rate_temperature_derivative<T: Real>(
    model: &JunctionModel<T>,
    q: &RMatrix<T>,
    j: &SpectralDensity<T>,
    t: T,
) -> RateMatrix<T> {
    let d = model.dim();
    let two_pi = c::<T>(2.0) * T::PI();
    let mut g = RMatrix::zeros(d, d);
    for n in 0..d {
        for m in 0..d {
            if n != m {
                let w = model.bohr(n, m);
                g[(n, m)] = two_pi * q[(n, m)] * q[(n, m)] * j.eval(w) * dn_dt_signed(w, t);
            }
        }
    }
    RateMatrix::from_off_diagonal(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_junction;

    fn sx(q: f64) -> RMatrix<f64> {
        RMatrix::from_rows(&[vec![0.0, q], vec![q, 0.0]]).unwrap()
    }

    fn qubit(ql: f64, qr: f64) -> JunctionModel<f64> {
        build_junction(
            vec![0.0, 1.0],
            vec![("L".into(), sx(ql)), ("R".into(), sx(qr))],
        )
        .unwrap()
    }

    fn baths(wc: f64, tl: f64, tr: f64) -> Vec<Reservoir<f64>> {
        let j = SpectralDensity::ohmic_drude(1e-3, wc).unwrap();
        vec![
            Reservoir::bosonic("L", 1.0 / tl, j).unwrap(),
            Reservoir::bosonic("R", 1.0 / tr, j).unwrap(),
        ]
    }

    #[test]
    fn qubit_current_matches_closed_form() {
        let m = qubit(0.8, 0.5);
        let j = SpectralDensity::ohmic_drude(1e-3, 5.0).unwrap();
        let (gl, gr) = (tls::gamma(&j, 1.0, 0.8), tls::gamma(&j, 1.0, 0.5));
        for (tl, tr) in [(0.3, 0.2), (1.0, 2.0), (0.5, 0.5)] {
            let b = baths(5.0, tl, tr);
            let i = heat_currents_2nd(&m, &b, SecularMode::Full).unwrap();
            let expect = tls::current(1.0, gl, gr, tl, tr);
            let scale = tls::current(1.0, gl, gr, 1.01 * tr, tr).abs();
            let got = i.get("R").unwrap();
            assert!(
                (got - expect).abs() <= 1e-12 * expect.abs().max(scale),
                "{got} vs {expect}"
            );
            assert!(i.is_conserved(1e-12));
        }
    }

    #[test]
    fn analytic_and_finite_difference_conductance_agree() {
        let m = qubit(0.8, 0.5);
        let b = baths(5.0, 0.4, 0.4);
        let a = kappa2(&m, &b, 0.4, SecularMode::Full, Kappa2Method::Analytic).unwrap();
        let f = kappa2(
            &m,
            &b,
            0.4,
            SecularMode::Full,
            Kappa2Method::FiniteDifference,
        )
        .unwrap();
        assert!((a / f - 1.0).abs() < 1e-6);
        let j = SpectralDensity::ohmic_drude(1e-3, 5.0).unwrap();
        let g = tls::kappa2_gamma(1.0, tls::gamma(&j, 1.0, 0.8), tls::gamma(&j, 1.0, 0.5), 0.4);
        assert!((a / g - 1.0).abs() < 1e-10);
    }

    #[test]
    fn eta_for_symmetric_couplings() {
        let q: f64 = 0.7;
        assert!((tls::eta(q, q) - std::f64::consts::PI * q * q).abs() < 1e-15);
    }

    #[test]
    fn kappa4_scaling_and_tls_reduction() {
        let m = qubit(0.8, 0.5);
        let k1 = kappa4_low_t(&m, 1e-3, 0.01).unwrap();
        let k2 = kappa4_low_t(&m, 1e-3, 0.02).unwrap();
        assert!((k2 / k1 - 8.0).abs() < 1e-12);
        let t = tls::kappa4(1.0, 1e-3, 0.8, 0.5, 0.01);
        assert!((k1 / t - 1.0).abs() < 1e-14);
    }

    #[test]
    fn quadrature_kernel_matches_closed_form_for_wide_cutoff() {
        let m = qubit(0.8, 0.5);
        let t = 0.01;
        let b = baths(1e6, t, t);
        let k = kappa4_from_kernel(&m, &b, t).unwrap();
        let closed = kappa4_low_t(&m, 1e-3, t).unwrap();
        assert!((k / closed - 1.0).abs() < 1e-10, "{k} vs {closed}");
    }

    #[test]
    fn fourth_order_kernel_vanishes_at_equal_temperature() {
        let m = qubit(0.8, 0.5);
        let k = current_kernel_4th_low_t(&m, &baths(5.0, 0.1, 0.1), "R").unwrap();
        assert_eq!(k.max_abs(), 0.0);
        let k = current_kernel_4th_low_t(&m, &baths(5.0, 0.02, 0.01), "R").unwrap();
        assert!(k[(1, 0)] > 0.0);
    }

    #[test]
    fn dot_currents() {
        let l = DotLead {
            gamma: 0.01f64,
            beta: 2.0,
            mu: 0.0,
        };
        let zero = dot_transport(0.5, l, l, Lead::Right);
        assert_eq!(zero.particle, 0.0);
        let r = DotLead {
            gamma: 0.02,
            beta: 3.0,
            mu: 0.1,
        };
        let into_r = dot_transport(0.5, l, r, Lead::Right);
        let direct = dot_heat_from_rates(0.5, l, r).unwrap();
        assert!((into_r.heat - direct).abs() < 1e-15);
        assert!((into_r.heat - (into_r.energy - 0.1 * into_r.particle)).abs() < 1e-18);
    }

    #[test]
    fn dot_conductance_high_temperature_limit() {
        let (d, gl, gr): (f64, f64, f64) = (0.3, 0.01, 0.03);
        let t = 1e4;
        let k = dot_kappa2(d, gl, gr, t);
        let lim = d * d * gl * gr / (3.0 * t * t * (gl + gr));
        assert!((k / lim - 1.0).abs() < 1e-4);
    }
}
