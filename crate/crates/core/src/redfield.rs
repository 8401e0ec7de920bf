//! Second-order kernel tensor, population rates and the second-order current
//! kernel.
//!
//! Superoperators act on the row-major vectorization of ρ: the element ρ_nm
//! sits at index n·N + m, so K_{nmn'm'} is the matrix entry
//! (n·N + m, n'·N + m').

use num_complex::Complex;

use crate::bath::{fermi, j_times_n, w_rate, wbar_rate};
use crate::error::{invalid, Error, Result};
use crate::linalg::{CMatrix, RMatrix};
use crate::model::{JunctionModel, Reservoir, Statistics};
use crate::real::{c, Real};

/// Rank-4 kernel K_{nmn'm'} stored as an N²×N² superoperator.
#[derive(Clone, Debug, PartialEq)]
pub struct RedfieldTensor<T: Real> {
    dim: usize,
    k: CMatrix<T>,
}

impl<T: Real> RedfieldTensor<T> {
    pub fn from_superoperator(dim: usize, k: CMatrix<T>) -> Result<Self> {
        if k.rows() != dim * dim || k.cols() != dim * dim {
            return invalid(format!(
                "superoperator is {}x{}, expected {}^2",
                k.rows(),
                k.cols(),
                dim
            ));
        }
        Ok(Self { dim, k })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, n: usize, m: usize, np: usize, mp: usize) -> Complex<T> {
        let d = self.dim;
        self.k[(n * d + m, np * d + mp)]
    }

    pub fn superoperator(&self) -> &CMatrix<T> {
        &self.k
    }

    pub fn max_abs(&self) -> T {
        self.k.max_abs()
    }

    /// max over (n', m') of |Σ_n K_{nnn'm'}|.
    pub fn sum_rule_residual(&self) -> T {
        let d = self.dim;
        let mut worst = T::zero();
        for np in 0..d {
            for mp in 0..d {
                let s: Complex<T> = (0..d).map(|n| self.get(n, n, np, mp)).sum();
                worst = worst.max(s.norm());
            }
        }
        worst
    }

    /// max |K_{nmn'm'} − conj(K_{mnm'n'})|.
    pub fn hermiticity_residual(&self) -> T {
        let d = self.dim;
        let mut worst = T::zero();
        for n in 0..d {
            for m in 0..d {
                for np in 0..d {
                    for mp in 0..d {
                        let r = self.get(n, m, np, mp) - self.get(m, n, mp, np).conj();
                        worst = worst.max(r.norm());
                    }
                }
            }
        }
        worst
    }

    /// Real population block Γ_{nm} = Re K_{nnmm}, diagonal rebuilt from the
    /// column sums.
    pub fn population_rates(&self) -> RateMatrix<T> {
        let d = self.dim;
        RateMatrix::from_off_diagonal(RMatrix::from_fn(d, d, |n, m| {
            if n == m {
                T::zero()
            } else {
                self.get(n, n, m, m).re
            }
        }))
    }

    /// (Kρ) for a density matrix ρ.
    pub fn apply(&self, rho: &CMatrix<T>) -> CMatrix<T> {
        let d = self.dim;
        let v = self.k.mul_vec(rho.as_slice());
        CMatrix::from_fn(d, d, |n, m| v[n * d + m])
    }
}

/// Transition rates Γ_{nm} into n from m; Γ_{nn} = −Σ_{m≠n} Γ_{mn}.
#[derive(Clone, Debug, PartialEq)]
pub struct RateMatrix<T: Real> {
    gamma: RMatrix<T>,
}

impl<T: Real> RateMatrix<T> {
    /// Uses the off-diagonal part of `g` and fills the diagonal.
    pub fn from_off_diagonal(mut g: RMatrix<T>) -> Self {
        let d = g.rows();
        for m in 0..d {
            g[(m, m)] = T::zero();
            let out: T = (0..d).filter(|&n| n != m).map(|n| g[(n, m)]).sum();
            g[(m, m)] = -out;
        }
        Self { gamma: g }
    }

    pub fn dim(&self) -> usize {
        self.gamma.rows()
    }

    #[inline]
    pub fn get(&self, n: usize, m: usize) -> T {
        self.gamma[(n, m)]
    }

    pub fn matrix(&self) -> &RMatrix<T> {
        &self.gamma
    }

    /// Largest off-diagonal rate.
    pub fn max_rate(&self) -> T {
        let d = self.dim();
        let mut g = T::zero();
        for n in 0..d {
            for m in 0..d {
                if n != m {
                    g = g.max(self.gamma[(n, m)].abs());
                }
            }
        }
        g
    }

    /// Most negative off-diagonal entry, or zero.
    pub fn min_off_diagonal(&self) -> T {
        let d = self.dim();
        let mut g = T::zero();
        for n in 0..d {
            for m in 0..d {
                if n != m {
                    g = g.min(self.gamma[(n, m)]);
                }
            }
        }
        g
    }

    pub fn column_sum_residual(&self) -> T {
        let d = self.dim();
        (0..d)
            .map(|m| (0..d).map(|n| self.gamma[(n, m)]).sum::<T>().abs())
            .fold(T::zero(), T::max)
    }

    pub fn sum<'a>(parts: impl IntoIterator<Item = &'a RateMatrix<T>>) -> Option<Self> {
        let mut it = parts.into_iter();
        let first = it.next()?.gamma.clone();
        let g = it.fold(first, |acc, r| &acc + &r.gamma);
        Some(Self { gamma: g })
    }
}

/// Rates resolved per reservoir, plus their total.
#[derive(Clone, Debug, PartialEq)]
pub struct BathRates<T: Real> {
    pub ids: Vec<String>,
    pub per_bath: Vec<RateMatrix<T>>,
    pub total: RateMatrix<T>,
}

impl<T: Real> BathRates<T> {
    fn new(ids: Vec<String>, per_bath: Vec<RateMatrix<T>>) -> Result<Self> {
        let total =
            RateMatrix::sum(&per_bath).ok_or_else(|| Error::Validation("no reservoirs".into()))?;
        Ok(Self {
            ids,
            per_bath,
            total,
        })
    }

    pub fn bath(&self, id: &str) -> Option<&RateMatrix<T>> {
        self.ids
            .iter()
            .position(|k| k == id)
            .map(|i| &self.per_bath[i])
    }
}

/// Pairs each coupling of the model with the reservoir of the same id.
pub fn pair_baths<'a, T: Real>(
    model: &'a JunctionModel<T>,
    baths: &'a [Reservoir<T>],
) -> Result<Vec<(&'a RMatrix<T>, &'a Reservoir<T>)>> {
    for b in baths {
        b.validate()?;
        if model.coupling(&b.id).is_none() {
            return invalid(format!(
                "reservoir {:?} has no coupling operator in the model",
                b.id
            ));
        }
    }
    model
        .couplings()
        .iter()
        .map(|(id, q)| match baths.iter().find(|b| &b.id == id) {
            Some(b) => Ok((q, b)),
            None => invalid(format!("coupling {id:?} has no matching reservoir")),
        })
        .collect()
}

fn require_bose<T: Real>(b: &Reservoir<T>) -> Result<()> {
    if b.statistics() != Statistics::Bose {
        return Err(Error::Unsupported(format!(
            "reservoir {}: the bosonic kernel needs Bose statistics",
            b.id
        )));
    }
    Ok(())
}

/// Table W_l(ω_km) for every (k, m).
fn w_table<T: Real>(
    model: &JunctionModel<T>,
    l: usize,
    w: &mut impl FnMut(usize, T) -> Result<Complex<T>>,
) -> Result<CMatrix<T>> {
    let d = model.dim();
    let mut out = CMatrix::zeros(d, d);
    for k in 0..d {
        for m in 0..d {
            out[(k, m)] = w(l, model.bohr(k, m))?;
        }
    }
    Ok(out)
}

/// Bosonic kernel with rates supplied by `w(l, ω)` for the l-th coupling of
/// the model:
///
/// K_{nmn'm'} = −Σ_l { Σ_k [Q_nk Q_kn' W_km' δ_m'm + Q_m'k Q_km W*_kn' δ_n'n]
///               − Q_nn' Q_m'm (W_nm' + W*_mn') }.
pub fn build_k2_with<T: Real>(
    model: &JunctionModel<T>,
    mut w: impl FnMut(usize, T) -> Result<Complex<T>>,
) -> Result<RedfieldTensor<T>> {
    let d = model.dim();
    let mut k = CMatrix::zeros(d * d, d * d);
    for (l, (_, q)) in model.couplings().iter().enumerate() {
        let wt = w_table(model, l, &mut w)?;
        // (Q W)_{n, m'} pieces: A_{n n'; m'} = Σ_k Q_nk Q_kn' W_km'.
        for n in 0..d {
            for m in 0..d {
                for np in 0..d {
                    for mp in 0..d {
                        let mut acc = Complex::new(T::zero(), T::zero());
                        if mp == m {
                            for kk in 0..d {
                                acc += wt[(kk, mp)] * (q[(n, kk)] * q[(kk, np)]);
                            }
                        }
                        if np == n {
                            for kk in 0..d {
                                acc += wt[(kk, np)].conj() * (q[(mp, kk)] * q[(kk, m)]);
                            }
                        }
                        acc -= (wt[(n, mp)] + wt[(m, np)].conj()) * (q[(n, np)] * q[(mp, m)]);
                        k[(n * d + m, np * d + mp)] -= acc;
                    }
                }
            }
        }
    }
    RedfieldTensor::from_superoperator(d, k)
}

/// Bosonic second-order kernel at λ → 0⁺ from the continuum rates W.
pub fn build_k2_boson<T: Real>(
    model: &JunctionModel<T>,
    baths: &[Reservoir<T>],
) -> Result<RedfieldTensor<T>> {
    let pairs = pair_baths(model, baths)?;
    for (_, b) in &pairs {
        require_bose(b)?;
    }
    build_k2_with(model, |l, w| w_rate(w, pairs[l].1))
}

fn degeneracy_scale<T: Real>(model: &JunctionModel<T>) -> T {
    c::<T>(1e-12) * model.bandwidth().max(T::one())
}

/// Population rates Γ^l_{nm} = 2π J_l(ω_nm) Q²_{l,nm} n_l(ω_nm) with signed
/// frequencies (emission for ω_nm < 0).
pub fn gamma_rates<T: Real>(
    model: &JunctionModel<T>,
    baths: &[Reservoir<T>],
) -> Result<BathRates<T>> {
    let pairs = pair_baths(model, baths)?;
    let d = model.dim();
    let tol = degeneracy_scale(model);
    let two_pi = c::<T>(2.0) * T::PI();
    let mut ids = Vec::with_capacity(pairs.len());
    let mut per_bath = Vec::with_capacity(pairs.len());
    for (q, b) in pairs {
        require_bose(b)?;
        let j = b.spectral().expect("bosonic reservoir");
        let mut g = RMatrix::zeros(d, d);
        for n in 0..d {
            for m in 0..d {
                if n == m || q[(n, m)] == T::zero() {
                    continue;
                }
                let w = model.bohr(n, m);
                if w.abs() <= tol {
                    return Err(Error::Degenerate(format!(
                        "levels {n} and {m} are degenerate and coupled by {}; use the partial-secular solver",
                        b.id
                    )));
                }
                g[(n, m)] = two_pi * q[(n, m)] * q[(n, m)] * j_times_n(j, w, b.beta);
            }
        }
        ids.push(b.id.clone());
        per_bath.push(RateMatrix::from_off_diagonal(g));
    }
    BathRates::new(ids, per_bath)
}

/// Second-order heat-current kernel for reservoir `r`,
/// K_{Ir,nmn'm'} = −[Σ_k Q_nk Q_kn' W̄_km' δ_m'm + Q_n'n Q_mm' W̄*_mn'].
#[derive(Clone, Debug, PartialEq)]
pub struct CurrentKernel<T: Real> {
    dim: usize,
    k: CMatrix<T>,
}

impl<T: Real> CurrentKernel<T> {
    #[inline]
    pub fn get(&self, n: usize, m: usize, np: usize, mp: usize) -> Complex<T> {
        let d = self.dim;
        self.k[(n * d + m, np * d + mp)]
    }

    pub fn superoperator(&self) -> &CMatrix<T> {
        &self.k
    }

    /// I_r = Re Σ_n Σ_{n'm'} K_{Ir,nnn'm'} ρ_{n'm'}.
    pub fn current(&self, rho: &CMatrix<T>) -> T {
        self.current_with_gross(rho).0
    }

    /// The current and the sum of the moduli of its terms.
    pub fn current_with_gross(&self, rho: &CMatrix<T>) -> (T, T) {
        let d = self.dim;
        let mut acc = Complex::new(T::zero(), T::zero());
        let mut gross = T::zero();
        for n in 0..d {
            for np in 0..d {
                for mp in 0..d {
                    let term = self.get(n, n, np, mp) * rho[(np, mp)];
                    acc += term;
                    gross += term.norm();
                }
            }
        }
        (acc.re, gross)
    }
}

/// Current kernel with W̄ supplied by `wbar(ω)` for the chosen coupling.
pub fn build_current_kernel_with<T: Real>(
    model: &JunctionModel<T>,
    r: &str,
    mut wbar: impl FnMut(T) -> Result<Complex<T>>,
) -> Result<CurrentKernel<T>> {
    let q = model
        .coupling(r)
        .ok_or_else(|| Error::Validation(format!("unknown reservoir {r:?}")))?;
    let d = model.dim();
    let mut wt = CMatrix::zeros(d, d);
    for a in 0..d {
        for b in 0..d {
            wt[(a, b)] = wbar(model.bohr(a, b))?;
        }
    }
    let mut k = CMatrix::zeros(d * d, d * d);
    for n in 0..d {
        for m in 0..d {
            for np in 0..d {
                for mp in 0..d {
                    let mut acc = wt[(m, np)].conj() * (q[(np, n)] * q[(m, mp)]);
                    if mp == m {
                        for kk in 0..d {
                            acc += wt[(kk, mp)] * (q[(n, kk)] * q[(kk, np)]);
                        }
                    }
                    k[(n * d + m, np * d + mp)] = -acc;
                }
            }
        }
    }
    Ok(CurrentKernel { dim: d, k })
}

/// Bosonic second-order heat-current kernel for reservoir `r`.
pub fn build_current_kernel_2nd<T: Real>(
    model: &JunctionModel<T>,
    baths: &[Reservoir<T>],
    r: &str,
) -> Result<CurrentKernel<T>> {
    let pairs = pair_baths(model, baths)?;
    let bath = pairs
        .iter()
        .map(|(_, b)| *b)
        .find(|b| b.id == r)
        .ok_or_else(|| Error::Validation(format!("unknown reservoir {r:?}")))?;
    require_bose(bath)?;
    build_current_kernel_with(model, r, |w| wbar_rate(w, bath))
}

/// Wide-band lead seen by the single-level dot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DotLead<T: Real> {
    pub gamma: T,
    pub beta: T,
    pub mu: T,
}

impl<T: Real> DotLead<T> {
    pub fn from_reservoir(r: &Reservoir<T>) -> Result<Self> {
        match r.coupling {
            crate::model::Coupling::Fermion(p) => Ok(Self {
                gamma: p.gamma(),
                beta: r.beta,
                mu: r.mu,
            }),
            crate::model::Coupling::Boson(_) => Err(Error::Unsupported(format!(
                "reservoir {}: dot leads must be fermionic",
                r.id
            ))),
        }
    }

    pub fn occupation(&self, delta: T) -> T {
        fermi(delta, self.mu, self.beta)
    }
}

/// Rates of the strongly interacting dot over the states {0, ↑, ↓}:
/// Γ^l_{σ0} = γ^l f_l(Δ), Γ^l_{0σ} = γ^l (1 − f_l(Δ)), no spin flips.
pub fn fermion_dot_rates<T: Real>(
    delta: T,
    leads: &[(String, DotLead<T>)],
) -> Result<BathRates<T>> {
    let mut ids = Vec::with_capacity(leads.len());
    let mut per_bath = Vec::with_capacity(leads.len());
    for (id, lead) in leads {
        if !(lead.gamma >= T::zero()) {
            return invalid(format!("lead {id}: gamma must be non-negative"));
        }
        if !(lead.beta > T::zero()) {
            return invalid(format!("lead {id}: beta must be positive"));
        }
        let f = lead.occupation(delta);
        let mut g = RMatrix::zeros(3, 3);
        for s in 1..3 {
            g[(s, 0)] = lead.gamma * f;
            g[(0, s)] = lead.gamma * (T::one() - f);
        }
        ids.push(id.clone());
        per_bath.push(RateMatrix::from_off_diagonal(g));
    }
    BathRates::new(ids, per_bath)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_junction, SpectralDensity};
    use std::f64::consts::PI;

    fn drude() -> SpectralDensity<f64> {
        SpectralDensity::ohmic_drude(1e-3, 5.0).unwrap()
    }

    fn tls(ql: f64, qr: f64) -> JunctionModel<f64> {
        let q = |x: f64| RMatrix::from_rows(&[vec![0.0, x], vec![x, 0.0]]).unwrap();
        build_junction(
            vec![0.0, 1.0],
            vec![("L".into(), q(ql)), ("R".into(), q(qr))],
        )
        .unwrap()
    }

    fn baths(bl: f64, br: f64) -> Vec<Reservoir<f64>> {
        vec![
            Reservoir::bosonic("L", bl, drude()).unwrap(),
            Reservoir::bosonic("R", br, drude()).unwrap(),
        ]
    }

    #[test]
    fn zero_coupling_gives_zero_kernel() {
        let k = build_k2_boson(&tls(0.0, 0.0), &baths(2.0, 3.0)).unwrap();
        assert_eq!(k.max_abs(), 0.0);
    }

    #[test]
    fn tls_emission_entry() {
        let m = tls(1.0, 0.0);
        let b = baths(2.0, 3.0);
        let k = build_k2_boson(&m, &b).unwrap();
        let n = 1.0 / (2f64.exp() - 1.0);
        let expect = 2.0 * PI * drude().eval(1.0) * (n + 1.0);
        assert!((k.get(0, 0, 1, 1).re / expect - 1.0).abs() < 1e-12);
        assert!(k.get(0, 0, 1, 1).im.abs() < 1e-15);
    }

    #[test]
    fn tls_rates_match_gamma_form() {
        let m = tls(0.7, 0.4);
        let r = gamma_rates(&m, &baths(2.0, 3.0)).unwrap();
        let g = 2.0 * PI * drude().eval(1.0) * 0.49;
        let n = 1.0 / (2f64.exp() - 1.0);
        let l = r.bath("L").unwrap();
        assert!((l.get(0, 1) / (g * (n + 1.0)) - 1.0).abs() < 1e-12);
        assert!((l.get(1, 0) / (g * n) - 1.0).abs() < 1e-12);
        assert!(r.total.column_sum_residual() < 1e-18);
    }

    #[test]
    fn cold_limit_blocks_absorption() {
        let r = gamma_rates(&tls(1.0, 1.0), &baths(800.0, 800.0)).unwrap();
        assert_eq!(r.total.get(1, 0), 0.0);
        assert!(r.total.get(0, 1) > 0.0);
    }

    #[test]
    fn degenerate_coupled_pair_is_rejected() {
        let q = RMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let m = build_junction(vec![0.5, 0.5], vec![("L".into(), q)]).unwrap();
        let b = vec![Reservoir::bosonic("L", 1.0, drude()).unwrap()];
        assert!(matches!(gamma_rates(&m, &b), Err(Error::Degenerate(_))));
    }

    #[test]
    fn fermi_reservoir_is_rejected() {
        let m = tls(1.0, 1.0);
        let lead = crate::model::LeadParams {
            density_of_states: 1.0,
            tunneling_sq: 0.01,
            bandwidth: 100.0,
        };
        let b = vec![
            Reservoir::fermionic("L", 1.0, 0.0, lead).unwrap(),
            Reservoir::bosonic("R", 1.0, drude()).unwrap(),
        ];
        assert!(matches!(build_k2_boson(&m, &b), Err(Error::Unsupported(_))));
    }

    #[test]
    fn unmatched_reservoir_ids_are_rejected() {
        let m = tls(1.0, 1.0);
        let b = vec![Reservoir::bosonic("L", 1.0, drude()).unwrap()];
        assert!(build_k2_boson(&m, &b).is_err());
        assert!(build_current_kernel_2nd(&m, &baths(1.0, 1.0), "X").is_err());
    }

    #[test]
    fn dot_rates_examples() {
        let lead = DotLead {
            gamma: 0.02f64,
            beta: 3.0,
            mu: 0.4,
        };
        let r = fermion_dot_rates(0.4, &[("L".to_string(), lead)]).unwrap();
        assert!((r.total.get(1, 0) - 0.01).abs() < 1e-16);
        assert!((r.total.get(0, 2) - 0.01).abs() < 1e-16);
        assert_eq!(r.total.get(1, 2), 0.0);
        let cold = DotLead {
            gamma: 0.02,
            beta: 1e4,
            mu: 0.0,
        };
        let r = fermion_dot_rates(0.4, &[("L".to_string(), cold)]).unwrap();
        assert_eq!(r.total.get(1, 0), 0.0);
        assert_eq!(r.total.get(0, 1), 0.02);
        assert!(r.total.column_sum_residual() < 1e-18);
    }
}
