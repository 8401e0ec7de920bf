//! Exact order-by-order kernel from the composite system ⊗ modes Hilbert
//! space, built from operators rather than superoperator matrices.

use num_complex::Complex;

use super::eval::{DiscreteSystem, Transfer};
use crate::error::{invalid, Error, Result};
use crate::linalg::CMatrix;
use crate::model::Statistics;
use crate::C64;

/// Largest composite Hilbert-space dimension the oracle accepts.
pub const DIMENSION_CAP: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    /// Fock levels kept per bosonic mode.
    pub boson_levels: usize,
    /// Insert the projector Q = 1 − P between interaction vertices. Without
    /// it the result also contains reducible contributions.
    pub projected: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            boson_levels: 7,
            projected: true,
        }
    }
}

struct Composite {
    ns: usize,
    nb: usize,
    energy: Vec<f64>,
    hv: CMatrix<f64>,
    rho_b: CMatrix<f64>,
    // composite C_k and D_k^± per mode
    c: Vec<CMatrix<f64>>,
    dm: Vec<CMatrix<f64>>,
    dp: Vec<CMatrix<f64>>,
}

fn real(x: f64) -> C64 {
    Complex::new(x, 0.0)
}

impl Composite {
    fn new(sys: &DiscreteSystem, opts: OracleOptions) -> Result<Self> {
        let fermi = sys.statistics() == Statistics::Fermi;
        let levels = if fermi { 2 } else { opts.boson_levels };
        if levels < 2 {
            return invalid("need at least two levels per mode");
        }
        let ns = sys.dim();
        let nmodes = sys.modes().len();
        let nb = (0..nmodes)
            .try_fold(1usize, |acc, _| acc.checked_mul(levels))
            .unwrap_or(usize::MAX);
        if ns.saturating_mul(nb) > DIMENSION_CAP {
            return Err(Error::Unsupported(format!(
                "composite dimension {ns}x{levels}^{nmodes} exceeds {DIMENSION_CAP}"
            )));
        }

        // single-mode operators: annihilator, thermal state, parity
        let mut ann = CMatrix::zeros(levels, levels);
        for k in 1..levels {
            ann[(k - 1, k)] = real(if fermi { 1.0 } else { (k as f64).sqrt() });
        }
        let parity = CMatrix::diagonal(
            &(0..levels)
                .map(|k| real(if k % 2 == 0 { 1.0 } else { -1.0 }))
                .collect::<Vec<_>>(),
        );
        let id_mode = CMatrix::identity(levels);

        let mut rho_b = CMatrix::identity(1);
        let mut bath_energy = vec![0.0];
        for m in sys.modes() {
            let w: Vec<f64> = (0..levels)
                .map(|k| (-m.beta * (m.omega - m.mu) * k as f64).exp())
                .collect();
            let z: f64 = w.iter().sum();
            let rho = CMatrix::diagonal(&w.iter().map(|&x| real(x / z)).collect::<Vec<_>>());
            rho_b = rho_b.kron(&rho);
            bath_energy = bath_energy
                .iter()
                .flat_map(|&e| (0..levels).map(move |k| e + m.omega * k as f64))
                .collect();
        }

        let sys_parity = CMatrix::diagonal(
            &sys.odd()
                .iter()
                .map(|&o| real(if o { -1.0 } else { 1.0 }))
                .collect::<Vec<_>>(),
        );
        let id_s = CMatrix::identity(ns);
        let id_b = CMatrix::identity(nb);
        let mut c = Vec::with_capacity(nmodes);
        for k in 0..nmodes {
            let mut op = if fermi {
                sys_parity.clone()
            } else {
                id_s.clone()
            };
            for j in 0..nmodes {
                let factor = if j == k {
                    &ann
                } else if fermi && j < k {
                    &parity
                } else {
                    &id_mode
                };
                op = op.kron(factor);
            }
            c.push(op);
        }
        let dm: Vec<_> = sys.modes().iter().map(|m| m.d_minus.kron(&id_b)).collect();
        let dp: Vec<_> = sys.modes().iter().map(|m| m.d_plus.kron(&id_b)).collect();

        // H_V = Σ_k Σ_p [p;1] C^p D^{−p}
        let n = ns * nb;
        let mut hv = CMatrix::zeros(n, n);
        for k in 0..nmodes {
            let up = c[k].adjoint().matmul(&dm[k])?;
            let down = c[k].matmul(&dp[k])?;
            hv = &hv + &up;
            hv = if fermi { &hv - &down } else { &hv + &down };
        }
        let energy = (0..n)
            .map(|a| sys.energies()[a / nb] + bath_energy[a % nb])
            .collect();
        Ok(Self {
            ns,
            nb,
            energy,
            hv,
            rho_b,
            c,
            dm,
            dp,
        })
    }

    fn liouvillian(&self, x: &CMatrix<f64>) -> CMatrix<f64> {
        let comm = &(&self.hv * x) - &(x * &self.hv);
        comm.scaled(Complex::new(0.0, -1.0))
    }

    fn propagate(&self, lambda: C64, x: &mut CMatrix<f64>) {
        let n = x.rows();
        for a in 0..n {
            for b in 0..n {
                x[(a, b)] /= lambda + Complex::new(0.0, self.energy[a] - self.energy[b]);
            }
        }
    }

    fn trace_bath(&self, x: &CMatrix<f64>) -> CMatrix<f64> {
        let nb = self.nb;
        CMatrix::from_fn(self.ns, self.ns, |s, t| {
            (0..nb).map(|b| x[(s * nb + b, t * nb + b)]).sum()
        })
    }

    fn complement(&self, x: &CMatrix<f64>) -> CMatrix<f64> {
        x - &self.trace_bath(x).kron(&self.rho_b)
    }

    /// Tr_B{V_last G0 (Q L_V Q G0)^{order−2} L_V (ρ ⊗ ρ_B)} for ρ = |n'⟩⟨m'|,
    /// assembled column by column.
    fn kernel(
        &self,
        lambda: C64,
        order: usize,
        projected: bool,
        last: impl Fn(&CMatrix<f64>) -> CMatrix<f64>,
    ) -> Result<CMatrix<f64>> {
        if order < 2 {
            return Err(Error::Unsupported(format!(
                "kernel order must be at least 2, got {order}"
            )));
        }
        if !(lambda.re > 0.0) || !lambda.im.is_finite() {
            return Err(Error::Domain(format!(
                "Laplace variable needs Re λ > 0, got {lambda}"
            )));
        }
        let ns = self.ns;
        let mut out = CMatrix::zeros(ns * ns, ns * ns);
        for np in 0..ns {
            for mp in 0..ns {
                let mut rho = CMatrix::zeros(ns, ns);
                rho[(np, mp)] = real(1.0);
                let mut y = self.liouvillian(&rho.kron(&self.rho_b));
                for _ in 0..order - 2 {
                    self.propagate(lambda, &mut y);
                    if projected {
                        y = self.complement(&y);
                    }
                    y = self.liouvillian(&y);
                    if projected {
                        y = self.complement(&y);
                    }
                }
                self.propagate(lambda, &mut y);
                let r = self.trace_bath(&last(&y));
                for n in 0..ns {
                    for m in 0..ns {
                        out[(n * ns + m, np * ns + mp)] = r[(n, m)];
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Exact kernel contribution of the given order in the coupling at Laplace
/// variable λ, as an N²×N² superoperator.
pub fn exact_kernel_order(
    sys: &DiscreteSystem,
    lambda: C64,
    order: usize,
    opts: OracleOptions,
) -> Result<CMatrix<f64>> {
    let comp = Composite::new(sys, opts)?;
    comp.kernel(lambda, order, opts.projected, |y| comp.liouvillian(y))
}

/// Exact current-kernel contribution for reservoir `r`: the last interaction
/// is replaced by the current operator
/// Î_r = −i Σ_{k∈r} ζ_k Σ_p [1;p] C^p D^{−p}.
pub fn exact_current_kernel_order(
    sys: &DiscreteSystem,
    lambda: C64,
    order: usize,
    r: usize,
    transfer: Transfer,
    opts: OracleOptions,
) -> Result<CMatrix<f64>> {
    if r >= sys.n_baths() {
        return invalid(format!("reservoir {r} out of range"));
    }
    let comp = Composite::new(sys, opts)?;
    let fermi = sys.statistics() == Statistics::Fermi;
    let n = comp.ns * comp.nb;
    let mut current = CMatrix::zeros(n, n);
    for (k, m) in sys.modes().iter().enumerate() {
        if m.bath != r {
            continue;
        }
        let up = comp.c[k].adjoint().matmul(&comp.dm[k])?;
        let down = comp.c[k].matmul(&comp.dp[k])?;
        let term = if fermi { &up + &down } else { &up - &down };
        current = &current + &term.scaled(Complex::new(0.0, -transfer.zeta(m)));
    }
    comp.kernel(lambda, order, opts.projected, |y| &current * y)
}
