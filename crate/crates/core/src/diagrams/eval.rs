//! Kernel evaluation from diagram terms for a system coupled to discrete
//! reservoir modes at finite Laplace variable λ.

use num_complex::Complex;

use super::{generate_kernel_terms, DiagramTerm};
use crate::bath::occupation;
use crate::error::{invalid, Error, Result};
use crate::linalg::CMatrix;
use crate::model::{JunctionModel, Statistics};
use crate::sign::Sign;
use crate::C64;

/// Transported quantity of a current kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transfer {
    /// Energy measured from the chemical potential, ζ = ω − μ.
    Heat,
    /// Particle number, ζ = 1.
    Particle,
}

impl Transfer {
    pub(crate) fn zeta(self, m: &Mode) -> f64 {
        match self {
            Transfer::Heat => m.omega - m.mu,
            Transfer::Particle => 1.0,
        }
    }
}

/// Bosonic mode b of frequency ω coupled as λ Q (b + b†) through coupling
/// `coupling` of the junction model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BosonMode {
    pub coupling: usize,
    pub omega: f64,
    pub beta: f64,
    pub lambda: f64,
}

/// Fermionic mode c of energy ω in lead `lead`, coupled as c† D⁻ + D⁺ c with
/// D⁺ = (D⁻)†.
#[derive(Clone, Debug, PartialEq)]
pub struct FermionMode {
    pub lead: usize,
    pub omega: f64,
    pub beta: f64,
    pub mu: f64,
    pub d_minus: CMatrix<f64>,
}

/// A reservoir mode with its system coupling operators D^±.
#[derive(Clone, Debug, PartialEq)]
pub struct Mode {
    pub bath: usize,
    /// λ of a bosonic mode, D^± = λ Q; 1 for fermionic modes.
    pub strength: f64,
    pub omega: f64,
    pub beta: f64,
    pub mu: f64,
    pub d_minus: CMatrix<f64>,
    pub d_plus: CMatrix<f64>,
}

impl Mode {
    pub(crate) fn d(&self, p: Sign) -> &CMatrix<f64> {
        match p {
            Sign::Plus => &self.d_plus,
            Sign::Minus => &self.d_minus,
        }
    }
}

/// Diagonal system Hamiltonian with finitely many reservoir modes.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteSystem {
    energies: Vec<f64>,
    odd: Vec<bool>,
    stats: Statistics,
    n_baths: usize,
    modes: Vec<Mode>,
}

fn check_thermal(omega: f64, beta: f64) -> Result<()> {
    if !omega.is_finite() || !(beta > 0.0 && beta.is_finite()) {
        return invalid(format!(
            "mode needs finite omega and beta > 0 (omega = {omega}, beta = {beta})"
        ));
    }
    Ok(())
}

impl DiscreteSystem {
    pub fn bosonic(model: &JunctionModel<f64>, modes: &[BosonMode]) -> Result<Self> {
        let n_baths = model.couplings().len();
        let mut out = Vec::with_capacity(modes.len());
        for m in modes {
            check_thermal(m.omega, m.beta)?;
            if m.omega <= 0.0 {
                return invalid("bosonic modes need omega > 0");
            }
            let (_, q) = model.couplings().get(m.coupling).ok_or_else(|| {
                Error::Validation(format!("no coupling with index {}", m.coupling))
            })?;
            let d = q.to_complex().scaled(Complex::new(m.lambda, 0.0));
            out.push(Mode {
                bath: m.coupling,
                strength: m.lambda,
                omega: m.omega,
                beta: m.beta,
                mu: 0.0,
                d_minus: d.clone(),
                d_plus: d,
            });
        }
        Self::new(
            model.omega().to_vec(),
            vec![false; model.dim()],
            Statistics::Bose,
            n_baths,
            out,
        )
    }

    /// `odd[n]` marks the states of odd fermion parity.
    pub fn fermionic(
        energies: Vec<f64>,
        odd: Vec<bool>,
        n_leads: usize,
        modes: &[FermionMode],
    ) -> Result<Self> {
        let mut out = Vec::with_capacity(modes.len());
        for m in modes {
            check_thermal(m.omega, m.beta)?;
            if !m.mu.is_finite() {
                return invalid("chemical potential must be finite");
            }
            let d = &m.d_minus;
            if d.rows() == odd.len() && d.cols() == odd.len() {
                for a in 0..d.rows() {
                    for b in 0..d.cols() {
                        if odd[a] == odd[b] && d[(a, b)].norm() != 0.0 {
                            return invalid(format!(
                                "D- element ({a}, {b}) does not change fermion parity"
                            ));
                        }
                    }
                }
            }
            out.push(Mode {
                bath: m.lead,
                strength: 1.0,
                omega: m.omega,
                beta: m.beta,
                mu: m.mu,
                d_minus: d.clone(),
                d_plus: d.adjoint(),
            });
        }
        Self::new(energies, odd, Statistics::Fermi, n_leads, out)
    }

    fn new(
        energies: Vec<f64>,
        odd: Vec<bool>,
        stats: Statistics,
        n_baths: usize,
        modes: Vec<Mode>,
    ) -> Result<Self> {
        let n = energies.len();
        if n == 0 || energies.iter().any(|e| !e.is_finite()) {
            return invalid("system needs at least one finite energy");
        }
        if odd.len() != n {
            return invalid("one parity flag per state is required");
        }
        if n_baths == 0 {
            return invalid("at least one reservoir is required");
        }
        for m in &modes {
            if m.bath >= n_baths {
                return invalid(format!("mode refers to reservoir {} of {n_baths}", m.bath));
            }
            if m.d_minus.rows() != n || m.d_minus.cols() != n {
                return invalid(format!("coupling operator must be {n}x{n}"));
            }
        }
        Ok(Self {
            energies,
            odd,
            stats,
            n_baths,
            modes,
        })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn odd(&self) -> &[bool] {
        &self.odd
    }

    pub fn statistics(&self) -> Statistics {
        self.stats
    }

    pub fn n_baths(&self) -> usize {
        self.n_baths
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }
}

fn discrete_sum(
    sys: &DiscreteSystem,
    bath: usize,
    lambda: C64,
    omega: f64,
    weighted: bool,
) -> Result<C64> {
    if sys.stats != Statistics::Bose {
        return Err(Error::Unsupported(
            "discrete rates are defined for bosonic modes".into(),
        ));
    }
    check_lambda(lambda)?;
    let mut acc = Complex::new(0.0, 0.0);
    for m in sys.modes.iter().filter(|m| m.bath == bath) {
        for p in Sign::BOTH {
            let n = occupation(Statistics::Bose, m.omega, m.beta, 0.0, p, Sign::Plus)?;
            let z = if weighted {
                p.real::<f64>() * m.omega
            } else {
                1.0
            };
            acc += (lambda + Complex::new(0.0, omega - p.real::<f64>() * m.omega)).inv()
                * (m.strength.powi(2) * n * z);
        }
    }
    Ok(acc)
}

/// W(λ, ω) = Σ_j λ_j² Σ_p n^p(ω_j) / (λ + iω − ipω_j) over the bosonic modes
/// of `bath`; the continuum W is its λ → 0⁺ limit.
pub fn discrete_w(sys: &DiscreteSystem, bath: usize, lambda: C64, omega: f64) -> Result<C64> {
    discrete_sum(sys, bath, lambda, omega, false)
}

/// W̄(λ, ω), the same sum weighted by pω_j.
pub fn discrete_wbar(sys: &DiscreteSystem, bath: usize, lambda: C64, omega: f64) -> Result<C64> {
    discrete_sum(sys, bath, lambda, omega, true)
}

fn check_lambda(lambda: C64) -> Result<()> {
    if !(lambda.re > 0.0) || !lambda.im.is_finite() {
        return Err(Error::Domain(format!(
            "Laplace variable needs Re λ > 0, got {lambda}"
        )));
    }
    Ok(())
}

/// Left (ν = +) or right (ν = −) multiplication by A as an N²×N² matrix.
fn superop(a: &CMatrix<f64>, nu: Sign) -> CMatrix<f64> {
    let id = CMatrix::identity(a.rows());
    match nu {
        Sign::Plus => a.kron(&id),
        Sign::Minus => id.kron(&a.transpose()),
    }
}

struct Evaluator<'a> {
    sys: &'a DiscreteSystem,
    lambda: C64,
    bohr: Vec<f64>,
    // [mode][p][ν], index 0 for Plus
    ops: Vec<[[CMatrix<f64>; 2]; 2]>,
    by_bath: Vec<Vec<usize>>,
}

fn idx(s: Sign) -> usize {
    match s {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

impl<'a> Evaluator<'a> {
    fn new(sys: &'a DiscreteSystem, lambda: C64) -> Result<Self> {
        check_lambda(lambda)?;
        let e = &sys.energies;
        let n = e.len();
        let bohr = (0..n * n).map(|k| e[k / n] - e[k % n]).collect();
        let ops = sys
            .modes
            .iter()
            .map(|m| {
                let s = |p, nu| superop(m.d(p), nu);
                [
                    [s(Sign::Plus, Sign::Plus), s(Sign::Plus, Sign::Minus)],
                    [s(Sign::Minus, Sign::Plus), s(Sign::Minus, Sign::Minus)],
                ]
            })
            .collect();
        let by_bath = (0..sys.n_baths)
            .map(|b| {
                (0..sys.modes.len())
                    .filter(|&k| sys.modes[k].bath == b)
                    .collect()
            })
            .collect();
        Ok(Self {
            sys,
            lambda,
            bohr,
            ops,
            by_bath,
        })
    }

    fn weight(&self, t: &DiagramTerm, modes: &[usize]) -> Result<f64> {
        let mut w = t.sign.real::<f64>();
        for (a, &(_, i)) in t.matching.arcs().iter().enumerate() {
            let m = &self.sys.modes[modes[a]];
            w *= occupation(self.sys.stats, m.omega, m.beta, m.mu, t.p[a], t.nu[i - 1])?;
        }
        Ok(w)
    }

    /// V_2n G_{2n−1} … G_1 V_1 for one mode assignment.
    fn chain(&self, t: &DiagramTerm, modes: &[usize]) -> CMatrix<f64> {
        let roles = t.matching.roles();
        let vertex = |v: usize| {
            let (a, start) = roles[v];
            let q = if start { t.p[a] } else { -t.p[a] };
            &self.ops[modes[a]][idx(q)][idx(t.nu[v])]
        };
        let mut m = vertex(0).clone();
        for (k, seg) in t.segments.iter().enumerate() {
            let shift: f64 = seg
                .iter()
                .map(|&a| t.p[a].real::<f64>() * self.sys.modes[modes[a]].omega)
                .sum();
            for r in 0..m.rows() {
                let g = (self.lambda + Complex::new(0.0, self.bohr[r] - shift)).inv();
                for c in 0..m.cols() {
                    m[(r, c)] *= g;
                }
            }
            m = vertex(k + 1) * &m;
        }
        m
    }

    fn sum(
        &self,
        order: usize,
        mut extra: impl FnMut(&DiagramTerm, &[usize]) -> Option<f64>,
    ) -> Result<CMatrix<f64>> {
        let n = self.sys.dim();
        let mut out = CMatrix::zeros(n * n, n * n);
        for t in generate_kernel_terms(order, self.sys.n_baths, self.sys.stats)? {
            let pools: Vec<&[usize]> = t.bath.iter().map(|&b| self.by_bath[b].as_slice()).collect();
            if pools.iter().any(|p| p.is_empty()) {
                continue;
            }
            let mut pick = vec![0usize; pools.len()];
            loop {
                let modes: Vec<usize> = pick.iter().zip(&pools).map(|(&k, p)| p[k]).collect();
                if let Some(x) = extra(&t, &modes) {
                    let w = self.weight(&t, &modes)? * x;
                    if w != 0.0 {
                        let m = self.chain(&t, &modes);
                        for (o, v) in out.as_mut_slice().iter_mut().zip(m.as_slice()) {
                            *o += *v * w;
                        }
                    }
                }
                let mut k = 0;
                while k < pick.len() {
                    pick[k] += 1;
                    if pick[k] < pools[k].len() {
                        break;
                    }
                    pick[k] = 0;
                    k += 1;
                }
                if k == pick.len() {
                    break;
                }
            }
        }
        Ok(out)
    }
}

/// Irreducible kernel of order 2 or 4 at Laplace variable λ, as an N²×N²
/// superoperator on the row-major vectorized density matrix.
pub fn evaluate_kernel_from_diagrams(
    sys: &DiscreteSystem,
    lambda: C64,
    order: usize,
) -> Result<CMatrix<f64>> {
    Evaluator::new(sys, lambda)?.sum(order, |_, _| Some(1.0))
}

/// Current kernel for reservoir `r`: the last vertex is replaced by the
/// current vertex, so only ν = + contributes there, weighted by ζ·p.
/// The current is Re Σ_n (K ρ)_nn.
pub fn evaluate_current_kernel_from_diagrams(
    sys: &DiscreteSystem,
    lambda: C64,
    order: usize,
    r: usize,
    transfer: Transfer,
) -> Result<CMatrix<f64>> {
    if r >= sys.n_baths {
        return invalid(format!("reservoir {r} out of range"));
    }
    let ev = Evaluator::new(sys, lambda)?;
    ev.sum(order, |t, modes| {
        let a = t.matching.last_arc();
        let top = t.nu.len() - 1;
        (t.nu[top] == Sign::Plus && t.bath[a] == r)
            .then(|| transfer.zeta(&sys.modes[modes[a]]) * t.p[a].real::<f64>())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{exact_current_kernel_order, exact_kernel_order, OracleOptions};
    use crate::linalg::RMatrix;
    use crate::model::build_junction;
    use crate::redfield::{build_current_kernel_with, build_k2_with};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const LAMBDAS: [f64; 2] = [0.4, 0.6];

    fn tls_model() -> JunctionModel<f64> {
        let q_l = RMatrix::from_rows(&[vec![0.3, 1.0], vec![1.0, -0.2]]).unwrap();
        let q_r = RMatrix::from_rows(&[vec![-0.1, 0.7], vec![0.7, 0.4]]).unwrap();
        build_junction(vec![0.0, 1.0], vec![("L".into(), q_l), ("R".into(), q_r)]).unwrap()
    }

    fn tls() -> DiscreteSystem {
        let modes = [
            BosonMode {
                coupling: 0,
                omega: 0.8,
                beta: 6.0,
                lambda: LAMBDAS[0],
            },
            BosonMode {
                coupling: 1,
                omega: 1.3,
                beta: 4.0,
                lambda: LAMBDAS[1],
            },
        ];
        DiscreteSystem::bosonic(&tls_model(), &modes).unwrap()
    }

    /// Spin-degenerate dot (empty, up, down) with one mode per lead and spin.
    fn dot() -> DiscreteSystem {
        let mut modes = Vec::new();
        for (lead, omega, beta, mu, t) in [(0, 0.9, 5.0, -0.1, 0.5), (1, 1.4, 4.0, 0.2, 0.35)] {
            for spin in 1..3 {
                let mut d = CMatrix::zeros(3, 3);
                d[(0, spin)] = Complex::new(t, 0.0);
                modes.push(FermionMode {
                    lead,
                    omega,
                    beta,
                    mu,
                    d_minus: d,
                });
            }
        }
        DiscreteSystem::fermionic(vec![0.0, 1.1, 1.1], vec![false, true, true], 2, &modes).unwrap()
    }

    fn assert_close(a: &CMatrix<f64>, b: &CMatrix<f64>, rel: f64, what: &str) {
        let err = (a - b).max_abs();
        assert!(
            err <= rel * b.max_abs().max(1e-300),
            "{what}: {err:e} vs scale {:e}",
            b.max_abs()
        );
    }

    fn check_against_exact(sys: &DiscreteSystem, transfers: &[Transfer]) {
        let opts = OracleOptions::default();
        for lam in [Complex::new(0.3, 0.2), Complex::new(0.7, -0.4)] {
            for order in [2, 4] {
                let k = evaluate_kernel_from_diagrams(sys, lam, order).unwrap();
                let o = exact_kernel_order(sys, lam, order, opts).unwrap();
                assert_close(&k, &o, 1e-8, &format!("K{order} at {lam}"));
                for r in 0..sys.n_baths() {
                    for &tr in transfers {
                        let k =
                            evaluate_current_kernel_from_diagrams(sys, lam, order, r, tr).unwrap();
                        let o = exact_current_kernel_order(sys, lam, order, r, tr, opts).unwrap();
                        assert_close(
                            &k,
                            &o,
                            1e-8,
                            &format!("K_I{order} bath {r} {tr:?} at {lam}"),
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn bosonic_diagrams_match_exact_expansion() {
        check_against_exact(&tls(), &[Transfer::Heat]);
    }

    #[test]
    fn fermionic_diagrams_match_exact_expansion() {
        check_against_exact(&dot(), &[Transfer::Heat, Transfer::Particle]);
    }

    #[test]
    fn kernels_preserve_trace() {
        for sys in [tls(), dot()] {
            let n = sys.dim();
            for order in [2, 4] {
                let k = evaluate_kernel_from_diagrams(&sys, Complex::new(0.2, 0.1), order).unwrap();
                for col in 0..n * n {
                    let s: C64 = (0..n).map(|a| k[(a * n + a, col)]).sum();
                    assert!(
                        s.norm() < 1e-12 * k.max_abs(),
                        "order {order} column {col}: {s}"
                    );
                }
            }
        }
    }

    #[test]
    fn second_order_equals_rate_kernel_with_discrete_rates() {
        let sys = tls();
        let model = tls_model();
        for lam in [0.3, 0.05] {
            let l = Complex::new(lam, 0.0);
            let k = evaluate_kernel_from_diagrams(&sys, l, 2).unwrap();
            let kr = build_k2_with(&model, |c, w| discrete_w(&sys, c, l, w)).unwrap();
            assert_close(&k, kr.superoperator(), 1e-13, "K2");
            for (r, id) in ["L", "R"].into_iter().enumerate() {
                let ki =
                    evaluate_current_kernel_from_diagrams(&sys, l, 2, r, Transfer::Heat).unwrap();
                let kb = build_current_kernel_with(&model, id, |w| discrete_wbar(&sys, r, l, w))
                    .unwrap();
                assert_close(&ki, kb.superoperator(), 1e-13, id);
            }
        }
    }

    #[test]
    fn hand_derived_decay_entry() {
        // single mode on an off-diagonal coupling: K_{00,11} =
        // λ²Q01² Σ_p [n^{p+}/(λ − iω − ipΩ) + n^{p−}/(λ + iω − ipΩ)]
        let (g, q01, big_omega, beta) = (0.25, 0.8, 0.9, 5.0 / 0.9);
        let q = RMatrix::from_rows(&[vec![0.0, q01], vec![q01, 0.0]]).unwrap();
        let model = build_junction(vec![0.0, 1.0], vec![("L".into(), q)]).unwrap();
        let modes = [BosonMode {
            coupling: 0,
            omega: big_omega,
            beta,
            lambda: g,
        }];
        let sys = DiscreteSystem::bosonic(&model, &modes).unwrap();
        let lam = Complex::new(0.15, 0.05);
        let k = evaluate_kernel_from_diagrams(&sys, lam, 2).unwrap();
        let mut expect = Complex::new(0.0, 0.0);
        for p in Sign::BOTH {
            let pw = p.real::<f64>() * big_omega;
            let n_plus = occupation(Statistics::Bose, big_omega, beta, 0.0, p, Sign::Plus).unwrap();
            let n_minus =
                occupation(Statistics::Bose, big_omega, beta, 0.0, p, Sign::Minus).unwrap();
            expect += (lam - Complex::new(0.0, 1.0 + pw)).inv() * n_plus;
            expect += (lam + Complex::new(0.0, 1.0 - pw)).inv() * n_minus;
        }
        expect *= g * g * q01 * q01;
        assert!(
            (k[(0, 3)] - expect).norm() < 1e-14,
            "{} vs {expect}",
            k[(0, 3)]
        );
    }

    fn random_system(rng: &mut StdRng, levels: usize) -> DiscreteSystem {
        let mut e: Vec<f64> = (0..levels).map(|_| rng.gen_range(0.0..1.5)).collect();
        e.sort_by(f64::total_cmp);
        let mut sym = || {
            let mut q = RMatrix::zeros(levels, levels);
            for a in 0..levels {
                for b in a..levels {
                    let x = rng.gen_range(-1.0..1.0);
                    q[(a, b)] = x;
                    q[(b, a)] = x;
                }
            }
            q
        };
        let couplings = vec![("L".into(), sym()), ("R".into(), sym())];
        let model = build_junction(e, couplings).unwrap();
        let modes: Vec<BosonMode> = (0..2)
            .map(|c| {
                let omega = rng.gen_range(0.5..1.5);
                let beta = rng.gen_range(4.0..6.0) / omega;
                BosonMode {
                    coupling: c,
                    omega,
                    beta,
                    lambda: rng.gen_range(0.2..0.6),
                }
            })
            .collect();
        let keep = if levels == 2 { 2 } else { 1 };
        DiscreteSystem::bosonic(&model, &modes[..keep]).unwrap()
    }

    #[test]
    fn random_instances_at_real_lambda() {
        let mut rng = StdRng::seed_from_u64(11);
        let lam = Complex::new(0.3, 0.0);
        for levels in [2, 2, 2, 3] {
            let sys = random_system(&mut rng, levels);
            for order in [2, 4] {
                let k = evaluate_kernel_from_diagrams(&sys, lam, order).unwrap();
                let o = exact_kernel_order(&sys, lam, order, OracleOptions::default()).unwrap();
                assert_close(&k, &o, 1e-8, &format!("{levels}-level K{order}"));
            }
        }
    }

    #[test]
    fn zero_coupling_gives_zero_kernel() {
        let q = RMatrix::zeros(2, 2);
        let model = build_junction(vec![0.0, 1.0], vec![("L".into(), q)]).unwrap();
        let modes = [BosonMode {
            coupling: 0,
            omega: 1.0,
            beta: 5.0,
            lambda: 0.5,
        }];
        let sys = DiscreteSystem::bosonic(&model, &modes).unwrap();
        for order in [2, 4] {
            let k = evaluate_kernel_from_diagrams(&sys, Complex::new(0.3, 0.0), order).unwrap();
            assert_eq!(k.max_abs(), 0.0);
        }
    }

    #[test]
    fn continuous_along_lambda_path() {
        // λ(s) = 0.05 + 0.3 s + i(2s − 1); steps bounded by |dK/dλ| ≤ max|K| / (Re λ)
        let sys = tls();
        let steps = 200;
        let at = |s: f64| Complex::new(0.05 + 0.3 * s, 2.0 * s - 1.0);
        let mut prev = evaluate_kernel_from_diagrams(&sys, at(0.0), 4).unwrap();
        for k in 1..=steps {
            let s = k as f64 / steps as f64;
            let cur = evaluate_kernel_from_diagrams(&sys, at(s), 4).unwrap();
            let dl = (at(s) - at(s - 1.0 / steps as f64)).norm();
            let bound =
                4.0 * dl * prev.max_abs().max(cur.max_abs()) / at(s - 1.0 / steps as f64).re;
            assert!((&cur - &prev).max_abs() <= bound, "jump at s = {s}");
            prev = cur;
        }
    }

    #[test]
    fn rejects_bad_input() {
        let sys = tls();
        assert!(matches!(
            evaluate_kernel_from_diagrams(&sys, Complex::new(0.0, 1.0), 2),
            Err(Error::Domain(_))
        ));
        assert!(evaluate_kernel_from_diagrams(&sys, Complex::new(0.1, 0.0), 3).is_err());
        assert!(evaluate_current_kernel_from_diagrams(
            &sys,
            Complex::new(0.1, 0.0),
            2,
            2,
            Transfer::Heat
        )
        .is_err());
        assert!(discrete_w(&dot(), 0, Complex::new(0.1, 0.0), 1.0).is_err());
        let d = CMatrix::identity(3);
        let bad = FermionMode {
            lead: 0,
            omega: 1.0,
            beta: 1.0,
            mu: 0.0,
            d_minus: d,
        };
        assert!(
            DiscreteSystem::fermionic(vec![0.0, 1.0, 1.0], vec![false, true, true], 1, &[bad])
                .is_err()
        );
    }
}
