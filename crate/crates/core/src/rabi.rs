//! Quantum Rabi junction: a qubit coupled to an oscillator, with the
//! oscillator quadrature a + a† coupled to the left bath and the qubit σ_z
//! (localized basis) coupled to the right bath.
//!
//! H = −(εσ_z + Δσ_x)/2 + ω_r a†a + g σ_z(a + a†)
//!
//! Besides the numeric construction the module carries three closed-form
//! approximations of the low-lying spectrum: the rotating-wave approximation,
//! second-order Van Vleck perturbation theory in g and the generalized
//! rotating-wave approximation.

use crate::error::{invalid, Error, Result};
use crate::linalg::{hermitian_eigensystem, to_eigenbasis, Eigen, RMatrix};
use crate::model::{build_junction, JunctionModel};
use crate::real::{c, Real};

pub const LEFT: &str = "L";
pub const RIGHT: &str = "R";

pub const DEFAULT_FOCK_CUTOFF: usize = 40;
pub const DEFAULT_RETAINED_LEVELS: usize = 5;
const FOCK_PROBE: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RabiParams<T: Real> {
    pub epsilon: T,
    pub delta: T,
    pub omega_r: T,
    pub g: T,
    /// Number of oscillator Fock states.
    pub fock_cutoff: usize,
    pub retained_levels: usize,
}

impl<T: Real> RabiParams<T> {
    pub fn new(epsilon: T, delta: T, omega_r: T, g: T) -> Self {
        Self {
            epsilon,
            delta,
            omega_r,
            g,
            fock_cutoff: DEFAULT_FOCK_CUTOFF,
            retained_levels: DEFAULT_RETAINED_LEVELS,
        }
    }

    pub fn with_levels(mut self, retained_levels: usize) -> Self {
        self.retained_levels = retained_levels;
        self
    }

    pub fn with_fock_cutoff(mut self, fock_cutoff: usize) -> Self {
        self.fock_cutoff = fock_cutoff;
        self
    }

    /// Bare qubit splitting ω_q = √(ε² + Δ²).
    pub fn omega_q(&self) -> T {
        self.epsilon.hypot(self.delta)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.epsilon, self.delta, self.omega_r, self.g]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return invalid("Rabi parameters must be finite");
        }
        if self.omega_r <= T::zero() {
            return invalid(format!("omega_r must be positive, got {}", self.omega_r));
        }
        if self.g < T::zero() {
            return invalid(format!("g must be non-negative, got {}", self.g));
        }
        if self.retained_levels < 2 {
            return invalid("at least two levels must be retained");
        }
        if self.fock_cutoff < self.retained_levels + 10 {
            return invalid(format!(
                "fock_cutoff {} must be at least retained_levels + 10 = {}",
                self.fock_cutoff,
                self.retained_levels + 10
            ));
        }
        Ok(())
    }
}

/// Hamiltonian and bath couplings in the localized qubit basis ⊗ Fock basis,
/// index = s·N_fock + n with s = 0 for σ_z = +1.
#[derive(Clone, Debug, PartialEq)]
pub struct RabiOperators<T: Real> {
    pub h: RMatrix<T>,
    pub q_l: RMatrix<T>,
    pub q_r: RMatrix<T>,
}

pub fn rabi_operators<T: Real>(p: &RabiParams<T>, n_fock: usize) -> RabiOperators<T> {
    let dim = 2 * n_fock;
    let sz = |s: usize| if s == 0 { T::one() } else { -T::one() };
    let half: T = c(0.5);
    let mut h = RMatrix::zeros(dim, dim);
    let mut q_l = RMatrix::zeros(dim, dim);
    let mut q_r = RMatrix::zeros(dim, dim);
    for s in 0..2 {
        for n in 0..n_fock {
            let i = s * n_fock + n;
            h[(i, i)] = -half * p.epsilon * sz(s) + p.omega_r * T::count(n);
            q_r[(i, i)] = sz(s);
            if n + 1 < n_fock {
                let amp = T::count(n + 1).sqrt();
                h[(i, i + 1)] = p.g * sz(s) * amp;
                h[(i + 1, i)] = p.g * sz(s) * amp;
                q_l[(i, i + 1)] = amp;
                q_l[(i + 1, i)] = amp;
            }
        }
    }
    for n in 0..n_fock {
        h[(n, n_fock + n)] = -half * p.delta;
        h[(n_fock + n, n)] = -half * p.delta;
    }
    RabiOperators { h, q_l, q_r }
}

/// Zero-bias parity σ_x ⊗ (−1)^{a†a} in the same basis as [`rabi_operators`].
pub fn parity_operator<T: Real>(n_fock: usize) -> RMatrix<T> {
    let mut p = RMatrix::zeros(2 * n_fock, 2 * n_fock);
    for n in 0..n_fock {
        let sign = if n % 2 == 0 { T::one() } else { -T::one() };
        p[(n, n_fock + n)] = sign;
        p[(n_fock + n, n)] = sign;
    }
    p
}

/// Full numeric spectrum at a given Fock truncation.
pub fn rabi_eigensystem<T: Real>(
    p: &RabiParams<T>,
    n_fock: usize,
) -> Result<(RabiOperators<T>, Eigen<T>)> {
    let ops = rabi_operators(p, n_fock);
    let eig = hermitian_eigensystem(&ops.h)?;
    Ok((ops, eig))
}

/// Diagonalizes the Rabi Hamiltonian, keeps the lowest `retained_levels`
/// levels and returns the junction with couplings `L` (a + a†) and `R` (σ_z).
///
/// The lowest levels must move by less than 1e-10·ω_r when ten Fock states
/// are added.
pub fn build_rabi_junction<T: Real>(p: &RabiParams<T>) -> Result<JunctionModel<T>> {
    p.validate()?;
    let k = p.retained_levels;
    let (ops, eig) = rabi_eigensystem(p, p.fock_cutoff)?;
    let (_, probe) = rabi_eigensystem(p, p.fock_cutoff + FOCK_PROBE)?;
    let shift = eig.values[..k]
        .iter()
        .zip(&probe.values[..k])
        .fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()));
    let tol = c::<T>(1e-10) * p.omega_r;
    if !(shift < tol) {
        return Err(Error::Numeric(format!(
            "Fock truncation {} not converged: lowest {k} levels move by {shift:e} (> {tol:e}) with {} more states",
            p.fock_cutoff, FOCK_PROBE
        )));
    }
    let q_l = to_eigenbasis(&ops.q_l, &eig.vectors)?.leading_block(k);
    let q_r = to_eigenbasis(&ops.q_r, &eig.vectors)?.leading_block(k);
    build_junction(
        eig.values[..k].to_vec(),
        vec![(LEFT.into(), q_l), (RIGHT.into(), q_r)],
    )
}

/// Kondo-like scale k_B T_K = ω_10 of the lowest doublet.
pub fn kondo_temperature<T: Real>(model: &JunctionModel<T>) -> Result<T> {
    if model.dim() < 2 {
        return invalid("Kondo scale needs at least two levels");
    }
    Ok(model.bohr(1, 0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Approximation {
    Rwa,
    Vvpt,
    Grwa,
}

/// Two-state mixing of the n-th doublet: |2n∓1⟩ = u∓|A⟩ + v∓|B⟩.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Doublet<T: Real> {
    pub n: usize,
    /// Detuning δ_n between the two bare states.
    pub detuning: T,
    /// Mixing Ω_n (off-diagonal element times two).
    pub mixing: T,
    pub u_minus: T,
    pub v_minus: T,
    pub u_plus: T,
    pub v_plus: T,
}

impl<T: Real> Doublet<T> {
    fn new(n: usize, detuning: T, mixing: T) -> Self {
        let s = detuning.hypot(mixing);
        let m2 = mixing * mixing;
        // a± = δ ± s, the cancelling branch rewritten as −Ω²/(δ ∓ s)
        let (a_minus, a_plus) = if detuning >= T::zero() {
            let ap = detuning + s;
            (if ap > T::zero() { -m2 / ap } else { T::zero() }, ap)
        } else {
            let am = detuning - s;
            (am, m2 / (s - detuning))
        };
        let weights = |a: T| {
            let den = a.hypot(mixing);
            if den > T::zero() {
                (a / den, -mixing / den)
            } else {
                (T::zero(), -T::one())
            }
        };
        let (u_minus, v_minus) = weights(a_minus);
        let (u_plus, v_plus) = weights(a_plus);
        Self {
            n,
            detuning,
            mixing,
            u_minus,
            v_minus,
            u_plus,
            v_plus,
        }
    }

    /// Half the doublet splitting, √(δ² + Ω²)/2.
    pub fn half_splitting(&self) -> T {
        self.detuning.hypot(self.mixing) * c(0.5)
    }

    pub fn norm_defect(&self) -> T {
        let d = |u: T, v: T| (u * u + v * v - T::one()).abs();
        d(self.u_minus, self.v_minus).max(d(self.u_plus, self.v_plus))
    }
}

/// Closed-form spectrum in the labelling ω_0, ω_{2n−1}, ω_{2n} (n ≥ 1),
/// which is ascending only for small g and ε.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxSpectrum<T: Real> {
    pub method: Approximation,
    pub omega: Vec<T>,
    pub doublets: Vec<Doublet<T>>,
    /// Q_{L,0k} for k = 1, 2 where the approximation provides them.
    pub q_l: Vec<T>,
    pub q_r: Vec<T>,
}

impl<T: Real> ApproxSpectrum<T> {
    /// Levels sorted ascending, with `perm[i]` the label of the i-th level.
    pub fn sorted(&self) -> (Vec<T>, Vec<usize>) {
        let mut perm: Vec<usize> = (0..self.omega.len()).collect();
        perm.sort_by(|&a, &b| {
            self.omega[a]
                .partial_cmp(&self.omega[b])
                .expect("finite levels")
        });
        (perm.iter().map(|&i| self.omega[i]).collect(), perm)
    }

    /// ω_1 − ω_0 in the closed-form labelling.
    pub fn gap(&self) -> T {
        self.omega[1] - self.omega[0]
    }

    pub fn norm_defect(&self) -> T {
        self.doublets
            .iter()
            .fold(T::zero(), |m, d| m.max(d.norm_defect()))
    }
}

fn check_closed_form_params<T: Real>(p: &RabiParams<T>, n_max: usize) -> Result<()> {
    if n_max == 0 {
        return invalid("n_max must be at least 1");
    }
    if !(p.omega_r > T::zero()) || p.g < T::zero() {
        return invalid("closed forms need omega_r > 0 and g ≥ 0");
    }
    if !(p.omega_q() > T::zero()) {
        return invalid("closed forms need a nonzero qubit splitting");
    }
    Ok(())
}

/// Rotating-wave (Jaynes–Cummings) spectrum with doublets |e,n−1⟩, |g,n⟩ in the
/// qubit energy basis.
pub fn rwa_spectrum<T: Real>(p: &RabiParams<T>, n_max: usize) -> Result<ApproxSpectrum<T>> {
    check_closed_form_params(p, n_max)?;
    let wq = p.omega_q();
    let half: T = c(0.5);
    let gx = p.g * p.delta / wq;
    let detuning = wq - p.omega_r;
    let mut omega = vec![-half * wq];
    let mut doublets = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let d = Doublet::new(n, detuning, c::<T>(2.0) * T::count(n).sqrt() * gx);
        let centre = (T::count(n) - half) * p.omega_r;
        omega.push(centre - d.half_splitting());
        omega.push(centre + d.half_splitting());
        doublets.push(d);
    }
    let d1 = doublets[0];
    let ratio = p.delta / wq;
    Ok(ApproxSpectrum {
        method: Approximation::Rwa,
        omega,
        doublets,
        q_l: vec![d1.v_minus, d1.v_plus],
        q_r: vec![d1.u_minus * ratio, d1.u_plus * ratio],
    })
}

/// Second-order Van Vleck perturbation theory in g.
///
/// Ground-to-first-excited matrix elements are supplied at zero bias only,
/// evaluated on the normalized perturbative states
/// |0⟩ ∝ |g,0⟩ + a|e,1⟩ and |1⟩ ∝ u|e,0⟩ + v(|g,1⟩ + √2a|e,2⟩), a = g/(Δ+ω_r).
pub fn vvpt_spectrum<T: Real>(p: &RabiParams<T>, n_max: usize) -> Result<ApproxSpectrum<T>> {
    check_closed_form_params(p, n_max)?;
    let wq = p.omega_q();
    let half: T = c(0.5);
    let two: T = c(2.0);
    let wbar = wq + p.omega_r;
    let gz = p.g * p.epsilon / wq;
    let gx = p.g * p.delta / wq;
    let wq_n = |n: usize| wq + two * T::count(n) * gx * gx / wbar;
    let lamb = gz * gz / p.omega_r;
    let mut omega = vec![-half * wq_n(1) - lamb];
    let mut doublets = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let wqn = wq_n(n);
        let detuning = wqn - p.omega_r;
        let d = Doublet::new(n, detuning, two * T::count(n).sqrt() * gx);
        let centre =
            -half * wqn + half * detuning + T::count(n) * p.omega_r - lamb - gx * gx / wbar;
        omega.push(centre - d.half_splitting());
        omega.push(centre + d.half_splitting());
        doublets.push(d);
    }
    let (q_l, q_r) = if p.epsilon == T::zero() {
        let d1 = doublets[0];
        let (u, v) = (d1.u_minus, d1.v_minus);
        let a = p.g / (p.delta + p.omega_r);
        let n0 = (T::one() + a * a).sqrt();
        let n1 = (u * u + v * v * (T::one() + two * a * a)).sqrt();
        let norm = T::one() / (n0 * n1);
        (
            vec![(v + a * u + two * a * a * v) * norm],
            vec![(u + a * v) * norm],
        )
    } else {
        (Vec::new(), Vec::new())
    };
    Ok(ApproxSpectrum {
        method: Approximation::Vvpt,
        omega,
        doublets,
        q_l,
        q_r,
    })
}

/// Zero-bias splitting Δ* where the VVPT detuning δ_1 = Δ + 2g²/(Δ+ω_r) − ω_r
/// vanishes, Δ* = √(ω_r² − 2g²). `None` when 2g² ≥ ω_r².
pub fn vvpt_resonance_delta<T: Real>(g: T, omega_r: T) -> Option<T> {
    let s = omega_r * omega_r - c::<T>(2.0) * g * g;
    (s > T::zero()).then(|| s.sqrt())
}

/// Generalized Laguerre polynomial 𝖫_j^k(x) from the three-term recurrence.
pub fn laguerre<T: Real>(k: usize, j: usize, x: T) -> T {
    let kk = T::count(k);
    let mut prev = T::one();
    if j == 0 {
        return prev;
    }
    let mut cur = T::one() + kk - x;
    for i in 1..j {
        let fi = T::count(i);
        let next =
            ((c::<T>(2.0) * fi + T::one() + kk - x) * cur - (fi + kk) * prev) / (fi + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// Oscillator-dressed qubit gap Δ̃_ij = Δ e^{−α̃/2} α̃^{(i−j)/2} √(j!/i!) 𝖫_j^{i−j}(α̃),
/// symmetric in (i, j), with α̃ = (2g/ω_r)².
pub fn dressed_gap<T: Real>(delta: T, g: T, omega_r: T, i: usize, j: usize) -> T {
    let (i, j) = if i >= j { (i, j) } else { (j, i) };
    let at = (c::<T>(2.0) * g / omega_r).powi(2);
    let mut fact = T::one();
    for m in j + 1..=i {
        fact /= T::count(m);
    }
    let power = if i == j {
        T::one()
    } else {
        at.powi((i - j) as i32).sqrt()
    };
    delta * (-at * c(0.5)).exp() * power * fact.sqrt() * laguerre(i - j, j, at)
}

/// Qubit-state weights c_n^± = √((ω_{q,n} ± ε)/(2ω_{q,n})) of the dressed qubit.
pub fn grwa_weights<T: Real>(epsilon: T, omega_qn: T) -> (T, T) {
    let two: T = c(2.0);
    let plus = ((omega_qn + epsilon) / (two * omega_qn))
        .max(T::zero())
        .sqrt();
    let minus = ((omega_qn - epsilon) / (two * omega_qn))
        .max(T::zero())
        .sqrt();
    (plus, minus)
}

/// Generalized rotating-wave approximation of the biased Rabi model.
pub fn grwa_spectrum<T: Real>(p: &RabiParams<T>, n_max: usize) -> Result<ApproxSpectrum<T>> {
    check_closed_form_params(p, n_max)?;
    let half: T = c(0.5);
    let dg = |i: usize, j: usize| dressed_gap(p.delta, p.g, p.omega_r, i, j);
    let wq: Vec<T> = (0..=n_max).map(|n| dg(n, n).hypot(p.epsilon)).collect();
    let cw: Vec<(T, T)> = wq.iter().map(|&w| grwa_weights(p.epsilon, w)).collect();
    let lamb = p.g * p.g / p.omega_r;
    let mut omega = vec![-half * wq[0] - lamb];
    let mut doublets = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let detuning = half * (wq[n] + wq[n - 1]) - p.omega_r;
        let mixing = dg(n, n - 1) * (cw[n].0 * cw[n - 1].0 + cw[n].1 * cw[n - 1].1);
        let d = Doublet::new(n, detuning, mixing);
        let centre = -half * wq[n] + half * detuning + T::count(n) * p.omega_r - lamb;
        omega.push(centre - d.half_splitting());
        omega.push(centre + d.half_splitting());
        doublets.push(d);
    }
    let d1 = doublets[0];
    let (c0p, c0m) = cw[0];
    let (c1p, c1m) = cw[1];
    let q_l = c::<T>(4.0) * p.g / p.omega_r * d1.u_minus * c0m * c0p
        + d1.v_minus * (c0m * c1m + c0p * c1p);
    let q_r = -c::<T>(2.0) * d1.u_minus * c0m * c0p;
    Ok(ApproxSpectrum {
        method: Approximation::Grwa,
        omega,
        doublets,
        q_l: vec![q_l],
        q_r: vec![q_r],
    })
}

/// Zero-bias GRWA gap
/// ω_10 = Δ̃ − (Δ̃ − ω_r − α̃Δ̃/2)/2 − √((Δ̃ − ω_r − α̃Δ̃/2)² + α̃Δ̃²)/2, Δ̃ = Δe^{−α̃/2}.
pub fn grwa_zero_bias_gap<T: Real>(delta: T, g: T, omega_r: T) -> T {
    let half: T = c(0.5);
    let at = (c::<T>(2.0) * g / omega_r).powi(2);
    let dt = delta * (-at * half).exp();
    let x = dt - omega_r - at * dt * half;
    dt - half * x - half * (x * x + at * dt * dt).sqrt()
}
