//! Steady states of the second-order master equation: full secular (rates
//! only), partial secular (quasi-degenerate coherences kept) and the
//! analytic three-level coherence.

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::linalg::{norm1, CMatrix, Lu, RMatrix};
use crate::model::JunctionModel;
use crate::real::{c, Real};
use crate::redfield::{RateMatrix, RedfieldTensor};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverTag {
    FullSecular,
    PartialSecular,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SteadyState<T: Real> {
    pub rho: CMatrix<T>,
    /// Off-diagonal pairs (n, m) with n < m that were solved for.
    pub retained_pairs: Vec<(usize, usize)>,
    pub solver: SolverTag,
}

impl<T: Real> SteadyState<T> {
    pub fn dim(&self) -> usize {
        self.rho.rows()
    }

    pub fn populations(&self) -> Vec<T> {
        (0..self.dim()).map(|n| self.rho[(n, n)].re).collect()
    }

    pub fn trace_defect(&self) -> T {
        (self.rho.trace() - Complex::new(T::one(), T::zero())).norm()
    }
}

/// Which index pairs keep their coherence.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyClusters<T: Real> {
    retained: Vec<bool>,
    dim: usize,
    pub threshold: T,
}

impl<T: Real> FrequencyClusters<T> {
    pub fn diagonal(dim: usize) -> Self {
        Self::from_predicate(dim, T::zero(), |n, m| n == m)
    }

    pub fn all(dim: usize) -> Self {
        Self::from_predicate(dim, T::infinity(), |_, _| true)
    }

    /// Custom partition; the diagonal is always kept and the predicate is
    /// symmetrized.
    pub fn from_predicate(dim: usize, threshold: T, keep: impl Fn(usize, usize) -> bool) -> Self {
        let mut retained = vec![false; dim * dim];
        for n in 0..dim {
            for m in 0..dim {
                retained[n * dim + m] = n == m || keep(n, m) || keep(m, n);
            }
        }
        Self {
            retained,
            dim,
            threshold,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn is_retained(&self, n: usize, m: usize) -> bool {
        self.retained[n * self.dim + m]
    }

    /// Retained off-diagonal pairs with n < m, in lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for n in 0..self.dim {
            for m in n + 1..self.dim {
                if self.is_retained(n, m) {
                    out.push((n, m));
                }
            }
        }
        out
    }
}

/// Keeps (n, m) iff |ω_nm| ≤ factor · γ_scale.
pub fn cluster_bohr_frequencies<T: Real>(
    model: &JunctionModel<T>,
    gamma_scale: T,
    factor: T,
) -> Result<FrequencyClusters<T>> {
    if !(gamma_scale > T::zero()) {
        return invalid("gamma_scale must be positive");
    }
    if !(factor >= T::zero()) {
        return invalid("cluster factor must be non-negative");
    }
    let threshold = if factor.is_infinite() {
        T::infinity()
    } else {
        factor * gamma_scale
    };
    Ok(FrequencyClusters::from_predicate(
        model.dim(),
        threshold,
        |n, m| model.bohr(n, m).abs() <= threshold,
    ))
}

/// Largest off-diagonal population rate of a kernel.
pub fn gamma_scale<T: Real>(k2: &RedfieldTensor<T>) -> T {
    k2.population_rates().max_rate()
}

/// Closed communicating classes of the transition graph (edge m → n when
/// Γ_{nm} > 0).
pub fn closed_classes<T: Real>(rates: &RateMatrix<T>) -> Vec<Vec<usize>> {
    let d = rates.dim();
    let mut reach = vec![false; d * d];
    for i in 0..d {
        reach[i * d + i] = true;
        for j in 0..d {
            if i != j && rates.get(j, i) > T::zero() {
                reach[i * d + j] = true;
            }
        }
    }
    for k in 0..d {
        for i in 0..d {
            if reach[i * d + k] {
                for j in 0..d {
                    if reach[k * d + j] {
                        reach[i * d + j] = true;
                    }
                }
            }
        }
    }
    let mut assigned = vec![false; d];
    let mut classes = Vec::new();
    for i in 0..d {
        if assigned[i] {
            continue;
        }
        let closed = (0..d).all(|j| !reach[i * d + j] || reach[j * d + i]);
        let class: Vec<usize> = (0..d)
            .filter(|&j| reach[i * d + j] && reach[j * d + i])
            .collect();
        for &j in &class {
            assigned[j] = true;
        }
        if closed {
            classes.push(class);
        }
    }
    classes
}

/// Stationary populations of Σ_m Γ_{nm} ρ_mm = 0.
///
/// Uses state reduction (Grassmann–Taksar–Heyman) on the unique closed
/// class, which involves no subtractions and keeps exponentially small
/// populations accurate; transient states get zero weight.
pub fn full_secular_steady<T: Real>(rates: &RateMatrix<T>) -> Result<SteadyState<T>> {
    let d = rates.dim();
    if d == 0 {
        return invalid("empty rate matrix");
    }
    let scale = rates.max_rate();
    if rates.min_off_diagonal() < T::zero() {
        return invalid("rate matrix has negative off-diagonal entries");
    }
    if rates.column_sum_residual() > c::<T>(1e-10) * scale {
        return invalid("rate matrix columns do not sum to zero");
    }
    let classes = closed_classes(rates);
    if classes.len() != 1 {
        return Err(Error::Degenerate(format!(
            "rate graph has {} closed classes: {classes:?}",
            classes.len()
        )));
    }
    let class = &classes[0];
    let k = class.len();
    // a[i][j]: rate from class[i] to class[j].
    let mut a: Vec<Vec<T>> = (0..k)
        .map(|i| (0..k).map(|j| rates.get(class[j], class[i])).collect())
        .collect();
    for n in (1..k).rev() {
        let s: T = (0..n).map(|j| a[n][j]).sum();
        if !(s > T::zero()) {
            return Err(Error::Numeric(format!(
                "state reduction lost state {}",
                class[n]
            )));
        }
        for row in a.iter_mut().take(n) {
            row[n] /= s;
        }
        for i in 0..n {
            let ain = a[i][n];
            if ain == T::zero() {
                continue;
            }
            for j in 0..n {
                let anj = a[n][j];
                a[i][j] += ain * anj;
            }
        }
    }
    let mut pi = vec![T::zero(); k];
    pi[0] = T::one();
    for j in 1..k {
        pi[j] = (0..j).map(|i| pi[i] * a[i][j]).sum();
    }
    let total: T = pi.iter().copied().sum();
    let mut rho = CMatrix::zeros(d, d);
    for (i, &s) in class.iter().enumerate() {
        rho[(s, s)] = Complex::new(pi[i] / total, T::zero());
    }
    Ok(SteadyState {
        rho,
        retained_pairs: Vec::new(),
        solver: SolverTag::FullSecular,
    })
}

/// Real unknowns: populations first, then (Re, Im) of each retained pair.
struct Layout {
    dim: usize,
    pairs: Vec<(usize, usize)>,
    slot: Vec<Option<usize>>,
}

impl Layout {
    fn new<T: Real>(clusters: &FrequencyClusters<T>) -> Self {
        let dim = clusters.dim();
        let pairs = clusters.pairs();
        let mut slot = vec![None; dim * dim];
        for (p, &(n, m)) in pairs.iter().enumerate() {
            slot[n * dim + m] = Some(p);
            slot[m * dim + n] = Some(p);
        }
        Self { dim, pairs, slot }
    }

    fn unknowns(&self) -> usize {
        self.dim + 2 * self.pairs.len()
    }

    /// ρ_{nm} as Σ coeff·x_j.
    fn terms<T: Real>(&self, n: usize, m: usize) -> Vec<(usize, Complex<T>)> {
        let one = Complex::new(T::one(), T::zero());
        if n == m {
            return vec![(n, one)];
        }
        match self.slot[n * self.dim + m] {
            None => Vec::new(),
            Some(p) => {
                let im = if n < m { T::one() } else { -T::one() };
                vec![
                    (self.dim + 2 * p, one),
                    (self.dim + 2 * p + 1, Complex::new(T::zero(), im)),
                ]
            }
        }
    }
}

/// Partial-secular steady state: populations and retained coherences obey
/// 0 = −iω_nm ρ_nm + Σ K_{nmn'm'} ρ_{n'm'}; all other coherences vanish.
/// With `lamb_shift` off, Im K_{nmnm} (n ≠ m) is dropped.
pub fn partial_secular_steady<T: Real>(
    model: &JunctionModel<T>,
    k2: &RedfieldTensor<T>,
    clusters: &FrequencyClusters<T>,
    lamb_shift: bool,
) -> Result<SteadyState<T>> {
    let d = model.dim();
    if k2.dim() != d || clusters.dim() != d {
        return invalid("kernel, clusters and model dimensions differ");
    }
    let layout = Layout::new(clusters);
    let nu = layout.unknowns();
    let kernel = |n: usize, m: usize, np: usize, mp: usize| {
        let v = k2.get(n, m, np, mp);
        if !lamb_shift && n != m && n == np && m == mp {
            Complex::new(v.re, T::zero())
        } else {
            v
        }
    };
    // Complex equation rows, one per retained (n, m) with n ≤ m.
    let mut rows: Vec<Vec<Complex<T>>> = Vec::new();
    let mut eq_index: Vec<(usize, usize)> = Vec::new();
    let mut add_row = |n: usize, m: usize| {
        let mut row = vec![Complex::new(T::zero(), T::zero()); nu];
        for (j, coef) in layout.terms::<T>(n, m) {
            row[j] -= Complex::new(T::zero(), model.bohr(n, m)) * coef;
        }
        for np in 0..d {
            for mp in 0..d {
                let t = layout.terms::<T>(np, mp);
                if t.is_empty() {
                    continue;
                }
                let kv = kernel(n, m, np, mp);
                for (j, coef) in t {
                    row[j] += kv * coef;
                }
            }
        }
        rows.push(row);
        eq_index.push((n, m));
    };
    for n in 0..d {
        add_row(n, n);
    }
    for &(n, m) in &layout.pairs {
        add_row(n, m);
    }
    // Real system: population rows give one real equation, coherence rows two.
    let mut a = RMatrix::zeros(nu, nu);
    let mut r = 0;
    for (row, &(n, m)) in rows.iter().zip(&eq_index) {
        for j in 0..nu {
            a[(r, j)] = row[j].re;
        }
        r += 1;
        if n != m {
            for j in 0..nu {
                a[(r, j)] = row[j].im;
            }
            r += 1;
        }
    }
    let full = a.clone();
    for j in 0..nu {
        a[(0, j)] = if j < d { T::one() } else { T::zero() };
    }
    let mut b = vec![T::zero(); nu];
    b[0] = T::one();
    let lu = Lu::new(&a)
        .map_err(|e| Error::Degenerate(format!("partial-secular system is singular: {e}")))?;
    let cond = norm1(&a) * lu.inverse_norm1();
    if cond > c(1e12) {
        log::warn!("partial-secular system condition estimate {cond:e}");
    }
    let x = lu.solve(&b);
    let resid = full
        .mul_vec(&x)
        .iter()
        .skip(1)
        .fold(T::zero(), |acc, v| acc.max(v.abs()));
    if resid > c::<T>(1e-10) * k2.max_abs().max(T::min_positive_value()) {
        log::warn!("partial-secular residual {resid:e} exceeds tolerance");
    }
    let mut rho = CMatrix::zeros(d, d);
    for n in 0..d {
        rho[(n, n)] = Complex::new(x[n], T::zero());
        if x[n] < c(-1e-8) {
            log::warn!(
                "population {n} is negative ({:e}); Redfield positivity violated",
                x[n]
            );
        }
    }
    for (p, &(n, m)) in layout.pairs.iter().enumerate() {
        let v = Complex::new(x[d + 2 * p], x[d + 2 * p + 1]);
        rho[(n, m)] = v;
        rho[(m, n)] = v.conj();
    }
    Ok(SteadyState {
        rho,
        retained_pairs: layout.pairs,
        solver: SolverTag::PartialSecular,
    })
}

/// Coefficients of the analytic three-level solution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThreeLevelCoherence<T: Real> {
    pub rho12: Complex<T>,
    pub populations: [T; 3],
    pub a: [T; 3],
    pub b: [T; 3],
}

/// Steady state of a three-level system where only the (1, 2) coherence is
/// kept: ρ'_12 = Σ a_i ρ_ii, ρ''_12 = −Σ b_i ρ_ii, and populations from the
/// rates dressed by the coherence, Γ̃_ni = Γ_ni + 2(K'_{nn12} a_i + K''_{nn12} b_i).
pub fn three_level_coherence_analytic<T: Real>(
    k2: &RedfieldTensor<T>,
    omega_12: T,
) -> Result<ThreeLevelCoherence<T>> {
    if k2.dim() != 3 {
        return invalid("three-level formula needs a 3-level kernel");
    }
    let k1212 = k2.get(1, 2, 1, 2);
    let k1221 = k2.get(1, 2, 2, 1);
    let w_plus = omega_12 - k1212.im + k1221.im;
    let w_minus = omega_12 - k1212.im - k1221.im;
    let o_plus = k1212.re + k1221.re;
    let o_minus = k1212.re - k1221.re;
    let den = w_plus * w_minus + o_plus * o_minus;
    if den.abs() < c(1e-300) || w_minus.abs() < c(1e-300) {
        return Err(Error::Degenerate(
            "three-level coherence denominator vanishes".into(),
        ));
    }
    let mut a = [T::zero(); 3];
    let mut b = [T::zero(); 3];
    for i in 0..3 {
        let ki = k2.get(1, 2, i, i);
        b[i] = (w_minus * ki.re + o_plus * ki.im) / den;
        a[i] = (ki.im - o_minus * b[i]) / w_minus;
    }
    let gt = |n: usize, i: usize| {
        let kn = k2.get(n, n, 1, 2);
        k2.get(n, n, i, i).re + c::<T>(2.0) * (kn.re * a[i] + kn.im * b[i])
    };
    // Unknowns (ρ11, ρ22); ρ00 = 1 − ρ11 − ρ22.
    let m = RMatrix::from_fn(2, 2, |r, s| gt(r + 1, s + 1) - gt(r + 1, 0));
    let rhs = [-gt(1, 0), -gt(2, 0)];
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    if det.abs() < c(1e-300) {
        return Err(Error::Degenerate(
            "three-level population system is singular".into(),
        ));
    }
    let p11 = (rhs[0] * m[(1, 1)] - m[(0, 1)] * rhs[1]) / det;
    let p22 = (m[(0, 0)] * rhs[1] - rhs[0] * m[(1, 0)]) / det;
    let pops = [T::one() - p11 - p22, p11, p22];
    let re: T = (0..3).map(|i| a[i] * pops[i]).sum();
    let im: T = (0..3).map(|i| -b[i] * pops[i]).sum();
    Ok(ThreeLevelCoherence {
        rho12: Complex::new(re, im),
        populations: pops,
        a,
        b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_junction, Reservoir, SpectralDensity};
    use crate::redfield::{build_k2_boson, gamma_rates};

    fn rates(off: &[(usize, usize, f64)], d: usize) -> RateMatrix<f64> {
        let mut g = RMatrix::zeros(d, d);
        for &(n, m, v) in off {
            g[(n, m)] = v;
        }
        RateMatrix::from_off_diagonal(g)
    }

    #[test]
    fn two_state_balance() {
        let r = rates(&[(0, 1, 0.3), (1, 0, 0.1)], 2);
        let s = full_secular_steady(&r).unwrap();
        let p = s.populations();
        assert!((p[1] / p[0] - 0.1 / 0.3).abs() < 1e-15);
        assert!(s.trace_defect() < 1e-15);
    }

    #[test]
    fn transient_states_get_zero_weight() {
        // 2 → 0 one way, 0 ↔ 1.
        let r = rates(&[(0, 2, 1.0), (0, 1, 0.5), (1, 0, 0.25)], 3);
        let p = full_secular_steady(&r).unwrap().populations();
        assert_eq!(p[2], 0.0);
        assert!((p[1] / p[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let r = rates(&[(0, 1, 1.0), (1, 0, 1.0), (2, 3, 1.0), (3, 2, 1.0)], 4);
        assert!(matches!(full_secular_steady(&r), Err(Error::Degenerate(_))));
        assert_eq!(closed_classes(&r), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn cluster_limits() {
        let q = RMatrix::from_fn(3, 3, |i, j| if i != j { 1.0 } else { 0.0 });
        let m = build_junction(vec![0.0, 1.0, 1.001], vec![("L".into(), q)]).unwrap();
        assert!(cluster_bohr_frequencies(&m, 1e-3, 0.0)
            .unwrap()
            .pairs()
            .is_empty());
        assert_eq!(
            cluster_bohr_frequencies(&m, 1e-3, f64::INFINITY)
                .unwrap()
                .pairs()
                .len(),
            3
        );
        assert_eq!(
            cluster_bohr_frequencies(&m, 1e-3, 10.0).unwrap().pairs(),
            vec![(1, 2)]
        );
        assert!(cluster_bohr_frequencies(&m, 0.0, 10.0).is_err());
    }

    fn three_level() -> (JunctionModel<f64>, Vec<Reservoir<f64>>) {
        let ql = RMatrix::from_rows(&[
            vec![0.1, -0.7, -0.6],
            vec![-0.7, 0.3, 0.2],
            vec![-0.6, 0.2, -0.1],
        ])
        .unwrap();
        let qr = RMatrix::from_rows(&[
            vec![-0.2, 0.5, -0.5],
            vec![0.5, 0.4, 0.1],
            vec![-0.5, 0.1, 0.3],
        ])
        .unwrap();
        let m = build_junction(
            vec![0.0, 1.0, 1.004],
            vec![("L".into(), ql), ("R".into(), qr)],
        )
        .unwrap();
        let j = SpectralDensity::ohmic_drude(1e-3, 5.0).unwrap();
        let b = vec![
            Reservoir::bosonic("L", 2.0, j).unwrap(),
            Reservoir::bosonic("R", 3.0, j).unwrap(),
        ];
        (m, b)
    }

    #[test]
    fn diagonal_clusters_reduce_to_full_secular() {
        let (m, b) = three_level();
        let k = build_k2_boson(&m, &b).unwrap();
        let p = partial_secular_steady(&m, &k, &FrequencyClusters::diagonal(3), true).unwrap();
        let f = full_secular_steady(&gamma_rates(&m, &b).unwrap().total).unwrap();
        assert!((&p.rho - &f.rho).max_abs() < 1e-12);
    }

    #[test]
    fn analytic_three_level_matches_linear_solve() {
        let (m, b) = three_level();
        let k = build_k2_boson(&m, &b).unwrap();
        let clusters = FrequencyClusters::from_predicate(3, 0.0, |n, m| (n, m) == (1, 2));
        let num = partial_secular_steady(&m, &k, &clusters, true).unwrap();
        let an = three_level_coherence_analytic(&k, m.bohr(1, 2)).unwrap();
        assert!((num.rho[(1, 2)] - an.rho12).norm() < 1e-12);
        for n in 0..3 {
            assert!((num.rho[(n, n)].re - an.populations[n]).abs() < 1e-12);
        }
        assert!(an.rho12.norm() > 1e-6);
    }
}
