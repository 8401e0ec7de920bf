//! Small dense matrices, LU solves and a cyclic Jacobi eigensolver.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{Float, One, Zero};

use crate::error::{invalid, Error, Result};
use crate::real::{c, Real};

/// Matrix entry: a real scalar or a complex number over one.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + AddAssign
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + std::ops::Div<Output = Self>
    + Send
    + Sync
{
    type R: Real;
    fn modulus(self) -> Self::R;
    fn conj(self) -> Self;
    fn from_real(x: Self::R) -> Self;
    fn re(self) -> Self::R;
    fn scale(self, x: Self::R) -> Self;
}

impl<T: Real> Scalar for T {
    type R = T;
    #[inline]
    fn modulus(self) -> T {
        self.abs()
    }
    #[inline]
    fn conj(self) -> T {
        self
    }
    #[inline]
    fn from_real(x: T) -> T {
        x
    }
    #[inline]
    fn re(self) -> T {
        self
    }
    #[inline]
    fn scale(self, x: T) -> T {
        self * x
    }
}

impl<T: Real> Scalar for Complex<T> {
    type R = T;
    #[inline]
    fn modulus(self) -> T {
        self.norm()
    }
    #[inline]
    fn conj(self) -> Self {
        Complex::conj(&self)
    }
    #[inline]
    fn from_real(x: T) -> Self {
        Complex::new(x, T::zero())
    }
    #[inline]
    fn re(self) -> T {
        self.re
    }
    #[inline]
    fn scale(self, x: T) -> Self {
        Complex::new(self.re * x, self.im * x)
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

pub type RMatrix<T> = Matrix<T>;
pub type CMatrix<T> = Matrix<Complex<T>>;

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let r = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != cols) {
            return invalid("ragged matrix rows");
        }
        Ok(Self {
            rows: r,
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn diagonal(d: &[S]) -> Self {
        Self::from_fn(
            d.len(),
            d.len(),
            |i, j| if i == j { d[i] } else { S::zero() },
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [S] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(S) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn scaled(&self, x: S) -> Self {
        self.map(|v| v * x)
    }

    pub fn max_abs(&self) -> S::R {
        self.data
            .iter()
            .fold(S::R::zero(), |m, v| m.max(v.modulus()))
    }

    pub fn frobenius(&self) -> S::R {
        self.data
            .iter()
            .fold(S::R::zero(), |acc, v| {
                let m = v.modulus();
                acc + m * m
            })
            .sqrt()
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)])
    }

    /// Largest deviation from Hermiticity, `max |A_ij − conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> S::R {
        let mut m = S::R::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                m = m.max((self[(i, j)] - self[(j, i)].conj()).modulus());
            }
        }
        m
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return invalid(format!(
                "dimension mismatch in product: {}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            ));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == S::zero() {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        Self::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            self[(i / rhs.rows, j / rhs.cols)] * rhs[(i % rhs.rows, j % rhs.cols)]
        })
    }

    /// Permutes rows and columns: `out[i][j] = self[perm[i]][perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self::from_fn(perm.len(), perm.len(), |i, j| self[(perm[i], perm[j])])
    }

    /// Leading `k × k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        Self::from_fn(k, k, |i, j| self[(i, j)])
    }
}

impl<T: Real> Matrix<T> {
    pub fn to_complex(&self) -> CMatrix<T> {
        self.map(|x| Complex::new(x, T::zero()))
    }
}

impl<T: Real> Matrix<Complex<T>> {
    pub fn re(&self) -> RMatrix<T> {
        self.map(|z| z.re)
    }

    pub fn max_imag(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.im.abs()))
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Add for &Matrix<S> {
    type Output = Matrix<S>;
    fn add(self, rhs: Self) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for &Matrix<S> {
    type Output = Matrix<S>;
    fn sub(self, rhs: Self) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, rhs: Self) -> Matrix<S> {
        self.matmul(rhs).expect("matrix product dimensions")
    }
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu<S> {
    lu: Matrix<S>,
    perm: Vec<usize>,
}

impl<S: Scalar> Lu<S> {
    pub fn new(a: &Matrix<S>) -> Result<Self> {
        if !a.is_square() {
            return invalid("LU of a non-square matrix");
        }
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs();
        let tiny = scale * S::R::epsilon() * S::R::count(n.max(1)) * c(1e-3);
        for k in 0..n {
            let mut piv = k;
            let mut best = lu[(k, k)].modulus();
            for i in k + 1..n {
                let m = lu[(i, k)].modulus();
                if m > best {
                    best = m;
                    piv = i;
                }
            }
            if best <= tiny || best == S::R::zero() {
                return Err(Error::Numeric(format!(
                    "singular matrix: pivot {k} of {n} vanishes"
                )));
            }
            if piv != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                if f == S::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] = lu[(i, j)] - f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &[S]) -> Vec<S> {
        let n = self.lu.rows;
        assert_eq!(b.len(), n);
        let mut x: Vec<S> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s = s - self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s = s - self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }

    /// `‖A⁻¹‖₁`, from explicit solves against the unit vectors.
    pub fn inverse_norm1(&self) -> S::R {
        let n = self.lu.rows;
        let mut best = S::R::zero();
        for j in 0..n {
            let mut e = vec![S::zero(); n];
            e[j] = S::one();
            let col = self.solve(&e);
            best = best.max(col.iter().fold(S::R::zero(), |acc, v| acc + v.modulus()));
        }
        best
    }
}

pub fn norm1<S: Scalar>(a: &Matrix<S>) -> S::R {
    (0..a.cols)
        .map(|j| (0..a.rows).fold(S::R::zero(), |acc, i| acc + a[(i, j)].modulus()))
        .fold(S::R::zero(), |m, v| m.max(v))
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigen<S: Scalar> {
    /// Ascending eigenvalues.
    pub values: Vec<S::R>,
    /// Eigenvectors stored as columns.
    pub vectors: Matrix<S>,
    pub sweeps: usize,
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi diagonalization of a Hermitian (or real symmetric) matrix.
///
/// Eigenvalues are sorted ascending with a stable sort. Each eigenvector is
/// rescaled so that its largest-magnitude component (first one on ties) is
/// real and positive.
pub fn hermitian_eigensystem<S: Scalar>(h: &Matrix<S>) -> Result<Eigen<S>> {
    if !h.is_square() {
        return invalid("eigensystem of a non-square matrix");
    }
    let n = h.rows;
    let scale = h.max_abs();
    if h.hermiticity_defect() > scale * c(1e-12) {
        return invalid("matrix is not Hermitian within 1e-12 relative");
    }
    let two: S::R = c(2.0);
    let half: S::R = c(0.5);
    let mut a = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            S::from_real(h[(i, i)].re())
        } else {
            (h[(i, j)] + h[(j, i)].conj()).scale(half)
        }
    });
    let mut v = Matrix::<S>::identity(n);
    let fro = a.frobenius();
    let goal = fro * c(1e-14);
    let mut sweeps = 0;
    let off_norm = |a: &Matrix<S>| {
        let mut s = S::R::zero();
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    let m = a[(p, q)].modulus();
                    s = s + m * m;
                }
            }
        }
        s.sqrt()
    };
    loop {
        let off = off_norm(&a);
        if off <= goal || off == S::R::zero() {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::Numeric(format!(
                "Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:e})"
            )));
        }
        sweeps += 1;
        let thresh = if sweeps < 4 {
            let mut s = S::R::zero();
            for p in 0..n {
                for q in p + 1..n {
                    s = s + a[(p, q)].modulus();
                }
            }
            c::<S::R>(0.2) * s / S::R::count(n * n)
        } else {
            S::R::zero()
        };
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.modulus();
                if mag == S::R::zero() {
                    continue;
                }
                let app = a[(p, p)].re();
                let aqq = a[(q, q)].re();
                let g = c::<S::R>(100.0) * mag;
                if sweeps > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[(p, q)] = S::zero();
                    a[(q, p)] = S::zero();
                    continue;
                }
                if mag <= thresh {
                    continue;
                }
                let zeta = (aqq - app) / (two * mag);
                let t = if zeta.abs() > c(1e150) {
                    half / zeta
                } else {
                    let s = if zeta >= S::R::zero() {
                        S::R::one()
                    } else {
                        -S::R::one()
                    };
                    s / (zeta.abs() + (S::R::one() + zeta * zeta).sqrt())
                };
                let cs = S::R::one() / (S::R::one() + t * t).sqrt();
                let sn = t * cs;
                let u = apq.scale(S::R::one() / mag);
                let ub = u.conj();
                let jpp = S::from_real(cs);
                let jqp = ub.scale(-sn);
                let jpq = S::from_real(sn);
                let jqq = ub.scale(cs);
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[(p, q)] = S::zero();
                a[(q, p)] = S::zero();
                a[(p, p)] = S::from_real(app - t * mag);
                a[(q, q)] = S::from_real(aqq + t * mag);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }
    let raw: Vec<S::R> = (0..n).map(|i| a[(i, i)].re()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw[i].partial_cmp(&raw[j]).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| raw[i]).collect();
    let mut vectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    for j in 0..n {
        let mut best = 0;
        let mut bm = S::R::zero();
        for i in 0..n {
            let m = vectors[(i, j)].modulus();
            if m > bm {
                bm = m;
                best = i;
            }
        }
        if bm > S::R::zero() {
            let phase = vectors[(best, j)].conj().scale(S::R::one() / bm);
            for i in 0..n {
                vectors[(i, j)] = vectors[(i, j)] * phase;
            }
            vectors[(best, j)] = S::from_real(vectors[(best, j)].modulus());
        }
    }
    Ok(Eigen {
        values,
        vectors,
        sweeps,
    })
}

/// Returns `V† A V`.
pub fn to_eigenbasis<S: Scalar>(a: &Matrix<S>, v: &Matrix<S>) -> Result<Matrix<S>> {
    if a.rows != a.cols || v.rows != a.rows {
        return invalid(format!(
            "dimension mismatch: A is {}x{}, V is {}x{}",
            a.rows, a.cols, v.rows, v.cols
        ));
    }
    v.adjoint().matmul(&a.matmul(v)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    type C64 = Complex<f64>;

    fn random_hermitian(n: usize, seed: u64) -> CMatrix<f64> {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let mut h = CMatrix::zeros(n, n);
        for i in 0..n {
            h[(i, i)] = C64::new(rng.gen_range(-2.0..2.0), 0.0);
            for j in i + 1..n {
                let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
            }
        }
        h
    }

    #[test]
    fn diagonal_input_is_returned_unchanged() {
        let h = RMatrix::diagonal(&[-1.0, 1.0]);
        let e = hermitian_eigensystem(&h).unwrap();
        assert_eq!(e.values, vec![-1.0, 1.0]);
        assert_eq!(e.vectors, RMatrix::identity(2));
    }

    #[test]
    fn qubit_hamiltonian_has_unit_gap() {
        let (eps, delta) = (0.8, 0.6);
        let h = RMatrix::from_rows(&[
            vec![-eps / 2.0, -delta / 2.0],
            vec![-delta / 2.0, eps / 2.0],
        ])
        .unwrap();
        let e = hermitian_eigensystem(&h).unwrap();
        assert!((e.values[0] + 0.5).abs() < 1e-15);
        assert!((e.values[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn reconstructs_random_hermitian() {
        let h = random_hermitian(8, 7);
        let e = hermitian_eigensystem(&h).unwrap();
        let d = CMatrix::diagonal(
            &e.values
                .iter()
                .map(|&x| C64::new(x, 0.0))
                .collect::<Vec<_>>(),
        );
        let rec = &(&e.vectors * &d) * &e.vectors.adjoint();
        assert!((&rec - &h).max_abs() < 1e-10);
        let vv = &e.vectors.adjoint() * &e.vectors;
        assert!((&vv - &CMatrix::identity(8)).max_abs() < 1e-10);
    }

    #[test]
    fn phase_convention_is_reproducible() {
        let h = random_hermitian(6, 11);
        let a = hermitian_eigensystem(&h).unwrap();
        let b = hermitian_eigensystem(&h).unwrap();
        assert_eq!(a, b);
        for j in 0..6 {
            let col: Vec<C64> = (0..6).map(|i| a.vectors[(i, j)]).collect();
            let big = col.iter().cloned().fold(C64::new(0.0, 0.0), |m, z| {
                if z.norm() > m.norm() {
                    z
                } else {
                    m
                }
            });
            assert!(big.im == 0.0 && big.re > 0.0);
        }
    }

    #[test]
    fn matches_characteristic_polynomial_roots() {
        // 2x2: λ = (a+d)/2 ± sqrt(((a−d)/2)² + |b|²)
        let (a, d, b) = (0.3, -1.1, C64::new(0.4, -0.7));
        let h = CMatrix::from_rows(&[vec![C64::new(a, 0.0), b], vec![b.conj(), C64::new(d, 0.0)]])
            .unwrap();
        let e = hermitian_eigensystem(&h).unwrap();
        let r = (((a - d) / 2.0).powi(2) + b.norm_sqr()).sqrt();
        assert!((e.values[0] - ((a + d) / 2.0 - r)).abs() < 1e-12);
        assert!((e.values[1] - ((a + d) / 2.0 + r)).abs() < 1e-12);

        // 3x3 real symmetric: trigonometric cubic roots
        let m = RMatrix::from_rows(&[
            vec![2.0, 1.0, 0.5],
            vec![1.0, -1.0, 0.3],
            vec![0.5, 0.3, 0.7],
        ])
        .unwrap();
        let e = hermitian_eigensystem(&m).unwrap();
        let q = m.trace() / 3.0;
        let shifted = &m - &RMatrix::identity(3).scaled(q);
        let p = (shifted.frobenius().powi(2) / 6.0).sqrt();
        let bmat = shifted.scaled(1.0 / p);
        let det = bmat[(0, 0)] * (bmat[(1, 1)] * bmat[(2, 2)] - bmat[(1, 2)] * bmat[(2, 1)])
            - bmat[(0, 1)] * (bmat[(1, 0)] * bmat[(2, 2)] - bmat[(1, 2)] * bmat[(2, 0)])
            + bmat[(0, 2)] * (bmat[(1, 0)] * bmat[(2, 1)] - bmat[(1, 1)] * bmat[(2, 0)]);
        let phi = (det / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
        let mut roots = [
            0.0,
            2.0 * std::f64::consts::PI / 3.0,
            4.0 * std::f64::consts::PI / 3.0,
        ]
        .map(|s| q + 2.0 * p * (phi + s).cos());
        roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (x, y) in e.values.iter().zip(roots) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = RMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            hermitian_eigensystem(&h),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn single_precision_path() {
        let h = RMatrix::<f32>::from_rows(&[vec![1.0, 0.5], vec![0.5, -1.0]]).unwrap();
        let e = hermitian_eigensystem(&h).unwrap();
        let r = (1.0f32 + 0.25).sqrt();
        assert!((e.values[1] - r).abs() < 1e-6);
    }

    #[test]
    fn eigenbasis_transform_examples() {
        let sx = RMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let sz = RMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        let e = hermitian_eigensystem(&sx).unwrap();
        let t = to_eigenbasis(&sz, &e.vectors).unwrap();
        assert!(t[(0, 0)].abs() < 1e-15 && t[(1, 1)].abs() < 1e-15);
        assert!((t[(0, 1)].abs() - 1.0).abs() < 1e-15);
        let id = to_eigenbasis(&RMatrix::identity(2), &e.vectors).unwrap();
        assert!((&id - &RMatrix::identity(2)).max_abs() < 1e-15);

        let h = random_hermitian(5, 3);
        let a = random_hermitian(5, 4);
        let v = hermitian_eigensystem(&h).unwrap().vectors;
        let b = to_eigenbasis(&a, &v).unwrap();
        assert!((b.trace() - a.trace()).norm() < 1e-12);
        let ea = hermitian_eigensystem(&a).unwrap().values;
        let eb = hermitian_eigensystem(&b).unwrap().values;
        for (x, y) in ea.iter().zip(&eb) {
            assert!((x - y).abs() < 1e-10);
        }
        assert!(to_eigenbasis(&a, &RMatrix::<f64>::identity(2).to_complex()).is_err());
    }

    #[test]
    fn lu_solves_complex_system() {
        let a = random_hermitian(6, 9);
        let x: Vec<C64> = (0..6).map(|i| C64::new(i as f64, 1.0 - i as f64)).collect();
        let b = a.mul_vec(&x);
        let sol = Lu::new(&a).unwrap().solve(&b);
        for (s, t) in sol.iter().zip(&x) {
            assert!((s - t).norm() < 1e-10);
        }
    }

    #[test]
    fn lu_detects_singularity() {
        let a = RMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(Lu::new(&a), Err(Error::Numeric(_))));
    }
}
