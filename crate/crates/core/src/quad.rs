//! Adaptive Gauss–Kronrod (10/21-point) quadrature on finite and
//! semi-infinite intervals.

use crate::error::{Error, Result};
use crate::real::{c, Real};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadOptions<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_intervals: usize,
}

impl<T: Real> Default for QuadOptions<T> {
    fn default() -> Self {
        Self {
            abs_tol: c(1e-13),
            rel_tol: c(1e-11),
            max_intervals: 4000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
}

fn kronrod<T: Real>(f: &mut impl FnMut(T) -> T, a: T, b: T) -> (T, T) {
    let half = (b - a) * c(0.5);
    let mid = (a + b) * c(0.5);
    let fc = f(mid);
    let mut resk = fc * c(WGK[10]);
    let mut resg = T::zero();
    for j in 0..10 {
        let dx = half * c(XGK[j]);
        let s = f(mid - dx) + f(mid + dx);
        resk += s * c(WGK[j]);
        if j % 2 == 1 {
            resg += s * c(WG[j / 2]);
        }
    }
    (resk * half, ((resk - resg) * half).abs())
}

/// Integrates `f` over `[a, b]` by global adaptive bisection.
pub fn integrate<T: Real>(
    mut f: impl FnMut(T) -> T,
    a: T,
    b: T,
    opts: QuadOptions<T>,
) -> Result<Estimate<T>> {
    if a == b {
        return Ok(Estimate {
            value: T::zero(),
            error: T::zero(),
        });
    }
    let (v0, e0) = kronrod(&mut f, a, b);
    let mut pieces = vec![(a, b, v0, e0)];
    let mut value = v0;
    let mut error = e0;
    loop {
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::Numeric(
                "quadrature produced a non-finite value".into(),
            ));
        }
        let goal = opts.abs_tol.max(opts.rel_tol * value.abs());
        if error <= goal {
            break;
        }
        if pieces.len() >= opts.max_intervals {
            return Err(Error::Numeric(format!(
                "quadrature did not converge: error {error:e} above goal {goal:e} after {} intervals",
                pieces.len()
            )));
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (i, p)| {
                if p.3 > best.1 {
                    (i, p.3)
                } else {
                    best
                }
            });
        let (lo, hi, v, e) = pieces.swap_remove(idx);
        let mid = (lo + hi) * c(0.5);
        if !(mid > lo && mid < hi) {
            return Err(Error::Numeric("quadrature interval underflow".into()));
        }
        let (v1, e1) = kronrod(&mut f, lo, mid);
        let (v2, e2) = kronrod(&mut f, mid, hi);
        value = value - v + v1 + v2;
        error = error - e + e1 + e2;
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
    // Re-sum to shed the drift of incremental updates.
    let value = pieces.iter().fold(T::zero(), |s, p| s + p.2);
    let error = pieces.iter().fold(T::zero(), |s, p| s + p.3);
    Ok(Estimate { value, error })
}

/// Integrates `f` over `[a, ∞)` via x = a + t/(1−t).
pub fn integrate_to_infinity<T: Real>(
    mut f: impl FnMut(T) -> T,
    a: T,
    opts: QuadOptions<T>,
) -> Result<Estimate<T>> {
    integrate(
        |t: T| {
            let u = T::one() - t;
            if u <= T::zero() {
                return T::zero();
            }
            let x = a + t / u;
            let v = f(x) / (u * u);
            if v.is_finite() {
                v
            } else {
                T::zero()
            }
        },
        T::zero(),
        T::one(),
        opts,
    )
}

/// Integrates `f` over `(−∞, b]` via x = b − t/(1−t).
pub fn integrate_from_neg_infinity<T: Real>(
    mut f: impl FnMut(T) -> T,
    b: T,
    opts: QuadOptions<T>,
) -> Result<Estimate<T>> {
    integrate_to_infinity(|x| f(b - (x - b)), b, opts)
}

/// Integrates over `[a, b]` split at the interior points `breaks`.
pub fn integrate_split<T: Real>(
    mut f: impl FnMut(T) -> T,
    a: T,
    b: T,
    breaks: &[T],
    opts: QuadOptions<T>,
) -> Result<Estimate<T>> {
    let mut points = vec![a];
    let mut inner: Vec<T> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    inner.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
    inner.dedup();
    points.extend(inner);
    points.push(b);
    let mut total = Estimate {
        value: T::zero(),
        error: T::zero(),
    };
    for w in points.windows(2) {
        let e = integrate(&mut f, w[0], w[1], opts)?;
        total.value += e.value;
        total.error += e.error;
    }
    Ok(total)
}
