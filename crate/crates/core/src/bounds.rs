//! Quaternary entropy, the volume and weight bounds built on it, the rate
//! choice for `L_{N,K}`, and rate/relative-distance curves for comparison.
//!
//! Everything real-valued is generic over [`Real`] (`f32` or `f64`); counts
//! that must be exact use big integers and rationals.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FromPrimitive, One, ToPrimitive, Zero};
use thiserror::Error;

/// Floating-point scalar used by the analytic routines.
pub trait Real: Float + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static {}

impl Real for f32 {}
impl Real for f64 {}

#[inline]
fn c<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("finite constant")
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("argument {value} outside the domain [{lo}, {hi}]")]
    Domain { value: f64, lo: f64, hi: f64 },
    #[error("lambda * n = {0} is not an integer")]
    NotIntegral(String),
    #[error("n = {0} exceeds the supported maximum of 64")]
    TooLarge(u32),
    #[error("M = {m} outside 1..={max}")]
    CountOutOfRange { m: u64, max: u64 },
    #[error("tuple length L = {0} unsupported (need 1..=16)")]
    BadLength(u32),
    #[error("curve `{curve}` requires parameter `{param}`")]
    MissingParam { curve: CurveName, param: &'static str },
    #[error("curve `{curve}` parameter {param} = {value} is out of range")]
    BadParam { curve: CurveName, param: &'static str, value: u32 },
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
}

fn domain<T: Real>(x: T, lo: f64, hi: f64) -> Result<(), BoundsError> {
    if x.is_nan() || x < c(lo) || x > c(hi) {
        return Err(BoundsError::Domain { value: x.to_f64().unwrap_or(f64::NAN), lo, hi });
    }
    Ok(())
}

/// `H_4(x) = -x log_4(x/3) - (1-x) log_4(1-x)` on `[0, 1]`, with the
/// endpoint values taken by continuity.
pub fn h4<T: Real>(x: T) -> Result<T, BoundsError> {
    domain(x, 0.0, 1.0)?;
    let four = c::<T>(4.0);
    let three = c::<T>(3.0);
    let mut acc = T::zero();
    if x > T::zero() {
        acc = acc - x * (x / three).log(four);
    }
    let rest = T::one() - x;
    if rest > T::zero() {
        acc = acc - rest * rest.log(four);
    }
    Ok(acc)
}

/// Inverse of [`h4`] on its increasing branch `[0, 3/4]`, by bisection until
/// the bracket stops shrinking.
pub fn h4_inv<T: Real>(y: T) -> Result<T, BoundsError> {
    domain(y, 0.0, 1.0)?;
    let three_quarters = c::<T>(0.75);
    if y == T::zero() {
        return Ok(T::zero());
    }
    if y == T::one() {
        return Ok(three_quarters);
    }
    let (mut lo, mut hi) = (T::zero(), three_quarters);
    let half = c::<T>(0.5);
    for _ in 0..256 {
        let mid = (lo + hi) * half;
        if mid <= lo || mid >= hi {
            break;
        }
        if h4(mid)? < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * half)
}

/// Relative margin applied when a real-valued bound is compared against an
/// exact quantity.
pub fn outward_margin<T: Real>() -> T {
    c::<T>(1e-9).max(T::epsilon() * c(16.0))
}

/// Outcome of checking `sum_{k <= lambda n} 3^k C(n, k) <= 4^(n H_4(lambda))`.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeBoundCheck<T> {
    pub n: u32,
    pub lambda: Ratio<u64>,
    pub lhs: BigUint,
    pub rhs: T,
    /// `(4^(-r lambda) + 3 * 4^(r (1 - lambda)))^n` at `r = log_4(lambda / (3 (1 - lambda)))`.
    pub intermediate: T,
    pub holds: bool,
    pub intermediate_holds: bool,
}

/// `sum_{k=0}^{top} 3^k C(n, k)`, exactly.
pub fn volume_sum(n: u32, top: u32) -> BigUint {
    let mut acc = BigUint::zero();
    let mut term = BigUint::one();
    for k in 0..=top.min(n) {
        if k > 0 {
            term = term * 3u32 * (n - k + 1) / k;
        }
        acc += &term;
    }
    acc
}

/// Verifies the volume bound for one `(n, lambda)` pair with `lambda n`
/// integral and `0 <= lambda < 3/4`.
pub fn volume_bound_check<T: Real>(n: u32, lambda: Ratio<u64>) -> Result<VolumeBoundCheck<T>, BoundsError> {
    if n > 64 {
        return Err(BoundsError::TooLarge(n));
    }
    let lam_f = lambda.to_f64().unwrap_or(f64::NAN);
    if !(0.0..0.75).contains(&lam_f) || lambda >= Ratio::new(3, 4) {
        return Err(BoundsError::Domain { value: lam_f, lo: 0.0, hi: 0.75 });
    }
    let scaled = lambda * Ratio::from_integer(u64::from(n));
    if !scaled.is_integer() {
        return Err(BoundsError::NotIntegral(scaled.to_string()));
    }
    let top = scaled.to_integer() as u32;
    let lhs = volume_sum(n, top);

    let lam: T = c(lam_f);
    let four = c::<T>(4.0);
    let nt = T::from_u32(n).expect("small integer");
    let rhs = four.powf(nt * h4(lam)?);
    let intermediate = if lam == T::zero() {
        T::one()
    } else {
        let r = (lam / (c::<T>(3.0) * (T::one() - lam))).log(four);
        (four.powf(-r * lam) + c::<T>(3.0) * four.powf(r * (T::one() - lam))).powf(nt)
    };
    let lhs_t: T = c(lhs.to_f64().expect("finite"));
    let margin = T::one() + outward_margin::<T>();
    Ok(VolumeBoundCheck {
        n,
        lambda,
        holds: lhs_t <= rhs * margin,
        intermediate_holds: lhs_t <= intermediate * margin,
        lhs,
        rhs,
        intermediate,
    })
}

/// Every admissible `lambda = j / n` with `0 < lambda < 3/4`.
pub fn volume_bound_grid(n: u32) -> impl Iterator<Item = Ratio<u64>> {
    let n64 = u64::from(n);
    (1..n64).map(move |j| Ratio::new(j, n64)).filter(|l| *l < Ratio::new(3, 4))
}

/// A set of `M` distinct nonzero quaternary `L`-tuples, parameterised as
/// `M = gamma (4^(delta L) - 1)`, with the threshold `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightBoundQuery<T> {
    pub l: u32,
    pub m: u64,
    pub gamma: T,
    pub delta: T,
    pub lambda: T,
}

impl<T: Real> WeightBoundQuery<T> {
    /// Builds a query from `M` and `delta`, deriving `gamma`.
    pub fn new(l: u32, m: u64, delta: T, lambda: T) -> Result<Self, BoundsError> {
        check_tuple_count(l, m)?;
        let denom = c::<T>(4.0).powf(delta * T::from_u32(l).expect("small")) - T::one();
        let gamma = T::from_u64(m).expect("small") / denom;
        Ok(WeightBoundQuery { l, m, gamma, delta, lambda })
    }
}

fn check_tuple_count(l: u32, m: u64) -> Result<(), BoundsError> {
    if !(1..=16).contains(&l) {
        return Err(BoundsError::BadLength(l));
    }
    let max = 4u64.pow(l) - 1;
    if !(1..=max).contains(&m) {
        return Err(BoundsError::CountOutOfRange { m, max });
    }
    Ok(())
}

/// Finite-length core of the total-weight bound: `lambda L (M - 4^(L H_4(lambda)))`.
/// The vanishing correction terms of the asymptotic statement are not included.
pub fn weight_bound<T: Real>(q: &WeightBoundQuery<T>) -> Result<T, BoundsError> {
    if !(q.lambda > T::zero() && q.lambda < c(0.75)) {
        return Err(BoundsError::Domain { value: q.lambda.to_f64().unwrap_or(f64::NAN), lo: 0.0, hi: 0.75 });
    }
    check_tuple_count(q.l, q.m)?;
    let l = T::from_u32(q.l).expect("small");
    let m = T::from_u64(q.m).expect("small");
    Ok(q.lambda * l * (m - c::<T>(4.0).powf(l * h4(q.lambda)?)))
}

/// The asymptotic threshold `lambda = H_4^{-1}(delta - 1 / ln L)`; `None`
/// when the argument leaves `[0, 1]` or the result is not inside `(0, 3/4)`.
pub fn asymptotic_weight_lambda<T: Real>(delta: T, l: u32) -> Option<T> {
    if l < 2 {
        return None;
    }
    let arg = delta - T::one() / T::from_u32(l)?.ln();
    let lam = h4_inv(arg).ok()?;
    (lam > T::zero() && lam < c(0.75)).then_some(lam)
}

/// Minimum total Hamming weight of `M` distinct nonzero quaternary
/// `L`-tuples: take tuples lightest first, `3^w C(L, w)` of weight `w`.
pub fn min_total_weight(l: u32, m: u64) -> Result<u64, BoundsError> {
    check_tuple_count(l, m)?;
    let mut remaining = m;
    let mut total = 0u64;
    let mut binom = 1u64;
    for w in 1..=u64::from(l) {
        binom = binom * (u64::from(l) - w + 1) / w;
        let count = 3u64.pow(w as u32) * binom;
        let take = remaining.min(count);
        total += take * w;
        remaining -= take;
        if remaining == 0 {
            break;
        }
    }
    Ok(total)
}

/// Parameters of `L_{N,K}` for target rate `R` at a given `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateChoice<T> {
    pub m: u32,
    pub big_k: u64,
    pub big_n: u64,
    pub n: u64,
    pub k: u64,
    pub rate: T,
    /// `m (N - 2K) / (N (2m + 1))` as an exact fraction.
    pub rate_exact: Ratio<u64>,
    /// True when `(2m + 1) R / m >= 1` forced `K` to be clamped at zero.
    pub clamped: bool,
    /// Exact comparison `rate_exact >= R`.
    pub meets_target: bool,
}

/// `K = floor((1/2)(1 - (2m+1) R / m)(2^(2m) - 1))`, computed exactly from the
/// binary value of `R`.
pub fn rate_choice<T: Real>(m: u32, rate: T) -> Result<RateChoice<T>, BoundsError> {
    if !(rate > T::zero() && rate < c(0.5)) {
        return Err(BoundsError::Domain { value: rate.to_f64().unwrap_or(f64::NAN), lo: 0.0, hi: 0.5 });
    }
    if !(1..=31).contains(&m) {
        return Err(BoundsError::BadLength(m));
    }
    let big_n = (1u64 << (2 * m)) - 1;
    let r_exact = BigRational::from_float(rate.to_f64().expect("finite")).expect("finite rate");
    let mi = BigInt::from(m);
    let arg = (BigRational::from_integer(mi.clone()) - BigRational::from_integer(BigInt::from(2 * m + 1)) * &r_exact)
        * BigRational::from_integer(BigInt::from(big_n))
        / BigRational::from_integer(BigInt::from(2u32) * &mi);
    let floor = arg.floor().to_integer();
    let clamped = floor < BigInt::zero();
    let big_k = if clamped { 0 } else { floor.to_u64().expect("bounded by N") };
    let num = u64::from(m) * (big_n - 2 * big_k);
    let den = big_n * (2 * u64::from(m) + 1);
    let rate_exact = Ratio::new(num, den);
    let meets_target = BigRational::new(BigInt::from(num), BigInt::from(den)) >= r_exact;
    Ok(RateChoice {
        m,
        big_k,
        big_n,
        n: 2 * big_n * (2 * u64::from(m) + 1),
        k: 2 * u64::from(m) * (big_n - 2 * big_k),
        rate: c::<T>(num as f64) / c::<T>(den as f64),
        rate_exact,
        clamped,
        meets_target,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveName {
    Ours,
    OursFiniteM,
    Ashikhmin,
    Chen,
    Matsumoto,
    BaselineRs,
}

impl CurveName {
    pub const ALL: [CurveName; 6] = [
        CurveName::Ours,
        CurveName::OursFiniteM,
        CurveName::Ashikhmin,
        CurveName::Chen,
        CurveName::Matsumoto,
        CurveName::BaselineRs,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CurveName::Ours => "ours",
            CurveName::OursFiniteM => "ours_finite_m",
            CurveName::Ashikhmin => "ashikhmin",
            CurveName::Chen => "chen",
            CurveName::Matsumoto => "matsumoto",
            CurveName::BaselineRs => "baseline_rs",
        }
    }
}

impl fmt::Display for CurveName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CurveName {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CurveName::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| BoundsError::UnknownCurve(s.to_string()))
    }
}

/// Integer parameters a curve may need.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CurveParams {
    pub m: Option<u32>,
    pub t: Option<u32>,
}

/// `(rate, relative distance)` points of one curve.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve<T> {
    pub name: CurveName,
    pub params: CurveParams,
    pub points: Vec<(T, T)>,
    /// Grid rates with no point in the curve's domain.
    pub omitted: Vec<T>,
}

impl<T> BoundCurve<T> {
    pub fn params_label(&self) -> String {
        match (self.params.m, self.params.t) {
            (Some(m), Some(t)) => format!("m={m};t={t}"),
            (Some(m), None) => format!("m={m}"),
            (None, Some(t)) => format!("t={t}"),
            (None, None) => String::new(),
        }
    }
}

/// `steps` evenly spaced rates from `lo` to `hi` inclusive.
pub fn rate_grid<T: Real>(lo: T, hi: T, steps: usize) -> Vec<T> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let span = hi - lo;
            let last = T::from_usize(steps - 1).expect("small");
            (0..steps).map(|i| lo + span * T::from_usize(i).expect("small") / last).collect()
        }
    }
}

/// `delta(R) = H_4^{-1}(1/4) (1 - 2R) / 4`, the limiting relative distance of `L_{N,K}`.
pub fn ours_delta<T: Real>(rate: T) -> T {
    h4_inv(c::<T>(0.25)).expect("in domain") / c(4.0) * (T::one() - c::<T>(2.0) * rate)
}

/// Main term of the finite-`m` distance bound (the vanishing correction is dropped):
/// `[(2^(2m) - 2^m)/(2^(2m) - 1)] (1/4) (1 - (2m+1) R / m) H_4^{-1}(m / (4m + 2))`.
pub fn ours_finite_m_delta<T: Real>(m: u32, rate: T) -> T {
    let mt = T::from_u32(m).expect("small");
    let q = c::<T>(2.0).powi(2 * m as i32);
    let s = c::<T>(2.0).powi(m as i32);
    let lead = (q - s) / (q - T::one());
    let slope = (c::<T>(2.0) * mt + T::one()) / mt;
    let h = h4_inv(mt / (c::<T>(4.0) * mt + c(2.0))).expect("m/(4m+2) lies in [0, 1/4]");
    lead * c(0.25) * (T::one() - slope * rate) * h
}

/// `delta_t = (2/3)(2^t - 3) / ((2t + 1)(2^t - 1))`.
pub fn chen_delta_t<T: Real>(t: u32) -> T {
    let p = c::<T>(2.0).powi(t as i32);
    let tt = T::from_u32(t).expect("small");
    c::<T>(2.0 / 3.0) * (p - c(3.0)) / ((c::<T>(2.0) * tt + T::one()) * (p - T::one()))
}

/// `(K + 1) / (m N)` of the binary image of a CSS Reed-Solomon code over
/// GF(2^m) (`N = 2^m - 1`) at rate at least `rate`; returns `(achieved rate, ratio)`.
pub fn baseline_rs_point<T: Real>(m: u32, rate: T) -> (T, T) {
    let big_n = (1u64 << m) - 1;
    let nt = c::<T>(big_n as f64);
    let big_k = ((T::one() - rate) * nt / c(2.0)).floor().max(T::zero());
    let achieved = (nt - c::<T>(2.0) * big_k) / nt;
    let ratio = (big_k + T::one()) / (T::from_u32(m).expect("small") * nt);
    (achieved, ratio)
}

fn require(curve: CurveName, value: Option<u32>, param: &'static str, min: u32) -> Result<u32, BoundsError> {
    let v = value.ok_or(BoundsError::MissingParam { curve, param })?;
    if v < min || v > 30 {
        return Err(BoundsError::BadParam { curve, param, value: v });
    }
    Ok(v)
}

/// Evaluates the named curve over a rate grid. Grid points outside the
/// curve's (closed) domain are reported in `omitted`, never clamped.
pub fn delta_curve<T: Real>(name: CurveName, params: CurveParams, grid: &[T]) -> Result<BoundCurve<T>, BoundsError> {
    let zero = T::zero();
    let in_unit = |r: T| r >= zero && r <= T::one();
    let mut points = Vec::new();
    let mut omitted = Vec::new();
    let mut keep = |r: T, d: Option<T>| match d {
        Some(d) if in_unit(r) && d >= zero && d <= T::one() && d.is_finite() => points.push((r, d)),
        _ => omitted.push(r),
    };
    let used = match name {
        CurveName::Ours => {
            for &r in grid {
                keep(r, (r >= zero && r <= c(0.5)).then(|| ours_delta(r)));
            }
            CurveParams::default()
        }
        CurveName::OursFiniteM => {
            let m = require(name, params.m, "m", 1)?;
            for &r in grid {
                let d = ours_finite_m_delta(m, r);
                keep(r, (r >= zero && d >= zero).then_some(d));
            }
            CurveParams { m: Some(m), t: None }
        }
        CurveName::Ashikhmin | CurveName::Matsumoto => {
            let m = require(name, params.m, "m", 2)?;
            let mt = T::from_u32(m).expect("small");
            let p = c::<T>(2.0).powi(m as i32);
            let (intercept, delta_max) = if name == CurveName::Ashikhmin {
                (T::one() - T::one() / (c::<T>(2.0).powi(m as i32 - 1) - T::one()), c::<T>(1.0 / 18.0))
            } else {
                let inv = T::one() / (p - T::one());
                (T::one() - c::<T>(2.0) * inv, (c::<T>(0.5) - inv) / (c::<T>(2.0) * mt))
            };
            // R = intercept - (10/3) m delta, solved for delta
            for &r in grid {
                let d = (intercept - r) * c(3.0) / (c::<T>(10.0) * mt);
                keep(r, (d >= zero && d <= delta_max).then_some(d));
            }
            CurveParams { m: Some(m), t: None }
        }
        CurveName::Chen => {
            let t = require(name, params.t, "t", 3)?;
            let dt = chen_delta_t::<T>(t);
            let tt = T::from_u32(t).expect("small");
            for &r in grid {
                let d = dt - r / (c::<T>(3.0) * tt);
                keep(r, (d >= zero && d <= dt).then_some(d));
            }
            CurveParams { m: None, t: Some(t) }
        }
        CurveName::BaselineRs => {
            let m = require(name, params.m, "m", 1)?;
            for &r in grid {
                if in_unit(r) {
                    let (achieved, ratio) = baseline_rs_point(m, r);
                    keep(achieved, Some(ratio));
                } else {
                    keep(r, None);
                }
            }
            CurveParams { m: Some(m), t: None }
        }
    };
    points.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite rates"));
    Ok(BoundCurve { name, params: used, points, omitted })
}

/// `%.12g`-style rendering: 12 significant digits, trailing zeros trimmed.
pub fn format_sig<T: Real>(x: T) -> String {
    let v = x.to_f64().unwrap_or(f64::NAN);
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.11e}", v);
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, v);
        trim_zeros(&s)
    } else {
        format!("{}e{}{:02}", trim_zeros(mant), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub const CSV_HEADER: &str = "R,delta,curve,params";

/// Writes `R,delta,curve,params` rows for each curve, header first.
pub fn write_csv<T: Real, W: Write + ?Sized>(out: &mut W, curves: &[BoundCurve<T>]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for curve in curves {
        let label = curve.params_label();
        for &(r, d) in &curve.points {
            writeln!(out, "{},{},{},{}", format_sig(r), format_sig(d), curve.name, label)?;
        }
    }
    Ok(())
}
