//! Arithmetic in GF(2^k) over a polynomial basis, the absolute trace, and
//! self-dual bases with their coordinate maps.

use std::fmt;
use std::ops::{Add, AddAssign};

use thiserror::Error;

/// Largest extension degree accepted by [`Field::new`].
pub const MAX_DEGREE: u32 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("extension degree {0} is outside the supported range 2..={MAX_DEGREE}")]
    UnsupportedDegree(u32),
    #[error("modulus {modulus:#x} is not a primitive polynomial of degree {degree}")]
    NotPrimitive { modulus: u32, degree: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("element {0:#x} does not belong to the field")]
    ForeignElement(u32),
    #[error("basis has {got} elements, expected {expected}")]
    BasisLength { got: usize, expected: usize },
    #[error("basis fails the Gram condition at ({i}, {j}): Tr(b_i b_j) = {value}")]
    NotSelfDual { i: usize, j: usize, value: u8 },
    #[error("self-dual basis search exhausted the field without success")]
    NoSelfDualBasis,
}

/// An element of GF(2^k), stored as its coordinate bits in the polynomial
/// basis `1, x, .., x^(k-1)` of the field modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

// Addition in characteristic 2 is bitwise XOR of the coefficient vectors.
impl Add for FieldElement {
    type Output = FieldElement;

    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

impl AddAssign for FieldElement {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

impl fmt::LowerHex for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

/// Carry-less product of `a` and `b` reduced modulo `modulus` (degree `degree`).
#[inline]
fn mul_mod(mut a: u32, mut b: u32, modulus: u32, degree: u32) -> u32 {
    let top = 1u32 << degree;
    let mut acc = 0u32;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= modulus;
        }
    }
    acc
}

fn pow_mod(base: u32, mut exp: u64, modulus: u32, degree: u32) -> u32 {
    let mut acc = 1u32;
    let mut sq = base;
    while exp != 0 {
        if exp & 1 != 0 {
            acc = mul_mod(acc, sq, modulus, degree);
        }
        sq = mul_mod(sq, sq, modulus, degree);
        exp >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// True when the class of `x` has multiplicative order `2^degree - 1` modulo
/// `modulus`. A polynomial passing this test is necessarily irreducible.
pub fn is_primitive_polynomial(modulus: u32, degree: u32) -> bool {
    if !(2..=MAX_DEGREE).contains(&degree) || modulus >> degree != 1 || modulus & 1 == 0 {
        return false;
    }
    let group = (1u64 << degree) - 1;
    let x = 2;
    if pow_mod(x, group, modulus, degree) != 1 {
        return false;
    }
    prime_factors(group).into_iter().all(|p| pow_mod(x, group / p, modulus, degree) != 1)
}

/// GF(2^k) with a fixed primitive modulus and `alpha` the class of `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    degree: u32,
    modulus: u32,
    // bit i set iff Tr(x^i) = 1
    trace_mask: u32,
}

impl Field {
    /// Builds GF(2^degree) over the numerically smallest primitive polynomial.
    pub fn new(degree: u32) -> Result<Field, FieldError> {
        if !(2..=MAX_DEGREE).contains(&degree) {
            return Err(FieldError::UnsupportedDegree(degree));
        }
        let lo = 1u32 << degree;
        let modulus = (lo..lo << 1)
            .find(|&p| is_primitive_polynomial(p, degree))
            .expect("primitive polynomials exist in every degree");
        Ok(Field::assemble(degree, modulus))
    }

    /// Builds the field over an explicitly supplied modulus, which must be primitive.
    pub fn with_modulus(degree: u32, modulus: u32) -> Result<Field, FieldError> {
        if !(2..=MAX_DEGREE).contains(&degree) {
            return Err(FieldError::UnsupportedDegree(degree));
        }
        if !is_primitive_polynomial(modulus, degree) {
            return Err(FieldError::NotPrimitive { modulus, degree });
        }
        Ok(Field::assemble(degree, modulus))
    }

    fn assemble(degree: u32, modulus: u32) -> Field {
        let mut f = Field { degree, modulus, trace_mask: 0 };
        let mut mask = 0;
        for i in 0..degree {
            if f.trace_by_frobenius(FieldElement(1 << i)) == 1 {
                mask |= 1 << i;
            }
        }
        f.trace_mask = mask;
        f
    }

    /// Extension degree over GF(2).
    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of field elements, `2^degree`.
    #[inline]
    pub fn order(&self) -> u32 {
        1 << self.degree
    }

    /// Order of the multiplicative group, `2^degree - 1`.
    #[inline]
    pub fn group_order(&self) -> u32 {
        self.order() - 1
    }

    /// The primitive element, the class of `x`.
    #[inline]
    pub fn alpha(&self) -> FieldElement {
        FieldElement(2)
    }

    #[inline]
    pub fn contains(&self, x: FieldElement) -> bool {
        x.0 < self.order()
    }

    pub fn element(&self, bits: u32) -> Result<FieldElement, FieldError> {
        let x = FieldElement(bits);
        if self.contains(x) {
            Ok(x)
        } else {
            Err(FieldError::ForeignElement(bits))
        }
    }

    /// Iterates over all field elements in increasing bit order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order()).map(FieldElement)
    }

    #[inline]
    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement(mul_mod(x.0, y.0, self.modulus, self.degree))
    }

    pub fn inverse(&self, x: FieldElement) -> Result<FieldElement, FieldError> {
        if x.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        Ok(FieldElement(pow_mod(x.0, u64::from(self.group_order()) - 1, self.modulus, self.degree)))
    }

    /// `x^e` for any integer `e`; negative exponents require `x != 0`.
    pub fn pow(&self, x: FieldElement, e: i64) -> Result<FieldElement, FieldError> {
        if x.is_zero() {
            return match e.signum() {
                0 => Ok(FieldElement::ONE),
                1 => Ok(FieldElement::ZERO),
                _ => Err(FieldError::ZeroInverse),
            };
        }
        let e = e.rem_euclid(i64::from(self.group_order())) as u64;
        Ok(FieldElement(pow_mod(x.0, e, self.modulus, self.degree)))
    }

    /// `alpha^e` for any integer exponent.
    #[inline]
    pub fn alpha_pow(&self, e: i64) -> FieldElement {
        self.pow(self.alpha(), e).expect("alpha is nonzero")
    }

    #[inline]
    pub fn square(&self, x: FieldElement) -> FieldElement {
        self.mul(x, x)
    }

    /// Absolute trace `Tr(x) = x + x^2 + .. + x^(2^(k-1))`, via the
    /// precomputed linear functional.
    #[inline]
    pub fn trace(&self, x: FieldElement) -> u8 {
        ((x.0 & self.trace_mask).count_ones() & 1) as u8
    }

    /// Trace evaluated literally as the sum of Frobenius conjugates.
    pub fn trace_by_frobenius(&self, x: FieldElement) -> u8 {
        let mut acc = FieldElement::ZERO;
        let mut conj = x;
        for _ in 0..self.degree {
            acc += conj;
            conj = self.square(conj);
        }
        debug_assert!(acc.0 <= 1);
        acc.0 as u8
    }

    /// Bit mask `m` with `Tr(x * c) = parity(x & m)` for every `x`.
    pub fn trace_form_mask(&self, c: FieldElement) -> u32 {
        (0..self.degree).filter(|&i| self.trace(self.mul(FieldElement(1 << i), c)) == 1).fold(0, |m, i| m | 1 << i)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:#x}", self.degree, self.modulus)
    }
}

/// An ordered basis `beta_1..beta_k` of GF(2^k) over GF(2) with
/// `Tr(beta_i beta_j) = [i == j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfDualBasis {
    beta: Vec<FieldElement>,
    // coordinate j of x is parity(x & masks[j])
    masks: Vec<u32>,
}

impl SelfDualBasis {
    /// Validates the Gram condition for a supplied list of elements.
    pub fn from_elements(field: &Field, beta: Vec<FieldElement>) -> Result<Self, FieldError> {
        let k = field.degree() as usize;
        if beta.len() != k {
            return Err(FieldError::BasisLength { got: beta.len(), expected: k });
        }
        if let Some(&x) = beta.iter().find(|&&x| !field.contains(x)) {
            return Err(FieldError::ForeignElement(x.0));
        }
        for i in 0..k {
            for j in 0..k {
                let value = field.trace(field.mul(beta[i], beta[j]));
                if value != u8::from(i == j) {
                    return Err(FieldError::NotSelfDual { i, j, value });
                }
            }
        }
        let masks = beta.iter().map(|&b| field.trace_form_mask(b)).collect();
        Ok(SelfDualBasis { beta, masks })
    }

    #[inline]
    pub fn elements(&self) -> &[FieldElement] {
        &self.beta
    }

    /// `beta_j` with the 1-based index used throughout the construction.
    #[inline]
    pub fn beta(&self, j: usize) -> FieldElement {
        self.beta[j - 1]
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.beta.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.beta.is_empty()
    }

    /// Coordinates of `x`: bit `j - 1` holds `x_j = Tr(x beta_j)`.
    #[inline]
    pub fn coords(&self, x: FieldElement) -> u32 {
        self.masks.iter().enumerate().fold(0, |acc, (j, &m)| acc | (((x.0 & m).count_ones() & 1) << j))
    }

    /// Inverse of [`coords`](Self::coords): `sum_j bits_j beta_j`.
    #[inline]
    pub fn combine(&self, bits: u32) -> FieldElement {
        self.beta
            .iter()
            .enumerate()
            .filter(|(j, _)| bits >> j & 1 == 1)
            .fold(FieldElement::ZERO, |acc, (_, &b)| acc + b)
    }

    /// The Gram matrix `Tr(beta_i beta_j)`, row-major.
    pub fn gram(&self, field: &Field) -> Vec<Vec<u8>> {
        self.beta.iter().map(|&x| self.beta.iter().map(|&y| field.trace(field.mul(x, y))).collect()).collect()
    }
}

/// Finds the lexicographically smallest self-dual basis of `field`.
///
/// Candidates are scanned in increasing order. After choosing an orthonormal
/// prefix `S`, the trace form restricted to `S^perp` is `Tr(x * w)` with
/// `w = 1 + sum(S)`; picking `w` itself would leave an alternating (hence
/// unfinishable) complement, so it is skipped unless it is the final vector.
/// Every other admissible candidate extends to a full basis, which makes the
/// greedy scan both complete and lexicographically minimal.
pub fn find_self_dual_basis(field: &Field) -> Result<SelfDualBasis, FieldError> {
    let k = field.degree() as usize;
    let mut chosen: Vec<FieldElement> = Vec::with_capacity(k);
    let mut masks: Vec<u32> = Vec::with_capacity(k);
    let mut forbidden = FieldElement::ONE;

    while chosen.len() < k {
        let last = chosen.len() + 1 == k;
        let start = chosen.last().map_or(1, |b| b.0 + 1);
        let pick = (start..field.order()).map(FieldElement).find(|&v| {
            field.trace(v) == 1 && masks.iter().all(|&m| (v.0 & m).count_ones() & 1 == 0) && (last || v != forbidden)
        });
        let v = pick.ok_or(FieldError::NoSelfDualBasis)?;
        masks.push(field.trace_form_mask(v));
        chosen.push(v);
        forbidden += v;
    }
    SelfDualBasis::from_elements(field, chosen)
}
