//! Full-length Reed-Solomon codes over GF(2^k) and the CSS pair built from a
//! self-orthogonal one.
//!
//! Codewords are evaluations at `alpha^0, .., alpha^(N-1)` of polynomials whose
//! monomials form a run of consecutive exponents. With `N = 2^k - 1`,
//! `sum_i alpha^(i e)` vanishes unless `e = 0 mod N`, so the code spanned by
//! `x^1..x^K` is exactly dual to the one spanned by `x^0..x^(N-K-1)`. The
//! former is `R`, the latter `R^perp`, and `R` sits inside `R^perp` whenever
//! `K <= (N - 1) / 2`.

use thiserror::Error;

use crate::field::{Field, FieldElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RsError {
    #[error("dimension K = {k} exceeds floor(N/2) = {max}")]
    DimensionTooLarge { k: usize, max: usize },
    #[error("expected a vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("generator row {row} of R is not a codeword of R^perp")]
    NotContained { row: usize },
    #[error("rows R[{r_row}] and R^perp[{perp_row}] have nonzero inner product")]
    NotDual { r_row: usize, perp_row: usize },
}

/// A Reed-Solomon evaluation code spanned by `x^first .. x^(first+dim-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsCode {
    field: Field,
    length: usize,
    first_exponent: usize,
    generator: Vec<Vec<FieldElement>>,
    eval_points: Vec<FieldElement>,
    // reduced row-echelon form of `generator` with pivot columns
    echelon: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
}

impl RsCode {
    fn evaluation(field: &Field, first_exponent: usize, dim: usize) -> RsCode {
        let length = field.group_order() as usize;
        let eval_points: Vec<_> = (0..length).map(|i| field.alpha_pow(i as i64)).collect();
        let generator: Vec<Vec<FieldElement>> = (0..dim)
            .map(|j| {
                let e = (first_exponent + j) as i64;
                eval_points.iter().map(|&p| field.pow(p, e).expect("nonzero point")).collect()
            })
            .collect();
        let (echelon, pivots) = echelon_form(field, &generator);
        RsCode { field: field.clone(), length, first_exponent, generator, eval_points, echelon, pivots }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Block length `N`.
    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    /// Dimension over the field.
    pub fn dimension(&self) -> usize {
        self.generator.len()
    }

    /// Lowest monomial exponent in the spanning set.
    pub fn first_exponent(&self) -> usize {
        self.first_exponent
    }

    /// Designed distance `N - dim + 1`, which the code attains (MDS).
    pub fn designed_distance(&self) -> usize {
        self.length - self.dimension() + 1
    }

    pub fn generator(&self) -> &[Vec<FieldElement>] {
        &self.generator
    }

    pub fn eval_points(&self) -> &[FieldElement] {
        &self.eval_points
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// `msg * G`.
    pub fn encode(&self, msg: &[FieldElement]) -> Result<Vec<FieldElement>, RsError> {
        if msg.len() != self.dimension() {
            return Err(RsError::LengthMismatch { expected: self.dimension(), got: msg.len() });
        }
        let mut out = vec![FieldElement::ZERO; self.length];
        for (&c, row) in msg.iter().zip(&self.generator) {
            if c.is_zero() {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(row) {
                *o += self.field.mul(c, g);
            }
        }
        Ok(out)
    }

    /// Row-space membership by elimination against the reduced generator.
    pub fn contains(&self, v: &[FieldElement]) -> Result<bool, RsError> {
        if v.len() != self.length {
            return Err(RsError::LengthMismatch { expected: self.length, got: v.len() });
        }
        let mut r = v.to_vec();
        for (row, &col) in self.echelon.iter().zip(&self.pivots) {
            let c = r[col];
            if !c.is_zero() {
                for (x, &y) in r.iter_mut().zip(row) {
                    *x += self.field.mul(c, y);
                }
            }
        }
        Ok(r.iter().all(|x| x.is_zero()))
    }

    /// Exact minimum Hamming distance by scanning every nonzero message.
    /// Returns `None` when the code has more than `2^20` codewords.
    pub fn min_distance_exhaustive(&self) -> Option<usize> {
        let q = u64::from(self.field.order());
        let k = self.dimension() as u32;
        let total = q.checked_pow(k).filter(|&t| t <= 1 << 20)?;
        if k == 0 {
            return Some(self.length + 1);
        }
        let mut best = usize::MAX;
        for idx in 1..total {
            let mut rest = idx;
            let msg: Vec<_> = (0..k)
                .map(|_| {
                    let d = (rest % q) as u32;
                    rest /= q;
                    FieldElement(d)
                })
                .collect();
            let w = self.encode(&msg).expect("length matches").iter().filter(|x| !x.is_zero()).count();
            best = best.min(w);
        }
        Some(best)
    }
}

fn echelon_form(field: &Field, rows: &[Vec<FieldElement>]) -> (Vec<Vec<FieldElement>>, Vec<usize>) {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = field.inverse(m[rank][col]).expect("pivot is nonzero");
        for x in m[rank].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            let c = row[col];
            if r != rank && !c.is_zero() {
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x += field.mul(c, y);
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    m.truncate(rank);
    (m, pivots)
}

/// Standard inner product `sum_i x_i y_i` over the field.
pub fn dot(field: &Field, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
    x.iter().zip(y).fold(FieldElement::ZERO, |acc, (&a, &b)| acc + field.mul(a, b))
}

/// Builds `R = <x^1..x^K>` and `R^perp = <x^0..x^(N-K-1)>`, checking that
/// every pair of generator rows is orthogonal and that `R` lies in `R^perp`.
pub fn build_rs_pair(field: &Field, k: usize) -> Result<(RsCode, RsCode), RsError> {
    let n = field.group_order() as usize;
    if k > n / 2 {
        return Err(RsError::DimensionTooLarge { k, max: n / 2 });
    }
    let r = RsCode::evaluation(field, 1, k);
    let perp = RsCode::evaluation(field, 0, n - k);
    for (i, a) in r.generator().iter().enumerate() {
        for (j, b) in perp.generator().iter().enumerate() {
            if !dot(field, a, b).is_zero() {
                return Err(RsError::NotDual { r_row: i, perp_row: j });
            }
        }
    }
    for (i, a) in r.generator().iter().enumerate() {
        if !perp.contains(a)? {
            return Err(RsError::NotContained { row: i });
        }
    }
    Ok((r, perp))
}

/// Generators of `S_RS = R x R` and `N_RS = R^perp x R^perp`, each a length-2N
/// vector `(left | right)` over the field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CssPair {
    pub length: usize,
    pub s_gens: Vec<Vec<FieldElement>>,
    pub n_gens: Vec<Vec<FieldElement>>,
}

fn doubled(rows: &[Vec<FieldElement>], n: usize) -> Vec<Vec<FieldElement>> {
    let left = rows.iter().map(|r| {
        let mut v = r.clone();
        v.resize(2 * n, FieldElement::ZERO);
        v
    });
    let right = rows.iter().map(|r| {
        let mut v = vec![FieldElement::ZERO; n];
        v.extend_from_slice(r);
        v
    });
    left.chain(right).collect()
}

/// Assembles the CSS stabilizer and normalizer generators from a nested pair.
pub fn css_generators(r: &RsCode, perp: &RsCode) -> Result<CssPair, RsError> {
    if r.len() != perp.len() {
        return Err(RsError::LengthMismatch { expected: r.len(), got: perp.len() });
    }
    for (i, a) in r.generator().iter().enumerate() {
        if !perp.contains(a)? {
            return Err(RsError::NotContained { row: i });
        }
    }
    let n = r.len();
    Ok(CssPair { length: n, s_gens: doubled(r.generator(), n), n_gens: doubled(perp.generator(), n) })
}

/// `sum_i (a_i b_(N+i) + b_i a_(N+i))` for length-2N field vectors.
pub fn field_symplectic_pairing(field: &Field, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    let n = a.len() / 2;
    dot(field, &a[..n], &b[n..]) + dot(field, &b[..n], &a[n..])
}
