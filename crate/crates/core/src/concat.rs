//! The concatenated code `L_{N,K}`: each symbol pair `(a_i | a_(N+i))` of a
//! CSS Reed-Solomon codeword over GF(2^(2m)), together with free bits
//! `s_i, t_i` of length `m + 1`, is expanded into a block of `4m + 2` qubits.
//!
//! Block `i` of a binary symplectic vector `(b | c)` is laid out as
//!
//! ```text
//! b_{i,1..2m}      = coords(alpha^-i [(a'_1 + s_{m+1}) beta_1 + sum_{j=2..m} a'_j beta_j + sum_{j=1..m} s_j beta_{m+j}])
//! b_{i,2m+1}       = a_1 + s_1
//! b_{i,2m+2..4m+1} = coords(alpha^-i [(a'_{m+1} + t_{m+1}) beta_1 + sum_{j=2..m} a'_{m+j} beta_j + sum_{j=1..m} t_j beta_{m+j}])
//! b_{i,4m+2}       = a_{m+1} + t_1
//! c_{i,1..2m}      = coords(alpha^i [sum_{j=1..m} a_j beta_j + s_{m+1} beta_{m+1}])
//! c_{i,2m+1}       = s_{m+1}
//! c_{i,2m+2..4m+1} = coords(alpha^i [sum_{j=1..m} a_{m+j} beta_j + t_{m+1} beta_{m+1}])
//! c_{i,4m+2}       = t_{m+1}
//! ```
//!
//! where `a = coords(a_i)`, `a' = coords(a_(N+i))`. Bit `b_{i,j}` sits at X
//! position `i(4m+2) + j - 1` and `c_{i,j}` at the same Z position.

use thiserror::Error;

use crate::field::{find_self_dual_basis, Field, FieldElement, FieldError, SelfDualBasis};
use crate::rs::{build_rs_pair, css_generators, RsError};
use crate::symplectic::{BinaryMatrix, DualityReport, RowReduced, SymplecticVector};

/// Largest `m` accepted by [`build_code`].
pub const MAX_M: usize = 4;

/// Largest per-block input width (bits) for exhaustive injectivity checks.
pub const INJECTIVITY_BUDGET_BITS: usize = 24;

#[derive(Debug, Error)]
pub enum ConcatError {
    #[error("m = {0} is outside the supported range 1..={MAX_M}")]
    UnsupportedM(usize),
    #[error("field degree {0} is odd; the construction needs GF(2^(2m))")]
    OddDegree(u32),
    #[error("basis does not belong to the field")]
    BasisMismatch,
    #[error("input length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{what} rank is {got}, formula gives {expected}")]
    RankMismatch { what: &'static str, got: usize, expected: usize },
    #[error("block input width {bits} exceeds the exhaustive budget of {INJECTIVITY_BUDGET_BITS} bits")]
    OverBudget { bits: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Rs(#[from] RsError),
}

/// Inputs of the expansion: a length-2N field vector plus per-block free bits.
/// `s[i]` and `t[i]` hold `s_{i,j}` / `t_{i,j}` at bit `j - 1`, `1 <= j <= m+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionInput {
    pub a: Vec<FieldElement>,
    pub s: Vec<u32>,
    pub t: Vec<u32>,
}

impl ExpansionInput {
    pub fn zero(blocks: usize) -> Self {
        ExpansionInput { a: vec![FieldElement::ZERO; 2 * blocks], s: vec![0; blocks], t: vec![0; blocks] }
    }
}

/// One block's output: `b` and `c` bits, `b_{i,j}` at bit `j - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Block {
    pub b: u64,
    pub c: u64,
}

impl Block {
    pub fn is_zero(self) -> bool {
        self.b == 0 && self.c == 0
    }
}

/// Per-block expansion maps for a fixed field and self-dual basis.
#[derive(Debug, Clone)]
pub struct Expander {
    field: Field,
    basis: SelfDualBasis,
    m: usize,
    blocks: usize,
    alpha_pos: Vec<FieldElement>,
    alpha_neg: Vec<FieldElement>,
}

impl Expander {
    pub fn new(field: Field, basis: SelfDualBasis) -> Result<Self, ConcatError> {
        if !field.degree().is_multiple_of(2) {
            return Err(ConcatError::OddDegree(field.degree()));
        }
        if basis.len() != field.degree() as usize || !basis.elements().iter().all(|&b| field.contains(b)) {
            return Err(ConcatError::BasisMismatch);
        }
        let m = field.degree() as usize / 2;
        let blocks = field.group_order() as usize;
        let alpha_pos = (0..blocks).map(|i| field.alpha_pow(i as i64)).collect();
        let alpha_neg = (0..blocks).map(|i| field.alpha_pow(-(i as i64))).collect();
        Ok(Expander { field, basis, m, blocks, alpha_pos, alpha_neg })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn basis(&self) -> &SelfDualBasis {
        &self.basis
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of blocks, `N = 2^(2m) - 1`.
    pub fn blocks(&self) -> usize {
        self.blocks
    }

    /// Qubits per block, `4m + 2`.
    pub fn block_len(&self) -> usize {
        4 * self.m + 2
    }

    /// Qubit count `n = N(4m + 2)`.
    pub fn qubits(&self) -> usize {
        self.blocks * self.block_len()
    }

    /// Bits of block input `(a_i, a_(N+i), s_i, t_i)`.
    pub fn block_input_bits(&self) -> usize {
        6 * self.m + 2
    }

    #[inline]
    fn to_coords(&self, scale: FieldElement, bits: u32) -> u64 {
        let x = self.basis.combine(bits);
        u64::from(self.basis.coords(self.field.mul(scale, x)))
    }

    /// Expands block `i` from `a_i`, `a_(N+i)` and the free bits.
    pub fn expand_block(&self, i: usize, a_i: FieldElement, a_ni: FieldElement, s: u32, t: u32) -> Block {
        let m = self.m;
        let low = (1u32 << m) - 1;
        let bit = |x: u32, j: usize| (x >> (j - 1)) & 1;
        let ca = self.basis.coords(a_i);
        let cn = self.basis.coords(a_ni);
        let (s_top, t_top) = (bit(s, m + 1), bit(t, m + 1));

        let x1 = ((cn & low) ^ s_top) | ((s & low) << m);
        let x2 = (((cn >> m) & low) ^ t_top) | ((t & low) << m);
        let y1 = (ca & low) | (s_top << m);
        let y2 = ((ca >> m) & low) | (t_top << m);

        let (inv, fwd) = (self.alpha_neg[i], self.alpha_pos[i]);
        let two_m = 2 * m;
        let b = self.to_coords(inv, x1)
            | u64::from(bit(ca, 1) ^ bit(s, 1)) << two_m
            | self.to_coords(inv, x2) << (two_m + 1)
            | u64::from(bit(ca, m + 1) ^ bit(t, 1)) << (2 * two_m + 1);
        let c = self.to_coords(fwd, y1)
            | u64::from(s_top) << two_m
            | self.to_coords(fwd, y2) << (two_m + 1)
            | u64::from(t_top) << (2 * two_m + 1);
        Block { b, c }
    }

    /// Concatenates all block expansions into one symplectic vector.
    pub fn expand_codeword(&self, input: &ExpansionInput) -> Result<SymplecticVector, ConcatError> {
        let n = self.blocks;
        if input.a.len() != 2 * n {
            return Err(ConcatError::LengthMismatch { expected: 2 * n, got: input.a.len() });
        }
        if input.s.len() != n || input.t.len() != n {
            return Err(ConcatError::LengthMismatch { expected: n, got: input.s.len().min(input.t.len()) });
        }
        let len = self.block_len();
        let mut out = SymplecticVector::zeros(self.qubits());
        for i in 0..n {
            let blk = self.expand_block(i, input.a[i], input.a[n + i], input.s[i], input.t[i]);
            out.set_x_bits(i * len, len, blk.b);
            out.set_z_bits(i * len, len, blk.c);
        }
        Ok(out)
    }

    fn block_images(&self, i: usize) -> impl Iterator<Item = u128> + '_ {
        let q = self.field.order();
        let free = 1u32 << (self.m + 1);
        let len = self.block_len();
        (0..q).flat_map(move |a| {
            (0..q).flat_map(move |an| {
                (0..free).flat_map(move |s| {
                    (0..free).map(move |t| {
                        let blk = self.expand_block(i, FieldElement(a), FieldElement(an), s, t);
                        u128::from(blk.b) | u128::from(blk.c) << len
                    })
                })
            })
        })
    }

    /// Exhaustively checks that block `i` maps distinct inputs to distinct
    /// outputs.
    pub fn check_block_injectivity(&self, i: usize) -> Result<bool, ConcatError> {
        let bits = self.block_input_bits();
        if bits > INJECTIVITY_BUDGET_BITS {
            return Err(ConcatError::OverBudget { bits });
        }
        let mut images: Vec<u128> = self.block_images(i).collect();
        let total = images.len();
        images.sort_unstable();
        images.dedup();
        Ok(images.len() == total)
    }

    /// Rank over GF(2) of the (linear) block map, from the images of unit
    /// inputs. Full rank `6m + 2` is equivalent to injectivity.
    pub fn block_map_rank(&self, i: usize) -> usize {
        let two_m = 2 * self.m;
        let len = self.block_len();
        let mut images: Vec<u128> = Vec::new();
        let pack = |blk: Block| u128::from(blk.b) | u128::from(blk.c) << len;
        for j in 0..two_m {
            images.push(pack(self.expand_block(i, self.basis.elements()[j], FieldElement::ZERO, 0, 0)));
            images.push(pack(self.expand_block(i, FieldElement::ZERO, self.basis.elements()[j], 0, 0)));
        }
        for j in 0..=self.m {
            images.push(pack(self.expand_block(i, FieldElement::ZERO, FieldElement::ZERO, 1 << j, 0)));
            images.push(pack(self.expand_block(i, FieldElement::ZERO, FieldElement::ZERO, 0, 1 << j)));
        }
        gf2_rank_u128(images)
    }
}

fn gf2_rank_u128(mut rows: Vec<u128>) -> usize {
    let mut rank = 0;
    for bit in 0..128 {
        let mask = 1u128 << bit;
        let Some(p) = (rank..rows.len()).find(|&r| rows[r] & mask != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && *row & mask != 0 {
                *row ^= pivot;
            }
        }
        rank += 1;
    }
    rank
}

/// `L_{N,K}` with row-reduced generator matrices for `S_L` and `N_L`.
#[derive(Debug, Clone)]
pub struct StabilizerCodeL {
    pub m: usize,
    pub big_n: usize,
    pub big_k: usize,
    /// Qubit count `2N(2m + 1)`.
    pub n: usize,
    /// Logical qubit count `2m(N - 2K)`.
    pub k: usize,
    expander: Expander,
    s_matrix: RowReduced,
    n_matrix: RowReduced,
}

/// `rank(S_L) = 2N(m + 1) + 4mK`.
pub fn stabilizer_rank_formula(m: usize, big_k: usize) -> usize {
    let big_n = (1usize << (2 * m)) - 1;
    2 * big_n * (m + 1) + 4 * m * big_k
}

impl StabilizerCodeL {
    pub fn field(&self) -> &Field {
        self.expander.field()
    }

    pub fn basis(&self) -> &SelfDualBasis {
        self.expander.basis()
    }

    pub fn expander(&self) -> &Expander {
        &self.expander
    }

    pub fn s_matrix(&self) -> &RowReduced {
        &self.s_matrix
    }

    pub fn n_matrix(&self) -> &RowReduced {
        &self.n_matrix
    }

    pub fn rank_s(&self) -> usize {
        self.s_matrix.rank()
    }

    pub fn rank_n(&self) -> usize {
        self.n_matrix.rank()
    }

    /// Symplectic duality of `S_L` and `N_L` plus containment.
    pub fn verify_symplectic_duality(&self) -> DualityReport {
        crate::symplectic::verify_duality(self.s_matrix.matrix(), self.n_matrix.matrix())
            .expect("both matrices share the qubit count")
    }
}

/// Builds `L_{N,K}` over the default field and its smallest self-dual basis.
pub fn build_code(m: usize, big_k: usize) -> Result<StabilizerCodeL, ConcatError> {
    if !(1..=MAX_M).contains(&m) {
        return Err(ConcatError::UnsupportedM(m));
    }
    let field = Field::new(2 * m as u32)?;
    let basis = find_self_dual_basis(&field)?;
    build_code_with(field, basis, big_k)
}

/// Builds `L_{N,K}` over a given field and self-dual basis.
pub fn build_code_with(field: Field, basis: SelfDualBasis, big_k: usize) -> Result<StabilizerCodeL, ConcatError> {
    let expander = Expander::new(field, basis)?;
    let m = expander.m();
    if !(1..=MAX_M).contains(&m) {
        return Err(ConcatError::UnsupportedM(m));
    }
    let field = expander.field().clone();
    let big_n = expander.blocks();
    let (r, perp) = build_rs_pair(&field, big_k)?;
    let css = css_generators(&r, &perp)?;
    let qubits = expander.qubits();

    // GF(2)-span of a field code: scale each generator by every basis element.
    let lift = |gens: &[Vec<FieldElement>]| -> Vec<SymplecticVector> {
        let mut out = Vec::with_capacity(gens.len() * 2 * m);
        for g in gens {
            for &beta in expander.basis().elements() {
                let mut input = ExpansionInput::zero(big_n);
                for (dst, &x) in input.a.iter_mut().zip(g) {
                    *dst = field.mul(beta, x);
                }
                out.push(expander.expand_codeword(&input).expect("shapes match"));
            }
        }
        out
    };
    let mut free = Vec::with_capacity(2 * big_n * (m + 1));
    for i in 0..big_n {
        for j in 0..=m {
            for which in 0..2 {
                let mut input = ExpansionInput::zero(big_n);
                if which == 0 {
                    input.s[i] = 1 << j;
                } else {
                    input.t[i] = 1 << j;
                }
                free.push(expander.expand_codeword(&input).expect("shapes match"));
            }
        }
    }

    let mut s_rows = lift(&css.s_gens);
    s_rows.extend(free.iter().cloned());
    let mut n_rows = lift(&css.n_gens);
    n_rows.extend(free);

    let s_matrix = BinaryMatrix::from_rows(qubits, s_rows).expect("uniform rows").row_reduce();
    let n_matrix = BinaryMatrix::from_rows(qubits, n_rows).expect("uniform rows").row_reduce();

    let expected_s = stabilizer_rank_formula(m, big_k);
    if s_matrix.rank() != expected_s {
        return Err(ConcatError::RankMismatch { what: "S_L", got: s_matrix.rank(), expected: expected_s });
    }
    if n_matrix.rank() != 2 * qubits - expected_s {
        return Err(ConcatError::RankMismatch { what: "N_L", got: n_matrix.rank(), expected: 2 * qubits - expected_s });
    }
    let k = 2 * m * (big_n - 2 * big_k);
    Ok(StabilizerCodeL { m, big_n, big_k, n: qubits, k, expander, s_matrix, n_matrix })
}

/// An element of GF(4) written as `u + omega v`, stored as `u | v << 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf4(pub u8);

impl Gf4 {
    pub const ZERO: Gf4 = Gf4(0);
    pub const ONE: Gf4 = Gf4(1);
    pub const OMEGA: Gf4 = Gf4(2);
    pub const OMEGA_SQ: Gf4 = Gf4(3);

    pub fn from_pair(u: bool, v: bool) -> Gf4 {
        Gf4(u8::from(u) | u8::from(v) << 1)
    }
}

/// The quaternary image `u_p + omega v_p` of a symplectic vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuaternaryVector {
    pub symbols: Vec<Gf4>,
}

impl QuaternaryVector {
    /// Hamming weight over GF(4).
    pub fn weight(&self) -> usize {
        self.symbols.iter().filter(|s| **s != Gf4::ZERO).count()
    }
}

pub fn to_quaternary(x: &SymplecticVector) -> QuaternaryVector {
    QuaternaryVector { symbols: (0..x.n()).map(|p| Gf4::from_pair(x.x(p), x.z(p))).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::symplectic_weight;
    use rand::{Rng, SeedableRng};

    fn expander(two_m: u32) -> Expander {
        let f = Field::new(two_m).unwrap();
        let b = find_self_dual_basis(&f).unwrap();
        Expander::new(f, b).unwrap()
    }

    #[test]
    fn odd_degree_rejected() {
        let f = Field::new(3).unwrap();
        let b = find_self_dual_basis(&f).unwrap();
        assert!(matches!(Expander::new(f, b), Err(ConcatError::OddDegree(3))));
    }

    #[test]
    fn zero_input_gives_zero_block() {
        for two_m in [2, 4, 6] {
            let e = expander(two_m);
            for i in 0..e.blocks() {
                assert!(e.expand_block(i, FieldElement::ZERO, FieldElement::ZERO, 0, 0).is_zero());
            }
        }
    }

    #[test]
    fn m1_free_bit_s1_example() {
        // s_{0,1} = 1: X1 = beta_2, so b_{0,1..2} = coords(beta_2) = (0, 1), b_{0,3} = 1
        let e = expander(2);
        let blk = e.expand_block(0, FieldElement::ZERO, FieldElement::ZERO, 0b01, 0);
        assert_eq!(blk.b, 0b000_110);
        assert_eq!(blk.c, 0);
    }

    #[test]
    fn m1_left_symbol_example() {
        // a_0 = omega: coords = (Tr(omega^2), Tr(omega^3)) = (1, 0)
        let e = expander(2);
        let w = e.field().alpha();
        assert_eq!(e.basis().coords(w), 0b01);
        let blk = e.expand_block(0, w, FieldElement::ZERO, 0, 0);
        // c_{0,1..2} = coords(beta_1) = (1, 0), c_{0,3} = 0
        assert_eq!(blk.c & 0b111, 0b001);
        // b_{0,3} = a_{0,1} = 1; all other b bits vanish
        assert_eq!(blk.b, 0b000_100);
        assert_eq!(blk.c, 0b000_001);
    }

    // Independent transcription of the block equations straight from field
    // arithmetic, with no bit-packing shortcuts.
    fn oracle_block(e: &Expander, i: usize, a_i: FieldElement, a_ni: FieldElement, s: u32, t: u32) -> Block {
        let f = e.field();
        let bs = e.basis();
        let m = e.m();
        let beta = |j: usize| bs.beta(j);
        let ai = |j: usize| (bs.coords(a_i) >> (j - 1)) & 1 == 1;
        let an = |j: usize| (bs.coords(a_ni) >> (j - 1)) & 1 == 1;
        let sj = |j: usize| (s >> (j - 1)) & 1 == 1;
        let tj = |j: usize| (t >> (j - 1)) & 1 == 1;
        let pick = |c: bool, x: FieldElement| if c { x } else { FieldElement::ZERO };

        let mut x1 = pick(an(1) ^ sj(m + 1), beta(1));
        let mut x2 = pick(an(m + 1) ^ tj(m + 1), beta(1));
        for j in 2..=m {
            x1 += pick(an(j), beta(j));
            x2 += pick(an(m + j), beta(j));
        }
        for j in m + 1..=2 * m {
            x1 += pick(sj(j - m), beta(j));
            x2 += pick(tj(j - m), beta(j));
        }
        let mut y1 = pick(sj(m + 1), beta(m + 1));
        let mut y2 = pick(tj(m + 1), beta(m + 1));
        for j in 1..=m {
            y1 += pick(ai(j), beta(j));
            y2 += pick(ai(m + j), beta(j));
        }
        let inv = f.pow(f.alpha(), -(i as i64)).unwrap();
        let fwd = f.pow(f.alpha(), i as i64).unwrap();
        let mut b = Vec::new();
        let mut c = Vec::new();
        let push_coords = |v: &mut Vec<bool>, x: FieldElement| {
            for j in 1..=2 * m {
                v.push(f.trace(f.mul(x, beta(j))) == 1);
            }
        };
        push_coords(&mut b, f.mul(inv, x1));
        b.push(ai(1) ^ sj(1));
        push_coords(&mut b, f.mul(inv, x2));
        b.push(ai(m + 1) ^ tj(1));
        push_coords(&mut c, f.mul(fwd, y1));
        c.push(sj(m + 1));
        push_coords(&mut c, f.mul(fwd, y2));
        c.push(tj(m + 1));
        let pack = |v: Vec<bool>| v.iter().enumerate().fold(0u64, |acc, (j, &x)| acc | u64::from(x) << j);
        Block { b: pack(b), c: pack(c) }
    }

    #[test]
    fn expand_block_matches_transcription() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for two_m in [2, 4, 6, 8] {
            let e = expander(two_m);
            let q = e.field().order();
            let free = 1u32 << (e.m() + 1);
            for _ in 0..2000 {
                let i = rng.gen_range(0..e.blocks());
                let a = FieldElement(rng.gen_range(0..q));
                let an = FieldElement(rng.gen_range(0..q));
                let s = rng.gen_range(0..free);
                let t = rng.gen_range(0..free);
                assert_eq!(e.expand_block(i, a, an, s, t), oracle_block(&e, i, a, an, s, t));
            }
        }
    }

    fn random_input(e: &Expander, rng: &mut impl Rng) -> ExpansionInput {
        let n = e.blocks();
        let q = e.field().order();
        let free = 1u32 << (e.m() + 1);
        ExpansionInput {
            a: (0..2 * n).map(|_| FieldElement(rng.gen_range(0..q))).collect(),
            s: (0..n).map(|_| rng.gen_range(0..free)).collect(),
            t: (0..n).map(|_| rng.gen_range(0..free)).collect(),
        }
    }

    #[test]
    fn expand_codeword_is_linear() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for two_m in [2, 4, 6] {
            let e = expander(two_m);
            let trials = 10_000;
            for _ in 0..trials {
                let x = random_input(&e, &mut rng);
                let y = random_input(&e, &mut rng);
                let sum = ExpansionInput {
                    a: x.a.iter().zip(&y.a).map(|(&p, &q)| p + q).collect(),
                    s: x.s.iter().zip(&y.s).map(|(p, q)| p ^ q).collect(),
                    t: x.t.iter().zip(&y.t).map(|(p, q)| p ^ q).collect(),
                };
                let mut lhs = e.expand_codeword(&x).unwrap();
                lhs.xor_assign(&e.expand_codeword(&y).unwrap());
                assert_eq!(lhs, e.expand_codeword(&sum).unwrap());
            }
        }
    }

    #[test]
    fn expand_codeword_shape() {
        let e = expander(2);
        let z = e.expand_codeword(&ExpansionInput::zero(3)).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.n(), 18);
        let bad = ExpansionInput { a: vec![FieldElement::ZERO; 5], s: vec![0; 3], t: vec![0; 3] };
        assert!(e.expand_codeword(&bad).is_err());
    }

    #[test]
    fn build_code_small_instances() {
        let c = build_code(1, 1).unwrap();
        assert_eq!((c.n, c.k, c.rank_s(), c.rank_n()), (18, 2, 16, 20));
        let c = build_code(1, 0).unwrap();
        assert_eq!((c.n, c.k, c.rank_s()), (18, 6, 12));
        let c = build_code(2, 3).unwrap();
        assert_eq!((c.n, c.k, c.rank_s()), (150, 36, 114));
        assert_eq!(c.rank_n() - c.rank_s(), 2 * c.k);
        assert!(matches!(build_code(1, 2), Err(ConcatError::Rs(RsError::DimensionTooLarge { .. }))));
        assert!(matches!(build_code(0, 0), Err(ConcatError::UnsupportedM(0))));
    }

    #[test]
    fn rank_formulas_all_k() {
        for m in 1..=2 {
            let big_n = (1usize << (2 * m)) - 1;
            for k in 0..=big_n / 2 {
                let c = build_code(m, k).unwrap();
                assert_eq!(c.rank_s(), stabilizer_rank_formula(m, k));
                assert_eq!(c.rank_n(), 2 * c.n - c.rank_s());
                assert_eq!(c.rank_n() - c.rank_s(), 2 * c.k);
                let rep = c.verify_symplectic_duality();
                assert!(rep.passed(), "m={m} K={k}: {rep:?}");
            }
        }
    }

    #[test]
    fn block_injectivity_m1_m2() {
        let e = expander(2);
        for i in 0..e.blocks() {
            assert!(e.check_block_injectivity(i).unwrap());
            assert_eq!(e.block_map_rank(i), e.block_input_bits());
        }
        let e = expander(4);
        assert!(e.check_block_injectivity(0).unwrap());
        for i in 0..e.blocks() {
            assert_eq!(e.block_map_rank(i), 14);
        }
    }

    #[test]
    fn nonzero_symbol_pair_gives_nonzero_block() {
        let e = expander(4);
        for i in 0..e.blocks() {
            for a in e.field().elements() {
                for an in e.field().elements() {
                    let zero = a.is_zero() && an.is_zero();
                    assert_eq!(e.expand_block(i, a, an, 0, 0).is_zero(), zero);
                }
            }
        }
    }

    #[test]
    fn quaternary_examples() {
        let z = SymplecticVector::zeros(4);
        assert_eq!(to_quaternary(&z).weight(), 0);
        let mut x = SymplecticVector::zeros(4);
        x.set_x(2, true);
        let q = to_quaternary(&x);
        assert_eq!(q.symbols[2], Gf4::ONE);
        assert_eq!(q.weight(), 1);
        x.set_z(2, true);
        let q = to_quaternary(&x);
        assert_eq!(q.symbols[2], Gf4::OMEGA_SQ);
        assert_eq!(q.weight(), 1);
    }

    #[test]
    fn quaternary_weight_matches_symplectic_weight() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let n = rng.gen_range(1..200);
            let u: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.3)).collect();
            let v: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.3)).collect();
            let x = SymplecticVector::from_halves(n, u, v);
            assert_eq!(to_quaternary(&x).weight(), symplectic_weight(&x));
        }
    }
}
