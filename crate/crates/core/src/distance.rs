//! Minimum symplectic weight over `N_L \ S_L` and the block-counting checks
//! behind the asymptotic distance argument.
//!
//! The normalizer is enumerated through a basis whose first `2k` rows are
//! logical representatives and whose remaining rows are the reduced
//! stabilizer rows, so a combination lies outside `S_L` exactly when one of
//! its low `2k` coefficient bits is set. Enumeration walks the combination
//! index in Gray-code order, one row XOR per step; the index range is split
//! into `2^g` contiguous slices that run independently.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::concat::StabilizerCodeL;
use crate::symplectic::{RowReduced, SymplecticVector};

/// Largest `rank(N_L)` handled by exhaustive enumeration.
pub const EXACT_BUDGET_BITS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DistanceError {
    #[error("rank(N_L) = {rank} exceeds the exhaustive budget of {EXACT_BUDGET_BITS}; use sampled mode")]
    OverBudget { rank: usize },
    #[error("no sample left S_L after {trials} trials")]
    NoSampleOutsideStabilizer { trials: u64 },
    #[error("code has no logical qubits, N_L \\ S_L is empty")]
    NoLogicals,
    #[error("trial count must be at least 1")]
    NoTrials,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Sampled,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Exact => "exact",
            Method::Sampled => "sampled",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceReport {
    pub method: Method,
    /// Exact minimum, or the best upper bound found when sampling.
    pub d: usize,
    pub witness: SymplecticVector,
    /// Codewords of `N_L \ S_L` examined.
    pub enumerated: u64,
    pub seed: Option<u64>,
}

impl fmt::Display for DistanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d={} witness_weight={} enumerated={} method={} seed={}",
            self.d,
            self.witness.weight(),
            self.enumerated,
            self.method,
            self.seed.unwrap_or(0)
        )
    }
}

/// Normalizer basis split into logical representatives and stabilizer rows.
#[derive(Debug, Clone)]
pub struct CosetBasis {
    pub logicals: Vec<SymplecticVector>,
    pub stabilizers: Vec<SymplecticVector>,
}

impl CosetBasis {
    pub fn new(code: &StabilizerCodeL) -> Self {
        Self::from_reduced(code.s_matrix(), code.n_matrix())
    }

    /// Completes the stabilizer rows to a normalizer basis.
    pub fn from_reduced(s: &RowReduced, n: &RowReduced) -> Self {
        let mut echelon: Vec<(usize, SymplecticVector)> =
            s.rows().iter().zip(s.pivots()).map(|(r, &p)| (p, r.clone())).collect();
        let mut logicals = Vec::new();
        for row in n.rows() {
            let mut r = row.clone();
            for (p, e) in &echelon {
                if r.bit(*p) {
                    r.xor_assign(e);
                }
            }
            if let Some(p) = r.leading_index() {
                echelon.push((p, r.clone()));
                logicals.push(r);
            }
        }
        CosetBasis { logicals, stabilizers: s.rows().to_vec() }
    }

    /// Generators in enumeration order: logicals first.
    pub fn generators(&self) -> Vec<SymplecticVector> {
        self.logicals.iter().chain(&self.stabilizers).cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.logicals.len() + self.stabilizers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Walks combination indices `start..end` in Gray-code order and calls
/// `visit(mask, word)` for every combination with a nonzero logical part.
fn walk_range<F: FnMut(u64, &SymplecticVector)>(
    gens: &[SymplecticVector],
    logical_mask: u64,
    start: u64,
    end: u64,
    mut visit: F,
) {
    if start >= end {
        return;
    }
    let n = gens[0].n();
    let mut mask = start ^ (start >> 1);
    let mut word = SymplecticVector::zeros(n);
    for (j, g) in gens.iter().enumerate() {
        if mask >> j & 1 == 1 {
            word.xor_assign(g);
        }
    }
    if mask & logical_mask != 0 {
        visit(mask, &word);
    }
    for idx in start + 1..end {
        let j = idx.trailing_zeros() as usize;
        word.xor_assign(&gens[j]);
        mask ^= 1 << j;
        if mask & logical_mask != 0 {
            visit(mask, &word);
        }
    }
}

/// Runs `walk_range` over `2^g` slices in parallel and folds the results.
fn partitioned<A, I, M>(
    basis: &CosetBasis,
    parts: usize,
    init: I,
    merge: M,
    visit: fn(&mut A, u64, &SymplecticVector),
) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    M: Fn(A, A) -> A,
{
    let gens = basis.generators();
    let bits = gens.len();
    let logical_mask = (1u64 << basis.logicals.len()) - 1;
    let total = 1u64 << bits;
    let slice_bits = (parts.max(1).next_power_of_two().trailing_zeros() as usize).min(bits);
    let slices = 1u64 << slice_bits;
    let width = total / slices;

    let results: Vec<A> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..slices)
            .map(|p| {
                let gens = &gens;
                let init = &init;
                scope.spawn(move || {
                    let mut acc = init();
                    walk_range(gens, logical_mask, p * width, (p + 1) * width, |mask, w| visit(&mut acc, mask, w));
                    acc
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    results.into_iter().reduce(merge).expect("at least one slice")
}

#[derive(Debug)]
struct MinAcc {
    best: Option<(usize, u64, SymplecticVector)>,
    count: u64,
}

fn check_exact_budget(basis: &CosetBasis) -> Result<(), DistanceError> {
    if basis.len() > EXACT_BUDGET_BITS {
        return Err(DistanceError::OverBudget { rank: basis.len() });
    }
    if basis.logicals.is_empty() {
        return Err(DistanceError::NoLogicals);
    }
    Ok(())
}

/// Exact minimum weight over `N_L \ S_L`, split over `parts` workers. Ties
/// are broken by the smallest combination mask, so the witness does not
/// depend on `parts`.
pub fn exact_distance(code: &StabilizerCodeL, parts: usize) -> Result<DistanceReport, DistanceError> {
    exact_distance_in(&CosetBasis::new(code), parts)
}

/// [`exact_distance`] over an explicit normalizer basis.
pub fn exact_distance_in(basis: &CosetBasis, parts: usize) -> Result<DistanceReport, DistanceError> {
    check_exact_budget(basis)?;
    let acc = partitioned(
        basis,
        parts,
        || MinAcc { best: None, count: 0 },
        |a, b| {
            let best = match (a.best, b.best) {
                (Some(x), Some(y)) => Some(if (x.0, x.1) <= (y.0, y.1) { x } else { y }),
                (x, None) => x,
                (None, y) => y,
            };
            MinAcc { best, count: a.count + b.count }
        },
        |acc, mask, word| {
            acc.count += 1;
            let w = word.weight();
            let better = match &acc.best {
                None => true,
                Some((bw, bm, _)) => (w, mask) < (*bw, *bm),
            };
            if better {
                acc.best = Some((w, mask, word.clone()));
            }
        },
    );
    let (d, _, witness) = acc.best.expect("logical space is nonempty");
    Ok(DistanceReport { method: Method::Exact, d, witness, enumerated: acc.count, seed: None })
}

/// Draws uniformly random normalizer elements and returns the lightest one
/// outside `S_L`. The result is an upper bound on the distance.
pub fn sampled_distance_upper(code: &StabilizerCodeL, trials: u64, seed: u64) -> Result<DistanceReport, DistanceError> {
    sampled_distance_in(&CosetBasis::new(code), trials, seed)
}

/// [`sampled_distance_upper`] over an explicit normalizer basis.
pub fn sampled_distance_in(basis: &CosetBasis, trials: u64, seed: u64) -> Result<DistanceReport, DistanceError> {
    if trials == 0 {
        return Err(DistanceError::NoTrials);
    }
    if basis.logicals.is_empty() {
        return Err(DistanceError::NoLogicals);
    }
    let mut best: Option<(usize, SymplecticVector)> = None;
    let mut accepted = 0;
    for_each_sample(basis, trials, seed, |word| {
        accepted += 1;
        let w = word.weight();
        if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
            best = Some((w, word.clone()));
        }
    });
    let (d, witness) = best.ok_or(DistanceError::NoSampleOutsideStabilizer { trials })?;
    Ok(DistanceReport { method: Method::Sampled, d, witness, enumerated: accepted, seed: Some(seed) })
}

fn for_each_sample<F: FnMut(&SymplecticVector)>(basis: &CosetBasis, trials: u64, seed: u64, mut visit: F) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = basis.stabilizers.first().or(basis.logicals.first()).map_or(0, |r| r.n());
    for _ in 0..trials {
        let mut word = SymplecticVector::zeros(n);
        let mut logical = false;
        for g in &basis.logicals {
            if rng.gen::<bool>() {
                word.xor_assign(g);
                logical = true;
            }
        }
        for g in &basis.stabilizers {
            if rng.gen::<bool>() {
                word.xor_assign(g);
            }
        }
        if logical {
            visit(&word);
        }
    }
}

/// Re-verifies a witness independently of the search: it must lie in `N_L`,
/// lie outside `S_L`, and have the reported weight.
pub fn validate_witness(code: &StabilizerCodeL, report: &DistanceReport) -> bool {
    let w = &report.witness;
    code.n_matrix().in_span(w).unwrap_or(false) && !code.s_matrix().in_span(w).unwrap_or(true) && w.weight() == report.d
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountingMode {
    Exhaustive,
    Sampled { trials: u64, seed: u64 },
}

/// Per-codeword statistics of the block structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockStats {
    /// Nonzero `(4m+2)`-blocks.
    pub nonzero_blocks: usize,
    /// Distinct nonzero quaternary `(2m+1)`-tuples over all half-blocks.
    pub distinct_tuples: usize,
    /// Largest number of times one nonzero tuple repeats within a family
    /// (first halves, or second halves, of the blocks).
    pub max_multiplicity: usize,
}

/// Computes [`BlockStats`] for one vector of `L_{N,K}` with parameter `m`.
pub fn block_stats(word: &SymplecticVector, m: usize, blocks: usize) -> BlockStats {
    let mut first = Vec::with_capacity(blocks);
    let mut second = Vec::with_capacity(blocks);
    block_stats_with(word, m, blocks, &mut first, &mut second)
}

fn block_stats_with(
    word: &SymplecticVector,
    m: usize,
    blocks: usize,
    first: &mut Vec<u64>,
    second: &mut Vec<u64>,
) -> BlockStats {
    let half = 2 * m + 1;
    let len = 2 * half;
    let low = (1u64 << half) - 1;
    first.clear();
    second.clear();
    let mut nonzero_blocks = 0;
    for i in 0..blocks {
        let b = word.x_bits(i * len, len);
        let c = word.z_bits(i * len, len);
        if b | c == 0 {
            continue;
        }
        nonzero_blocks += 1;
        // tuple key: X half in the low bits, Z half above it
        let k1 = (b & low) | (c & low) << half;
        let k2 = (b >> half) | (c >> half) << half;
        if k1 != 0 {
            first.push(k1);
        }
        if k2 != 0 {
            second.push(k2);
        }
    }
    first.sort_unstable();
    second.sort_unstable();
    let max_run = |v: &[u64]| v.chunk_by(|a, b| a == b).map(<[u64]>::len).max().unwrap_or(0);
    let max_multiplicity = max_run(first).max(max_run(second));
    let mut distinct = first.clone();
    distinct.extend_from_slice(second);
    distinct.sort_unstable();
    distinct.dedup();
    BlockStats { nonzero_blocks, distinct_tuples: distinct.len(), max_multiplicity }
}

/// Result of the three counting checks over the examined codewords.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingReport {
    pub examined: u64,
    /// Required nonzero blocks, `K + 1`.
    pub block_bound: usize,
    /// Required distinct tuples, `ceil((K + 1) / 2^m)`.
    pub tuple_bound: usize,
    /// Allowed tuple multiplicity, `2^m`.
    pub multiplicity_bound: usize,
    pub min_nonzero_blocks: usize,
    pub min_distinct_tuples: usize,
    pub max_multiplicity: usize,
    pub block_violations: u64,
    pub tuple_violations: u64,
    pub multiplicity_violations: u64,
    pub block_witness: Option<SymplecticVector>,
    pub tuple_witness: Option<SymplecticVector>,
    pub multiplicity_witness: Option<SymplecticVector>,
}

impl CountingReport {
    fn empty(block_bound: usize, tuple_bound: usize, multiplicity_bound: usize) -> Self {
        CountingReport {
            examined: 0,
            block_bound,
            tuple_bound,
            multiplicity_bound,
            min_nonzero_blocks: usize::MAX,
            min_distinct_tuples: usize::MAX,
            max_multiplicity: 0,
            block_violations: 0,
            tuple_violations: 0,
            multiplicity_violations: 0,
            block_witness: None,
            tuple_witness: None,
            multiplicity_witness: None,
        }
    }

    fn record(&mut self, word: &SymplecticVector, st: &BlockStats) {
        self.examined += 1;
        self.min_nonzero_blocks = self.min_nonzero_blocks.min(st.nonzero_blocks);
        self.min_distinct_tuples = self.min_distinct_tuples.min(st.distinct_tuples);
        self.max_multiplicity = self.max_multiplicity.max(st.max_multiplicity);
        if st.nonzero_blocks < self.block_bound {
            self.block_violations += 1;
            self.block_witness.get_or_insert_with(|| word.clone());
        }
        if st.distinct_tuples < self.tuple_bound {
            self.tuple_violations += 1;
            self.tuple_witness.get_or_insert_with(|| word.clone());
        }
        if st.max_multiplicity > self.multiplicity_bound {
            self.multiplicity_violations += 1;
            self.multiplicity_witness.get_or_insert_with(|| word.clone());
        }
    }

    fn merge(mut self, other: CountingReport) -> CountingReport {
        self.examined += other.examined;
        self.min_nonzero_blocks = self.min_nonzero_blocks.min(other.min_nonzero_blocks);
        self.min_distinct_tuples = self.min_distinct_tuples.min(other.min_distinct_tuples);
        self.max_multiplicity = self.max_multiplicity.max(other.max_multiplicity);
        self.block_violations += other.block_violations;
        self.tuple_violations += other.tuple_violations;
        self.multiplicity_violations += other.multiplicity_violations;
        self.block_witness = self.block_witness.or(other.block_witness);
        self.tuple_witness = self.tuple_witness.or(other.tuple_witness);
        self.multiplicity_witness = self.multiplicity_witness.or(other.multiplicity_witness);
        self
    }

    pub fn blocks_hold(&self) -> bool {
        self.block_violations == 0
    }

    pub fn tuples_hold(&self) -> bool {
        self.tuple_violations == 0
    }

    pub fn multiplicity_holds(&self) -> bool {
        self.multiplicity_violations == 0
    }

    pub fn passed(&self) -> bool {
        self.examined > 0 && self.blocks_hold() && self.tuples_hold() && self.multiplicity_holds()
    }
}

struct CountAcc {
    report: CountingReport,
    m: usize,
    blocks: usize,
    first: Vec<u64>,
    second: Vec<u64>,
}

/// Checks, for each examined codeword of `N_L \ S_L`, the nonzero-block
/// count, the distinct-tuple count, and the tuple multiplicity.
pub fn verify_counting_claims(
    code: &StabilizerCodeL,
    mode: CountingMode,
    parts: usize,
) -> Result<CountingReport, DistanceError> {
    let m = code.m;
    let blocks = code.big_n;
    let block_bound = code.big_k + 1;
    let tuple_bound = block_bound.div_ceil(1 << m);
    let mult_bound = 1usize << m;
    let basis = CosetBasis::new(code);
    match mode {
        CountingMode::Exhaustive => {
            check_exact_budget(&basis)?;
            let acc = partitioned(
                &basis,
                parts,
                || CountAcc {
                    report: CountingReport::empty(block_bound, tuple_bound, mult_bound),
                    m,
                    blocks,
                    first: Vec::with_capacity(blocks),
                    second: Vec::with_capacity(blocks),
                },
                |mut a, b| {
                    a.report = a.report.merge(b.report);
                    a
                },
                |acc, _mask, word| {
                    let st = block_stats_with(word, acc.m, acc.blocks, &mut acc.first, &mut acc.second);
                    acc.report.record(word, &st);
                },
            );
            Ok(acc.report)
        }
        CountingMode::Sampled { trials, seed } => {
            if trials == 0 {
                return Err(DistanceError::NoTrials);
            }
            if basis.logicals.is_empty() {
                return Err(DistanceError::NoLogicals);
            }
            let mut report = CountingReport::empty(block_bound, tuple_bound, mult_bound);
            let (mut first, mut second) = (Vec::new(), Vec::new());
            for_each_sample(&basis, trials, seed, |word| {
                let st = block_stats_with(word, m, blocks, &mut first, &mut second);
                report.record(word, &st);
            });
            Ok(report)
        }
    }
}
