//! Structural verification of a loaded code file.

use rsconcat::concat::{build_code_with, stabilizer_rank_formula, Expander, INJECTIVITY_BUDGET_BITS, MAX_M};
use rsconcat::field::SelfDualBasis;
use rsconcat::symplectic::verify_duality;
use rsconcat::Field;
use serde::Serialize;

use crate::codefile::CodeFile;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// A stabilizer/normalizer row pair with nonzero symplectic product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub s_row: usize,
    pub n_row: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub k: usize,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// First few nonorthogonal pairs (row indices within each section).
    pub nonorthogonal: Vec<Witness>,
    /// Stabilizer rows outside the normalizer span.
    pub not_contained: Vec<usize>,
}

impl VerifyReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name, passed, detail: detail.into() }
}

/// Runs every check; the report passes iff all of them do.
pub fn verify_code_file(file: &CodeFile) -> VerifyReport {
    let h = &file.header;
    let mut checks = Vec::new();

    let m = h.m;
    let params_ok = (1..=MAX_M).contains(&m) && {
        let big_n = (1usize << (2 * m)) - 1;
        h.two_m as usize == 2 * m
            && h.big_n == big_n
            && h.n == big_n * (4 * m + 2)
            && 2 * h.big_k < big_n
            && h.k == 2 * m * (big_n - 2 * h.big_k)
    };
    checks.push(check(
        "parameters",
        params_ok,
        format!("m={} N={} K={} n={} k={} two_m={}", m, h.big_n, h.big_k, h.n, h.k, h.two_m),
    ));

    let field_basis: Result<(Field, SelfDualBasis), String> =
        file.field().and_then(|f| file.basis(&f).map(|b| (f, b))).map_err(|e| e.to_string());
    checks.push(match &field_basis {
        Ok((f, _)) => check("field", true, format!("{f}, self-dual basis of size {}", h.basis.len())),
        Err(e) => check("field", false, e.clone()),
    });

    let s_reduced = file.s_rows.row_reduce();
    let n_reduced = file.n_rows.row_reduce();
    let expected_s = params_ok.then(|| stabilizer_rank_formula(m, h.big_k));
    let expected_n = expected_s.map(|s| 2 * h.n - s);
    checks.push(check(
        "rank_S",
        Some(s_reduced.rank()) == expected_s && s_reduced.rank() == h.rank_s,
        format!("rank {} declared {} formula {:?}", s_reduced.rank(), h.rank_s, expected_s),
    ));
    checks.push(check(
        "rank_N",
        Some(n_reduced.rank()) == expected_n && n_reduced.rank() == h.rank_n,
        format!("rank {} declared {} formula {:?}", n_reduced.rank(), h.rank_n, expected_n),
    ));
    let logical = n_reduced.rank().checked_sub(s_reduced.rank());
    checks.push(check(
        "logical_count",
        logical == Some(2 * h.k),
        format!("rank_N - rank_S = {:?}, 2k = {}", logical, 2 * h.k),
    ));

    let duality = verify_duality(&file.s_rows, &file.n_rows).expect("row lengths fixed by the header");
    let nonorthogonal: Vec<Witness> =
        duality.nonorthogonal.iter().map(|p| Witness { s_row: p.s_row, n_row: p.n_row }).collect();
    checks.push(check(
        "orthogonality",
        duality.all_orthogonal(),
        match nonorthogonal.first() {
            None => format!("{} products, all zero", duality.products_checked),
            Some(w) => format!(
                "{} of {} products nonzero, first: S row {} x N row {}",
                duality.nonorthogonal_count, duality.products_checked, w.s_row, w.n_row
            ),
        },
    ));
    checks.push(check(
        "dimensions",
        duality.dims_complementary(),
        format!("{} + {} vs 2n = {}", duality.rank_s, duality.rank_n, 2 * h.n),
    ));
    checks.push(check(
        "containment",
        duality.contained(),
        if duality.contained() {
            "S_L inside N_L".to_string()
        } else {
            format!("{} S rows outside N_L, first: {}", duality.not_contained.len(), duality.not_contained[0])
        },
    ));

    match (&field_basis, params_ok) {
        (Ok((field, basis)), true) => {
            match build_code_with(field.clone(), basis.clone(), h.big_k) {
                Ok(code) => {
                    let same = code.s_matrix().matrix() == &file.s_rows && code.n_matrix().matrix() == &file.n_rows;
                    checks.push(check(
                        "canonical_rows",
                        same,
                        if same {
                            "rows equal the reduced construction"
                        } else {
                            "rows differ from the reduced construction"
                        },
                    ));
                }
                Err(e) => checks.push(check("canonical_rows", false, format!("rebuild failed: {e}"))),
            }
            checks.push(injectivity_check(field, basis));
        }
        _ => {
            checks.push(check("canonical_rows", false, "skipped: invalid parameters or field"));
            checks.push(check("block_injectivity", false, "skipped: invalid parameters or field"));
        }
    }

    VerifyReport {
        n: h.n,
        k: h.k,
        passed: checks.iter().all(|c| c.passed),
        checks,
        nonorthogonal,
        not_contained: duality.not_contained,
    }
}

/// Exhaustive collision search for `m <= 2`; above that, full GF(2) rank of
/// the linear block map.
fn injectivity_check(field: &Field, basis: &SelfDualBasis) -> Check {
    let expander = match Expander::new(field.clone(), basis.clone()) {
        Ok(e) => e,
        Err(e) => return check("block_injectivity", false, e.to_string()),
    };
    let bits = expander.block_input_bits();
    let exhaustive = expander.m() <= 2 && bits <= INJECTIVITY_BUDGET_BITS;
    let bad: Vec<usize> = (0..expander.blocks())
        .filter(|&i| {
            if exhaustive {
                !expander.check_block_injectivity(i).unwrap_or(false)
            } else {
                expander.block_map_rank(i) != bits
            }
        })
        .collect();
    let how = if exhaustive { format!("exhaustive over 2^{bits} inputs") } else { format!("rank {bits} required") };
    check(
        "block_injectivity",
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} blocks, {how}", expander.blocks())
        } else {
            format!("{} of {} blocks not injective ({how}), first: {}", bad.len(), expander.blocks(), bad[0])
        },
    )
}
