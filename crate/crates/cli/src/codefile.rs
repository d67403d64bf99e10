//! Plain-text code file: a `key=value` header followed by the row-reduced
//! generator rows of `S_L` and `N_L`, one `<u-bits>|<v-bits>` line each.
//!
//! ```text
//! format=rsconcat-code/1
//! m=1
//! N=3
//! K=1
//! n=18
//! k=2
//! two_m=2
//! modulus=0x7
//! basis=0x2,0x3
//! rank_S=16
//! rank_N=20
//! [S]
//! 100000000000000000|000000000000000000
//! ...
//! [N]
//! ...
//! ```

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use rsconcat::concat::StabilizerCodeL;
use rsconcat::field::{Field, FieldElement, FieldError, SelfDualBasis};
use rsconcat::symplectic::{BinaryMatrix, SymplecticVector};
use thiserror::Error;

pub const FORMAT_TAG: &str = "rsconcat-code/1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Header {
    pub m: usize,
    pub big_n: usize,
    pub big_k: usize,
    pub n: usize,
    pub k: usize,
    pub two_m: u32,
    pub modulus: u32,
    pub basis: Vec<u32>,
    pub rank_s: usize,
    pub rank_n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeFile {
    pub header: Header,
    pub s_rows: BinaryMatrix,
    pub n_rows: BinaryMatrix,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum CodeFileError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Parse(#[from] ParseError),
}

const HEADER_KEYS: [&str; 11] = ["format", "m", "N", "K", "n", "k", "two_m", "modulus", "basis", "rank_S", "rank_N"];

impl CodeFile {
    pub fn from_code(code: &StabilizerCodeL) -> Self {
        CodeFile {
            header: Header {
                m: code.m,
                big_n: code.big_n,
                big_k: code.big_k,
                n: code.n,
                k: code.k,
                two_m: code.field().degree(),
                modulus: code.field().modulus(),
                basis: code.basis().elements().iter().map(|b| b.bits()).collect(),
                rank_s: code.rank_s(),
                rank_n: code.rank_n(),
            },
            s_rows: code.s_matrix().matrix().clone(),
            n_rows: code.n_matrix().matrix().clone(),
        }
    }

    /// Field named by the header.
    pub fn field(&self) -> Result<Field, FieldError> {
        Field::with_modulus(self.header.two_m, self.header.modulus)
    }

    /// Self-dual basis named by the header, validated against `field`.
    pub fn basis(&self, field: &Field) -> Result<SelfDualBasis, FieldError> {
        SelfDualBasis::from_elements(field, self.header.basis.iter().map(|&b| FieldElement(b)).collect())
    }

    pub fn store(&self) -> String {
        let h = &self.header;
        let basis: Vec<String> = h.basis.iter().map(|b| format!("{b:#x}")).collect();
        let mut out = String::new();
        let values = [
            FORMAT_TAG.to_string(),
            h.m.to_string(),
            h.big_n.to_string(),
            h.big_k.to_string(),
            h.n.to_string(),
            h.k.to_string(),
            h.two_m.to_string(),
            format!("{:#x}", h.modulus),
            basis.join(","),
            h.rank_s.to_string(),
            h.rank_n.to_string(),
        ];
        for (key, value) in HEADER_KEYS.iter().zip(values) {
            writeln!(out, "{key}={value}").expect("writing to a String");
        }
        out.push_str("[S]\n");
        for row in self.s_rows.rows() {
            out.push_str(&row.to_bit_string());
            out.push('\n');
        }
        out.push_str("[N]\n");
        for row in self.n_rows.rows() {
            out.push_str(&row.to_bit_string());
            out.push('\n');
        }
        out
    }

    pub fn load(text: &str) -> Result<Self, ParseError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let end_line = text.lines().count() + 1;
        let mut next = |what: &str| -> Result<(usize, &str), ParseError> {
            lines
                .next()
                .ok_or_else(|| ParseError { line: end_line, message: format!("expected {what}, found end of file") })
        };

        let mut values = Vec::with_capacity(HEADER_KEYS.len());
        for key in HEADER_KEYS {
            let (line, text) = next(&format!("header key `{key}`"))?;
            let value = text
                .strip_prefix(key)
                .and_then(|rest| rest.strip_prefix('='))
                .ok_or_else(|| ParseError { line, message: format!("expected `{key}=<value>`, found {text:?}") })?;
            values.push((line, value));
        }
        if values[0].1 != FORMAT_TAG {
            return Err(ParseError { line: values[0].0, message: format!("unsupported format {:?}", values[0].1) });
        }
        let dec = |(line, v): (usize, &str)| -> Result<usize, ParseError> {
            v.parse().map_err(|_| ParseError { line, message: format!("expected a decimal integer, found {v:?}") })
        };
        let hex = |line: usize, v: &str| -> Result<u32, ParseError> {
            v.strip_prefix("0x")
                .and_then(|h| u32::from_str_radix(h, 16).ok())
                .ok_or_else(|| ParseError { line, message: format!("expected a 0x-prefixed hex value, found {v:?}") })
        };
        let two_m = dec(values[6])?;
        let header = Header {
            m: dec(values[1])?,
            big_n: dec(values[2])?,
            big_k: dec(values[3])?,
            n: dec(values[4])?,
            k: dec(values[5])?,
            two_m: u32::try_from(two_m)
                .map_err(|_| ParseError { line: values[6].0, message: "two_m too large".into() })?,
            modulus: hex(values[7].0, values[7].1)?,
            basis: if values[8].1.is_empty() {
                Vec::new()
            } else {
                values[8].1.split(',').map(|b| hex(values[8].0, b)).collect::<Result<_, _>>()?
            },
            rank_s: dec(values[9])?,
            rank_n: dec(values[10])?,
        };
        if header.n == 0 || header.n > 1 << 20 {
            return Err(ParseError { line: values[4].0, message: format!("qubit count {} out of range", header.n) });
        }

        let mut read_rows = |tag: &str, count: usize| -> Result<BinaryMatrix, ParseError> {
            let (line, text) = next(&format!("section marker `{tag}`"))?;
            if text != tag {
                return Err(ParseError { line, message: format!("expected section marker `{tag}`, found {text:?}") });
            }
            let mut m = BinaryMatrix::new(header.n);
            for i in 0..count {
                let (line, text) = next(&format!("{tag} row {} of {count}", i + 1))?;
                let row = SymplecticVector::parse_bit_string(header.n, text)
                    .map_err(|e| ParseError { line, message: e.to_string() })?;
                m.push(row).expect("row length fixed by the header");
            }
            Ok(m)
        };
        let s_rows = read_rows("[S]", header.rank_s)?;
        let n_rows = read_rows("[N]", header.rank_n)?;
        if let Ok((line, text)) = next("") {
            return Err(ParseError { line, message: format!("unexpected trailing content {text:?}") });
        }
        if !text.is_empty() && !text.ends_with('\n') {
            return Err(ParseError { line: end_line - 1, message: "missing final newline".into() });
        }
        Ok(CodeFile { header, s_rows, n_rows })
    }

    pub fn read(path: &Path) -> Result<Self, CodeFileError> {
        Ok(Self::load(&fs::read_to_string(path)?)?)
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        fs::write(path, self.store())
    }
}
