//! Incidence matrices used as LDPC parity-check matrices.
//!
//! Rows of the parity-check matrix are checks and columns are variables.
//! Simulations send the all-zero codeword, which is enough for a linear code
//! on a symmetric channel.

mod alist;
mod decode;
mod sim;

use thiserror::Error;

use crate::gf2::{BitMatrix, BitVec, Subspace};
use crate::incidence::System;

pub use alist::{read_alist, write_alist};
pub use decode::{bsc_llr, decode_bitflip, decode_minsum, DecodeResult};
pub use sim::{simulate, Channel, ChannelSpec, DecoderConfig, SimReport, CSV_HEADER};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LdpcError {
    #[error("expected a vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("crossover probability {0} is outside [0, 0.5]")]
    InvalidCrossover(f64),
    #[error("normalization {0} is outside (0, 1]")]
    InvalidNormalization(f64),
    #[error("at least one trial is required")]
    ZeroTrials,
    #[error("alist line {line}: {reason}")]
    Alist { line: usize, reason: String },
}

/// Where a parity-check matrix came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Provenance {
    pub system: System,
    pub q: u64,
    pub transposed: bool,
}

/// A binary linear code given by its parity-check matrix.
#[derive(Debug, Clone)]
pub struct LdpcCode {
    h: BitMatrix,
    rank: usize,
    generator: Subspace,
    provenance: Option<Provenance>,
    check_vars: Vec<Vec<usize>>,
    var_checks: Vec<Vec<usize>>,
}

impl LdpcCode {
    pub fn new(h: BitMatrix) -> Self {
        let generator = h.nullspace();
        let rank = h.n_cols() - generator.dim();
        let check_vars: Vec<Vec<usize>> = (0..h.n_rows()).map(|r| h.row_support(r)).collect();
        let mut var_checks = vec![Vec::new(); h.n_cols()];
        for (r, vars) in check_vars.iter().enumerate() {
            for &v in vars {
                var_checks[v].push(r);
            }
        }
        LdpcCode { h, rank, generator, provenance: None, check_vars, var_checks }
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn h(&self) -> &BitMatrix {
        &self.h
    }

    /// Block length.
    pub fn n(&self) -> usize {
        self.h.n_cols()
    }

    /// Dimension, `n - rank(H)`.
    pub fn k(&self) -> usize {
        self.generator.dim()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Basis of the code in reduced row echelon form.
    pub fn generator(&self) -> &Subspace {
        &self.generator
    }

    pub fn provenance(&self) -> Option<Provenance> {
        self.provenance
    }

    pub(crate) fn check_vars(&self) -> &[Vec<usize>] {
        &self.check_vars
    }

    pub(crate) fn var_checks(&self) -> &[Vec<usize>] {
        &self.var_checks
    }

    pub fn syndrome(&self, word: &BitVec) -> BitVec {
        self.h.mul_vec(word)
    }

    pub fn is_codeword(&self, word: &BitVec) -> bool {
        self.syndrome(word).is_zero()
    }

    /// `message * G` with the echelon basis as generator matrix.
    pub fn encode(&self, message: &BitVec) -> Result<BitVec, LdpcError> {
        if message.len() != self.k() {
            return Err(LdpcError::LengthMismatch { expected: self.k(), got: message.len() });
        }
        let mut word = BitVec::zeros(self.n());
        for i in message.ones_iter() {
            word.xor_assign(&self.generator.basis().row(i));
        }
        Ok(word)
    }
}

/// Outcome of a four-cycle scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Girth {
    /// No two rows share two columns: the Tanner graph has girth at least 6.
    AtLeastSix,
    /// Rows `rows` both contain columns `cols`.
    FourCycle { rows: (usize, usize), cols: (usize, usize) },
}

impl Girth {
    pub fn is_ok(&self) -> bool {
        matches!(self, Girth::AtLeastSix)
    }
}

/// Scans every row pair for two shared columns. For each row the other
/// rows met through its columns are marked with the first shared column;
/// meeting a marked row again is a four-cycle.
pub fn girth_check(h: &BitMatrix) -> Girth {
    let t = h.transpose();
    let col_rows: Vec<Vec<usize>> = (0..t.n_rows()).map(|c| t.row_support(c)).collect();
    let mut first_shared = vec![usize::MAX; h.n_rows()];
    for r in 0..h.n_rows() {
        let cols = h.row_support(r);
        for &c in &cols {
            for &r2 in col_rows[c].iter().filter(|&&r2| r2 > r) {
                if first_shared[r2] != usize::MAX {
                    return Girth::FourCycle { rows: (r, r2), cols: (first_shared[r2], c) };
                }
                first_shared[r2] = c;
            }
        }
        for &c in &cols {
            for &r2 in &col_rows[c] {
                first_shared[r2] = usize::MAX;
            }
        }
    }
    Girth::AtLeastSix
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::incidence::build_kim_matrix;

    #[test]
    fn all_ones_has_four_cycle() {
        let h = BitMatrix::from_row_indices(2, &[vec![0, 1], vec![0, 1]]);
        assert_eq!(girth_check(&h), Girth::FourCycle { rows: (0, 1), cols: (0, 1) });
    }

    #[test]
    fn kim_matrix_code_q2() {
        let h = build_kim_matrix(&FieldSpec::with_order(2).unwrap()).bits;
        assert!(girth_check(&h).is_ok());
        let code = LdpcCode::new(h);
        assert_eq!((code.n(), code.k(), code.rank()), (8, 2, 6));
        let mut words = Vec::new();
        for m in 0..4usize {
            let msg = BitVec::from_indices(2, (0..2).filter(|i| m >> i & 1 == 1));
            let w = code.encode(&msg).unwrap();
            assert!(code.is_codeword(&w));
            words.push(w);
        }
        assert!(words[0].is_zero());
        assert_eq!(words[1], code.generator().basis().row(0));
        words.sort_by_key(|w| w.to_bools());
        words.dedup();
        assert_eq!(words.len(), 4);
        assert_eq!(
            code.encode(&BitVec::zeros(3)),
            Err(LdpcError::LengthMismatch { expected: 2, got: 3 })
        );
    }
}
