//! Hard-decision bit flipping and normalized min-sum.

use crate::gf2::BitVec;

use super::{LdpcCode, LdpcError};

/// Magnitude cap applied to channel LLRs so that `inf - inf` never occurs.
const LLR_CAP: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    /// Final hard decision; a codeword exactly when `converged`.
    pub word: BitVec,
    pub converged: bool,
    pub iterations: usize,
    pub syndrome_weight: usize,
}

/// LLR of a received bit on a BSC with crossover `p`; positive favours 0.
pub fn bsc_llr(bit: bool, p: f64) -> f64 {
    let magnitude = ((1.0 - p) / p).ln();
    if bit {
        -magnitude
    } else {
        magnitude
    }
}

fn finish(code: &LdpcCode, word: BitVec, iterations: usize) -> DecodeResult {
    let syndrome_weight = code.syndrome(&word).count_ones();
    DecodeResult { word, converged: syndrome_weight == 0, iterations, syndrome_weight }
}

/// Flips, in parallel, every bit for which strictly more than half of its
/// checks fail. Stops at a zero syndrome, when nothing flips, or after
/// `max_iters` rounds.
pub fn decode_bitflip(code: &LdpcCode, received: &BitVec, max_iters: usize) -> Result<DecodeResult, LdpcError> {
    if received.len() != code.n() {
        return Err(LdpcError::LengthMismatch { expected: code.n(), got: received.len() });
    }
    let mut word = received.clone();
    for iter in 0..max_iters {
        let syndrome = code.syndrome(&word);
        if syndrome.is_zero() {
            return Ok(finish(code, word, iter));
        }
        let flips: Vec<usize> = code
            .var_checks()
            .iter()
            .enumerate()
            .filter(|(_, checks)| 2 * checks.iter().filter(|&&c| syndrome.get(c)).count() > checks.len())
            .map(|(v, _)| v)
            .collect();
        if flips.is_empty() {
            return Ok(finish(code, word, iter));
        }
        for v in flips {
            word.flip(v);
        }
    }
    Ok(finish(code, word, max_iters))
}

/// Sign decision; an exact zero falls back to the sign bit of the channel
/// LLR, so a received 1 at `p = 0.5` (LLR `-0.0`) stays 1.
fn hard_decision(values: &[f64], channel: &[f64]) -> BitVec {
    let bits: Vec<bool> =
        values.iter().zip(channel).map(|(&x, &ch)| if x == 0.0 { ch.is_sign_negative() } else { x < 0.0 }).collect();
    BitVec::from_bools(&bits)
}

/// Flooding normalized min-sum. Check-to-variable messages are
/// `normalization * (product of signs) * (minimum magnitude)` over the
/// other variables of the check.
pub fn decode_minsum(
    code: &LdpcCode,
    llr: &[f64],
    max_iters: usize,
    normalization: f64,
) -> Result<DecodeResult, LdpcError> {
    if llr.len() != code.n() {
        return Err(LdpcError::LengthMismatch { expected: code.n(), got: llr.len() });
    }
    if !(normalization > 0.0 && normalization <= 1.0) {
        return Err(LdpcError::InvalidNormalization(normalization));
    }
    let channel: Vec<f64> = llr.iter().map(|x| x.clamp(-LLR_CAP, LLR_CAP)).collect();
    let word = hard_decision(&channel, &channel);
    if code.is_codeword(&word) {
        return Ok(finish(code, word, 0));
    }

    // Edges are numbered check by check; `var_edges[v]` lists v's edges.
    let check_vars = code.check_vars();
    let mut edge_var = Vec::new();
    let mut check_start = Vec::with_capacity(check_vars.len() + 1);
    for vars in check_vars {
        check_start.push(edge_var.len());
        edge_var.extend_from_slice(vars);
    }
    check_start.push(edge_var.len());
    let mut var_edges = vec![Vec::new(); code.n()];
    for (e, &v) in edge_var.iter().enumerate() {
        var_edges[v].push(e);
    }

    let mut v2c: Vec<f64> = edge_var.iter().map(|&v| channel[v]).collect();
    let mut c2v = vec![0.0; edge_var.len()];
    let mut total = channel.clone();
    let mut word = word;
    for iter in 1..=max_iters {
        for c in 0..check_vars.len() {
            let edges = check_start[c]..check_start[c + 1];
            let mut sign_negative = false;
            let (mut min1, mut min2, mut arg) = (f64::INFINITY, f64::INFINITY, usize::MAX);
            for e in edges.clone() {
                let m = v2c[e];
                sign_negative ^= m < 0.0;
                let a = m.abs();
                if a < min1 {
                    min2 = min1;
                    min1 = a;
                    arg = e;
                } else if a < min2 {
                    min2 = a;
                }
            }
            for e in edges {
                let magnitude = if e == arg { min2 } else { min1 };
                let negative = sign_negative ^ (v2c[e] < 0.0);
                let m = normalization * magnitude.min(LLR_CAP);
                c2v[e] = if negative { -m } else { m };
            }
        }
        for v in 0..code.n() {
            total[v] = channel[v] + var_edges[v].iter().map(|&e| c2v[e]).sum::<f64>();
            for &e in &var_edges[v] {
                v2c[e] = total[v] - c2v[e];
            }
        }
        word = hard_decision(&total, &channel);
        if code.is_codeword(&word) {
            return Ok(finish(code, word, iter));
        }
    }
    Ok(finish(code, word, max_iters))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::incidence::build_kim_matrix;

    fn kim(q: u64) -> LdpcCode {
        LdpcCode::new(build_kim_matrix(&FieldSpec::with_order(q).unwrap()).bits)
    }

    #[test]
    fn llr_mapping() {
        let p: f64 = 0.1;
        assert!((bsc_llr(false, p) - (9.0f64).ln()).abs() < 1e-12);
        assert!((bsc_llr(true, p) + (9.0f64).ln()).abs() < 1e-12);
        assert_eq!(bsc_llr(false, 0.5), 0.0);
        assert!(bsc_llr(true, 0.5).is_sign_negative());
    }

    #[test]
    fn codeword_is_fixed_point() {
        let code = kim(4);
        let w = code.generator().basis().row(0);
        let r = decode_bitflip(&code, &w, 10).unwrap();
        assert_eq!((r.word, r.converged, r.iterations), (w, true, 0));
        let r = decode_minsum(&code, &vec![5.0; code.n()], 10, 0.75).unwrap();
        assert!(r.converged && r.word.is_zero() && r.iterations == 0);
    }

    #[test]
    fn single_error_q8() {
        let code = kim(8);
        let mut received = BitVec::zeros(code.n());
        received.flip(77);
        assert_eq!(code.syndrome(&received).count_ones(), 8);
        let r = decode_bitflip(&code, &received, 50).unwrap();
        assert!(r.converged && r.word.is_zero());

        let llr: Vec<f64> = received.to_bools().into_iter().map(|b| bsc_llr(b, 0.05)).collect();
        let r = decode_minsum(&code, &llr, 50, 0.75).unwrap();
        assert!(r.converged && r.word.is_zero());
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn rejects_bad_arguments() {
        let code = kim(2);
        assert!(matches!(decode_bitflip(&code, &BitVec::zeros(3), 5), Err(LdpcError::LengthMismatch { .. })));
        assert_eq!(
            decode_minsum(&code, &[0.0; 8], 5, 1.5),
            Err(LdpcError::InvalidNormalization(1.5))
        );
    }
}
