// SPDX-License-Identifier: Apache-2.0

//! Scan test vectors: file format and the seeded LFSR default.

use thiserror::Error;

use crate::rng::derive_seed;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VectorError {
    #[error("vector line {line}: unexpected character `{ch}`")]
    BadChar { line: usize, ch: char },
    #[error("vector line {line}: {got} bits, chain length is {expected}")]
    Length {
        line: usize,
        got: usize,
        expected: usize,
    },
}

/// Reads one 0/1 string per line, bit 0 first into the chain. Blank lines
/// and `#` comments are skipped.
pub fn parse_vectors(text: &str, chain_len: usize) -> Result<Vec<Vec<bool>>, VectorError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let bits = body
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                ch => Err(VectorError::BadChar { line, ch }),
            })
            .collect::<Result<Vec<bool>, _>>()?;
        if bits.len() != chain_len {
            return Err(VectorError::Length {
                line,
                got: bits.len(),
                expected: chain_len,
            });
        }
        out.push(bits);
    }
    Ok(out)
}

pub fn vectors_to_text(vectors: &[Vec<bool>]) -> String {
    let mut s = String::new();
    for v in vectors {
        s.extend(v.iter().map(|&b| if b { '1' } else { '0' }));
        s.push('\n');
    }
    s
}

const TAPS: u32 = 0x8020_0003;

/// `count` vectors of `chain_len` bits from a 32-bit Galois LFSR seeded
/// from `seed`.
pub fn lfsr_vectors(chain_len: usize, count: usize, seed: u64) -> Vec<Vec<bool>> {
    let mut state = (derive_seed(seed, "vectors") as u32) | 1;
    let mut next = || {
        let bit = state & 1 == 1;
        state >>= 1;
        if bit {
            state ^= TAPS;
        }
        bit
    };
    (0..count)
        .map(|_| (0..chain_len).map(|_| next()).collect())
        .collect()
}
