//! Codes on the Boolean hypercube `{-1,1}^n`.
//!
//! A codeword is an `n`-bit word; bit `i` set means coordinate `x_{i+1} = +1`.
//! The Hamming distance between two codewords is the popcount of their XOR.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest dimension supported by the pairwise paths.
pub const MAX_DIM: u32 = 64;

/// Largest number of words any constructor will materialize.
pub const MAX_WORDS: u64 = 1 << 28;

/// Largest dimension for which the full symmetry group is enumerated.
pub const MAX_CANONICAL_DIM: u32 = 6;

pub(crate) fn width_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn cube_size(n: u32) -> f64 {
    2f64.powi(n as i32)
}

fn check_dim(n: u32) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::DimensionOutOfRange {
            n,
            min: 1,
            max: MAX_DIM,
        });
    }
    Ok(())
}

fn check_materializable(n: u32, count: u128) -> Result<()> {
    if count > MAX_WORDS as u128 {
        return Err(invalid(format!(
            "refusing to materialize {count} words in dimension {n} (limit {MAX_WORDS})"
        )));
    }
    Ok(())
}

/// A nonempty subset of `{-1,1}^n`, stored as strictly increasing words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "CodeRepr", into = "CodeRepr")]
pub struct BinaryCode {
    n: u32,
    words: Vec<u64>,
}

impl BinaryCode {
    /// Builds a code from arbitrary words; duplicates are dropped and the
    /// result is sorted.
    pub fn new(n: u32, words: impl IntoIterator<Item = u64>) -> Result<Self> {
        check_dim(n)?;
        let mask = width_mask(n);
        let mut words: Vec<u64> = words.into_iter().collect();
        if let Some(&word) = words.iter().find(|&&w| w & !mask != 0) {
            return Err(Error::WordOutOfRange { word, n });
        }
        if words.is_empty() {
            return Err(Error::EmptyCode);
        }
        words.sort_unstable();
        words.dedup();
        Ok(Self { n, words })
    }

    /// Caller guarantees sorted, unique, in-range words.
    pub(crate) fn from_sorted_unchecked(n: u32, words: Vec<u64>) -> Self {
        debug_assert!(words.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(!words.is_empty());
        Self { n, words }
    }

    /// The whole cube.
    pub fn full(n: u32) -> Result<Self> {
        subcube(n, 0)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    /// Always false; codes are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn contains(&self, word: u64) -> bool {
        self.words.binary_search(&word).is_ok()
    }

    /// `|A| / 2^n`.
    pub fn density(&self) -> f64 {
        self.len() as f64 / cube_size(self.n)
    }

    pub fn is_full(&self) -> bool {
        self.n < 64 && self.len() as u64 == 1u64 << self.n
    }

    /// `A^c`, the set-theoretic complement in the cube.
    pub fn complement(&self) -> Result<Self> {
        if self.n >= 64 {
            return Err(invalid("complement not materializable in dimension 64"));
        }
        let total = 1u64 << self.n;
        check_materializable(self.n, (total - self.len() as u64) as u128)?;
        if self.is_full() {
            return Err(Error::EmptyComplement);
        }
        let mut out = Vec::with_capacity((total - self.len() as u64) as usize);
        let mut members = self.words.iter().peekable();
        for w in 0..total {
            if members.peek() == Some(&&w) {
                members.next();
            } else {
                out.push(w);
            }
        }
        Ok(Self::from_sorted_unchecked(self.n, out))
    }

    /// `A^* = {-x : x in A}`, the componentwise negation.
    pub fn star(&self) -> Self {
        let mask = width_mask(self.n);
        let mut words: Vec<u64> = self.words.iter().map(|&w| !w & mask).collect();
        words.reverse();
        Self::from_sorted_unchecked(self.n, words)
    }

    /// Image of the code under a hypercube symmetry.
    pub fn apply(&self, g: &CubeSymmetry) -> Result<Self> {
        if g.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: g.n(),
            });
        }
        let mut words: Vec<u64> = self.words.iter().map(|&w| g.apply_word(w)).collect();
        words.sort_unstable();
        Ok(Self::from_sorted_unchecked(self.n, words))
    }

    /// Orbit representative under coordinate permutations and sign flips:
    /// the lexicographically smallest sorted word sequence in the orbit.
    pub fn canonical_form(&self) -> Result<Self> {
        if self.n > MAX_CANONICAL_DIM {
            return Err(Error::DimensionOutOfRange {
                n: self.n,
                min: 1,
                max: MAX_CANONICAL_DIM,
            });
        }
        let n = self.n as usize;
        let mut table = vec![0u64; 1 << n];
        let mut scratch = Vec::with_capacity(self.len());
        let mut best: Option<Vec<u64>> = None;
        for perm in (0..n).permutations(n) {
            for (x, slot) in table.iter_mut().enumerate() {
                *slot = permute_bits(x as u64, &perm);
            }
            // The minimum always starts with word 0, so the flip must send
            // some codeword to 0.
            for &flip in &self.words {
                scratch.clear();
                scratch.extend(self.words.iter().map(|&w| table[(w ^ flip) as usize]));
                scratch.sort_unstable();
                if best.as_ref().is_none_or(|b| scratch < *b) {
                    best = Some(scratch.clone());
                }
            }
        }
        Ok(Self::from_sorted_unchecked(self.n, best.unwrap_or_default()))
    }

    /// Serializes in the code file format: `n=<dim>` then one bitstring per
    /// line, most significant coordinate first.
    pub fn to_code_file(&self) -> String {
        self.to_string()
    }

    pub fn parse_code_file(text: &str) -> Result<Self> {
        text.parse()
    }

    fn bitstring(&self, w: u64) -> String {
        format!("{:0width$b}", w, width = self.n as usize)
    }
}

impl fmt::Display for BinaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        for &w in &self.words {
            writeln!(f, "{}", self.bitstring(w))?;
        }
        Ok(())
    }
}

impl FromStr for BinaryCode {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let n: u32 = header
            .strip_prefix("n=")
            .and_then(|d| d.trim().parse().ok())
            .ok_or_else(|| Error::Parse {
                line,
                msg: format!("expected `n=<dim>`, found `{header}`"),
            })?;
        check_dim(n)?;
        let mut words = Vec::new();
        for (line, body) in lines {
            if body.len() != n as usize {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {n} bits, found {}", body.len()),
                });
            }
            if let Some(c) = body.chars().find(|&c| c != '0' && c != '1') {
                return Err(Error::Parse {
                    line,
                    msg: format!("non-binary character `{c}`"),
                });
            }
            words.push(u64::from_str_radix(body, 2).map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })?);
        }
        Self::new(n, words)
    }
}

#[derive(Serialize, Deserialize)]
struct CodeRepr {
    n: u32,
    words: Vec<String>,
}

impl From<BinaryCode> for CodeRepr {
    fn from(code: BinaryCode) -> Self {
        let words = code.words.iter().map(|&w| code.bitstring(w)).collect();
        Self { n: code.n, words }
    }
}

impl TryFrom<CodeRepr> for BinaryCode {
    type Error = Error;

    fn try_from(repr: CodeRepr) -> Result<Self> {
        let mut text = format!("n={}\n", repr.n);
        for w in repr.words {
            text.push_str(&w);
            text.push('\n');
        }
        text.parse()
    }
}

/// Same as [`BinaryCode::new`].
pub fn make_code(n: u32, words: impl IntoIterator<Item = u64>) -> Result<BinaryCode> {
    BinaryCode::new(n, words)
}

/// All words whose lowest `k` bits are set: the indicator of
/// `x_1 = ... = x_k = +1`, of size `2^{n-k}`.
pub fn subcube(n: u32, k: u32) -> Result<BinaryCode> {
    check_dim(n)?;
    if k > n {
        return Err(invalid(format!("cannot pin {k} coordinates in dimension {n}")));
    }
    let free = n - k;
    if free >= 64 {
        return Err(invalid("subcube not materializable in dimension 64"));
    }
    check_materializable(n, 1u128 << free)?;
    let pinned = width_mask(k);
    let words = (0..1u64 << free).map(|r| (r << k) | pinned).collect();
    Ok(BinaryCode::from_sorted_unchecked(n, words))
}

/// All words within Hamming distance `radius` of `center`.
pub fn hamming_ball(n: u32, center: u64, radius: u32) -> Result<BinaryCode> {
    check_dim(n)?;
    if radius > n {
        return Err(invalid(format!("radius {radius} exceeds dimension {n}")));
    }
    if center & !width_mask(n) != 0 {
        return Err(Error::WordOutOfRange { word: center, n });
    }
    let size: u128 = (0..=radius).map(|i| binomial(n, i)).sum();
    check_materializable(n, size)?;
    let limit = 1u128 << n;
    let mut words = Vec::with_capacity(size as usize);
    for weight in 0..=radius {
        let mut v: u128 = (1u128 << weight) - 1;
        while v < limit {
            words.push(center ^ v as u64);
            if v == 0 {
                break;
            }
            let c = v & v.wrapping_neg();
            let r = v + c;
            v = (((r ^ v) >> 2) / c) | r;
        }
    }
    words.sort_unstable();
    Ok(BinaryCode::from_sorted_unchecked(n, words))
}

pub(crate) fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn permute_bits(x: u64, perm: &[usize]) -> u64 {
    perm.iter()
        .enumerate()
        .filter(|&(i, _)| x >> i & 1 == 1)
        .fold(0, |acc, (_, &j)| acc | 1 << j)
}

/// An element of the hyperoctahedral group: `x -> perm(x XOR flip)`, where
/// bit `i` moves to bit `perm[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CubeSymmetry {
    perm: Vec<usize>,
    flip: u64,
}

impl CubeSymmetry {
    pub fn new(perm: Vec<usize>, flip: u64) -> Result<Self> {
        let n = perm.len() as u32;
        check_dim(n)?;
        let mut seen = vec![false; perm.len()];
        for &j in &perm {
            if j >= perm.len() || std::mem::replace(&mut seen[j], true) {
                return Err(invalid(format!("{perm:?} is not a permutation")));
            }
        }
        if flip & !width_mask(n) != 0 {
            return Err(Error::WordOutOfRange { word: flip, n });
        }
        Ok(Self { perm, flip })
    }

    pub fn identity(n: u32) -> Result<Self> {
        Self::new((0..n as usize).collect(), 0)
    }

    /// Every group element, `2^n * n!` of them.
    pub fn all(n: u32) -> Result<Vec<Self>> {
        if n == 0 || n > MAX_CANONICAL_DIM {
            return Err(Error::DimensionOutOfRange {
                n,
                min: 1,
                max: MAX_CANONICAL_DIM,
            });
        }
        let n = n as usize;
        Ok((0..n)
            .permutations(n)
            .flat_map(|perm| (0..1u64 << n).map(move |flip| Self { perm: perm.clone(), flip }))
            .collect())
    }

    pub fn n(&self) -> u32 {
        self.perm.len() as u32
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn flip(&self) -> u64 {
        self.flip
    }

    pub fn apply_word(&self, w: u64) -> u64 {
        permute_bits(w ^ self.flip, &self.perm)
    }
}
