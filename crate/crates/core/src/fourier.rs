//! Walsh–Hadamard analysis of code indicators.
//!
//! For a code `A` the spectrum is that of `f = 2·1_A − 1`, normalized as an
//! expectation: `f̂_S = E[f(X) χ_S(X)]` with `X` uniform and
//! `χ_S(x) = ∏_{i∈S} x_i`. Subsets `S` are indexed by bit masks.

use std::ops::{Add, Sub};

use crate::cube::{binomial, BinaryCode};
use crate::error::{invalid, Error, Result};

/// Largest dimension for the dense transform paths.
pub const MAX_TRANSFORM_DIM: u32 = 24;

fn check_transform_dim(n: u32) -> Result<()> {
    if n > MAX_TRANSFORM_DIM {
        return Err(Error::DimensionOutOfRange {
            n,
            min: 1,
            max: MAX_TRANSFORM_DIM,
        });
    }
    Ok(())
}

/// In-place unnormalized fast Walsh–Hadamard transform:
/// `t[u] <- Σ_x t[x] (−1)^{popcount(u & x)}`.
///
/// Applying it twice multiplies the table by its length.
pub fn fwht<T>(table: &mut [T])
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    let len = table.len();
    assert!(len.is_power_of_two(), "table length must be a power of two");
    let mut h = 1;
    while h < len {
        for block in table.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*x, *y);
                *x = u + v;
                *y = u - v;
            }
        }
        h *= 2;
    }
}

/// All `2^n` Fourier coefficients of a code's ±1 indicator.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierSpectrum {
    n: u32,
    coeffs: Vec<f64>,
}

impl FourierSpectrum {
    pub fn of(code: &BinaryCode) -> Result<Self> {
        let n = code.n();
        check_transform_dim(n)?;
        let size = 1usize << n;
        let mut table = vec![-1.0f64; size];
        for &w in code.words() {
            table[w as usize] = 1.0;
        }
        fwht(&mut table);
        let scale = 1.0 / size as f64;
        // bit 1 encodes +1, so χ_S picks up (−1)^{|S|} relative to the
        // plain transform
        for (s, c) in table.iter_mut().enumerate() {
            let sign = if s.count_ones() % 2 == 1 { -scale } else { scale };
            *c *= sign;
        }
        Ok(Self { n, coeffs: table })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    /// `a = (1 + f̂_∅) / 2`.
    pub fn density(&self) -> f64 {
        (1.0 + self.coeffs[0]) / 2.0
    }

    /// `Σ_S f̂_S²`, equal to 1 for any ±1-valued function.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

pub fn spectrum(code: &BinaryCode) -> Result<FourierSpectrum> {
    FourierSpectrum::of(code)
}

/// Per-level inner products `s(k) = Σ_{|S|=k} f̂_S ĝ_S`, for `k = 0..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelSums {
    n: u32,
    sums: Vec<f64>,
}

impl LevelSums {
    pub fn new(n: u32, sums: Vec<f64>) -> Result<Self> {
        if sums.len() != n as usize + 1 {
            return Err(invalid(format!(
                "expected {} level sums, got {}",
                n + 1,
                sums.len()
            )));
        }
        Ok(Self { n, sums })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn sums(&self) -> &[f64] {
        &self.sums
    }

    pub fn level(&self, k: usize) -> f64 {
        self.sums[k]
    }

    /// The level-one sum `c`, which equals `4ab(n − 2D(A,B))`.
    pub fn c(&self) -> f64 {
        self.sums.get(1).copied().unwrap_or(0.0)
    }
}

pub fn level_sums(f: &FourierSpectrum, g: &FourierSpectrum) -> Result<LevelSums> {
    if f.n != g.n {
        return Err(Error::DimensionMismatch {
            left: f.n,
            right: g.n,
        });
    }
    let mut sums = vec![0.0; f.n as usize + 1];
    for (s, (x, y)) in f.coeffs.iter().zip(&g.coeffs).enumerate() {
        sums[s.count_ones() as usize] += x * y;
    }
    Ok(LevelSums { n: f.n, sums })
}

/// `θ_ρ = (1/4) Σ_{k≥1} s(k) ρ^k`, so that `P(f(X) = g(Y) = 1) = ab + θ_ρ`.
pub fn theta_from_levels(levels: &LevelSums, rho: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&rho) {
        return Err(invalid(format!("correlation {rho} outside [-1, 1]")));
    }
    // Horner from the top level down to level 1
    let acc = levels.sums[1..]
        .iter()
        .rev()
        .fold(0.0, |acc, &s| acc * rho + s);
    Ok(0.25 * rho * acc)
}

/// Split of the level-≥2 products by sign:
/// `plus = (1/4) Σ_{|S|≥2, f̂ĝ≥0} f̂_S ĝ_S`, `minus` likewise for negative
/// products. Diagnostic only.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauSplit {
    pub plus: f64,
    pub minus: f64,
}

pub fn tau_split(f: &FourierSpectrum, g: &FourierSpectrum) -> Result<TauSplit> {
    if f.n != g.n {
        return Err(Error::DimensionMismatch {
            left: f.n,
            right: g.n,
        });
    }
    let (mut plus, mut minus) = (0.0, 0.0);
    for (s, (x, y)) in f.coeffs.iter().zip(&g.coeffs).enumerate() {
        if s.count_ones() < 2 {
            continue;
        }
        let p = x * y;
        if p >= 0.0 {
            plus += p;
        } else {
            minus += p;
        }
    }
    Ok(TauSplit {
        plus: 0.25 * plus,
        minus: 0.25 * minus,
    })
}

/// `K_i(k) = Σ_j (−1)^j C(k, j) C(n−k, i−j)`.
pub(crate) fn krawtchouk(n: u32, i: u32, k: u32) -> i128 {
    (0..=i.min(k))
        .map(|j| {
            let term = (binomial(k, j) * binomial(n - k, i - j)) as i128;
            if j % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// Exact number of pairs `(x, y) ∈ A × B` at each Hamming distance, computed
/// from integer character sums and Krawtchouk polynomials.
pub(crate) fn pair_distance_counts(a: &BinaryCode, b: &BinaryCode) -> Result<Vec<u64>> {
    let n = a.n();
    if n != b.n() {
        return Err(Error::DimensionMismatch {
            left: n,
            right: b.n(),
        });
    }
    check_transform_dim(n)?;
    let characters = |code: &BinaryCode| {
        let mut table = vec![0i32; 1 << n];
        for &w in code.words() {
            table[w as usize] = 1;
        }
        fwht(&mut table);
        table
    };
    let fa = characters(a);
    let fb = characters(b);
    let mut per_weight = vec![0i128; n as usize + 1];
    for (u, (x, y)) in fa.iter().zip(&fb).enumerate() {
        per_weight[u.count_ones() as usize] += *x as i128 * *y as i128;
    }
    (0..=n)
        .map(|i| {
            let total: i128 = (0..=n)
                .map(|k| per_weight[k as usize] * krawtchouk(n, i, k))
                .sum();
            let count = total >> n;
            debug_assert_eq!(count << n, total);
            u64::try_from(count)
                .map_err(|_| Error::NumericalConsistency(format!("negative pair count {count}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{make_code, subcube};

    #[test]
    fn dictator_spectrum() {
        for n in 1..=5 {
            let f = spectrum(&subcube(n, 1).unwrap()).unwrap();
            assert_eq!(f.coeff(0), 0.0);
            assert_eq!(f.coeff(1), 1.0);
            for s in 2..1 << n {
                assert_eq!(f.coeff(s), 0.0, "n={n} S={s:b}");
            }
        }
    }

    #[test]
    fn full_cube_spectrum() {
        let f = spectrum(&BinaryCode::full(4).unwrap()).unwrap();
        assert_eq!(f.coeff(0), 1.0);
        assert!(f.coeffs()[1..].iter().all(|&c| c == 0.0));
    }

    #[test]
    fn parseval_and_density() {
        let code = make_code(8, (0..256u64).filter(|w| w.wrapping_mul(2654435761) % 7 < 3)).unwrap();
        let f = spectrum(&code).unwrap();
        assert!((f.energy() - 1.0).abs() < 1e-9);
        assert!((f.density() - code.density()).abs() < 1e-15);
    }

    #[test]
    fn fwht_twice_scales_by_length() {
        let orig: Vec<i64> = (0..16).map(|x| (x * x) % 5 - 2).collect();
        let mut t = orig.clone();
        fwht(&mut t);
        fwht(&mut t);
        assert!(t.iter().zip(&orig).all(|(x, y)| *x == 16 * y));
    }

    #[test]
    fn level_sums_examples() {
        let d = spectrum(&subcube(4, 1).unwrap()).unwrap();
        let l = level_sums(&d, &d).unwrap();
        assert_eq!(l.sums(), &[0.0, 1.0, 0.0, 0.0, 0.0]);

        // n=1, A=B={+1}: a=b=1/2, D=0, so s(1) = 4·(1/4)·1
        let one = spectrum(&make_code(1, [1]).unwrap()).unwrap();
        assert_eq!(level_sums(&one, &one).unwrap().c(), 1.0);

        let other = spectrum(&make_code(3, [1]).unwrap()).unwrap();
        assert!(level_sums(&d, &other).is_err());
    }

    #[test]
    fn theta_examples() {
        let d = spectrum(&subcube(3, 1).unwrap()).unwrap();
        let l = level_sums(&d, &d).unwrap();
        assert_eq!(theta_from_levels(&l, 0.0).unwrap(), 0.0);
        assert!((theta_from_levels(&l, 0.5).unwrap() - 0.125).abs() < 1e-15);
        assert!(theta_from_levels(&l, 1.5).is_err());
    }

    #[test]
    fn theta_at_one_is_plancherel() {
        let a = make_code(4, [0, 3, 5, 6, 9, 14]).unwrap();
        let b = make_code(4, [1, 3, 7, 8, 15]).unwrap();
        let (f, g) = (spectrum(&a).unwrap(), spectrum(&b).unwrap());
        let inner: f64 = (0..16u64)
            .map(|x| {
                let fx = if a.contains(x) { 1.0 } else { -1.0 };
                let gx = if b.contains(x) { 1.0 } else { -1.0 };
                fx * gx
            })
            .sum::<f64>()
            / 16.0;
        let theta = theta_from_levels(&level_sums(&f, &g).unwrap(), 1.0).unwrap();
        assert!((theta - (inner - f.coeff(0) * g.coeff(0)) / 4.0).abs() < 1e-14);
    }

    #[test]
    fn krawtchouk_small_values() {
        // K_i(0) = C(n, i), K_0(k) = 1, K_1(k) = n − 2k
        assert_eq!(krawtchouk(5, 2, 0), 10);
        assert_eq!(krawtchouk(5, 0, 3), 1);
        assert_eq!(krawtchouk(5, 1, 3), -1);
    }

    #[test]
    fn pair_counts_match_pairwise() {
        let a = make_code(5, [0, 1, 7, 12, 19, 31]).unwrap();
        let b = make_code(5, [2, 3, 30]).unwrap();
        let mut direct = vec![0u64; 6];
        for &x in a.words() {
            for &y in b.words() {
                direct[(x ^ y).count_ones() as usize] += 1;
            }
        }
        assert_eq!(pair_distance_counts(&a, &b).unwrap(), direct);
    }

    #[test]
    fn tau_split_partitions_high_levels() {
        let a = make_code(4, [0, 3, 5, 6, 9, 14]).unwrap();
        let b = make_code(4, [1, 3, 7, 8, 15]).unwrap();
        let (f, g) = (spectrum(&a).unwrap(), spectrum(&b).unwrap());
        let l = level_sums(&f, &g).unwrap();
        let tau = tau_split(&f, &g).unwrap();
        assert!(tau.plus >= 0.0 && tau.minus <= 0.0);
        let high: f64 = l.sums()[2..].iter().sum();
        assert!((tau.plus + tau.minus - high / 4.0).abs() < 1e-15);
    }
}
