//! Majorization preorders, the Schur-concave pairing function and brute-force
//! rearrangement extrema.

use crate::error::{Error, Result};
use crate::fidelity::validate_distribution;

/// Default absolute tolerance for the majorization predicates.
pub const MAJORIZATION_TOL: f64 = 1e-9;

/// Largest length accepted by [`rearrangement_extrema`].
pub const BRUTE_FORCE_LIMIT: usize = 9;

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if let Some(k) = x.iter().chain(y).position(|v| !v.is_finite()) {
        let (row, col) = if k < x.len() {
            (0, k)
        } else {
            (1, k - x.len())
        };
        return Err(Error::NonFinite { row, col });
    }
    Ok(())
}

pub fn sorted_descending(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub fn sorted_ascending(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

fn prefix_sums(v: &[f64]) -> Vec<f64> {
    v.iter()
        .scan(0.0, |acc, x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// `x ≺ y`: descending partial sums of `x` never exceed those of `y`, totals equal.
pub fn majorizes(y: &[f64], x: &[f64], tol: f64) -> Result<bool> {
    check_pair(x, y)?;
    let sx = prefix_sums(&sorted_descending(x));
    let sy = prefix_sums(&sorted_descending(y));
    let n = sx.len();
    if n == 0 {
        return Ok(true);
    }
    let partial = sx[..n - 1]
        .iter()
        .zip(&sy[..n - 1])
        .all(|(a, b)| *a <= b + tol);
    Ok(partial && (sx[n - 1] - sy[n - 1]).abs() <= tol)
}

/// `x ≺_w y`: every descending partial sum of `x` is at most that of `y`.
pub fn sub_majorizes(y: &[f64], x: &[f64], tol: f64) -> Result<bool> {
    check_pair(x, y)?;
    let sx = prefix_sums(&sorted_descending(x));
    let sy = prefix_sums(&sorted_descending(y));
    Ok(sx.iter().zip(&sy).all(|(a, b)| *a <= b + tol))
}

/// `x ≺^w y`: every ascending partial sum of `x` is at least that of `y`.
pub fn super_majorizes(y: &[f64], x: &[f64], tol: f64) -> Result<bool> {
    check_pair(x, y)?;
    let sx = prefix_sums(&sorted_ascending(x));
    let sy = prefix_sums(&sorted_ascending(y));
    Ok(sx.iter().zip(&sy).all(|(a, b)| *a >= b - tol))
}

/// `Σ_j √(p↑_j · q↓_j)`, Schur-concave in `q` for fixed `p`.
pub fn schur_f(p: &[f64], q: &[f64]) -> Result<f64> {
    check_pair(p, q)?;
    validate_distribution(p)?;
    validate_distribution(q)?;
    Ok(sorted_ascending(p)
        .iter()
        .zip(sorted_descending(q))
        .map(|(a, b)| (a * b).sqrt())
        .sum())
}

/// `Σ_i x[π(i)] · y[i]`, summed in index order of `y`.
pub fn pairing_sum(x: &[f64], y: &[f64], perm: &[usize]) -> f64 {
    perm.iter().zip(y).map(|(&j, b)| x[j] * b).sum()
}

fn ranked_pairing(x: &[f64], y: &[f64], reverse: bool) -> Vec<usize> {
    let n = x.len();
    let mut ix: Vec<usize> = (0..n).collect();
    ix.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut iy: Vec<usize> = (0..n).collect();
    iy.sort_by(|&a, &b| y[a].total_cmp(&y[b]));
    let mut perm = vec![0; n];
    for (k, &i) in iy.iter().enumerate() {
        perm[i] = if reverse { ix[n - 1 - k] } else { ix[k] };
    }
    perm
}

/// Pairs the `k`-th smallest `x` with the `k`-th smallest `y`.
pub fn aligned_pairing(x: &[f64], y: &[f64]) -> Vec<usize> {
    ranked_pairing(x, y, false)
}

/// Pairs the `k`-th smallest `x` with the `k`-th largest `y`.
pub fn opposed_pairing(x: &[f64], y: &[f64]) -> Vec<usize> {
    ranked_pairing(x, y, true)
}

/// Dot product of `x` and `y` sorted the same way.
pub fn aligned_dot(x: &[f64], y: &[f64]) -> f64 {
    pairing_sum(x, y, &aligned_pairing(x, y))
}

/// Dot product of `x` and `y` sorted in opposite ways.
pub fn opposed_dot(x: &[f64], y: &[f64]) -> f64 {
    pairing_sum(x, y, &opposed_pairing(x, y))
}

/// Advances `perm` to its lexicographic successor; false once exhausted.
fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Result of exhaustive search over `Σ x[π(i)] y[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RearrangementExtrema {
    pub min: f64,
    pub max: f64,
    /// First permutation in lexicographic order attaining `min`.
    pub argmin: Vec<usize>,
    pub argmax: Vec<usize>,
}

/// Minimum and maximum of `Σ x[π(i)] y[i]` over every permutation `π`.
pub fn rearrangement_extrema(x: &[f64], y: &[f64]) -> Result<RearrangementExtrema> {
    check_pair(x, y)?;
    if x.is_empty() {
        return Err(Error::Empty("rearrangement vectors"));
    }
    if x.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::BruteForceLimit {
            len: x.len(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut perm: Vec<usize> = (0..x.len()).collect();
    let first = pairing_sum(x, y, &perm);
    let mut out = RearrangementExtrema {
        min: first,
        max: first,
        argmin: perm.clone(),
        argmax: perm.clone(),
    };
    while next_permutation(&mut perm) {
        let s = pairing_sum(x, y, &perm);
        if s < out.min {
            out.min = s;
            out.argmin.clone_from(&perm);
        }
        if s > out.max {
            out.max = s;
            out.argmax.clone_from(&perm);
        }
    }
    Ok(out)
}
