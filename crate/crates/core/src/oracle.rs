//! Brute-force verification: expand superblocks, count two-letter pattern
//! frequencies, and compare against the exact correlation coefficients.
//!
//! Counts are normalized by Q^n, not by the number of valid positions, so the
//! boundary deficit is part of the reported error budget instead of being
//! hidden by renormalization.

use crate::error::{Error, Result};
use crate::matrix::{vec_l1_dist, ExactVector, Rat};
use crate::substitution::Substitution;
use crate::zd::{carry_count, LatticePoint};
use num_bigint::BigInt;
use num_traits::Signed;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct FrequencyVector {
    pub n: u32,
    pub k: LatticePoint,
    pub gamma: usize,
    pub counts: BTreeMap<(usize, usize), u64>,
    /// counts / Q^n in pair order alpha*s + beta
    pub normalized: ExactVector,
    pub valid_positions: u64,
    /// positions dropped because j + k leaves the superblock
    pub boundary_dropped: u64,
    pub carry_cardinality: BigInt,
}

/// Count pairs (block(j), block(j + k)) over the superblock S^n(gamma).
pub fn pair_frequency(
    sub: &Substitution,
    gamma: usize,
    n: u32,
    k: &LatticePoint,
    cell_budget: u64,
) -> Result<FrequencyVector> {
    if crate::zd::power_of(k, sub.expansion()) + 1 > n {
        return Err(Error::invalid(format!(
            "depth {n} too small for k = {k}: need n >= power_of(k) + 1"
        )));
    }
    let block = sub.expand(gamma, n, cell_budget)?;
    let s = sub.size();
    let d = sub.dim();
    let shape: Vec<i64> = sub
        .expansion()
        .pow(n)
        .coords()
        .iter()
        .map(|c| i64::try_from(c).expect("q^n fits i64 within budget"))
        .collect();
    let offset: Vec<i64> = k
        .coords()
        .iter()
        .map(|c| i64::try_from(c).expect("k fits i64"))
        .collect();
    // strides for the linear cell order (last coordinate fastest)
    let mut stride = vec![1i64; d];
    for i in (0..d.saturating_sub(1)).rev() {
        stride[i] = stride[i + 1] * shape[i + 1];
    }
    let linear_offset: i64 = offset.iter().zip(&stride).map(|(o, st)| o * st).sum();

    let mut counts: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut valid = 0u64;
    let mut dropped = 0u64;
    let cells = block.cells();
    let mut coord = vec![0i64; d];
    for (idx, &a) in cells.iter().enumerate() {
        let inside = coord.iter().zip(&offset).zip(&shape).all(|((c, o), sh)| {
            let t = c + o;
            t >= 0 && t < *sh
        });
        if inside {
            let b = cells[(idx as i64 + linear_offset) as usize];
            *counts.entry((a, b)).or_insert(0) += 1;
            valid += 1;
        } else {
            dropped += 1;
        }
        for i in (0..d).rev() {
            coord[i] += 1;
            if coord[i] < shape[i] {
                break;
            }
            coord[i] = 0;
        }
    }

    let qn = Rat::from_integer(sub.expansion().total_pow(n));
    let mut normalized = crate::matrix::vec_zero(s * s);
    for (&(a, b), &c) in &counts {
        normalized[a * s + b] = Rat::from_integer(BigInt::from(c)) / &qn;
    }
    Ok(FrequencyVector {
        n,
        k: k.clone(),
        gamma,
        counts,
        normalized,
        valid_positions: valid,
        boundary_dropped: dropped,
        carry_cardinality: carry_count(k, sub.expansion(), n),
    })
}

#[derive(Clone, Debug)]
pub struct CompareReport {
    pub l1: Rat,
    pub max_deviation: Rat,
    /// (s * card Delta_n(k) + boundary positions) / Q^n
    pub error_budget: Rat,
}

/// Exact distances between an empirical frequency vector and a coefficient vector.
pub fn compare(freq: &FrequencyVector, exact: &[Rat], sub: &Substitution) -> CompareReport {
    let l1 = vec_l1_dist(&freq.normalized, exact);
    let max_deviation = freq
        .normalized
        .iter()
        .zip(exact)
        .map(|(a, b)| (a - b).abs())
        .max()
        .unwrap_or_else(|| Rat::from_integer(0.into()));
    let qn = Rat::from_integer(sub.expansion().total_pow(freq.n));
    let budget_num = Rat::from_integer(
        BigInt::from(sub.size()) * &freq.carry_cardinality + BigInt::from(freq.boundary_dropped),
    );
    CompareReport { l1, max_deviation, error_budget: budget_num / qn }
}
