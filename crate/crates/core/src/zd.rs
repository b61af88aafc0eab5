//! Componentwise base-q arithmetic on Z^d.
//!
//! Every lattice point is a vector of arbitrary-precision integers, and all
//! operations (division with remainder, digit expansions, carry sets) act
//! coordinatewise.  Remainders always land in `[0, q^n)` via floored
//! division, so negative inputs behave the same way positive ones do.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A point of Z^d with unbounded integer coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint(Vec<BigInt>);

impl LatticePoint {
    pub fn new(coords: Vec<BigInt>) -> Self {
        assert!(!coords.is_empty(), "lattice point needs at least one coordinate");
        LatticePoint(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticePoint(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        LatticePoint(vec![BigInt::zero(); dim])
    }

    pub fn ones(dim: usize) -> Self {
        LatticePoint(vec![BigInt::one(); dim])
    }

    /// The i-th coordinate vector (1 at position `i`, 0 elsewhere).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut c = vec![BigInt::zero(); dim];
        c[i] = BigInt::one();
        LatticePoint(c)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn coord(&self, i: usize) -> &BigInt {
        &self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        LatticePoint(self.0.iter().map(|a| -a).collect())
    }

    /// Componentwise product.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }

    pub fn scale(&self, t: &BigInt) -> Self {
        LatticePoint(self.0.iter().map(|a| a * t).collect())
    }

    /// Componentwise `self < other`.
    pub fn lt(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a < b)
    }

    /// Componentwise `self >= other`.
    pub fn ge(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

/// An expansion vector q > 1 together with Q = q_1 ... q_d.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Expansion {
    q: LatticePoint,
    total: BigInt,
}

impl Expansion {
    pub fn new(q: LatticePoint) -> Result<Self, String> {
        let two = BigInt::from(2);
        for (i, c) in q.coords().iter().enumerate() {
            if c < &two {
                return Err(format!("expansion coordinate {} is {}, must be >= 2", i + 1, c));
            }
        }
        let total = q.coords().iter().product();
        Ok(Expansion { q, total })
    }

    pub fn from_i64(q: &[i64]) -> Result<Self, String> {
        Expansion::new(LatticePoint::from_i64(q))
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn q(&self) -> &LatticePoint {
        &self.q
    }

    /// Q = q_1 ... q_d.
    pub fn total(&self) -> &BigInt {
        &self.total
    }

    /// q^n componentwise.
    pub fn pow(&self, n: u32) -> LatticePoint {
        LatticePoint(self.q.coords().iter().map(|c| c.pow(n)).collect())
    }

    /// Q^n.
    pub fn total_pow(&self, n: u32) -> BigInt {
        self.total.pow(n)
    }

    /// Q^n as usize, or None if it does not fit.
    pub fn total_pow_usize(&self, n: u32) -> Option<usize> {
        usize::try_from(&self.total_pow(n)).ok()
    }

    /// Iterate the rectangle [0, q^n) in lexicographic order, last coordinate fastest.
    pub fn rect_iter(&self, n: u32) -> RectIter {
        RectIter::new(self.pow(n))
    }
}

/// Floored division of each coordinate: k_i = floor(k_i / m_i) * m_i + r_i with r_i in [0, m_i).
fn div_floor(a: &BigInt, m: &BigInt) -> (BigInt, BigInt) {
    let r = ((a % m) + m) % m;
    let q = (a - &r) / m;
    (q, r)
}

/// Remainder and quotient of `k` mod q^n, componentwise and floored.
pub fn divmod_qn(k: &LatticePoint, q: &Expansion, n: u32) -> (LatticePoint, LatticePoint) {
    assert_eq!(k.dim(), q.dim());
    let modulus = q.pow(n);
    let mut rem = Vec::with_capacity(k.dim());
    let mut quot = Vec::with_capacity(k.dim());
    for (a, m) in k.coords().iter().zip(modulus.coords()) {
        let (qu, r) = div_floor(a, m);
        rem.push(r);
        quot.push(qu);
    }
    (LatticePoint(rem), LatticePoint(quot))
}

/// The first `n` base-q digits of `k` (of the remainder of k mod q^n),
/// least significant first.  Each digit lies in [0, q).
pub fn digits(k: &LatticePoint, q: &Expansion, n: u32) -> Vec<LatticePoint> {
    let (mut rem, _) = divmod_qn(k, q, n);
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let mut digit = Vec::with_capacity(k.dim());
        let mut next = Vec::with_capacity(k.dim());
        for (a, m) in rem.coords().iter().zip(q.q().coords()) {
            let (qu, r) = div_floor(a, m);
            digit.push(r);
            next.push(qu);
        }
        out.push(LatticePoint(digit));
        rem = LatticePoint(next);
    }
    out
}

/// The minimal p >= 0 with k in (-q^p, q^p) componentwise.
pub fn power_of(k: &LatticePoint, q: &Expansion) -> u32 {
    let mut p = 0u32;
    for (a, base) in k.coords().iter().zip(q.q().coords()) {
        let mut pi = 0u32;
        let mut m = BigInt::one();
        let abs = a.abs();
        while m <= abs {
            m *= base;
            pi += 1;
        }
        p = p.max(pi);
    }
    p
}

/// True if adding `k` to `j` leaves the q^n superblock: quotient of (j + k) mod q^n is nonzero.
pub fn carries(j: &LatticePoint, k: &LatticePoint, q: &Expansion, n: u32) -> bool {
    let (_, quot) = divmod_qn(&j.add(k), q, n);
    !quot.is_zero()
}

/// The n-carry set for k: all j in [0, q^n) whose translation by k leaves the superblock.
/// Materializes the full set; use [`carry_count`] or [`carries`] when only the
/// size or membership is needed (the set can be of order Q^{n-1} d).
pub fn carry_set(k: &LatticePoint, q: &Expansion, n: u32) -> Vec<LatticePoint> {
    let mut out = Vec::new();
    for j in q.rect_iter(n) {
        if carries(&j, k, q, n) {
            out.push(j);
        }
    }
    out
}

/// Card of the n-carry set for k, by the per-coordinate product formula.
pub fn carry_count(k: &LatticePoint, q: &Expansion, n: u32) -> BigInt {
    // Per coordinate: j_i carries iff quot((j_i + k_i) mod q_i^n) != 0.  Writing
    // k_i = kappa * q_i^n + r with r in [0, q_i^n), the no-carry count is
    // q_i^n - r when kappa = 0, r when kappa = -1, and 0 otherwise.
    let mut no_carry = BigInt::one();
    for (a, base) in k.coords().iter().zip(q.q().coords()) {
        let m = base.pow(n);
        let (kappa, r) = div_floor(a, &m);
        let cnt = if kappa.is_zero() {
            &m - &r
        } else if kappa == BigInt::from(-1) {
            r
        } else {
            BigInt::zero()
        };
        no_carry *= cnt;
    }
    q.total_pow(n) - no_carry
}

/// Lexicographic iterator over [0, bound) with the last coordinate varying fastest.
pub struct RectIter {
    bound: LatticePoint,
    current: Option<Vec<BigInt>>,
}

impl RectIter {
    pub fn new(bound: LatticePoint) -> Self {
        let empty = bound.coords().iter().any(|b| b <= &BigInt::zero());
        RectIter {
            current: if empty { None } else { Some(vec![BigInt::zero(); bound.dim()]) },
            bound,
        }
    }
}

impl Iterator for RectIter {
    type Item = LatticePoint;

    fn next(&mut self) -> Option<LatticePoint> {
        let cur = self.current.as_mut()?;
        let item = LatticePoint(cur.clone());
        // odometer increment, last coordinate fastest
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            cur[i] += 1;
            if &cur[i] < self.bound.coord(i) {
                break;
            }
            cur[i] = BigInt::zero();
        }
        Some(item)
    }
}

/// Linear index of `j` inside the rectangle [0, shape), lexicographic with the
/// last coordinate fastest.  This is the cell-serialization order used
/// throughout (blocks, rule lists, frequency scans).
pub fn linear_index(j: &LatticePoint, shape: &LatticePoint) -> Option<usize> {
    let mut idx = BigInt::zero();
    for (c, s) in j.coords().iter().zip(shape.coords()) {
        if c < &BigInt::zero() || c >= s {
            return None;
        }
        idx = idx * s + c;
    }
    usize::try_from(&idx).ok()
}
