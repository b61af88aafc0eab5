//! Univariate polynomials over the rationals: arithmetic, Sturm sequences,
//! root isolation, and minimal-denominator rational reconstruction.
//!
//! Degrees stay small here (bounded by the alphabet size), so dense
//! representation and exact arithmetic are plenty.

use crate::matrix::{rat_int, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Dense polynomial, coefficients low degree first, normalized (no trailing zeros).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly(pub Vec<Rat>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rat::zero());
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(vec![Rat::zero()])
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_zero()
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn leading(&self) -> &Rat {
        self.0.last().unwrap()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.degree() == 0 {
            return Poly::zero();
        }
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat_int(i as i64))
                .collect(),
        )
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Euclidean remainder of self by other.
    pub fn rem(&self, other: &Poly) -> Poly {
        assert!(!other.is_zero());
        let mut r = self.0.clone();
        let dlead = other.leading().clone();
        while r.len() >= other.0.len() && !(r.len() == 1 && r[0].is_zero()) {
            let k = r.len() - other.0.len();
            let factor = r.last().unwrap() / &dlead;
            if factor.is_zero() {
                r.pop();
                continue;
            }
            for (i, c) in other.0.iter().enumerate() {
                let v = &r[k + i] - &factor * c;
                r[k + i] = v;
            }
            // leading term cancels exactly
            r.pop();
            while r.len() > other.0.len().saturating_sub(1)
                && r.last().map(|c| c.is_zero()).unwrap_or(false)
            {
                r.pop();
            }
            if r.is_empty() {
                r.push(Rat::zero());
            }
        }
        Poly::new(r)
    }

    fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading().clone();
        Poly::new(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// self with repeated roots removed.
    pub fn squarefree(&self) -> Poly {
        if self.degree() == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.monic();
        }
        self.div_exact(&g).monic()
    }

    /// Exact division (panics if not divisible) -- used only after gcd.
    fn div_exact(&self, other: &Poly) -> Poly {
        let mut r = self.0.clone();
        let mut q = vec![Rat::zero(); self.0.len() - other.0.len() + 1];
        let dlead = other.leading().clone();
        while r.len() >= other.0.len() {
            let k = r.len() - other.0.len();
            let factor = r.last().unwrap() / &dlead;
            q[k] = factor.clone();
            for (i, c) in other.0.iter().enumerate() {
                let v = &r[k + i] - &factor * c;
                r[k + i] = v;
            }
            r.pop();
            if r.is_empty() {
                break;
            }
        }
        Poly::new(q)
    }

    /// Cauchy bound: all real roots lie in (-B, B).
    pub fn root_bound(&self) -> Rat {
        let lead = self.leading();
        let mut m = Rat::zero();
        for c in &self.0[..self.0.len() - 1] {
            let v = (c / lead).abs();
            if v > m {
                m = v;
            }
        }
        m + rat_int(1)
    }

    fn sturm_chain(&self) -> Vec<Poly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain
    }

    fn sign_changes(chain: &[Poly], x: &Rat) -> usize {
        let mut changes = 0;
        let mut last = 0i8;
        for p in chain {
            let v = p.eval(x);
            let s = if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            };
            if s != 0 {
                if last != 0 && s != last {
                    changes += 1;
                }
                last = s;
            }
        }
        changes
    }

    /// Number of distinct real roots in (a, b], via Sturm's theorem.
    pub fn count_roots(&self, chain: &[Poly], a: &Rat, b: &Rat) -> usize {
        Self::sign_changes(chain, a) - Self::sign_changes(chain, b)
    }

    /// Isolating intervals (a, b] for every distinct real root of a squarefree
    /// polynomial, sorted left to right.
    pub fn isolate_roots(&self) -> Vec<(Rat, Rat)> {
        assert!(!self.is_zero());
        if self.degree() == 0 {
            return Vec::new();
        }
        let sf = self.squarefree();
        let chain = sf.sturm_chain();
        let bound = sf.root_bound();
        let mut stack = vec![(-bound.clone(), bound.clone())];
        let mut out = Vec::new();
        while let Some((a, b)) = stack.pop() {
            let n = sf.count_roots(&chain, &a, &b);
            if n == 0 {
                continue;
            }
            if n == 1 {
                out.push((a, b));
                continue;
            }
            let mid = (&a + &b) / rat_int(2);
            stack.push((a, mid.clone()));
            stack.push((mid, b));
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }

    /// Shrink an isolating interval (a, b] of a squarefree polynomial until
    /// b - a < eps, keeping exactly one root inside.
    pub fn refine_interval(&self, chain: &[Poly], mut a: Rat, mut b: Rat, eps: &Rat) -> (Rat, Rat) {
        while &(&b - &a) >= eps {
            let mid = (&a + &b) / rat_int(2);
            if self.eval(&mid).is_zero() {
                // land exactly: return degenerate interval around the root
                return (mid.clone(), mid);
            }
            if self.count_roots(chain, &a, &mid) == 1 {
                b = mid;
            } else {
                a = mid;
            }
        }
        (a, b)
    }

    /// Try to identify the unique root in the isolating interval as an exact rational.
    /// Refines the interval, then tests the minimal-denominator rational inside it.
    pub fn rational_root_in(&self, a: &Rat, b: &Rat) -> Option<Rat> {
        let sf = self.squarefree();
        let chain = sf.sturm_chain();
        let eps = Rat::new(BigInt::one(), BigInt::from(10u64).pow(24));
        let (lo, hi) = sf.refine_interval(&chain, a.clone(), b.clone(), &eps);
        if lo == hi {
            return Some(lo);
        }
        // The root of the original isolating interval is in (lo, hi]; candidates are
        // the simplest rationals in the closed interval.
        [simplest_in_closed(&lo, &hi), hi.clone()]
            .into_iter()
            .find(|cand| self.eval(cand).is_zero())
    }
}

/// The rational with minimal denominator in the closed interval [a, b]
/// (Stern-Brocot / continued-fraction reconstruction).
pub fn simplest_in_closed(a: &Rat, b: &Rat) -> Rat {
    assert!(a <= b);
    if a.is_negative() && !b.is_negative() {
        return Rat::zero();
    }
    if b.is_negative() {
        return -simplest_in_closed(&-b.clone(), &-a.clone());
    }
    simplest_nonneg(a, b)
}

fn simplest_nonneg(a: &Rat, b: &Rat) -> Rat {
    let fa = a.floor();
    if &fa == a {
        return a.clone();
    }
    if fa.clone() + rat_int(1) <= *b {
        return fa + rat_int(1);
    }
    // a, b in (fa, fa+1): recurse on reciprocals of the fractional parts
    let ra = a - &fa;
    let rb = b - &fa;
    let inner = simplest_nonneg(&rb.recip(), &ra.recip());
    fa + inner.recip()
}
