//! Complex scalars and small Hermitian eigenproblems.
//!
//! Exact complex rationals back the hull vectors wherever the arithmetic stays
//! rational; the float side (cyclic Jacobi) serves the commutative and numeric
//! hull methods, where 1e-12 working precision against a 1e-9 acceptance
//! tolerance is the contract.

use crate::matrix::{rat_to_f64, Rat};
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use std::fmt;

/// Exact complex rational a + b i.
#[derive(Clone, PartialEq, Eq)]
pub struct CRat {
    pub re: Rat,
    pub im: Rat,
}

impl CRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        CRat { re, im }
    }

    pub fn from_rat(re: Rat) -> Self {
        CRat { re, im: Rat::zero() }
    }

    pub fn zero() -> Self {
        CRat { re: Rat::zero(), im: Rat::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        CRat { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        CRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Self) -> Self {
        CRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul(&self, o: &Self) -> Self {
        CRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn scale(&self, t: &Rat) -> Self {
        CRat { re: &self.re * t, im: &self.im * t }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

impl fmt::Debug for CRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

pub fn cvec_dot_unconj(a: &[CRat], b: &[CRat]) -> CRat {
    assert_eq!(a.len(), b.len());
    let mut acc = CRat::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.mul(y));
    }
    acc
}

/// e_k sums of principal minors for an exact Hermitian matrix (row-major, n x n).
/// These are real; the matrix is PSD iff all are >= 0.
pub fn hermitian_minor_sums(m: &[CRat], n: usize) -> Vec<Rat> {
    assert_eq!(m.len(), n * n);
    // Faddeev-LeVerrier over complex rationals; coefficients come out real.
    let at = |a: &[CRat], i: usize, j: usize| a[i * n + j].clone();
    let mut coeffs = vec![CRat::zero(); n + 1];
    coeffs[n] = CRat::from_rat(Rat::from_integer(1.into()));
    let mut acc: Vec<CRat> = (0..n * n)
        .map(|idx| {
            if idx / n == idx % n {
                CRat::from_rat(Rat::from_integer(1.into()))
            } else {
                CRat::zero()
            }
        })
        .collect();
    for k in 1..=n {
        // acc = m * acc
        let mut next = vec![CRat::zero(); n * n];
        for i in 0..n {
            for l in 0..n {
                let a = at(m, i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    next[i * n + j] = next[i * n + j].add(&a.mul(&at(&acc, l, j)));
                }
            }
        }
        acc = next;
        let mut tr = CRat::zero();
        for i in 0..n {
            tr = tr.add(&at(&acc, i, i));
        }
        let c = CRat {
            re: -(&tr.re / Rat::from_integer(k.into())),
            im: -(&tr.im / Rat::from_integer(k.into())),
        };
        coeffs[n - k] = c.clone();
        for i in 0..n {
            acc[i * n + i] = acc[i * n + i].add(&c);
        }
    }
    (1..=n)
        .map(|k| {
            let c = &coeffs[n - k];
            debug_assert!(c.im.is_zero(), "Hermitian char poly must be real");
            if k % 2 == 0 {
                c.re.clone()
            } else {
                -c.re.clone()
            }
        })
        .collect()
}

/// Eigenvalues and eigenvectors of a Hermitian matrix by cyclic Jacobi.
/// Returns (eigenvalues ascending, eigenvectors as columns).
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// column t is the unit eigenvector for the t-th value: `vectors[i][t]` is component i
    pub vectors: Vec<Vec<Complex64>>,
}

pub fn hermitian_eigen(a: &[Vec<Complex64>]) -> HermitianEigen {
    let n = a.len();
    let mut m: Vec<Vec<Complex64>> = a.to_vec();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::ZERO })
                .collect()
        })
        .collect();

    let off = |m: &[Vec<Complex64>]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i][j].norm_sqr();
                }
            }
        }
        s
    };

    for _sweep in 0..200 {
        if off(&m) < 1e-28 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p][q];
                if apq.norm() < 1e-300 {
                    continue;
                }
                let app = m[p][p].re;
                let aqq = m[q][q].re;
                // diag(1, conj(phase)) makes the pivot real, then a classical
                // real Jacobi rotation with tan(2 theta) = 2|apq|/(aqq - app)
                let g = apq.norm();
                let phase = apq / g;
                let theta = 0.5 * (2.0 * g).atan2(aqq - app);
                let c = theta.cos();
                let s = theta.sin();
                let scp = phase.conj() * s; // s * conj(phase)
                let sph = phase * s; // s * phase
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = mkp * c - mkq * scp;
                    m[k][q] = mkp * s + mkq * (phase.conj() * c);
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = mpk * c - mqk * sph;
                    m[q][k] = mpk * s + mqk * (phase * c);
                }
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = vkp * c - vkq * scp;
                    v[k][q] = vkp * s + vkq * (phase.conj() * c);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[i][i].re).collect();
    order.sort_by(|&x, &y| diag[x].partial_cmp(&diag[y]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors: Vec<Vec<Complex64>> = (0..n)
        .map(|i| order.iter().map(|&t| v[i][t]).collect())
        .collect();
    HermitianEigen { values, vectors }
}

/// Minimum eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(a: &[Vec<Complex64>]) -> f64 {
    hermitian_eigen(a).values.first().copied().unwrap_or(0.0)
}
