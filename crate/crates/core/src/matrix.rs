//! Dense exact-rational matrices and vectors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Sub};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub type ExactVector = Vec<Rat>;

pub fn vec_zero(n: usize) -> ExactVector {
    vec![Rat::zero(); n]
}

pub fn vec_add(a: &[Rat], b: &[Rat]) -> ExactVector {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> ExactVector {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Rat], t: &Rat) -> ExactVector {
    a.iter().map(|x| x * t).collect()
}

pub fn vec_dot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn vec_sum(a: &[Rat]) -> Rat {
    a.iter().fold(Rat::zero(), |acc, x| acc + x)
}

pub fn vec_l1_dist(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + (x - y).abs())
}

/// Row-major dense matrix over the rationals; dimensions checked on every product.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        ExactMatrix::from_fn(r, c, |i, j| rat_int(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> ExactVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        ExactMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, t: &Rat) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * t).collect(),
        }
    }

    pub fn trace(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).fold(Rat::zero(), |acc, i| acc + &self[(i, i)])
    }

    pub fn mul_vec(&self, v: &[Rat]) -> ExactVector {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| vec_dot(self.row(i), v)).collect()
    }

    /// Kronecker product with pair indices (a,b) -> a*other.rows + b.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        ExactMatrix::from_fn(rows, cols, |i, j| {
            let (a, b) = (i / other.rows, i % other.rows);
            let (c, d) = (j / other.cols, j % other.cols);
            &self[(a, c)] * &other[(b, d)]
        })
    }

    pub fn pow(&self, mut n: u32) -> Self {
        assert_eq!(self.rows, self.cols);
        let mut base = self.clone();
        let mut acc = ExactMatrix::identity(self.rows);
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// Submatrix on the given row and column index sets.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        ExactMatrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Gauss-Jordan solve of `self * X = rhs`; None when singular.
    pub fn solve(&self, rhs: &ExactMatrix) -> Option<ExactMatrix> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(self.rows, rhs.rows);
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            if pivot != col {
                a.swap_rows(pivot, col);
                b.swap_rows(pivot, col);
            }
            let inv = a[(col, col)].recip();
            for j in 0..n {
                let v = &a[(col, j)] * &inv;
                a[(col, j)] = v;
            }
            for j in 0..b.cols {
                let v = &b[(col, j)] * &inv;
                b[(col, j)] = v;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for j in 0..n {
                    let v = &a[(r, j)] - &factor * &a[(col, j)];
                    a[(r, j)] = v;
                }
                for j in 0..b.cols {
                    let v = &b[(r, j)] - &factor * &b[(col, j)];
                    b[(r, j)] = v;
                }
            }
        }
        Some(b)
    }

    pub fn solve_vec(&self, rhs: &[Rat]) -> Option<ExactVector> {
        let m = ExactMatrix { rows: rhs.len(), cols: 1, data: rhs.to_vec() };
        self.solve(&m).map(|x| x.data)
    }

    pub fn inverse(&self) -> Option<ExactMatrix> {
        self.solve(&ExactMatrix::identity(self.rows))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of the right nullspace, as vectors.
    pub fn nullspace(&self) -> Vec<ExactVector> {
        let mut a = self.clone();
        let (rows, cols) = (a.rows, a.cols);
        let mut pivot_cols = Vec::new();
        let mut r = 0usize;
        for c in 0..cols {
            if r >= rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(p, r);
            let inv = a[(r, c)].recip();
            for j in 0..cols {
                let v = &a[(r, j)] * &inv;
                a[(r, j)] = v;
            }
            for i in 0..rows {
                if i != r && !a[(i, c)].is_zero() {
                    let factor = a[(i, c)].clone();
                    for j in 0..cols {
                        let v = &a[(i, j)] - &factor * &a[(r, j)];
                        a[(i, j)] = v;
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        let mut basis = Vec::new();
        let free: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
        for &fc in &free {
            let mut v = vec_zero(cols);
            v[fc] = Rat::one();
            for (ri, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -a[(ri, fc)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Coefficients of det(lambda I - M) as [c_0, ..., c_{n-1}, 1], low degree first,
    /// by the Faddeev-LeVerrier recursion.
    pub fn char_poly(&self) -> Vec<Rat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = Rat::one();
        let mut m = ExactMatrix::identity(n);
        for k in 1..=n {
            m = self * &m;
            let c = -(m.trace() / rat_int(k as i64));
            coeffs[n - k] = c.clone();
            for i in 0..n {
                let v = &m[(i, i)] + &c;
                m[(i, i)] = v;
            }
        }
        coeffs
    }

    /// e_k = sum of all k x k principal minors, k = 1..n.  For a symmetric matrix
    /// these are the elementary symmetric functions of the (real) eigenvalues, so the
    /// matrix is positive semidefinite iff every e_k >= 0.
    pub fn principal_minor_sums(&self) -> Vec<Rat> {
        let n = self.rows;
        let cp = self.char_poly();
        (1..=n)
            .map(|k| {
                let c = cp[n - k].clone();
                if k % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Exact positive-semidefiniteness test for a symmetric matrix.
    pub fn is_psd_symmetric(&self) -> bool {
        assert!(self.is_symmetric());
        self.principal_minor_sums().iter().all(|e| !e.is_negative())
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(rat_to_f64).collect())
            .collect()
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    // good enough for cross-checks; exact paths never round-trip through here
    let n = r.numer();
    let d = r.denom();
    let fn_ = bigint_to_f64(n);
    let fd = bigint_to_f64(d);
    fn_ / fd
}

fn bigint_to_f64(b: &BigInt) -> f64 {
    b.to_string().parse::<f64>().unwrap_or(f64::NAN)
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = ExactMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = &out[(i, j)] + a * &other[(k, j)];
                    out[(i, j)] = v;
                }
            }
        }
        out
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let parts: Vec<String> = self.row(i).iter().map(|r| r.to_string()).collect();
            writeln!(f, "  [{}]", parts.join(", "))?;
        }
        write!(f, "]")
    }
}
