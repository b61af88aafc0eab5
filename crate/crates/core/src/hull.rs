//! The spectral hull: normalized strongly-semipositive left Q-eigenvectors of
//! the coincidence matrix, and enumeration of its extreme points.
//!
//! The hull is parametrized affinely through the ergodic classes of the
//! bisubstitution: a left Q-eigenvector is constant on each class, the
//! transient components are determined by inverting (Q I - C_T^t), and
//! self-adjointness pairs each class weight with the weight of its transposed
//! class.  Enumeration methods:
//!
//! * `Exact1d` - one free real parameter: the feasible set is an interval
//!   whose endpoints are isolated by Sturm sequences and identified exactly
//!   when rational;
//! * `CommutativeExact` - commuting instructions: the eigenvalue constraints
//!   are simultaneously linear in the parameters and the hull is a polyhedron
//!   whose vertices are enumerated (complex floats at 1e-12 working
//!   precision);
//! * `Numeric` - vertex search by random objectives with facial descent;
//!   results are verified but completeness is not certified;
//! * `VerifyCandidates` - membership and extremality checks for user-supplied
//!   vectors.

use crate::cmat::{hermitian_eigen, hermitian_minor_sums, CRat};
use crate::error::{Error, Result};
use crate::matrix::{rat_int, rat_to_f64, ExactMatrix, Rat};
use crate::poly::Poly;
use crate::structure::{ergodic_decomposition, ErgodicDecomposition, InvariantWeights};
use crate::substitution::Substitution;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

/// Transpose pairing of bisubstitution classes under alpha beta -> beta alpha.
/// Returns the involution on class indices; errors if some transposed class is
/// not a class (impossible when the decomposition really is a bisubstitution's).
pub fn transpose_pairing(decomp: &ErgodicDecomposition, s: usize) -> Result<Vec<usize>> {
    let transpose = |pair: usize| (pair % s) * s + pair / s;
    let mut pairing = vec![usize::MAX; decomp.classes.len()];
    for (j, class) in decomp.classes.iter().enumerate() {
        let mut image: Vec<usize> = class.iter().map(|&p| transpose(p)).collect();
        image.sort_unstable();
        let partner = decomp
            .classes
            .iter()
            .position(|c| c == &image)
            .ok_or_else(|| Error::internal("transposed class is not a class"))?;
        pairing[j] = partner;
    }
    for (j, &p) in pairing.iter().enumerate() {
        if pairing[p] != j {
            return Err(Error::internal("transpose pairing is not an involution"));
        }
    }
    Ok(pairing)
}

/// Kind of one free real parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamKind {
    /// weight of a self-paired class (real)
    Real { class: usize },
    /// real part shared by a conjugate pair of classes
    PairRe { class: usize, partner: usize },
    /// imaginary part of the same pair
    PairIm { class: usize, partner: usize },
}

/// Affine parametrization of the spectral hull.
///
/// `v(t) = origin + sum_i t_i dir_i` ranges over the normalized self-adjoint
/// left Q-eigenspace of the coincidence matrix as `t` ranges over R^m;
/// membership in the hull is then exactly the positive-semidefiniteness of the
/// associated matrix.
pub struct HullParametrization {
    pub s: usize,
    pub bisub_decomposition: ErgodicDecomposition,
    pub pairing: Vec<usize>,
    /// per-class columns m_j of the eigenvector map (exact, real)
    pub class_columns: Vec<Vec<Rat>>,
    /// normalization coefficients: `sum_j norm[j] * w_j = 1`
    pub norm_coeffs: Vec<Rat>,
    pub pivot_class: usize,
    pub origin: Vec<CRat>,
    pub dirs: Vec<Vec<CRat>>,
    pub kinds: Vec<ParamKind>,
}

impl HullParametrization {
    pub fn free_dim(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_real(&self) -> bool {
        self.origin.iter().all(CRat::is_real)
            && self.dirs.iter().all(|d| d.iter().all(CRat::is_real))
    }

    pub fn value_at(&self, t: &[Rat]) -> Vec<CRat> {
        assert_eq!(t.len(), self.free_dim());
        let mut v = self.origin.clone();
        for (ti, dir) in t.iter().zip(&self.dirs) {
            for (x, d) in v.iter_mut().zip(dir) {
                *x = x.add(&d.scale(ti));
            }
        }
        v
    }

    pub fn value_at_f64(&self, t: &[f64]) -> Vec<Complex64> {
        let mut v: Vec<Complex64> = self.origin.iter().map(CRat::to_c64).collect();
        for (ti, dir) in t.iter().zip(&self.dirs) {
            for (x, d) in v.iter_mut().zip(dir) {
                *x += d.to_c64() * *ti;
            }
        }
        v
    }

    /// The parameter point whose value is the all-ones vector.
    pub fn all_ones_params(&self) -> Vec<Rat> {
        self.kinds
            .iter()
            .map(|k| match k {
                ParamKind::Real { .. } | ParamKind::PairRe { .. } => Rat::one(),
                ParamKind::PairIm { .. } => Rat::zero(),
            })
            .collect()
    }

    fn dirs_f64(&self) -> Vec<Vec<Vec<Complex64>>> {
        self.dirs
            .iter()
            .map(|d| {
                let v: Vec<Complex64> = d.iter().map(CRat::to_c64).collect();
                associated_matrix_c64(&v, self.s)
            })
            .collect()
    }
}

pub fn associated_matrix_c64(v: &[Complex64], s: usize) -> Vec<Vec<Complex64>> {
    (0..s).map(|a| (0..s).map(|b| v[a * s + b]).collect()).collect()
}

/// Build the affine hull parametrization for a telescoped substitution
/// (both the substitution and its bisubstitution must have index 1).
pub fn hull_parametrization(
    sub: &Substitution,
    weights: &InvariantWeights,
) -> Result<HullParametrization> {
    let s = sub.size();
    let s2 = s * s;
    let bisub = sub.bisubstitution();
    let decomp = ergodic_decomposition(&bisub);
    if decomp.index_h != 1 {
        return Err(Error::Precondition(
            "bisubstitution has index of imprimitivity > 1; telescope first".into(),
        ));
    }
    let pairing = transpose_pairing(&decomp, s)?;
    let c_t = sub.coincidence_matrix().transpose();
    let q_total = Rat::from_integer(sub.expansion().total().clone());

    // columns m_j = 1_{E_j} - (Q I - C_T^t)^{-1} (Q I - C^t) 1_{E_j}; the
    // correction is supported on the transient pairs
    let identity = ExactMatrix::identity(s2);
    let qi = identity.scale(&q_total);
    let mut ct_transient = ExactMatrix::zeros(s2, s2);
    for &col in &decomp.transient {
        for row in 0..s2 {
            ct_transient[(row, col)] = c_t[(row, col)].clone();
        }
    }
    let lhs = &qi - &ct_transient;
    let shifted = &qi - &c_t;
    let inv = lhs.inverse().ok_or_else(|| {
        Error::Precondition(
            "Q I - C_T^t is singular: transient spectral radius reaches Q (mis-telescoped input)"
                .into(),
        )
    })?;
    let correction = &inv * &shifted;

    let mut class_columns = Vec::with_capacity(decomp.classes.len());
    for class in &decomp.classes {
        let mut indicator = vec![Rat::zero(); s2];
        for &p in class {
            indicator[p] = Rat::one();
        }
        let corr = correction.mul_vec(&indicator);
        let column: Vec<Rat> = indicator.iter().zip(&corr).map(|(a, b)| a - b).collect();
        class_columns.push(column);
    }
    // every column is an exact left Q-eigenvector of the coincidence matrix
    for (j, col) in class_columns.iter().enumerate() {
        let image = c_t.mul_vec(col);
        let scaled: Vec<Rat> = col.iter().map(|x| x * &q_total).collect();
        if image != scaled {
            return Err(Error::internal(format!("class column {j} is not a Q-eigenvector")));
        }
    }

    // normalization functional: sum_alpha v_{alpha alpha} u_alpha = 1
    let norm_coeffs: Vec<Rat> = class_columns
        .iter()
        .map(|col| {
            (0..s)
                .map(|alpha| &col[alpha * s + alpha] * &weights.u[alpha])
                .fold(Rat::zero(), |acc, x| acc + x)
        })
        .collect();
    let pivot_class = norm_coeffs
        .iter()
        .position(|c| !c.is_zero())
        .ok_or_else(|| Error::internal("no class carries diagonal weight"))?;
    if pairing[pivot_class] != pivot_class {
        return Err(Error::internal("diagonal pivot class is not transpose-symmetric"));
    }

    // substitute w_pivot = (1 - sum_{j != pivot} n_j w_j) / n_pivot
    let np = norm_coeffs[pivot_class].clone();
    let origin: Vec<CRat> = class_columns[pivot_class]
        .iter()
        .map(|x| CRat::from_rat(x / &np))
        .collect();
    let mut dirs: Vec<Vec<CRat>> = Vec::new();
    let mut kinds = Vec::new();
    for j in 0..class_columns.len() {
        if j == pivot_class || pairing[j] < j {
            continue;
        }
        let adjust = |col: &[Rat], nj: &Rat| -> Vec<Rat> {
            col.iter()
                .zip(&class_columns[pivot_class])
                .map(|(c, p)| c - &(nj / &np) * p)
                .collect()
        };
        if pairing[j] == j {
            let d = adjust(&class_columns[j], &norm_coeffs[j]);
            dirs.push(d.into_iter().map(CRat::from_rat).collect());
            kinds.push(ParamKind::Real { class: j });
        } else {
            let partner = pairing[j];
            if norm_coeffs[j] != norm_coeffs[partner] {
                return Err(Error::internal("paired classes with unequal diagonal weight"));
            }
            let total_n = &norm_coeffs[j] + &norm_coeffs[partner];
            let re_sum: Vec<Rat> = class_columns[j]
                .iter()
                .zip(&class_columns[partner])
                .map(|(a, b)| a + b)
                .collect();
            let re_dir = adjust(&re_sum, &total_n);
            dirs.push(re_dir.into_iter().map(CRat::from_rat).collect());
            kinds.push(ParamKind::PairRe { class: j, partner });
            // i (m_j - m_partner); purely imaginary, no diagonal weight
            let im_dir: Vec<CRat> = class_columns[j]
                .iter()
                .zip(&class_columns[partner])
                .map(|(a, b)| CRat::new(Rat::zero(), a - b))
                .collect();
            dirs.push(im_dir);
            kinds.push(ParamKind::PairIm { class: j, partner });
        }
    }

    Ok(HullParametrization {
        s,
        bisub_decomposition: decomp,
        pairing,
        class_columns,
        norm_coeffs,
        pivot_class,
        origin,
        dirs,
        kinds,
    })
}

/// A point of (or candidate for) the spectral hull.
#[derive(Clone, Debug)]
pub struct HullVector {
    /// exact complex-rational coordinates, when the enumeration path is exact
    pub exact: Option<Vec<CRat>>,
    pub numeric: Vec<Complex64>,
    pub extreme: bool,
    /// free-parameter value for 1-parameter hulls
    pub parameter: Option<Rat>,
}

impl HullVector {
    pub fn from_exact(v: Vec<CRat>) -> Self {
        let numeric = v.iter().map(CRat::to_c64).collect();
        HullVector { exact: Some(v), numeric, extreme: false, parameter: None }
    }

    pub fn from_numeric(v: Vec<Complex64>) -> Self {
        HullVector { exact: None, numeric: v, extreme: false, parameter: None }
    }

    pub fn is_real(&self) -> bool {
        self.numeric.iter().all(|z| z.im.abs() < 1e-12)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HullMethod {
    Exact1d,
    CommutativeExact,
    Numeric,
    VerifyCandidates,
}

impl HullMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            HullMethod::Exact1d => "exact-1d",
            HullMethod::CommutativeExact => "commutative-exact",
            HullMethod::Numeric => "numeric",
            HullMethod::VerifyCandidates => "verify-candidates",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "exact-1d" => Some(HullMethod::Exact1d),
            "commutative-exact" => Some(HullMethod::CommutativeExact),
            "numeric" => Some(HullMethod::Numeric),
            "candidates" | "verify-candidates" => Some(HullMethod::VerifyCandidates),
            _ => None,
        }
    }
}

/// Result of an extreme-point enumeration.
pub struct HullResult {
    pub points: Vec<HullVector>,
    pub method: HullMethod,
    /// true when the method certifies the list is all of K*
    pub complete: bool,
    pub notes: Vec<String>,
}

pub const PSD_TOL: f64 = 1e-9;

/// Itemized membership certificate for a hull candidate.
#[derive(Clone, Debug)]
pub struct MembershipCertificate {
    pub eigenvector_ok: bool,
    pub eigenvector_residual: f64,
    pub self_adjoint_ok: bool,
    pub psd_ok: bool,
    pub min_eigenvalue: f64,
    pub normalized_ok: bool,
    pub normalization_value: Complex64,
    pub exact_checks: bool,
}

impl MembershipCertificate {
    pub fn is_member(&self) -> bool {
        self.eigenvector_ok && self.self_adjoint_ok && self.psd_ok && self.normalized_ok
    }

    pub fn failing_condition(&self) -> Option<&'static str> {
        if !self.eigenvector_ok {
            Some("C^t v = Q v")
        } else if !self.self_adjoint_ok {
            Some("associated matrix self-adjoint")
        } else if !self.psd_ok {
            Some("associated matrix positive semidefinite")
        } else if !self.normalized_ok {
            Some("sum v_aa u_a = 1")
        } else {
            None
        }
    }
}

/// Check the three hull conditions for a candidate vector; exact on rational
/// input, 1e-9 float tolerances otherwise.
pub fn verify_membership(
    v: &HullVector,
    sub: &Substitution,
    weights: &InvariantWeights,
) -> MembershipCertificate {
    let s = sub.size();
    let ct = sub.coincidence_matrix().transpose();
    let q_total = Rat::from_integer(sub.expansion().total().clone());

    if let Some(exact) = &v.exact {
        // C^t v = Q v over complex rationals
        let mut eig_ok = true;
        for row in 0..s * s {
            let mut acc = CRat::zero();
            for col in 0..s * s {
                if !ct[(row, col)].is_zero() {
                    acc = acc.add(&exact[col].scale(&ct[(row, col)]));
                }
            }
            if !acc.sub(&exact[row].scale(&q_total)).is_zero() {
                eig_ok = false;
                break;
            }
        }
        let mut adj_ok = true;
        for a in 0..s {
            for b in 0..s {
                if exact[a * s + b].conj() != exact[b * s + a] {
                    adj_ok = false;
                }
            }
        }
        let psd_ok =
            adj_ok && hermitian_minor_sums(exact, s).iter().all(|e| !e.is_negative());
        let norm: CRat = (0..s).fold(CRat::zero(), |acc, a| {
            acc.add(&exact[a * s + a].scale(&weights.u[a]))
        });
        let normalized_ok = norm == CRat::from_rat(Rat::one());
        let min_eig = if adj_ok {
            crate::cmat::min_eigenvalue(&associated_matrix_c64(&v.numeric, s))
        } else {
            f64::NAN
        };
        MembershipCertificate {
            eigenvector_ok: eig_ok,
            eigenvector_residual: 0.0,
            self_adjoint_ok: adj_ok,
            psd_ok,
            min_eigenvalue: min_eig,
            normalized_ok,
            normalization_value: norm.to_c64(),
            exact_checks: true,
        }
    } else {
        let ctf = ct.to_f64();
        let mut residual = 0.0f64;
        let q = rat_to_f64(&q_total);
        for row in 0..s * s {
            let mut acc = Complex64::ZERO;
            for col in 0..s * s {
                acc += ctf[row][col] * v.numeric[col];
            }
            residual = residual.max((acc - v.numeric[row] * q).norm());
        }
        let mut adj_dev = 0.0f64;
        for a in 0..s {
            for b in 0..s {
                adj_dev =
                    adj_dev.max((v.numeric[a * s + b].conj() - v.numeric[b * s + a]).norm());
            }
        }
        let min_eig = crate::cmat::min_eigenvalue(&associated_matrix_c64(&v.numeric, s));
        let norm: Complex64 = (0..s)
            .map(|a| v.numeric[a * s + a] * rat_to_f64(&weights.u[a]))
            .sum();
        MembershipCertificate {
            eigenvector_ok: residual < PSD_TOL,
            eigenvector_residual: residual,
            self_adjoint_ok: adj_dev < PSD_TOL,
            psd_ok: min_eig > -PSD_TOL,
            min_eigenvalue: min_eig,
            normalized_ok: (norm - Complex64::ONE).norm() < PSD_TOL,
            normalization_value: norm,
            exact_checks: false,
        }
    }
}

/// Extremality: v is extreme iff no nonzero tangent direction d of the
/// parametrization preserves the kernel of the associated matrix (a two-sided
/// feasible direction must satisfy d-ring k = 0 for every kernel vector k).
pub fn is_extreme(param: &HullParametrization, v: &HullVector) -> bool {
    let s = param.s;
    let m = param.free_dim();
    if m == 0 {
        return true;
    }
    let a = associated_matrix_c64(&v.numeric, s);
    let eig = hermitian_eigen(&a);
    let kernel: Vec<Vec<Complex64>> = (0..s)
        .filter(|&t| eig.values[t].abs() < 1e-7)
        .map(|t| (0..s).map(|i| eig.vectors[i][t]).collect())
        .collect();
    if kernel.is_empty() {
        // interior of the PSD cone: never extreme when directions exist
        return false;
    }
    // rows of the map t -> (sum t_i D_i) k for each kernel vector k
    let dirs = param.dirs_f64();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for k in &kernel {
        for i in 0..s {
            let mut row_re = Vec::with_capacity(m);
            let mut row_im = Vec::with_capacity(m);
            for d in &dirs {
                let entry: Complex64 = (0..s).map(|j| d[i][j] * k[j]).sum();
                row_re.push(entry.re);
                row_im.push(entry.im);
            }
            rows.push(row_re);
            rows.push(row_im);
        }
    }
    float_rank(&rows, 1e-7) == m
}

/// Orthonormal-ish basis of the right nullspace of the row system.
fn float_nullspace(rows: &[Vec<f64>], cols: usize, tol: f64) -> Vec<Vec<f64>> {
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for c in 0..cols {
        let pivot = (rank..m.len())
            .max_by(|&a, &b| m[a][c].abs().partial_cmp(&m[b][c].abs()).unwrap());
        let Some(p) = pivot else { break };
        if m[p][c].abs() < tol {
            continue;
        }
        m.swap(rank, p);
        let lead = m[rank][c];
        for cc in 0..cols {
            m[rank][cc] /= lead;
        }
        for r in 0..m.len() {
            if r != rank {
                let f = m[r][c];
                if f != 0.0 {
                    for cc in 0..cols {
                        m[r][cc] -= f * m[rank][cc];
                    }
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0.0; cols];
            v[fc] = 1.0;
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[ri][fc];
            }
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter().map(|x| x / n).collect()
        })
        .collect()
}

fn float_rank(rows: &[Vec<f64>], tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let pivot = (rank..m.len())
            .max_by(|&a, &b| m[a][c].abs().partial_cmp(&m[b][c].abs()).unwrap());
        let Some(p) = pivot else { break };
        if m[p][c].abs() < tol {
            continue;
        }
        m.swap(rank, p);
        let lead = m[rank][c];
        for r in 0..m.len() {
            if r != rank {
                let f = m[r][c] / lead;
                for cc in 0..cols {
                    m[r][cc] -= f * m[rank][cc];
                }
            }
        }
        rank += 1;
        if rank == cols {
            break;
        }
    }
    rank
}

/// Exact enumeration for hulls with one free real parameter.
pub fn extreme_points_exact_1d(
    param: &HullParametrization,
    sub: &Substitution,
    weights: &InvariantWeights,
) -> Result<HullResult> {
    if param.free_dim() == 0 {
        let mut point = HullVector::from_exact(param.origin.clone());
        point.extreme = true;
        let cert = verify_membership(&point, sub, weights);
        if !cert.is_member() {
            return Err(Error::internal("zero-parameter hull point fails membership"));
        }
        return Ok(HullResult {
            points: vec![point],
            method: HullMethod::Exact1d,
            complete: true,
            notes: vec!["hull has no free parameters".into()],
        });
    }
    if param.free_dim() != 1 || !param.is_real() {
        return Err(Error::Precondition(format!(
            "exact-1d needs one free real parameter, hull has {} (real: {})",
            param.free_dim(),
            param.is_real()
        )));
    }
    let s = param.s;
    // v-ring(w) is a symmetric rational matrix pencil in w
    let value_mat = |w: &Rat| -> ExactMatrix {
        let v = param.value_at(std::slice::from_ref(w));
        ExactMatrix::from_fn(s, s, |a, b| v[a * s + b].re.clone())
    };

    // e_k(w) polynomials by interpolation at s+1 points
    let sample: Vec<(Rat, Vec<Rat>)> = (0..=s as i64)
        .map(|x| {
            let w = rat_int(x);
            let e = value_mat(&w).principal_minor_sums();
            (w, e)
        })
        .collect();
    let minors: Vec<Poly> = (0..s)
        .map(|k| {
            let pts: Vec<(Rat, Rat)> =
                sample.iter().map(|(w, e)| (w.clone(), e[k].clone())).collect();
            interpolate(&pts)
        })
        .collect();
    let feasible = |w: &Rat| minors.iter().all(|f| !f.eval(w).is_negative());
    let one = rat_int(1);
    if !feasible(&one) {
        return Err(Error::internal("the all-ones vector is not in the hull"));
    }

    // distinct real roots of all nonzero minor polynomials
    let mut product = Poly::constant(Rat::one());
    for f in &minors {
        if !f.is_zero() && f.degree() > 0 {
            product = product.mul(&f.squarefree());
        }
    }
    if product.degree() == 0 {
        return Err(Error::internal("one-parameter hull with no boundary roots"));
    }
    let roots_poly = product.squarefree();
    let mut intervals = roots_poly.isolate_roots();
    if intervals.is_empty() {
        return Err(Error::internal("one-parameter hull with no real boundary roots"));
    }
    // shrink until pairwise disjoint with open gaps between intervals
    let chain = sturm_chain_of(&roots_poly);
    let mut eps = Rat::new(1.into(), 1024.into());
    loop {
        intervals = intervals
            .into_iter()
            .map(|(a, b)| roots_poly.refine_interval(&chain, a, b, &eps))
            .collect();
        let disjoint = intervals.windows(2).all(|w| w[0].1 < w[1].0);
        if disjoint {
            break;
        }
        eps /= rat_int(1024);
    }

    // gap test points: outside the extremes and between consecutive intervals
    let mut gap_points = Vec::new();
    gap_points.push(&intervals.first().unwrap().0 - rat_int(1));
    for w in intervals.windows(2) {
        gap_points.push((&w[0].1 + &w[1].0) / rat_int(2));
    }
    gap_points.push(&intervals.last().unwrap().1 + rat_int(1));

    let feas: Vec<bool> = gap_points.iter().map(&feasible).collect();
    // the feasible set is convex: a contiguous run of gaps (possibly empty)
    // bounded by roots; w = 1 sits inside it
    let runs: Vec<usize> = (0..feas.len()).filter(|&i| feas[i]).collect();
    let (lo_root, hi_root): (usize, usize) = if runs.is_empty() {
        // K degenerates to the single point w = 1, which must be a root and
        // therefore sits in exactly one isolating interval
        let idx = intervals
            .iter()
            .position(|(a, b)| a < &one && &one <= b)
            .ok_or_else(|| Error::internal("degenerate hull endpoint not among roots"))?;
        (idx, idx)
    } else {
        let first = runs[0];
        let last = *runs.last().unwrap();
        if !runs.iter().zip(first..).all(|(&r, e)| r == e) {
            return Err(Error::internal("feasible gaps are not contiguous"));
        }
        if first == 0 || last == feas.len() - 1 {
            return Err(Error::internal("one-parameter hull appears unbounded"));
        }
        (first - 1, last)
    };

    let mut notes = Vec::new();
    let mut points = Vec::new();
    let mut endpoints = vec![lo_root];
    if hi_root != lo_root {
        endpoints.push(hi_root);
    }
    for idx in endpoints {
        let (a, b) = &intervals[idx];
        let point = match roots_poly.rational_root_in(a, b) {
            Some(w) => {
                if !feasible(&w) {
                    return Err(Error::internal("rational endpoint fails feasibility"));
                }
                let mut p = HullVector::from_exact(param.value_at(std::slice::from_ref(&w)));
                p.parameter = Some(w);
                p
            }
            None => {
                // irrational endpoint: certified interval, numeric value
                let mid = (a + b) / rat_int(2);
                notes.push(format!(
                    "endpoint in ({a}, {b}] is not rational; reported numerically"
                ));
                let v = param.value_at_f64(&[rat_to_f64(&mid)]);
                HullVector::from_numeric(v)
            }
        };
        points.push(point);
    }
    for p in &mut points {
        let cert = verify_membership(p, sub, weights);
        if !cert.is_member() {
            return Err(Error::internal(format!(
                "enumerated endpoint fails membership: {:?}",
                cert.failing_condition()
            )));
        }
        p.extreme = true;
    }
    sort_points(&mut points);
    Ok(HullResult { points, method: HullMethod::Exact1d, complete: true, notes })
}

fn sturm_chain_of(p: &Poly) -> Vec<Poly> {
    let mut v = vec![p.clone(), p.derivative()];
    loop {
        let n = v.len();
        if v[n - 1].is_zero() {
            v.pop();
            break;
        }
        let r = v[n - 2].rem(&v[n - 1]).neg();
        if r.is_zero() {
            break;
        }
        v.push(r);
    }
    v
}

fn interpolate(points: &[(Rat, Rat)]) -> Poly {
    // Lagrange interpolation, exact
    let mut acc = Poly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut term = Poly::constant(yi.clone());
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let denom = xi - xj;
            term = term.mul(&Poly::new(vec![-xj / &denom, Rat::one() / &denom]));
        }
        acc = acc.add(&term);
    }
    acc
}

/// Vertex enumeration when all pencil matrices commute: the eigenvalue
/// constraints are linear functionals of the parameters and the hull is the
/// polyhedron they cut out.
pub fn extreme_points_commutative(
    param: &HullParametrization,
    sub: &Substitution,
    weights: &InvariantWeights,
    require_commutative_instructions: bool,
) -> Result<HullResult> {
    if require_commutative_instructions && !sub.is_commutative() {
        return Err(Error::Precondition(
            "commutative-exact needs pairwise commuting instructions".into(),
        ));
    }
    let s = param.s;
    let m = param.free_dim();
    if m == 0 {
        return extreme_points_exact_1d(param, sub, weights);
    }
    let origin_mat =
        associated_matrix_c64(&param.origin.iter().map(CRat::to_c64).collect::<Vec<_>>(), s);
    let dir_mats = param.dirs_f64();
    // all pencil members must commute for a common eigenbasis to exist
    let mut family = vec![origin_mat.clone()];
    family.extend(dir_mats.iter().cloned());
    for (i, a) in family.iter().enumerate() {
        for b in family.iter().skip(i + 1) {
            if !commute_c64(a, b, 1e-9) {
                return Err(Error::Precondition(
                    "hull pencil matrices do not commute; use another method".into(),
                ));
            }
        }
    }

    // common eigenbasis from a generic member of the pencil
    let mut basis = None;
    for seed in 0..24u64 {
        let coeffs: Vec<f64> = (0..m).map(|i| pseudo_rand(seed * 97 + i as u64)).collect();
        let mut h = origin_mat.clone();
        for (c, d) in coeffs.iter().zip(&dir_mats) {
            for i in 0..s {
                for j in 0..s {
                    h[i][j] += d[i][j] * *c;
                }
            }
        }
        let eig = hermitian_eigen(&h);
        let separated = eig.values.windows(2).all(|w| (w[1] - w[0]).abs() > 1e-8);
        if separated || seed == 23 {
            basis = Some(eig.vectors);
            break;
        }
    }
    let basis = basis.unwrap();

    // linear constraints l_t(w) = x_t* v-ring(w) x_t >= 0
    let quad = |mat: &Vec<Vec<Complex64>>, t: usize| -> Complex64 {
        let x: Vec<Complex64> = (0..s).map(|i| basis[i][t]).collect();
        let mut acc = Complex64::ZERO;
        for i in 0..s {
            for j in 0..s {
                acc += x[i].conj() * mat[i][j] * x[j];
            }
        }
        acc
    };
    let mut constraints: Vec<(f64, Vec<f64>)> = Vec::new();
    for t in 0..s {
        let c0 = quad(&origin_mat, t);
        let coeffs: Vec<Complex64> = dir_mats.iter().map(|d| quad(d, t)).collect();
        if c0.im.abs() > 1e-7 || coeffs.iter().any(|z| z.im.abs() > 1e-7) {
            return Err(Error::internal(
                "eigenvalue constraint has imaginary part; basis is not common",
            ));
        }
        let row = (c0.re, coeffs.iter().map(|z| z.re).collect::<Vec<f64>>());
        let dup = constraints.iter().any(|(b0, bc)| {
            (b0 - row.0).abs() < 1e-7 && bc.iter().zip(&row.1).all(|(x, y)| (x - y).abs() < 1e-7)
        });
        if !dup {
            constraints.push(row);
        }
    }
    if constraints.len() < m {
        return Err(Error::internal("fewer independent constraints than parameters"));
    }

    // vertices: active sets of size m
    let mut vertices: Vec<Vec<f64>> = Vec::new();
    let idx: Vec<usize> = (0..constraints.len()).collect();
    for subset in combinations(&idx, m) {
        let a: Vec<Vec<f64>> = subset.iter().map(|&i| constraints[i].1.clone()).collect();
        let b: Vec<f64> = subset.iter().map(|&i| -constraints[i].0).collect();
        let Some(w) = solve_f64(&a, &b) else { continue };
        let ok = constraints
            .iter()
            .all(|(c0, cs)| c0 + cs.iter().zip(&w).map(|(c, x)| c * x).sum::<f64>() > -PSD_TOL);
        if !ok {
            continue;
        }
        if !vertices.iter().any(|v| l2_dist(v, &w) < 1e-7) {
            vertices.push(w);
        }
    }

    let mut points = Vec::new();
    let mut notes = Vec::new();
    for w in vertices {
        let mut p = HullVector::from_numeric(param.value_at_f64(&w));
        let cert = verify_membership(&p, sub, weights);
        if !cert.is_member() {
            notes.push(format!(
                "vertex candidate rejected by verification ({:?})",
                cert.failing_condition()
            ));
            continue;
        }
        p.extreme = is_extreme(param, &p);
        if p.extreme {
            points.push(p);
        }
    }
    sort_points(&mut points);
    Ok(HullResult { points, method: HullMethod::CommutativeExact, complete: true, notes })
}

fn commute_c64(a: &[Vec<Complex64>], b: &[Vec<Complex64>], tol: f64) -> bool {
    let n = a.len();
    for i in 0..n {
        for j in 0..n {
            let mut ab = Complex64::ZERO;
            let mut ba = Complex64::ZERO;
            for k in 0..n {
                ab += a[i][k] * b[k][j];
                ba += b[i][k] * a[k][j];
            }
            if (ab - ba).norm() > tol {
                return false;
            }
        }
    }
    true
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn solve_f64(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| m[x][c].abs().partial_cmp(&m[y][c].abs()).unwrap())?;
        if m[p][c].abs() < 1e-9 {
            return None;
        }
        m.swap(c, p);
        let lead = m[c][c];
        for cc in c..=n {
            m[c][cc] /= lead;
        }
        for r in 0..n {
            if r != c {
                let f = m[r][c];
                for cc in c..=n {
                    m[r][cc] -= f * m[c][cc];
                }
            }
        }
    }
    Some(m.iter().map(|row| row[n]).collect())
}

fn l2_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn pseudo_rand(seed: u64) -> f64 {
    // splitmix64, folded into (0, 1); deterministic across runs
    let mut z = seed.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64
}

/// Vertex search over the spectrahedron by maximizing random objectives with
/// facial descent.  Deterministic (seeded), verified output, never certified
/// complete.
pub fn extreme_points_numeric(
    param: &HullParametrization,
    sub: &Substitution,
    weights: &InvariantWeights,
) -> Result<HullResult> {
    let m = param.free_dim();
    if m == 0 {
        let mut r = extreme_points_exact_1d(param, sub, weights)?;
        r.method = HullMethod::Numeric;
        r.complete = false;
        return Ok(r);
    }
    let s = param.s;
    let dir_mats = param.dirs_f64();
    let origin_mat =
        associated_matrix_c64(&param.origin.iter().map(CRat::to_c64).collect::<Vec<_>>(), s);
    let mat_at = |w: &[f64]| -> Vec<Vec<Complex64>> {
        let mut h = origin_mat.clone();
        for (c, d) in w.iter().zip(&dir_mats) {
            for i in 0..s {
                for j in 0..s {
                    h[i][j] += d[i][j] * *c;
                }
            }
        }
        h
    };
    let min_eig_at = |w: &[f64]| crate::cmat::min_eigenvalue(&mat_at(w));

    // The all-ones point is always in the hull but usually sits at a pointed
    // vertex, so seeding only there starves the search.  Bootstrap additional
    // feasible points by pushing random rank-one positive vectors through the
    // exact left Q-eigenprojection of the coincidence matrix and normalizing;
    // every candidate is verified before use.
    let ones: Vec<f64> = param.all_ones_params().iter().map(rat_to_f64).collect();
    if min_eig_at(&ones) < -1e-9 {
        return Err(Error::internal("all-ones parameter point infeasible"));
    }
    let mut starts: Vec<Vec<f64>> = vec![ones.clone()];
    if let Ok(p_left) = crate::structure::q_eigen_projection(
        &sub.coincidence_matrix().transpose(),
        &Rat::from_integer(sub.expansion().total().clone()),
    ) {
        let p_left_f = p_left.to_f64();
        let u_f: Vec<f64> = weights.u.iter().map(rat_to_f64).collect();
        for seed in 0..(6 * m as u64) {
            // rank-one Hermitian positive vector g g^*
            let g: Vec<Complex64> = (0..s)
                .map(|i| {
                    Complex64::new(
                        pseudo_rand(seed * 613 + 2 * i as u64) - 0.5,
                        pseudo_rand(seed * 613 + 2 * i as u64 + 1) - 0.5,
                    )
                })
                .collect();
            let z: Vec<Complex64> = (0..s * s)
                .map(|idx| g[idx / s] * g[idx % s].conj())
                .collect();
            let mut proj = vec![Complex64::ZERO; s * s];
            for (row, pr) in proj.iter_mut().enumerate() {
                for (col, zc) in z.iter().enumerate() {
                    *pr += p_left_f[row][col] * zc;
                }
            }
            let mass: Complex64 =
                (0..s).map(|a| proj[a * s + a] * u_f[a]).sum();
            if mass.norm() < 1e-9 {
                continue;
            }
            let v: Vec<Complex64> = proj.iter().map(|x| x / mass).collect();
            if let Some(t) = params_for(param, &v) {
                if min_eig_at(&t) > -1e-9 {
                    starts.push(t);
                }
            }
        }
    }
    // centroid of everything feasible makes a deeper seed
    if starts.len() > 1 {
        let centroid: Vec<f64> = (0..m)
            .map(|i| starts.iter().map(|t| t[i]).sum::<f64>() / starts.len() as f64)
            .collect();
        if min_eig_at(&centroid) > -1e-9 {
            starts.push(centroid);
        }
    }

    // Facial descent: every face of the spectrahedron is the set of feasible
    // points whose associated matrix kills the face's kernel, so restricting
    // moves to directions d with d-ring k = 0 for all current kernel vectors k
    // keeps the face *exactly* (not just to first order).  Each line-search
    // endpoint enlarges the kernel, so a vertex is reached in at most s steps.
    let kernel_of = |x: &[f64]| -> Vec<Vec<Complex64>> {
        let eig = hermitian_eigen(&mat_at(x));
        (0..s)
            .filter(|&t| eig.values[t] < 1e-8)
            .map(|t| (0..s).map(|i| eig.vectors[i][t]).collect())
            .collect()
    };
    // basis of {t : (sum t_i D_i) k = 0 for all kernel vectors k}
    let face_tangent = |kernel: &[Vec<Complex64>]| -> Vec<Vec<f64>> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for k in kernel {
            for i in 0..s {
                let mut row_re = Vec::with_capacity(m);
                let mut row_im = Vec::with_capacity(m);
                for d in &dir_mats {
                    let entry: Complex64 = (0..s).map(|j| d[i][j] * k[j]).sum();
                    row_re.push(entry.re);
                    row_im.push(entry.im);
                }
                rows.push(row_re);
                rows.push(row_im);
            }
        }
        float_nullspace(&rows, m, 1e-7)
    };
    let line_max = |x: &[f64], d: &[f64]| -> f64 {
        let mut hi = 1.0f64;
        while min_eig_at(&add_scaled(x, d, hi)) > -1e-9 && hi < 1e6 {
            hi *= 2.0;
        }
        if hi >= 1e6 {
            return f64::INFINITY;
        }
        let mut lo = 0.0f64;
        for _ in 0..70 {
            let mid = 0.5 * (lo + hi);
            if min_eig_at(&add_scaled(x, d, mid)) > -1e-9 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };

    let objectives = 6 * m.max(2);
    let mut found: Vec<Vec<f64>> = Vec::new();
    'runs: for run in 0..(objectives * starts.len()) as u64 {
        let start = &starts[(run as usize) % starts.len()];
        let mut c: Vec<f64> =
            (0..m).map(|i| pseudo_rand(run * 131 + i as u64) * 2.0 - 1.0).collect();
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-12 {
            continue;
        }
        for x in &mut c {
            *x /= norm;
        }
        let mut x = start.clone();
        for _round in 0..=s {
            let kernel = kernel_of(&x);
            let tangent = if kernel.is_empty() {
                // interior: all directions available
                (0..m)
                    .map(|i| {
                        let mut e = vec![0.0; m];
                        e[i] = 1.0;
                        e
                    })
                    .collect::<Vec<_>>()
            } else {
                face_tangent(&kernel)
            };
            if tangent.is_empty() {
                break; // vertex
            }
            // move along the objective projected into the face, falling back
            // to the tangent basis directions when the projection vanishes
            let mut dir = vec![0.0; m];
            for t in &tangent {
                let dot: f64 = c.iter().zip(t).map(|(a, b)| a * b).sum();
                for (di, ti) in dir.iter_mut().zip(t) {
                    *di += dot * ti;
                }
            }
            let mut dn = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
            if dn < 1e-9 {
                dir = tangent[0].clone();
                dn = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
            }
            for di in &mut dir {
                *di /= dn;
            }
            let forward = line_max(&x, &dir);
            if forward.is_infinite() {
                return Err(Error::internal("numeric hull search unbounded"));
            }
            if forward > 1e-10 {
                x = add_scaled(&x, &dir, forward);
                continue;
            }
            let neg: Vec<f64> = dir.iter().map(|v| -v).collect();
            let backward = line_max(&x, &neg);
            if backward.is_infinite() {
                return Err(Error::internal("numeric hull search unbounded"));
            }
            if backward > 1e-10 {
                x = add_scaled(&x, &neg, backward);
                continue;
            }
            // wedged: both directions blocked within the face; give up this run
            continue 'runs;
        }
        if !found.iter().any(|f| l2_dist(f, &x) < 1e-6) {
            found.push(x);
        }
    }

    let mut points: Vec<HullVector> = Vec::new();
    let mut notes = vec!["method: numeric, completeness not certified".into()];
    let mut rejected_membership = 0usize;
    let mut rejected_extremality = 0usize;
    for w in found {
        let mut p = HullVector::from_numeric(param.value_at_f64(&w));
        let cert = verify_membership(&p, sub, weights);
        if !cert.is_member() {
            rejected_membership += 1;
            continue;
        }
        p.extreme = is_extreme(param, &p);
        if !p.extreme {
            rejected_extremality += 1;
            continue;
        }
        if !points.iter().any(|q| point_dist(q, &p) < 1e-6) {
            points.push(p);
        }
    }
    if rejected_membership > 0 {
        notes.push(format!(
            "{rejected_membership} search endpoint(s) failed verification and were dropped"
        ));
    }
    if rejected_extremality > 0 {
        notes.push(format!(
            "{rejected_extremality} face point(s) reached were not vertices"
        ));
    }
    sort_points(&mut points);
    Ok(HullResult { points, method: HullMethod::Numeric, complete: false, notes })
}

fn add_scaled(x: &[f64], d: &[f64], t: f64) -> Vec<f64> {
    x.iter().zip(d).map(|(a, b)| a + t * b).collect()
}

/// Recover parameter coordinates of an eigenspace vector by least squares on
/// the stacked real and imaginary parts; None if the vector is off the space.
fn params_for(param: &HullParametrization, v: &[Complex64]) -> Option<Vec<f64>> {
    let m = param.free_dim();
    let n = v.len();
    let mut a = vec![vec![0.0f64; m]; 2 * n];
    let mut b = vec![0.0f64; 2 * n];
    for i in 0..n {
        let rhs = v[i] - param.origin[i].to_c64();
        b[2 * i] = rhs.re;
        b[2 * i + 1] = rhs.im;
        for (j, d) in param.dirs.iter().enumerate() {
            let dij = d[i].to_c64();
            a[2 * i][j] = dij.re;
            a[2 * i + 1][j] = dij.im;
        }
    }
    let mut ata = vec![vec![0.0f64; m]; m];
    let mut atb = vec![0.0f64; m];
    for r in 0..2 * n {
        for i in 0..m {
            atb[i] += a[r][i] * b[r];
            for j in 0..m {
                ata[i][j] += a[r][i] * a[r][j];
            }
        }
    }
    let t = solve_f64(&ata, &atb)?;
    let mut res = 0.0f64;
    for r in 0..2 * n {
        let pred: f64 = (0..m).map(|j| a[r][j] * t[j]).sum();
        res = res.max((pred - b[r]).abs());
    }
    if res < 1e-7 {
        Some(t)
    } else {
        None
    }
}

fn point_dist(a: &HullVector, b: &HullVector) -> f64 {
    a.numeric
        .iter()
        .zip(&b.numeric)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn sort_points(points: &mut [HullVector]) {
    // deterministic order: all-ones (largest first entries) before the rest
    points.sort_by(|a, b| {
        for (x, y) in a.numeric.iter().zip(&b.numeric) {
            let snap = |v: f64, w: f64| (v - w).abs() < 1e-9;
            if !snap(x.re, y.re) {
                return y.re.partial_cmp(&x.re).unwrap();
            }
            if !snap(x.im, y.im) {
                return y.im.partial_cmp(&x.im).unwrap();
            }
        }
        std::cmp::Ordering::Equal
    });
}

/// Membership and extremality verdicts for supplied candidate vectors.
pub fn verify_candidates(
    param: &HullParametrization,
    sub: &Substitution,
    weights: &InvariantWeights,
    candidates: &[HullVector],
) -> HullResult {
    let mut points = Vec::new();
    let mut notes = Vec::new();
    for (i, cand) in candidates.iter().enumerate() {
        let cert = verify_membership(cand, sub, weights);
        if cert.is_member() {
            let mut p = cand.clone();
            p.extreme = is_extreme(param, &p);
            if !p.extreme {
                notes.push(format!("candidate {i}: member but not extreme"));
            }
            points.push(p);
        } else {
            notes.push(format!(
                "candidate {i}: not a member (fails {})",
                cert.failing_condition().unwrap_or("unknown condition")
            ));
        }
    }
    HullResult { points, method: HullMethod::VerifyCandidates, complete: false, notes }
}
