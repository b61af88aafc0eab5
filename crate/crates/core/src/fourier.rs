//! Exact Fourier coefficients of the correlation measures.
//!
//! The coefficient recursion expresses Sigma-hat(k) through the generalized
//! instructions:
//!
//! ```text
//!   Sigma(k) = Q^-p  sum_{j in [0,q^p)}  R_j^(p) (x) R_{j+k}^(p)  Sigma(quot_p(j + k))
//! ```
//!
//! For corner points c in {-1,0,1}^d every quotient is again a corner, so the
//! corners can be solved exactly in order of support size, inverting the
//! self-referential part.  For arbitrary k, choosing p >= power(k) makes every
//! quotient land on a corner and the recursion terminates in one step.
//!
//! Everything in this module is exact rational; there is no floating
//! arithmetic on any path.

use crate::error::{Error, Result};
use crate::matrix::{vec_sum, vec_zero, ExactMatrix, ExactVector, Rat};
use crate::structure::InvariantWeights;
use crate::substitution::{Instruction, Substitution};
use crate::zd::{divmod_qn, power_of, LatticePoint};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

pub const DEFAULT_P_MAX: u32 = 6;
/// Cap on Q^p summation terms for a single coefficient evaluation.
pub const DEFAULT_TERM_BUDGET: u64 = 1 << 22;

/// Sigma-hat(0): the invariant weight u_alpha at each diagonal pair position.
pub fn sigma_zero(weights: &InvariantWeights) -> ExactVector {
    let s = weights.u.len();
    let mut v = vec_zero(s * s);
    for (alpha, w) in weights.u.iter().enumerate() {
        v[alpha * s + alpha] = w.clone();
    }
    v
}

/// A corner of the unit cube: one entry in {-1, 0, 1} per coordinate.
pub type Corner = Vec<i8>;

fn corner_of_quotient(quot: &LatticePoint) -> Option<Corner> {
    quot.coords()
        .iter()
        .map(|c| {
            if c.is_zero() {
                Some(0)
            } else if c == &BigInt::one() {
                Some(1)
            } else if c == &BigInt::from(-1) {
                Some(-1)
            } else {
                None
            }
        })
        .collect()
}

fn corner_to_point(c: &Corner) -> LatticePoint {
    LatticePoint::new(c.iter().map(|&x| BigInt::from(x)).collect())
}

fn all_corners(dim: usize) -> Vec<Corner> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|c| {
                [-1i8, 0, 1].iter().map(move |&x| {
                    let mut c2 = c.clone();
                    c2.push(x);
                    c2
                })
            })
            .collect();
    }
    out.sort_by_key(|c| (c.iter().filter(|&&x| x != 0).count(), c.clone()));
    out
}

/// Exact table of correlation coefficients for one substitution.
///
/// The base holds the solved corner values; arbitrary points are evaluated on
/// demand and cached.  Values are validated on insert: all components
/// nonnegative, total mass 1, and both marginals equal to the invariant
/// weights.
pub struct CorrelationTable {
    sub: Substitution,
    weights: InvariantWeights,
    instructions: Vec<Instruction>,
    base: BTreeMap<Corner, ExactVector>,
    /// p used to solve each corner (0 for the origin).
    provenance: BTreeMap<Corner, u32>,
    cache: RwLock<HashMap<Vec<BigInt>, Arc<ExactVector>>>,
    term_budget: u64,
}

impl CorrelationTable {
    /// Solve the corner system.  `p_max` bounds the level searched for an
    /// invertible self-part; existence for some p is guaranteed because the
    /// carry frequency (and with it the spectral radius of the self-part)
    /// decays to zero.
    pub fn build(sub: &Substitution, weights: &InvariantWeights, p_max: u32) -> Result<Self> {
        let mut table = CorrelationTable {
            sub: sub.clone(),
            weights: weights.clone(),
            instructions: sub.instructions(),
            base: BTreeMap::new(),
            provenance: BTreeMap::new(),
            cache: RwLock::new(HashMap::new()),
            term_budget: DEFAULT_TERM_BUDGET,
        };
        let origin = vec![0i8; sub.dim()];
        let sigma0 = sigma_zero(weights);
        table.validate(&sigma0, "corner 0")?;
        table.base.insert(origin.clone(), sigma0);
        table.provenance.insert(origin, 0);
        for corner in all_corners(sub.dim()) {
            if corner.iter().all(|&x| x == 0) {
                continue;
            }
            table.solve_corner(&corner, p_max)?;
        }
        table.check_swap_symmetry()?;
        Ok(table)
    }

    pub fn substitution(&self) -> &Substitution {
        &self.sub
    }

    pub fn weights(&self) -> &InvariantWeights {
        &self.weights
    }

    pub fn base_corner(&self, corner: &Corner) -> Option<&ExactVector> {
        self.base.get(corner)
    }

    pub fn corner_level(&self, corner: &Corner) -> Option<u32> {
        self.provenance.get(corner).copied()
    }

    fn gen_instruction(&self, j: &LatticePoint, p: u32) -> Instruction {
        let q = self.sub.expansion();
        let mut acc = Instruction::identity(self.sub.size());
        for digit in crate::zd::digits(j, q, p) {
            let idx = crate::zd::linear_index(&digit, &q.pow(1)).expect("digit in range");
            acc = Instruction::then_after(&acc, &self.instructions[idx]);
        }
        acc
    }

    /// Scatter (F (x) G) v into `target` for instruction functions F, G.
    fn scatter_pair(&self, f: &Instruction, g: &Instruction, v: &[Rat], target: &mut [Rat]) {
        let s = self.sub.size();
        for gamma in 0..s {
            let fg = f.apply(gamma) * s;
            for delta in 0..s {
                let val = &v[gamma * s + delta];
                if val.is_zero() {
                    continue;
                }
                let idx = fg + g.apply(delta);
                target[idx] += val;
            }
        }
    }

    fn solve_corner(&mut self, corner: &Corner, p_max: u32) -> Result<()> {
        let s = self.sub.size();
        let s2 = s * s;
        let q = self.sub.expansion().clone();
        let c_point = corner_to_point(corner);
        for p in 1..=p_max {
            let mut self_part = ExactMatrix::zeros(s2, s2);
            let mut rhs = vec_zero(s2);
            for j in q.rect_iter(p) {
                let shifted = j.add(&c_point);
                let (rem, quot) = divmod_qn(&shifted, &q, p);
                let quot_corner = corner_of_quotient(&quot)
                    .ok_or_else(|| Error::internal("corner quotient left the unit cube"))?;
                let f = self.gen_instruction(&j, p);
                let g = self.gen_instruction(&rem, p);
                if &quot_corner == corner {
                    for gamma in 0..s {
                        let fg = f.apply(gamma) * s;
                        for delta in 0..s {
                            let row = fg + g.apply(delta);
                            let col = gamma * s + delta;
                            let v = &self_part[(row, col)] + Rat::one();
                            self_part[(row, col)] = v;
                        }
                    }
                } else {
                    let known = self.base.get(&quot_corner).ok_or_else(|| {
                        Error::internal(format!(
                            "corner {quot_corner:?} needed before {corner:?} was solved"
                        ))
                    })?;
                    let known = known.clone();
                    self.scatter_pair(&f, &g, &known, &mut rhs);
                }
            }
            let qp = Rat::from_integer(q.total_pow(p));
            let system = &ExactMatrix::identity(s2).scale(&qp) - &self_part;
            if let Some(solution) = system.solve_vec(&rhs) {
                self.validate(&solution, &format!("corner {corner:?}"))?;
                self.base.insert(corner.clone(), solution);
                self.provenance.insert(corner.clone(), p);
                return Ok(());
            }
        }
        Err(Error::PMaxExceeded { p_max })
    }

    fn validate(&self, v: &[Rat], what: &str) -> Result<()> {
        let s = self.sub.size();
        if v.iter().any(|x| x.is_negative()) {
            return Err(Error::internal(format!("{what}: negative correlation component")));
        }
        if vec_sum(v) != Rat::one() {
            return Err(Error::internal(format!("{what}: total mass differs from 1")));
        }
        for alpha in 0..s {
            let row: Rat = (0..s).map(|beta| v[alpha * s + beta].clone()).sum();
            let col: Rat = (0..s).map(|beta| v[beta * s + alpha].clone()).sum();
            if row != self.weights.u[alpha] || col != self.weights.u[alpha] {
                return Err(Error::internal(format!("{what}: marginals differ from u")));
            }
        }
        Ok(())
    }

    /// Swap symmetry sigma_{alpha beta}(-c) = sigma_{beta alpha}(c), as a
    /// cross-check on the independently solved negative corners.
    fn check_swap_symmetry(&self) -> Result<()> {
        let s = self.sub.size();
        for (corner, v) in &self.base {
            let neg: Corner = corner.iter().map(|x| -x).collect();
            let w = self
                .base
                .get(&neg)
                .ok_or_else(|| Error::internal("negative corner missing"))?;
            for a in 0..s {
                for b in 0..s {
                    if v[a * s + b] != w[b * s + a] {
                        return Err(Error::internal(format!(
                            "swap symmetry fails between corners {corner:?} and {neg:?}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Sigma-hat(k), exact.  Uses p = max(power(k), 1) so every quotient in the
    /// recursion is an already-solved corner.
    pub fn coefficient(&self, k: &LatticePoint) -> Result<Arc<ExactVector>> {
        if let Some(hit) = self.cache.read().unwrap().get(k.coords()) {
            return Ok(hit.clone());
        }
        let value = Arc::new(self.coefficient_uncached(k)?);
        Ok(self
            .cache
            .write()
            .unwrap()
            .entry(k.coords().to_vec())
            .or_insert_with(|| value.clone())
            .clone())
    }

    fn coefficient_uncached(&self, k: &LatticePoint) -> Result<ExactVector> {
        let q = self.sub.expansion();
        if let Some(corner) = corner_of_quotient(k) {
            return Ok(self.base[&corner].clone());
        }
        let p = power_of(k, q).max(1);
        let terms = q.total_pow(p);
        if terms > BigInt::from(self.term_budget) {
            return Err(Error::BudgetExceeded {
                what: format!("coefficient at {k} sums {terms} terms"),
                budget: self.term_budget,
            });
        }
        let s2 = self.sub.size() * self.sub.size();
        let mut acc = vec_zero(s2);
        for j in q.rect_iter(p) {
            let shifted = j.add(k);
            let (rem, quot) = divmod_qn(&shifted, q, p);
            let corner = corner_of_quotient(&quot).ok_or_else(|| {
                Error::internal(format!("quotient {quot} at p = {p} is not a corner"))
            })?;
            let f = self.gen_instruction(&j, p);
            let g = self.gen_instruction(&rem, p);
            self.scatter_pair(&f, &g, &self.base[&corner], &mut acc);
        }
        let qp = Rat::from_integer(q.total_pow(p));
        let out: ExactVector = acc.into_iter().map(|x| x / &qp).collect();
        self.validate(&out, &format!("coefficient {k}"))?;
        Ok(out)
    }

    /// All k with power_of(k) <= w, in lexicographic coordinate order.
    pub fn window_points(&self, w: u32) -> Vec<LatticePoint> {
        window_points(self.sub.expansion(), w)
    }
}

/// All k in (-q^w, q^w) componentwise, lexicographically ordered.
pub fn window_points(q: &crate::zd::Expansion, w: u32) -> Vec<LatticePoint> {
    let hi = q.pow(w);
    let mut points = vec![Vec::new()];
    for i in 0..q.dim() {
        let bound = hi.coord(i);
        let mut lo: BigInt = -(bound.clone()) + 1;
        let mut range = Vec::new();
        while &lo < bound {
            range.push(lo.clone());
            lo += 1;
        }
        points = points
            .into_iter()
            .flat_map(|p| {
                range.iter().map(move |x| {
                    let mut p2 = p.clone();
                    p2.push(x.clone());
                    p2
                })
            })
            .collect();
    }
    points.into_iter().map(LatticePoint::new).collect()
}

/// Exact bicorrelation coefficients: the matrix family C_k grounded at the
/// coincidence-matrix spectral projection, satisfying the same recursion as
/// the correlation vector and the identity C_k Sigma(0) = Sigma(k).
pub struct BicorrelationTable {
    sub: Substitution,
    instructions: Vec<Instruction>,
    base: BTreeMap<Corner, ExactMatrix>,
    term_budget: u64,
}

impl BicorrelationTable {
    /// `projection` must be the exact Q-eigenprojection of the coincidence matrix.
    pub fn build(sub: &Substitution, projection: ExactMatrix, p_max: u32) -> Result<Self> {
        let s2 = sub.size() * sub.size();
        if projection.rows() != s2 || projection.cols() != s2 {
            return Err(Error::invalid("projection has wrong dimensions"));
        }
        let mut table = BicorrelationTable {
            sub: sub.clone(),
            instructions: sub.instructions(),
            base: BTreeMap::new(),
            term_budget: DEFAULT_TERM_BUDGET,
        };
        let origin = vec![0i8; sub.dim()];
        table.base.insert(origin, projection);
        for corner in all_corners(sub.dim()) {
            if corner.iter().all(|&x| x == 0) {
                continue;
            }
            table.solve_corner(&corner, p_max)?;
        }
        Ok(table)
    }

    fn gen_instruction(&self, j: &LatticePoint, p: u32) -> Instruction {
        let q = self.sub.expansion();
        let mut acc = Instruction::identity(self.sub.size());
        for digit in crate::zd::digits(j, q, p) {
            let idx = crate::zd::linear_index(&digit, &q.pow(1)).expect("digit in range");
            acc = Instruction::then_after(&acc, &self.instructions[idx]);
        }
        acc
    }

    /// target += (F (x) G) M, rows scattered through the pair function.
    fn scatter_rows(
        &self,
        f: &Instruction,
        g: &Instruction,
        m: &ExactMatrix,
        target: &mut ExactMatrix,
    ) {
        let s = self.sub.size();
        let s2 = s * s;
        for gamma in 0..s {
            let fg = f.apply(gamma) * s;
            for delta in 0..s {
                let src_row = gamma * s + delta;
                let dst_row = fg + g.apply(delta);
                for col in 0..s2 {
                    let v = &m[(src_row, col)];
                    if v.is_zero() {
                        continue;
                    }
                    let t = &target[(dst_row, col)] + v;
                    target[(dst_row, col)] = t;
                }
            }
        }
    }

    fn solve_corner(&mut self, corner: &Corner, p_max: u32) -> Result<()> {
        let s = self.sub.size();
        let s2 = s * s;
        let q = self.sub.expansion().clone();
        let c_point = corner_to_point(corner);
        for p in 1..=p_max {
            let mut self_part = ExactMatrix::zeros(s2, s2);
            let mut rhs = ExactMatrix::zeros(s2, s2);
            for j in q.rect_iter(p) {
                let shifted = j.add(&c_point);
                let (rem, quot) = divmod_qn(&shifted, &q, p);
                let quot_corner = corner_of_quotient(&quot)
                    .ok_or_else(|| Error::internal("corner quotient left the unit cube"))?;
                let f = self.gen_instruction(&j, p);
                let g = self.gen_instruction(&rem, p);
                if &quot_corner == corner {
                    for gamma in 0..s {
                        let fg = f.apply(gamma) * s;
                        for delta in 0..s {
                            let row = fg + g.apply(delta);
                            let col = gamma * s + delta;
                            let v = &self_part[(row, col)] + Rat::one();
                            self_part[(row, col)] = v;
                        }
                    }
                } else {
                    let known = self.base[&quot_corner].clone();
                    self.scatter_rows(&f, &g, &known, &mut rhs);
                }
            }
            let qp = Rat::from_integer(q.total_pow(p));
            let system = &ExactMatrix::identity(s2).scale(&qp) - &self_part;
            if let Some(solution) = system.solve(&rhs) {
                self.base.insert(corner.clone(), solution);
                return Ok(());
            }
        }
        Err(Error::PMaxExceeded { p_max })
    }

    /// C_k, exact.
    pub fn coefficient(&self, k: &LatticePoint) -> Result<ExactMatrix> {
        let q = self.sub.expansion();
        if let Some(corner) = corner_of_quotient(k) {
            return Ok(self.base[&corner].clone());
        }
        let p = power_of(k, q).max(1);
        let terms = q.total_pow(p);
        if terms > BigInt::from(self.term_budget) {
            return Err(Error::BudgetExceeded {
                what: format!("bicorrelation at {k} sums {terms} terms"),
                budget: self.term_budget,
            });
        }
        let s2 = self.sub.size() * self.sub.size();
        let mut acc = ExactMatrix::zeros(s2, s2);
        for j in q.rect_iter(p) {
            let shifted = j.add(k);
            let (rem, quot) = divmod_qn(&shifted, q, p);
            let corner = corner_of_quotient(&quot).ok_or_else(|| {
                Error::internal(format!("quotient {quot} at p = {p} is not a corner"))
            })?;
            let f = self.gen_instruction(&j, p);
            let g = self.gen_instruction(&rem, p);
            self.scatter_rows(&f, &g, &self.base[&corner], &mut acc);
        }
        let qp = Rat::from_integer(q.total_pow(p));
        Ok(acc.scale(&qp.recip()))
    }
}
