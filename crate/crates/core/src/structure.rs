//! Structure analysis: ergodic decomposition in primitive reduced form,
//! index of imprimitivity, invariant weights, spectral projections, and the
//! aperiodicity and bijective/commutative predicates.

use crate::error::{Error, Result};
use crate::matrix::{rat_int, ExactMatrix, ExactVector, Rat};
use crate::substitution::{AperiodicityPolicy, Substitution};
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Partition of the alphabet into ergodic classes and a transient part.
///
/// Classes are the cyclic classes of the recurrent components of the
/// letter-orbit digraph (edge gamma -> alpha iff alpha appears in S(gamma));
/// after telescoping by `index_h` the substitution restricted to each class is
/// primitive, and no transient letter substitutes into transient letters only.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ErgodicDecomposition {
    pub classes: Vec<Vec<usize>>,
    pub transient: Vec<usize>,
    pub index_h: u32,
}

impl ErgodicDecomposition {
    pub fn class_of(&self, letter: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(&letter))
    }

    pub fn is_primitive_form(&self) -> bool {
        self.classes.len() == 1 && self.transient.is_empty() && self.index_h == 1
    }
}

fn letter_digraph(sub: &Substitution) -> Vec<Vec<usize>> {
    let s = sub.size();
    let mut adj = vec![Vec::new(); s];
    for gamma in 0..s {
        let mut targets: Vec<usize> = sub.rule(gamma).cells().to_vec();
        targets.sort_unstable();
        targets.dedup();
        adj[gamma] = targets;
    }
    adj
}

/// Iterative Tarjan SCC; returns components in reverse topological order.
fn strongly_connected_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0usize;
    let mut comps = Vec::new();

    // explicit DFS stack: (node, edge cursor)
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call_stack = vec![(root, 0usize)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut cursor)) = call_stack.last_mut() {
            if *cursor < adj[v].len() {
                let w = adj[v][*cursor];
                *cursor += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call_stack.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call_stack.pop();
                if let Some(&mut (parent, _)) = call_stack.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// gcd of cycle lengths inside a strongly connected component.
fn component_period(adj: &[Vec<usize>], comp: &[usize]) -> u32 {
    let in_comp = |x: usize| comp.contains(&x);
    let start = comp[0];
    let mut depth = vec![None::<i64>; adj.len()];
    depth[start] = Some(0);
    let mut queue = std::collections::VecDeque::from([start]);
    let mut g: i64 = 0;
    while let Some(v) = queue.pop_front() {
        let dv = depth[v].unwrap();
        for &w in &adj[v] {
            if !in_comp(w) {
                continue;
            }
            match depth[w] {
                None => {
                    depth[w] = Some(dv + 1);
                    queue.push_back(w);
                }
                Some(dw) => {
                    g = g.gcd(&(dv + 1 - dw));
                }
            }
        }
    }
    g.unsigned_abs().max(1) as u32
}

/// Ergodic decomposition of a substitution: recurrent cyclic classes, the
/// transient part, and the index of imprimitivity (lcm of class periods).
pub fn ergodic_decomposition(sub: &Substitution) -> ErgodicDecomposition {
    let adj = letter_digraph(sub);
    let comps = strongly_connected_components(&adj);
    let mut comp_of = vec![0usize; adj.len()];
    for (ci, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = ci;
        }
    }
    let recurrent: Vec<bool> = comps
        .iter()
        .enumerate()
        .map(|(ci, comp)| comp.iter().all(|&v| adj[v].iter().all(|&w| comp_of[w] == ci)))
        .collect();

    let mut classes = Vec::new();
    let mut transient = Vec::new();
    let mut index_h: u32 = 1;
    for (ci, comp) in comps.iter().enumerate() {
        if !recurrent[ci] {
            transient.extend(comp.iter().copied());
            continue;
        }
        let p = component_period(&adj, comp);
        index_h = index_h.lcm(&p);
        // cyclic classes: letters at the same BFS depth mod p
        let start = comp[0];
        let mut depth = vec![None::<u32>; adj.len()];
        depth[start] = Some(0);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let dv = depth[v].unwrap();
            for &w in &adj[v] {
                if comp_of[w] == ci && depth[w].is_none() {
                    depth[w] = Some((dv + 1) % p);
                    queue.push_back(w);
                }
            }
        }
        let mut cyclic: Vec<Vec<usize>> = vec![Vec::new(); p as usize];
        for &v in comp {
            cyclic[depth[v].unwrap() as usize].push(v);
        }
        for mut class in cyclic {
            class.sort_unstable();
            if !class.is_empty() {
                classes.push(class);
            }
        }
    }
    classes.sort_by_key(|c| c[0]);
    transient.sort_unstable();
    ErgodicDecomposition { classes, transient, index_h }
}

/// Convex weights over the ergodic classes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ClassCoefficients {
    Uniform,
    Given(Vec<Rat>),
}

/// A strictly positive combination of the class Perron vectors: the initial
/// cylinder measures of the invariant measure it fixes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvariantWeights {
    pub u: ExactVector,
    pub class_coefficients: Vec<Rat>,
}

/// Perron probability weights for an index-1 substitution.
///
/// Each ergodic class contributes the exact Perron vector of the substitution
/// matrix restricted to the class (the rational nullspace of M_E - Q I),
/// extended by zeros on the rest of the alphabet.
pub fn invariant_weights(
    sub: &Substitution,
    decomp: &ErgodicDecomposition,
    coefficients: &ClassCoefficients,
) -> Result<InvariantWeights> {
    if decomp.index_h != 1 {
        return Err(Error::Precondition(
            "invariant weights require an index-1 (telescoped) substitution".into(),
        ));
    }
    let coeffs: Vec<Rat> = match coefficients {
        ClassCoefficients::Uniform => {
            let k = decomp.classes.len() as i64;
            vec![rat_int(1) / rat_int(k); decomp.classes.len()]
        }
        ClassCoefficients::Given(c) => {
            if c.len() != decomp.classes.len() {
                return Err(Error::invalid(format!(
                    "{} class coefficients for {} classes",
                    c.len(),
                    decomp.classes.len()
                )));
            }
            if c.iter().any(|x| !x.is_positive()) {
                return Err(Error::invalid("class coefficients must be strictly positive"));
            }
            let total: Rat = c.iter().cloned().sum();
            if total != rat_int(1) {
                return Err(Error::invalid("class coefficients must sum to 1"));
            }
            c.clone()
        }
    };

    let m = sub.substitution_matrix();
    let q_total = Rat::from_integer(sub.expansion().total().clone());
    let mut u = vec![Rat::zero(); sub.size()];
    for (class, coeff) in decomp.classes.iter().zip(&coeffs) {
        let restricted = m.submatrix(class, class);
        let shifted = &restricted - &ExactMatrix::identity(class.len()).scale(&q_total);
        let ns = shifted.nullspace();
        if ns.len() != 1 {
            return Err(Error::internal(format!(
                "class {class:?} has Q-eigenspace of dimension {}, expected 1",
                ns.len()
            )));
        }
        let v = &ns[0];
        let total: Rat = v.iter().cloned().sum();
        if total.is_zero() {
            return Err(Error::internal("Perron vector sums to zero"));
        }
        for (pos, &letter) in class.iter().enumerate() {
            let w = &v[pos] / &total;
            if !w.is_positive() {
                return Err(Error::internal(format!(
                    "Perron vector not strictly positive on class {class:?}"
                )));
            }
            u[letter] = w * coeff;
        }
    }
    Ok(InvariantWeights { u, class_coefficients: coeffs })
}

/// The exact spectral projection onto the Q-eigenspace of M, computed as
/// A (B A)^{-1} B with A spanning the right and B the left Q-eigenspace.
/// Satisfies P^2 = P and M P = P M = Q P when M has index 1.
pub fn q_eigen_projection(m: &ExactMatrix, q_total: &Rat) -> Result<ExactMatrix> {
    let n = m.rows();
    let shifted = m - &ExactMatrix::identity(n).scale(q_total);
    let right = shifted.nullspace();
    let left = shifted.transpose().nullspace();
    if right.is_empty() || left.len() != right.len() {
        return Err(Error::Precondition(format!(
            "Q-eigenspace dimensions differ (left {}, right {}); telescope first",
            left.len(),
            right.len()
        )));
    }
    let r = right.len();
    let a = ExactMatrix::from_fn(n, r, |i, j| right[j][i].clone());
    let b = ExactMatrix::from_fn(r, n, |i, j| left[i][j].clone());
    let ba = &b * &a;
    let inv = ba.inverse().ok_or_else(|| {
        Error::Precondition("left/right Q-eigenspaces are not in duality; telescope first".into())
    })?;
    let p = &(&a * &inv) * &b;
    // exactness makes these cheap certainties rather than numerics
    if (&p * &p) != p {
        return Err(Error::internal("projection is not idempotent"));
    }
    let mp = m * &p;
    if mp != p.scale(q_total) || &p * m != p.scale(q_total) {
        return Err(Error::internal("projection does not satisfy M P = P M = Q P"));
    }
    Ok(p)
}

/// Outcome of the aperiodicity check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AperiodicityVerdict {
    /// Two distinct neighborhoods found for some letter (d = 1 criterion).
    Verified { witness_letter: String, neighborhoods: [String; 2] },
    Asserted,
    /// The criterion does not apply (d > 1, or not injective on letters).
    Inapplicable { reason: String },
    Unknown { reason: String },
}

impl AperiodicityVerdict {
    pub fn is_aperiodic(&self) -> bool {
        matches!(self, AperiodicityVerdict::Verified { .. } | AperiodicityVerdict::Asserted)
    }

    pub fn status(&self) -> &'static str {
        match self {
            AperiodicityVerdict::Verified { .. } => "aperiodic-verified",
            AperiodicityVerdict::Asserted => "asserted",
            AperiodicityVerdict::Inapplicable { .. } => "inapplicable",
            AperiodicityVerdict::Unknown { .. } => "unknown",
        }
    }
}

pub const DEFAULT_NEIGHBORHOOD_DEPTH: u32 = 8;

/// One-dimensional aperiodicity check via the two-neighborhood criterion:
/// a primitive word substitution that is one-to-one on letters is aperiodic
/// iff some letter occurs with two distinct neighborhoods in the language.
///
/// The substitution is decomposed first; each recurrent cyclic class is
/// telescoped to a primitive component and searched separately.  For d > 1
/// the criterion is unavailable and the verdict falls back to the input policy.
pub fn check_aperiodicity(sub: &Substitution, depth: u32, cell_budget: u64) -> AperiodicityVerdict {
    if sub.aperiodicity_policy() == AperiodicityPolicy::Asserted {
        return AperiodicityVerdict::Asserted;
    }
    if sub.dim() != 1 {
        return AperiodicityVerdict::Inapplicable {
            reason: "no aperiodicity criterion implemented for d > 1; assert it in the input if known"
                .into(),
        };
    }
    let decomp = ergodic_decomposition(sub);
    let telescoped = match sub.telescope(decomp.index_h, cell_budget) {
        Ok(t) => t,
        Err(e) => return AperiodicityVerdict::Unknown { reason: e.to_string() },
    };
    let mut witness: Option<(String, [String; 2])> = None;
    for class in &decomp.classes {
        // restriction of the telescoped substitution to the class alphabet
        let component = match restrict(&telescoped, class) {
            Ok(c) => c,
            Err(e) => return AperiodicityVerdict::Unknown { reason: e.to_string() },
        };
        let distinct_rules = {
            let mut rules: Vec<&[usize]> = (0..component.size()).map(|g| component.rule(g).cells()).collect();
            rules.sort();
            rules.dedup();
            rules.len() == component.size()
        };
        if !distinct_rules {
            return AperiodicityVerdict::Inapplicable {
                reason: format!(
                    "component {class:?} is not one-to-one on letters; the neighborhood criterion does not apply"
                ),
            };
        }
        match two_neighborhood_witness(&component, depth, cell_budget) {
            Ok(Some((letter, nb))) => {
                if witness.is_none() {
                    witness = Some((sub.alphabet().name(class[letter]).to_string(), nb));
                }
            }
            Ok(None) => {
                return AperiodicityVerdict::Unknown {
                    reason: format!(
                        "no letter with two distinct neighborhoods found in component {class:?} within depth {depth}"
                    ),
                }
            }
            Err(e) => return AperiodicityVerdict::Unknown { reason: e.to_string() },
        }
    }
    match witness {
        Some((witness_letter, neighborhoods)) => {
            AperiodicityVerdict::Verified { witness_letter, neighborhoods }
        }
        None => AperiodicityVerdict::Unknown { reason: "no ergodic classes".into() },
    }
}

fn restrict(sub: &Substitution, class: &[usize]) -> Result<Substitution> {
    use crate::substitution::{Alphabet, Block};
    let names: Vec<String> = class.iter().map(|&l| sub.alphabet().name(l).to_string()).collect();
    let alphabet = Alphabet::new(names)?;
    let reindex = |l: usize| -> Result<usize> {
        class
            .iter()
            .position(|&x| x == l)
            .ok_or_else(|| Error::internal("class is not closed under substitution"))
    };
    let rules = class
        .iter()
        .map(|&l| {
            let cells = sub
                .rule(l)
                .cells()
                .iter()
                .map(|&c| reindex(c))
                .collect::<Result<Vec<_>>>()?;
            Block::new(sub.expansion().pow(1), cells)
        })
        .collect::<Result<Vec<_>>>()?;
    Substitution::new(sub.expansion().clone(), alphabet, rules, sub.aperiodicity_policy())
}

fn two_neighborhood_witness(
    sub: &Substitution,
    depth: u32,
    cell_budget: u64,
) -> Result<Option<(usize, [String; 2])>> {
    let s = sub.size();
    let mut seen: Vec<std::collections::BTreeSet<(usize, usize)>> = vec![Default::default(); s];
    for n in 1..=depth {
        if sub.expansion().total_pow_usize(n).is_none() {
            break;
        }
        for gamma in 0..s {
            let w = sub.expand(gamma, n, cell_budget)?;
            let cells = w.cells();
            for i in 1..cells.len().saturating_sub(1) {
                let (l, c, r) = (cells[i - 1], cells[i], cells[i + 1]);
                seen[c].insert((l, r));
                if seen[c].len() >= 2 {
                    let mut it = seen[c].iter();
                    let a = *it.next().unwrap();
                    let b = *it.next().unwrap();
                    let name = |x: usize| sub.alphabet().name(x).to_string();
                    return Ok(Some((
                        c,
                        [
                            format!("{}{}{}", name(a.0), name(c), name(a.1)),
                            format!("{}{}{}", name(b.0), name(c), name(b.1)),
                        ],
                    )));
                }
            }
        }
    }
    Ok(None)
}

/// Bijectivity and commutativity of the configuration.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct StructuralPredicates {
    pub bijective: bool,
    pub commutative: bool,
}

pub fn structural_predicates(sub: &Substitution) -> StructuralPredicates {
    StructuralPredicates { bijective: sub.is_bijective(), commutative: sub.is_commutative() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rat;
    use crate::substitution::zoo::*;
    use crate::substitution::DEFAULT_CELL_BUDGET;

    #[test]
    fn six_letter_decomposition() {
        let s = six_letter();
        let d = ergodic_decomposition(&s);
        // letters 1..6 are indices 0..5
        assert_eq!(d.classes, vec![vec![0, 2], vec![1, 4]]);
        assert_eq!(d.transient, vec![3, 5]);
        assert_eq!(d.index_h, 2);
        // after telescoping the decomposition has index 1
        let t = s.telescope(2, DEFAULT_CELL_BUDGET).unwrap();
        let dt = ergodic_decomposition(&t);
        assert_eq!(dt.index_h, 1);
        assert_eq!(dt.classes.len(), 2);
    }

    #[test]
    fn tm_bisub_decomposition() {
        let bi = thue_morse().bisubstitution();
        let d = ergodic_decomposition(&bi);
        assert_eq!(d.classes, vec![vec![0, 3], vec![1, 2]]);
        assert!(d.transient.is_empty());
        assert_eq!(d.index_h, 1);
    }

    #[test]
    fn rs_bisub_decomposition() {
        let bi = rudin_shapiro().bisubstitution();
        let d = ergodic_decomposition(&bi);
        // pairs are indexed a*4+b: diag {0,5,10,15}, antidiag {3,6,9,12}
        assert_eq!(d.classes, vec![vec![0, 5, 10, 15], vec![3, 6, 9, 12]]);
        assert_eq!(d.transient, vec![1, 2, 4, 7, 8, 11, 13, 14]);
        assert_eq!(d.index_h, 1);
    }

    #[test]
    fn perron_weights() {
        let tm = thue_morse();
        let d = ergodic_decomposition(&tm);
        let w = invariant_weights(&tm, &d, &ClassCoefficients::Uniform).unwrap();
        assert_eq!(w.u, vec![rat(1, 2), rat(1, 2)]);

        let t = table();
        let d = ergodic_decomposition(&t);
        let w = invariant_weights(&t, &d, &ClassCoefficients::Uniform).unwrap();
        assert_eq!(w.u, vec![rat(1, 4); 4]);

        let z = queffelec_zeta();
        let d = ergodic_decomposition(&z);
        let w = invariant_weights(&z, &d, &ClassCoefficients::Uniform).unwrap();
        assert_eq!(w.u, vec![rat(1, 3); 3]);

        // M u = Q u
        let m = z.substitution_matrix();
        assert_eq!(m.mul_vec(&w.u), crate::matrix::vec_scale(&w.u, &rat_int(3)));
    }

    #[test]
    fn six_letter_weights() {
        let t = six_letter().telescope(2, DEFAULT_CELL_BUDGET).unwrap();
        let d = ergodic_decomposition(&t);
        let w = invariant_weights(&t, &d, &ClassCoefficients::Uniform).unwrap();
        assert_eq!(
            w.u,
            vec![rat(1, 4), rat(1, 4), rat(1, 4), rat(0, 1), rat(1, 4), rat(0, 1)]
        );
        let m = t.substitution_matrix();
        assert_eq!(m.mul_vec(&w.u), crate::matrix::vec_scale(&w.u, &rat_int(4)));
    }

    #[test]
    fn projection_tm() {
        let m = thue_morse().substitution_matrix();
        let p = q_eigen_projection(&m, &rat_int(2)).unwrap();
        assert_eq!(p, ExactMatrix::from_fn(2, 2, |_, _| rat(1, 2)));
        // M = Q I projects to the identity
        let qi = ExactMatrix::identity(3).scale(&rat_int(5));
        assert_eq!(q_eigen_projection(&qi, &rat_int(5)).unwrap(), ExactMatrix::identity(3));
    }

    #[test]
    fn projection_rs_coincidence_matches_power_iteration() {
        let c = rudin_shapiro().coincidence_matrix();
        let p = q_eigen_projection(&c, &rat_int(2)).unwrap();
        // float cross-check: (C/2)^n converges to P entrywise.  The second
        // eigenvalue of C has modulus sqrt(2), so the n = 40 residual is
        // 2^-20; 1e-9 agreement needs n >= 62.
        let exact = p.to_f64();
        for (n, tol) in [(40u32, 1e-6), (80, 1e-9)] {
            let approx = c.scale(&rat(1, 2)).pow(n).to_f64();
            for i in 0..16 {
                for j in 0..16 {
                    assert!((approx[i][j] - exact[i][j]).abs() < tol, "entry {i},{j} at n={n}");
                }
            }
        }
    }

    #[test]
    fn aperiodicity_checks() {
        let v = check_aperiodicity(&thue_morse(), 8, DEFAULT_CELL_BUDGET);
        match &v {
            AperiodicityVerdict::Verified { witness_letter, neighborhoods } => {
                assert_eq!(witness_letter, "1");
                assert_eq!(neighborhoods.clone(), ["011".to_string(), "110".to_string()]);
            }
            other => panic!("expected verified, got {other:?}"),
        }
        assert!(check_aperiodicity(&rudin_shapiro(), 8, DEFAULT_CELL_BUDGET).is_aperiodic());
        assert!(check_aperiodicity(&queffelec_zeta(), 8, DEFAULT_CELL_BUDGET).is_aperiodic());
        assert!(check_aperiodicity(&height_h3(), 8, DEFAULT_CELL_BUDGET).is_aperiodic());
        assert!(check_aperiodicity(&six_letter(), 8, DEFAULT_CELL_BUDGET).is_aperiodic());

        // not injective on letters: criterion inapplicable
        let s = Substitution::from_rows(&[2], 2, &[&[0, 1], &[0, 1]]).unwrap();
        match check_aperiodicity(&s, 8, DEFAULT_CELL_BUDGET) {
            AperiodicityVerdict::Inapplicable { .. } => {}
            other => panic!("expected inapplicable, got {other:?}"),
        }

        // d = 2 without assertion
        let t = table().with_policy(AperiodicityPolicy::Unknown);
        match check_aperiodicity(&t, 8, DEFAULT_CELL_BUDGET) {
            AperiodicityVerdict::Inapplicable { .. } => {}
            other => panic!("expected inapplicable, got {other:?}"),
        }
        assert!(check_aperiodicity(&table(), 8, DEFAULT_CELL_BUDGET).is_aperiodic());
    }

    #[test]
    fn product_decomposition_refines_factor_products() {
        let p = tm_rs_product();
        let bi = p.bisubstitution();
        let d = ergodic_decomposition(&bi);
        let tm_bi = ergodic_decomposition(&thue_morse().bisubstitution());
        let rs_bi = ergodic_decomposition(&rudin_shapiro().bisubstitution());
        // a pair of product letters ((t,r),(t',r')) splits into the tau-pair (t,t')
        // and the rho-pair (r,r'); indexing: product letter = t*4 + r, pair = x*8 + y
        let split = |pair: usize| {
            let (x, y) = (pair / 8, pair % 8);
            let (t1, r1) = (x / 4, x % 4);
            let (t2, r2) = (y / 4, y % 4);
            (t1 * 2 + t2, r1 * 4 + r2)
        };
        let tm_class_of = |tp: usize| tm_bi.classes.iter().position(|c| c.contains(&tp));
        let rs_class_of = |rp: usize| rs_bi.classes.iter().position(|c| c.contains(&rp));
        for class in &d.classes {
            // every pair in one product class projects to the same factor classes
            let keys: std::collections::BTreeSet<_> = class
                .iter()
                .map(|&p| {
                    let (tp, rp) = split(p);
                    (tm_class_of(tp), rs_class_of(rp))
                })
                .collect();
            assert_eq!(keys.len(), 1, "class {class:?} crosses factor products");
            let (tk, rk) = keys.into_iter().next().unwrap();
            assert!(tk.is_some() && rk.is_some(), "recurrent class over transient factor");
        }
        // transient part = pairs whose rho-pair is transient (tau-bisub has none)
        for &p in &d.transient {
            let (_, rp) = split(p);
            assert!(rs_bi.transient.contains(&rp), "pair {p} transient without transient factor");
        }
    }

    #[test]
    fn index_matches_eigenvalue_route() {
        // floating cross-check: index_h is the smallest h with lambda^h = Q^h
        // for every modulus-Q eigenvalue of M_S
        for (sub, expect) in [
            (thue_morse(), 1u32),
            (queffelec_zeta(), 1),
            (rudin_shapiro(), 1),
            (table(), 1),
            (height_h3(), 1),
            (six_letter(), 2),
        ] {
            let d = ergodic_decomposition(&sub);
            assert_eq!(d.index_h, expect);
            let roots = crate::poly_roots_f64(&sub.substitution_matrix().char_poly());
            let q: f64 = crate::matrix::rat_to_f64(&Rat::from_integer(
                sub.expansion().total().clone(),
            ));
            let modulus_q: Vec<num_complex::Complex64> =
                roots.into_iter().filter(|z| (z.norm() - q).abs() < 1e-6).collect();
            let h = (1..=16)
                .find(|&h| {
                    modulus_q
                        .iter()
                        .all(|z| (z.powu(h) - num_complex::Complex64::from(q.powi(h as i32))).norm() < 1e-3 * q.powi(h as i32))
                })
                .unwrap();
            assert_eq!(h, expect, "eigenvalue route disagrees for {expect}");
        }
    }
}
