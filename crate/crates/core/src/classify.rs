//! Classification of the extremal spectral components and report assembly.
//!
//! Each extreme point w of the spectral hull yields the measure with Fourier
//! coefficients w^t Sigma-hat(k).  On a finite window these are classified as
//! Lebesgue (all coefficients off the origin vanish), discrete over a diagonal
//! lattice h Z^d (coefficients depend only on k mod h), or singular continuous
//! (neither).  The labels are explicitly evidence-based: the window that
//! supports them is part of the result.

use crate::cmat::CRat;
use crate::error::{Error, Result};
use crate::fourier::CorrelationTable;
use crate::hull::{HullResult, HullVector};
use crate::matrix::{rat_to_f64, Rat};
use crate::pipeline::Analysis;
use crate::structure::AperiodicityVerdict;
use crate::zd::LatticePoint;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

/// A lambda coefficient: exact complex rational when the hull point is exact.
#[derive(Clone, Debug)]
pub enum LambdaValue {
    Exact(CRat),
    Numeric(Complex64),
}

pub const VALUE_TOL: f64 = 1e-9;

impl LambdaValue {
    pub fn to_c64(&self) -> Complex64 {
        match self {
            LambdaValue::Exact(c) => c.to_c64(),
            LambdaValue::Numeric(z) => *z,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            LambdaValue::Exact(c) => c.is_zero(),
            LambdaValue::Numeric(z) => z.norm() < VALUE_TOL,
        }
    }

    pub fn approx_eq(&self, other: &LambdaValue) -> bool {
        match (self, other) {
            (LambdaValue::Exact(a), LambdaValue::Exact(b)) => a == b,
            _ => (self.to_c64() - other.to_c64()).norm() < VALUE_TOL,
        }
    }

    pub fn render(&self) -> String {
        match self {
            LambdaValue::Exact(c) => {
                if c.is_real() {
                    format!("{}", c.re)
                } else {
                    format!("{:?}", c)
                }
            }
            LambdaValue::Numeric(z) => {
                if z.im.abs() < VALUE_TOL {
                    format!("{:.12}", z.re)
                } else {
                    format!("{:.12}{:+.12}i", z.re, z.im)
                }
            }
        }
    }
}

/// w^t sigma: inner product of a hull vector with an exact coefficient vector.
pub fn lambda_coefficient(w: &HullVector, sigma: &[Rat]) -> LambdaValue {
    if let Some(exact) = &w.exact {
        let mut acc = CRat::zero();
        for (c, s) in exact.iter().zip(sigma) {
            if !s.is_zero() {
                acc = acc.add(&c.scale(s));
            }
        }
        LambdaValue::Exact(acc)
    } else {
        let mut acc = Complex64::ZERO;
        for (c, s) in w.numeric.iter().zip(sigma) {
            acc += c * rat_to_f64(s);
        }
        LambdaValue::Numeric(acc)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Classification {
    Lebesgue,
    Discrete { lattice: Vec<u64> },
    SingularContinuous,
    Inconclusive,
}

impl Classification {
    pub fn label(&self) -> String {
        match self {
            Classification::Lebesgue => "lebesgue".into(),
            Classification::Discrete { lattice } => {
                let parts: Vec<String> = lattice.iter().map(u64::to_string).collect();
                format!("discrete({}Z^d)", parts.join(","))
            }
            Classification::SingularContinuous => "singular-continuous".into(),
            Classification::Inconclusive => "inconclusive".into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationEvidence {
    pub window_power: u32,
    pub window_size: usize,
    pub caveat: String,
    /// candidate diagonal lattices tested, with the verdict for each
    pub lattices_tested: Vec<(Vec<u64>, bool)>,
    /// a nonzero off-origin coefficient, if one exists in the window
    pub nonzero_witness: Option<String>,
}

/// Classify a coefficient table over a finite window.
///
/// `height_bound` caps the diagonal lattice entries h_i; candidates also need
/// gcd(h_i, q_i) = 1.  The smallest fitting lattice (by product, then
/// lexicographic) is reported.
pub fn classify(
    coefficients: &[(LatticePoint, LambdaValue)],
    q: &crate::zd::Expansion,
    height_bound: u64,
    window_power: u32,
) -> Result<(Classification, ClassificationEvidence)> {
    if coefficients.is_empty() {
        return Err(Error::invalid("classification window is empty"));
    }
    let nonzero: Vec<&(LatticePoint, LambdaValue)> = coefficients
        .iter()
        .filter(|(k, v)| !k.is_zero() && !v.is_zero())
        .collect();
    let mut evidence = ClassificationEvidence {
        window_power,
        window_size: coefficients.len(),
        caveat: format!("evidence on the window power_of(k) <= {window_power}"),
        lattices_tested: Vec::new(),
        nonzero_witness: nonzero
            .first()
            .map(|(k, v)| format!("lambda({k}) = {}", v.render())),
    };
    if coefficients.iter().all(|(k, _)| k.is_zero()) {
        return Ok((Classification::Inconclusive, evidence));
    }
    if nonzero.is_empty() {
        return Ok((Classification::Lebesgue, evidence));
    }

    // candidate diagonal lattices h Z^d, coprime to q componentwise
    let d = q.dim();
    let mut candidates: Vec<Vec<u64>> = vec![vec![]];
    for i in 0..d {
        let qi = u64::try_from(q.q().coord(i)).unwrap_or(u64::MAX);
        candidates = candidates
            .into_iter()
            .flat_map(|c| {
                (1..=height_bound).filter(move |h| h.gcd(&qi) == 1).map(move |h| {
                    let mut c2 = c.clone();
                    c2.push(h);
                    c2
                })
            })
            .collect();
    }
    candidates.sort_by_key(|h| (h.iter().product::<u64>(), h.clone()));

    for h in candidates {
        // group the window by residue and demand constant coefficients per class
        let mut groups: BTreeMap<Vec<BigInt>, LambdaValue> = BTreeMap::new();
        let mut fits = true;
        'outer: for (k, v) in coefficients {
            let residue: Vec<BigInt> = k
                .coords()
                .iter()
                .zip(&h)
                .map(|(c, &hi)| {
                    let m = BigInt::from(hi);
                    ((c % &m) + &m) % &m
                })
                .collect();
            match groups.get(&residue) {
                None => {
                    groups.insert(residue, v.clone());
                }
                Some(prev) => {
                    if !prev.approx_eq(v) {
                        fits = false;
                        break 'outer;
                    }
                }
            }
        }
        evidence.lattices_tested.push((h.clone(), fits));
        if fits {
            return Ok((Classification::Discrete { lattice: h }, evidence));
        }
    }
    Ok((Classification::SingularContinuous, evidence))
}

/// The structural shortcut: an aperiodic bijective commutative substitution
/// has purely singular spectrum, independent of window evidence.
pub fn abc_shortcut(
    predicates: &crate::structure::StructuralPredicates,
    verdict: &AperiodicityVerdict,
) -> bool {
    verdict.is_aperiodic() && predicates.bijective && predicates.commutative
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub index: usize,
    pub vector: Vec<String>,
    pub vector_exact: bool,
    pub extreme: bool,
    pub classification: Classification,
    pub classification_label: String,
    pub coefficients: Vec<(String, String)>,
    pub evidence: ClassificationEvidence,
}

#[derive(Clone, Debug, Serialize)]
pub struct MixingRow {
    pub component: usize,
    pub a: String,
    pub b: String,
    /// |lambda(b + a q^p) - lambda(a) lambda(b)| for p = 2..=5
    pub deviations: Vec<f64>,
    pub nonincreasing: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub schema_version: u32,
    pub substitution: SubstitutionSummary,
    pub decomposition: DecompositionSummary,
    pub bisubstitution_decomposition: DecompositionSummary,
    pub predicates: PredicateSummary,
    pub aperiodicity: AperiodicitySummary,
    pub invariant_weights: Vec<String>,
    pub hull: HullSummary,
    pub components: Vec<ComponentReport>,
    pub statement: String,
    pub resolved_statement: String,
    pub mutual_singularity_note: String,
    pub shortcut_flags: ShortcutFlags,
    pub mixing_evidence: Vec<MixingRow>,
    pub caveats: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubstitutionSummary {
    pub dimension: usize,
    pub q: Vec<String>,
    pub expansion_total: String,
    pub alphabet: Vec<String>,
    pub telescoped_by: u32,
    pub telescoped_q: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionSummary {
    pub classes: Vec<Vec<String>>,
    pub transient: Vec<String>,
    pub index_of_imprimitivity: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct PredicateSummary {
    pub bijective: bool,
    pub commutative: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AperiodicitySummary {
    pub status: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct HullSummary {
    pub method: String,
    pub complete: bool,
    pub point_count: usize,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShortcutFlags {
    pub abc_purely_singular: bool,
}

fn decomposition_summary(
    d: &crate::structure::ErgodicDecomposition,
    names: &dyn Fn(usize) -> String,
) -> DecompositionSummary {
    DecompositionSummary {
        classes: d
            .classes
            .iter()
            .map(|c| c.iter().map(|&l| names(l)).collect())
            .collect(),
        transient: d.transient.iter().map(|&l| names(l)).collect(),
        index_of_imprimitivity: d.index_h,
    }
}

/// Assemble the spectral decomposition report: one classified component per
/// extreme point, the convolution statement, shortcut flags and the
/// strong-mixing evidence table.
pub fn spectral_report(
    analysis: &Analysis,
    hull: &HullResult,
    table: &CorrelationTable,
    window_power: u32,
) -> Result<SpectralReport> {
    if !analysis.aperiodicity.is_aperiodic() {
        return Err(Error::Precondition(format!(
            "spectral analysis requires aperiodicity (verdict: {})",
            analysis.aperiodicity.status()
        )));
    }
    if hull.points.is_empty() {
        return Err(Error::invalid(
            "no hull points to classify; supply candidates or use an enumeration method",
        ));
    }
    let sub = &analysis.sub;
    let q = sub.expansion();
    let window = table.window_points(window_power);
    let height_bound = analysis.effective_height_bound();

    let mut components = Vec::new();
    for (idx, point) in hull.points.iter().enumerate() {
        let mut coeffs: Vec<(LatticePoint, LambdaValue)> = Vec::with_capacity(window.len());
        for k in &window {
            let sigma = table.coefficient(k)?;
            coeffs.push((k.clone(), lambda_coefficient(point, &sigma)));
        }
        // q-shift invariance: lambda(a q) = lambda(a) on the window
        for (k, v) in &coeffs {
            let kq = k.mul(q.q());
            let sigma_kq = table.coefficient(&kq)?;
            let vq = lambda_coefficient(point, &sigma_kq);
            if !v.approx_eq(&vq) {
                return Err(Error::internal(format!(
                    "component {idx}: lambda({kq}) differs from lambda({k})"
                )));
            }
        }
        // lambda(0) = 1
        let zero = coeffs
            .iter()
            .find(|(k, _)| k.is_zero())
            .map(|(_, v)| v.clone())
            .ok_or_else(|| Error::internal("window does not contain the origin"))?;
        if !(zero.to_c64() - Complex64::ONE).norm().lt(&VALUE_TOL) {
            return Err(Error::internal(format!("component {idx}: lambda(0) != 1")));
        }
        let (classification, evidence) = classify(&coeffs, q, height_bound, window_power)?;
        components.push(ComponentReport {
            index: idx + 1,
            vector: point
                .exact
                .as_ref()
                .map(|e| e.iter().map(|c| format!("{c:?}")).collect())
                .unwrap_or_else(|| {
                    point
                        .numeric
                        .iter()
                        .map(|z| format!("{:.12}{:+.12}i", z.re, z.im))
                        .collect()
                }),
            vector_exact: point.exact.is_some(),
            extreme: point.extreme,
            classification_label: classification.label(),
            classification,
            coefficients: coeffs
                .iter()
                .map(|(k, v)| (k.to_string(), v.render()))
                .collect(),
            evidence,
        });
    }

    // strong-mixing evidence: |lambda(b + a q^p) - lambda(a) lambda(b)| for p = 2..=5
    let mut mixing = Vec::new();
    let pairs: Vec<(LatticePoint, LatticePoint)> = vec![
        (LatticePoint::ones(q.dim()), LatticePoint::ones(q.dim())),
        (LatticePoint::ones(q.dim()), LatticePoint::ones(q.dim()).scale(&BigInt::from(2))),
    ];
    for (idx, point) in hull.points.iter().enumerate() {
        for (a, b) in &pairs {
            let la = lambda_coefficient(point, &table.coefficient(a)?);
            let lb = lambda_coefficient(point, &table.coefficient(b)?);
            let product = la.to_c64() * lb.to_c64();
            let mut deviations = Vec::new();
            for p in 2..=5u32 {
                let k = b.add(&a.mul(&q.pow(p)));
                let lk = lambda_coefficient(point, &table.coefficient(&k)?);
                deviations.push((lk.to_c64() - product).norm());
            }
            let nonincreasing =
                deviations.windows(2).all(|w| w[1] <= w[0] + VALUE_TOL);
            mixing.push(MixingRow {
                component: idx + 1,
                a: a.to_string(),
                b: b.to_string(),
                deviations,
                nonincreasing,
            });
        }
    }

    let abc = abc_shortcut(&analysis.predicates, &analysis.aperiodicity);
    if abc {
        for c in &components {
            if c.classification == Classification::Lebesgue {
                return Err(Error::internal(
                    "structural singularity contradicts a Lebesgue-classified component",
                ));
            }
        }
    }

    let q_label = {
        let parts: Vec<String> =
            sub.expansion().q().coords().iter().map(|c| c.to_string()).collect();
        parts.join(",")
    };
    let lambda_names: Vec<String> =
        (1..=components.len()).map(|i| format!("\u{3bb}_{i}")).collect();
    let statement = format!(
        "\u{3c3}_max ~ \u{3c9}_q \u{2217} ({})",
        lambda_names.join(" + ")
    );
    let resolved_terms: Vec<String> = components
        .iter()
        .map(|c| match &c.classification {
            Classification::Discrete { lattice } if lattice.iter().all(|&h| h == 1) => {
                format!("\u{3c9}_{{{q_label}}}")
            }
            Classification::Discrete { lattice } => {
                let parts: Vec<String> = lattice.iter().map(u64::to_string).collect();
                format!("\u{3c9}_{{{q_label}}} \u{2217} \u{3bd}_{{{}}}", parts.join(","))
            }
            Classification::Lebesgue => "m".into(),
            _ => format!("\u{3c9}_{{{q_label}}} \u{2217} \u{3bb}_{}", c.index),
        })
        .collect();
    let resolved_statement = format!("\u{3c3}_max ~ {}", resolved_terms.join(" + "));

    let mut caveats: Vec<String> = hull.notes.clone();
    if !hull.complete {
        caveats.push("hull enumeration incomplete; the component list may be partial".into());
    }
    caveats.push(format!(
        "classifications are evidence-based on the window power_of(k) <= {window_power}"
    ));

    let bisub = analysis.sub.bisubstitution();
    let bisub_decomp = crate::structure::ergodic_decomposition(&bisub);
    let pair_names = |p: usize| bisub.alphabet().name(p).to_string();

    Ok(SpectralReport {
        schema_version: 1,
        substitution: SubstitutionSummary {
            dimension: analysis.original.dim(),
            q: analysis
                .original
                .expansion()
                .q()
                .coords()
                .iter()
                .map(|c| c.to_string())
                .collect(),
            expansion_total: analysis.original.expansion().total().to_string(),
            alphabet: analysis.original.alphabet().names().to_vec(),
            telescoped_by: analysis.telescope_h,
            telescoped_q: sub.expansion().q().coords().iter().map(|c| c.to_string()).collect(),
        },
        decomposition: decomposition_summary(&analysis.original_decomposition, &|l| {
            analysis.original.alphabet().name(l).to_string()
        }),
        bisubstitution_decomposition: decomposition_summary(&bisub_decomp, &pair_names),
        predicates: PredicateSummary {
            bijective: analysis.predicates.bijective,
            commutative: analysis.predicates.commutative,
        },
        aperiodicity: AperiodicitySummary {
            status: analysis.aperiodicity.status().into(),
            detail: match &analysis.aperiodicity {
                AperiodicityVerdict::Verified { witness_letter, neighborhoods } => format!(
                    "letter '{witness_letter}' has neighborhoods {} and {}",
                    neighborhoods[0], neighborhoods[1]
                ),
                AperiodicityVerdict::Asserted => "asserted by the input".into(),
                AperiodicityVerdict::Inapplicable { reason }
                | AperiodicityVerdict::Unknown { reason } => reason.clone(),
            },
        },
        invariant_weights: analysis.weights.u.iter().map(|r| r.to_string()).collect(),
        hull: HullSummary {
            method: hull.method.as_str().into(),
            complete: hull.complete,
            point_count: hull.points.len(),
            notes: hull.notes.clone(),
        },
        components,
        statement,
        resolved_statement,
        mutual_singularity_note:
            "the extremal measures are ergodic for the q-shift, hence mutually singular and of pure type"
                .into(),
        shortcut_flags: ShortcutFlags { abc_purely_singular: abc },
        mixing_evidence: mixing,
        caveats,
    })
}
