//! Orchestration: telescoping, decomposition, weights, predicates and the
//! aperiodicity verdict bundled for downstream spectral work.

use crate::error::{Error, Result};
use crate::hull::{
    extreme_points_commutative, extreme_points_exact_1d, extreme_points_numeric,
    hull_parametrization, verify_candidates, HullMethod, HullParametrization, HullResult,
    HullVector,
};
use crate::matrix::ExactMatrix;
use crate::structure::{
    check_aperiodicity, ergodic_decomposition, invariant_weights, structural_predicates,
    AperiodicityVerdict, ClassCoefficients, ErgodicDecomposition, InvariantWeights,
    StructuralPredicates, DEFAULT_NEIGHBORHOOD_DEPTH,
};
use crate::substitution::{Substitution, DEFAULT_CELL_BUDGET};
use num_integer::Integer;

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    pub p_max: u32,
    /// classification window: all k with power(k) <= window
    pub window: u32,
    /// 0 means "use the alphabet size"
    pub height_bound: u64,
    pub neighborhood_depth: u32,
    pub cell_budget: u64,
    pub class_coefficients: ClassCoefficients,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            p_max: crate::fourier::DEFAULT_P_MAX,
            window: 3,
            height_bound: 0,
            neighborhood_depth: DEFAULT_NEIGHBORHOOD_DEPTH,
            cell_budget: DEFAULT_CELL_BUDGET,
            class_coefficients: ClassCoefficients::Uniform,
        }
    }
}

/// Everything the spectral stages need, computed once.
pub struct Analysis {
    pub original: Substitution,
    pub original_decomposition: ErgodicDecomposition,
    /// lcm of the indices of S and of its bisubstitution; the analysis runs on S^h
    pub telescope_h: u32,
    pub sub: Substitution,
    pub decomposition: ErgodicDecomposition,
    pub weights: InvariantWeights,
    pub predicates: StructuralPredicates,
    pub aperiodicity: AperiodicityVerdict,
    pub substitution_matrix: ExactMatrix,
    pub coincidence_matrix: ExactMatrix,
    pub options: AnalysisOptions,
}

/// Decompose, telescope so that both the substitution and its bisubstitution
/// have index 1, and fix the invariant weights.
pub fn analyze(sub: &Substitution, options: AnalysisOptions) -> Result<Analysis> {
    let original_decomposition = ergodic_decomposition(sub);
    let bisub_decomposition = ergodic_decomposition(&sub.bisubstitution());
    let h = original_decomposition.index_h.lcm(&bisub_decomposition.index_h);
    let telescoped = sub.telescope(h, options.cell_budget)?;
    let decomposition = ergodic_decomposition(&telescoped);
    if decomposition.index_h != 1 {
        return Err(Error::internal("telescoped substitution still has index > 1"));
    }
    if ergodic_decomposition(&telescoped.bisubstitution()).index_h != 1 {
        return Err(Error::internal("telescoped bisubstitution still has index > 1"));
    }
    let weights = invariant_weights(&telescoped, &decomposition, &options.class_coefficients)?;
    let predicates = structural_predicates(sub);
    let aperiodicity = check_aperiodicity(sub, options.neighborhood_depth, options.cell_budget);
    let substitution_matrix = telescoped.substitution_matrix();
    let coincidence_matrix = telescoped.coincidence_matrix();
    Ok(Analysis {
        original: sub.clone(),
        original_decomposition,
        telescope_h: h,
        sub: telescoped,
        decomposition,
        weights,
        predicates,
        aperiodicity,
        substitution_matrix,
        coincidence_matrix,
        options,
    })
}

impl Analysis {
    pub fn effective_height_bound(&self) -> u64 {
        if self.options.height_bound == 0 {
            self.sub.size() as u64
        } else {
            self.options.height_bound
        }
    }

    pub fn hull_parametrization(&self) -> Result<HullParametrization> {
        hull_parametrization(&self.sub, &self.weights)
    }

    /// Run the requested enumeration method; `None` picks automatically:
    /// exact-1d when the hull has at most one real parameter, the commuting
    /// polyhedron route when the pencil commutes, the numeric search otherwise.
    pub fn extreme_points(
        &self,
        param: &HullParametrization,
        method: Option<HullMethod>,
        candidates: &[HullVector],
    ) -> Result<HullResult> {
        match method {
            Some(HullMethod::Exact1d) => extreme_points_exact_1d(param, &self.sub, &self.weights),
            Some(HullMethod::CommutativeExact) => {
                extreme_points_commutative(param, &self.sub, &self.weights, true)
            }
            Some(HullMethod::Numeric) => {
                extreme_points_numeric(param, &self.sub, &self.weights)
            }
            Some(HullMethod::VerifyCandidates) => {
                Ok(verify_candidates(param, &self.sub, &self.weights, candidates))
            }
            None => {
                if param.free_dim() <= 1 && param.is_real() {
                    return extreme_points_exact_1d(param, &self.sub, &self.weights);
                }
                if self.predicates.commutative {
                    if let Ok(r) =
                        extreme_points_commutative(param, &self.sub, &self.weights, true)
                    {
                        return Ok(r);
                    }
                }
                extreme_points_numeric(param, &self.sub, &self.weights)
            }
        }
    }
}
