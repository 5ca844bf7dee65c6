use serde::{Deserialize, Serialize};

use super::{
    beilinson_presentation, corner_presentation, remove_trivial_vertex, skew_group_presentation, skew_layered_presentation,
    LiftSign,
};
use crate::error::{Error, Result};
use crate::field::Cyclotomic;
use crate::gradedalg::{
    action_check, algebra_json, dual_action, frobenius_pairing_check, hdet_diagonal, hilbert_function,
    invariant_hilbert_function, koszul_numeric_check, quadratic_dual, ActionCheck, AlgebraJson, DiagonalAction, FrobeniusReport,
    HdetConvention, KoszulReport, QuadraticAlgebra, DEFAULT_MAX_DEGREE,
};
use crate::quiver::{finite_dimensionality, FiniteDimReport, PresentationJson, QuiverPresentation, VertexLabel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub max_degree: usize,
    /// Degree for the Koszul proxies; defaults to `min(d + 2, max_degree)`.
    pub koszul_degree: Option<usize>,
    pub findim_bound: usize,
    pub hdet_convention: HdetConvention,
    pub lift_sign: LiftSign,
    pub force: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            max_degree: DEFAULT_MAX_DEGREE,
            koszul_degree: None,
            findim_bound: 32,
            hdet_convention: HdetConvention::Direct,
            lift_sign: LiftSign::Plus,
            force: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate<T> {
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl<T> Gate<T> {
    fn from_result(res: Result<T>, passed: impl FnOnce(&T) -> bool) -> Self {
        match res {
            Ok(r) => Gate { passed: passed(&r), report: Some(r), error: None },
            Err(e) => Gate { passed: false, report: None, error: Some(e.to_string()) },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HdetValue {
    pub power: u32,
    pub value: Cyclotomic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gates {
    pub action_check: Gate<ActionCheck>,
    pub koszul: Gate<KoszulReport>,
    /// `hdet(g^p)` for every `p`; passes when all values are 1.
    pub hdet: Gate<Vec<HdetValue>>,
    pub finite_dimensionality: Gate<FiniteDimReport>,
    pub frobenius: Gate<FrobeniusReport>,
    pub all_passed: bool,
    pub forced: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_withheld: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stages {
    pub skew: Option<PresentationJson>,
    pub skew_mod_e: Option<PresentationJson>,
    pub dual: AlgebraJson,
    pub beilinson: Option<PresentationJson>,
    pub skew_beilinson: Option<PresentationJson>,
    pub gamma: Option<PresentationJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertData {
    pub degree: usize,
    pub algebra: Option<Vec<usize>>,
    pub dual: Option<Vec<usize>>,
    pub invariants: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub options: PipelineOptions,
    pub gates: Gates,
    pub stages: Stages,
    pub hilbert: HilbertData,
}

impl PipelineReport {
    pub fn passed(&self) -> bool {
        self.gates.all_passed
    }

    /// The corner algebra, when it was computed.
    pub fn gamma(&self) -> Option<QuiverPresentation> {
        self.stages.gamma.clone().and_then(|j| QuiverPresentation::try_from(j).ok())
    }
}

fn stage(res: Result<QuiverPresentation>, errors: &mut Vec<String>, name: &str) -> Option<QuiverPresentation> {
    match res {
        Ok(p) => Some(p),
        Err(e) => {
            errors.push(format!("{name}: {e}"));
            None
        }
    }
}

/// Runs every construction from `S` with its action down to the corner
/// algebra `Γ`, recording each hypothesis check on the way. `Γ` is only
/// reported when all checks pass, or when `opts.force` is set.
pub fn stable_cm_pipeline(a: &QuadraticAlgebra, act: &DiagonalAction, opts: &PipelineOptions) -> Result<PipelineReport> {
    let d = a
        .claimed_global_dim()
        .ok_or_else(|| Error::InvalidAlgebra("the pipeline needs the global dimension d of the algebra".into()))?;
    if d < 2 {
        return Err(Error::InvalidAlgebra(format!("global dimension must be at least 2, got {d}")));
    }
    act.check_len(a.n())?;
    let cap = opts.max_degree;
    let n_koszul = opts.koszul_degree.unwrap_or((d + 2).min(cap));
    let mut errors = Vec::new();

    let action = Gate::from_result(action_check(a, act), |c| c.stable);
    let koszul = Gate::from_result(koszul_numeric_check(a, n_koszul, cap), |k| k.passed);
    let hdets: Result<Vec<HdetValue>> = (0..act.r())
        .map(|p| {
            let value = hdet_diagonal(a, &act.power(p as i64), d, opts.hdet_convention, cap)?;
            Ok(HdetValue { power: p, value })
        })
        .collect();
    let hdet = Gate::from_result(hdets, |vs| vs.iter().all(|v| v.value.is_one()));

    let skew = if action.passed { stage(skew_group_presentation(a, act), &mut errors, "skew") } else { None };
    let skew_mod_e = skew.as_ref().and_then(|p| stage(remove_trivial_vertex(p), &mut errors, "skew_mod_e"));
    let findim = match &skew_mod_e {
        Some(p) => Gate::from_result(Ok(finite_dimensionality(p, opts.findim_bound)), FiniteDimReport::is_finite),
        None => Gate { passed: false, report: None, error: Some("S*G/(e) was not constructed".into()) },
    };

    let dual = quadratic_dual(a);
    let dual_act = dual_action(act);
    let frobenius = Gate::from_result(frobenius_pairing_check(&dual, d, cap), FrobeniusReport::passed);
    let beilinson = stage(beilinson_presentation(&dual, d), &mut errors, "beilinson");
    let skew_beilinson = beilinson.as_ref().and_then(|b| {
        stage(skew_layered_presentation(b, dual.generator_names(), &dual_act, opts.lift_sign), &mut errors, "skew_beilinson")
    });

    let all_passed = action.passed && koszul.passed && hdet.passed && findim.passed && frobenius.passed;
    let mut gamma_withheld = None;
    let gamma = match &skew_beilinson {
        Some(sb) if all_passed || opts.force => {
            let kept: Vec<usize> = sb
                .quiver
                .vertices
                .iter()
                .enumerate()
                .filter(|(_, l)| matches!(l, VertexLabel::Pair(_, c) if *c != 0))
                .map(|(v, _)| v)
                .collect();
            stage(corner_presentation(sb, &kept, opts.findim_bound), &mut errors, "gamma")
        }
        Some(_) => {
            let failed: Vec<&str> = [
                ("action_check", action.passed),
                ("koszul", koszul.passed),
                ("hdet", hdet.passed),
                ("finite_dimensionality", findim.passed),
                ("frobenius", frobenius.passed),
            ]
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(name, _)| *name)
            .collect();
            gamma_withheld = Some(format!("failed gates: {}", failed.join(", ")));
            None
        }
        None => None,
    };
    if gamma.is_none() && gamma_withheld.is_none() {
        gamma_withheld = Some(errors.join("; "));
    }

    let hilbert = HilbertData {
        degree: n_koszul,
        algebra: hilbert_function(a, n_koszul, cap).ok(),
        dual: hilbert_function(&dual, n_koszul.min(d + 1), cap).ok(),
        invariants: invariant_hilbert_function(a, act, n_koszul, cap).ok(),
    };
    let json = |p: &Option<QuiverPresentation>| p.as_ref().map(PresentationJson::from);
    Ok(PipelineReport {
        options: opts.clone(),
        gates: Gates {
            action_check: action,
            koszul,
            hdet,
            finite_dimensionality: findim,
            frobenius,
            all_passed,
            forced: opts.force,
            gamma_withheld,
        },
        stages: Stages {
            skew: json(&skew),
            skew_mod_e: json(&skew_mod_e),
            dual: algebra_json(&dual, Some(&dual_act)),
            beilinson: json(&beilinson),
            skew_beilinson: json(&skew_beilinson),
            gamma: json(&gamma),
        },
        hilbert,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedalg::{FreeWord, NcPolynomial};

    #[test]
    fn example_runs_through() {
        let (s, g) = crate::fixtures::example_s();
        let rep = stable_cm_pipeline(&s, &g, &PipelineOptions::default()).unwrap();
        assert!(rep.passed(), "{:?}", rep.gates);
        let gamma = rep.gamma().unwrap();
        assert_eq!((gamma.quiver.vertex_count(), gamma.quiver.arrows.len(), gamma.relations().len()), (4, 9, 6));
        assert_eq!(rep.hilbert.algebra.as_deref(), Some(&[1, 4, 10, 20, 35, 56, 84][..]));
        assert_eq!(rep.hilbert.dual.as_deref(), Some(&[1, 4, 6, 4, 1, 0][..]));
        let again = stable_cm_pipeline(&s, &g, &PipelineOptions::default()).unwrap();
        assert_eq!(serde_json::to_string(&rep).unwrap(), serde_json::to_string(&again).unwrap());
    }

    #[test]
    fn trivial_group_gives_zero_corner() {
        let (s, _) = crate::fixtures::example_s();
        let rep = stable_cm_pipeline(&s, &DiagonalAction::trivial(4), &PipelineOptions::default()).unwrap();
        let gamma = rep.gamma().unwrap();
        assert_eq!(gamma.quiver.vertex_count(), 0);
    }

    #[test]
    fn commutative_plane_with_sign_action() {
        let c = |k| Cyclotomic::from_int(1, k);
        let f = NcPolynomial::from_terms([(FreeWord(vec![0, 1]), c(1)), (FreeWord(vec![1, 0]), c(-1))]);
        let a = QuadraticAlgebra::new(vec!["x".into(), "y".into()], &[f]).unwrap().with_global_dim(2);
        let g = DiagonalAction::new(2, vec![1, 1]).unwrap();
        let rep = stable_cm_pipeline(&a, &g, &PipelineOptions::default()).unwrap();
        let hdet = rep.gates.hdet.report.as_ref().unwrap();
        assert!(hdet.iter().all(|v| v.value.is_one()));
        let findim = rep.gates.finite_dimensionality.report.as_ref().unwrap();
        assert!(findim.is_finite());
        assert_eq!(findim.total_dim, Some(1));
    }

    #[test]
    fn failed_gate_withholds_gamma() {
        let c = |k| Cyclotomic::from_int(1, k);
        let f = NcPolynomial::from_terms([(FreeWord(vec![0, 1]), c(1)), (FreeWord(vec![1, 0]), c(-1))]);
        let a = QuadraticAlgebra::new(vec!["x".into(), "y".into()], &[f]).unwrap().with_global_dim(2);
        // diag(ζ3, ζ3) has determinant ζ3² ≠ 1.
        let g = DiagonalAction::new(3, vec![1, 1]).unwrap();
        let rep = stable_cm_pipeline(&a, &g, &PipelineOptions::default()).unwrap();
        assert!(!rep.gates.hdet.passed);
        assert!(rep.stages.gamma.is_none());
        assert!(rep.gates.gamma_withheld.as_deref().unwrap().contains("hdet"));
        let forced = stable_cm_pipeline(&a, &g, &PipelineOptions { force: true, ..Default::default() }).unwrap();
        assert!(forced.stages.gamma.is_some());
        assert!(forced.gates.forced);
    }

    #[test]
    fn missing_dimension_is_an_error() {
        let (s, g) = crate::fixtures::example_s();
        let s = QuadraticAlgebra::from_relation_space(s.generator_names().to_vec(), s.relations().clone()).unwrap();
        assert!(stable_cm_pipeline(&s, &g, &PipelineOptions::default()).is_err());
    }
}
