use super::{bwx_step, BwxStep, Direction, InnerStrategy, PairingCache};
use crate::error::{Error, Result};
use crate::perm::{contains, ClassSpec, Permutation, Stage};

/// Every stage of `sigma -> rho -> rho^rc -> pi^rc -> pi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineTrace {
    pub spec: ClassSpec,
    pub sigma: Permutation,
    pub rho: Permutation,
    pub rho_rc: Permutation,
    pub pi_rc: Permutation,
    pub pi: Permutation,
    /// `None` when `k1 = 1` and the step is the identity.
    pub first: Option<BwxStep>,
    /// `None` when `k3 = 1` and the step is the identity.
    pub second: Option<BwxStep>,
}

impl PipelineTrace {
    pub fn stage(&self, stage: Stage) -> &Permutation {
        match stage {
            Stage::Sigma => &self.sigma,
            Stage::Rho => &self.rho,
            Stage::RhoRc => &self.rho_rc,
            Stage::PiRc => &self.pi_rc,
            Stage::Pi => &self.pi,
        }
    }
}

/// Carries `sigma` from `Av(I_k1 ⊕ I_k2 ⊕ I_k3)` to `Av(J_k1 ⊕ I_k2 ⊕ J_k3)`,
/// checking the class of every intermediate stage.
pub fn pipeline(
    sigma: &Permutation,
    spec: ClassSpec,
    strategy: InnerStrategy,
    cache: &PairingCache,
) -> Result<PipelineTrace> {
    let (k1, k2, k3) = (spec.k1(), spec.k2(), spec.k3());
    let source = spec.stage_pattern(Stage::Sigma);
    if contains(sigma, &source) {
        return Err(Error::PreconditionViolated(format!("{sigma} contains {source}")));
    }
    let tau1 = Permutation::increasing(k2 + k3);
    let first = (k1 > 1).then(|| bwx_step(sigma, k1, &tau1, Direction::IncToDec, strategy, cache)).transpose()?;
    let rho = first.as_ref().map_or_else(|| sigma.clone(), |s| s.output.clone());
    let rho_rc = rho.reverse_complement();
    let tau2 = Permutation::increasing(k2).direct_sum(&Permutation::decreasing(k1));
    let second = (k3 > 1).then(|| bwx_step(&rho_rc, k3, &tau2, Direction::IncToDec, strategy, cache)).transpose()?;
    let pi_rc = second.as_ref().map_or_else(|| rho_rc.clone(), |s| s.output.clone());
    let pi = pi_rc.reverse_complement();
    let trace = PipelineTrace { spec, sigma: sigma.clone(), rho, rho_rc, pi_rc, pi, first, second };
    for stage in [Stage::Rho, Stage::RhoRc, Stage::PiRc, Stage::Pi] {
        let pattern = spec.stage_pattern(stage);
        if contains(trace.stage(stage), &pattern) {
            return Err(Error::InnerBijectionFailure(format!(
                "stage {} = {} contains {pattern}",
                stage.name(),
                trace.stage(stage)
            )));
        }
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{enumerate_avoiders, PatternSet};
    use std::collections::HashSet;

    fn class(n: usize, pattern: Permutation) -> Vec<Permutation> {
        enumerate_avoiders(n, &PatternSet::single(pattern).unwrap()).unwrap().collect()
    }

    #[test]
    fn degenerate_spec_is_identity() {
        let spec = ClassSpec::new(1, 1, 1).unwrap();
        let cache = PairingCache::in_memory();
        for sigma in class(6, "123".parse().unwrap()) {
            let t = pipeline(&sigma, spec, InnerStrategy::Auto, &cache).unwrap();
            assert_eq!(t.pi, sigma);
            assert!(t.first.is_none() && t.second.is_none());
        }
    }

    #[test]
    fn bijective_on_small_classes() {
        let cache = PairingCache::in_memory();
        for (k1, k2, k3) in [(2, 0, 2), (2, 1, 1), (3, 0, 1), (1, 1, 2)] {
            let spec = ClassSpec::new(k1, k2, k3).unwrap();
            for n in 0..=7 {
                let sources = class(n, spec.stage_pattern(Stage::Sigma));
                let target = class(n, spec.stage_pattern(Stage::Pi)).len();
                assert_eq!(sources.len(), target, "{spec} n={n}");
                for strategy in [InnerStrategy::Growth, InnerStrategy::Auto] {
                    let images: HashSet<Permutation> =
                        sources.iter().map(|s| pipeline(s, spec, strategy, &cache).unwrap().pi).collect();
                    assert_eq!(images.len(), target, "{spec} n={n} {strategy:?}");
                }
            }
        }
    }

    #[test]
    fn rejects_inputs_outside_the_class() {
        let spec = ClassSpec::new(2, 1, 1).unwrap();
        let cache = PairingCache::in_memory();
        assert!(matches!(
            pipeline(&"1234".parse().unwrap(), spec, InnerStrategy::Auto, &cache),
            Err(Error::PreconditionViolated(_))
        ));
    }
}
