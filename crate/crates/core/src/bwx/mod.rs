//! Colorings, frozen regions, and the bijections
//! `Av(I_k ⊕ tau) <-> Av(J_k ⊕ tau)` built from them.

mod coloring;
mod inner;
mod pipeline;

use crate::error::{Error, Result};
use crate::perm::{contains, Permutation};
use crate::shape::Traversal;

pub use coloring::{color_boxes, extract_from_coloring, extract_lambda, frozen_region, Coloring, LambdaExtraction};
pub use inner::{
    enumeration_bijection, inner_bijection, parse_pairing, Direction, InnerStrategy, Pairing, PairingCache,
    AUTO_THRESHOLD, CACHE_ENV,
};
pub use pipeline::{pipeline, PipelineTrace};

/// One application of the map, with everything needed to audit it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BwxStep {
    pub coloring: Coloring,
    pub extraction: LambdaExtraction,
    pub image: Traversal,
    pub output: Permutation,
}

/// Replaces the traversal on the blue shape by its image under the inner
/// bijection and leaves every white point in place.
pub fn bwx_step(
    pi: &Permutation,
    k: usize,
    tau: &Permutation,
    direction: Direction,
    strategy: InnerStrategy,
    cache: &PairingCache,
) -> Result<BwxStep> {
    let inc = Permutation::increasing(k);
    let dec = Permutation::decreasing(k);
    let (from, to) = match direction {
        Direction::IncToDec => (inc.direct_sum(tau), dec.direct_sum(tau)),
        Direction::DecToInc => (dec.direct_sum(tau), inc.direct_sum(tau)),
    };
    if contains(pi, &from) {
        return Err(Error::PreconditionViolated(format!("{pi} contains {from}")));
    }
    let coloring = color_boxes(pi, tau);
    let extraction = extract_from_coloring(pi, &coloring)?;
    let image = inner_bijection(extraction.traversal(), k, direction, strategy, cache)?;
    let output = extraction.substitute(pi, &image)?;
    debug_assert!((1..=pi.len())
        .filter(|&i| coloring.is_frozen(i, pi.at(i) as usize))
        .all(|i| output.at(i) == pi.at(i)));
    if contains(&output, &to) {
        return Err(Error::InnerBijectionFailure(format!("{pi} maps to {output}, which contains {to}")));
    }
    Ok(BwxStep { coloring, extraction, image, output })
}

pub fn bwx_map(
    pi: &Permutation,
    k: usize,
    tau: &Permutation,
    direction: Direction,
    strategy: InnerStrategy,
    cache: &PairingCache,
) -> Result<Permutation> {
    bwx_step(pi, k, tau, direction, strategy, cache).map(|s| s.output)
}
