use super::{all_shapes, traversal_contains, FerrersShape, Traversals, DEFAULT_SHAPE_BOUND};
use crate::error::{Error, Result};
use crate::perm::Permutation;

const MAX_PATTERN_LEN: usize = 4;

/// Outcome of comparing avoider counts over all small shapes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapeWilfReport {
    Equal { shapes_tested: usize },
    Counterexample { shape: FerrersShape, count_a: u64, count_b: u64 },
}

impl ShapeWilfReport {
    pub fn is_equal(&self) -> bool {
        matches!(self, Self::Equal { .. })
    }
}

pub fn shape_wilf_check(a: &Permutation, b: &Permutation, max_boxes: usize) -> Result<ShapeWilfReport> {
    shape_wilf_check_bounded(a, b, max_boxes, DEFAULT_SHAPE_BOUND)
}

/// Compares `|S_lambda(a)|` and `|S_lambda(b)|` shape by shape, smallest
/// shapes first, and stops at the first difference. Shapes without a
/// traversal are skipped.
pub fn shape_wilf_check_bounded(
    a: &Permutation,
    b: &Permutation,
    max_boxes: usize,
    bound: usize,
) -> Result<ShapeWilfReport> {
    check_inputs(&[a.clone(), b.clone()], max_boxes, bound)?;
    let mut tested = 0;
    for shape in all_shapes(max_boxes) {
        if !shape.admits_traversal() {
            continue;
        }
        tested += 1;
        let counts = avoider_counts(&shape, &[a.clone(), b.clone()]);
        if counts[0] != counts[1] {
            return Ok(ShapeWilfReport::Counterexample { shape, count_a: counts[0], count_b: counts[1] });
        }
    }
    Ok(ShapeWilfReport::Equal { shapes_tested: tested })
}

/// Partitions `patterns` into groups with identical avoider counts on every
/// shape of at most `max_boxes` boxes. Groups keep input order, each group
/// in order of its first member.
pub fn shape_wilf_classes(patterns: &[Permutation], max_boxes: usize, bound: usize) -> Result<Vec<Vec<Permutation>>> {
    check_inputs(patterns, max_boxes, bound)?;
    let mut profiles: Vec<Vec<u64>> = vec![Vec::new(); patterns.len()];
    for shape in all_shapes(max_boxes) {
        if !shape.admits_traversal() {
            continue;
        }
        for (profile, c) in profiles.iter_mut().zip(avoider_counts(&shape, patterns)) {
            profile.push(c);
        }
    }
    let mut classes: Vec<(Vec<u64>, Vec<Permutation>)> = Vec::new();
    for (pat, profile) in patterns.iter().zip(profiles) {
        match classes.iter_mut().find(|(p, _)| *p == profile) {
            Some((_, members)) => members.push(pat.clone()),
            None => classes.push((profile, vec![pat.clone()])),
        }
    }
    Ok(classes.into_iter().map(|(_, m)| m).collect())
}

fn check_inputs(patterns: &[Permutation], max_boxes: usize, bound: usize) -> Result<()> {
    if max_boxes > bound {
        return Err(Error::BoundExceeded { what: "shape boxes", value: max_boxes, bound });
    }
    if let Some(p) = patterns.iter().find(|p| p.len() > MAX_PATTERN_LEN) {
        return Err(Error::BoundExceeded { what: "pattern length", value: p.len(), bound: MAX_PATTERN_LEN });
    }
    Ok(())
}

fn avoider_counts(shape: &FerrersShape, patterns: &[Permutation]) -> Vec<u64> {
    let mut counts = vec![0u64; patterns.len()];
    for t in Traversals::new(shape.clone()) {
        for (c, p) in counts.iter_mut().zip(patterns) {
            if !traversal_contains(&t, p) {
                *c += 1;
            }
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn names(classes: &[Vec<Permutation>]) -> Vec<Vec<String>> {
        classes.iter().map(|c| c.iter().map(|p| p.to_string()).collect()).collect()
    }

    #[test]
    fn monotone_pair_of_length_two() {
        assert!(shape_wilf_check(&p("12"), &p("21"), 9).unwrap().is_equal());
    }

    #[test]
    fn length_three_collapses_on_small_shapes() {
        let s3: Vec<Permutation> = all_permutations(3).unwrap().collect();
        let classes = shape_wilf_classes(&s3, 9, DEFAULT_SHAPE_BOUND).unwrap();
        assert_eq!(classes.len(), 1);
        assert!(shape_wilf_check(&p("213"), &p("132"), 9).unwrap().is_equal());
        assert!(shape_wilf_check(&p("123"), &p("312"), 9).unwrap().is_equal());
    }

    #[test]
    fn first_separation_of_123_and_312() {
        match shape_wilf_check(&p("123"), &p("312"), 16).unwrap() {
            ShapeWilfReport::Counterexample { shape, count_a, count_b } => {
                assert_eq!(shape.to_string(), "4,4,4,3");
                assert_eq!((count_a, count_b), (13, 12));
            }
            other => panic!("expected a counterexample, got {other:?}"),
        }
        assert!(shape_wilf_check(&p("123"), &p("312"), 14).unwrap().is_equal());
    }

    #[test]
    fn bounds() {
        assert!(matches!(shape_wilf_check(&p("12"), &p("21"), 17), Err(Error::BoundExceeded { .. })));
        assert!(matches!(shape_wilf_check(&p("12345"), &p("21"), 5), Err(Error::BoundExceeded { .. })));
        assert!(shape_wilf_check_bounded(&p("12"), &p("21"), 17, 17).unwrap().is_equal());
    }

    #[test]
    fn length_three_classes_on_larger_shapes() {
        let s3: Vec<Permutation> = all_permutations(3).unwrap().collect();
        let classes = shape_wilf_classes(&s3, 24, 24).unwrap();
        assert_eq!(names(&classes), vec![vec!["1,2,3", "2,1,3", "3,2,1"], vec!["1,3,2"], vec!["2,3,1", "3,1,2"]]);
    }
}
