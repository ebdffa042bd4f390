use proptest::prelude::*;

use permuton_lab_core::bwx::color_boxes;
use permuton_lab_core::growth::{forward_growth, inverse_rsk, rsk};
use permuton_lab_core::layers::{layer_partition, sw_region};
use permuton_lab_core::measure::{mu_rect, mu_w, EmpiricalPermuton, Rect, Side, WRegionSpec};
use permuton_lab_core::perm::{avoids, contains, contains_naive, lds, lis};
use permuton_lab_core::sampler::{sample_av_increasing, SeededRng};
use permuton_lab_core::shape::Traversal;
use permuton_lab_core::{PatternSet, Permutation};

fn perm(max: usize) -> impl Strategy<Value = Permutation> {
    (0..=max).prop_flat_map(|n| {
        Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
    })
}

fn unit_pair() -> impl Strategy<Value = (f64, f64)> {
    (0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn symmetries_are_involutions(sigma in perm(40)) {
        prop_assert_eq!(sigma.reverse().reverse(), sigma.clone());
        prop_assert_eq!(sigma.complement().complement(), sigma.clone());
        prop_assert_eq!(sigma.reverse_complement().reverse_complement(), sigma.clone());
        prop_assert_eq!(sigma.inverse().inverse(), sigma.clone());
    }

    #[test]
    fn containment_matches_naive(sigma in perm(9), pi in perm(4)) {
        prop_assert_eq!(contains(&sigma, &pi), contains_naive(&sigma, &pi));
        prop_assert_eq!(
            contains(&sigma, &pi),
            contains(&sigma.reverse_complement(), &pi.reverse_complement())
        );
    }

    #[test]
    fn lis_matches_avoidance(sigma in perm(30), d in 1usize..6) {
        let class = PatternSet::single(Permutation::increasing(d + 1)).unwrap();
        prop_assert_eq!(avoids(&sigma, &class), lis(&sigma) <= d);
        prop_assert_eq!(lds(&sigma), lis(&sigma.reverse()));
    }

    #[test]
    fn rsk_round_trip(sigma in perm(60)) {
        let (p, q) = rsk(&sigma);
        prop_assert_eq!(p.shape().first() as usize, lis(&sigma));
        prop_assert_eq!(p.shape().len(), lds(&sigma));
        prop_assert_eq!(inverse_rsk(&p, &q).unwrap(), sigma);
    }

    #[test]
    fn greene_on_square_traversals(sigma in perm(30)) {
        let t = Traversal::from_permutation(&sigma);
        let border = forward_growth(&t);
        let n = sigma.len() as u32;
        let top = border.label_at(n, n).unwrap();
        prop_assert_eq!(top.first() as usize, lis(&sigma));
        prop_assert_eq!(top.len(), lds(&sigma));
    }

    #[test]
    fn blue_set_is_south_west_closed(sigma in perm(12), tau in perm(3)) {
        prop_assume!(!tau.is_empty());
        let c = color_boxes(&sigma, &tau);
        let n = sigma.len();
        for a in 1..=n {
            for b in 1..=n {
                if c.is_blue(a, b) {
                    prop_assert!(a == 1 || c.is_blue(a - 1, b));
                    prop_assert!(b == 1 || c.is_blue(a, b - 1));
                }
            }
        }
    }

    #[test]
    fn layers_partition_and_decrease(sigma in perm(60)) {
        let part = layer_partition(&sigma);
        prop_assert_eq!(part.d(), lis(&sigma));
        let mut seen = vec![false; sigma.len()];
        for layer in part.layers() {
            prop_assert!(layer.windows(2).all(|w| sigma.at(w[0]) > sigma.at(w[1])));
            for &i in layer {
                prop_assert!(!seen[i - 1]);
                seen[i - 1] = true;
            }
            let r = sw_region(layer, &sigma);
            prop_assert!(r.heights().windows(2).all(|w| w[0] >= w[1]));
        }
        prop_assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn marginals_and_additivity(
        sigma in perm(300),
        (x0, x1) in unit_pair(),
        (y0, y1) in unit_pair(),
        sx in 0.0..=1.0f64,
        sy in 0.0..=1.0f64,
    ) {
        prop_assume!(!sigma.is_empty());
        let mu = EmpiricalPermuton::new(sigma).unwrap();
        let col = mu_rect(&mu, &Rect::new(x0, x1, 0.0, 1.0).unwrap());
        prop_assert!((col - (x1 - x0)).abs() <= 1e-12);
        let row = mu_rect(&mu, &Rect::new(0.0, 1.0, y0, y1).unwrap());
        prop_assert!((row - (y1 - y0)).abs() <= 1e-12);
        let xm = x0 + sx * (x1 - x0);
        let ym = y0 + sy * (y1 - y0);
        let whole = mu_rect(&mu, &Rect::new(x0, x1, y0, y1).unwrap());
        let parts = [(x0, xm, y0, ym), (xm, x1, y0, ym), (x0, xm, ym, y1), (xm, x1, ym, y1)]
            .iter()
            .map(|&(a, b, c, d)| mu_rect(&mu, &Rect::new(a, b, c, d).unwrap()))
            .sum::<f64>();
        prop_assert!((whole - parts).abs() <= 1e-12);
    }

    #[test]
    fn w_decomposes(sigma in perm(300), eps in 0.0..1.0f64) {
        prop_assume!(!sigma.is_empty());
        let mu = EmpiricalPermuton::new(sigma).unwrap();
        let both = mu_w(&mu, WRegionSpec::new(eps, Side::Both));
        let plus = mu_w(&mu, WRegionSpec::new(eps, Side::Plus));
        let minus = mu_w(&mu, WRegionSpec::new(eps, Side::Minus));
        prop_assert_eq!(both, plus + minus);
        prop_assert!((0.0..=1.0).contains(&both));
    }

    #[test]
    fn sampler_is_deterministic(seed in any::<u64>(), stream in 0u64..1000, n in 1usize..60, d in 1usize..4) {
        let a = sample_av_increasing(n, d, &mut SeededRng::new(seed, stream)).unwrap();
        let b = sample_av_increasing(n, d, &mut SeededRng::new(seed, stream)).unwrap();
        prop_assert!(lis(&a) <= d);
        prop_assert_eq!(a, b);
    }
}
