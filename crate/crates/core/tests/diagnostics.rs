use stathyp::relhyp::{
    classify_point, decompose_counts, poincare_partial, split_offset, syllable_decompose, DecompositionParams,
};
use stathyp::sphere::{enumerate_sphere, growth_report, EnumerationLimits, SphereMode};
use stathyp::{GroupSpec, Side};

const Z2_STAR_Z: &str = "free_product(abelian(2),free(1))";

fn spec(s: &str) -> GroupSpec {
    s.parse().unwrap()
}

fn limits() -> EnumerationLimits {
    EnumerationLimits::default()
}

#[test]
fn path_endpoints_are_transition_points() {
    let g = spec(Z2_STAR_Z);
    for n in 1..=6 {
        let ds = enumerate_sphere(&g, n, SphereMode::Full, limits()).unwrap();
        for x in ds.elements().unwrap() {
            let path = syllable_decompose(&g, x).unwrap();
            assert_eq!(path.total, n as u64);
            assert_eq!(path.syllables.iter().map(|s| s.length).sum::<u64>(), path.total);
            assert!(path.syllables.windows(2).all(|w| w[0].side != w[1].side));
            for r in 1..=3 {
                assert!(!classify_point(&path, 0, r).unwrap().is_deep());
                assert!(!classify_point(&path, path.total, r).unwrap().is_deep());
            }
        }
    }
}

#[test]
fn deep_layers_thin_out_as_r_grows() {
    for s in [Z2_STAR_Z, "free_product(free(1),free(1))"] {
        let g = spec(s);
        for n in 10..=14 {
            let top = (0.4 * n as f64).floor() as u32;
            let profiles: Vec<_> = (2..=top)
                .map(|r| decompose_counts(&g, n, DecompositionParams::new(0.4, r), limits()).unwrap())
                .collect();
            for p in &profiles {
                assert!(p.partition_holds(), "{s} n={n} R={}", p.big_r);
                assert!((0.0..=1.0).contains(&p.theta));
            }
            assert!(profiles.windows(2).all(|w| w[1].deep_ratio <= w[0].deep_ratio), "{s} n={n}");
            assert!(profiles.last().unwrap().deep_ratio < 0.5);
        }
    }
}

#[test]
fn poincare_series_of_the_peripheral_plane_converges_at_the_growth_rate() {
    let g = spec(Z2_STAR_Z);
    let nu = growth_report(&g, 12, limits()).unwrap().nu_hat;
    assert!(nu > 1.4 && nu < 1.5);
    let r = poincare_partial(&g, Side::Left, nu, 400, limits()).unwrap();
    assert!(r.partial_sums.windows(2).all(|w| w[0] <= w[1]));
    assert!(r.tail_flatness < 1e-3);
    let x = (-nu).exp();
    for n in [10usize, 200, 400] {
        let nf = n as f64;
        let closed = 4.0 * x * (1.0 - (nf + 1.0) * x.powi(n as i32) + nf * x.powi(n as i32 + 1)) / (1.0 - x).powi(2);
        assert!((r.partial_sums[n] - closed).abs() < 1e-9);
    }
}

#[test]
fn offsets_used_by_the_trend_checks() {
    assert_eq!(split_offset(10, 0.4), 4);
    assert_eq!(split_offset(12, 0.4), 5);
}
