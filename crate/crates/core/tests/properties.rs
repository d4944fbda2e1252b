use nal_core::area::{jacobian, AreaDef};
use nal_core::energy::{energy, reshetnyak, EnergyDef};
use nal_core::family::random_polygon;
use nal_core::induced::{orbit_minimize, InducedArea};
use nal_core::{LinearMap2, Norm2, Polygon, Vec2};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, rng_seed: RngSeed::Fixed(0x5eed), ..ProptestConfig::default() }
}

fn polygon(seed: u64, k: usize) -> Polygon {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        if let Ok(p) = random_polygon(&mut rng, k) {
            return p;
        }
    }
}

fn sl2(alpha: f64, t: f64, beta: f64) -> LinearMap2 {
    LinearMap2::rotation(alpha).mul(&LinearMap2::diag(t.exp(), (-t).exp())).mul(&LinearMap2::rotation(beta))
}

fn norms() -> impl Strategy<Value = Norm2> {
    prop_oneof![
        (any::<u64>(), 2usize..9).prop_map(|(s, k)| Norm2::Polygon(polygon(s, k))),
        (1.05f64..6.0).prop_map(Norm2::lp),
        (0.3f64..3.0, -0.5f64..0.5, 0.3f64..3.0)
            .prop_filter("positive definite", |(a, b, c)| a * c - b * b > 0.05)
            .prop_map(|(a, b, c)| Norm2::ellipse(a, b, c)),
    ]
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn polar_is_an_involution(seed in any::<u64>(), k in 2usize..10) {
        let p = polygon(seed, k);
        let pp = p.polar().polar();
        for (a, b) in p.vertices().iter().zip(pp.vertices()) {
            prop_assert!((*a - *b).norm() < 1e-9);
        }
    }

    #[test]
    fn classical_jacobians_are_sl2_invariant(n in norms(), a in 0.0f64..6.3, t in -1.0f64..1.0, b in 0.0f64..6.3) {
        let m = n.compose(&sl2(a, t, b));
        for area in AreaDef::CLASSICAL {
            let (x, y) = (jacobian(&area, &n).unwrap(), jacobian(&area, &m).unwrap());
            prop_assert!((x - y).abs() <= 1e-6 * x.max(1.0), "{area:?}: {x} vs {y}");
        }
    }

    #[test]
    fn classical_jacobians_are_2_homogeneous(n in norms(), l in 0.2f64..5.0) {
        for area in AreaDef::CLASSICAL {
            let x = jacobian(&area, &n).unwrap();
            let y = jacobian(&area, &n.scaled(l)).unwrap();
            prop_assert!((y - l * l * x).abs() <= 1e-9 * y.max(1.0));
        }
    }

    #[test]
    fn jacobians_lie_between_half_and_full_inscribed(n in norms()) {
        let ji = jacobian(&AreaDef::InscribedRiemannian, &n).unwrap();
        for area in AreaDef::CLASSICAL {
            let j = jacobian(&area, &n).unwrap();
            prop_assert!(j <= ji * (1.0 + 1e-9) && j >= 0.5 * ji - 1e-9, "{area:?}: {j} vs {ji}");
        }
    }

    #[test]
    fn jacobians_and_energies_are_monotone(seed in any::<u64>(), k in 2usize..8, push in 1.01f64..1.5) {
        // enlarging the ball lowers the seminorm
        let small = polygon(seed, k);
        let mut pts: Vec<Vec2> = small.vertices().to_vec();
        let extra = small.vertices()[0].scale(push);
        pts.push(extra);
        pts.push(-extra);
        let big = Polygon::hull(&pts).unwrap();
        let (ns, nb) = (Norm2::Polygon(small), Norm2::Polygon(big));
        for area in AreaDef::CLASSICAL {
            prop_assert!(jacobian(&area, &ns).unwrap() >= jacobian(&area, &nb).unwrap() - 1e-9);
        }
        for e in [EnergyDef::KorevaarSchoen, EnergyDef::Reshetnyak] {
            prop_assert!(energy(&e, &ns).unwrap() >= energy(&e, &nb).unwrap() - 1e-9);
        }
    }

    #[test]
    fn energies_are_so2_invariant_and_homogeneous(n in norms(), th in 0.0f64..6.3, l in 0.2f64..5.0) {
        for e in [EnergyDef::KorevaarSchoen, EnergyDef::Reshetnyak] {
            let x = energy(&e, &n).unwrap();
            let r = energy(&e, &n.compose(&LinearMap2::rotation(th))).unwrap();
            prop_assert!((x - r).abs() <= 1e-8 * x.max(1.0), "{e:?} rotation: {x} vs {r}");
            let h = energy(&e, &n.scaled(l)).unwrap();
            prop_assert!((h - l * l * x).abs() <= 1e-10 * h.max(1.0));
        }
    }

    #[test]
    fn dirichlet_is_comparable_to_reshetnyak(n in norms()) {
        // I₊² ≤ I² ≤ 2 I₊², since s dominates |⟨y, ·⟩| for its largest dual vertex y
        let i = energy(&EnergyDef::KorevaarSchoen, &n).unwrap();
        let r = reshetnyak(&n.shape());
        prop_assert!(r <= i * (1.0 + 1e-9) && i <= 2.0 * r * (1.0 + 1e-9), "{i} {r}");
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn induced_jacobian_axioms(seed in any::<u64>(), k in 2usize..7, a in 0.0f64..6.3, t in -0.8f64..0.8, l in 0.3f64..3.0) {
        let n = Norm2::Polygon(polygon(seed, k));
        for e in [EnergyDef::KorevaarSchoen, EnergyDef::Reshetnyak] {
            let ind = InducedArea::new(e.clone()).unwrap();
            let j = ind.jacobian(&n).unwrap();
            let jt = ind.jacobian(&n.compose(&sl2(a, t, 0.3))).unwrap();
            prop_assert!((j - jt).abs() <= 2e-4 * j, "{e:?} SL2: {j} vs {jt}");
            let js = ind.jacobian(&n.scaled(l)).unwrap();
            prop_assert!((js - l * l * j).abs() <= 1e-8 * js.max(1.0));
            let own = energy(&e, &n).unwrap();
            prop_assert!(j <= ind.lambda() * own + 1e-9);
        }
    }

    #[test]
    fn induced_area_ignores_energy_scale(seed in any::<u64>(), k in 2usize..7, c in 0.2f64..5.0) {
        let n = Norm2::Polygon(polygon(seed, k));
        let base = InducedArea::new(EnergyDef::KorevaarSchoen).unwrap();
        let scaled = InducedArea::new(EnergyDef::KorevaarSchoen.scaled(c).unwrap()).unwrap();
        let (x, y) = (base.jacobian(&n).unwrap(), scaled.jacobian(&n).unwrap());
        prop_assert!((x - y).abs() <= 1e-9 * x.max(1.0), "{x} vs {y}");
    }

    #[test]
    fn orbit_minimizer_is_canonical(seed in any::<u64>(), k in 2usize..7) {
        let n = Norm2::Polygon(polygon(seed, k));
        let e = EnergyDef::KorevaarSchoen;
        let first = orbit_minimize(&e, &n, 64).unwrap();
        prop_assert!((first.minimizer.det() - 1.0).abs() <= 1e-10);
        prop_assert!(first.value <= energy(&e, &n).unwrap() + 1e-12);
        let again = orbit_minimize(&e, &first.minimal_norm, 64).unwrap();
        prop_assert!((again.value - first.value).abs() <= 1e-8);
        prop_assert!(again.minimizer.max_abs_diff(&LinearMap2::IDENTITY) <= 1e-4);
    }
}
