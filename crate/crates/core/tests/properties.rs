use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pressurelab::balls::{avg_contains, bowen_contains, mistake_contains};
use pressurelab::oracles::{transfer_pressure, word_count_pressure};
use pressurelab::pressure_cover::{
    enumerate_substitutions, mistake_string_contains, stirling_gamma, string_contains, string_trace_set,
};
use pressurelab::sampling::random_point;
use pressurelab::{
    BallKind, CoverQuery, CylinderCover, MistakeFamily, MistakeFunction, Point, Potential, PressureQuery, SftSystem,
    StringU, Strategy as Strat, TraceSet, ZSet,
};

fn full3() -> SftSystem {
    SftSystem::full_shift(3, 0.5).unwrap()
}

fn point3() -> impl Strategy<Value = Point> {
    (
        prop::collection::vec(0u8..3, 0..6),
        prop::collection::vec(0u8..3, 1..6),
    )
        .prop_map(|(pre, per)| Point::new(&full3(), pre, per).unwrap())
}

fn golden_point(seed: u64) -> Point {
    let g = SftSystem::golden_mean(0.5).unwrap();
    random_point(&g, &mut ChaCha8Rng::seed_from_u64(seed), 6, 6).unwrap()
}

fn family() -> impl Strategy<Value = MistakeFunction> {
    prop_oneof![
        Just(MistakeFamily::Zero),
        (0.0f64..5.0).prop_map(MistakeFamily::Constant),
        Just(MistakeFamily::Linear),
        (0.0f64..3.0).prop_map(MistakeFamily::Logarithmic),
    ]
    .prop_flat_map(|f| (Just(f), 0.05f64..1.0))
    .prop_map(|(f, e0)| MistakeFunction::new(f, e0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ultrametric(x in point3(), y in point3(), z in point3()) {
        let s = full3();
        prop_assert!(x.distance(&s, &z) <= x.distance(&s, &y).max(y.distance(&s, &z)));
    }

    #[test]
    fn shift_expands_at_most_by_inverse_theta(x in point3(), y in point3()) {
        let s = full3();
        prop_assert!(x.shift(1).distance(&s, &y.shift(1)) <= x.distance(&s, &y) / s.theta() + 1e-15);
    }

    #[test]
    fn birkhoff_cocycle(x in point3(), n in 0usize..12, m in 0usize..12, vals in prop::collection::vec(-3.0f64..3.0, 9)) {
        let s = full3();
        let lc = Potential::locally_constant(&s, 2, vals.clone()).unwrap();
        let lhs = lc.birkhoff_sum(&s, &x, n + m);
        let rhs = lc.birkhoff_sum(&s, &x, n) + lc.birkhoff_sum(&s, &x.shift(n), m);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        let geo = Potential::geometric(&s, 0.4, vals[..3].to_vec()).unwrap();
        let lhs = geo.birkhoff_sum(&s, &x, n + m);
        let rhs = geo.birkhoff_sum(&s, &x, n) + geo.birkhoff_sum(&s, &x.shift(n), m);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn budget_monotone_clamped_and_linear_density(g in family(), n in 1u64..2000, eps in 0.001f64..2.0) {
        prop_assert!(g.budget(n, eps) <= g.budget(n + 1, eps));
        if eps >= g.epsilon0() {
            prop_assert_eq!(g.budget(n, eps), g.budget(n, g.epsilon0()));
        }
        if g.family() == MistakeFamily::Linear {
            prop_assert!(g.budget(n, eps) as f64 / n as f64 <= eps.min(g.epsilon0()));
        }
    }

    #[test]
    fn ball_nesting(x in point3(), y in point3(), n in 1usize..20, k in 0i32..6, c1 in 0.0f64..4.0, extra in 0.0f64..4.0) {
        let s = full3();
        let eps = s.theta().powi(k);
        let wider = eps * 1.7;
        let small = MistakeFunction::new(MistakeFamily::Constant(c1), 1.0).unwrap();
        let large = MistakeFunction::new(MistakeFamily::Constant(c1 + extra), 1.0).unwrap();
        if mistake_contains(&s, &small, &x, &y, n, eps) {
            prop_assert!(mistake_contains(&s, &large, &x, &y, n, eps));
            prop_assert!(mistake_contains(&s, &small, &x, &y, n, wider));
        }
        if bowen_contains(&s, &x, &y, n, eps) {
            prop_assert!(bowen_contains(&s, &x, &y, n, wider));
            prop_assert!(mistake_contains(&s, &MistakeFunction::zero(), &x, &y, n, eps));
        }
        if avg_contains(&s, &x, &y, n, eps) {
            prop_assert!(avg_contains(&s, &x, &y, n, wider));
        }
    }

    #[test]
    fn trace_sets_and_mistake_strings(x in point3(), y in point3(), m in 1usize..7, level in 1u32..3, b in 0usize..3) {
        let s = full3();
        let cover = CylinderCover::new(level).unwrap();
        let u = StringU::itinerary(&x, cover, m);
        // the merged cylinder's witness visits every entry
        match string_trace_set(&s, &u) {
            TraceSet::Cylinder(w) => {
                let p = ZSet::WholeSpace.witness(&s, &w).unwrap();
                prop_assert!(string_contains(&u, &p));
            }
            TraceSet::Empty => prop_assert!(false, "itinerary strings are nonempty"),
        }
        // X(g;U) is the union of X(U*) over strings within the budget
        let g = MistakeFunction::new(MistakeFamily::Constant(b as f64), 1.0).unwrap();
        let subs = enumerate_substitutions(&u, &cover.elements(&s), b).unwrap();
        let via_union = subs.iter().any(|v| string_contains(v, &y));
        prop_assert_eq!(mistake_string_contains(&s, &g, &u, &y), via_union);
    }

    #[test]
    fn shift_identity_and_monotone_in_s(c in -2.0f64..2.0, s0 in -0.5f64..1.5, seed in 0u64..1000) {
        let sys = SftSystem::golden_mean(0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vals: Vec<f64> = (0..2).map(|_| rand::Rng::gen_range(&mut rng, -1.0..1.0)).collect();
        let phi = Potential::first_symbol(&sys, vals).unwrap();
        let shifted = phi.add_constant(c);
        let z = ZSet::WholeSpace;
        let g = MistakeFunction::linear();
        let q = PressureQuery::new(&sys, &z, &phi, BallKind::Mistake).with_mistake(&g);
        let qc = PressureQuery::new(&sys, &z, &shifted, BallKind::Mistake).with_mistake(&g);
        let a = q.m_estimate(s0, 7, 0.25, Strat::Greedy).unwrap().value;
        let b = qc.m_estimate(s0 + c, 7, 0.25, Strat::Greedy).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-12 * a);
        let a2 = q.m_estimate(s0 + 0.01, 7, 0.25, Strat::Greedy).unwrap().value;
        prop_assert!(a2 < a);
    }
}

#[test]
fn golden_points_are_admissible_and_ultrametric() {
    let g = SftSystem::golden_mean(0.5).unwrap();
    for seed in 0..200 {
        let (x, y, z) = (golden_point(seed), golden_point(seed + 1000), golden_point(seed + 2000));
        assert!(g.is_admissible(&x.prefix(30)));
        assert!(x.distance(&g, &z) <= x.distance(&g, &y).max(y.distance(&g, &z)));
    }
}

#[test]
fn word_counts_match_matrix_powers() {
    let t = vec![
        vec![true, true, false],
        vec![false, true, true],
        vec![true, false, true],
    ];
    let sys = SftSystem::new(t.clone(), 0.5).unwrap();
    let mut v = vec![1u128; 3];
    for n in 1..=14 {
        assert_eq!(sys.enumerate_words(n).len() as u128, v.iter().sum::<u128>(), "n = {n}");
        v = (0..3).map(|i| (0..3).filter(|&j| t[i][j]).map(|j| v[j]).sum()).collect();
    }
}

#[test]
fn modulus_monotone_and_vanishing() {
    let s = full3();
    let table: Vec<f64> = (0..27).map(|i| ((i * 7) % 11) as f64).collect();
    let lc = Potential::locally_constant(&s, 3, table).unwrap();
    let geo = Potential::geometric(&s, 0.6, vec![0.0, 2.0, -1.0]).unwrap();
    for phi in [&lc, &geo] {
        let vals: Vec<f64> = (0..30).map(|l| phi.modulus_of_continuity(&s, s.radius(l))).collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0]), "{vals:?}");
        assert!(vals[29] < 1e-5);
    }
    assert_eq!(lc.modulus_of_continuity(&s, s.radius(2)), 0.0);
}

#[test]
fn z_monotonicity_under_uniform() {
    let sys = SftSystem::full_shift(2, 0.5).unwrap();
    let phi = Potential::first_symbol(&sys, vec![0.3, -0.2]).unwrap();
    let small = ZSet::CylinderUnion { words: vec![vec![0, 1]] };
    let mid = ZSet::CylinderUnion { words: vec![vec![0, 1], vec![1, 1, 0]] };
    let whole = ZSet::WholeSpace;
    let crit = |z: &ZSet| {
        PressureQuery::new(&sys, z, &phi, BallKind::Bowen)
            .critical_value(10, 0.25, Strat::Uniform)
            .unwrap()
            .value
    };
    let (a, b, c) = (crit(&small), crit(&mid), crit(&whole));
    assert!(a <= b + 1e-9 && b <= c + 1e-9, "{a} {b} {c}");
    let sub = ZSet::SubSft { transitions: vec![vec![true, true], vec![true, false]] };
    assert!(crit(&sub) <= c + 1e-9);
}

#[test]
fn estimator_consistency_and_bracket() {
    let full = SftSystem::full_shift(2, 0.5).unwrap();
    let golden = SftSystem::golden_mean(0.5).unwrap();
    let cases = [
        (golden.clone(), Potential::zero(&golden)),
        (full.clone(), Potential::first_symbol(&full, vec![0.0, 1.0]).unwrap()),
        (full.clone(), Potential::locally_constant(&full, 2, vec![0.0, 0.5, -0.3, 1.0]).unwrap()),
    ];
    for (sys, phi) in cases {
        let t = transfer_pressure(&sys, &phi).unwrap();
        assert!(t.lower <= t.value && t.value <= t.upper && t.upper - t.lower <= 1e-10);
        let errs: Vec<f64> = [8, 12, 16]
            .iter()
            .map(|&n| (word_count_pressure(&sys, &ZSet::WholeSpace, &phi, n).unwrap() - t.value).abs())
            .collect();
        assert!(errs.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{errs:?}");
    }
}

#[test]
fn sandwich_between_string_pressures() {
    let sys = SftSystem::golden_mean(0.5).unwrap();
    let g = MistakeFunction::linear();
    let z = ZSet::WholeSpace;
    for phi in [Potential::zero(&sys), Potential::first_symbol(&sys, vec![0.2, -0.4]).unwrap()] {
        for (level, n) in [(1u32, 8usize), (2, 10), (3, 12)] {
            let plain = CoverQuery::new(&sys, &z, &phi);
            let with_g = plain.with_mistake(&g);
            let p = plain.critical_value(n, level, Strat::Greedy).unwrap().value;
            let pg = with_g.critical_value(n, level, Strat::Greedy).unwrap().value;
            let cover = CylinderCover::new(level).unwrap();
            let budget = g.budget(n as u64, cover.diameter(&sys));
            let gamma = stirling_gamma(n as u64, budget, sys.count_words(level as usize) as u64).unwrap();
            let corr = with_g.correction(n, cover) / n as f64;
            assert!(pg <= p + corr + 1e-9, "L={level}: {pg} > {p}");
            assert!(p <= pg + gamma + corr + 1e-9, "L={level}: {p} > {pg} + {gamma}");
        }
    }
}

#[test]
fn oracle_dominance_on_feasible_instances() {
    let sys = SftSystem::golden_mean(0.5).unwrap();
    let phi = Potential::first_symbol(&sys, vec![0.0, 0.8]).unwrap();
    let z = ZSet::WholeSpace;
    let g = MistakeFunction::new(MistakeFamily::Constant(1.0), 1.0).unwrap();
    for kind in [BallKind::Bowen, BallKind::Mistake, BallKind::Average] {
        for span in [0, 1, 2] {
            let q = PressureQuery::new(&sys, &z, &phi, kind).with_mistake(&g).with_span(span);
            for s in [0.0, 0.4, 0.9] {
                let ex = q.m_estimate(s, 5, 0.5, Strat::Exhaustive).unwrap().value;
                for st in [Strat::Uniform, Strat::Greedy] {
                    assert!(q.m_estimate(s, 5, 0.5, st).unwrap().value >= ex * (1.0 - 1e-12));
                }
            }
        }
    }
}
