use hyperfoil::fields::identities::{sample_points, SampleRegion};
use hyperfoil::fields::{
    test_family, FieldOperator, Gaussian, MultiIndex, Polynomial, ScalarField,
};
use hyperfoil::SpacetimePoint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn points(region: SampleRegion, n: usize, seed: u64) -> Vec<SpacetimePoint> {
    sample_points(region, n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn shifted(p: &SpacetimePoint, var: usize, h: f64) -> SpacetimePoint {
    let mut q = *p;
    if var == 0 {
        q.t += h;
    } else {
        q.x[var - 1] += h;
    }
    q
}

/// Fourth-order central difference `∂_var g(p)`.
fn fd(g: &dyn Fn(&SpacetimePoint) -> f64, p: &SpacetimePoint, var: usize, h: f64) -> f64 {
    let at = |s: f64| g(&shifted(p, var, s * h));
    (-at(2.0) + 8.0 * at(1.0) - 8.0 * at(-1.0) + at(-2.0)) / (12.0 * h)
}

/// Second-order central difference, the oracle at `h = 1e-4`.
fn fd2(g: &dyn Fn(&SpacetimePoint) -> f64, p: &SpacetimePoint, var: usize, h: f64) -> f64 {
    (g(&shifted(p, var, h)) - g(&shifted(p, var, -h))) / (2.0 * h)
}

type Diff = fn(&dyn Fn(&SpacetimePoint) -> f64, &SpacetimePoint, usize, f64) -> f64;

/// The operator applied to `g` with derivatives from `d`.
fn oracle(
    op: FieldOperator,
    g: &dyn Fn(&SpacetimePoint) -> f64,
    p: &SpacetimePoint,
    d: Diff,
    h: f64,
) -> f64 {
    let r = p.r();
    match op {
        FieldOperator::Partial(a) => d(g, p, a as usize, h),
        FieldOperator::Boost(i) => {
            let i = i as usize;
            p.t * d(g, p, i, h) + p.x[i - 1] * d(g, p, 0, h)
        }
        FieldOperator::Tangent(i) => {
            let i = i as usize;
            (p.t * d(g, p, i, h) + p.x[i - 1] * d(g, p, 0, h)) / p.t
        }
        FieldOperator::ConeTangent(i) => {
            let i = i as usize;
            p.x[i - 1] / r * d(g, p, 0, h) + d(g, p, i, h)
        }
        FieldOperator::ConeWeighted(a) => (p.t - r) / r * d(g, p, a as usize, h),
    }
}

#[test]
fn boost_of_coordinates() {
    let t = ScalarField::polynomial(Polynomial::coordinate(0));
    let x1 = ScalarField::polynomial(Polynomial::coordinate(1));
    for p in points(SampleRegion::Slab, 20, 1) {
        let h1t = t.apply(FieldOperator::Boost(1)).unwrap().value(&p).unwrap();
        let h1x = x1
            .apply(FieldOperator::Boost(1))
            .unwrap()
            .value(&p)
            .unwrap();
        assert!((h1t - p.x[0]).abs() < 1e-14);
        assert!((h1x - p.t).abs() < 1e-14);
    }
}

#[test]
fn tangent_is_boost_over_t() {
    for (_, f) in test_family() {
        for p in points(SampleRegion::Slab, 30, 2) {
            for i in 1..=3 {
                let tan = f
                    .apply(FieldOperator::Tangent(i))
                    .unwrap()
                    .value(&p)
                    .unwrap();
                let boost = f.apply(FieldOperator::Boost(i)).unwrap().value(&p).unwrap();
                assert!((tan - boost / p.t).abs() < 1e-13 * (1.0 + tan.abs()));
            }
        }
    }
}

#[test]
fn empty_word_is_identity() {
    for (_, f) in test_family() {
        let g = f.apply_multi(&MultiIndex::empty()).unwrap();
        for p in points(SampleRegion::Slab, 10, 3) {
            assert_eq!(f.value(&p).unwrap(), g.value(&p).unwrap());
        }
    }
}

#[test]
fn boost_and_time_derivative_commutator() {
    let f = ScalarField::gaussian(Gaussian {
        amp: 1.0,
        a: 0.1,
        t0: 5.0,
        b: 0.08,
        x0: [0.5, -1.0, 0.3],
    });
    let h1 = FieldOperator::Boost(1);
    let d0 = FieldOperator::Partial(0);
    let a = f.apply_multi(&MultiIndex(vec![h1, d0])).unwrap();
    let b = f.apply_multi(&MultiIndex(vec![d0, h1])).unwrap();
    let d1 = f.apply(FieldOperator::Partial(1)).unwrap();
    for p in points(SampleRegion::Slab, 20, 4) {
        let lhs = a.value(&p).unwrap() - b.value(&p).unwrap();
        assert!((lhs + d1.value(&p).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn every_operator_matches_central_differences() {
    let h = 1e-4;
    for (name, f) in test_family() {
        for p in points(SampleRegion::Exterior, 15, 5) {
            let g = |q: &SpacetimePoint| f.value(q).unwrap();
            for op in FieldOperator::ALL {
                let exact = f.apply(op).unwrap().value(&p).unwrap();
                let approx = oracle(op, &g, &p, fd2, h);
                assert!(
                    (exact - approx).abs() < 1e-6 * (1.0 + exact.abs()),
                    "{name} {op} at {p:?}: {exact} vs {approx}"
                );
            }
        }
    }
}

#[test]
fn length_three_words_match_nested_differences() {
    let h = 1e-2;
    let words = [
        [
            FieldOperator::Boost(1),
            FieldOperator::Partial(0),
            FieldOperator::Boost(2),
        ],
        [
            FieldOperator::Tangent(3),
            FieldOperator::ConeTangent(1),
            FieldOperator::Partial(2),
        ],
        [
            FieldOperator::ConeWeighted(0),
            FieldOperator::Boost(3),
            FieldOperator::Boost(3),
        ],
    ];
    for (name, f) in test_family().into_iter().take(3) {
        for p in points(SampleRegion::Exterior, 4, 6) {
            for w in &words {
                let exact = f
                    .apply_multi(&MultiIndex(w.to_vec()))
                    .unwrap()
                    .value(&p)
                    .unwrap();
                let g0 = |q: &SpacetimePoint| f.value(q).unwrap();
                let g1 = |q: &SpacetimePoint| oracle(w[2], &g0, q, fd, h);
                let g2 = |q: &SpacetimePoint| oracle(w[1], &g1, q, fd, h);
                let approx = oracle(w[0], &g2, &p, fd, h);
                assert!(
                    (exact - approx).abs() < 1e-6 * (1.0 + exact.abs()),
                    "{name} {w:?}: {exact} vs {approx}"
                );
            }
        }
    }
}

#[test]
fn budget_is_enforced() {
    let f = ScalarField::gaussian(Gaussian {
        amp: 1.0,
        a: 0.1,
        t0: 5.0,
        b: 0.1,
        x0: [0.0; 3],
    });
    let long = MultiIndex(vec![FieldOperator::Partial(0); f.budget() + 1]);
    assert!(f.apply_multi(&long).is_err());
    let p = SpacetimePoint::new(4.0, [1.0, 0.0, 0.0]);
    assert!(f.jet(&p, f.budget() + 1).is_err());
    assert!(f.apply(FieldOperator::Boost(4)).unwrap().value(&p).is_err());
}
