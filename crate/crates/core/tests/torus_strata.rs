use pglcones::embedding::{contains, Embedding};
use pglcones::projline::{Field, Moebius, P1Point, Scalar};
use pglcones::torus::{
    curve_point, fixed_points, limit, stratum_of, stratum_point_count, strata_summary, Direction,
    FixedPointLabel, OneParamWeight, PointTuple, StratumTag,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn coord() -> impl Strategy<Value = P1Point> {
    prop_oneof![
        1 => Just(P1Point::infinity(Field::Rationals)),
        1 => Just(P1Point::int(0)),
        4 => (-9i64..=9).prop_map(P1Point::int),
    ]
}

fn tuple() -> impl Strategy<Value = PointTuple> {
    prop::collection::vec(coord(), 3..=7).prop_map(|c| PointTuple::new(c).unwrap())
}

fn weight() -> impl Strategy<Value = OneParamWeight> {
    prop_oneof![(1i64..=3), (-3i64..=-1)].prop_map(|k| OneParamWeight::new(k).unwrap())
}

fn direction() -> impl Strategy<Value = Direction> {
    prop_oneof![Just(Direction::Positive), Just(Direction::Negative)]
}

proptest! {
    #[test]
    fn limit_is_idempotent(w in weight(), q in tuple(), d in direction()) {
        let once = limit(w, &q, d);
        prop_assert_eq!(limit(w, &once, d), once);
    }

    #[test]
    fn limits_differ_off_the_fixed_locus(q in tuple()) {
        let w = OneParamWeight::LAMBDA;
        let fixed = q.coords().iter().all(|c| c.is_zero() || c.is_infinity());
        let (a, b) = (limit(w, &q, Direction::Positive), limit(w, &q, Direction::Negative));
        prop_assert_eq!(a == b, fixed);
    }
}

fn random_moebius(rng: &mut StdRng) -> Moebius {
    loop {
        let e: Vec<i64> = (0..4).map(|_| rng.gen_range(-5..=5)).collect();
        if e[0] * e[3] - e[1] * e[2] != 0 {
            return Moebius::from_ints(e[0], e[1], e[2], e[3]).unwrap();
        }
    }
}

#[test]
fn fixed_points_are_fixed_both_ways() {
    for r in 3..=7 {
        let x = Embedding::standard(r).unwrap();
        let fp = fixed_points(&x).unwrap();
        assert_eq!(fp.len(), if r == 3 { 8 } else { 2 * r + 2 });
        for (label, q) in &fp {
            for d in [Direction::Positive, Direction::Negative] {
                assert_eq!(&limit(OneParamWeight::LAMBDA, q, d), q);
            }
            assert_eq!(FixedPointLabel::classify(q), Some(*label));
        }
    }
}

#[test]
fn fixed_points_match_brute_force_filter() {
    // filter {0,∞}^r through the orbit/boundary definition written out directly
    for r in 4..=6 {
        let x = Embedding::standard(r).unwrap();
        let mut expected = 0;
        for mask in 0u32..(1 << r) {
            let infs = mask.count_ones() as usize;
            // all-but-one equal, or all equal; no orbit point has repeated entries
            if infs <= 1 || infs >= r - 1 {
                expected += 1;
            }
        }
        assert_eq!(fixed_points(&x).unwrap().len(), expected);
    }
}

#[test]
fn generic_orbit_points_flow_to_source_and_sink() {
    let mut rng = StdRng::seed_from_u64(23);
    let x = Embedding::parse("inf,0,1,2,3").unwrap();
    let mut generic = 0;
    while generic < 1000 {
        let g = random_moebius(&mut rng);
        let q: Vec<P1Point> = x.points().iter().map(|p| g.apply(p).unwrap()).collect();
        if q.iter().any(|c| c.is_zero() || c.is_infinity()) {
            continue;
        }
        generic += 1;
        let q = PointTuple::new(q).unwrap();
        let neg = stratum_of(&x, &q, Direction::Negative).unwrap();
        let pos = stratum_of(&x, &q, Direction::Positive).unwrap();
        assert_eq!((neg.label, neg.tag), (FixedPointLabel::Sink, StratumTag::Open));
        assert_eq!((pos.label, pos.tag), (FixedPointLabel::Source, StratumTag::Open));
    }
}

#[test]
fn curve_and_divisor_strata() {
    let mut rng = StdRng::seed_from_u64(29);
    let x = Embedding::parse("inf,0,1,2").unwrap();
    for i in 1..=4 {
        for _ in 0..100 {
            let y = P1Point::finite(Scalar::ratio(rng.gen_range(-50..=50), rng.gen_range(1..=9)).unwrap());
            let q = curve_point(4, i, y).unwrap();
            let d = stratum_of(&x, &q, Direction::Positive).unwrap();
            assert_eq!((d.label, d.tag, d.dimension), (FixedPointLabel::B(i), StratumTag::Curve(i), 1));
        }
    }
    // points of Dᵢ: orbit points with qᵢ = 0 and all other coordinates nonzero
    let mut seen = [0; 4];
    while seen.iter().any(|&n| n < 50) {
        let g = random_moebius(&mut rng);
        let q: Vec<P1Point> = x.points().iter().map(|p| g.apply(p).unwrap()).collect();
        let Some(i) = q.iter().position(P1Point::is_zero) else { continue };
        let q = PointTuple::new(q).unwrap();
        let d = stratum_of(&x, &q, Direction::Negative).unwrap();
        assert_eq!((d.label, d.tag, d.dimension), (FixedPointLabel::B(i + 1), StratumTag::Divisor(i + 1), 2));
        seen[i] += 1;
    }
}

#[test]
fn closed_form_dimensions_match_point_counts() {
    // #stratum(F_q) = q^dim for the closed-form strata of X(∞,0,1,2) at q = 7
    let x = Embedding::parse("inf,0,1,2").unwrap();
    let q = 7u32;
    for row in strata_summary(&x).unwrap() {
        for d in [row.positive, row.negative] {
            if matches!(d.tag, StratumTag::Open) {
                continue;
            }
            let n = stratum_point_count(&x, d.label, d.direction, q).unwrap();
            assert_eq!(n, (q as u64).pow(d.dimension), "{} {}", d.label, d.direction);
        }
    }
    // the open strata have q³ − O(q²) points
    let n = stratum_point_count(&x, FixedPointLabel::Sink, Direction::Negative, q).unwrap();
    assert!(n > 7 * 7 * 7 / 2 && n <= 7 * 7 * 7 + 3 * 49);
}

#[test]
fn summary_rows() {
    let x = Embedding::parse("inf,0,1,2").unwrap();
    let rows = strata_summary(&x).unwrap();
    let b1 = rows.iter().find(|r| r.label == FixedPointLabel::B(1)).unwrap();
    assert_eq!((b1.positive.dimension, b1.negative.dimension), (1, 2));
    let x3 = Embedding::parse("inf,0,1").unwrap();
    let src = strata_summary(&x3).unwrap().into_iter().find(|r| r.label == FixedPointLabel::Source).unwrap();
    assert_eq!((src.positive.dimension, src.negative.dimension), (3, 0));
    for r in 3..=5 {
        for row in strata_summary(&Embedding::standard(r).unwrap()).unwrap() {
            assert!(row.satisfies_inequality());
            assert_eq!(row.positive.dimension + row.negative.dimension, 3);
        }
    }
    let table = pglcones::torus::strata_table(&rows);
    let json = serde_json::to_value(&table).unwrap();
    assert_eq!(json[0]["label"], "source");
    assert_eq!(json[0]["direction"], "positive");
    assert_eq!(json[0]["description"], "open");
    assert_eq!(json[0]["dimension"], 3);
}

#[test]
fn stratum_of_rejects_outside_points() {
    let x = Embedding::parse("inf,0,1,2").unwrap();
    let q = PointTuple::parse("5,inf,0,3").unwrap();
    assert!(!contains(&x, q.coords()).unwrap());
    assert!(stratum_of(&x, &q, Direction::Negative).is_err());
}
