use num_rational::BigRational;
use num_traits::Zero;
use pglcones::cycles::{
    boundary_class, boundary_classes, canonical_class, curve_cone, decompose, dual_cone,
    nef_cone, pair, relation_class, ConeBasis, CurveClass, DivisorClass, SimplicialCone,
};
use pglcones::embedding::Embedding;
use pglcones::linalg;
use pglcones::projline::{Field, P1Point, Scalar};
use pglcones::torus::curve_point;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Degree of the projection `zᵢ` restricted to `Cⱼ`: the number of points of
/// `Cⱼ(F_p)` mapped to 0, counted by walking the parametrization `y ↦ (∞,…,y,…,∞)`.
fn projection_degree(r: usize, i: usize, j: usize) -> i64 {
    let field = Field::Prime(7);
    let mut ys: Vec<P1Point> = (0..7).map(|v| P1Point::finite(Scalar::from_i64_in(v, field))).collect();
    ys.push(P1Point::infinity(field));
    ys.into_iter()
        .filter(|y| curve_point(r, j, y.clone()).unwrap().coords()[i - 1].is_zero())
        .count() as i64
}

#[test]
fn pairing_matches_projection_degrees() {
    for r in 3..=6 {
        for i in 1..=r {
            for j in 1..=r {
                let d = DivisorClass::basis(r, i).unwrap();
                let c = CurveClass::basis(r, j).unwrap();
                assert_eq!(pair(&d, &c).unwrap(), q(projection_degree(r, i, j), 1));
            }
        }
    }
}

#[test]
fn boundary_classes_match_closed_form() {
    for r in 3..=8 {
        let third = q(1, r as i64 - 2);
        for i in 1..=r {
            let expected: Vec<BigRational> = (1..=r)
                .map(|k| if k == i { &third - q(1, 1) } else { third.clone() })
                .collect();
            assert_eq!(boundary_class(r, i).unwrap().coefficients(), expected.as_slice());
        }
    }
}

#[test]
fn r3_boundary_is_kunneth_class_of_a_diagonal() {
    // ∂₁X = {(y, x, x)} is pr₂₃⁻¹(Δ) and Δ ⊂ ℙ¹×ℙ¹ has class pt×ℙ¹ + ℙ¹×pt
    assert_eq!(boundary_class(3, 1).unwrap(), DivisorClass::from_ints(&[0, 1, 1]));
    assert_eq!(boundary_class(3, 2).unwrap(), DivisorClass::from_ints(&[1, 0, 1]));
    assert_eq!(boundary_class(3, 3).unwrap(), DivisorClass::from_ints(&[1, 1, 0]));
}

#[test]
fn relations_are_numerically_trivial() {
    for r in 3..=8 {
        for i in 1..=r {
            for j in i + 1..=r {
                let rel = relation_class(r, i, j).unwrap();
                for l in 1..=r {
                    assert!(pair(&rel, &CurveClass::basis(r, l).unwrap()).unwrap().is_zero());
                }
            }
        }
        let sum = boundary_classes(r)
            .unwrap()
            .iter()
            .fold(DivisorClass::zero(r), |acc, b| acc.add(b).unwrap());
        let expected = DivisorClass::new(vec![q(2, r as i64 - 2); r]);
        assert_eq!(sum, expected);
        assert_eq!(canonical_class(r).unwrap(), expected.neg());
        assert_eq!(canonical_class(r).unwrap().scale_int(2 - r as i64), DivisorClass::new(vec![q(2, 1); r]));
    }
}

#[test]
fn nef_and_curve_cones() {
    for r in 3..=8 {
        let nef = nef_cone(r).unwrap();
        let dual = dual_cone(&curve_cone(r).unwrap()).unwrap();
        assert_eq!(dual, nef);
        assert_eq!(dual.basis(), ConeBasis::Divisor);
        let x = Embedding::standard(r).unwrap();
        assert_eq!(x.r(), nef.n());
    }
}

fn random_cone(rng: &mut StdRng) -> SimplicialCone {
    loop {
        let n = rng.gen_range(1..=6);
        let gens: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        if let Ok(k) = SimplicialCone::from_ints(&gens) {
            return k;
        }
    }
}

#[test]
fn dual_cone_is_an_involution() {
    let mut rng = StdRng::seed_from_u64(31);
    for _ in 0..100 {
        let k = random_cone(&mut rng);
        let dd = dual_cone(&dual_cone(&k).unwrap()).unwrap();
        assert_eq!(dd.generators(), k.canonicalize().generators());
        // ⟨wⱼ, vᵢ⟩ is zero off the diagonal and positive on it
        let d = dual_cone(&k).unwrap();
        let ip = linalg::mat_mul(&k.generators().to_vec(), &linalg::transpose(&d.generators().to_vec()));
        for row in &ip {
            assert_eq!(row.iter().filter(|x| !x.is_zero()).count(), 1);
            assert!(row.iter().all(|x| x >= &BigRational::zero()));
        }
    }
}

fn small_vec(n: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec((-9i64..=9, 1i64..=4).prop_map(|(a, b)| q(a, b)), n)
}

proptest! {
    #[test]
    fn decompose_reconstructs(seed in any::<u64>(), v in small_vec(6)) {
        let mut rng = StdRng::seed_from_u64(seed);
        let k = random_cone(&mut rng);
        let v = &v[..k.n()];
        let d = decompose(&k, v).unwrap();
        let cols = linalg::transpose(&k.generators().to_vec());
        prop_assert_eq!(linalg::mat_vec(&cols, &d.coefficients), v.to_vec());
        prop_assert_eq!(d.inside, d.coefficients.iter().all(|c| c >= &BigRational::zero()));
    }

    #[test]
    fn nef_is_closed_under_addition(a in small_vec(5), b in small_vec(5)) {
        let (d, e) = (DivisorClass::new(a), DivisorClass::new(b));
        if d.is_ample() {
            prop_assert!(d.is_nef());
        }
        if d.is_nef() && e.is_nef() {
            prop_assert!(d.add(&e).unwrap().is_nef());
        }
    }

    #[test]
    fn nef_means_nonnegative_on_curve_cone(a in small_vec(4)) {
        let d = DivisorClass::new(a);
        let curves = curve_cone(4).unwrap();
        let on_generators = curves
            .generators()
            .iter()
            .all(|g| pair(&d, &CurveClass::new(g.clone())).unwrap() >= BigRational::zero());
        prop_assert_eq!(d.is_nef(), on_generators);
    }
}

#[test]
fn class_and_cone_json() {
    let b = boundary_class(4, 1).unwrap();
    let text = serde_json::to_string(&b).unwrap();
    assert_eq!(text, r#"["-1/2","1/2","1/2","1/2"]"#);
    assert_eq!(serde_json::from_str::<DivisorClass>(&text).unwrap(), b);

    let k = SimplicialCone::from_ints(&[vec![1, 1], vec![1, -1]]).unwrap();
    let text = serde_json::to_string(&k).unwrap();
    assert_eq!(text, r#"{"n":2,"generators":[["1","-1"],["1","1"]]}"#);
    assert_eq!(serde_json::from_str::<SimplicialCone>(&text).unwrap(), k);
}
