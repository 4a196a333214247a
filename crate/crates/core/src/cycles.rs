//! Divisor and curve classes on X(p) and simplicial cones over ℚ.
//!
//! Divisor classes are written in the basis `D₁,…,D_r` (pull-backs of 0
//! under the projections) and curve classes in the basis of the lines
//! `Cᵢ = ∞^{i−1} × ℙ¹ × ∞^{r−i}`. The pairing is `(Dᵢ·Cⱼ) = δᵢⱼ`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::embedding::check_index;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::projline::parse_rational;

fn ensure_r(r: usize) -> Result<()> {
    if r < 3 {
        Err(Error::TooFewPoints(r))
    } else {
        Ok(())
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn unit(r: usize, i: usize) -> Vec<BigRational> {
    (1..=r).map(|k| if k == i { rat(1) } else { rat(0) }).collect()
}

fn serialize_vector<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

fn deserialize_vector<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigRational>, D::Error> {
    Vec::<String>::deserialize(d)?
        .iter()
        .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
        .collect()
}

/// Parses a comma-separated rational vector such as `"1,-1/2,0"`.
pub fn parse_vector(s: &str) -> Result<Vec<BigRational>> {
    s.split(',').map(parse_rational).collect()
}

pub fn format_vector(v: &[BigRational]) -> String {
    let items: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", items.join(", "))
}

macro_rules! class_type {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Debug, Clone, PartialEq, Eq, Hash)]
        pub struct $name(Vec<BigRational>);

        impl $name {
            pub fn new(coefficients: Vec<BigRational>) -> Self {
                $name(coefficients)
            }

            pub fn from_ints(coefficients: &[i64]) -> Self {
                $name(coefficients.iter().map(|&c| rat(c)).collect())
            }

            /// The basis vector with index `i` (1-based).
            pub fn basis(r: usize, i: usize) -> Result<Self> {
                check_index(i, r)?;
                Ok($name(unit(r, i)))
            }

            pub fn zero(r: usize) -> Self {
                $name(vec![rat(0); r])
            }

            pub fn r(&self) -> usize {
                self.0.len()
            }

            pub fn coefficients(&self) -> &[BigRational] {
                &self.0
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                if self.r() != other.r() {
                    return Err(Error::LengthMismatch {
                        expected: self.r(),
                        found: other.r(),
                    });
                }
                Ok($name(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
            }

            pub fn scale(&self, c: &BigRational) -> Self {
                $name(self.0.iter().map(|a| a * c).collect())
            }

            pub fn neg(&self) -> Self {
                self.scale(&rat(-1))
            }

            pub fn scale_int(&self, c: i64) -> Self {
                self.scale(&rat(c))
            }

            /// Whether every coefficient is an integer.
            pub fn is_integral(&self) -> bool {
                self.0.iter().all(|c| c.is_integer())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&format_vector(&self.0))
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                serialize_vector(&self.0, s)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                deserialize_vector(d).map($name)
            }
        }
    };
}

class_type!(DivisorClass, "A ℚ-divisor class in the basis `D₁,…,D_r`.");
class_type!(CurveClass, "A one-cycle class in the basis `C₁,…,C_r`.");

impl DivisorClass {
    /// Nef: non-negative on every curve, i.e. all coefficients `≥ 0`.
    pub fn is_nef(&self) -> bool {
        self.0.iter().all(|c| !c.is_negative())
    }

    /// Ample: all coefficients `> 0`.
    pub fn is_ample(&self) -> bool {
        self.0.iter().all(|c| c.is_positive())
    }
}

impl CurveClass {
    /// In the cone of effective one-cycles: all coefficients `≥ 0`.
    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|c| !c.is_negative())
    }
}

pub fn is_nef(d: &DivisorClass) -> bool {
    d.is_nef()
}

pub fn is_ample(d: &DivisorClass) -> bool {
    d.is_ample()
}

pub fn is_effective_curve(c: &CurveClass) -> bool {
    c.is_effective()
}

/// The intersection number `D·C = Σ dᵢcᵢ`.
pub fn pair(d: &DivisorClass, c: &CurveClass) -> Result<BigRational> {
    if d.r() != c.r() {
        return Err(Error::LengthMismatch {
            expected: d.r(),
            found: c.r(),
        });
    }
    Ok(d.0.iter().zip(&c.0).map(|(a, b)| a * b).sum())
}

/// Classes of all boundary divisors `∂₁X,…,∂_rX`, solved from the
/// principal divisors `div(zᵢ − zⱼ) = −Dᵢ − Dⱼ + Σ_{k∉{i,j}} ∂ₖX`.
///
/// Each unordered pair `i < j` contributes the linear equation
/// `Σ_{k∉{i,j}} [∂ₖX] = Dᵢ + Dⱼ` in the unknown classes.
pub fn boundary_classes(r: usize) -> Result<Vec<DivisorClass>> {
    ensure_r(r)?;
    let mut lhs: Matrix = Vec::new();
    let mut rhs: Matrix = Vec::new();
    for i in 1..=r {
        for j in i + 1..=r {
            lhs.push((1..=r).map(|k| rat((k != i && k != j) as i64)).collect());
            rhs.push((1..=r).map(|k| rat((k == i || k == j) as i64)).collect());
        }
    }
    let solution = linalg::solve(&lhs, &rhs)?;
    Ok(solution.into_iter().map(DivisorClass).collect())
}

pub fn boundary_class(r: usize, i: usize) -> Result<DivisorClass> {
    check_index(i, r)?;
    Ok(boundary_classes(r)?.swap_remove(i - 1))
}

/// `K_X = −(∂₁X + ⋯ + ∂_rX)`.
pub fn canonical_class(r: usize) -> Result<DivisorClass> {
    let sum = boundary_classes(r)?
        .iter()
        .try_fold(DivisorClass::zero(r), |acc, b| acc.add(b))?;
    Ok(sum.neg())
}

/// The class of `div(zᵢ − zⱼ)`; numerically trivial.
pub fn relation_class(r: usize, i: usize, j: usize) -> Result<DivisorClass> {
    check_index(i, r)?;
    check_index(j, r)?;
    let bnd = boundary_classes(r)?;
    let mut out = DivisorClass::basis(r, i)?.add(&DivisorClass::basis(r, j)?)?.neg();
    for (k, b) in bnd.iter().enumerate() {
        if k + 1 != i && k + 1 != j {
            out = out.add(b)?;
        }
    }
    Ok(out)
}

/// The intersection matrix `(∂ᵢX · Cⱼ)`.
pub fn boundary_curve_matrix(r: usize) -> Result<Vec<Vec<BigRational>>> {
    boundary_classes(r)?
        .iter()
        .map(|b| {
            (1..=r)
                .map(|j| pair(b, &CurveClass::basis(r, j)?))
                .collect()
        })
        .collect()
}

/// Which space a cone's coordinates refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConeBasis {
    Standard,
    /// Divisor classes in the `D` basis.
    Divisor,
    /// Curve classes in the `C` basis.
    Curve,
}

impl ConeBasis {
    fn dual(self) -> ConeBasis {
        match self {
            ConeBasis::Standard => ConeBasis::Standard,
            ConeBasis::Divisor => ConeBasis::Curve,
            ConeBasis::Curve => ConeBasis::Divisor,
        }
    }
}

/// A full-dimensional cone in ℚⁿ spanned by `n` linearly independent generators.
///
/// Equality compares canonical forms; the basis tag is metadata.
#[derive(Debug, Clone)]
pub struct SimplicialCone {
    generators: Vec<Vec<BigRational>>,
    basis: ConeBasis,
}

/// Scales `v` by a positive rational to a primitive integer vector.
pub fn primitive(v: &[BigRational]) -> Vec<BigRational> {
    let lcm = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v.iter().map(|c| (c * &lcm).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if gcd.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|c| BigRational::from_integer(c / &gcd))
        .collect()
}

impl SimplicialCone {
    pub fn new(generators: Vec<Vec<BigRational>>, basis: ConeBasis) -> Result<Self> {
        let n = generators.len();
        if n == 0 {
            return Err(Error::RankDeficient { rank: 0, expected: 1 });
        }
        if let Some(g) = generators.iter().find(|g| g.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                found: g.len(),
            });
        }
        let rank = linalg::rank(&generators);
        if rank < n {
            return Err(Error::RankDeficient { rank, expected: n });
        }
        Ok(SimplicialCone { generators, basis })
    }

    pub fn from_ints(generators: &[Vec<i64>]) -> Result<Self> {
        SimplicialCone::new(
            generators
                .iter()
                .map(|g| g.iter().map(|&x| rat(x)).collect())
                .collect(),
            ConeBasis::Standard,
        )
    }

    /// `cone(e₁,…,e_n)`.
    pub fn orthant(n: usize, basis: ConeBasis) -> Self {
        SimplicialCone {
            generators: (1..=n).map(|i| unit(n, i)).collect(),
            basis,
        }
    }

    /// Parses generators written as `"1,1;1,-1"`.
    pub fn parse(s: &str) -> Result<Self> {
        let gens = s.split(';').map(parse_vector).collect::<Result<Vec<_>>>()?;
        SimplicialCone::new(gens, ConeBasis::Standard)
    }

    pub fn n(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Vec<BigRational>] {
        &self.generators
    }

    pub fn basis(&self) -> ConeBasis {
        self.basis
    }

    /// Primitive integer generators in lexicographic order.
    pub fn canonicalize(&self) -> SimplicialCone {
        let mut generators: Vec<Vec<BigRational>> =
            self.generators.iter().map(|g| primitive(g)).collect();
        generators.sort();
        SimplicialCone {
            generators,
            basis: self.basis,
        }
    }

    /// Matrix whose columns are the generators.
    fn column_matrix(&self) -> Matrix {
        linalg::transpose(&self.generators)
    }

    pub fn contains(&self, v: &[BigRational]) -> Result<bool> {
        Ok(decompose(self, v)?.inside)
    }
}

impl PartialEq for SimplicialCone {
    fn eq(&self, other: &Self) -> bool {
        self.canonicalize().generators == other.canonicalize().generators
    }
}

impl Eq for SimplicialCone {}

impl fmt::Display for SimplicialCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| format_vector(g)).collect();
        write!(f, "cone[{}]", gens.join(", "))
    }
}

/// JSON shape: `{ "n": int, "generators": [[string]] }` in canonical order.
#[derive(Serialize, Deserialize)]
struct ConeRecord {
    n: usize,
    generators: Vec<Vec<String>>,
}

impl Serialize for SimplicialCone {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let c = self.canonicalize();
        ConeRecord {
            n: c.n(),
            generators: c
                .generators
                .iter()
                .map(|g| g.iter().map(ToString::to_string).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimplicialCone {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = ConeRecord::deserialize(d)?;
        let gens = rec
            .generators
            .iter()
            .map(|g| g.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        if gens.len() != rec.n {
            return Err(serde::de::Error::custom("generator count differs from n"));
        }
        SimplicialCone::new(gens, ConeBasis::Standard).map_err(serde::de::Error::custom)
    }
}

/// The dual cone: generators `wⱼ` with `⟨wⱼ, vᵢ⟩ = δᵢⱼ`, i.e. the rows of the
/// inverse of the generator column matrix, canonicalized.
pub fn dual_cone(k: &SimplicialCone) -> Result<SimplicialCone> {
    let inv = linalg::inverse(&k.column_matrix())?;
    Ok(SimplicialCone {
        generators: inv,
        basis: k.basis.dual(),
    }
    .canonicalize())
}

/// Coefficients of `v` in the generators and whether they are all non-negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub coefficients: Vec<BigRational>,
    pub inside: bool,
}

pub fn decompose(k: &SimplicialCone, v: &[BigRational]) -> Result<Decomposition> {
    if v.len() != k.n() {
        return Err(Error::LengthMismatch {
            expected: k.n(),
            found: v.len(),
        });
    }
    let coefficients = linalg::solve_vec(&k.column_matrix(), v)?;
    let inside = coefficients.iter().all(|c| !c.is_negative());
    Ok(Decomposition {
        coefficients,
        inside,
    })
}

/// Nef cone of X(p): the orthant in the `D` basis.
pub fn nef_cone(r: usize) -> Result<SimplicialCone> {
    ensure_r(r)?;
    Ok(SimplicialCone::orthant(r, ConeBasis::Divisor))
}

/// Cone of effective one-cycles of X(p): the orthant in the `C` basis.
pub fn curve_cone(r: usize) -> Result<SimplicialCone> {
    ensure_r(r)?;
    Ok(SimplicialCone::orthant(r, ConeBasis::Curve))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn pairing_examples() {
        let d1 = DivisorClass::basis(4, 1).unwrap();
        assert_eq!(pair(&d1, &CurveClass::basis(4, 1).unwrap()).unwrap(), rat(1));
        assert_eq!(pair(&d1, &CurveClass::basis(4, 2).unwrap()).unwrap(), rat(0));
        let ones = DivisorClass::from_ints(&[1, 1, 1, 1]);
        for i in 1..=4 {
            assert_eq!(pair(&ones, &CurveClass::basis(4, i).unwrap()).unwrap(), rat(1));
        }
        assert!(pair(&ones, &CurveClass::basis(3, 1).unwrap()).is_err());
        assert!(DivisorClass::basis(3, 4).is_err());
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(boundary_class(3, 1).unwrap(), DivisorClass::from_ints(&[0, 1, 1]));
        assert_eq!(
            boundary_class(4, 1).unwrap(),
            DivisorClass::new(vec![q(-1, 2), q(1, 2), q(1, 2), q(1, 2)])
        );
        assert!(!boundary_class(4, 1).unwrap().is_nef());
        assert!(!boundary_class(4, 1).unwrap().is_integral());
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_class(3).unwrap(), DivisorClass::from_ints(&[-2, -2, -2]));
        assert_eq!(canonical_class(4).unwrap(), DivisorClass::from_ints(&[-1, -1, -1, -1]));
        assert!(canonical_class(4).unwrap().neg().is_ample());
        assert!(canonical_class(2).is_err());
    }

    #[test]
    fn positivity_examples() {
        let d = DivisorClass::from_ints(&[1, 1, 1]);
        assert!(d.is_nef() && d.is_ample());
        let d = DivisorClass::from_ints(&[0, 1, 1]);
        assert!(d.is_nef() && !d.is_ample());
        assert!(CurveClass::from_ints(&[1, 0, 2, 5]).is_effective());
        assert!(!CurveClass::from_ints(&[1, 0, -2, 5]).is_effective());
    }

    #[test]
    fn dual_cone_examples() {
        let orthant = SimplicialCone::orthant(3, ConeBasis::Standard);
        assert_eq!(dual_cone(&orthant).unwrap(), orthant);

        let k = SimplicialCone::from_ints(&[vec![1, 1], vec![1, -1]]).unwrap();
        let d = dual_cone(&k).unwrap();
        assert_eq!(
            d.generators(),
            &[vec![rat(1), rat(-1)], vec![rat(1), rat(1)]]
        );
        assert_eq!(dual_cone(&d).unwrap(), k);

        let bad = SimplicialCone::from_ints(&[vec![1, 2], vec![2, 4]]);
        assert!(matches!(bad, Err(Error::RankDeficient { rank: 1, .. })));
    }

    #[test]
    fn decompose_examples() {
        let k = SimplicialCone::from_ints(&[vec![1, 1], vec![1, -1]]).unwrap();
        let d = decompose(&k, &[rat(2), rat(0)]).unwrap();
        assert_eq!(d.coefficients, vec![rat(1), rat(1)]);
        assert!(d.inside);
        let d = decompose(&k, &[rat(0), rat(1)]).unwrap();
        assert_eq!(d.coefficients, vec![q(1, 2), q(-1, 2)]);
        assert!(!d.inside);

        let k = SimplicialCone::from_ints(&[vec![2, 1, 0], vec![0, 1, 3], vec![1, 0, 1]]).unwrap();
        // v = v₁ + 2v₂
        let d = decompose(&k, &[rat(2), rat(3), rat(6)]).unwrap();
        assert_eq!(d.coefficients, vec![rat(1), rat(2), rat(0)]);

        let d = decompose(&curve_cone(4).unwrap(), &[rat(1), rat(0), rat(2), rat(5)]).unwrap();
        assert_eq!(d.coefficients, vec![rat(1), rat(0), rat(2), rat(5)]);
        assert!(d.inside);
    }

    #[test]
    fn canonicalization_keeps_orientation() {
        let k = SimplicialCone::new(
            vec![vec![q(-1, 2), rat(1)], vec![rat(0), q(3, 4)]],
            ConeBasis::Standard,
        )
        .unwrap();
        let c = k.canonicalize();
        assert_eq!(c.generators(), &[vec![rat(-1), rat(2)], vec![rat(0), rat(1)]]);
    }

    #[test]
    fn nef_and_curve_cones_are_dual() {
        for r in 3..=6 {
            let nef = nef_cone(r).unwrap();
            let curves = curve_cone(r).unwrap();
            let dual = dual_cone(&curves).unwrap();
            assert_eq!(dual, nef);
            assert_eq!(dual.basis(), ConeBasis::Divisor);
            for (i, d) in nef.generators().iter().enumerate() {
                for (j, c) in curves.generators().iter().enumerate() {
                    let v = pair(&DivisorClass::new(d.clone()), &CurveClass::new(c.clone())).unwrap();
                    assert_eq!(v, rat((i == j) as i64));
                }
            }
        }
    }

    #[test]
    fn boundary_curve_intersections() {
        let m = boundary_curve_matrix(5).unwrap();
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, q(1, 3) - rat((i == j) as i64));
            }
        }
    }
}
