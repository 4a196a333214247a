//! Orbit closures X(p₁,…,p_r) ⊂ (ℙ¹)^r of PGL(2) acting diagonally.
//!
//! An [`Embedding`] stores the defining points together with a normalized
//! representative in which `p₁ = ∞`, `p₂ = 0`, `p₃ = 1`. Membership is
//! decided constructively: a point lies in X iff it is on a boundary
//! divisor `∂ᵢX = {(x,…,x,y,x,…,x)}` or is carried to `p` by a Möbius map.

use std::collections::HashSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::projline::{find_moebius, is_prime, Field, Moebius, P1Point, Scalar, MAX_MODULUS};

/// Upper bound on the number of affine points enumerated by [`count_points_ff`].
pub const ENUMERATION_LIMIT: u128 = 100_000_000;

/// The data `(r, p₁,…,p_r)` of an orbit closure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "EmbeddingRecord", try_from = "EmbeddingRecord")]
pub struct Embedding {
    points: Vec<P1Point>,
    normalized: Vec<P1Point>,
    normalizer: Moebius,
}

/// JSON shape of an [`Embedding`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingRecord {
    pub r: usize,
    pub points: Vec<P1Point>,
    pub normalized: Vec<P1Point>,
}

impl From<Embedding> for EmbeddingRecord {
    fn from(x: Embedding) -> Self {
        EmbeddingRecord {
            r: x.r(),
            points: x.points,
            normalized: x.normalized,
        }
    }
}

impl TryFrom<EmbeddingRecord> for Embedding {
    type Error = Error;

    fn try_from(rec: EmbeddingRecord) -> Result<Self> {
        if rec.points.len() != rec.r {
            return Err(Error::LengthMismatch {
                expected: rec.r,
                found: rec.points.len(),
            });
        }
        let x = Embedding::new(rec.points)?;
        if x.normalized != rec.normalized {
            return Err(Error::Parse("normalized points do not match".into()));
        }
        Ok(x)
    }
}

fn ensure_distinct(points: &[P1Point], what: &'static str) -> Result<()> {
    for (i, a) in points.iter().enumerate() {
        if points[i + 1..].contains(a) {
            return Err(Error::RepeatedPoint(what));
        }
    }
    Ok(())
}

impl Embedding {
    /// Builds the embedding and its normalization `(p₁,p₂,p₃) ↦ (∞,0,1)`.
    pub fn new(points: Vec<P1Point>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::TooFewPoints(points.len()));
        }
        let field = points[0].field();
        if let Some(p) = points.iter().find(|p| p.field() != field) {
            return Err(Error::FieldMismatch(field.to_string(), p.field().to_string()));
        }
        ensure_distinct(&points, "embedding points")?;
        let frame = standard_frame(field);
        let normalizer = find_moebius(
            [&points[0], &points[1], &points[2]],
            [&frame[0], &frame[1], &frame[2]],
        )?;
        let normalized = points
            .iter()
            .map(|p| normalizer.apply(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Embedding {
            points,
            normalized,
            normalizer,
        })
    }

    /// Parses a comma-separated point list such as `"inf,0,1,2"`.
    pub fn parse(s: &str) -> Result<Self> {
        Embedding::new(crate::projline::parse_points(s)?)
    }

    /// `X(∞, 0, 1, 2, …, r−2)`.
    pub fn standard(r: usize) -> Result<Self> {
        if r < 3 {
            return Err(Error::TooFewPoints(r));
        }
        let mut points = vec![P1Point::infinity(Field::Rationals), P1Point::int(0)];
        points.extend((1..=r as i64 - 2).map(P1Point::int));
        Embedding::new(points)
    }

    pub fn r(&self) -> usize {
        self.points.len()
    }

    pub fn field(&self) -> Field {
        self.points[0].field()
    }

    pub fn points(&self) -> &[P1Point] {
        &self.points
    }

    pub fn normalized(&self) -> &[P1Point] {
        &self.normalized
    }

    /// The Möbius map carrying `points` to `normalized`.
    pub fn normalizer(&self) -> &Moebius {
        &self.normalizer
    }

    /// The embedding defined by the normalized tuple.
    pub fn normalize(&self) -> Embedding {
        Embedding::new(self.normalized.clone()).expect("normalized points are distinct")
    }

    /// Reduction modulo `q`; fails when two points collide.
    pub fn reduce(&self, q: u32) -> Result<Embedding> {
        let points = self
            .points
            .iter()
            .map(|p| p.reduce(q))
            .collect::<Result<Vec<_>>>()?;
        Embedding::new(points).map_err(|e| match e {
            Error::RepeatedPoint(_) => Error::BadReduction {
                modulus: q,
                reason: "points collide".into(),
            },
            other => other,
        })
    }

    /// Normalized `p₃,…,p_r` as rationals (all finite since `p₁ = ∞`).
    fn normalized_tail(&self) -> Result<Vec<BigRational>> {
        self.normalized[2..]
            .iter()
            .map(|p| {
                p.value()
                    .and_then(Scalar::as_rational)
                    .cloned()
                    .ok_or_else(|| Error::Unsupported("expected an embedding over Q".into()))
            })
            .collect()
    }
}

impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X({})", crate::projline::format_points(&self.points))
    }
}

fn standard_frame(field: Field) -> [P1Point; 3] {
    [
        P1Point::infinity(field),
        P1Point::zero(field),
        P1Point::finite(Scalar::one(field)),
    ]
}

/// Why a tuple does or does not lie in X.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// All coordinates equal: the closed orbit `diag ℙ¹`.
    Diagonal,
    /// All coordinates except slot `i` (1-based) agree: a point of `∂ᵢX`.
    Boundary(usize),
    /// `g·p = q` for the witness `g`.
    Orbit(Box<Moebius>),
    Outside,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        !matches!(self, Membership::Outside)
    }
}

/// Classifies `q` against X; see [`Membership`].
pub fn membership(x: &Embedding, q: &[P1Point]) -> Result<Membership> {
    if q.len() != x.r() {
        return Err(Error::LengthMismatch {
            expected: x.r(),
            found: q.len(),
        });
    }
    let field = x.field();
    if let Some(c) = q.iter().find(|c| c.field() != field) {
        return Err(Error::FieldMismatch(field.to_string(), c.field().to_string()));
    }
    if q.iter().all(|c| *c == q[0]) {
        return Ok(Membership::Diagonal);
    }
    // the common value of a boundary tuple is the majority among the first three slots
    let common = if q[0] == q[1] || q[0] == q[2] { &q[0] } else { &q[1] };
    let odd: Vec<usize> = (0..q.len()).filter(|&i| q[i] != *common).collect();
    if odd.len() == 1 {
        return Ok(Membership::Boundary(odd[0] + 1));
    }
    if ensure_distinct(q, "tuple").is_err() {
        return Ok(Membership::Outside);
    }
    let p = &x.points;
    let g = find_moebius([&p[0], &p[1], &p[2]], [&q[0], &q[1], &q[2]])?;
    for (pi, qi) in p.iter().zip(q).skip(3) {
        if g.apply(pi)? != *qi {
            return Ok(Membership::Outside);
        }
    }
    Ok(Membership::Orbit(Box::new(g)))
}

pub fn contains(x: &Embedding, q: &[P1Point]) -> Result<bool> {
    membership(x, q).map(|m| m.is_member())
}

/// The 2×(r−2) matrix `A` and its 2×2 minors, in variables `x₂,…,x_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorsSystem {
    r: usize,
    /// Columns `(pᵢxᵢ, xᵢ − x₂)` for `i = 3..=r`.
    matrix: Vec<[Poly; 2]>,
    /// `((i, j), minor)` for `3 ≤ i < j ≤ r`.
    minors: Vec<((usize, usize), Poly)>,
}

impl MinorsSystem {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn matrix(&self) -> &[[Poly; 2]] {
        &self.matrix
    }

    pub fn minors(&self) -> &[((usize, usize), Poly)] {
        &self.minors
    }

    pub fn variable_names(&self) -> Vec<String> {
        (2..=self.r).map(|i| format!("x{i}")).collect()
    }

    /// One line per minor, denominators cleared.
    pub fn render(&self) -> Vec<String> {
        let names = self.variable_names();
        self.minors
            .iter()
            .map(|(_, m)| m.clear_denominators().render(&names))
            .collect()
    }
}

impl fmt::Display for MinorsSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.render() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Equations of the affine slice S⁻ ⊂ 𝔸^{r−1}: all 2×2 minors of
/// `[[p₃x₃ … p_rx_r], [x₃−x₂ … x_r−x₂]]` in the normalized coordinates.
pub fn minors_system(x: &Embedding) -> Result<MinorsSystem> {
    let r = x.r();
    let tail = x.normalized_tail()?;
    let n = r - 1;
    let var = |i: usize| Poly::var(n, i - 2);
    let matrix: Vec<[Poly; 2]> = (3..=r)
        .map(|i| [var(i).scale(&tail[i - 3]), var(i).sub(&var(2))])
        .collect();
    let mut minors = Vec::new();
    for i in 3..=r {
        for j in i + 1..=r {
            let (a, b) = (&matrix[i - 3], &matrix[j - 3]);
            minors.push(((i, j), a[0].mul(&b[1]).sub(&b[0].mul(&a[1]))));
        }
    }
    Ok(MinorsSystem { r, matrix, minors })
}

/// Evaluates `x₂ = 1/(tu)`, `xᵢ = 1/(t²pᵢ + tu)`; returns `(x₂,…,x_r)`.
pub fn parametrize_s_minus(x: &Embedding, t: &BigRational, u: &BigRational) -> Result<Vec<BigRational>> {
    let tail = x.normalized_tail()?;
    let tu = t * u;
    if tu.is_zero() {
        return Err(Error::VanishingDenominator { slot: 2 });
    }
    let mut out = vec![tu.recip()];
    for (k, p) in tail.iter().enumerate() {
        let den = t * t * p + &tu;
        if den.is_zero() {
            return Err(Error::VanishingDenominator { slot: k + 3 });
        }
        out.push(den.recip());
    }
    Ok(out)
}

/// Residuals of the minors on the parametrization and on the boundary lines of S⁻.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationReport {
    pub r: usize,
    pub minor_count: usize,
    /// Minors composed with the cleared-denominator parametrization, in `ℚ[t, u]`.
    pub parametrization: Vec<Poly>,
    /// Minors on the diagonal `x₂ = ⋯ = x_r = c`, in `ℚ[c]`.
    pub diagonal: Vec<Poly>,
    /// For each slot `k = 2..=r`, minors on the coordinate line through `x_k`, in `ℚ[c]`.
    pub coordinate_lines: Vec<Vec<Poly>>,
}

impl EquationReport {
    pub fn holds(&self) -> bool {
        self.parametrization.iter().all(Poly::is_zero)
            && self.diagonal.iter().all(Poly::is_zero)
            && self.coordinate_lines.iter().flatten().all(Poly::is_zero)
    }
}

/// Symbolic check that the minors cut out the closure of the parametrization.
///
/// With `L = tu·Π(t²pᵢ + tu)` every `L·xᵢ` is a polynomial, and since each
/// minor is a quadratic form, `L²·minor(x) = minor(L·x)`.
pub fn verify_equations(x: &Embedding) -> Result<EquationReport> {
    let r = x.r();
    if r < 4 {
        return Err(Error::Unsupported("the minors system is empty for r = 3".into()));
    }
    let system = minors_system(x)?;
    let tail = x.normalized_tail()?;
    let (t, u) = (Poly::var(2, 0), Poly::var(2, 1));
    let tu = t.mul(&u);
    let dens: Vec<Poly> = std::iter::once(tu.clone())
        .chain(tail.iter().map(|p| t.pow(2).scale(p).add(&tu)))
        .collect();
    let cleared: Vec<Poly> = (0..dens.len())
        .map(|k| {
            dens.iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .fold(Poly::one(2), |acc, (_, d)| acc.mul(d))
        })
        .collect();
    let parametrization = system
        .minors
        .iter()
        .map(|(_, m)| m.substitute(&cleared))
        .collect();

    let c = Poly::var(1, 0);
    let on_line = |values: Vec<Poly>| -> Vec<Poly> {
        system.minors.iter().map(|(_, m)| m.substitute(&values)).collect()
    };
    let diagonal = on_line(vec![c.clone(); r - 1]);
    let coordinate_lines = (0..r - 1)
        .map(|k| {
            on_line(
                (0..r - 1)
                    .map(|j| if j == k { c.clone() } else { Poly::zero(1) })
                    .collect(),
            )
        })
        .collect();
    Ok(EquationReport {
        r,
        minor_count: system.minors.len(),
        parametrization,
        diagonal,
        coordinate_lines,
    })
}

/// Point counts of S⁻ over F_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCounts {
    pub q: u32,
    /// Points of 𝔸^{r−1}(F_q) where every minor vanishes.
    pub variety: u64,
    /// Points of the parametrized open part, the diagonal and the coordinate lines.
    pub constructive: u64,
}

impl PointCounts {
    pub fn agree(&self) -> bool {
        self.variety == self.constructive
    }
}

fn inv_mod(a: u64, q: u64) -> u64 {
    let (mut acc, mut base, mut e) = (1u64, a % q, q - 2);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    acc
}

/// Counts the F_q-points of S⁻ two ways: by exhaustive search of the minors'
/// zero set, and as the union of the parametrized part with the boundary lines.
///
/// Admissible parameters are those `(t, u)` over the algebraic closure whose
/// image is F_q-rational; the map factors through `(s, w) = (t², tu)`, so the
/// parametrized part is enumerated over `s, w ∈ F_q^×`.
pub fn count_points_ff(x: &Embedding, q: u32) -> Result<PointCounts> {
    if !(q as u64 <= MAX_MODULUS as u64 && is_prime(q as u64)) {
        return Err(Error::BadModulus(q as u64));
    }
    let tail = x.normalized_tail()?;
    let residues: Vec<u64> = tail
        .iter()
        .map(|p| match Scalar::Rational(p.clone()).reduce(q)? {
            Scalar::Modular { value, .. } => Ok(value as u64),
            Scalar::Rational(_) => unreachable!(),
        })
        .collect::<Result<_>>()?;
    if residues.contains(&0) {
        return Err(Error::BadReduction {
            modulus: q,
            reason: "a normalized point reduces to 0".into(),
        });
    }
    if residues.iter().collect::<HashSet<_>>().len() != residues.len() {
        return Err(Error::BadReduction {
            modulus: q,
            reason: "normalized points collide".into(),
        });
    }
    let n = x.r() - 1;
    let size = (q as u128).pow(n as u32);
    if size > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge {
            size,
            limit: ENUMERATION_LIMIT,
        });
    }
    let qq = q as u64;

    let on_variety = |pt: &[u64]| -> bool {
        let x2 = pt[0];
        let col = |i: usize| (residues[i] * pt[i + 1] % qq, (pt[i + 1] + qq - x2) % qq);
        (0..residues.len()).all(|i| {
            let (a0, a1) = col(i);
            (i + 1..residues.len()).all(|j| {
                let (b0, b1) = col(j);
                a0 * b1 % qq == b0 * a1 % qq
            })
        })
    };
    let variety = (0..size as u64)
        .into_par_iter()
        .filter(|&idx| {
            let mut pt = vec![0u64; n];
            let mut rest = idx;
            for c in pt.iter_mut() {
                *c = rest % qq;
                rest /= qq;
            }
            on_variety(&pt)
        })
        .count() as u64;

    let mut points: HashSet<Vec<u64>> = HashSet::new();
    for s in 1..qq {
        for w in 1..qq {
            let dens: Vec<u64> = std::iter::once(w)
                .chain(residues.iter().map(|p| (s * p + w) % qq))
                .collect();
            if dens.iter().all(|&d| d != 0) {
                points.insert(dens.iter().map(|&d| inv_mod(d, qq)).collect());
            }
        }
    }
    for c in 0..qq {
        points.insert(vec![c; n]);
        for k in 0..n {
            let mut pt = vec![0; n];
            pt[k] = c;
            points.insert(pt);
        }
    }
    Ok(PointCounts {
        q,
        variety,
        constructive: points.len() as u64,
    })
}

/// A witness `g·p¹ᵢ = p²_{σ(i)}` for an isomorphism of orbit closures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    /// `permutation[i] = σ(i)`, 0-based.
    pub permutation: Vec<usize>,
    pub moebius: Moebius,
}

impl Isomorphism {
    pub fn verify(&self, a: &Embedding, b: &Embedding) -> Result<bool> {
        if a.r() != b.r() || self.permutation.len() != a.r() {
            return Ok(false);
        }
        for (p, &s) in a.points().iter().zip(&self.permutation) {
            if self.moebius.apply(p)? != b.points()[s] {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Searches for a permutation and a Möbius map identifying `a` with `b`.
///
/// Tries every injective assignment of `p¹₁, p¹₂, p¹₃` to three target points.
pub fn are_isomorphic(a: &Embedding, b: &Embedding) -> Result<Option<Isomorphism>> {
    let r = a.r();
    if r != b.r() || a.field() != b.field() {
        return Ok(None);
    }
    let (src, dst) = (a.points(), b.points());
    for i in 0..r {
        for j in (0..r).filter(|&j| j != i) {
            for k in (0..r).filter(|&k| k != i && k != j) {
                let g = find_moebius([&src[0], &src[1], &src[2]], [&dst[i], &dst[j], &dst[k]])?;
                let mut perm = vec![i, j, k];
                let mut used = vec![false; r];
                used[i] = true;
                used[j] = true;
                used[k] = true;
                let mut ok = true;
                for p in &src[3..] {
                    let image = g.apply(p)?;
                    match dst.iter().position(|d| *d == image) {
                        Some(s) if !used[s] => {
                            used[s] = true;
                            perm.push(s);
                        }
                        _ => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    return Ok(Some(Isomorphism {
                        permutation: perm,
                        moebius: g,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// A linear form `a·x + b·y` raised to a multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFactor {
    pub a: BigRational,
    pub b: BigRational,
    pub multiplicity: u32,
}

impl LinearFactor {
    /// Zero of the form: `[−b : a]`.
    pub fn root(&self) -> P1Point {
        P1Point::new(Scalar::Rational(-&self.b), Scalar::Rational(self.a.clone()))
            .expect("nonzero linear form")
    }
}

/// A binary form given as a product of pairwise non-proportional linear factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    factors: Vec<LinearFactor>,
}

impl BinaryForm {
    pub fn new(factors: Vec<LinearFactor>) -> Result<Self> {
        for f in &factors {
            if f.a.is_zero() && f.b.is_zero() {
                return Err(Error::InvalidFactor("zero linear form".into()));
            }
            if f.multiplicity == 0 {
                return Err(Error::InvalidFactor("multiplicity must be positive".into()));
            }
        }
        let roots: Vec<P1Point> = factors.iter().map(LinearFactor::root).collect();
        ensure_distinct(&roots, "binary form").map_err(|_| {
            Error::InvalidFactor("factors must be pairwise non-proportional".into())
        })?;
        Ok(BinaryForm { factors })
    }

    /// Parses `a:b:m` triples separated by commas, e.g. `"1:0:2,0:1:2,1:-1:1"`.
    pub fn parse(s: &str) -> Result<Self> {
        let factors = s
            .split(',')
            .map(|item| {
                let parts: Vec<&str> = item.split(':').collect();
                let [a, b, m] = parts.as_slice() else {
                    return Err(Error::Parse(item.to_string()));
                };
                Ok(LinearFactor {
                    a: crate::projline::parse_rational(a)?,
                    b: crate::projline::parse_rational(b)?,
                    multiplicity: m.trim().parse().map_err(|_| Error::Parse(item.to_string()))?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        BinaryForm::new(factors)
    }

    pub fn factors(&self) -> &[LinearFactor] {
        &self.factors
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|f| f.multiplicity).sum()
    }
}

/// The orbit closure on the distinct roots of `f`; multiplicities are dropped.
pub fn embedding_from_form(f: &BinaryForm) -> Result<Embedding> {
    let s = f.factors.len();
    if s < 3 {
        return Err(Error::TooFewFactors(s));
    }
    Embedding::new(f.factors.iter().map(LinearFactor::root).collect())
}

/// One-based index helper for callers validating slot arguments.
pub(crate) fn check_index(i: usize, r: usize) -> Result<()> {
    if (1..=r).contains(&i) {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: i, max: r })
    }
}
