//! The one-parameter subgroup `λ(t) = diag(t, t⁻¹)` acting diagonally on
//! (ℙ¹)^r by `z ↦ t²z`, and the Bialynicki-Birula strata it cuts out on X.
//!
//! Limits are combinatorial: only whether a coordinate is 0, ∞ or neither
//! matters.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::embedding::{check_index, contains, Embedding};
use crate::error::{Error, Result};
use crate::projline::{is_prime, Field, P1Point, Scalar};

/// The composite `λᵏ`, `k ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OneParamWeight(i64);

impl OneParamWeight {
    pub const LAMBDA: OneParamWeight = OneParamWeight(1);

    pub fn new(k: i64) -> Result<Self> {
        if k == 0 {
            Err(Error::ZeroWeight)
        } else {
            Ok(OneParamWeight(k))
        }
    }

    pub fn get(self) -> i64 {
        self.0
    }
}

/// `Positive` is the limit `t → 0` (strata X⁺), `Negative` is `t → ∞` (strata X⁻).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Positive,
    Negative,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Positive => write!(f, "positive"),
            Direction::Negative => write!(f, "negative"),
        }
    }
}

/// A point of (ℙ¹)^r, `r ≥ 3`, all coordinates over one field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointTuple(Vec<P1Point>);

impl PointTuple {
    pub fn new(coords: Vec<P1Point>) -> Result<Self> {
        if coords.len() < 3 {
            return Err(Error::TooFewPoints(coords.len()));
        }
        let field = coords[0].field();
        if let Some(c) = coords.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch(field.to_string(), c.field().to_string()));
        }
        Ok(PointTuple(coords))
    }

    pub fn parse(s: &str) -> Result<Self> {
        PointTuple::new(crate::projline::parse_points(s)?)
    }

    pub fn coords(&self) -> &[P1Point] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn field(&self) -> Field {
        self.0[0].field()
    }
}

impl fmt::Display for PointTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", crate::projline::format_points(&self.0))
    }
}

/// Coordinatewise limit of `λᵏ(t)·q` as `t → 0` (`Positive`) or `t → ∞` (`Negative`).
pub fn limit(w: OneParamWeight, q: &PointTuple, direction: Direction) -> PointTuple {
    // contracting: z ↦ t^{2k}z with the exponent's sign pushing finite values to 0
    let contracting = (w.get() > 0) == (direction == Direction::Positive);
    let field = q.field();
    let coords = q
        .coords()
        .iter()
        .map(|c| {
            if contracting {
                if c.is_infinity() {
                    c.clone()
                } else {
                    P1Point::zero(field)
                }
            } else if c.is_zero() {
                c.clone()
            } else {
                P1Point::infinity(field)
            }
        })
        .collect();
    PointTuple(coords)
}

/// The λ-fixed points of X, labelled by their pattern in {0, ∞}^r.
///
/// Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FixedPointLabel {
    /// 0^r
    Source,
    /// ∞^r
    Sink,
    /// 0 everywhere except ∞ in slot i.
    A(usize),
    /// ∞ everywhere except 0 in slot i; the sink of the divisor Dᵢ.
    B(usize),
}

impl FixedPointLabel {
    pub fn tuple(self, r: usize, field: Field) -> PointTuple {
        let (zero, inf) = (P1Point::zero(field), P1Point::infinity(field));
        let coords = (1..=r)
            .map(|k| match self {
                FixedPointLabel::Source => zero.clone(),
                FixedPointLabel::Sink => inf.clone(),
                FixedPointLabel::A(i) if k == i => inf.clone(),
                FixedPointLabel::A(_) => zero.clone(),
                FixedPointLabel::B(i) if k == i => zero.clone(),
                FixedPointLabel::B(_) => inf.clone(),
            })
            .collect();
        PointTuple(coords)
    }

    /// Labels a tuple of {0, ∞}^r; `None` for other tuples.
    pub fn classify(q: &PointTuple) -> Option<FixedPointLabel> {
        let c = q.coords();
        if !c.iter().all(|x| x.is_zero() || x.is_infinity()) {
            return None;
        }
        let infs: Vec<usize> = (0..c.len()).filter(|&k| c[k].is_infinity()).collect();
        let zeros: Vec<usize> = (0..c.len()).filter(|&k| c[k].is_zero()).collect();
        match (infs.len(), zeros.len()) {
            (0, _) => Some(FixedPointLabel::Source),
            (_, 0) => Some(FixedPointLabel::Sink),
            (1, _) => Some(FixedPointLabel::A(infs[0] + 1)),
            (_, 1) => Some(FixedPointLabel::B(zeros[0] + 1)),
            _ => None,
        }
    }
}

impl fmt::Display for FixedPointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedPointLabel::Source => write!(f, "source"),
            FixedPointLabel::Sink => write!(f, "sink"),
            FixedPointLabel::A(i) => write!(f, "A{i}"),
            FixedPointLabel::B(i) => write!(f, "B{i}"),
        }
    }
}

impl Serialize for FixedPointLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All tuples of {0, ∞}^r lying in X, in label order.
pub fn fixed_points(x: &Embedding) -> Result<Vec<(FixedPointLabel, PointTuple)>> {
    let r = x.r();
    if r > 24 {
        return Err(Error::Unsupported(format!("2^{r} fixed-point candidates")));
    }
    let field = x.field();
    let mut out = Vec::new();
    for mask in 0u32..(1 << r) {
        let coords: Vec<P1Point> = (0..r)
            .map(|k| {
                if mask & (1 << k) != 0 {
                    P1Point::infinity(field)
                } else {
                    P1Point::zero(field)
                }
            })
            .collect();
        if contains(x, &coords)? {
            let q = PointTuple(coords);
            let label = FixedPointLabel::classify(&q).ok_or_else(|| {
                Error::Unsupported(format!("unlabelled fixed point {q}"))
            })?;
            out.push((label, q));
        }
    }
    out.sort_by_key(|(l, _)| *l);
    Ok(out)
}

/// Closed-form description of a stratum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StratumTag {
    /// The dense stratum of the source (positive) or sink (negative).
    Open,
    /// `Cᵢ ∖ {∞^r}`, the positive stratum of `B(i)`.
    Curve(usize),
    /// The negative stratum of `B(i)`, dense in the divisor `Dᵢ`.
    Divisor(usize),
    /// A single point.
    Point,
    /// No closed form; the dimension comes from point counts over F_q.
    Computed,
}

impl fmt::Display for StratumTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StratumTag::Open => write!(f, "open"),
            StratumTag::Curve(i) => write!(f, "curve C{i}"),
            StratumTag::Divisor(i) => write!(f, "divisor D{i}"),
            StratumTag::Point => write!(f, "point"),
            StratumTag::Computed => write!(f, "computed"),
        }
    }
}

impl Serialize for StratumTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StratumDescriptor {
    pub label: FixedPointLabel,
    pub direction: Direction,
    #[serde(rename = "description")]
    pub tag: StratumTag,
    pub dimension: u32,
}

/// Dimension of X(p); the orbit of PGL(2) is open and 3-dimensional.
pub const DIM_X: u32 = 3;

/// Number of points of `X ∩ {q : lim q = label}` over F_q, by enumeration.
///
/// The limit preimage in (ℙ¹)^r is a product set: under `t → 0` a 0-slot
/// ranges over F_q and an ∞-slot is fixed; under `t → ∞` an ∞-slot ranges
/// over ℙ¹ ∖ {0} and a 0-slot is fixed.
pub fn stratum_point_count(
    x: &Embedding,
    label: FixedPointLabel,
    direction: Direction,
    q: u32,
) -> Result<u64> {
    let xq = x.reduce(q)?;
    let r = x.r();
    let field = Field::Prime(q);
    let target = label.tuple(r, field);
    let mut choices: Vec<Vec<P1Point>> = Vec::with_capacity(r);
    for c in target.coords() {
        let free = match direction {
            Direction::Positive => c.is_zero(),
            Direction::Negative => c.is_infinity(),
        };
        if !free {
            choices.push(vec![c.clone()]);
            continue;
        }
        let mut opts: Vec<P1Point> = (0..q as i64)
            .map(|v| P1Point::finite(Scalar::from_i64_in(v, field)))
            .collect();
        if direction == Direction::Negative {
            opts.remove(0);
            opts.push(P1Point::infinity(field));
        }
        choices.push(opts);
    }
    let total: u128 = choices.iter().map(|c| c.len() as u128).product();
    if total > crate::embedding::ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge {
            size: total,
            limit: crate::embedding::ENUMERATION_LIMIT,
        });
    }
    let mut count = 0;
    let mut idx = vec![0usize; r];
    loop {
        let pt: Vec<P1Point> = idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
        if contains(&xq, &pt)? {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == r {
                return Ok(count);
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// The two smallest primes `q ≥ 5` at which X has good reduction.
fn counting_primes(x: &Embedding) -> Vec<u32> {
    (5u32..)
        .filter(|&q| is_prime(q as u64) && x.reduce(q).is_ok())
        .take(2)
        .collect()
}

/// Dimension of a stratum from point counts: the exponent `d` with `#S(F_q) ≈ q^d`,
/// required to agree at two primes.
pub fn computed_dimension(x: &Embedding, label: FixedPointLabel, direction: Direction) -> Result<u32> {
    let mut dims = Vec::new();
    for q in counting_primes(x) {
        let n = stratum_point_count(x, label, direction, q)?;
        if n == 0 {
            return Err(Error::Unsupported(format!("empty stratum at {label}")));
        }
        dims.push(((n as f64).ln() / (q as f64).ln()).round() as u32);
    }
    match dims.as_slice() {
        [a, b] if a == b => Ok(*a),
        _ => Err(Error::Unsupported(format!(
            "inconsistent dimension estimates {dims:?} at {label}"
        ))),
    }
}

fn descriptor(
    x: &Embedding,
    label: FixedPointLabel,
    direction: Direction,
) -> Result<StratumDescriptor> {
    use Direction::*;
    use FixedPointLabel::*;
    let (tag, dimension) = match (label, direction) {
        (Source, Positive) | (Sink, Negative) => (StratumTag::Open, DIM_X),
        (Source, Negative) | (Sink, Positive) => (StratumTag::Point, 0),
        (B(i), Positive) => (StratumTag::Curve(i), 1),
        (B(i), Negative) => (StratumTag::Divisor(i), 2),
        (A(_), _) => (StratumTag::Computed, computed_dimension(x, label, direction)?),
    };
    Ok(StratumDescriptor {
        label,
        direction,
        tag,
        dimension,
    })
}

/// Locates `q ∈ X` in the Bialynicki-Birula decomposition for `λ`.
pub fn stratum_of(x: &Embedding, q: &PointTuple, direction: Direction) -> Result<StratumDescriptor> {
    if !contains(x, q.coords())? {
        return Err(Error::NotInVariety);
    }
    let lim = limit(OneParamWeight::LAMBDA, q, direction);
    let label = FixedPointLabel::classify(&lim).ok_or(Error::NotInVariety)?;
    descriptor(x, label, direction)
}

/// One positive and one negative stratum per fixed point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrataRow {
    pub label: FixedPointLabel,
    pub positive: StratumDescriptor,
    pub negative: StratumDescriptor,
}

impl StrataRow {
    /// `dim X − dim X^λ ≤ dim X⁺ + dim X⁻`; fixed points are isolated.
    pub fn satisfies_inequality(&self) -> bool {
        DIM_X <= self.positive.dimension + self.negative.dimension
    }
}

pub fn strata_summary(x: &Embedding) -> Result<Vec<StrataRow>> {
    fixed_points(x)?
        .into_iter()
        .map(|(label, _)| {
            Ok(StrataRow {
                label,
                positive: descriptor(x, label, Direction::Positive)?,
                negative: descriptor(x, label, Direction::Negative)?,
            })
        })
        .collect()
}

/// The summary flattened to descriptors, as serialized.
pub fn strata_table(rows: &[StrataRow]) -> Vec<StratumDescriptor> {
    rows.iter().flat_map(|r| [r.positive, r.negative]).collect()
}

/// A point of `Cᵢ`: `y` in slot `i`, ∞ elsewhere.
pub fn curve_point(r: usize, i: usize, y: P1Point) -> Result<PointTuple> {
    check_index(i, r)?;
    let field = y.field();
    let mut coords = vec![P1Point::infinity(field); r];
    coords[i - 1] = y;
    PointTuple::new(coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(s: &str) -> PointTuple {
        PointTuple::parse(s).unwrap()
    }

    #[test]
    fn limit_examples() {
        let q = tuple("5,inf,0");
        let w = OneParamWeight::LAMBDA;
        assert_eq!(limit(w, &q, Direction::Positive), tuple("0,inf,0"));
        assert_eq!(limit(w, &q, Direction::Negative), tuple("inf,inf,0"));
        let fixed = tuple("0,inf,inf,0");
        assert_eq!(limit(w, &fixed, Direction::Positive), fixed);
        assert_eq!(limit(w, &fixed, Direction::Negative), fixed);
        let inv = OneParamWeight::new(-2).unwrap();
        assert_eq!(limit(inv, &q, Direction::Positive), tuple("inf,inf,0"));
        assert_eq!(OneParamWeight::new(0), Err(Error::ZeroWeight));
    }

    #[test]
    fn fixed_point_counts() {
        for (pts, n) in [("inf,0,1", 8), ("inf,0,1,2", 10), ("inf,0,1,2,3", 12)] {
            let x = Embedding::parse(pts).unwrap();
            let fp = fixed_points(&x).unwrap();
            assert_eq!(fp.len(), n, "{pts}");
            assert_eq!(fp[0].0, FixedPointLabel::Source);
            assert_eq!(fp[1].0, FixedPointLabel::Sink);
        }
    }

    #[test]
    fn labels_round_trip() {
        for label in [
            FixedPointLabel::Source,
            FixedPointLabel::Sink,
            FixedPointLabel::A(2),
            FixedPointLabel::B(3),
        ] {
            let t = label.tuple(4, Field::Rationals);
            assert_eq!(FixedPointLabel::classify(&t), Some(label));
        }
        assert_eq!(FixedPointLabel::classify(&tuple("0,0,inf,inf")), None);
        assert_eq!(FixedPointLabel::classify(&tuple("1,0,inf,inf")), None);
    }

    #[test]
    fn stratum_examples() {
        let x = Embedding::parse("inf,0,1,2").unwrap();
        let q = curve_point(4, 2, P1Point::int(7)).unwrap();
        let d = stratum_of(&x, &q, Direction::Positive).unwrap();
        assert_eq!(d.label, FixedPointLabel::B(2));
        assert_eq!(d.tag, StratumTag::Curve(2));
        assert_eq!(d.dimension, 1);

        // a point of D₃: the orbit point g·p with g sending p₃ = 1 to 0
        let g = crate::projline::Moebius::from_ints(1, -1, 1, 3).unwrap();
        let coords: Vec<P1Point> = x.points().iter().map(|p| g.apply(p).unwrap()).collect();
        assert!(coords[2].is_zero());
        let q = PointTuple::new(coords).unwrap();
        let d = stratum_of(&x, &q, Direction::Negative).unwrap();
        assert_eq!((d.label, d.tag, d.dimension), (FixedPointLabel::B(3), StratumTag::Divisor(3), 2));

        let q = tuple("0,0,1,3");
        assert_eq!(stratum_of(&x, &q, Direction::Negative), Err(Error::NotInVariety));
    }

    #[test]
    fn summary_satisfies_inequality() {
        for pts in ["inf,0,1", "inf,0,1,2", "inf,0,1,2,3"] {
            let x = Embedding::parse(pts).unwrap();
            let rows = strata_summary(&x).unwrap();
            assert_eq!(rows.len(), 2 * x.r() + 2);
            for row in &rows {
                assert!(row.satisfies_inequality(), "{pts} {}", row.label);
            }
        }
    }

    #[test]
    fn a_strata_dimensions() {
        let x = Embedding::parse("inf,0,1,2").unwrap();
        let a1 = FixedPointLabel::A(1);
        assert_eq!(stratum_point_count(&x, a1, Direction::Positive, 7).unwrap(), 49);
        assert_eq!(stratum_point_count(&x, a1, Direction::Negative, 7).unwrap(), 7);
        assert_eq!(computed_dimension(&x, a1, Direction::Positive).unwrap(), 2);
        assert_eq!(computed_dimension(&x, a1, Direction::Negative).unwrap(), 1);
    }
}
