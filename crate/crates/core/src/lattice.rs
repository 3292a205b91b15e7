//! Classes in `ℤ²`, slopes, convex paths and the weak order on them.
//!
//! A class is a pair `(rank, degree)`. The positive cone is
//! `{rank > 0} ∪ {rank = 0, degree > 0}`; a convex path is a nonempty sequence
//! of classes in the cone with weakly increasing slopes, stored in canonical
//! form (within one slope the ray multiples weakly decrease).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassZ {
    pub rank: i64,
    pub degree: i64,
}

impl ClassZ {
    pub const fn new(rank: i64, degree: i64) -> Self {
        ClassZ { rank, degree }
    }

    pub fn is_positive(&self) -> bool {
        self.rank > 0 || (self.rank == 0 && self.degree > 0)
    }

    pub fn check_positive(&self) -> Result<()> {
        if self.is_positive() {
            Ok(())
        } else {
            Err(Error::NotPositive(self.rank, self.degree))
        }
    }

    pub fn slope(&self) -> Result<Slope> {
        match (self.rank, self.degree) {
            (0, 0) => Err(Error::ZeroClass(0, 0)),
            (0, _) => Ok(Slope::Infinite),
            (r, d) => Ok(Slope::Finite(Rational64::new(d, r))),
        }
    }

    /// Slope of a class known to be nonzero.
    pub(crate) fn mu(&self) -> Slope {
        self.slope().expect("nonzero class")
    }

    /// `α = l·δ` with `δ` primitive; returns `(l, δ)`.
    pub fn ray_decompose(&self) -> Result<(i64, ClassZ)> {
        self.check_positive()?;
        let g = self.rank.gcd(&self.degree);
        Ok((g, ClassZ::new(self.rank / g, self.degree / g)))
    }

    /// The ray multiple `l` of `α = l·δ`.
    pub fn deg(&self) -> i64 {
        self.rank.gcd(&self.degree)
    }

    pub fn primitive(&self) -> ClassZ {
        let g = self.deg();
        ClassZ::new(self.rank / g, self.degree / g)
    }

    pub fn is_primitive(&self) -> bool {
        self.deg() == 1
    }

    /// `rank(x)·degree(y) − degree(x)·rank(y)`; positive iff `y` is steeper than `x`
    /// (for classes in the positive cone).
    pub fn det(&self, other: &ClassZ) -> i64 {
        self.rank * other.degree - self.degree * other.rank
    }

    pub fn scale(&self, l: i64) -> ClassZ {
        ClassZ::new(self.rank * l, self.degree * l)
    }

    pub fn is_collinear(&self, other: &ClassZ) -> bool {
        self.det(other) == 0
    }
}

impl std::ops::Add for ClassZ {
    type Output = ClassZ;
    fn add(self, o: ClassZ) -> ClassZ {
        ClassZ::new(self.rank + o.rank, self.degree + o.degree)
    }
}

impl std::ops::Sub for ClassZ {
    type Output = ClassZ;
    fn sub(self, o: ClassZ) -> ClassZ {
        ClassZ::new(self.rank - o.rank, self.degree - o.degree)
    }
}

impl fmt::Debug for ClassZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.rank, self.degree)
    }
}

impl fmt::Display for ClassZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `⟨(r₁,d₁),(r₂,d₂)⟩ = r₁d₂ − d₁r₂`.
pub fn euler_form(x: &ClassZ, y: &ClassZ) -> i64 {
    x.det(y)
}

/// A slope `d/r` or `∞`; `∞` is the maximum.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slope {
    Finite(Rational64),
    Infinite,
}

impl Slope {
    pub fn int(n: i64) -> Slope {
        Slope::Finite(Rational64::from_integer(n))
    }

    pub fn ratio(n: i64, d: i64) -> Slope {
        Slope::Finite(Rational64::new(n, d))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Infinite => f.write_str("inf"),
            Slope::Finite(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Slope::Finite(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

impl fmt::Debug for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Slope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Slope> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Slope::Infinite);
        }
        let bad = || Error::Parse(format!("bad slope '{s}'"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                Ok(Slope::ratio(n, d))
            }
            None => Ok(Slope::int(s.parse().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Canonical sort key of a segment: slope ascending, ray multiple descending.
fn segment_key(x: &ClassZ) -> (Slope, i64) {
    (x.mu(), -x.deg())
}

/// A convex path in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConvexPath {
    segments: Vec<ClassZ>,
}

impl ConvexPath {
    /// The canonical convex arrangement of a multiset of positive classes.
    pub fn canonical(mut segments: Vec<ClassZ>) -> Result<ConvexPath> {
        if segments.is_empty() {
            return Err(Error::EmptyPath);
        }
        for s in &segments {
            s.check_positive()?;
        }
        segments.sort_by_key(segment_key);
        Ok(ConvexPath { segments })
    }

    pub fn single(x: ClassZ) -> Result<ConvexPath> {
        Self::canonical(vec![x])
    }

    /// Build from segments already in canonical order (internal fast path).
    pub(crate) fn from_sorted(segments: Vec<ClassZ>) -> ConvexPath {
        debug_assert!(segments.windows(2).all(|w| segment_key(&w[0]) <= segment_key(&w[1])));
        ConvexPath { segments }
    }

    pub fn segments(&self) -> &[ClassZ] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn weight(&self) -> ClassZ {
        self.segments
            .iter()
            .fold(ClassZ::new(0, 0), |a, b| a + *b)
    }

    /// Slope of the first (lowest-slope) segment.
    pub fn first_slope(&self) -> Slope {
        self.segments[0].mu()
    }

    pub fn is_vertical(&self) -> bool {
        self.segments.iter().all(|s| s.rank == 0)
    }

    /// `Σ deg(x_i)` over segments of slope exactly `mu`.
    pub fn deg_at_slope(&self, mu: Slope) -> i64 {
        self.segments
            .iter()
            .filter(|s| s.mu() == mu)
            .map(|s| s.deg())
            .sum()
    }

    /// `Σ deg(x_i)` over segments of slope strictly above `mu`.
    pub fn deg_above(&self, mu: Slope) -> i64 {
        self.segments
            .iter()
            .filter(|s| s.mu() > mu)
            .map(|s| s.deg())
            .sum()
    }

    pub fn deg_at_least(&self, mu: Slope) -> i64 {
        self.segments
            .iter()
            .filter(|s| s.mu() >= mu)
            .map(|s| s.deg())
            .sum()
    }

    pub fn rank_at_least(&self, mu: Slope) -> i64 {
        self.segments.iter().filter(|s| s.mu() >= mu).map(|s| s.rank).sum()
    }

    /// Slope → total ray multiple at that slope.
    pub fn deg_profile(&self) -> BTreeMap<Slope, i64> {
        let mut m = BTreeMap::new();
        for s in &self.segments {
            *m.entry(s.mu()).or_insert(0) += s.deg();
        }
        m
    }

    /// Maximal runs of equal slope, in increasing slope order.
    pub fn slope_blocks(&self) -> Vec<&[ClassZ]> {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=self.segments.len() {
            if i == self.segments.len() || self.segments[i].mu() != self.segments[start].mu() {
                out.push(&self.segments[start..i]);
                start = i;
            }
        }
        out
    }

    pub fn hn_type(&self) -> HNType {
        HNType(
            self.slope_blocks()
                .into_iter()
                .map(|b| b.iter().fold(ClassZ::new(0, 0), |a, x| a + *x))
                .collect(),
        )
    }

    /// Per-slope `(primitive direction, partition of ray multiples)`.
    pub fn omega_index(&self) -> Vec<(ClassZ, Vec<i64>)> {
        self.slope_blocks()
            .into_iter()
            .map(|b| (b[0].primitive(), b.iter().map(|x| x.deg()).collect()))
            .collect()
    }

    pub fn omega_inverse(index: &[(ClassZ, Vec<i64>)]) -> Result<ConvexPath> {
        let mut segs = Vec::new();
        for (delta, parts) in index {
            if !delta.is_primitive() {
                return Err(Error::Invalid(format!("{delta} is not primitive")));
            }
            segs.extend(parts.iter().map(|&l| delta.scale(l)));
        }
        ConvexPath::canonical(segs)
    }

    pub fn to_pairs(&self) -> Vec<[i64; 2]> {
        self.segments.iter().map(|s| [s.rank, s.degree]).collect()
    }

    pub fn from_pairs(pairs: &[[i64; 2]]) -> Result<ConvexPath> {
        Self::canonical(pairs.iter().map(|p| ClassZ::new(p[0], p[1])).collect())
    }
}

impl fmt::Debug for ConvexPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for ConvexPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for ConvexPath {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConvexPath {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<[i64; 2]>::deserialize(d)?;
        ConvexPath::from_pairs(&v).map_err(serde::de::Error::custom)
    }
}

/// Result of comparing two paths (or HN types) in the weak order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathOrder {
    Less,
    Greater,
    Equivalent,
    Equal,
    Incomparable,
}

/// Compare deg profiles scanning from the top slope down: at the first slope where
/// they differ, the path carrying more degree there is the smaller one.
fn profile_cmp(p: &ConvexPath, q: &ConvexPath) -> Ordering {
    let (pp, qp) = (p.deg_profile(), q.deg_profile());
    let mut slopes: Vec<Slope> = pp.keys().chain(qp.keys()).copied().collect();
    slopes.sort();
    slopes.dedup();
    for mu in slopes.into_iter().rev() {
        let a = pp.get(&mu).copied().unwrap_or(0);
        let b = qp.get(&mu).copied().unwrap_or(0);
        if a != b {
            return b.cmp(&a);
        }
    }
    Ordering::Equal
}

/// The weak order `≼` on convex paths of equal weight.
pub fn path_cmp(p: &ConvexPath, q: &ConvexPath) -> Result<PathOrder> {
    if p.weight() != q.weight() {
        return Err(Error::WeightMismatch(format!("{p} vs {q}")));
    }
    Ok(match profile_cmp(p, q) {
        Ordering::Less => PathOrder::Less,
        Ordering::Greater => PathOrder::Greater,
        Ordering::Equal if p == q => PathOrder::Equal,
        Ordering::Equal => PathOrder::Equivalent,
    })
}

/// `p ≺ q` (strict).
pub fn path_lt(p: &ConvexPath, q: &ConvexPath) -> bool {
    profile_cmp(p, q) == Ordering::Less
}

/// A total order refining `≼`: ties within an equivalence class are broken by
/// comparing the per-slope partitions from the top slope down, the
/// lexicographically larger partition being larger.
pub fn linear_cmp(p: &ConvexPath, q: &ConvexPath) -> Ordering {
    profile_cmp(p, q).then_with(|| {
        let (a, b) = (p.omega_index(), q.omega_index());
        for (x, y) in a.iter().rev().zip(b.iter().rev()) {
            let c = x.1.cmp(&y.1).then_with(|| x.0.cmp(&y.0));
            if c != Ordering::Equal {
                return c;
            }
        }
        a.len().cmp(&b.len()).then_with(|| p.cmp(q))
    })
}

/// Sequence of classes with strictly increasing slopes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HNType(pub Vec<ClassZ>);

impl fmt::Debug for HNType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Order on HN types: compare from the last block backwards; at the first
/// divergence the type with the larger slope (or, at equal slope, the larger
/// degree) is the smaller one.
pub fn hn_cmp(h1: &HNType, h2: &HNType) -> PathOrder {
    if h1 == h2 {
        return PathOrder::Equal;
    }
    let (a, b) = (&h1.0, &h2.0);
    let n = a.len().min(b.len());
    for i in 0..n {
        let x = a[a.len() - 1 - i];
        let y = b[b.len() - 1 - i];
        if x == y {
            continue;
        }
        let (mx, my) = (x.mu(), y.mu());
        if mx > my || (mx == my && x.degree > y.degree) {
            return PathOrder::Less;
        }
        if my > mx || (mx == my && y.degree > x.degree) {
            return PathOrder::Greater;
        }
        return PathOrder::Incomparable;
    }
    PathOrder::Incomparable
}

/// All convex paths of weight `alpha` whose first slope is at least `floor`,
/// sorted from the top of the linear order down.
pub fn enumerate_paths(alpha: ClassZ, floor: Slope) -> Result<Vec<ConvexPath>> {
    alpha.check_positive()?;
    let mut out = Vec::new();
    let mut cur = Vec::new();
    enum_rec(alpha, floor, None, &mut cur, &mut out);
    out.sort_by(|a, b| linear_cmp(b, a));
    Ok(out)
}

fn ceil_mul(q: Rational64, r: i64) -> i64 {
    (q * Rational64::from_integer(r)).ceil().to_integer()
}

fn enum_rec(
    rem: ClassZ,
    floor: Slope,
    last: Option<(Slope, i64)>,
    cur: &mut Vec<ClassZ>,
    out: &mut Vec<ConvexPath>,
) {
    if rem == ClassZ::new(0, 0) {
        if !cur.is_empty() {
            out.push(ConvexPath::from_sorted(cur.clone()));
        }
        return;
    }
    if rem.rank < 0 {
        return;
    }
    let mut cands = Vec::new();
    if rem.rank == 0 {
        for d in 1..=rem.degree {
            cands.push(ClassZ::new(0, d));
        }
    } else if let Slope::Finite(f) = floor {
        for r in 1..=rem.rank {
            let lo = ceil_mul(f, r);
            // the rest must carry degree at least f·(rank left) (or 0 if only vertical remains)
            let rest = rem.rank - r;
            let hi = if rest > 0 {
                rem.degree - ceil_mul(f, rest)
            } else {
                rem.degree
            };
            for d in lo..=hi {
                cands.push(ClassZ::new(r, d));
            }
        }
    }
    for x in cands {
        let key = segment_key(&x);
        if x.mu() < floor {
            continue;
        }
        if let Some(l) = last {
            if key < l {
                continue;
            }
        }
        cur.push(x);
        enum_rec(rem - x, floor, Some(key), cur, out);
        cur.pop();
    }
}

/// An integer matrix `(a b; c d)` of determinant one, acting on column vectors
/// `(rank, degree)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SL2Matrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl fmt::Display for SL2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl SL2Matrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::NotUnimodular(a, b, c, d));
        }
        Ok(SL2Matrix { a, b, c, d })
    }

    pub fn identity() -> Self {
        SL2Matrix { a: 1, b: 0, c: 0, d: 1 }
    }

    pub fn apply(&self, x: &ClassZ) -> ClassZ {
        ClassZ::new(
            self.a * x.rank + self.b * x.degree,
            self.c * x.rank + self.d * x.degree,
        )
    }

    pub fn compose(&self, o: &SL2Matrix) -> SL2Matrix {
        SL2Matrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> SL2Matrix {
        SL2Matrix { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// A matrix sending the primitive class `y` to `(0, 1)`.
    pub fn to_vertical(y: &ClassZ) -> SL2Matrix {
        let (r, d) = (y.rank, y.degree);
        // need c·r + e·d = 1
        let ext = r.extended_gcd(&d);
        let (mut c, mut e) = (ext.x, ext.y);
        if ext.gcd < 0 {
            c = -c;
            e = -e;
        }
        SL2Matrix { a: d, b: -r, c, d: e }
    }
}

pub fn sl2_apply(g: &SL2Matrix, p: &ConvexPath) -> Result<ConvexPath> {
    let segs: Vec<ClassZ> = p.segments().iter().map(|x| g.apply(x)).collect();
    if segs.iter().any(|s| !s.is_positive()) {
        return Err(Error::OutOfCone);
    }
    ConvexPath::canonical(segs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(r: i64, d: i64) -> ClassZ {
        ClassZ::new(r, d)
    }

    fn path(v: &[(i64, i64)]) -> ConvexPath {
        ConvexPath::canonical(v.iter().map(|&(r, d)| c(r, d)).collect()).unwrap()
    }

    /// Independent brute force: all multisets of positive classes summing to
    /// `alpha` drawn from a box, filtered by floor.
    fn brute_paths(alpha: ClassZ, floor: Slope, bound: i64) -> Vec<ConvexPath> {
        let mut pool = Vec::new();
        for r in 0..=alpha.rank {
            for d in -bound..=bound {
                let x = c(r, d);
                if x.is_positive() && x.mu() >= floor {
                    pool.push(x);
                }
            }
        }
        let mut out = std::collections::BTreeSet::new();
        fn go(
            pool: &[ClassZ],
            i: usize,
            rem: ClassZ,
            floor: Rational64,
            cur: &mut Vec<ClassZ>,
            out: &mut std::collections::BTreeSet<ConvexPath>,
        ) {
            if rem == ClassZ::new(0, 0) {
                if !cur.is_empty() {
                    out.insert(ConvexPath::canonical(cur.clone()).unwrap());
                }
                return;
            }
            // every pool item has degree at least floor·rank
            if rem.rank < 0 || Rational64::from_integer(rem.degree) < floor * rem.rank {
                return;
            }
            if i == pool.len() {
                return;
            }
            go(pool, i + 1, rem, floor, cur, out);
            let x = pool[i];
            cur.push(x);
            go(pool, i, rem - x, floor, cur, out);
            cur.pop();
        }
        let f = match floor {
            Slope::Finite(f) => f,
            Slope::Infinite => Rational64::from_integer(0),
        };
        go(&pool, 0, alpha, f, &mut Vec::new(), &mut out);
        out.into_iter().collect()
    }

    #[test]
    fn slope_examples() {
        assert_eq!(c(2, 4).slope().unwrap(), Slope::int(2));
        assert_eq!(c(0, 3).slope().unwrap(), Slope::Infinite);
        assert_eq!(c(3, -2).slope().unwrap(), Slope::ratio(-2, 3));
        assert!(c(0, 0).slope().is_err());
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler_form(&c(1, 0), &c(0, 1)), 1);
        assert_eq!(euler_form(&c(3, 7), &c(3, 7)), 0);
        assert_eq!(euler_form(&c(1, -2), &c(0, 2)), 2);
    }

    #[test]
    fn ray_examples() {
        assert_eq!(c(0, 4).ray_decompose().unwrap(), (4, c(0, 1)));
        assert_eq!(c(2, 4).ray_decompose().unwrap(), (2, c(1, 2)));
        assert_eq!(c(3, -6).ray_decompose().unwrap(), (3, c(1, -2)));
        assert!(c(-1, 2).ray_decompose().is_err());
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(path(&[(0, 1), (1, 0)]).segments(), &[c(1, 0), c(0, 1)]);
        assert_eq!(path(&[(0, 1), (0, 2)]).segments(), &[c(0, 2), c(0, 1)]);
        assert_eq!(path(&[(1, 1)]).segments(), &[c(1, 1)]);
        assert_eq!(ConvexPath::canonical(vec![]), Err(Error::EmptyPath));
    }

    #[test]
    fn deg_examples() {
        assert_eq!(path(&[(0, 2), (0, 1)]).deg_at_slope(Slope::Infinite), 3);
        let p = path(&[(1, 0), (0, 1)]);
        assert_eq!(p.deg_at_slope(Slope::Infinite), 1);
        assert_eq!(p.deg_above(Slope::int(0)), 1);
        assert_eq!(path(&[(1, 1)]).deg_at_slope(Slope::Infinite), 0);
    }

    #[test]
    fn cmp_examples() {
        let p = path(&[(1, -1), (0, 1)]);
        let q = path(&[(1, 0)]);
        assert_eq!(path_cmp(&p, &q).unwrap(), PathOrder::Less);
        assert_eq!(path_cmp(&q, &p).unwrap(), PathOrder::Greater);
        assert_eq!(path_cmp(&p, &p).unwrap(), PathOrder::Equal);
        let a = path(&[(0, 2)]);
        let b = path(&[(0, 1), (0, 1)]);
        assert_eq!(path_cmp(&a, &b).unwrap(), PathOrder::Equivalent);
        assert!(path_cmp(&a, &q).is_err());
    }

    #[test]
    fn hn_examples() {
        assert_eq!(path(&[(0, 2), (0, 1)]).hn_type(), HNType(vec![c(0, 3)]));
        assert_eq!(path(&[(1, 0), (0, 1)]).hn_type(), HNType(vec![c(1, 0), c(0, 1)]));
        assert_eq!(
            path(&[(1, -1), (0, 1), (0, 1)]).hn_type(),
            HNType(vec![c(1, -1), c(0, 2)])
        );
    }

    #[test]
    fn enumerate_examples() {
        let v = enumerate_paths(c(0, 2), Slope::int(0)).unwrap();
        assert_eq!(v, vec![path(&[(0, 2)]), path(&[(0, 1), (0, 1)])]);
        let v = enumerate_paths(c(1, 1), Slope::int(0)).unwrap();
        assert_eq!(v.len(), 2);
        assert!(v.contains(&path(&[(1, 1)])) && v.contains(&path(&[(1, 0), (0, 1)])));
        let v = enumerate_paths(c(1, 0), Slope::int(-2)).unwrap();
        let want = [
            path(&[(1, 0)]),
            path(&[(1, -1), (0, 1)]),
            path(&[(1, -2), (0, 2)]),
            path(&[(1, -2), (0, 1), (0, 1)]),
        ];
        assert_eq!(v.len(), 4);
        for w in &want {
            assert!(v.contains(w));
        }
    }

    #[test]
    fn enumerate_matches_brute_force() {
        for alpha in [c(0, 3), c(1, 0), c(1, 2), c(2, 0), c(2, 1), c(2, -1), c(3, 1)] {
            for floor in [Slope::int(-2), Slope::ratio(-1, 2), Slope::int(0), Slope::int(1)] {
                let mut got = enumerate_paths(alpha, floor).unwrap();
                got.sort();
                assert_eq!(got, brute_paths(alpha, floor, 8), "{alpha:?} {floor:?}");
            }
        }
    }

    #[test]
    fn vertical_counts_are_partition_numbers() {
        let p = [1, 1, 2, 3, 5, 7, 11, 15];
        for m in 1..8 {
            for floor in [Slope::int(-3), Slope::Infinite] {
                assert_eq!(enumerate_paths(c(0, m), floor).unwrap().len(), p[m as usize]);
            }
        }
    }

    #[test]
    fn omega_examples() {
        assert_eq!(path(&[(0, 2), (0, 1)]).omega_index(), vec![(c(0, 1), vec![2, 1])]);
        assert_eq!(
            path(&[(1, 0), (0, 1)]).omega_index(),
            vec![(c(1, 0), vec![1]), (c(0, 1), vec![1])]
        );
        for p in enumerate_paths(c(1, 0), Slope::int(-2)).unwrap() {
            assert_eq!(ConvexPath::omega_inverse(&p.omega_index()).unwrap(), p);
        }
    }

    #[test]
    fn sl2_examples() {
        let shear = SL2Matrix::new(1, 0, 1, 1).unwrap();
        assert_eq!(sl2_apply(&shear, &path(&[(1, 0)])).unwrap(), path(&[(1, 1)]));
        let p = path(&[(1, -1), (0, 1)]);
        assert_eq!(sl2_apply(&SL2Matrix::identity(), &p).unwrap(), p);
        assert_eq!(sl2_apply(&shear, &p).unwrap(), path(&[(1, 0), (0, 1)]));
        let rot = SL2Matrix::new(0, 1, -1, 0).unwrap();
        assert_eq!(sl2_apply(&rot, &path(&[(1, 0)])), Err(Error::OutOfCone));
        assert!(SL2Matrix::new(1, 1, 1, 1).is_err());
    }

    #[test]
    fn to_vertical_works() {
        for y in [c(1, 0), c(2, 3), c(3, -1), c(1, 5), c(0, 1)] {
            let g = SL2Matrix::to_vertical(&y);
            assert_eq!(g.a * g.d - g.b * g.c, 1);
            assert_eq!(g.apply(&y), c(0, 1));
        }
    }

    #[test]
    fn weak_order_matches_hn_order() {
        for alpha in [c(1, 0), c(2, 0), c(2, 1), c(1, 2), c(0, 3)] {
            let ps = enumerate_paths(alpha, Slope::int(-2)).unwrap();
            for p in &ps {
                for q in &ps {
                    let a = path_cmp(p, q).unwrap();
                    let b = hn_cmp(&p.hn_type(), &q.hn_type());
                    match a {
                        PathOrder::Less | PathOrder::Greater => assert_eq!(a, b, "{p} {q}"),
                        // equivalent paths share the HN type
                        PathOrder::Equivalent | PathOrder::Equal => {
                            assert_eq!(b, PathOrder::Equal)
                        }
                        PathOrder::Incomparable => unreachable!(),
                    }
                }
            }
        }
    }

    #[test]
    fn euler_form_is_sl2_invariant() {
        let gs = [
            SL2Matrix::new(1, 0, 1, 1).unwrap(),
            SL2Matrix::new(2, 1, 1, 1).unwrap(),
            SL2Matrix::new(0, -1, 1, 0).unwrap(),
        ];
        for g in gs {
            for x in [c(1, 2), c(-3, 1), c(0, 5)] {
                for y in [c(2, -1), c(4, 4), c(1, 0)] {
                    assert_eq!(euler_form(&g.apply(&x), &g.apply(&y)), euler_form(&x, &y));
                }
            }
        }
    }

    #[test]
    fn sl2_functorial() {
        let g1 = SL2Matrix::new(1, 0, 1, 1).unwrap();
        let g2 = SL2Matrix::new(1, 0, 2, 1).unwrap();
        for p in enumerate_paths(c(2, 1), Slope::int(-1)).unwrap() {
            let lhs = sl2_apply(&g1.compose(&g2), &p).unwrap();
            let rhs = sl2_apply(&g1, &sl2_apply(&g2, &p).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
