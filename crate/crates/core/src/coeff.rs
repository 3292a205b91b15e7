//! Exact Laurent polynomials in `σ^{1/2}` and `σ̄^{1/2}` with rational coefficients.
//!
//! Exponents are stored doubled: the pair `(a2, b2)` stands for the monomial
//! `σ^{a2/2} σ̄^{b2/2}`. Only pairs with `a2 ≡ b2 (mod 2)` are allowed, which is
//! exactly the condition for the monomial to be a Laurent monomial in
//! `ν = −(σσ̄)^{−1/2}` and `t = σ^{1/2} σ̄^{−1/2}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Doubled exponent pair `(a2, b2)` of `σ^{a2/2} σ̄^{b2/2}`.
pub type Exp = (i32, i32);

/// An element of `ℚ[σ^{±1/2}, σ̄^{±1/2}]`.
///
/// Terms are kept sorted by exponent with no zero coefficients, so structural
/// equality is ring equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Coefficient {
    terms: Vec<(Exp, BigRational)>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_map(std::iter::once(((0, 0), c)).collect())
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(rat(n))
    }

    /// `c · σ^{a2/2} σ̄^{b2/2}`.
    pub fn monomial(a2: i32, b2: i32, c: BigRational) -> Result<Self> {
        if (a2 - b2).rem_euclid(2) != 0 {
            return Err(Error::Parity { a2, b2 });
        }
        Ok(Self::from_map(std::iter::once(((a2, b2), c)).collect()))
    }

    fn mono(a2: i32, b2: i32, c: i64) -> Self {
        Self::monomial(a2, b2, rat(c)).expect("parity")
    }

    pub fn sigma() -> Self {
        Self::mono(2, 0, 1)
    }

    pub fn sigma_bar() -> Self {
        Self::mono(0, 2, 1)
    }

    /// `ν = −(σσ̄)^{−1/2}`.
    pub fn nu() -> Self {
        Self::mono(-1, -1, -1)
    }

    /// `t = σ^{1/2} σ̄^{−1/2}`.
    pub fn t() -> Self {
        Self::mono(1, -1, 1)
    }

    /// `ν^m t^k`.
    pub fn nu_t(m: i32, k: i32) -> Self {
        // ν^m t^k = (−1)^m σ^{(−m+k)/2} σ̄^{(−m−k)/2}
        let sign = if m.rem_euclid(2) == 0 { 1 } else { -1 };
        Self::mono(k - m, -k - m, sign)
    }

    pub fn nu_pow(m: i32) -> Self {
        Self::nu_t(m, 0)
    }

    pub(crate) fn from_map(map: BTreeMap<Exp, BigRational>) -> Self {
        Coefficient {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &[(Exp, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == (0, 0) && self.terms[0].1.is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant rational, if the coefficient is a constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [((0, 0), c)] => Some(c.clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Coefficient {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Multiply by the monomial `σ^{a2/2} σ̄^{b2/2}`.
    pub fn shift(&self, e: Exp) -> Self {
        Coefficient {
            terms: self
                .terms
                .iter()
                .map(|((a, b), x)| ((a + e.0, b + e.1), x.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `σ ↦ σ^{−1}`, `σ̄ ↦ σ̄^{−1}` on a coefficient.
    pub fn bar(&self) -> Self {
        Self::from_map(
            self.terms
                .iter()
                .map(|((a, b), c)| ((-a, -b), c.clone()))
                .collect(),
        )
    }

    /// `σ ↔ σ̄`.
    pub fn swap_sigma(&self) -> Self {
        Self::from_map(
            self.terms
                .iter()
                .map(|((a, b), c)| ((*b, *a), c.clone()))
                .collect(),
        )
    }

    pub fn is_sigma_symmetric(&self) -> bool {
        self.swap_sigma() == *self
    }

    /// Every monomial satisfies `a + b < 0`.
    pub fn in_positive_cone(&self) -> bool {
        self.terms.iter().all(|((a, b), _)| a + b < 0)
    }

    /// Rewrite as `Σ c_{m,k} ν^m t^k`.
    pub fn nt_form(&self) -> BTreeMap<(i32, i32), BigRational> {
        let mut out = BTreeMap::new();
        for ((a2, b2), c) in &self.terms {
            let s = (a2 + b2) / 2;
            let k = (a2 - b2) / 2;
            let c = if s.rem_euclid(2) == 0 { c.clone() } else { -c.clone() };
            out.insert((-s, k), c);
        }
        out
    }

    pub fn from_nt(map: &BTreeMap<(i32, i32), BigRational>) -> Self {
        let mut acc = BTreeMap::new();
        for (&(m, k), c) in map {
            let x = Self::nu_t(m, k);
            let (e, sgn) = (x.terms[0].0, x.terms[0].1.clone());
            *acc.entry(e).or_insert_with(BigRational::zero) += c * sgn;
        }
        Self::from_map(acc)
    }

    /// Coefficients lie in `ν·ℕ[ν, t^{±1}]`.
    pub fn in_nu_n_nu_t(&self) -> bool {
        self.nt_form()
            .iter()
            .all(|(&(m, _), c)| m >= 1 && !c.is_negative() && c.is_integer())
    }

    /// Coefficients lie in `ℕ[ν^{±1}, t^{±1}]`.
    pub fn in_n_laurent(&self) -> bool {
        self.nt_form()
            .values()
            .all(|c| !c.is_negative() && c.is_integer())
    }

    /// The unique `r` supported on `a + b < 0` with `r − bar(r) = d`.
    pub fn split_positive(d: &Coefficient) -> Result<Coefficient> {
        if d.bar() != -d {
            return Err(Error::SplitObstruction(format!(
                "{d} is not bar-antisymmetric"
            )));
        }
        if d.terms.iter().any(|((a, b), _)| a + b == 0) {
            return Err(Error::SplitObstruction(format!(
                "{d} has a nonzero degree-zero part"
            )));
        }
        Ok(Coefficient {
            terms: d
                .terms
                .iter()
                .filter(|((a, b), _)| a + b < 0)
                .cloned()
                .collect(),
        })
    }

    /// Exact division. Fails if `self` is not a multiple of `d`.
    pub fn div_exact(&self, d: &Coefficient) -> Result<Coefficient> {
        if d.is_zero() {
            return Err(Error::Division("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if d.terms.len() == 1 {
            let ((a, b), c) = &d.terms[0];
            return Ok(self.shift((-a, -b)).scale(&c.recip()));
        }
        let bounds = |x: &Coefficient| {
            let a_min = x.terms.iter().map(|t| t.0 .0).min().unwrap();
            let a_max = x.terms.iter().map(|t| t.0 .0).max().unwrap();
            let b_min = x.terms.iter().map(|t| t.0 .1).min().unwrap();
            let b_max = x.terms.iter().map(|t| t.0 .1).max().unwrap();
            (a_min, a_max, b_min, b_max)
        };
        let (na0, na1, nb0, nb1) = bounds(self);
        let (da0, da1, db0, db1) = bounds(d);
        let (qa0, qa1, qb0, qb1) = (na0 - da0, na1 - da1, nb0 - db0, nb1 - db1);
        let fail = || Error::Division(format!("{self} is not divisible by {d}"));
        if qa0 > qa1 || qb0 > qb1 {
            return Err(fail());
        }
        let (ld_e, ld_c) = d.terms.last().cloned().unwrap();
        let mut rem: BTreeMap<Exp, BigRational> = self.terms.iter().cloned().collect();
        let mut quot = BTreeMap::new();
        while let Some((&(a, b), c)) = rem.iter().next_back() {
            let qe = (a - ld_e.0, b - ld_e.1);
            if qe.0 < qa0 || qe.0 > qa1 || qe.1 < qb0 || qe.1 > qb1 {
                return Err(fail());
            }
            let qc = c / &ld_c;
            for ((da, db), dc) in &d.terms {
                let e = (da + qe.0, db + qe.1);
                let v = rem.entry(e).or_insert_with(BigRational::zero);
                *v -= &qc * dc;
                if v.is_zero() {
                    rem.remove(&e);
                }
            }
            quot.insert(qe, qc);
        }
        Ok(Self::from_map(quot))
    }

    /// Numeric specialization at given values of `σ^{1/2}` and `σ̄^{1/2}`.
    pub fn evaluate(&self, s_half: Complex64, sbar_half: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|((a, b), c)| {
                let c = c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN);
                s_half.powi(*a) * sbar_half.powi(*b) * c
            })
            .sum()
    }

    pub fn to_records(&self) -> Vec<CoeffRecord> {
        self.terms
            .iter()
            .map(|((a, b), c)| CoeffRecord {
                s_half: *a,
                sbar_half: *b,
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect()
    }

    pub fn from_records(recs: &[CoeffRecord]) -> Result<Self> {
        let mut acc = BTreeMap::new();
        for r in recs {
            if (r.s_half - r.sbar_half).rem_euclid(2) != 0 {
                return Err(Error::Parity { a2: r.s_half, b2: r.sbar_half });
            }
            let num: BigInt = r.num.parse().map_err(|_| Error::Parse(format!("bad numerator {}", r.num)))?;
            let den: BigInt = r.den.parse().map_err(|_| Error::Parse(format!("bad denominator {}", r.den)))?;
            if den.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            *acc.entry((r.s_half, r.sbar_half)).or_insert_with(BigRational::zero) += BigRational::new(num, den);
        }
        Ok(Self::from_map(acc))
    }

    /// Human-readable rendering in the `(ν, t)` coordinates.
    pub fn to_nt_string(&self) -> String {
        render_nt(&self.nt_form(), "nu", "t", "*", "^")
    }

    pub fn to_tex(&self) -> String {
        render_nt(&self.nt_form(), "\\nu", "t", " ", "^")
    }
}

fn render_nt(
    nt: &BTreeMap<(i32, i32), BigRational>,
    nu: &str,
    t: &str,
    times: &str,
    caret: &str,
) -> String {
    if nt.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (&(m, k), c)) in nt.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors = Vec::new();
        if !a.is_one() || (m == 0 && k == 0) {
            factors.push(a.to_string());
        }
        let var = |name: &str, e: i32| match e {
            0 => None,
            1 => Some(name.to_string()),
            _ if !(0..=9).contains(&e) => Some(format!("{name}{caret}{{{e}}}")),
            _ => Some(format!("{name}{caret}{e}")),
        };
        factors.extend(var(nu, m));
        factors.extend(var(t, k));
        out.push_str(&factors.join(times));
    }
    out
}

/// Serialized form of one term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffRecord {
    pub s_half: i32,
    pub sbar_half: i32,
    pub num: String,
    pub den: String,
}

impl Serialize for Coefficient {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_records().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Coefficient {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let recs = Vec::<CoeffRecord>::deserialize(d)?;
        Coefficient::from_records(&recs).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_nt_string())
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coefficient({self})")
    }
}

fn merge(x: &Coefficient, y: &Coefficient, negate_y: bool) -> Coefficient {
    let mut out = Vec::with_capacity(x.terms.len() + y.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < x.terms.len() || j < y.terms.len() {
        let take_x = j >= y.terms.len() || (i < x.terms.len() && x.terms[i].0 < y.terms[j].0);
        let take_y = i >= x.terms.len() || (j < y.terms.len() && y.terms[j].0 < x.terms[i].0);
        if take_x {
            out.push(x.terms[i].clone());
            i += 1;
        } else if take_y {
            let (e, c) = &y.terms[j];
            out.push((*e, if negate_y { -c.clone() } else { c.clone() }));
            j += 1;
        } else {
            let c = if negate_y {
                &x.terms[i].1 - &y.terms[j].1
            } else {
                &x.terms[i].1 + &y.terms[j].1
            };
            if !c.is_zero() {
                out.push((x.terms[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    Coefficient { terms: out }
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        merge(self, rhs, false)
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        merge(self, rhs, true)
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        if self.is_zero() || rhs.is_zero() {
            return Coefficient::zero();
        }
        let mut acc: BTreeMap<Exp, BigRational> = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            for ((a2, b2), c2) in &rhs.terms {
                *acc.entry((a + a2, b + b2)).or_insert_with(BigRational::zero) += c * c2;
            }
        }
        Coefficient::from_map(acc)
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Coefficient {
            type Output = Coefficient;
            fn $m(self, rhs: Coefficient) -> Coefficient {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Coefficient> for Coefficient {
            type Output = Coefficient;
            fn $m(self, rhs: &Coefficient) -> Coefficient {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        -&self
    }
}

impl std::iter::Sum for Coefficient {
    fn sum<I: Iterator<Item = Coefficient>>(iter: I) -> Self {
        iter.fold(Coefficient::zero(), |a, b| &a + &b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn monomial_examples() {
        assert_eq!(Coefficient::monomial(2, 0, r(1, 1)).unwrap(), Coefficient::sigma());
        assert_eq!(Coefficient::monomial(0, 0, r(5, 1)).unwrap(), Coefficient::from_int(5));
        assert_eq!(Coefficient::monomial(-1, -1, r(-1, 1)).unwrap(), Coefficient::nu());
        assert!(Coefficient::monomial(1, 0, r(1, 1)).is_err());
        assert!(Coefficient::monomial(3, 3, r(0, 1)).unwrap().is_zero());
    }

    #[test]
    fn ring_examples() {
        let nu = Coefficient::nu();
        assert_eq!(&nu * &nu, Coefficient::monomial(-2, -2, r(1, 1)).unwrap());
        let s = Coefficient::sigma();
        assert!((&s + &(-&s)).is_zero());
        let sb_inv = Coefficient::monomial(0, -2, r(1, 1)).unwrap();
        assert_eq!(&s * &sb_inv, Coefficient::t().pow(2));
    }

    #[test]
    fn bar_examples() {
        assert_eq!(Coefficient::sigma().bar(), Coefficient::monomial(-2, 0, r(1, 1)).unwrap());
        assert_eq!(Coefficient::from_int(3).bar(), Coefficient::from_int(3));
        assert_eq!(Coefficient::nu().bar(), Coefficient::nu_pow(-1));
    }

    #[test]
    fn nt_examples() {
        let nt = Coefficient::sigma().nt_form();
        assert_eq!(nt.into_iter().collect::<Vec<_>>(), vec![((-1, 1), r(-1, 1))]);
        let nt = Coefficient::nu().nt_form();
        assert_eq!(nt.into_iter().collect::<Vec<_>>(), vec![((1, 0), r(1, 1))]);
        let nt = (Coefficient::sigma() * Coefficient::sigma_bar()).nt_form();
        assert_eq!(nt.into_iter().collect::<Vec<_>>(), vec![((-2, 0), r(1, 1))]);
    }

    #[test]
    fn symmetry_examples() {
        assert!(Coefficient::nu().is_sigma_symmetric());
        assert!(!Coefficient::sigma().is_sigma_symmetric());
        let x = Coefficient::nu() * (Coefficient::t() + Coefficient::nu_t(0, -1));
        assert!(x.is_sigma_symmetric());
    }

    #[test]
    fn split_examples() {
        let nu = Coefficient::nu();
        let d = &nu - &nu.bar();
        assert_eq!(Coefficient::split_positive(&d).unwrap(), nu);
        assert!(Coefficient::split_positive(&Coefficient::zero()).unwrap().is_zero());
        let tt = Coefficient::t() + Coefficient::nu_t(0, -1);
        let d = (Coefficient::nu_pow(2) - Coefficient::nu_pow(-2)) * tt.clone();
        assert_eq!(Coefficient::split_positive(&d).unwrap(), Coefficient::nu_pow(2) * tt);
        assert!(Coefficient::split_positive(&Coefficient::one()).is_err());
        assert!(Coefficient::split_positive(&Coefficient::nu()).is_err());
    }

    #[test]
    fn exact_division() {
        let a = Coefficient::one() - Coefficient::sigma();
        let b = Coefficient::nu() + Coefficient::t().pow(3) + Coefficient::from_int(2);
        let p = &a * &b;
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert_eq!(p.div_exact(&b).unwrap(), a);
        assert!(b.div_exact(&a).is_err());
    }

    fn arb_coeff() -> impl Strategy<Value = Coefficient> {
        prop::collection::vec((-3i32..=3, -3i32..=3, -4i64..=4), 0..5).prop_map(|v| {
            v.into_iter()
                .map(|(m, k, c)| Coefficient::nu_t(m, k).scale(&r(c, 1)))
                .sum()
        })
    }

    proptest! {
        #[test]
        fn bar_is_involutive_ring_map(x in arb_coeff(), y in arb_coeff()) {
            prop_assert_eq!(x.bar().bar(), x.clone());
            prop_assert_eq!((&x * &y).bar(), &x.bar() * &y.bar());
            prop_assert_eq!((&x + &y).bar(), &x.bar() + &y.bar());
        }

        #[test]
        fn nt_roundtrip(x in arb_coeff()) {
            prop_assert_eq!(Coefficient::from_nt(&x.nt_form()), x);
        }

        #[test]
        fn split_recovers(x in arb_coeff()) {
            let pos: Coefficient = Coefficient::from_map(
                x.terms().iter().filter(|((a, b), _)| a + b < 0).cloned().collect());
            let d = &pos - &pos.bar();
            let got = Coefficient::split_positive(&d).unwrap();
            prop_assert!(got.in_positive_cone());
            prop_assert_eq!(&got - &got.bar(), d);
        }

        #[test]
        fn symmetric_closed_under_mul(x in arb_coeff(), y in arb_coeff()) {
            let xs = &x + &x.swap_sigma();
            let ys = &y + &y.swap_sigma();
            prop_assert!((&xs * &ys).is_sigma_symmetric());
        }
    }
}
