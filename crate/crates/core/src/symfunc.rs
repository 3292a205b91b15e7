//! Partitions and the classical symmetric-function transitions used inside a
//! single ray: complete homogeneous, power sums, Schur and Hall–Littlewood.
//!
//! Polynomials in the commuting ray generators are [`RayPolynomial`]s, keyed by
//! the multiset of generator indices (stored as a partition).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::coeff::Coefficient;
use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid(format!("{parts:?} is not a partition")));
        }
        Ok(Partition(parts))
    }

    /// Sorts and drops zeros.
    pub fn from_multiset(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `λ_i` with `λ_i = 0` past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// `z_λ = Π i^{m_i} m_i!`.
    pub fn z(&self) -> BigInt {
        let mut z = BigInt::one();
        let mut i = 0;
        while i < self.0.len() {
            let mut j = i;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            let m = (j - i) as u32;
            for k in 1..=m {
                z *= BigInt::from(k) * BigInt::from(self.0[i]);
            }
            i = j;
        }
        z
    }

    /// Dominance `self ≥ other` (equal sizes assumed).
    pub fn dominates(&self, other: &Partition) -> bool {
        let n = self.len().max(other.len());
        let (mut a, mut b) = (0u32, 0u32);
        for i in 0..n {
            a += self.part(i);
            b += other.part(i);
            if a < b {
                return false;
            }
        }
        true
    }

    pub fn conjugate(&self) -> Partition {
        let m = self.part(0) as usize;
        Partition((0..m).map(|j| self.0.iter().filter(|&&p| p as usize > j).count() as u32).collect())
    }

    /// `n(λ) = Σ (i−1) λ_i`.
    pub fn n(&self) -> u32 {
        self.0.iter().enumerate().map(|(i, &p)| i as u32 * p).sum()
    }

    /// Concatenation of the multisets.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Partition::from_multiset(v)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// All partitions of `n`, lexicographically decreasing.
pub fn partitions(n: u32) -> Vec<Partition> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// A polynomial in commuting generators `g_1, g_2, …`; a monomial is the
/// multiset of its generator indices.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RayPolynomial {
    terms: BTreeMap<Partition, Coefficient>,
}

impl RayPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Partition::empty(), Coefficient::one())
    }

    pub fn gen(l: u32) -> Self {
        Self::monomial(Partition(vec![l]), Coefficient::one())
    }

    pub fn monomial(m: Partition, c: Coefficient) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn terms(&self) -> &BTreeMap<Partition, Coefficient> {
        &self.terms
    }

    pub fn coeff(&self, m: &Partition) -> Coefficient {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Partition, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &RayPolynomial) -> RayPolynomial {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &RayPolynomial) -> RayPolynomial {
        self.add(&o.scale(&Coefficient::from_int(-1)))
    }

    pub fn scale(&self, c: &Coefficient) -> RayPolynomial {
        let mut r = Self::zero();
        for (m, d) in &self.terms {
            r.add_term(m.clone(), d * c);
        }
        r
    }

    pub fn mul(&self, o: &RayPolynomial) -> RayPolynomial {
        let mut r = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.union(m2), c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, n: u32) -> RayPolynomial {
        (0..n).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Substitute `g_l ↦ images[l]` (index 0 unused).
    pub fn substitute(&self, images: &[RayPolynomial]) -> RayPolynomial {
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Self::monomial(Partition::empty(), c.clone());
            for &l in m.parts() {
                t = t.mul(&images[l as usize]);
            }
            r = r.add(&t);
        }
        r
    }

    /// Rescale generators: `g_l ↦ f(l)·g_l`.
    pub fn rescale_generators(&self, f: impl Fn(u32) -> BigRational) -> RayPolynomial {
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            let s: BigRational = m.parts().iter().map(|&l| f(l)).product();
            r.add_term(m.clone(), c.scale(&s));
        }
        r
    }

    /// Apply a map to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Coefficient) -> Coefficient) -> RayPolynomial {
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            r.add_term(m.clone(), f(c));
        }
        r
    }
}

impl fmt::Debug for RayPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "[{c}]g{m:?}")?;
        }
        Ok(())
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Degree-`l` coefficient of `exp(Σ_j c_j g_j s^j)`; `c[j-1] = c_j`.
pub fn exp_coefficient(c: &[Coefficient], l: u32) -> RayPolynomial {
    exp_series(c, l).swap_remove(l as usize)
}

/// Coefficients `0..=max` of `exp(Σ_j c_j g_j s^j)`.
///
/// Uses `n E_n = Σ_{j=1}^n j c_j g_j E_{n−j}`.
pub fn exp_series(c: &[Coefficient], max: u32) -> Vec<RayPolynomial> {
    let mut e = vec![RayPolynomial::one()];
    for n in 1..=max {
        let mut acc = RayPolynomial::zero();
        for j in 1..=n {
            let cj = match c.get(j as usize - 1) {
                Some(x) if !x.is_zero() => x,
                _ => continue,
            };
            let term = RayPolynomial::gen(j)
                .mul(&e[(n - j) as usize])
                .scale(&cj.scale(&rat(j as i64, n as i64)));
            acc = acc.add(&term);
        }
        e.push(acc);
    }
    e
}

/// Coefficients `1..=max` (index 0 is zero) of `log(1 + Σ g_l s^l)`.
pub fn log_series(max: u32) -> Vec<RayPolynomial> {
    // L_n = g_n − (1/n) Σ_{j=1}^{n−1} j L_j g_{n−j}
    let mut out = vec![RayPolynomial::zero()];
    for n in 1..=max {
        let mut acc = RayPolynomial::gen(n);
        for j in 1..n {
            let t = out[j as usize]
                .mul(&RayPolynomial::gen(n - j))
                .scale(&Coefficient::constant(rat(-(j as i64), n as i64)));
            acc = acc.add(&t);
        }
        out.push(acc);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeneratorChange {
    /// `h_r` in power sums.
    GToP,
    /// `p_r` in complete homogeneous functions.
    PToG,
}

/// Transition table up to `max_degree`: entry `r` expresses `h_r` in the `p_l`
/// (or `p_r` in the `h_l`). Entry 0 is `1` resp. `0`.
pub fn generator_change_exp(direction: GeneratorChange, max_degree: u32) -> Vec<RayPolynomial> {
    match direction {
        GeneratorChange::GToP => {
            let c: Vec<Coefficient> = (1..=max_degree)
                .map(|j| Coefficient::constant(rat(1, j as i64)))
                .collect();
            exp_series(&c, max_degree)
        }
        GeneratorChange::PToG => log_series(max_degree)
            .into_iter()
            .enumerate()
            .map(|(n, p)| p.scale(&Coefficient::from_int(n as i64)))
            .collect(),
    }
}

/// Beta-set of `λ` with `k` beads: `λ_i + k − 1 − i`.
fn beta_set(lambda: &[u32], k: usize) -> Vec<i64> {
    (0..k)
        .map(|i| lambda.get(i).copied().unwrap_or(0) as i64 + (k - 1 - i) as i64)
        .collect()
}

/// Character `χ^λ(ρ)` by the Murnaghan–Nakayama rule on an abacus.
pub fn character(lambda: &Partition, rho: &Partition) -> i64 {
    if lambda.size() != rho.size() {
        return 0;
    }
    let k = lambda.len().max(1);
    let beads = beta_set(lambda.parts(), k);
    mn_rec(beads, rho.parts())
}

fn mn_rec(beads: Vec<i64>, rho: &[u32]) -> i64 {
    let Some((&r, rest)) = rho.split_first() else {
        return 1;
    };
    let r = r as i64;
    let mut total = 0;
    for (i, &b) in beads.iter().enumerate() {
        let nb = b - r;
        if nb < 0 || beads.contains(&nb) {
            continue;
        }
        let between = beads.iter().filter(|&&x| x > nb && x < b).count();
        let sign = if between % 2 == 0 { 1 } else { -1 };
        let mut next = beads.clone();
        next[i] = nb;
        next.sort_unstable_by(|a, b| b.cmp(a));
        total += sign * mn_rec(next, rest);
    }
    total
}

/// `s_λ = Σ_ρ χ^λ(ρ)/z_ρ · p_ρ`, generators read as power sums.
pub fn schur_in_powersum(lambda: &Partition) -> RayPolynomial {
    let mut out = RayPolynomial::zero();
    for rho in partitions(lambda.size()) {
        let chi = character(lambda, &rho);
        if chi != 0 {
            let c = BigRational::new(BigInt::from(chi), rho.z());
            out.add_term(rho, Coefficient::constant(c));
        }
    }
    out
}

/// `p_ρ = Σ_λ χ^λ(ρ) s_λ`, as a map `λ ↦ coefficient`.
pub fn powersum_in_schur(rho: &Partition) -> BTreeMap<Partition, BigRational> {
    partitions(rho.size())
        .into_iter()
        .filter_map(|l| {
            let c = character(&l, rho);
            (c != 0).then(|| (l, BigRational::from_integer(c.into())))
        })
        .collect()
}

/// Jacobi–Trudi: `s_λ = det(h_{λ_i − i + j})`, generators read as `h`.
pub fn jacobi_trudi(lambda: &Partition) -> RayPolynomial {
    let n = lambda.len();
    let h = |k: i64| -> RayPolynomial {
        match k {
            0 => RayPolynomial::one(),
            k if k < 0 => RayPolynomial::zero(),
            k => RayPolynomial::gen(k as u32),
        }
    };
    let mut out = RayPolynomial::zero();
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p, sign| {
        let mut t = RayPolynomial::monomial(Partition::empty(), Coefficient::from_int(sign));
        for (i, &j) in p.iter().enumerate() {
            let f = h(lambda.part(i) as i64 - i as i64 + j as i64);
            if f.is_zero() {
                return;
            }
            t = t.mul(&f);
        }
        out = out.add(&t);
    });
    out
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize], i64)) {
    fn go(v: &mut Vec<usize>, k: usize, sign: i64, f: &mut impl FnMut(&[usize], i64)) {
        if k == v.len() {
            f(v, sign);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            go(v, k + 1, if i == k { sign } else { -sign }, f);
            v.swap(k, i);
        }
    }
    go(v, k, 1, f)
}

/// Semistandard tableaux of shape `λ` and content `μ`, as rows.
pub fn ssyt(lambda: &Partition, mu: &[u32]) -> Vec<Vec<Vec<u32>>> {
    let mut out = Vec::new();
    let rows = lambda.len();
    let mut cur: Vec<Vec<u32>> = vec![Vec::new(); rows];
    fn rec(
        letter: usize,
        lambda: &Partition,
        mu: &[u32],
        cur: &mut Vec<Vec<u32>>,
        out: &mut Vec<Vec<Vec<u32>>>,
    ) {
        if letter == mu.len() {
            if (0..lambda.len()).all(|i| cur[i].len() as u32 == lambda.part(i)) {
                out.push(cur.clone());
            }
            return;
        }
        // place mu[letter] copies of letter+1 as a horizontal strip
        let shape: Vec<u32> = cur.iter().map(|r| r.len() as u32).collect();
        let mut add = vec![0u32; cur.len()];
        strip(0, mu[letter], &shape, lambda, &mut add, &mut |add| {
            for (i, &a) in add.iter().enumerate() {
                for _ in 0..a {
                    cur[i].push(letter as u32 + 1);
                }
            }
            rec(letter + 1, lambda, mu, cur, out);
            for (i, &a) in add.iter().enumerate() {
                for _ in 0..a {
                    cur[i].pop();
                }
            }
        });
    }
    fn strip(
        row: usize,
        left: u32,
        shape: &[u32],
        lambda: &Partition,
        add: &mut Vec<u32>,
        f: &mut dyn FnMut(&[u32]),
    ) {
        if row == shape.len() {
            if left == 0 {
                f(add);
            }
            return;
        }
        // new row length bounded by λ_row and by the old length of the row above
        let cap_above = if row == 0 { u32::MAX } else { shape[row - 1] };
        let max_len = lambda.part(row).min(cap_above);
        let room = max_len.saturating_sub(shape[row]);
        for a in 0..=room.min(left) {
            add[row] = a;
            strip(row + 1, left - a, shape, lambda, add, f);
        }
        add[row] = 0;
    }
    rec(0, lambda, mu, &mut cur, &mut out);
    out
}

/// Charge of a word of partition content.
pub fn charge(word: &[u32]) -> u32 {
    let mut letters: Vec<Option<u32>> = word.iter().map(|&x| Some(x)).collect();
    let mut total = 0;
    while letters.iter().any(|x| x.is_some()) {
        let kmax = letters.iter().flatten().copied().max().unwrap_or(0);
        // positions of the standard subword, found by cyclic right-to-left scans
        let n = letters.len();
        let mut pos = n;
        let mut index = 0;
        for r in 1..=kmax {
            let mut found = None;
            let mut wrapped = false;
            let mut i = pos;
            for _ in 0..n {
                if i == 0 {
                    i = n;
                    wrapped = true;
                }
                i -= 1;
                if letters[i] == Some(r) {
                    found = Some(i);
                    break;
                }
            }
            let i = found.expect("partition content");
            if r > 1 && (wrapped || i > pos) {
                index += 1;
            }
            total += index;
            letters[i] = None;
            pos = i;
        }
    }
    total
}

/// Reading word: rows from bottom to top, each left to right.
fn reading_word(t: &[Vec<u32>]) -> Vec<u32> {
    t.iter().rev().flat_map(|r| r.iter().copied()).collect()
}

/// `K_{λμ}(ν) = Σ_T ν^{charge(T)}` over SSYT of shape `λ`, content `μ`.
pub fn kostka_foulkes(lambda: &Partition, mu: &Partition) -> Result<Coefficient> {
    if lambda.size() != mu.size() {
        return Err(Error::Invalid(format!("{lambda} and {mu} differ in size")));
    }
    Ok(ssyt(lambda, mu.parts())
        .iter()
        .map(|t| Coefficient::nu_pow(charge(&reading_word(t)) as i32))
        .sum())
}

/// Full `K(ν)` on partitions of `n` (rows λ, columns μ, order of [`partitions`]).
pub fn kostka_matrix(n: u32) -> Vec<Vec<Coefficient>> {
    let ps = partitions(n);
    ps.iter()
        .map(|l| ps.iter().map(|m| kostka_foulkes(l, m).expect("same size")).collect())
        .collect()
}

/// Inverse of an upper unitriangular matrix over the coefficient ring.
pub fn unitriangular_inverse(a: &[Vec<Coefficient>]) -> Result<Vec<Vec<Coefficient>>> {
    let n = a.len();
    for i in 0..n {
        if !a[i][i].is_one() || (0..i).any(|j| !a[i][j].is_zero()) {
            return Err(Error::SingularTransition(format!("row {i} not unitriangular")));
        }
    }
    let mut inv = vec![vec![Coefficient::zero(); n]; n];
    for i in (0..n).rev() {
        inv[i][i] = Coefficient::one();
        for j in i + 1..n {
            // (A·X)_{ij} = 0 ⇒ X_{ij} = −Σ_{k>i} A_{ik} X_{kj}
            let s: Coefficient = (i + 1..=j).map(|k| &a[i][k] * &inv[k][j]).sum();
            inv[i][j] = -s;
        }
    }
    Ok(inv)
}

/// `P_μ(ν) = Σ_λ (K(ν)^{-1})_{μλ} s_λ` as a map `λ ↦ coefficient`
/// (from `s_λ = Σ_μ K_{λμ} P_μ`).
pub fn hl_p_in_schur(mu: &Partition) -> BTreeMap<Partition, Coefficient> {
    let ps = partitions(mu.size());
    let k = kostka_matrix(mu.size());
    let inv = unitriangular_inverse(&k).expect("Kostka–Foulkes is unitriangular");
    let j = ps.iter().position(|p| p == mu).expect("listed");
    ps.iter()
        .enumerate()
        .filter(|(i, _)| !inv[j][*i].is_zero())
        .map(|(i, l)| (l.clone(), inv[j][i].clone()))
        .collect()
}

/// `P_μ(ν)` expanded in power sums.
pub fn hl_p_in_powersum(mu: &Partition) -> RayPolynomial {
    let mut out = RayPolynomial::zero();
    for (l, c) in hl_p_in_schur(mu) {
        out = out.add(&schur_in_powersum(&l).scale(&c));
    }
    out
}

/// Rewrite a polynomial in power sums as one in the ray generators
/// `t̃_l = p_l / l`.
pub fn powersum_to_ttilde(p: &RayPolynomial) -> RayPolynomial {
    p.rescale_generators(|l| BigRational::from_integer(BigInt::from(l)))
}

/// Rewrite a polynomial in the ray generators `t̃_l` as one in power sums.
pub fn ttilde_to_powersum(p: &RayPolynomial) -> RayPolynomial {
    p.rescale_generators(|l| rat(1, l as i64))
}

/// Rational part of a coefficient that must be constant.
#[cfg(test)]
pub(crate) fn constant_of(c: &Coefficient) -> BigRational {
    c.as_constant().unwrap_or_else(num_traits::Zero::zero)
}
