//! Cross-ray multiplication: commutators of generators and straightening of
//! words into the convex-path PBW basis.
//!
//! Commutators covered directly by the presentation (see [`crate::config`])
//! are read off the configured constants. Every other pair is moved by an
//! `SL(2,ℤ)` change of frame to `y = (0, m)`, `x = (n, e)`, the flatter
//! generator is written as a commutator of two smaller ones and the Jacobi
//! identity reduces everything to pairs of smaller determinant.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_integer::Integer;
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::coeff::Coefficient;
use crate::config::RelationConfig;
use crate::error::{Error, Result};
use crate::lattice::{sl2_apply, ClassZ, ConvexPath, SL2Matrix, Slope};
use crate::symfunc::{exp_coefficient, RayPolynomial};

/// Sparse linear combination of PBW monomials `t̃_p`.
pub type Terms = BTreeMap<ConvexPath, Coefficient>;

const MAX_DEPTH: u32 = 512;

pub(crate) fn add_term(t: &mut Terms, p: ConvexPath, c: Coefficient) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match t.entry(p) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let s = e.get() + &c;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

pub(crate) fn add_scaled(acc: &mut Terms, t: &Terms, c: &Coefficient) {
    for (p, d) in t {
        add_term(acc, p.clone(), d * c);
    }
}

pub(crate) fn scale_terms(t: &Terms, c: &Coefficient) -> Terms {
    let mut out = Terms::new();
    add_scaled(&mut out, t, c);
    out
}

pub(crate) fn truncate(t: &mut Terms, floor: Slope) {
    t.retain(|p, _| p.first_slope() >= floor);
}

/// A weight-homogeneous PBW expansion truncated at a slope floor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PBWExpansion {
    pub weight: ClassZ,
    pub floor: Slope,
    #[serde(with = "terms_serde")]
    pub terms: Terms,
}

pub mod terms_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        path: ConvexPath,
        coeff: Coefficient,
    }

    pub fn serialize<S: Serializer>(t: &Terms, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Entry> = t
            .iter()
            .map(|(p, c)| Entry { path: p.clone(), coeff: c.clone() })
            .collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Terms, D::Error> {
        let v = Vec::<Entry>::deserialize(d)?;
        let mut t = Terms::new();
        for e in v {
            add_term(&mut t, e.path, e.coeff);
        }
        Ok(t)
    }
}

/// Lattice points strictly inside the triangle `(0, x, x + y)` (Pick).
pub fn interior_points(x: &ClassZ, y: &ClassZ) -> i64 {
    let a2 = x.det(y).abs();
    let b = x.deg() + y.deg() + (*x + *y).deg();
    (a2 - b + 2) / 2
}

/// Whether `[t̃_y, t̃_x]` is given directly by the presentation.
pub fn is_basic_pair(x: &ClassZ, y: &ClassZ) -> bool {
    !x.is_collinear(y) && (x.is_primitive() || y.is_primitive()) && interior_points(x, y) == 0
}

/// The class `a` with `det(a, δ) = 1` and `rank(a) ∈ [1, rank δ − 1]` (or the
/// class of rank 1 when `rank δ = 1`); `δ` primitive with positive rank.
fn left_neighbour(delta: &ClassZ) -> ClassZ {
    let (n0, e0) = (delta.rank, delta.degree);
    if n0 == 1 {
        return ClassZ::new(1, e0 - 1);
    }
    // r·e0 ≡ 1 (mod n0)
    let ext = e0.rem_euclid(n0).extended_gcd(&n0);
    let r = ext.x.rem_euclid(n0);
    ClassZ::new(r, (r * e0 - 1) / n0)
}

type BracketKey = (i64, i64, i64);

/// The multiplication engine for one configuration. Memo tables are shared
/// between threads; entries are pure functions of their keys.
pub struct RelationEngine {
    cfg: RelationConfig,
    hash: String,
    brackets: RwLock<HashMap<BracketKey, Arc<Terms>>>,
    inserts: RwLock<HashMap<(ConvexPath, ClassZ), Arc<Terms>>>,
}

impl RelationEngine {
    pub fn new(cfg: RelationConfig) -> Result<Self> {
        cfg.validate()?;
        let hash = cfg.content_hash();
        Ok(RelationEngine {
            cfg,
            hash,
            brackets: RwLock::new(HashMap::new()),
            inserts: RwLock::new(HashMap::new()),
        })
    }

    pub fn config(&self) -> &RelationConfig {
        &self.cfg
    }

    pub fn config_hash(&self) -> &str {
        &self.hash
    }

    /// Ray polynomial in `t̃_{jδ}` as PBW terms.
    pub fn ray_terms(delta: &ClassZ, poly: &RayPolynomial) -> Terms {
        let mut out = Terms::new();
        for (m, c) in poly.terms() {
            let segs = m.parts().iter().map(|&j| delta.scale(j as i64)).collect();
            add_term(&mut out, ConvexPath::canonical(segs).expect("positive"), c.clone());
        }
        out
    }

    fn theta_poly(&self, l: u32) -> Result<RayPolynomial> {
        let c: Vec<Coefficient> = (1..=l).map(|j| self.cfg.theta(j).cloned()).collect::<Result<_>>()?;
        Ok(exp_coefficient(&c, l))
    }

    /// `θ̃_{lδ}`: the `s^l` coefficient of `exp(Σ c_j t̃_{jδ} s^j)`.
    pub fn theta_element(&self, delta: ClassZ, l: u32) -> Result<PBWExpansion> {
        if !delta.is_positive() || !delta.is_primitive() || l == 0 {
            return Err(Error::Invalid(format!("θ needs a primitive class and l ≥ 1, got {delta}, {l}")));
        }
        Ok(PBWExpansion {
            weight: delta.scale(l as i64),
            floor: delta.mu(),
            terms: Self::ray_terms(&delta, &self.theta_poly(l)?),
        })
    }

    /// `[t̃_y, t̃_x]` for a pair covered by the presentation.
    pub fn commutator_primitive(&self, x: ClassZ, y: ClassZ) -> Result<PBWExpansion> {
        x.check_positive()?;
        y.check_positive()?;
        if x.is_collinear(&y) {
            return Err(Error::Collinear(format!("{x}, {y}")));
        }
        if !is_basic_pair(&x, &y) {
            return Err(Error::NotMinimalTriangle(format!("{x}, {y}")));
        }
        let terms = if x.mu() < y.mu() {
            self.basic_bracket(&y, &x)?
        } else {
            scale_terms(&self.basic_bracket(&x, &y)?, &Coefficient::from_int(-1))
        };
        let w = x + y;
        let floor = x.mu().min(y.mu());
        Ok(PBWExpansion { weight: w, floor, terms })
    }

    /// Presentation formula, `slope(y) > slope(x)`.
    fn basic_bracket(&self, y: &ClassZ, x: &ClassZ) -> Result<Terms> {
        let (k, delta) = (*x + *y).ray_decompose()?;
        let theta = self.theta_poly(k as u32)?;
        let scale = (self.cfg.u(x.deg() as u32)? * self.cfg.u(y.deg() as u32)?)
            .div_exact(self.cfg.u(1)?)
            .map_err(|_| Error::ConfigIncoherent("u_1 does not divide the ray scales".into()))?;
        let mut out = Terms::new();
        for (p, c) in Self::ray_terms(&delta, &theta) {
            let v = (&c * &scale).div_exact(&self.cfg.kappa).map_err(|_| {
                Error::ConfigIncoherent(format!("kappa does not divide θ coefficients at {x}+{y}"))
            })?;
            add_term(&mut out, p, v);
        }
        Ok(out)
    }

    /// `[t̃_y, t̃_x] = t̃_y t̃_x − t̃_x t̃_y` for any positive classes.
    pub fn bracket(&self, y: ClassZ, x: ClassZ) -> Result<Arc<Terms>> {
        self.bracket_at(y, x, 0)
    }

    fn bracket_at(&self, y: ClassZ, x: ClassZ, depth: u32) -> Result<Arc<Terms>> {
        if x.is_collinear(&y) {
            return Ok(Arc::new(Terms::new()));
        }
        if y.mu() < x.mu() {
            let t = self.bracket_at(x, y, depth)?;
            return Ok(Arc::new(scale_terms(&t, &Coefficient::from_int(-1))));
        }
        // frame with y vertical and 0 ≤ e < n
        let g = SL2Matrix::to_vertical(&y.primitive());
        let xv = g.apply(&x);
        let (n, e) = (xv.rank, xv.degree);
        let k = -Integer::div_floor(&e, &n);
        let g = SL2Matrix { a: 1, b: 0, c: k, d: 1 }.compose(&g);
        let key = (n, e + k * n, y.deg());
        let normal = self.bracket_normalized(key, depth)?;
        let back = g.inverse();
        let mut out = Terms::new();
        for (p, c) in normal.iter() {
            let q = sl2_apply(&back, p).map_err(|_| {
                Error::Invalid(format!("frame change left the positive cone at {p}"))
            })?;
            add_term(&mut out, q, c.clone());
        }
        Ok(Arc::new(out))
    }

    fn bracket_normalized(&self, key: BracketKey, depth: u32) -> Result<Arc<Terms>> {
        if let Some(t) = self.brackets.read().get(&key) {
            return Ok(t.clone());
        }
        if depth > MAX_DEPTH {
            return Err(Error::Invalid(format!("commutator recursion too deep at {key:?}")));
        }
        let (n, e, m) = key;
        let x = ClassZ::new(n, e);
        let y = ClassZ::new(0, m);
        let t = if is_basic_pair(&x, &y) {
            self.basic_bracket(&y, &x)?
        } else {
            self.reduced_bracket(&y, &x, depth + 1)?
        };
        let t = Arc::new(t);
        self.brackets.write().insert(key, t.clone());
        Ok(t)
    }

    /// `x = a + b` with `[t̃_b, t̃_a] = u_1 θ̃_x / κ`, so
    /// `c_k t̃_x = κ [t̃_b, t̃_a] / u_1 − L` with `L` the rest of `θ̃_x`; then
    /// `[t̃_y, [t̃_b, t̃_a]] = [[t̃_y, t̃_b], t̃_a] + [t̃_b, [t̃_y, t̃_a]]`.
    fn reduced_bracket(&self, y: &ClassZ, x: &ClassZ, depth: u32) -> Result<Terms> {
        let (k, delta) = x.ray_decompose()?;
        let a = left_neighbour(&delta);
        let b = *x - a;
        debug_assert!(is_basic_pair(&a, &b) && a.mu() < b.mu());
        let pa = single(ConvexPath::single(a)?);
        let pb = single(ConvexPath::single(b)?);
        let yb = self.bracket_at(*y, b, depth)?;
        let ya = self.bracket_at(*y, a, depth)?;
        let mut jac = self.commutator_terms(&yb, &pa, depth)?;
        let second = self.commutator_terms(&pb, &ya, depth)?;
        add_scaled(&mut jac, &second, &Coefficient::one());
        // numerator: κ·J − u_1·[t̃_y, L]
        let mut num = scale_terms(&jac, &self.cfg.kappa);
        let theta = self.theta_poly(k as u32)?;
        let u1 = self.cfg.u(1)?.clone();
        for (mono, c) in theta.terms() {
            if mono.len() == 1 {
                continue;
            }
            let factors: Vec<ClassZ> = mono.parts().iter().map(|&j| delta.scale(j as i64)).collect();
            let lb = self.leibniz(y, &factors, depth)?;
            add_scaled(&mut num, &lb, &-(c * &u1));
        }
        let den = &u1 * self.cfg.theta(k as u32)?;
        let mut out = Terms::new();
        for (p, c) in num {
            let q = c.div_exact(&den).map_err(|_| {
                Error::ConfigIncoherent(format!("inexact division reducing [{y}, {x}] at {p}"))
            })?;
            add_term(&mut out, p, q);
        }
        Ok(out)
    }

    /// `[t̃_y, t̃_{f₁} ⋯ t̃_{f_r}]` for commuting collinear factors.
    fn leibniz(&self, y: &ClassZ, factors: &[ClassZ], depth: u32) -> Result<Terms> {
        let mut out = Terms::new();
        for i in 0..factors.len() {
            let br = self.bracket_at(*y, factors[i], depth)?;
            let mut acc = if i == 0 {
                (*br).clone()
            } else {
                let prefix = single(ConvexPath::canonical(factors[..i].to_vec())?);
                self.mul_terms_at(&prefix, &br, depth)?
            };
            for f in &factors[i + 1..] {
                acc = self.mul_terms_at(&acc, &single(ConvexPath::single(*f)?), depth)?;
            }
            add_scaled(&mut out, &acc, &Coefficient::one());
        }
        Ok(out)
    }

    /// `A·B − B·A`.
    fn commutator_terms(&self, a: &Terms, b: &Terms, depth: u32) -> Result<Terms> {
        let mut out = self.mul_terms_at(a, b, depth)?;
        let ba = self.mul_terms_at(b, a, depth)?;
        add_scaled(&mut out, &ba, &Coefficient::from_int(-1));
        Ok(out)
    }

    /// `t̃_p · t̃_w` in the PBW basis.
    pub fn insert(&self, p: &ConvexPath, w: ClassZ) -> Result<Arc<Terms>> {
        self.insert_at(p, w, 0)
    }

    fn insert_at(&self, p: &ConvexPath, w: ClassZ, depth: u32) -> Result<Arc<Terms>> {
        let segs = p.segments();
        let z = *segs.last().expect("nonempty path");
        if z.mu() <= w.mu() {
            let mut v = segs.to_vec();
            v.push(w);
            return Ok(Arc::new(single(ConvexPath::canonical(v)?)));
        }
        let key = (p.clone(), w);
        if let Some(t) = self.inserts.read().get(&key) {
            return Ok(t.clone());
        }
        if depth > MAX_DEPTH {
            return Err(Error::Invalid(format!("straightening recursion too deep at {p}·{w}")));
        }
        let depth = depth + 1;
        // t̃_{P'} t̃_z t̃_w = (t̃_{P'} t̃_w) t̃_z + t̃_{P'} [t̃_z, t̃_w]
        let rest = &segs[..segs.len() - 1];
        let head = if rest.is_empty() {
            single(ConvexPath::single(w)?)
        } else {
            (*self.insert_at(&ConvexPath::from_sorted(rest.to_vec()), w, depth)?).clone()
        };
        let mut out = Terms::new();
        for (q, c) in &head {
            add_scaled(&mut out, &*self.insert_at(q, z, depth)?, c);
        }
        let br = self.bracket_at(z, w, depth)?;
        if rest.is_empty() {
            add_scaled(&mut out, &br, &Coefficient::one());
        } else {
            let left = single(ConvexPath::from_sorted(rest.to_vec()));
            add_scaled(&mut out, &self.mul_terms_at(&left, &br, depth)?, &Coefficient::one());
        }
        let t = Arc::new(out);
        self.inserts.write().insert(key, t.clone());
        Ok(t)
    }

    /// `t̃_p · t̃_q`.
    pub fn mul_paths(&self, p: &ConvexPath, q: &ConvexPath) -> Result<Terms> {
        self.mul_paths_at(p, q, 0)
    }

    fn mul_paths_at(&self, p: &ConvexPath, q: &ConvexPath, depth: u32) -> Result<Terms> {
        let mut cur = single(p.clone());
        for &s in q.segments() {
            let mut next = Terms::new();
            for (r, c) in &cur {
                add_scaled(&mut next, &*self.insert_at(r, s, depth)?, c);
            }
            cur = next;
        }
        if depth == 0 {
            if let Some(o) = cur.keys().find(|o| !subobject_bound_holds(o, q)) {
                return Err(Error::ConfigIncoherent(format!(
                    "term {o} of t̃_{p}·t̃_{q} violates the support bound"
                )));
            }
        }
        Ok(cur)
    }

    pub fn mul_terms(&self, a: &Terms, b: &Terms) -> Result<Terms> {
        self.mul_terms_at(a, b, 0)
    }

    fn mul_terms_at(&self, a: &Terms, b: &Terms, depth: u32) -> Result<Terms> {
        let mut out = Terms::new();
        for (p, c) in a {
            for (q, d) in b {
                let prod = self.mul_paths_at(p, q, depth)?;
                add_scaled(&mut out, &prod, &(c * d));
            }
        }
        Ok(out)
    }

    /// Product of the generators `t̃_{x₁} ⋯ t̃_{x_k}` in the PBW basis, with every
    /// term of first slope below `floor` dropped at the end.
    pub fn straighten(&self, word: &[ClassZ], floor: Slope) -> Result<PBWExpansion> {
        let (first, rest) = word.split_first().ok_or(Error::EmptyPath)?;
        for x in word {
            x.check_positive()?;
        }
        let mut cur = single(ConvexPath::single(*first)?);
        for &w in rest {
            let mut next = Terms::new();
            for (r, c) in &cur {
                add_scaled(&mut next, &*self.insert(r, w)?, c);
            }
            cur = next;
        }
        truncate(&mut cur, floor);
        let weight = word.iter().fold(ClassZ::new(0, 0), |a, b| a + *b);
        Ok(PBWExpansion { weight, floor, terms: cur })
    }
}

fn single(p: impl Into<Option<ConvexPath>>) -> Terms {
    let mut t = Terms::new();
    if let Some(p) = p.into() {
        t.insert(p, Coefficient::one());
    }
    t
}

/// `deg_{≥μ}(o) ≥ deg_{≥μ}(q)` for every slope `μ`, with `deg` the ray
/// multiple. Not implied by the relations: `t̃_{(0,1)} t̃_{((1,1),(1,1))}`
/// contains `t̃_{(2,3)}`.
pub fn observation_bound_holds(o: &ConvexPath, q: &ConvexPath) -> bool {
    support_slopes(o, q).iter().all(|&mu| o.deg_at_least(mu) >= q.deg_at_least(mu))
}

/// The form of the support bound that follows from `G_{≥μ} ⊂ F_{≥μ}` for a
/// subobject `G ⊂ F`: `rank_{≥μ}(o) ≥ rank_{≥μ}(q)` at finite slopes and
/// `deg_∞(o) ≥ deg_∞(q)`. `q` is the right (sub) factor.
pub fn subobject_bound_holds(o: &ConvexPath, q: &ConvexPath) -> bool {
    support_slopes(o, q).iter().all(|&mu| match mu {
        Slope::Infinite => o.deg_at_least(mu) >= q.deg_at_least(mu),
        Slope::Finite(_) => o.rank_at_least(mu) >= q.rank_at_least(mu),
    })
}

fn support_slopes(o: &ConvexPath, q: &ConvexPath) -> Vec<Slope> {
    let mut slopes: Vec<Slope> = o.segments().iter().chain(q.segments()).map(|s| s.mu()).collect();
    slopes.sort();
    slopes.dedup();
    slopes
}
