//! Bar involution, canonical basis and elliptic Kostka tables.
//!
//! Everything happens inside a *window*: the paths of a fixed weight whose
//! first slope is at least the floor. The span of `t̃_p` with first slope
//! below the floor is also spanned by the `1_p` below the floor, so it is
//! stable under bar and the window computations are exact.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{convert_terms, AlgebraElement, Basis, HallAlgebra};
use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::lattice::{enumerate_paths, path_cmp, sl2_apply, ClassZ, ConvexPath, PathOrder, SL2Matrix, Slope};
use crate::relations::Terms;

type Vector = BTreeMap<usize, Coefficient>;
type SparseRow = Vec<(usize, Coefficient)>;

/// The paths of a weight above a floor, sorted top-down in the linear
/// extension of ≼, with `1_p` and `β̄_q` tabulated.
pub struct Window {
    pub weight: ClassZ,
    pub floor: Slope,
    pub paths: Vec<ConvexPath>,
    index: HashMap<ConvexPath, usize>,
    /// `1_p` in the `1^ss` basis; entries only at indices `≥ p`.
    one: Vec<SparseRow>,
    bar_beta: OnceLock<Vec<SparseRow>>,
}

impl Window {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn index_of(&self, p: &ConvexPath) -> Option<usize> {
        self.index.get(p).copied()
    }

    fn to_vector(&self, t: &Terms) -> Result<Vector> {
        t.iter()
            .filter(|(p, _)| p.first_slope() >= self.floor)
            .map(|(p, c)| {
                let i = self
                    .index_of(p)
                    .ok_or_else(|| Error::WeightMismatch(format!("{p} is not of weight {}", self.weight)))?;
                Ok((i, c.clone()))
            })
            .collect()
    }

    fn to_terms(&self, v: &Vector) -> Terms {
        v.iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(&i, c)| (self.paths[i].clone(), c.clone()))
            .collect()
    }

    /// Bar of a vector in the `1^ss` basis.
    fn bar_oness(&self, v: &Vector) -> Result<Vector> {
        let mut z = v.clone();
        let mut coords: Vec<(usize, Coefficient)> = Vec::new();
        while let Some((i, a)) = z.pop_first() {
            if a.is_zero() {
                continue;
            }
            for (j, c) in &self.one[i] {
                if *j == i {
                    continue;
                }
                let e = z.entry(*j).or_insert_with(Coefficient::zero);
                *e = &*e - &(&a * c);
            }
            coords.push((i, a));
        }
        let mut out = Vector::new();
        for (i, a) in coords {
            let ab = a.bar();
            for (j, c) in &self.one[i] {
                let e = out.entry(*j).or_insert_with(Coefficient::zero);
                *e = &*e + &(&ab * c);
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    fn bar_in(&self, v: &Vector, basis: Basis) -> Result<Vector> {
        let t = convert_terms(&self.to_terms(v), basis, Basis::OneSs);
        let b = self.bar_oness(&self.to_vector(&t)?)?;
        self.to_vector(&convert_terms(&self.to_terms(&b), Basis::OneSs, basis))
    }

    fn bar_beta(&self) -> Result<&Vec<SparseRow>> {
        if let Some(m) = self.bar_beta.get() {
            return Ok(m);
        }
        let rows: Result<Vec<SparseRow>> = (0..self.len())
            .into_par_iter()
            .map(|i| {
                let v = Vector::from([(i, Coefficient::one())]);
                Ok(self.bar_in(&v, Basis::Beta)?.into_iter().collect())
            })
            .collect();
        let rows = rows?;
        for (i, r) in rows.iter().enumerate() {
            if r.iter().any(|(j, _)| *j < i) || r.first().map(|(j, c)| *j != i || !c.is_one()) != Some(false) {
                return Err(Error::Invariant(format!("bar of β_{} is not unitriangular", self.paths[i])));
            }
        }
        Ok(self.bar_beta.get_or_init(|| rows))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// Expansion in `β`.
    Tilde,
    /// Expansion in `ρ`.
    Plain,
}

impl FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Flavor> {
        match s.to_ascii_lowercase().as_str() {
            "tilde" => Ok(Flavor::Tilde),
            "plain" => Ok(Flavor::Plain),
            _ => Err(Error::Parse(format!("unknown flavor '{s}'"))),
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Tilde => "tilde",
            Flavor::Plain => "plain",
        })
    }
}

impl HallAlgebra {
    pub fn window(&self, alpha: ClassZ, floor: Slope) -> Result<Arc<Window>> {
        alpha.check_positive()?;
        let key = (alpha, floor);
        if let Some(w) = self.windows.read().get(&key) {
            return Ok(w.clone());
        }
        let paths = enumerate_paths(alpha, floor)?;
        let index: HashMap<ConvexPath, usize> = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let one: Result<Vec<SparseRow>> = paths
            .par_iter()
            .map(|p| {
                let t = convert_terms(&*self.one_path_terms(p, floor)?, Basis::TTilde, Basis::OneSs);
                t.into_iter()
                    .map(|(q, c)| {
                        let j = index
                            .get(&q)
                            .copied()
                            .ok_or_else(|| Error::Invariant(format!("1_{p} has term {q} outside its window")))?;
                        Ok((j, c))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect();
        let mut one = one?;
        for (i, row) in one.iter_mut().enumerate() {
            row.sort_by_key(|(j, _)| *j);
            if row.first().map(|(j, c)| *j != i || !c.is_one()) != Some(false) {
                return Err(Error::SingularTransition(format!("1_{} is not unitriangular over 1^ss", paths[i])));
            }
        }
        let w = Arc::new(Window { weight: alpha, floor, paths, index, one, bar_beta: OnceLock::new() });
        Ok(self.windows.write().entry(key).or_insert(w).clone())
    }

    /// The antilinear involution fixing every `1_p`, on the truncated window.
    pub fn bar_element(&self, e: &AlgebraElement) -> Result<AlgebraElement> {
        let w = self.window(e.weight, e.floor)?;
        let v = w.to_vector(&e.terms)?;
        let b = w.bar_in(&v, e.basis)?;
        Ok(AlgebraElement { terms: w.to_terms(&b), ..e.clone() })
    }

    /// `b_p` in the `β` basis: bar-invariant, `β_p` plus lower terms in `ν·𝐐[ν, t^{±1}]`.
    pub fn canonical_element(&self, p: &ConvexPath, floor: Slope) -> Result<AlgebraElement> {
        if p.first_slope() < floor {
            return Err(Error::Invalid(format!("{p} starts below the floor {floor}")));
        }
        let w = self.window(p.weight(), floor)?;
        let i = w.index_of(p).expect("path in its own window");
        let bar = w.bar_beta()?;
        let mut b = Vector::from([(i, Coefficient::one())]);
        for j in i + 1..w.len() {
            let mut d = Coefficient::zero();
            for (k, c) in &b {
                if let Ok(pos) = bar[*k].binary_search_by_key(&j, |(x, _)| *x) {
                    d = &d + &(&c.bar() * &bar[*k][pos].1);
                }
            }
            if d.is_zero() {
                continue;
            }
            match path_cmp(&w.paths[j], p)? {
                PathOrder::Less => {}
                o => {
                    return Err(Error::Invariant(format!(
                        "bar defect at {} which is {o:?} relative to {p}",
                        w.paths[j]
                    )))
                }
            }
            b.insert(j, Coefficient::split_positive(&d)?);
        }
        let out = AlgebraElement { weight: w.weight, floor, basis: Basis::Beta, terms: w.to_terms(&b) };
        if w.bar_in(&b, Basis::Beta)? != b {
            return Err(Error::Invariant(format!("b_{p} is not bar-invariant")));
        }
        Ok(out)
    }

    pub fn kostka_table(&self, alpha: ClassZ, floor: Slope, flavor: Flavor) -> Result<KostkaTable> {
        let w = self.window(alpha, floor)?;
        let target = match flavor {
            Flavor::Tilde => Basis::Beta,
            Flavor::Plain => Basis::Rho,
        };
        let rows: Result<Vec<Vec<Coefficient>>> = w
            .paths
            .par_iter()
            .map(|p| {
                let b = self.canonical_element(p, floor)?.convert(target);
                Ok(w.paths.iter().map(|q| b.coeff(q)).collect())
            })
            .collect();
        Ok(KostkaTable {
            weight: alpha,
            floor,
            flavor,
            config_hash: self.config_hash().to_string(),
            paths: w.paths.clone(),
            entries: rows?,
        })
    }

    /// Compare `ℸ`, `ℸ̃` at `(p, q)` with the entries at `(γp, γq)`.
    pub fn sl2_invariance_check(&self, gamma: &SL2Matrix, alpha: ClassZ, floor: Slope) -> Result<Sl2Report> {
        let image = gamma.apply(&alpha);
        let mut report = Sl2Report {
            gamma: *gamma,
            weight: alpha,
            floor,
            image_weight: image,
            image_floor: None,
            pairs: Vec::new(),
            skipped: 0,
        };
        if !image.is_positive() {
            let n = self.window(alpha, floor)?.len();
            report.skipped = n * n;
            return Ok(report);
        }
        let w = self.window(alpha, floor)?;
        let mapped: Vec<Option<ConvexPath>> = w.paths.iter().map(|p| sl2_apply(gamma, p).ok()).collect();
        let Some(image_floor) = mapped.iter().flatten().map(|p| p.first_slope()).min() else {
            report.skipped = w.len() * w.len();
            return Ok(report);
        };
        report.image_floor = Some(image_floor);
        let src = [self.kostka_table(alpha, floor, Flavor::Plain)?, self.kostka_table(alpha, floor, Flavor::Tilde)?];
        let dst = [
            self.kostka_table(image, image_floor, Flavor::Plain)?,
            self.kostka_table(image, image_floor, Flavor::Tilde)?,
        ];
        for (i, gp) in mapped.iter().enumerate() {
            for (j, gq) in mapped.iter().enumerate() {
                let (Some(gp), Some(gq)) = (gp, gq) else {
                    report.skipped += 1;
                    continue;
                };
                let pass = (0..2).all(|k| {
                    src[k].entries[i][j] == dst[k].entry(gp, gq).unwrap_or_default()
                });
                report.pairs.push(Sl2Pair {
                    p: w.paths[i].clone(),
                    q: w.paths[j].clone(),
                    gp: gp.clone(),
                    gq: gq.clone(),
                    plain: src[0].entries[i][j].to_nt_string(),
                    pass,
                });
            }
        }
        Ok(report)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KostkaTable {
    pub weight: ClassZ,
    pub floor: Slope,
    pub flavor: Flavor,
    pub config_hash: String,
    pub paths: Vec<ConvexPath>,
    /// `entries[i][j]` is the coefficient of the `j`-th basis vector in `b_{paths[i]}`.
    pub entries: Vec<Vec<Coefficient>>,
}

#[derive(Serialize)]
struct TableDoc<'a> {
    weight: ClassZ,
    floor: Slope,
    flavor: Flavor,
    config_hash: &'a str,
    paths: &'a [ConvexPath],
    entries: Vec<Vec<String>>,
}

impl KostkaTable {
    pub fn entry(&self, p: &ConvexPath, q: &ConvexPath) -> Option<Coefficient> {
        let i = self.paths.iter().position(|x| x == p)?;
        let j = self.paths.iter().position(|x| x == q)?;
        Some(self.entries[i][j].clone())
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = TableDoc {
            weight: self.weight,
            floor: self.floor,
            flavor: self.flavor,
            config_hash: &self.config_hash,
            paths: &self.paths,
            entries: self.entries.iter().map(|r| r.iter().map(|c| c.to_nt_string()).collect()).collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    /// Aligned matrix, rows and columns in window order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "weight {} floor {} flavor {}", self.weight, self.floor, self.flavor);
        for (i, p) in self.paths.iter().enumerate() {
            let _ = writeln!(out, "[{i}] {p}");
        }
        let cells: Vec<Vec<String>> =
            self.entries.iter().map(|r| r.iter().map(|c| c.to_nt_string()).collect()).collect();
        let n = self.paths.len();
        let width: Vec<usize> = (0..n)
            .map(|j| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(1).max(format!("[{j}]").len()))
            .collect();
        let label = format!("[{}]", n.saturating_sub(1)).len();
        let _ = write!(out, "{:label$}", "");
        for (j, w) in width.iter().enumerate() {
            let _ = write!(out, "  {:>w$}", format!("[{j}]"));
        }
        out.push('\n');
        for (i, row) in cells.iter().enumerate() {
            let _ = write!(out, "{:label$}", format!("[{i}]"));
            for (c, w) in row.iter().zip(&width) {
                let _ = write!(out, "  {c:>w$}");
            }
            out.push('\n');
        }
        out
    }

    pub fn to_tex(&self) -> String {
        let n = self.paths.len();
        let mut out = String::new();
        let _ = writeln!(out, "% weight {} floor {} flavor {}", self.weight, self.floor, self.flavor);
        let _ = writeln!(out, "\\begin{{array}}{{l|{}}}", "c".repeat(n));
        let head: Vec<String> = self.paths.iter().map(tex_path).collect();
        let _ = writeln!(out, " & {} \\\\ \\hline", head.join(" & "));
        for (p, row) in self.paths.iter().zip(&self.entries) {
            let cells: Vec<String> = row.iter().map(|c| c.to_tex()).collect();
            let _ = writeln!(out, "{} & {} \\\\", tex_path(p), cells.join(" & "));
        }
        out.push_str("\\end{array}\n");
        out
    }
}

fn tex_path(p: &ConvexPath) -> String {
    let segs: Vec<String> = p.segments().iter().map(|s| format!("({},{})", s.rank, s.degree)).collect();
    format!("{{\\scriptstyle {}}}", segs.join(""))
}

#[derive(Clone, Debug, Serialize)]
pub struct Sl2Pair {
    pub p: ConvexPath,
    pub q: ConvexPath,
    pub gp: ConvexPath,
    pub gq: ConvexPath,
    /// `ℸ_{p,q}` in `ν, t` notation.
    pub plain: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sl2Report {
    pub gamma: SL2Matrix,
    pub weight: ClassZ,
    pub floor: Slope,
    pub image_weight: ClassZ,
    pub image_floor: Option<Slope>,
    pub pairs: Vec<Sl2Pair>,
    /// Pairs with an image outside the positive cone.
    pub skipped: usize,
}

impl Sl2Report {
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(|p| p.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Sl2Pair> {
        self.pairs.iter().filter(|p| !p.pass)
    }
}
