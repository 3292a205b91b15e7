//! Command-line front end: argument types, job execution, output rendering,
//! the on-disk result cache and the relation-config self-test.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::algebra::{AlgebraElement, Basis, HallAlgebra};
use crate::canonical::{Flavor, KostkaTable, Sl2Report};
use crate::coeff::Coefficient;
use crate::config::RelationConfig;
use crate::error::{Error, Result};
use crate::lattice::{enumerate_paths, ClassZ, ConvexPath, SL2Matrix, Slope};
use crate::symfunc::{generator_change_exp, GeneratorChange, RayPolynomial};

pub const CACHE_ENV: &str = "ELLHALL_CACHE";

#[derive(Parser, Debug)]
#[command(name = "ellhall", version, about = "Exact computations in the positive elliptic Hall algebra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Relation config: "default" or a JSON file.
    #[arg(long, global = true, default_value = "default")]
    pub config: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Result cache directory (ELLHALL_CACHE takes precedence).
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Worker threads for table rows.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
    Tex,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Convex paths of a weight with first slope at least the floor.
    Paths {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_weight)]
        weight: ClassZ,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_floor)]
        floor: Slope,
    },
    /// Product of two serialized elements.
    Mul {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, value_parser = parse_basis, default_value = "ttilde")]
        basis: Basis,
    },
    /// Rewrite a serialized element in another basis.
    Convert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_basis)]
        basis: Basis,
    },
    /// Bar involution of a serialized element.
    Bar {
        #[arg(long)]
        input: PathBuf,
    },
    /// Canonical basis element of one path.
    Canonical {
        /// Segments, e.g. "(1,0),(0,1)".
        #[arg(long, allow_hyphen_values = true, value_parser = parse_path)]
        path: ConvexPath,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_floor)]
        floor: Slope,
        #[arg(long, value_parser = parse_basis, default_value = "beta")]
        basis: Basis,
    },
    /// Full elliptic Kostka table of a weight.
    Kostka {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_weight)]
        weight: ClassZ,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_floor)]
        floor: Slope,
        #[arg(long, value_parser = parse_flavor, default_value = "tilde")]
        flavor: Flavor,
    },
    /// Compare table entries along an SL(2,Z) transformation.
    Sl2check {
        /// Matrix entries a,b,c,d acting on (rank, degree) columns.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_matrix)]
        gamma: SL2Matrix,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_weight)]
        weight: ClassZ,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_floor)]
        floor: Slope,
    },
    /// Validate the relation config.
    Selftest,
}

fn ints(s: &str) -> Result<Vec<i64>> {
    s.split(|c: char| !(c.is_ascii_digit() || c == '-'))
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|e| Error::Parse(format!("'{t}': {e}"))))
        .collect()
}

pub fn parse_weight(s: &str) -> Result<ClassZ> {
    match ints(s)?.as_slice() {
        &[r, d] => {
            let x = ClassZ::new(r, d);
            x.check_positive()?;
            Ok(x)
        }
        _ => Err(Error::Parse(format!("weight '{s}' is not r,d"))),
    }
}

pub fn parse_floor(s: &str) -> Result<Slope> {
    s.parse()
}

pub fn parse_basis(s: &str) -> Result<Basis> {
    s.parse()
}

pub fn parse_flavor(s: &str) -> Result<Flavor> {
    s.parse()
}

pub fn parse_path(s: &str) -> Result<ConvexPath> {
    let v = ints(s)?;
    if v.is_empty() || v.len() % 2 != 0 {
        return Err(Error::Parse(format!("path '{s}' needs an even number of integers")));
    }
    let pairs: Vec<[i64; 2]> = v.chunks(2).map(|c| [c[0], c[1]]).collect();
    ConvexPath::from_pairs(&pairs)
}

pub fn parse_matrix(s: &str) -> Result<SL2Matrix> {
    match ints(s)?.as_slice() {
        &[a, b, c, d] => SL2Matrix::new(a, b, c, d),
        _ => Err(Error::Parse(format!("matrix '{s}' is not a,b,c,d"))),
    }
}

fn check_floor(weight: ClassZ, floor: Slope) -> Result<()> {
    let s = weight.slope()?;
    if floor > s {
        return Err(Error::Invalid(format!("floor {floor} lies above the slope {s} of {weight}")));
    }
    Ok(())
}

fn read_element(p: &Path) -> Result<AlgebraElement> {
    let text = if p.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(p)?
    };
    let e: AlgebraElement = serde_json::from_str(&text)?;
    for q in e.terms.keys() {
        if q.weight() != e.weight {
            return Err(Error::WeightMismatch(format!("term {q} in an element of weight {}", e.weight)));
        }
    }
    Ok(e)
}

/// Cache directory: the environment variable wins over the flag.
pub fn cache_dir(flag: Option<&Path>) -> Option<PathBuf> {
    match std::env::var_os(CACHE_ENV) {
        Some(v) if !v.is_empty() => Some(PathBuf::from(v)),
        _ => flag.map(Path::to_path_buf),
    }
}

/// Key over (command, arguments, format, config hash, library version).
pub fn cache_key(command: &Command, format: Format, config_hash: &str) -> String {
    let mut h = Sha256::new();
    h.update(format!("{command:?}|{format:?}|{config_hash}|{}", env!("CARGO_PKG_VERSION")));
    hex::encode(h.finalize())
}

fn cacheable(c: &Command) -> bool {
    matches!(c, Command::Kostka { .. } | Command::Canonical { .. } | Command::Sl2check { .. })
}

/// Write-then-rename so readers never see a partial file.
fn cache_store(dir: &Path, key: &str, body: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(".{key}.{}.tmp", std::process::id()));
    std::fs::write(&tmp, body)?;
    std::fs::rename(&tmp, dir.join(key))?;
    Ok(())
}

/// Run one command and return the rendered document.
pub fn run(cli: &Cli) -> Result<String> {
    if let Some(n) = cli.global.jobs {
        // a pool may already exist when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let cfg = RelationConfig::resolve(Some(&cli.global.config))?;
    let custom = cli.global.config != "default";
    let cache = cache_dir(cli.global.cache.as_deref());
    let key = cache_key(&cli.command, cli.global.format, &cfg.content_hash());
    if let (Some(dir), true) = (&cache, cacheable(&cli.command)) {
        if let Ok(hit) = std::fs::read_to_string(dir.join(&key)) {
            return Ok(hit);
        }
    }
    let h = HallAlgebra::new(cfg)?;
    if custom && !matches!(cli.command, Command::Paths { .. } | Command::Selftest) {
        let report = selftest(&h);
        if !report.passed() {
            return Err(Error::ConfigIncoherent(format!(
                "config failed the self-test: {}",
                report.failures().join(", ")
            )));
        }
    }
    let out = execute(&h, &cli.command, cli.global.format)?;
    if let (Some(dir), true) = (&cache, cacheable(&cli.command)) {
        cache_store(dir, &key, &out)?;
    }
    Ok(out)
}

fn execute(h: &HallAlgebra, cmd: &Command, fmt: Format) -> Result<String> {
    match cmd {
        Command::Paths { weight, floor } => {
            check_floor(*weight, *floor)?;
            Ok(render_paths(&enumerate_paths(*weight, *floor)?, fmt))
        }
        Command::Mul { left, right, basis } => {
            let e = h.mul(&read_element(left)?, &read_element(right)?)?.convert(*basis);
            render_element(&e, fmt)
        }
        Command::Convert { input, basis } => render_element(&read_element(input)?.convert(*basis), fmt),
        Command::Bar { input } => render_element(&h.bar_element(&read_element(input)?)?, fmt),
        Command::Canonical { path, floor, basis } => {
            render_element(&h.canonical_element(path, *floor)?.convert(*basis), fmt)
        }
        Command::Kostka { weight, floor, flavor } => {
            check_floor(*weight, *floor)?;
            render_table(&h.kostka_table(*weight, *floor, *flavor)?, fmt)
        }
        Command::Sl2check { gamma, weight, floor } => {
            check_floor(*weight, *floor)?;
            let r = h.sl2_invariance_check(gamma, *weight, *floor)?;
            if !r.passed() {
                // a failing pair means the algebra broke an invariant
                return Err(Error::Invariant(format!(
                    "SL(2,Z) invariance failed on {} pairs:\n{}",
                    r.failures().count(),
                    render_sl2(&r, Format::Text)?
                )));
            }
            render_sl2(&r, fmt)
        }
        Command::Selftest => {
            let r = selftest(h);
            let s = render_selftest(&r, fmt)?;
            if r.passed() {
                Ok(s)
            } else {
                Err(Error::ConfigIncoherent(s))
            }
        }
    }
}

pub fn render_paths(paths: &[ConvexPath], fmt: Format) -> String {
    match fmt {
        Format::Json => serde_json::to_string_pretty(paths).expect("paths serialize"),
        Format::Text => paths.iter().map(|p| format!("{p}\n")).collect(),
        Format::Tex => paths
            .iter()
            .map(|p| {
                let s: Vec<String> = p.to_pairs().iter().map(|[r, d]| format!("({r},{d})")).collect();
                format!("{}\\\\\n", s.join(""))
            })
            .collect(),
    }
}

pub fn render_element(e: &AlgebraElement, fmt: Format) -> Result<String> {
    let sym = match e.basis {
        Basis::TTilde => ("t~", "\\tilde{t}"),
        Basis::OneSs => ("1ss", "\\mathbf{1}^{ss}"),
        Basis::Beta => ("beta", "\\beta"),
        Basis::Rho => ("rho", "\\rho"),
    };
    Ok(match fmt {
        Format::Json => serde_json::to_string_pretty(e)?,
        Format::Text => {
            let mut s = format!("weight {} floor {} basis {}\n", e.weight, e.floor, e.basis);
            for (p, c) in &e.terms {
                let _ = writeln!(s, "  ({}) {}_{p}", c.to_nt_string(), sym.0);
            }
            s
        }
        Format::Tex => {
            let parts: Vec<String> = e
                .terms
                .iter()
                .map(|(p, c)| {
                    let segs: Vec<String> = p.to_pairs().iter().map(|[r, d]| format!("({r},{d})")).collect();
                    format!("\\left({}\\right) {}_{{{}}}", c.to_tex(), sym.1, segs.join(""))
                })
                .collect();
            let body = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
            format!("{body}\n")
        }
    })
}

pub fn render_table(t: &KostkaTable, fmt: Format) -> Result<String> {
    match fmt {
        Format::Json => t.to_json(),
        Format::Text => Ok(t.to_text()),
        Format::Tex => Ok(t.to_tex()),
    }
}

pub fn render_sl2(r: &Sl2Report, fmt: Format) -> Result<String> {
    Ok(match fmt {
        Format::Json => serde_json::to_string_pretty(r)?,
        Format::Text | Format::Tex => {
            let mut s = format!(
                "gamma {} weight {} floor {} -> weight {} floor {}\n",
                r.gamma,
                r.weight,
                r.floor,
                r.image_weight,
                r.image_floor.map(|f| f.to_string()).unwrap_or_else(|| "-".into())
            );
            for p in &r.pairs {
                let _ = writeln!(s, "{} {} {} -> {} {}  {}", if p.pass { "ok  " } else { "FAIL" }, p.p, p.q, p.gp, p.gq, p.plain);
            }
            let _ = writeln!(s, "{} pairs, {} skipped, {}", r.pairs.len(), r.skipped, if r.passed() { "pass" } else { "fail" });
            s
        }
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub version: String,
    pub config_hash: String,
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect()
    }
}

fn check(name: &str, f: impl FnOnce() -> Result<Option<String>>) -> Check {
    let (pass, detail) = match f() {
        Ok(None) => (true, String::new()),
        Ok(Some(why)) => (false, why),
        Err(e) => (false, e.to_string()),
    };
    Check { name: name.to_string(), pass, detail }
}

/// Relation-config validation suite. Cheap enough to run before every
/// computation with a non-default config.
pub fn selftest(h: &HallAlgebra) -> SelftestReport {
    let cfg = h.engine().config();
    let gens: Vec<ClassZ> =
        [(0, 1), (1, 0), (1, -1), (0, 2), (2, 1), (1, 1), (2, -1)].iter().map(|&(r, d)| ClassZ::new(r, d)).collect();
    let single = |x: ClassZ| -> Result<crate::relations::Terms> {
        Ok([(ConvexPath::single(x)?, Coefficient::one())].into_iter().collect())
    };
    let mut checks = vec![check("config structure", || cfg.validate().map(|_| None))];
    checks.push(check("associativity and support bound", || {
        let e = h.engine();
        for &u in &gens {
            for &v in &gens {
                for &w in &gens {
                    let uv = e.mul_terms(&single(u)?, &single(v)?)?;
                    let left = e.mul_terms(&uv, &single(w)?)?;
                    let vw = e.mul_terms(&single(v)?, &single(w)?)?;
                    let right = e.mul_terms(&single(u)?, &vw)?;
                    if left != right {
                        return Ok(Some(format!("({u} {v}) {w}")));
                    }
                }
            }
        }
        Ok(None)
    }));
    checks.push(check("bracket symmetry", || {
        for &x in &gens {
            for &y in &gens {
                if x.is_collinear(&y) {
                    continue;
                }
                let a = h.engine().bracket(y, x)?;
                let b = h.engine().bracket(x, y)?;
                if a.iter().any(|(p, c)| b.get(p) != Some(&-c) || !c.is_sigma_symmetric()) || a.len() != b.len() {
                    return Ok(Some(format!("[{y}, {x}]")));
                }
            }
        }
        Ok(None)
    }));
    checks.push(check("ray dictionary", || {
        let g = generator_change_exp(GeneratorChange::GToP, 6);
        let back = generator_change_exp(GeneratorChange::PToG, 6);
        for r in 1..=6u32 {
            if back[r as usize].substitute(&g) != RayPolynomial::gen(r) {
                return Ok(Some(format!("roundtrip at multiple {r}")));
            }
        }
        Ok(None)
    }));
    checks.push(check("b_x = 1_x", || {
        for r in 0..=1 {
            for d in -2..=2 {
                let x = ClassZ::new(r, d);
                if !x.is_positive() {
                    continue;
                }
                let f = floor_below(x, 3)?;
                let b = h.canonical_element(&ConvexPath::single(x)?, f)?;
                if !b.same_element(&h.one_alpha(x, f)?) {
                    return Ok(Some(format!("{x}")));
                }
            }
        }
        Ok(None)
    }));
    SelftestReport { version: cfg.version.clone(), config_hash: cfg.content_hash(), checks }
}

/// `slope(x) − k`, or `−k` for vertical classes.
pub fn floor_below(x: ClassZ, k: i64) -> Result<Slope> {
    Ok(match x.slope()? {
        Slope::Finite(s) => Slope::Finite(s - k),
        Slope::Infinite => Slope::int(-k),
    })
}

pub fn render_selftest(r: &SelftestReport, fmt: Format) -> Result<String> {
    Ok(match fmt {
        Format::Json => serde_json::to_string_pretty(r)?,
        Format::Text | Format::Tex => {
            let mut s = format!("config {} ({})\n", r.version, &r.config_hash[..16]);
            for c in &r.checks {
                let _ = writeln!(s, "{} {}{}", if c.pass { "pass" } else { "FAIL" }, c.name, if c.detail.is_empty() { String::new() } else { format!(": {}", c.detail) });
            }
            let _ = writeln!(s, "{}", if r.passed() { "selftest passed" } else { "selftest FAILED" });
            s
        }
    })
}
