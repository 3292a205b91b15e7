//! Structure constants of the rank-one commutator presentation.
//!
//! For `x, y ∈ 𝐙⁺` with `slope(y) > slope(x)`, one of them primitive and no
//! lattice point strictly inside the triangle `(0, x, x + y)`:
//!
//! ```text
//! [t̃_y, t̃_x] = u_{deg x} u_{deg y} / u_1 · θ̃_{x+y} / κ
//! ```
//!
//! where `θ̃_{kδ}` is the `s^k` coefficient of `exp(Σ c_l t̃_{lδ} s^l)`.
//! `κ` is `kappa`, `c_l` is `theta_log[l-1]` and `u_l` is `ray_scale[l-1]`.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coeff::Coefficient;
use crate::error::{Error, Result};

pub const DEFAULT_VERSION: &str = "ellhall-default-1";

/// Ray multiples covered by the shipped table.
pub const DEFAULT_MAX_MULTIPLE: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationConfig {
    pub version: String,
    pub kappa: Coefficient,
    pub theta_log: Vec<Coefficient>,
    pub ray_scale: Vec<Coefficient>,
}

impl Default for RelationConfig {
    fn default() -> Self {
        Self::generated(DEFAULT_MAX_MULTIPLE)
    }
}

impl RelationConfig {
    /// `κ = ν⁻¹ − ν`, `c_l = ν^{−l} − ν^l`, `u_l = ν^l (1 − σ^l)(1 − σ̄^l) / l`.
    pub fn generated(max_multiple: u32) -> Self {
        let nu = Coefficient::nu();
        let nu_inv = nu.bar();
        let one = Coefficient::one();
        let theta_log = (1..=max_multiple as i32)
            .map(|l| &nu_inv.pow(l as u32) - &nu.pow(l as u32))
            .collect();
        let ray_scale = (1..=max_multiple)
            .map(|l| {
                let s = &one - &Coefficient::sigma().pow(l);
                let sb = &one - &Coefficient::sigma_bar().pow(l);
                (&(&nu.pow(l) * &s) * &sb).scale(&BigRational::new(BigInt::from(1), BigInt::from(l)))
            })
            .collect();
        RelationConfig {
            version: DEFAULT_VERSION.to_string(),
            kappa: &nu_inv - &nu,
            theta_log,
            ray_scale,
        }
    }

    pub fn max_multiple(&self) -> u32 {
        self.theta_log.len().min(self.ray_scale.len()) as u32
    }

    pub fn theta(&self, l: u32) -> Result<&Coefficient> {
        self.theta_log
            .get(l as usize - 1)
            .ok_or_else(|| self.out_of_range(l))
    }

    pub fn u(&self, l: u32) -> Result<&Coefficient> {
        self.ray_scale
            .get(l as usize - 1)
            .ok_or_else(|| self.out_of_range(l))
    }

    fn out_of_range(&self, l: u32) -> Error {
        Error::Invalid(format!(
            "ray multiple {l} exceeds the configured table ({})",
            self.max_multiple()
        ))
    }

    /// Structural checks: nonzero scalars, σ-symmetry, `κ | c_l`.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ConfigIncoherent(m));
        if self.kappa.is_zero() {
            return bad("kappa is zero".into());
        }
        if self.theta_log.is_empty() || self.theta_log.len() != self.ray_scale.len() {
            return bad("theta_log and ray_scale must be nonempty and of equal length".into());
        }
        if !self.kappa.is_sigma_symmetric() {
            return bad("kappa is not symmetric in σ, σ̄".into());
        }
        for (i, (c, u)) in self.theta_log.iter().zip(&self.ray_scale).enumerate() {
            let l = i + 1;
            if c.is_zero() || u.is_zero() {
                return bad(format!("vanishing constant at multiple {l}"));
            }
            if !c.is_sigma_symmetric() || !u.is_sigma_symmetric() {
                return bad(format!("constant at multiple {l} is not symmetric in σ, σ̄"));
            }
            if c.div_exact(&self.kappa).is_err() {
                return bad(format!("theta_log[{l}] is not divisible by kappa"));
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form.
    pub fn content_hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&json))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: RelationConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// `"default"` selects the shipped table, anything else is a file path.
    pub fn resolve(name: Option<&str>) -> Result<Self> {
        match name {
            None | Some("default") => Ok(Self::default()),
            Some(p) => Self::load(Path::new(p)),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
