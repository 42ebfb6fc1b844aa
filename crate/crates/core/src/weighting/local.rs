use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Within-document weighting of a raw term frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LocalScheme {
    /// Raw term frequency.
    Tf,
    /// Term presence.
    Tp,
    /// Augmented term frequency `k + (1 - k) tf / max_tf`.
    Atf { k: f64 },
    /// `log2(1 + tf)`.
    Ltf,
    /// BM25 term frequency.
    Btf { k1: f64, b: f64 },
}

impl LocalScheme {
    pub const DEFAULT_K: f64 = 0.5;
    pub const DEFAULT_K1: f64 = 1.2;
    pub const DEFAULT_B: f64 = 0.95;

    pub fn atf(k: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::InvalidParameter(format!("atf k must lie in [0, 1], got {k}")));
        }
        Ok(LocalScheme::Atf { k })
    }

    pub fn btf(k1: f64, b: f64) -> Result<Self> {
        if !(k1 > 0.0 && k1.is_finite()) {
            return Err(Error::InvalidParameter(format!("btf k1 must be positive, got {k1}")));
        }
        if !(0.0..=1.0).contains(&b) {
            return Err(Error::InvalidParameter(format!("btf b must lie in [0, 1], got {b}")));
        }
        Ok(LocalScheme::Btf { k1, b })
    }

    /// Builds a scheme from its id, using `k`, `k1`, `b` where relevant.
    pub fn from_id(id: &str, k: f64, k1: f64, b: f64) -> Result<Self> {
        match id {
            "tf" => Ok(LocalScheme::Tf),
            "tp" => Ok(LocalScheme::Tp),
            "atf" => LocalScheme::atf(k),
            "ltf" => Ok(LocalScheme::Ltf),
            "btf" => LocalScheme::btf(k1, b),
            other => Err(Error::InvalidParameter(format!("unknown local scheme {other:?}"))),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            LocalScheme::Tf => "tf",
            LocalScheme::Tp => "tp",
            LocalScheme::Atf { .. } => "atf",
            LocalScheme::Ltf => "ltf",
            LocalScheme::Btf { .. } => "btf",
        }
    }

    pub(crate) fn weight(&self, tf: u32, max_tf: u32, dl: usize, avg_dl: f64) -> f64 {
        let tf = f64::from(tf);
        match *self {
            LocalScheme::Tf => tf,
            LocalScheme::Tp => {
                if tf > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            LocalScheme::Atf { k } => {
                if max_tf == 0 {
                    k
                } else {
                    k + (1.0 - k) * tf / f64::from(max_tf)
                }
            }
            LocalScheme::Ltf => (1.0 + tf).log2(),
            LocalScheme::Btf { k1, b } => {
                (k1 + 1.0) * tf / (k1 * ((1.0 - b) + b * dl as f64 / avg_dl) + tf)
            }
        }
    }
}

impl fmt::Display for LocalScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for LocalScheme {
    type Err = Error;

    /// Parses an id with default parameters.
    fn from_str(s: &str) -> Result<Self> {
        LocalScheme::from_id(s, Self::DEFAULT_K, Self::DEFAULT_K1, Self::DEFAULT_B)
    }
}

pub fn local_weight(
    scheme: &LocalScheme,
    tf: u32,
    max_tf: u32,
    dl: usize,
    avg_dl: f64,
) -> Result<f64> {
    if matches!(scheme, LocalScheme::Btf { .. }) && !(avg_dl > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "btf needs a positive average document length, got {avg_dl}"
        )));
    }
    if max_tf < tf {
        return Err(Error::InvalidParameter(format!(
            "max_tf {max_tf} is below tf {tf}"
        )));
    }
    Ok(scheme.weight(tf, max_tf, dl, avg_dl))
}
