//! Collection-level (global) term weights.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::stats::{CollectionStats, TermContingency};
use crate::{Error, Result};

/// Transforms of the imbalance ratio `x >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ScalingFn {
    /// `x`
    F0,
    /// `x^2`
    F1,
    /// `x^(1/2)`
    F2,
    /// `x^(1/3)`
    F3,
    /// `log2 x`
    F4,
    /// `1 / (0.1 + 1/x)`
    F5,
    /// `1 / (0.05 + 1/x)`
    F6,
    /// `x^(1/6)`
    F7,
}

impl ScalingFn {
    pub const ALL: [ScalingFn; 8] = [
        ScalingFn::F0,
        ScalingFn::F1,
        ScalingFn::F2,
        ScalingFn::F3,
        ScalingFn::F4,
        ScalingFn::F5,
        ScalingFn::F6,
        ScalingFn::F7,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ScalingFn::F0 => "f0",
            ScalingFn::F1 => "f1",
            ScalingFn::F2 => "f2",
            ScalingFn::F3 => "f3",
            ScalingFn::F4 => "f4",
            ScalingFn::F5 => "f5",
            ScalingFn::F6 => "f6",
            ScalingFn::F7 => "f7",
        }
    }

    pub(crate) fn eval(self, x: f64) -> f64 {
        match self {
            ScalingFn::F0 => x,
            ScalingFn::F1 => x * x,
            ScalingFn::F2 => x.sqrt(),
            ScalingFn::F3 => x.cbrt(),
            ScalingFn::F4 => x.log2(),
            ScalingFn::F5 => 1.0 / (0.1 + 1.0 / x),
            ScalingFn::F6 => 1.0 / (0.05 + 1.0 / x),
            ScalingFn::F7 => x.powf(1.0 / 6.0),
        }
    }
}

impl fmt::Display for ScalingFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ScalingFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScalingFn::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown scaling function {s:?}")))
    }
}

pub fn scale(f: ScalingFn, x: f64) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "scaling functions are defined for x >= 1, got {x}"
        )));
    }
    Ok(f.eval(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GlobalScheme {
    /// Every term gets weight 1.
    No,
    Idf,
    Pidf,
    Bidf,
    Ig,
    Gr,
    Mi,
    /// Class-size-normalized mutual information.
    MiPrime,
    Chi,
    Didf,
    /// Delta smoothed idf with the smoothing applied to the counts.
    Dsidf,
    /// Delta smoothed idf with the smoothing constant added to the scaled
    /// counts, `log2((N- a + 0.5) / (N+ c + 0.5))`.
    DsidfLegacy,
    Dspidf,
    Dbidf,
    Rf,
    /// Natural entropy `1 - h` with raw counts.
    Ne,
    /// Regularized entropy `b0 + (1 - b0)(1 - h)` with add-one smoothed counts.
    Re { b0: f64 },
    /// A scaling function of the imbalance ratio, used directly as the weight.
    ScaledX(ScalingFn),
}

impl GlobalScheme {
    /// Every plain id accepted by [`GlobalScheme::from_id`].
    pub const IDS: [&'static str; 18] = [
        "no",
        "idf",
        "pidf",
        "bidf",
        "ig",
        "gr",
        "mi",
        "mi_prime",
        "chi",
        "didf",
        "dsidf",
        "dsidf_legacy",
        "dspidf",
        "dbidf",
        "rf",
        "ne",
        "re",
        "scaled_x",
    ];

    /// `b0` is required for `re` and `scaling` for `scaled_x`; both are
    /// ignored otherwise.
    pub fn from_id(id: &str, b0: Option<f64>, scaling: Option<ScalingFn>) -> Result<Self> {
        Ok(match id {
            "no" => GlobalScheme::No,
            "idf" => GlobalScheme::Idf,
            "pidf" => GlobalScheme::Pidf,
            "bidf" => GlobalScheme::Bidf,
            "ig" => GlobalScheme::Ig,
            "gr" => GlobalScheme::Gr,
            "mi" => GlobalScheme::Mi,
            "mi_prime" | "mi'" => GlobalScheme::MiPrime,
            "chi" => GlobalScheme::Chi,
            "didf" => GlobalScheme::Didf,
            "dsidf" => GlobalScheme::Dsidf,
            "dsidf_legacy" => GlobalScheme::DsidfLegacy,
            "dspidf" => GlobalScheme::Dspidf,
            "dbidf" | "dsbidf" => GlobalScheme::Dbidf,
            "rf" => GlobalScheme::Rf,
            "ne" => GlobalScheme::Ne,
            "re" => {
                let b0 = b0.ok_or_else(|| Error::InvalidParameter("re needs a b0 value".into()))?;
                GlobalScheme::re(b0)?
            }
            "scaled_x" => GlobalScheme::ScaledX(scaling.ok_or_else(|| {
                Error::InvalidParameter("scaled_x needs a scaling function".into())
            })?),
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown global scheme {other:?}"
                )))
            }
        })
    }

    pub fn re(b0: f64) -> Result<Self> {
        check_unit("b0", b0)?;
        Ok(GlobalScheme::Re { b0 })
    }

    pub fn id(&self) -> &'static str {
        match self {
            GlobalScheme::No => "no",
            GlobalScheme::Idf => "idf",
            GlobalScheme::Pidf => "pidf",
            GlobalScheme::Bidf => "bidf",
            GlobalScheme::Ig => "ig",
            GlobalScheme::Gr => "gr",
            GlobalScheme::Mi => "mi",
            GlobalScheme::MiPrime => "mi_prime",
            GlobalScheme::Chi => "chi",
            GlobalScheme::Didf => "didf",
            GlobalScheme::Dsidf => "dsidf",
            GlobalScheme::DsidfLegacy => "dsidf_legacy",
            GlobalScheme::Dspidf => "dspidf",
            GlobalScheme::Dbidf => "dbidf",
            GlobalScheme::Rf => "rf",
            GlobalScheme::Ne => "ne",
            GlobalScheme::Re { .. } => "re",
            GlobalScheme::ScaledX(_) => "scaled_x",
        }
    }

    pub fn b0(&self) -> Option<f64> {
        match *self {
            GlobalScheme::Re { b0 } => Some(b0),
            _ => None,
        }
    }

    pub fn scaling(&self) -> Option<ScalingFn> {
        match *self {
            GlobalScheme::ScaledX(f) => Some(f),
            _ => None,
        }
    }
}

impl fmt::Display for GlobalScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GlobalScheme::Re { b0 } => write!(f, "re(b0={b0})"),
            GlobalScheme::ScaledX(s) => write!(f, "scaled_x({s})"),
            other => f.write_str(other.id()),
        }
    }
}

fn check_unit(name: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must lie in [0, 1], got {value}"
        )))
    }
}

fn absent_term(scheme: &'static str) -> Error {
    Error::Degenerate {
        scheme,
        term: None,
        detail: "term occurs in no training document".into(),
    }
}

/// `max(r+, r-) / min(r+, r-)` with `r+ = (a+1)/N+`, `r- = (c+1)/N-`.
pub fn imbalance_x(t: &TermContingency, s: &CollectionStats) -> f64 {
    let r_pos = (t.a + 1) as f64 / s.n_pos as f64;
    let r_neg = (t.c + 1) as f64 / s.n_neg as f64;
    r_pos.max(r_neg) / r_pos.min(r_neg)
}

/// Binary entropy (bits) of the class of a document containing the term,
/// with class-size-normalized estimates of `p+` and `p-`. `smoothed`
/// replaces `a`, `c` by `a + 1`, `c + 1`.
pub fn entropy_h(t: &TermContingency, s: &CollectionStats, smoothed: bool) -> Result<f64> {
    let extra = u64::from(smoothed);
    let (a, c) = (t.a + extra, t.c + extra);
    if a + c == 0 {
        return Err(absent_term("entropy"));
    }
    let r_pos = a as f64 / s.n_pos as f64;
    let r_neg = c as f64 / s.n_neg as f64;
    let p_pos = r_pos / (r_pos + r_neg);
    let p_neg = r_neg / (r_pos + r_neg);
    let h = -xlog2x(p_pos) - xlog2x(p_neg);
    Ok(h.clamp(0.0, 1.0))
}

fn xlog2x(p: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        p * p.log2()
    }
}

/// `b0 + (1 - b0) fx`.
pub fn regularize(b0: f64, fx: f64) -> Result<f64> {
    check_unit("b0", b0)?;
    check_unit("f(x)", fx)?;
    Ok(b0 + (1.0 - b0) * fx)
}

/// `count/N * log2(count * N / (row * col))`, zero when `count` is zero.
fn ig_summand(count: u64, row: u64, col: u64, n: f64) -> f64 {
    if count == 0 {
        return 0.0;
    }
    let count = count as f64;
    count / n * (count * n / (row as f64 * col as f64)).log2()
}

fn information_gain(t: &TermContingency, s: &CollectionStats) -> f64 {
    let n = s.n as f64;
    let TermContingency { a, b, c, d } = *t;
    ig_summand(a, a + b, a + c, n)
        + ig_summand(b, a + b, b + d, n)
        + ig_summand(c, a + c, c + d, n)
        + ig_summand(d, b + d, c + d, n)
}

pub fn global_weight(scheme: &GlobalScheme, t: &TermContingency, s: &CollectionStats) -> Result<f64> {
    let TermContingency { a, b, c, d } = *t;
    let (af, bf, cf, df) = (a as f64, b as f64, c as f64, d as f64);
    let n = s.n as f64;
    let (n_pos, n_neg) = (s.n_pos as f64, s.n_neg as f64);
    let id = scheme.id();
    let require_present = || {
        if a + c == 0 {
            Err(absent_term(id))
        } else {
            Ok(())
        }
    };

    let g = match *scheme {
        GlobalScheme::No => 1.0,
        GlobalScheme::Idf => {
            require_present()?;
            (n / (af + cf)).log2()
        }
        GlobalScheme::Pidf => {
            require_present()?;
            if a + c >= s.n {
                return Err(Error::Degenerate {
                    scheme: id,
                    term: None,
                    detail: format!("term occurs in all {} training documents", s.n),
                });
            }
            (n / (af + cf) - 1.0).log2()
        }
        GlobalScheme::Bidf => ((bf + df + 0.5) / (af + cf + 0.5)).log2(),
        GlobalScheme::Ig => information_gain(t, s).max(0.0),
        GlobalScheme::Gr => {
            let class_entropy = -xlog2x(n_pos / n) - xlog2x(n_neg / n);
            information_gain(t, s).max(0.0) / class_entropy
        }
        GlobalScheme::Mi => {
            require_present()?;
            let df_total = af + cf;
            (af * n / (df_total * n_pos))
                .max(cf * n / (df_total * n_neg))
                .log2()
        }
        GlobalScheme::MiPrime => {
            require_present()?;
            let (r_pos, r_neg) = (af / n_pos, cf / n_neg);
            (2.0 * r_pos.max(r_neg) / (r_pos + r_neg)).log2()
        }
        GlobalScheme::Chi => {
            let denom = (af + cf) * (bf + df) * (af + bf) * (cf + df);
            if denom == 0.0 {
                // A term in no document or in every document carries no association.
                0.0
            } else {
                let cross = af * df - bf * cf;
                n * cross * cross / denom
            }
        }
        GlobalScheme::Didf => {
            if a == 0 || c == 0 {
                return Err(Error::SingularTerm {
                    scheme: id,
                    term: None,
                    a,
                    c,
                });
            }
            (n_neg * af / (n_pos * cf)).log2()
        }
        GlobalScheme::Dsidf => (n_neg * (af + 0.5) / (n_pos * (cf + 0.5))).log2(),
        GlobalScheme::DsidfLegacy => ((n_neg * af + 0.5) / (n_pos * cf + 0.5)).log2(),
        GlobalScheme::Dspidf => {
            if a == s.n_pos || c == s.n_neg {
                return Err(Error::Degenerate {
                    scheme: id,
                    term: None,
                    detail: format!("term occurs in every document of a class (a={a}, c={c})"),
                });
            }
            ((n_neg - cf) * (af + 0.5) / ((n_pos - af) * (cf + 0.5))).log2()
        }
        GlobalScheme::Dbidf => {
            ((n_neg - cf + 0.5) * (af + 0.5) / ((n_pos - af + 0.5) * (cf + 0.5))).log2()
        }
        GlobalScheme::Rf => (2.0 + af / cf.max(1.0)).log2(),
        GlobalScheme::Ne => 1.0 - entropy_h(t, s, false)?,
        GlobalScheme::Re { b0 } => regularize(b0, 1.0 - entropy_h(t, s, true)?)?,
        GlobalScheme::ScaledX(f) => f.eval(imbalance_x(t, s)),
    };
    Ok(g)
}
