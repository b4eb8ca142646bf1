//! Deliberate single-site corruptions of the operator formulas.
//!
//! The suites must be able to tell a correct implementation from one with a
//! flipped sign or a wrong binomial weight. Each variant names one term of
//! one alternating sum; the affected implementation applies it when handed
//! the mutation and behaves normally otherwise.

use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Mutation {
    /// Negates term `ell` of the alternating sum in `W^k`.
    WkSign { ell: usize },
    /// Replaces the binomial weight of `W^k` term `ell` by `C(m−k, ell) + 1`.
    WkBinomial { ell: usize },
    /// Negates term `p` of the restricted-transform recovery sum.
    RecoverySign { p: usize },
    /// Replaces the binomial weight of recovery term `p` by `C(r, p) + 1`.
    RecoveryBinomial { p: usize },
}

impl Mutation {
    /// Every mutation site for `W^k` on rank `m` and for the recovery sum
    /// with up to `m` fixed indices.
    pub fn all_sites(m: usize, k: usize) -> Vec<Mutation> {
        let mut out = Vec::new();
        for ell in 0..=m.saturating_sub(k) {
            out.push(Mutation::WkSign { ell });
            out.push(Mutation::WkBinomial { ell });
        }
        for p in 0..=m {
            out.push(Mutation::RecoverySign { p });
            out.push(Mutation::RecoveryBinomial { p });
        }
        out
    }

    pub(crate) fn wk_weight(mutation: Option<&Mutation>, ell: usize, binom: u64) -> (bool, u64) {
        match mutation {
            Some(Mutation::WkSign { ell: e }) if *e == ell => (true, binom),
            Some(Mutation::WkBinomial { ell: e }) if *e == ell => (false, binom + 1),
            _ => (false, binom),
        }
    }

    pub(crate) fn recovery_weight(
        mutation: Option<&Mutation>,
        p: usize,
        binom: u64,
    ) -> (bool, u64) {
        match mutation {
            Some(Mutation::RecoverySign { p: e }) if *e == p => (true, binom),
            Some(Mutation::RecoveryBinomial { p: e }) if *e == p => (false, binom + 1),
            _ => (false, binom),
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mutation::WkSign { ell } => write!(f, "wk-sign:{ell}"),
            Mutation::WkBinomial { ell } => write!(f, "wk-binomial:{ell}"),
            Mutation::RecoverySign { p } => write!(f, "recovery-sign:{p}"),
            Mutation::RecoveryBinomial { p } => write!(f, "recovery-binomial:{p}"),
        }
    }
}

impl FromStr for Mutation {
    type Err = Error;

    /// Parses the [`Display`](fmt::Display) form, e.g. `wk-sign:1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Argument(format!("unknown mutation {s:?}"));
        let (site, index) = s.split_once(':').ok_or_else(bad)?;
        let index: usize = index.trim().parse().map_err(|_| bad())?;
        match site.trim() {
            "wk-sign" => Ok(Mutation::WkSign { ell: index }),
            "wk-binomial" => Ok(Mutation::WkBinomial { ell: index }),
            "recovery-sign" => Ok(Mutation::RecoverySign { p: index }),
            "recovery-binomial" => Ok(Mutation::RecoveryBinomial { p: index }),
            _ => Err(bad()),
        }
    }
}
