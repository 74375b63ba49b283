//! Attack-cost estimates, solving-degree thresholds, the round and bandwidth
//! model, and a parameter search built on them.
//!
//! Every complexity is returned as a base-2 logarithm. Binomials are exact
//! big integers and are converted to logarithms only at the end.

mod attacks;
pub mod bigmath;
mod cost;
mod mgd;
mod search;

pub use attacks::{
    bigm_cx, d_ks, d_spp, exhaustive_cx, kernel_cx, ks_flp_cx, ks_nakamura_cx, ks_verbel_cx, log2_prob_rank,
    minors_cx, prob_rank, support_minors_cx, syndrome_cx, verbel_c_range,
};
pub use cost::{comm_cost, rounds_needed, two_thirds_base_rounds, CostReport, Scheme};
pub use mgd::d_mgd;
pub use search::{param_search, Candidate, SearchCaps};

use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// `(q, n, m, r)` plus the linear-algebra exponent `omega`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimatorParams {
    pub q: u64,
    pub n: u64,
    pub m: u64,
    pub r: u64,
    pub omega: f64,
}

impl EstimatorParams {
    pub const DEFAULT_OMEGA: f64 = 3.0;

    pub fn new(q: u64, n: u64, m: u64, r: u64, omega: f64) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParams("q must be at least 2"));
        }
        if r == 0 || r >= n {
            return Err(Error::InvalidParams("rank must satisfy 1 <= r < n"));
        }
        if m == 0 {
            return Err(Error::InvalidParams("m must be positive"));
        }
        if !(omega > 2.0 && omega <= 3.0) {
            return Err(Error::InvalidParams("omega must lie in (2, 3]"));
        }
        Ok(EstimatorParams { q, n, m, r, omega })
    }

    pub fn log2_q(&self) -> f64 {
        libm::log2(self.q as f64)
    }
}

/// Truncation limits for the thresholds defined by power series or scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Total-degree bound for the `D_mgd` expansion.
    pub mgd_degree: u32,
    /// Largest `b` tried for `D_Spp`.
    pub spp_b: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { mgd_degree: 40, spp_b: 64 }
    }
}

/// Why an estimate has no value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Undetermined {
    /// `ceil(m / (n - r)) > n - r`: no admissible `c`.
    EmptyCRange,
    /// No `d` in `1..=r` satisfies the `D_KS` inequality.
    NoThreshold,
    /// The defining search ran to its cap without a hit.
    CapExhausted { cap: u32 },
}

impl fmt::Display for Undetermined {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Undetermined::EmptyCRange => f.write_str("empty c range"),
            Undetermined::NoThreshold => f.write_str("no threshold"),
            Undetermined::CapExhausted { cap } => write!(f, "undetermined at cap {cap}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Estimate {
    Log2(f64),
    Undetermined(Undetermined),
}

impl Estimate {
    pub fn value(&self) -> Option<f64> {
        match self {
            Estimate::Log2(v) => Some(*v),
            Estimate::Undetermined(_) => None,
        }
    }

    pub fn is_determined(&self) -> bool {
        matches!(self, Estimate::Log2(_))
    }
}

impl From<core::result::Result<f64, Undetermined>> for Estimate {
    fn from(r: core::result::Result<f64, Undetermined>) -> Self {
        match r {
            Ok(v) => Estimate::Log2(v),
            Err(u) => Estimate::Undetermined(u),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AttackId {
    ExhaustiveDirect,
    ExhaustiveRank,
    Kernel,
    BigM,
    Syndrome,
    KsFlp,
    KsVerbel,
    KsNakamura,
    Minors,
    SupportMinors,
}

impl AttackId {
    pub const ALL: [AttackId; 10] = [
        AttackId::ExhaustiveDirect,
        AttackId::ExhaustiveRank,
        AttackId::Kernel,
        AttackId::BigM,
        AttackId::Syndrome,
        AttackId::KsFlp,
        AttackId::KsVerbel,
        AttackId::KsNakamura,
        AttackId::Minors,
        AttackId::SupportMinors,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AttackId::ExhaustiveDirect => "exhaustive_direct",
            AttackId::ExhaustiveRank => "exhaustive_rank",
            AttackId::Kernel => "kernel",
            AttackId::BigM => "big_m",
            AttackId::Syndrome => "syndrome",
            AttackId::KsFlp => "ks_flp",
            AttackId::KsVerbel => "ks_verbel",
            AttackId::KsNakamura => "ks_nakamura",
            AttackId::Minors => "minors",
            AttackId::SupportMinors => "support_minors",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.name() == s)
    }
}

/// All ten estimates for one parameter set.
#[derive(Clone, Debug, PartialEq)]
pub struct AttackReport {
    pub params: EstimatorParams,
    pub entries: Vec<(AttackId, Estimate)>,
}

impl AttackReport {
    pub fn get(&self, id: AttackId) -> Estimate {
        self.entries.iter().find(|(a, _)| *a == id).map(|(_, e)| *e).expect("every attack is reported")
    }

    /// Least determined entry.
    pub fn minimum(&self) -> Option<(AttackId, f64)> {
        self.entries
            .iter()
            .filter_map(|(a, e)| e.value().map(|v| (*a, v)))
            .min_by(|x, y| x.1.total_cmp(&y.1))
    }

    pub fn undetermined(&self) -> Vec<(AttackId, Undetermined)> {
        self.entries
            .iter()
            .filter_map(|(a, e)| match e {
                Estimate::Undetermined(u) => Some((*a, *u)),
                Estimate::Log2(_) => None,
            })
            .collect()
    }
}

pub fn attack_report(p: &EstimatorParams, caps: Caps) -> AttackReport {
    let (direct, rank) = exhaustive_cx(p);
    let entries = alloc::vec![
        (AttackId::ExhaustiveDirect, Estimate::Log2(direct)),
        (AttackId::ExhaustiveRank, Estimate::Log2(rank)),
        (AttackId::Kernel, Estimate::Log2(kernel_cx(p))),
        (AttackId::BigM, Estimate::Log2(bigm_cx(p))),
        (AttackId::Syndrome, Estimate::Log2(syndrome_cx(p))),
        (AttackId::KsFlp, Estimate::Log2(ks_flp_cx(p))),
        (AttackId::KsVerbel, ks_verbel_cx(p).into()),
        (AttackId::KsNakamura, ks_nakamura_cx(p, caps.mgd_degree).into()),
        (AttackId::Minors, Estimate::Log2(minors_cx(p))),
        (AttackId::SupportMinors, support_minors_cx(p, caps.spp_b).into()),
    ];
    AttackReport { params: *p, entries }
}
