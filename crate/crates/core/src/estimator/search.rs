//! Scan of `(n, m, r)` with `r` near `n / 2` for the cheapest parameters
//! meeting a security target.

use alloc::vec::Vec;

use super::{attack_report, bigm_cx, comm_cost, exhaustive_cx, kernel_cx, ks_flp_cx, minors_cx, syndrome_cx, AttackReport, Caps, CostReport, EstimatorParams, Scheme};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchCaps {
    pub n_min: u64,
    pub n_max: u64,
    pub m_min: u64,
    pub m_max: u64,
    pub m_step: u64,
    pub estimator: Caps,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps { n_min: 8, n_max: 40, m_min: 2, m_max: 500, m_step: 1, estimator: Caps::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub params: EstimatorParams,
    pub report: AttackReport,
    pub cost: CostReport,
}

/// Candidates whose least determined attack estimate reaches `target_bits`,
/// cheapest first by the half-scheme bandwidth at `target_bits` rounds.
///
/// For each `n` and `r in {floor(n/2), ceil(n/2)}` only the smallest
/// qualifying `m` on the scan grid is kept: bandwidth grows with `m`, so any
/// larger qualifying `m` costs more.
pub fn param_search(target_bits: u64, q: u64, omega: f64, caps: SearchCaps) -> Vec<Candidate> {
    let mut out = Vec::new();
    let step = caps.m_step.max(1);
    for n in caps.n_min.max(2)..=caps.n_max {
        let mut ranks = [n / 2, n.div_ceil(2)];
        if ranks[0] == ranks[1] {
            ranks[1] = 0;
        }
        for r in ranks.into_iter().filter(|&r| r >= 1 && r < n) {
            let mut m = caps.m_min.max(1);
            while m <= caps.m_max {
                let Ok(p) = EstimatorParams::new(q, n, m, r, omega) else { break };
                if closed_form_minimum(&p) < target_bits as f64 {
                    m += step;
                    continue;
                }
                let report = attack_report(&p, caps.estimator);
                if report.minimum().is_some_and(|(_, v)| v >= target_bits as f64) {
                    let cost = comm_cost(target_bits, &p, Scheme::Half);
                    out.push(Candidate { params: p, report, cost });
                    break;
                }
                m += step;
            }
        }
    }
    out.sort_by(|a, b| a.cost.bits.total_cmp(&b.cost.bits).then(a.params.n.cmp(&b.params.n)));
    out
}

/// Least of the estimates that need no threshold search. The full minimum can
/// only be lower, so candidates failing here are skipped early.
fn closed_form_minimum(p: &EstimatorParams) -> f64 {
    let (direct, rank) = exhaustive_cx(p);
    [direct, rank, kernel_cx(p), bigm_cx(p), syndrome_cx(p), ks_flp_cx(p), minors_cx(p)]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}
