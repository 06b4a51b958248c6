//! Cost-causation allocation of a procurement cost among participants whose
//! contributions add up to the aggregate signal.
//!
//! Participant `i` pays `(d_i·e / ‖e‖²)·J`. Contributions aligned with the
//! aggregate imbalance pay; contributions opposing it are paid.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance of every axiom check.
pub const AXIOM_TOL: f64 = 1e-9;

/// `|d·e| / ‖e‖²` at or below this counts as neutral: share 0, exempt from the
/// sign axioms.
pub const NEUTRAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Participant {
    pub d: Vec<f64>,
}

impl Participant {
    pub fn new(d: Vec<f64>) -> Self {
        Participant { d }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_fail(self) -> bool {
        self == Verdict::Fail
    }
}

/// One verdict per axiom: equity, budget balance, penalty for causing
/// imbalance, reward for mitigating it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomAudit {
    pub equity: Verdict,
    pub budget_balance: Verdict,
    pub penalty: Verdict,
    pub reward: Verdict,
}

impl AxiomAudit {
    /// True when no axiom failed (not-applicable counts as passing).
    pub fn all_pass(&self) -> bool {
        ![self.equity, self.budget_balance, self.penalty, self.reward]
            .iter()
            .any(|v| v.is_fail())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostShares {
    pub shares: Vec<f64>,
    pub total: f64,
    pub audit: Option<AxiomAudit>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_dims(participants: &[Participant], e: &[f64]) -> Result<f64> {
    if e.is_empty() {
        return Err(Error::invalid("the aggregate signal is empty"));
    }
    if e.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid(
            "the aggregate signal has a non-finite entry",
        ));
    }
    for (i, p) in participants.iter().enumerate() {
        if p.d.len() != e.len() {
            return Err(Error::invalid(format!(
                "participant {i} has length {}, signal has length {}",
                p.d.len(),
                e.len()
            )));
        }
        if p.d.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "participant {i} has a non-finite entry"
            )));
        }
    }
    let norm2 = dot(e, e);
    if norm2 <= 0.0 {
        return Err(Error::precondition(
            "the aggregate signal is zero, so no share is defined",
        ));
    }
    Ok(norm2)
}

/// `d_i·e / ‖e‖²`, snapped to 0 inside the neutral band.
fn ratios(participants: &[Participant], e: &[f64], norm2: f64) -> Vec<f64> {
    participants
        .iter()
        .map(|p| {
            let r = dot(&p.d, e) / norm2;
            if r.abs() <= NEUTRAL_TOL {
                0.0
            } else {
                r
            }
        })
        .collect()
}

/// Shares of `jss` under the cost-causation formula, with the axiom audit
/// attached.
pub fn allocate_cost(participants: &[Participant], e: &[f64], jss: f64) -> Result<CostShares> {
    if !jss.is_finite() || jss < 0.0 {
        return Err(Error::invalid(format!(
            "cost to allocate must be finite and nonnegative, got {jss}"
        )));
    }
    let norm2 = check_dims(participants, e)?;
    let shares = ratios(participants, e, norm2)
        .into_iter()
        .map(|r| r * jss)
        .collect();
    let mut out = CostShares {
        shares,
        total: jss,
        audit: None,
    };
    out.audit = Some(audit_axioms(participants, e, &out)?);
    Ok(out)
}

/// Audits any share vector against the four axioms.
///
/// Budget balance applies only when the contributions sum to `e`; the sign
/// axioms only when the total is positive, and never to neutral participants.
pub fn audit_axioms(
    participants: &[Participant],
    e: &[f64],
    shares: &CostShares,
) -> Result<AxiomAudit> {
    let norm2 = check_dims(participants, e)?;
    if shares.shares.len() != participants.len() {
        return Err(Error::invalid(format!(
            "{} shares for {} participants",
            shares.shares.len(),
            participants.len()
        )));
    }
    let s = &shares.shares;

    let mut equity = true;
    for i in 0..participants.len() {
        for j in i + 1..participants.len() {
            let same = participants[i]
                .d
                .iter()
                .zip(&participants[j].d)
                .all(|(a, b)| (a - b).abs() <= AXIOM_TOL);
            if same && (s[i] - s[j]).abs() > AXIOM_TOL {
                equity = false;
            }
        }
    }

    let scale = e.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let sums_to_e = (0..e.len()).all(|t| {
        let sum: f64 = participants.iter().map(|p| p.d[t]).sum();
        (sum - e[t]).abs() <= AXIOM_TOL * scale
    });
    let budget_balance = if sums_to_e {
        Verdict::from_bool((s.iter().sum::<f64>() - shares.total).abs() <= AXIOM_TOL)
    } else {
        Verdict::NotApplicable
    };

    let rho = ratios(participants, e, norm2);
    let (penalty, reward) = if shares.total > 0.0 {
        let causing: Vec<usize> = (0..rho.len()).filter(|&i| rho[i] > 0.0).collect();
        let mitigating: Vec<usize> = (0..rho.len()).filter(|&i| rho[i] < 0.0).collect();
        let verdict = |idx: &[usize], ok: &dyn Fn(f64) -> bool| {
            if idx.is_empty() {
                Verdict::NotApplicable
            } else {
                Verdict::from_bool(idx.iter().all(|&i| ok(s[i])))
            }
        };
        (
            verdict(&causing, &|x| x > 0.0),
            verdict(&mitigating, &|x| x < 0.0),
        )
    } else {
        (Verdict::NotApplicable, Verdict::NotApplicable)
    };

    Ok(AxiomAudit {
        equity: Verdict::from_bool(equity),
        budget_balance,
        penalty,
        reward,
    })
}

/// Reads participants from CSV: a header row, then one participant per row
/// with one column per period.
pub fn participants_from_csv<R: Read>(reader: R) -> Result<Vec<Participant>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::invalid(format!("participant CSV row {}: {e}", i + 1)))?;
        let d = rec
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|e| Error::invalid(format!("participant CSV row {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(Participant::new(d));
    }
    if out.is_empty() {
        return Err(Error::invalid("participant CSV has no rows"));
    }
    Ok(out)
}

/// Elementwise sum of the contributions.
pub fn aggregate(participants: &[Participant]) -> Vec<f64> {
    let t = participants.first().map_or(0, |p| p.d.len());
    (0..t)
        .map(|k| {
            participants
                .iter()
                .map(|p| p.d.get(k).copied().unwrap_or(0.0))
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halves_pay_half() {
        let e = vec![1.0, -2.0, 3.0];
        let half: Vec<f64> = e.iter().map(|v| v / 2.0).collect();
        let ps = vec![Participant::new(half.clone()), Participant::new(half)];
        let c = allocate_cost(&ps, &e, 6.0).unwrap();
        assert_eq!(c.shares, vec![3.0, 3.0]);
        assert!(c.audit.unwrap().all_pass());
    }

    #[test]
    fn zero_signal_is_rejected() {
        let ps = vec![Participant::new(vec![0.0, 0.0])];
        assert!(matches!(
            allocate_cost(&ps, &[0.0, 0.0], 1.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn neutral_participant_gets_nothing() {
        let e = vec![1.0, 0.0];
        let ps = vec![
            Participant::new(vec![1.0, 1.0]),
            Participant::new(vec![0.0, -1.0]),
        ];
        let c = allocate_cost(&ps, &e, 5.0).unwrap();
        assert_eq!(c.shares, vec![5.0, 0.0]);
        let a = c.audit.unwrap();
        assert_eq!(a.reward, Verdict::NotApplicable);
        assert!(a.all_pass());
    }

    #[test]
    fn csv_rows_are_participants() {
        let data = "t1,t2\n1,2\n-0.5, 3\n";
        let ps = participants_from_csv(data.as_bytes()).unwrap();
        assert_eq!(ps[1].d, vec![-0.5, 3.0]);
        assert_eq!(aggregate(&ps), vec![0.5, 5.0]);
    }
}
