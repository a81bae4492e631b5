//! Independent brute-force ground truth.
//!
//! Every disjunctive network reduces to a set of STN checks by choosing one
//! disjunct per constraint: an interval per t2-constraint row, one side per
//! t3-constraint, and one weighted node per hyperarc. A selection is
//! feasible when the STN made of the difference constraints plus the
//! selected lower bounds admits a least non-negative schedule that also
//! meets every selected upper bound. The oracle shares only the model and
//! STN layers with the real solvers.
//!
//! The enumeration budget counts selections, is checked before any work, and
//! refusals are deterministic for a given budget.

use thiserror::Error;

use crate::hytn::{Hytn, Orientation};
use crate::model::{Interval, Network, Rdtn, Schedule, SolveError, Verdict, Weight};
use crate::stn::{solve_stn, StnArc, StnGraph};

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    /// Maximum number of disjunct selections to enumerate.
    pub budget: u64,
    /// Collect the least schedule of every feasible selection instead of
    /// stopping at the first one. Minimality tests need the full set.
    pub collect_all: bool,
}

impl Default for OracleConfig {
    fn default() -> OracleConfig {
        OracleConfig {
            budget: 1_000_000,
            collect_all: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration needs {required} selections, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// What the enumeration found.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub consistent: bool,
    /// Least schedule of the first feasible selection, when consistent.
    pub witness: Option<Schedule>,
    /// Least schedules of all feasible selections (`collect_all` mode).
    pub least_schedules: Vec<Schedule>,
    /// STN solves performed.
    pub stn_solves: u64,
}

impl OracleReport {
    /// Pointwise minimum over all collected least schedules. For networks
    /// without t3-constraints and without hyperarcs this is exactly the
    /// least feasible schedule; with two-variable disjuncts it is only a
    /// lower envelope.
    pub fn pointwise_min(&self) -> Option<Schedule> {
        let mut iter = self.least_schedules.iter();
        let first = iter.next()?.clone();
        Some(iter.fold(first, |mut acc, s| {
            for i in 0..acc.len() {
                acc.set(i, acc.value(i).min(s.value(i)));
            }
            acc
        }))
    }

}

/// One dimension of the selection space.
enum Dim {
    /// Pick an interval of a t2 row as an absolute bound on `var`.
    T2Row { var: usize, intervals: Vec<Interval> },
    /// Pick a side of a t3-constraint.
    T3 {
        first: (usize, Interval),
        second: (usize, Interval),
    },
    /// Pick one weighted node of a hyperarc.
    Hyperarc {
        orientation: Orientation,
        pivot: usize,
        others: Vec<(usize, Weight)>,
    },
}

impl Dim {
    fn len(&self) -> usize {
        match self {
            Dim::T2Row { intervals, .. } => intervals.len(),
            Dim::T3 { .. } => 2,
            Dim::Hyperarc { others, .. } => others.len(),
        }
    }
}

struct Enumeration {
    base_arcs: Vec<StnArc>,
    dims: Vec<Dim>,
    n: usize,
}

impl Enumeration {
    fn selection_count(&self) -> u128 {
        self.dims.iter().map(|d| d.len() as u128).product()
    }

    /// Feasibility of one selection: least non-negative schedule of the
    /// base arcs plus selected lower bounds, checked against the selected
    /// upper caps. Returns the schedule restricted to the user nodes.
    fn solve_selection(&self, choice: &[usize]) -> Result<Option<Schedule>, SolveError> {
        let z = self.n;
        let mut arcs = self.base_arcs.clone();
        let mut caps: Vec<(usize, Weight)> = Vec::new();
        for (dim, &pick) in self.dims.iter().zip(choice) {
            match dim {
                Dim::T2Row { var, intervals } => {
                    let iv = intervals[pick];
                    arcs.push(StnArc::new(*var, z, -iv.lo));
                    caps.push((*var, iv.hi));
                }
                Dim::T3 { first, second } => {
                    let (var, iv) = if pick == 0 { *first } else { *second };
                    arcs.push(StnArc::new(var, z, -iv.lo));
                    caps.push((var, iv.hi));
                }
                Dim::Hyperarc {
                    orientation,
                    pivot,
                    others,
                } => {
                    let (v, w) = others[pick];
                    let arc = match orientation {
                        // s(v) - s(t_A) <= w for the chosen head v.
                        Orientation::MultiHead => StnArc::new(*pivot, v, w),
                        // s(h_A) - s(v) <= w for the chosen tail v.
                        Orientation::MultiTail => StnArc::new(v, *pivot, w),
                    };
                    arcs.push(arc);
                }
            }
        }
        let g = StnGraph::new(self.n + 1, arcs);
        match solve_stn(&g)? {
            Verdict::Inconsistent(_) => Ok(None),
            Verdict::Consistent(s) => {
                debug_assert_eq!(s.value(z), 0);
                if caps.iter().any(|&(v, u)| s.value(v) > u) {
                    return Ok(None);
                }
                Ok(Some(Schedule::from_values(s.values()[..self.n].to_vec())))
            }
        }
    }

    fn run(&self, cfg: &OracleConfig) -> Result<OracleReport, OracleError> {
        let required = self.selection_count();
        if required > cfg.budget as u128 {
            return Err(OracleError::BudgetExceeded {
                required,
                budget: cfg.budget,
            });
        }
        let mut report = OracleReport {
            consistent: false,
            witness: None,
            least_schedules: Vec::new(),
            stn_solves: 0,
        };
        let mut choice = vec![0usize; self.dims.len()];
        loop {
            report.stn_solves += 1;
            if let Some(sched) = self.solve_selection(&choice)? {
                if !report.consistent {
                    report.consistent = true;
                    report.witness = Some(sched.clone());
                }
                if cfg.collect_all {
                    report.least_schedules.push(sched);
                } else {
                    return Ok(report);
                }
            }
            // Mixed-radix increment, most significant dimension first.
            let mut pos = self.dims.len();
            loop {
                if pos == 0 {
                    return Ok(report);
                }
                pos -= 1;
                choice[pos] += 1;
                if choice[pos] < self.dims[pos].len() {
                    break;
                }
                choice[pos] = 0;
            }
        }
    }
}

fn t2_dims(c2: &[crate::model::T2Constraint]) -> Vec<Dim> {
    c2.iter()
        .map(|c| Dim::T2Row {
            var: c.x.0,
            intervals: c.intervals().to_vec(),
        })
        .collect()
}

fn t3_dims(c3: &[crate::model::T3Constraint]) -> Vec<Dim> {
    c3.iter()
        .map(|c| Dim::T3 {
            first: (c.first.0 .0, c.first.1),
            second: (c.second.0 .0, c.second.1),
        })
        .collect()
}

/// Exhaustive disjunct enumeration over an RDTN.
pub fn oracle_rdtp(net: &Rdtn, cfg: &OracleConfig) -> Result<OracleReport, OracleError> {
    let mut dims = t2_dims(net.c2());
    dims.extend(t3_dims(net.c3()));
    let e = Enumeration {
        base_arcs: net
            .c1()
            .iter()
            .map(|c| StnArc::new(c.x.0, c.y.0, c.w))
            .collect(),
        dims,
        n: net.time_point_count(),
    };
    let report = e.run(cfg)?;
    debug_assert!(report
        .witness
        .as_ref()
        .is_none_or(|w| crate::model::satisfies(w, net)));
    Ok(report)
}

/// Exhaustive disjunct enumeration over a hyper network of either
/// orientation, including blended t2- or t3-constraints.
pub fn oracle_hytn(net: &Hytn, cfg: &OracleConfig) -> Result<OracleReport, OracleError> {
    let mut dims: Vec<Dim> = net
        .arcs()
        .iter()
        .map(|a| Dim::Hyperarc {
            orientation: a.orientation,
            pivot: a.pivot,
            others: a.others().to_vec(),
        })
        .collect();
    dims.extend(t2_dims(net.c2()));
    dims.extend(t3_dims(net.c3()));
    let e = Enumeration {
        base_arcs: Vec::new(),
        dims,
        n: net.time_point_count(),
    };
    let report = e.run(cfg)?;
    debug_assert!(report
        .witness
        .as_ref()
        .is_none_or(|w| net.satisfied_by(w)));
    Ok(report)
}

/// Oracle over either network class.
pub fn oracle_network(net: &Network, cfg: &OracleConfig) -> Result<OracleReport, OracleError> {
    match net {
        Network::Rdtn(n) => oracle_rdtp(n, cfg),
        Network::Hytn(h) => oracle_hytn(h, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Interval, T1Constraint, T2Constraint, T3Constraint, TimePointId};

    fn iv(lo: Weight, hi: Weight) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn tp(i: usize) -> TimePointId {
        TimePointId(i)
    }

    #[test]
    fn t3_selection_example() {
        // First disjunct dead (X0 >= 4), second forced: X0=4, X1=1.
        let net = Rdtn::new(
            3,
            vec![T1Constraint::new(tp(0), tp(2), -4).unwrap()],
            vec![],
            vec![T3Constraint::new((tp(0), iv(2, 3)), (tp(1), iv(1, 2))).unwrap()],
        )
        .unwrap();
        let cfg = OracleConfig {
            collect_all: true,
            ..OracleConfig::default()
        };
        let report = oracle_rdtp(&net, &cfg).unwrap();
        assert!(report.consistent);
        assert_eq!(report.least_schedules.len(), 1);
        assert_eq!(report.least_schedules[0].values(), &[4, 1, 0]);
    }

    #[test]
    fn both_disjuncts_dead_is_inconsistent() {
        let net = Rdtn::new(
            2,
            vec![T1Constraint::new(tp(0), tp(1), -4).unwrap()],
            vec![],
            vec![T3Constraint::new((tp(0), iv(0, 1)), (tp(1), iv(-5, -1))).unwrap()],
        )
        .unwrap();
        let report = oracle_rdtp(&net, &OracleConfig::default()).unwrap();
        assert!(!report.consistent);
    }

    #[test]
    fn budget_refusal_is_deterministic() {
        let c2 = (0..4)
            .map(|i| T2Constraint::new(tp(i), &[iv(0, 0), iv(2, 2), iv(4, 4)]).unwrap())
            .collect();
        let net = Rdtn::new(4, vec![], c2, vec![]).unwrap();
        let cfg = OracleConfig {
            budget: 80,
            collect_all: false,
        };
        for _ in 0..2 {
            assert_eq!(
                oracle_rdtp(&net, &cfg).unwrap_err(),
                OracleError::BudgetExceeded {
                    required: 81,
                    budget: 80
                }
            );
        }
    }

    #[test]
    fn hyperarc_selection_matches_satisfaction() {
        use crate::hytn::Hyperarc;
        let net = Hytn::new(
            2,
            vec![
                Hyperarc::multi_head(0, vec![(1, -1)]).unwrap(),
                Hyperarc::multi_head(1, vec![(0, 0)]).unwrap(),
            ],
            vec![],
            vec![],
        )
        .unwrap();
        let report = oracle_hytn(&net, &OracleConfig::default()).unwrap();
        assert!(!report.consistent);
    }
}
