//! Solver for temporal networks with t1- and t2-constraints only.
//!
//! One Bellman-Ford value iteration solves the difference-constraint part
//! and yields the initial least schedule `phi0`; one Dijkstra run per
//! lifting target computes the single-target distance rows of the graph
//! reweighted by `phi0` (all reduced costs are non-negative under a feasible
//! schedule). From there the loop repeatedly picks the first unsatisfied
//! t2-constraint and lifts the candidate schedule by the least amount that
//! re-establishes feasibility:
//!
//! - rule-delta rewrites a stored distance row to the row under the current
//!   candidate `f` in O(1) per entry, instead of re-running Dijkstra;
//! - rule-f raises every node by `max(0, l* - f(X) - delta_f_X(T))`, which
//!   is the least feasible schedule of the auxiliary network carrying the
//!   new lower bound `X >= l*`.
//!
//! Values only move upward, so each lift permanently rules out one disjunct
//! and the loop runs at most `d` times, `d` the total disjunct count.

use std::collections::{BTreeMap, BTreeSet};

use crate::model::{Certificate, Rdtn, Schedule, SolveError, Verdict, Weight};
use crate::stn::{
    dijkstra_to_target, reduced_costs, solve_stn, Dist, DistanceRow, StnArc, StnGraph,
};

/// The t1-constraint graph of a network: one arc `(x, y, w)` per constraint
/// `y - x <= w`.
pub fn t1_graph(net: &Rdtn) -> StnGraph {
    StnGraph::new(
        net.time_point_count(),
        net.c1()
            .iter()
            .map(|c| StnArc::new(c.x.0, c.y.0, c.w))
            .collect(),
    )
}

/// Shared per-network state: the t1 graph, its least schedule, and the
/// stored distance rows for every lifting target.
#[derive(Clone, Debug)]
pub struct T2Engine {
    graph: StnGraph,
    phi0: Schedule,
    rows: BTreeMap<usize, DistanceRow>,
}

/// Outcome of building an engine: the t1 part may already be inconsistent.
pub enum EngineInit {
    Ready(T2Engine),
    NegativeCycle(Vec<StnArc>),
}

impl T2Engine {
    /// Solves the t1 part and computes distance rows for every variable in
    /// some t2-constraint plus the requested extra targets.
    pub fn build(net: &Rdtn, extra_targets: &[usize]) -> Result<EngineInit, SolveError> {
        let graph = t1_graph(net);
        let phi0 = match solve_stn(&graph)? {
            Verdict::Consistent(s) => s,
            Verdict::Inconsistent(Certificate::NegativeCycle(c)) => {
                return Ok(EngineInit::NegativeCycle(c))
            }
            Verdict::Inconsistent(_) => unreachable!("STN solver emits negative cycles"),
        };
        let reweighted = reduced_costs(&graph, &phi0)?;
        debug_assert!(reweighted.arcs.iter().all(|a| a.weight >= 0));
        let mut targets: BTreeSet<usize> = net.c2().iter().map(|c| c.x.0).collect();
        targets.extend(extra_targets.iter().copied());
        let mut rows = BTreeMap::new();
        for x in targets {
            rows.insert(x, dijkstra_to_target(&reweighted, x)?);
        }
        Ok(EngineInit::Ready(T2Engine { graph, phi0, rows }))
    }

    pub fn phi0(&self) -> &Schedule {
        &self.phi0
    }

    pub fn graph(&self) -> &StnGraph {
        &self.graph
    }

    /// Fresh lifting state starting at the least schedule of the t1 part.
    pub fn new_state(&self) -> LiftState<'_> {
        self.state_from(self.phi0.clone())
    }

    /// Lifting state warm-started from a schedule known to be the least
    /// feasible schedule of the t1 part plus some set of lower bounds.
    pub fn state_from(&self, f: Schedule) -> LiftState<'_> {
        debug_assert!(f.dominates(&self.phi0));
        LiftState {
            engine: self,
            f,
            iterations: 0,
            bounds: BTreeMap::new(),
        }
    }
}

/// The monotone lifting state: candidate schedule, iteration counter, and
/// the greatest lower bound recorded per variable.
#[derive(Clone, Debug)]
pub struct LiftState<'e> {
    engine: &'e T2Engine,
    f: Schedule,
    iterations: u64,
    bounds: BTreeMap<usize, Weight>,
}

impl LiftState<'_> {
    pub fn f(&self) -> &Schedule {
        &self.f
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    /// Greatest accumulated lower bound per variable.
    pub fn bounds(&self) -> impl Iterator<Item = (usize, Weight)> + '_ {
        self.bounds.iter().map(|(&x, &l)| (x, l))
    }

    /// rule-delta: the distance row targeting `x` under the current
    /// candidate, derived entry-wise from the stored row without running
    /// Dijkstra again. Unreachable entries stay unreachable.
    pub fn apply_rule_delta(&self, x: usize) -> Result<DistanceRow, SolveError> {
        let row = self
            .engine
            .rows
            .get(&x)
            .ok_or(SolveError::Precondition("no stored distance row for target"))?;
        let phi0 = &self.engine.phi0;
        let shift_x = self.f.value(x) as i128 - phi0.value(x) as i128;
        let mut dist = Vec::with_capacity(row.dist.len());
        for (t, d) in row.dist.iter().enumerate() {
            dist.push(match d {
                Dist::Infinite => Dist::Infinite,
                Dist::Finite(d0) => {
                    let shift_t = self.f.value(t) as i128 - phi0.value(t) as i128;
                    let v = *d0 as i128 + shift_t - shift_x;
                    Dist::Finite(Weight::try_from(v).map_err(|_| SolveError::Overflow)?)
                }
            });
        }
        Ok(DistanceRow { target: x, dist })
    }

    /// rule-f: lifts the candidate to the least feasible schedule of the
    /// auxiliary network extended with the lower bound `x >= l_star`.
    /// Requires `l_star > f(x)`; afterwards `f(x) == l_star`.
    pub fn apply_rule_f(&mut self, x: usize, l_star: Weight) -> Result<(), SolveError> {
        if l_star <= self.f.value(x) {
            return Err(SolveError::Precondition("rule-f needs l_star above f(x)"));
        }
        let row = self
            .engine
            .rows
            .get(&x)
            .ok_or(SolveError::Precondition("no stored distance row for target"))?;
        let phi0 = &self.engine.phi0;
        let shift_x = self.f.value(x) as i128 - phi0.value(x) as i128;
        let gap = l_star as i128 - self.f.value(x) as i128;
        for t in 0..self.f.len() {
            if let Dist::Finite(d0) = row.dist[t] {
                let shift_t = self.f.value(t) as i128 - phi0.value(t) as i128;
                let delta_f = d0 as i128 + shift_t - shift_x;
                let need = gap - delta_f;
                if need > 0 {
                    let lifted = self.f.value(t) as i128 + need;
                    self.f
                        .set(t, Weight::try_from(lifted).map_err(|_| SolveError::Overflow)?);
                }
            }
        }
        debug_assert_eq!(self.f.value(x), l_star);
        let entry = self.bounds.entry(x).or_insert(l_star);
        *entry = (*entry).max(l_star);
        self.iterations += 1;
        Ok(())
    }
}

/// One lift recorded by the traced solver.
#[derive(Clone, Debug)]
pub struct LiftStep {
    pub var: usize,
    pub l_star: Weight,
    pub f_after: Schedule,
}

/// Trace of a t2DTP run, enough to replay the auxiliary networks.
#[derive(Clone, Debug, Default)]
pub struct T2DtpTrace {
    pub phi0: Option<Schedule>,
    pub steps: Vec<LiftStep>,
}

pub(crate) enum LoopOutcome {
    Satisfied,
    T2Over { constraint: usize },
    CapViolated,
}

/// Scans t2-constraints in ascending variable order and lifts until all
/// hold, one overshoots its greatest upper bound, or a cap is violated.
pub(crate) fn run_lift_loop(
    state: &mut LiftState<'_>,
    net: &Rdtn,
    caps: &[(usize, Weight)],
    mut observer: Option<&mut Vec<LiftStep>>,
) -> Result<LoopOutcome, SolveError> {
    let over_cap =
        |f: &Schedule| caps.iter().any(|&(x, u)| f.value(x) > u);
    if over_cap(state.f()) {
        return Ok(LoopOutcome::CapViolated);
    }
    let total_disjuncts: u64 = net.c2().iter().map(|c| c.intervals().len() as u64).sum();
    loop {
        let violated = net
            .c2()
            .iter()
            .enumerate()
            .find(|(_, c)| !c.satisfied_by(state.f().value(c.x.0)));
        let Some((idx, c)) = violated else {
            return Ok(LoopOutcome::Satisfied);
        };
        let v = state.f().value(c.x.0);
        let Some(l_star) = c.first_lower_above(v) else {
            return Ok(LoopOutcome::T2Over { constraint: idx });
        };
        state.apply_rule_f(c.x.0, l_star)?;
        debug_assert!(state.iterations() <= total_disjuncts);
        if let Some(out) = observer.as_deref_mut() {
            out.push(LiftStep {
                var: c.x.0,
                l_star,
                f_after: state.f().clone(),
            });
        }
        if over_cap(state.f()) {
            return Ok(LoopOutcome::CapViolated);
        }
    }
}

/// Solves a t2DTN (a network without t3-constraints): the least non-negative
/// feasible schedule, or a negative cycle of the t1 part, or a witness pair
/// whose value exceeds its constraint's greatest upper bound.
pub fn solve_t2dtp_traced(net: &Rdtn) -> Result<(Verdict, T2DtpTrace), SolveError> {
    if !net.c3().is_empty() {
        return Err(SolveError::Precondition("t2DTP takes a network without t3-constraints"));
    }
    let engine = match T2Engine::build(net, &[])? {
        EngineInit::Ready(e) => e,
        EngineInit::NegativeCycle(c) => {
            return Ok((
                Verdict::Inconsistent(Certificate::NegativeCycle(c)),
                T2DtpTrace::default(),
            ))
        }
    };
    let mut state = engine.new_state();
    let mut steps = Vec::new();
    let outcome = run_lift_loop(&mut state, net, &[], Some(&mut steps))?;
    let trace = T2DtpTrace {
        phi0: Some(engine.phi0().clone()),
        steps,
    };
    let verdict = match outcome {
        LoopOutcome::Satisfied => Verdict::Consistent(state.f().clone()),
        LoopOutcome::T2Over { constraint } => Verdict::Inconsistent(Certificate::T2Witness {
            schedule: state.f().clone(),
            constraint,
        }),
        LoopOutcome::CapViolated => unreachable!("no caps in a plain t2DTP solve"),
    };
    Ok((verdict, trace))
}

pub fn solve_t2dtp(net: &Rdtn) -> Result<Verdict, SolveError> {
    solve_t2dtp_traced(net).map(|(v, _)| v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Interval, T1Constraint, T2Constraint, TimePointId};

    fn iv(lo: Weight, hi: Weight) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn fig1() -> T2Constraint {
        T2Constraint::new(
            TimePointId(0),
            &[iv(0, 1), iv(2, 3), iv(5, 7), iv(8, 9)],
        )
        .unwrap()
    }

    #[test]
    fn isolated_variable_settles_in_first_interval() {
        let net = Rdtn::new(1, vec![], vec![fig1()], vec![]).unwrap();
        let v = solve_t2dtp(&net).unwrap();
        assert_eq!(v.schedule().unwrap().values(), &[0]);
    }

    #[test]
    fn lower_bound_pushes_into_next_interval() {
        // X0 >= X1 + 4 with X1 >= 0 forces X0 >= 4; least value in the
        // intervals at or above 4 is 5.
        let net = Rdtn::new(
            2,
            vec![T1Constraint::new(TimePointId(0), TimePointId(1), -4).unwrap()],
            vec![fig1()],
            vec![],
        )
        .unwrap();
        let v = solve_t2dtp(&net).unwrap();
        assert_eq!(v.schedule().unwrap().values(), &[5, 0]);
    }

    #[test]
    fn bound_past_last_interval_is_inconsistent() {
        let net = Rdtn::new(
            2,
            vec![T1Constraint::new(TimePointId(0), TimePointId(1), -10).unwrap()],
            vec![fig1()],
            vec![],
        )
        .unwrap();
        match solve_t2dtp(&net).unwrap() {
            Verdict::Inconsistent(Certificate::T2Witness { schedule, constraint }) => {
                assert_eq!(constraint, 0);
                assert_eq!(schedule.value(0), 10);
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn rule_f_on_isolated_variable_moves_only_that_variable() {
        let net = Rdtn::new(2, vec![], vec![fig1()], vec![]).unwrap();
        let engine = match T2Engine::build(&net, &[]).unwrap() {
            EngineInit::Ready(e) => e,
            EngineInit::NegativeCycle(_) => panic!("consistent"),
        };
        let mut state = engine.new_state();
        state.apply_rule_f(0, 5).unwrap();
        assert_eq!(state.f().values(), &[5, 0]);
    }

    #[test]
    fn rule_delta_matches_fresh_dijkstra_after_lift() {
        // Chain 1 -> 0 with zero reduced slack: lifting 0 lifts 1 too.
        let net = Rdtn::new(
            2,
            vec![T1Constraint::new(TimePointId(1), TimePointId(0), 0).unwrap()],
            vec![T2Constraint::new(TimePointId(0), &[iv(3, 4)]).unwrap()],
            vec![],
        )
        .unwrap();
        let engine = match T2Engine::build(&net, &[]).unwrap() {
            EngineInit::Ready(e) => e,
            EngineInit::NegativeCycle(_) => panic!("consistent"),
        };
        let mut state = engine.new_state();
        // Identity case: f == phi0 leaves the row unchanged.
        let row = state.apply_rule_delta(0).unwrap();
        assert_eq!(row, engine.rows[&0]);

        state.apply_rule_f(0, 3).unwrap();
        assert_eq!(state.f().values(), &[3, 3]);
        let derived = state.apply_rule_delta(0).unwrap();
        let reweighted = reduced_costs(&t1_graph(&net), state.f()).unwrap();
        let fresh = dijkstra_to_target(&reweighted, 0).unwrap();
        assert_eq!(derived, fresh);
    }

    #[test]
    fn candidate_equals_cold_solve_of_auxiliary_network() {
        let net = Rdtn::new(
            3,
            vec![
                T1Constraint::new(TimePointId(1), TimePointId(0), 0).unwrap(),
                T1Constraint::new(TimePointId(2), TimePointId(1), 2).unwrap(),
            ],
            vec![
                T2Constraint::new(TimePointId(0), &[iv(2, 2), iv(6, 6)]).unwrap(),
                T2Constraint::new(TimePointId(1), &[iv(4, 5)]).unwrap(),
            ],
            vec![],
        )
        .unwrap();
        let (verdict, trace) = solve_t2dtp_traced(&net).unwrap();
        assert!(verdict.is_consistent());
        // Re-solve the accumulated auxiliary STN cold after every lift.
        let mut bounds: BTreeMap<usize, Weight> = BTreeMap::new();
        for step in &trace.steps {
            let entry = bounds.entry(step.var).or_insert(step.l_star);
            *entry = (*entry).max(step.l_star);
            let n = net.time_point_count();
            let mut arcs: Vec<StnArc> = t1_graph(&net).arcs.clone();
            for t in 0..n {
                arcs.push(StnArc::new(t, n, 0));
            }
            for (&x, &l) in &bounds {
                arcs.push(StnArc::new(x, n, -l));
            }
            let aux = StnGraph::new(n + 1, arcs);
            let cold = solve_stn(&aux).unwrap();
            let cold = cold.schedule().expect("auxiliary network is consistent");
            assert_eq!(&cold.values()[..n], step.f_after.values());
        }
    }
}
