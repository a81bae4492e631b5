//! Full RDTP solving: t1, t2, and t3 constraints together.
//!
//! The t3 layer reduces to 2-SAT over one boolean meta-variable per
//! t3-constraint: `x_c` true means the first disjunct of `c` is enforced,
//! false means the second is. For each constraint and each of its two
//! disjuncts, the disjunct's interval is enforced on top of the t1/t2 part
//! as a lower bound plus an upper cap and solved by the t2 lifting engine,
//! warm-started from the base least schedule. An inconsistent side forces
//! the meta-variable; a side whose least schedule pushes some other
//! constraint's disjunct variable past its upper bound adds the matching
//! binary implication. A satisfying assignment selects one consistent
//! context per constraint, and the pointwise maximum of their least
//! schedules is feasible for the whole network.

use crate::model::{Certificate, Rdtn, Schedule, SolveError, Verdict};
use crate::t2dtp::{run_lift_loop, EngineInit, LoopOutcome, T2Engine};
use crate::twosat::{solve_2sat, Assignment, CnfFormula2, Lit, TwoSatOutcome};

/// Which disjunct of a t3-constraint a context enforces.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::First, Side::Second];
}

/// Result of enforcing one disjunct of one t3-constraint on the t2 part.
#[derive(Clone, PartialEq, Debug)]
pub struct DisjunctContext {
    pub c3_index: usize,
    pub side: Side,
    pub outcome: ContextOutcome,
}

#[derive(Clone, PartialEq, Debug)]
pub enum ContextOutcome {
    /// Least feasible schedule of the t2DTN extended with the disjunct.
    Consistent(Schedule),
    Inconsistent,
}

impl DisjunctContext {
    pub fn schedule(&self) -> Option<&Schedule> {
        match &self.outcome {
            ContextOutcome::Consistent(s) => Some(s),
            ContextOutcome::Inconsistent => None,
        }
    }
}

/// Where a clause came from, for audit output.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClauseProvenance {
    /// Enforcing this side is infeasible on its own.
    ContextInconsistent { c: usize, side: Side },
    /// Enforcing `(c, side)` pushes the named disjunct variable of `other`
    /// past its upper bound.
    UpperBoundViolation {
        c: usize,
        side: Side,
        other: usize,
        other_side: Side,
    },
}

/// The 2-SAT reduction with one provenance record per clause.
#[derive(Clone, PartialEq, Debug)]
pub struct ClauseSet {
    pub formula: CnfFormula2,
    pub provenance: Vec<ClauseProvenance>,
}

/// Builds the clause set from the per-disjunct contexts, two per
/// t3-constraint in `(first, second)` order.
pub fn build_clause_set(net: &Rdtn, contexts: &[DisjunctContext]) -> ClauseSet {
    let t3 = net.c3();
    debug_assert_eq!(contexts.len(), 2 * t3.len());
    let mut formula = CnfFormula2::new(t3.len());
    let mut provenance = Vec::new();
    for (c_idx, _) in t3.iter().enumerate() {
        for side in Side::BOTH {
            let ctx = &contexts[2 * c_idx + usize::from(side == Side::Second)];
            debug_assert_eq!((ctx.c3_index, ctx.side), (c_idx, side));
            // Literal asserted by choosing this side.
            let chosen = match side {
                Side::First => Lit::pos(c_idx),
                Side::Second => Lit::neg(c_idx),
            };
            let Some(phi) = ctx.schedule() else {
                // The side alone is infeasible: force the other side.
                formula.add_unit(chosen.negated());
                provenance.push(ClauseProvenance::ContextInconsistent { c: c_idx, side });
                continue;
            };
            for (o_idx, other) in t3.iter().enumerate() {
                if o_idx == c_idx {
                    continue;
                }
                // First disjunct of the other constraint dead: chosen => ¬x_o.
                if phi.value(other.first.0 .0) > other.first.1.hi {
                    formula.add_binary(chosen.negated(), Lit::neg(o_idx));
                    provenance.push(ClauseProvenance::UpperBoundViolation {
                        c: c_idx,
                        side,
                        other: o_idx,
                        other_side: Side::First,
                    });
                }
                // Second disjunct dead: chosen => x_o.
                if phi.value(other.second.0 .0) > other.second.1.hi {
                    formula.add_binary(chosen.negated(), Lit::pos(o_idx));
                    provenance.push(ClauseProvenance::UpperBoundViolation {
                        c: c_idx,
                        side,
                        other: o_idx,
                        other_side: Side::Second,
                    });
                }
            }
        }
    }
    ClauseSet {
        formula,
        provenance,
    }
}

/// Everything the solver computed along the way, for audit and tests.
#[derive(Clone, Debug)]
pub struct RdtpTrace {
    /// Least schedule of the t2DTN part, when it is consistent.
    pub base: Option<Schedule>,
    pub contexts: Vec<DisjunctContext>,
    pub clauses: Option<ClauseSet>,
    pub assignment: Option<Assignment>,
}

/// Solves a full RDTN. With no t3-constraints this degenerates to the t2DTP
/// solution; otherwise the result is the pointwise-maximum schedule over the
/// contexts selected by a satisfying assignment of the clause set.
pub fn solve_rdtp_traced(net: &Rdtn) -> Result<(Verdict, RdtpTrace), SolveError> {
    let mut trace = RdtpTrace {
        base: None,
        contexts: Vec::new(),
        clauses: None,
        assignment: None,
    };
    let extra_targets: Vec<usize> = net
        .c3()
        .iter()
        .flat_map(|c| [c.first.0 .0, c.second.0 .0])
        .collect();
    let engine = match T2Engine::build(net, &extra_targets)? {
        EngineInit::Ready(e) => e,
        EngineInit::NegativeCycle(c) => {
            return Ok((
                Verdict::Inconsistent(Certificate::NegativeCycle(c)),
                trace,
            ))
        }
    };
    let mut base_state = engine.new_state();
    let base = match run_lift_loop(&mut base_state, net, &[], None)? {
        LoopOutcome::Satisfied => base_state.f().clone(),
        LoopOutcome::T2Over { constraint } => {
            return Ok((
                Verdict::Inconsistent(Certificate::T2Witness {
                    schedule: base_state.f().clone(),
                    constraint,
                }),
                trace,
            ))
        }
        LoopOutcome::CapViolated => unreachable!("base solve has no caps"),
    };
    trace.base = Some(base.clone());
    if net.c3().is_empty() {
        return Ok((Verdict::Consistent(base), trace));
    }

    // One context per disjunct, warm-started from the base least schedule.
    for (c_idx, c) in net.c3().iter().enumerate() {
        for side in Side::BOTH {
            let (tp, iv) = match side {
                Side::First => c.first,
                Side::Second => c.second,
            };
            let mut state = engine.state_from(base.clone());
            let mut feasible = true;
            if state.f().value(tp.0) < iv.lo {
                state.apply_rule_f(tp.0, iv.lo)?;
            }
            let caps = [(tp.0, iv.hi)];
            match run_lift_loop(&mut state, net, &caps, None)? {
                LoopOutcome::Satisfied => {}
                LoopOutcome::T2Over { .. } | LoopOutcome::CapViolated => feasible = false,
            }
            trace.contexts.push(DisjunctContext {
                c3_index: c_idx,
                side,
                outcome: if feasible {
                    ContextOutcome::Consistent(state.f().clone())
                } else {
                    ContextOutcome::Inconsistent
                },
            });
        }
    }

    let clauses = build_clause_set(net, &trace.contexts);
    let outcome = solve_2sat(&clauses.formula);
    trace.clauses = Some(clauses);
    match outcome {
        TwoSatOutcome::Unsatisfiable(core) => Ok((
            Verdict::Inconsistent(Certificate::UnsatCore(core)),
            trace,
        )),
        TwoSatOutcome::Satisfiable(assignment) => {
            let mut result = base;
            for (c_idx, _) in net.c3().iter().enumerate() {
                let side = if assignment.values[c_idx] {
                    Side::First
                } else {
                    Side::Second
                };
                let ctx = &trace.contexts[2 * c_idx + usize::from(side == Side::Second)];
                let phi = ctx
                    .schedule()
                    .expect("2-SAT never selects an infeasible context");
                result.max_with(phi);
            }
            debug_assert!(crate::model::satisfies(&result, net));
            trace.assignment = Some(assignment);
            Ok((Verdict::Consistent(result), trace))
        }
    }
}

pub fn solve_rdtp(net: &Rdtn) -> Result<Verdict, SolveError> {
    solve_rdtp_traced(net).map(|(v, _)| v)
}

/// Upper bound on the clause count from the construction:
/// `2·k + 4·k·(k−1)` for `k` t3-constraints.
pub fn clause_count_bound(t3_count: usize) -> usize {
    2 * t3_count + 4 * t3_count * t3_count.saturating_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{satisfies, Interval, T1Constraint, T2Constraint, T3Constraint, TimePointId};
    use crate::model::Weight;
    use crate::twosat::Clause2;

    fn iv(lo: Weight, hi: Weight) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn tp(i: usize) -> TimePointId {
        TimePointId(i)
    }

    #[test]
    fn no_t3_degenerates_to_t2dtp() {
        let net = Rdtn::new(
            2,
            vec![T1Constraint::new(tp(0), tp(1), -4).unwrap()],
            vec![T2Constraint::new(tp(0), &[iv(0, 1), iv(5, 7)]).unwrap()],
            vec![],
        )
        .unwrap();
        let a = solve_rdtp(&net).unwrap();
        let b = crate::t2dtp::solve_t2dtp(&net).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dead_first_disjunct_forces_second() {
        // X0 >= 4 kills the first disjunct (2<=X0<=3) of the t3-constraint,
        // so the second (1<=X1<=2) is enforced: X0=4, X1=1.
        let net = Rdtn::new(
            3,
            vec![T1Constraint::new(tp(0), tp(2), -4).unwrap()],
            vec![],
            vec![T3Constraint::new((tp(0), iv(2, 3)), (tp(1), iv(1, 2))).unwrap()],
        )
        .unwrap();
        let (verdict, trace) = solve_rdtp_traced(&net).unwrap();
        let sched = verdict.schedule().expect("consistent");
        assert_eq!(sched.values(), &[4, 1, 0]);
        assert!(satisfies(sched, &net));
        // The first-side context is infeasible and yields the unary clause.
        let clauses = trace.clauses.unwrap();
        assert_eq!(
            clauses.provenance[0],
            ClauseProvenance::ContextInconsistent {
                c: 0,
                side: Side::First
            }
        );
        assert!(matches!(
            clauses.formula.clauses[0],
            Clause2::Unit(l) if l == Lit::neg(0)
        ));
    }

    #[test]
    fn cross_constraint_implication_is_emitted() {
        // Choosing the first disjunct of c0 lifts X1 past the upper bound of
        // c1's first disjunct, so the clause (¬x0 ∨ ¬x1) appears.
        let net = Rdtn::new(
            3,
            vec![T1Constraint::new(tp(1), tp(0), -5).unwrap()],
            vec![],
            vec![
                T3Constraint::new((tp(0), iv(5, 9)), (tp(2), iv(0, 0))).unwrap(),
                T3Constraint::new((tp(1), iv(0, 3)), (tp(2), iv(0, 0))).unwrap(),
            ],
        )
        .unwrap();
        let (_, trace) = solve_rdtp_traced(&net).unwrap();
        let clauses = trace.clauses.unwrap();
        assert!(clauses
            .provenance.contains(&ClauseProvenance::UpperBoundViolation {
                    c: 0,
                    side: Side::First,
                    other: 1,
                    other_side: Side::First,
                }));
        assert!(clauses.formula.clauses.len() <= clause_count_bound(2));
    }

    #[test]
    fn clashing_unary_clauses_give_unsat_core() {
        // Both t3-constraints sit on the same variable with disjoint windows
        // the t1 part cannot reconcile: X0 must be >= 4 but both first
        // disjuncts cap it at 3 and both second disjuncts cap X1 at 0 while
        // X1 >= 2.
        let net = Rdtn::new(
            3,
            vec![
                T1Constraint::new(tp(0), tp(2), -4).unwrap(),
                T1Constraint::new(tp(1), tp(2), -2).unwrap(),
            ],
            vec![],
            vec![
                T3Constraint::new((tp(0), iv(2, 3)), (tp(1), iv(0, 0))).unwrap(),
                T3Constraint::new((tp(0), iv(0, 1)), (tp(1), iv(0, 0))).unwrap(),
            ],
        )
        .unwrap();
        match solve_rdtp(&net).unwrap() {
            Verdict::Inconsistent(Certificate::UnsatCore(core)) => {
                let (_, trace) = solve_rdtp_traced(&net).unwrap();
                let formula = &trace.clauses.unwrap().formula;
                assert!(crate::twosat::verify_unsat_core(formula, &core));
            }
            other => panic!("expected unsat core, got {other:?}"),
        }
    }
}
