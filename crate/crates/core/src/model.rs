//! Core data model: time-points, constraints, networks, schedules, verdicts.
//!
//! Time-points are dense indices `0..n`. The implicit zero time-point `z` is
//! never part of a user network; auxiliary constructions materialize it as
//! index `n` when they need it. Weights are exact signed 64-bit integers and
//! all solver arithmetic on them is overflow-checked; overflow is reported as
//! a hard error, never wrapped.
//!
//! All types here are immutable after construction and safe to share across
//! threads.

use std::fmt;
use thiserror::Error;

use crate::hytn::Hytn;
use crate::stn::StnArc;
use crate::twosat::UnsatCore;

/// Abstract integer time units.
///
/// `i64::MIN` is rejected at construction everywhere so that negation is
/// total (orientation reduction flips interval signs).
pub type Weight = i64;

/// Index of a time-point in its network's table. Indices are dense: `0..n`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TimePointId(pub usize);

impl fmt::Display for TimePointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}", self.0)
    }
}

/// Errors raised while constructing model values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("interval has lo {lo} > hi {hi}")]
    InvalidInterval { lo: Weight, hi: Weight },
    #[error("t2-constraint needs at least one interval")]
    EmptyIntervalList,
    #[error("time-point {tp} out of range for network of size {n}")]
    TimePointOutOfRange { tp: usize, n: usize },
    #[error("t1 self-loop on {tp} with negative weight {w} is infeasible")]
    NegativeSelfLoop { tp: usize, w: Weight },
    #[error("t3-constraint needs two distinct time-points, got {tp} twice")]
    DuplicateT3TimePoint { tp: usize },
    #[error("weight {0} is out of range (i64::MIN is reserved)")]
    WeightOutOfRange(Weight),
    #[error("hyperarc needs at least one weighted node besides the pivot")]
    EmptyHyperarc,
    #[error("hyperarc pivot {pivot} also appears among its other nodes")]
    PivotInOthers { pivot: usize },
    #[error("hyperarc mentions node {node} more than once")]
    DuplicateHyperarcNode { node: usize },
    #[error("network mixes multi-head and multi-tail hyperarcs")]
    MixedOrientation,
    #[error("network carries both t2- and t3-constraints next to hyperarcs")]
    BlendConflict,
}

fn check_weight(w: Weight) -> Result<Weight, ModelError> {
    if w == Weight::MIN {
        Err(ModelError::WeightOutOfRange(w))
    } else {
        Ok(w)
    }
}

/// A closed integer interval `[lo, hi]`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Interval {
    pub lo: Weight,
    pub hi: Weight,
}

impl Interval {
    pub fn new(lo: Weight, hi: Weight) -> Result<Interval, ModelError> {
        check_weight(lo)?;
        check_weight(hi)?;
        if lo > hi {
            return Err(ModelError::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn contains(&self, v: Weight) -> bool {
        self.lo <= v && v <= self.hi
    }

    /// Intersection, or `None` when the intervals are disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A simple difference constraint `Y - X <= w`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct T1Constraint {
    pub x: TimePointId,
    pub y: TimePointId,
    pub w: Weight,
}

impl T1Constraint {
    pub fn new(x: TimePointId, y: TimePointId, w: Weight) -> Result<T1Constraint, ModelError> {
        check_weight(w)?;
        // A self-loop with w >= 0 is vacuous; w < 0 is trivially infeasible.
        if x == y && w < 0 {
            return Err(ModelError::NegativeSelfLoop { tp: x.0, w });
        }
        Ok(T1Constraint { x, y, w })
    }
}

/// Sorts, merges overlapping or endpoint-touching intervals, and returns the
/// list in nominal ordering (strictly ascending endpoints).
///
/// Two intervals merge when the next one starts at or before the end of the
/// current one; the merged list covers exactly the same point set as the
/// input.
pub fn canonicalize_t2(raw: &[Interval]) -> Result<Vec<Interval>, ModelError> {
    if raw.is_empty() {
        return Err(ModelError::EmptyIntervalList);
    }
    let mut sorted: Vec<Interval> = raw.to_vec();
    sorted.sort();
    let mut out: Vec<Interval> = Vec::with_capacity(sorted.len());
    for iv in sorted {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
            _ => out.push(iv),
        }
    }
    Ok(out)
}

/// A single-variable disjunction of intervals: `∨_i (lo_i <= X <= hi_i)`.
///
/// Intervals are kept canonical: sorted, merged, pairwise disjoint.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct T2Constraint {
    pub x: TimePointId,
    intervals: Vec<Interval>,
}

impl T2Constraint {
    pub fn new(x: TimePointId, raw: &[Interval]) -> Result<T2Constraint, ModelError> {
        Ok(T2Constraint {
            x,
            intervals: canonicalize_t2(raw)?,
        })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn max_upper(&self) -> Weight {
        self.intervals.last().expect("non-empty").hi
    }

    pub fn satisfied_by(&self, v: Weight) -> bool {
        // Binary search on the disjoint sorted intervals.
        let idx = self.intervals.partition_point(|iv| iv.hi < v);
        idx < self.intervals.len() && self.intervals[idx].contains(v)
    }

    /// Smallest interval lower bound strictly above `v`, if any.
    pub fn first_lower_above(&self, v: Weight) -> Option<Weight> {
        let idx = self.intervals.partition_point(|iv| iv.lo <= v);
        self.intervals.get(idx).map(|iv| iv.lo)
    }

    /// Intersection with another constraint on the same variable.
    /// `None` when the point sets are disjoint.
    pub fn intersect(&self, other: &T2Constraint) -> Option<T2Constraint> {
        debug_assert_eq!(self.x, other.x);
        let mut pieces = Vec::new();
        for a in &self.intervals {
            for b in &other.intervals {
                if let Some(iv) = a.intersect(b) {
                    pieces.push(iv);
                }
            }
        }
        if pieces.is_empty() {
            return None;
        }
        Some(T2Constraint {
            x: self.x,
            intervals: canonicalize_t2(&pieces).expect("non-empty"),
        })
    }
}

/// Groups t2 rows per variable (ascending) and intersects multiples. A
/// variable whose intersection is empty keeps its original rows verbatim and
/// lands in the returned empty-domain list.
pub(crate) fn merge_t2_rows(
    n: usize,
    rows: Vec<T2Constraint>,
) -> Result<(Vec<T2Constraint>, Vec<usize>), ModelError> {
    let mut by_var: Vec<Vec<T2Constraint>> = vec![Vec::new(); n];
    for c in rows {
        if c.x.0 >= n {
            return Err(ModelError::TimePointOutOfRange { tp: c.x.0, n });
        }
        by_var[c.x.0].push(c);
    }
    let mut merged = Vec::new();
    let mut empty_vars = Vec::new();
    for (var, rows) in by_var.into_iter().enumerate() {
        if rows.is_empty() {
            continue;
        }
        let mut acc = Some(rows[0].clone());
        for row in &rows[1..] {
            acc = acc.and_then(|a| a.intersect(row));
        }
        match acc {
            Some(one) => merged.push(one),
            None => {
                empty_vars.push(var);
                merged.extend(rows);
            }
        }
    }
    Ok((merged, empty_vars))
}

/// A two-variable disjunction of two intervals:
/// `(l1 <= X <= u1) ∨ (l2 <= Y <= u2)` with `X` the lower-indexed time-point.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct T3Constraint {
    pub first: (TimePointId, Interval),
    pub second: (TimePointId, Interval),
}

impl T3Constraint {
    /// Builds the constraint, ordering the disjuncts by time-point index.
    pub fn new(
        a: (TimePointId, Interval),
        b: (TimePointId, Interval),
    ) -> Result<T3Constraint, ModelError> {
        if a.0 == b.0 {
            return Err(ModelError::DuplicateT3TimePoint { tp: a.0 .0 });
        }
        let (first, second) = if a.0 < b.0 { (a, b) } else { (b, a) };
        Ok(T3Constraint { first, second })
    }

    pub fn satisfied_by(&self, first_val: Weight, second_val: Weight) -> bool {
        self.first.1.contains(first_val) || self.second.1.contains(second_val)
    }
}

/// A restricted disjunctive temporal network: `n` time-points plus t1/t2/t3
/// constraint sets.
///
/// Construction validates all indices, canonicalizes every t2-constraint and
/// intersects multiple t2-constraints on one variable. A variable whose
/// intersection comes out empty is listed in `empty_t2_vars` (the network is
/// then trivially inconsistent) and its original rows are kept verbatim so
/// the network still serializes faithfully.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rdtn {
    n: usize,
    c1: Vec<T1Constraint>,
    c2: Vec<T2Constraint>,
    c3: Vec<T3Constraint>,
    empty_t2_vars: Vec<usize>,
}

impl Rdtn {
    pub fn new(
        n: usize,
        c1: Vec<T1Constraint>,
        c2: Vec<T2Constraint>,
        c3: Vec<T3Constraint>,
    ) -> Result<Rdtn, ModelError> {
        let check = |tp: TimePointId| -> Result<(), ModelError> {
            if tp.0 >= n {
                Err(ModelError::TimePointOutOfRange { tp: tp.0, n })
            } else {
                Ok(())
            }
        };
        for c in &c1 {
            check(c.x)?;
            check(c.y)?;
        }
        for c in &c2 {
            check(c.x)?;
        }
        for c in &c3 {
            check(c.first.0)?;
            check(c.second.0)?;
        }

        let (c2, empty_t2_vars) = merge_t2_rows(n, c2)?;
        Ok(Rdtn {
            n,
            c1,
            c2,
            c3,
            empty_t2_vars,
        })
    }

    pub fn time_point_count(&self) -> usize {
        self.n
    }

    pub fn c1(&self) -> &[T1Constraint] {
        &self.c1
    }

    pub fn c2(&self) -> &[T2Constraint] {
        &self.c2
    }

    pub fn c3(&self) -> &[T3Constraint] {
        &self.c3
    }

    /// Variables whose combined t2 domain is empty; non-empty means the
    /// network is trivially inconsistent.
    pub fn empty_t2_vars(&self) -> &[usize] {
        &self.empty_t2_vars
    }
}

/// A total assignment of integer times to the time-points of one network.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Schedule {
    values: Vec<Weight>,
}

impl Schedule {
    pub fn zero(n: usize) -> Schedule {
        Schedule { values: vec![0; n] }
    }

    pub fn from_values(values: Vec<Weight>) -> Schedule {
        Schedule { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, tp: usize) -> Weight {
        self.values[tp]
    }

    pub fn set(&mut self, tp: usize, v: Weight) {
        self.values[tp] = v;
    }

    pub fn values(&self) -> &[Weight] {
        &self.values
    }

    /// Pointwise maximum with another schedule of the same length.
    pub fn max_with(&mut self, other: &Schedule) {
        debug_assert_eq!(self.len(), other.len());
        for (a, b) in self.values.iter_mut().zip(other.values.iter()) {
            *a = (*a).max(*b);
        }
    }

    /// Pointwise `self >= other`.
    pub fn dominates(&self, other: &Schedule) -> bool {
        self.values
            .iter()
            .zip(other.values.iter())
            .all(|(a, b)| a >= b)
    }
}

/// Checks a schedule against every constraint of an RDTN.
///
/// This is a plain pointwise satisfaction check; it does not care whether the
/// schedule is non-negative.
pub fn satisfies(sched: &Schedule, net: &Rdtn) -> bool {
    if sched.len() != net.n {
        return false;
    }
    for c in &net.c1 {
        // Differences of i64 fit in i128, so no overflow here.
        let diff = sched.value(c.y.0) as i128 - sched.value(c.x.0) as i128;
        if diff > c.w as i128 {
            return false;
        }
    }
    for c in &net.c2 {
        if !c.satisfied_by(sched.value(c.x.0)) {
            return false;
        }
    }
    for c in &net.c3 {
        if !c.satisfied_by(sched.value(c.first.0 .0), sched.value(c.second.0 .0)) {
            return false;
        }
    }
    true
}

/// Either of the two network classes, for operations that accept both.
#[derive(Clone, PartialEq, Debug)]
pub enum Network {
    Rdtn(Rdtn),
    Hytn(Hytn),
}

impl Network {
    pub fn time_point_count(&self) -> usize {
        match self {
            Network::Rdtn(n) => n.time_point_count(),
            Network::Hytn(h) => h.time_point_count(),
        }
    }
}

/// Outcome of a consistency check.
#[derive(Clone, PartialEq, Debug)]
pub enum Verdict {
    Consistent(Schedule),
    Inconsistent(Certificate),
}

impl Verdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Verdict::Consistent(_))
    }

    pub fn schedule(&self) -> Option<&Schedule> {
        match self {
            Verdict::Consistent(s) => Some(s),
            Verdict::Inconsistent(_) => None,
        }
    }
}

/// Inconsistency evidence. Which variant shows up depends on the solver and
/// the constraint class that failed.
#[derive(Clone, PartialEq, Debug)]
pub enum Certificate {
    /// A closed arc sequence of strictly negative total weight in the
    /// t1-constraint graph.
    NegativeCycle(Vec<StnArc>),
    /// A least feasible schedule that overshoots the greatest upper bound of
    /// the given t2-constraint (index into the network's t2 list).
    T2Witness { schedule: Schedule, constraint: usize },
    /// An unsatisfiable core of the 2-SAT reduction over t3 meta-variables.
    UnsatCore(UnsatCore),
    /// A negative hypercycle of a multi-head hyper temporal network.
    NegativeHypercycle(crate::certify::NegativeHypercycle),
    /// The full co-NP inconsistency sequence for a t2-blended hyper network.
    T2HytpSequence(crate::certify::T2HytpSequence),
}

/// Errors raised by solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("arithmetic overflow during solving")]
    Overflow,
    #[error("negative arc weight where non-negative weights are required")]
    NegativeArcWeight,
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: Weight, hi: Weight) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn canonicalize_sorts_figure_one_intervals() {
        let raw = [iv(5, 7), iv(0, 1), iv(2, 3), iv(8, 9)];
        let canon = canonicalize_t2(&raw).unwrap();
        assert_eq!(canon, vec![iv(0, 1), iv(2, 3), iv(5, 7), iv(8, 9)]);
    }

    #[test]
    fn canonicalize_identity_on_single_interval() {
        assert_eq!(canonicalize_t2(&[iv(0, 5)]).unwrap(), vec![iv(0, 5)]);
    }

    #[test]
    fn canonicalize_merges_overlap() {
        // Point-set equality with [(0,6)] checked by scan below.
        let canon = canonicalize_t2(&[iv(0, 3), iv(2, 6)]).unwrap();
        assert_eq!(canon, vec![iv(0, 6)]);
        for p in -10..=10 {
            let in_raw = iv(0, 3).contains(p) || iv(2, 6).contains(p);
            let in_canon = canon.iter().any(|i| i.contains(p));
            assert_eq!(in_raw, in_canon, "point {p}");
        }
    }

    #[test]
    fn canonicalize_rejects_empty() {
        assert_eq!(canonicalize_t2(&[]), Err(ModelError::EmptyIntervalList));
    }

    #[test]
    fn t1_self_loop_rules() {
        assert!(T1Constraint::new(TimePointId(0), TimePointId(0), 0).is_ok());
        assert_eq!(
            T1Constraint::new(TimePointId(0), TimePointId(0), -1),
            Err(ModelError::NegativeSelfLoop { tp: 0, w: -1 })
        );
    }

    #[test]
    fn satisfies_examples() {
        // Zero schedule against a non-negative difference bound.
        let net = Rdtn::new(
            2,
            vec![T1Constraint::new(TimePointId(0), TimePointId(1), 3).unwrap()],
            vec![],
            vec![],
        )
        .unwrap();
        assert!(satisfies(&Schedule::zero(2), &net));

        // Value 4 falls in the gap of the four-interval constraint.
        let net = Rdtn::new(
            1,
            vec![],
            vec![T2Constraint::new(
                TimePointId(0),
                &[iv(0, 1), iv(2, 3), iv(5, 7), iv(8, 9)],
            )
            .unwrap()],
            vec![],
        )
        .unwrap();
        assert!(!satisfies(&Schedule::from_values(vec![4]), &net));
        assert!(satisfies(&Schedule::from_values(vec![5]), &net));

        // Second t3 disjunct holds.
        let net = Rdtn::new(
            2,
            vec![],
            vec![],
            vec![T3Constraint::new(
                (TimePointId(0), iv(2, 3)),
                (TimePointId(1), iv(1, 2)),
            )
            .unwrap()],
        )
        .unwrap();
        assert!(satisfies(&Schedule::from_values(vec![5, 2]), &net));
        assert!(!satisfies(&Schedule::from_values(vec![5, 0]), &net));
    }

    #[test]
    fn t2_intersection_marks_empty_domains() {
        let a = T2Constraint::new(TimePointId(0), &[iv(0, 1)]).unwrap();
        let b = T2Constraint::new(TimePointId(0), &[iv(3, 4)]).unwrap();
        let net = Rdtn::new(1, vec![], vec![a, b], vec![]).unwrap();
        assert_eq!(net.empty_t2_vars(), &[0]);
        assert_eq!(net.c2().len(), 2);

        let a = T2Constraint::new(TimePointId(0), &[iv(0, 5)]).unwrap();
        let b = T2Constraint::new(TimePointId(0), &[iv(3, 8)]).unwrap();
        let net = Rdtn::new(1, vec![], vec![a, b], vec![]).unwrap();
        assert!(net.empty_t2_vars().is_empty());
        assert_eq!(net.c2()[0].intervals(), &[iv(3, 5)]);
    }

    #[test]
    fn t2_queries() {
        let c = T2Constraint::new(TimePointId(0), &[iv(0, 1), iv(5, 7)]).unwrap();
        assert!(c.satisfied_by(0) && c.satisfied_by(1) && c.satisfied_by(6));
        assert!(!c.satisfied_by(2) && !c.satisfied_by(8));
        assert_eq!(c.first_lower_above(1), Some(5));
        assert_eq!(c.first_lower_above(-3), Some(0));
        assert_eq!(c.first_lower_above(5), None);
        assert_eq!(c.max_upper(), 7);
    }
}
