//! Hyper Temporal Network engine.
//!
//! A multi-head hyperarc `(t_A, H_A, w_A)` is satisfied by a schedule `s`
//! when `s(t_A) >= min_{v in H_A} (s(v) - w_A(v))`; a multi-tail hyperarc
//! `(T_A, h_A, w_A)` when `s(h_A) <= max_{v in T_A} (s(v) + w_A(v))`.
//! Consistency checking for multi-head networks runs a value iteration that
//! raises the tail of a violated hyperarc to the least value satisfying it,
//! from a warm schedule upward. A node climbing past the per-node bound
//! `max(warm) + sum of |weights|` proves divergence; the certificate is a
//! negative hypercycle extracted from a capped fixpoint on scaled weights.
//!
//! Multi-tail networks are never solved by a second engine: they reduce to
//! multi-head form by reversing every hyperarc and inverting the time axis.

use crate::certify::{ClfsCertificate, NegativeHypercycle, T2HytpSequence, T2HytpStep};
use crate::model::{
    merge_t2_rows, Certificate, ModelError, Schedule, SolveError, T2Constraint, T3Constraint,
    Verdict, Weight,
};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Orientation {
    MultiHead,
    MultiTail,
}

/// A hyperarc with a distinguished pivot node (the single tail of a
/// multi-head arc, or the single head of a multi-tail arc) and a non-empty
/// weighted node set. Nodes are kept sorted so equal arcs compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Hyperarc {
    pub orientation: Orientation,
    pub pivot: usize,
    others: Vec<(usize, Weight)>,
}

impl Hyperarc {
    pub fn new(
        orientation: Orientation,
        pivot: usize,
        mut others: Vec<(usize, Weight)>,
    ) -> Result<Hyperarc, ModelError> {
        if others.is_empty() {
            return Err(ModelError::EmptyHyperarc);
        }
        others.sort();
        for pair in others.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(ModelError::DuplicateHyperarcNode { node: pair[0].0 });
            }
        }
        for &(node, w) in &others {
            if node == pivot {
                return Err(ModelError::PivotInOthers { pivot });
            }
            if w == Weight::MIN {
                return Err(ModelError::WeightOutOfRange(w));
            }
        }
        Ok(Hyperarc {
            orientation,
            pivot,
            others,
        })
    }

    pub fn multi_head(tail: usize, heads: Vec<(usize, Weight)>) -> Result<Hyperarc, ModelError> {
        Hyperarc::new(Orientation::MultiHead, tail, heads)
    }

    pub fn multi_tail(tails: Vec<(usize, Weight)>, head: usize) -> Result<Hyperarc, ModelError> {
        Hyperarc::new(Orientation::MultiTail, head, tails)
    }

    /// The weighted heads of a multi-head arc, or tails of a multi-tail arc.
    pub fn others(&self) -> &[(usize, Weight)] {
        &self.others
    }

    /// Number of nodes touched: `|others| + 1`.
    pub fn cardinality(&self) -> usize {
        self.others.len() + 1
    }

    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.pivot).chain(self.others.iter().map(|&(v, _)| v))
    }

    /// Same arc with the opposite orientation.
    fn reversed(&self) -> Hyperarc {
        Hyperarc {
            orientation: match self.orientation {
                Orientation::MultiHead => Orientation::MultiTail,
                Orientation::MultiTail => Orientation::MultiHead,
            },
            pivot: self.pivot,
            others: self.others.clone(),
        }
    }
}

/// Whether a schedule satisfies one hyperarc.
pub fn hyperarc_satisfied(a: &Hyperarc, s: &Schedule) -> bool {
    let pivot = s.value(a.pivot) as i128;
    match a.orientation {
        Orientation::MultiHead => {
            let min = a
                .others
                .iter()
                .map(|&(v, w)| s.value(v) as i128 - w as i128)
                .min()
                .expect("non-empty");
            pivot >= min
        }
        Orientation::MultiTail => {
            let max = a
                .others
                .iter()
                .map(|&(v, w)| s.value(v) as i128 + w as i128)
                .max()
                .expect("non-empty");
            pivot <= max
        }
    }
}

/// A hyper temporal network: hyperarcs of one orientation, optionally
/// blended with t2-constraints or t3-constraints (never both).
#[derive(Clone, PartialEq, Debug)]
pub struct Hytn {
    n: usize,
    arcs: Vec<Hyperarc>,
    c2: Vec<T2Constraint>,
    c3: Vec<T3Constraint>,
    empty_t2_vars: Vec<usize>,
}

impl Hytn {
    pub fn new(
        n: usize,
        arcs: Vec<Hyperarc>,
        c2: Vec<T2Constraint>,
        c3: Vec<T3Constraint>,
    ) -> Result<Hytn, ModelError> {
        if let Some(first) = arcs.first() {
            if arcs.iter().any(|a| a.orientation != first.orientation) {
                return Err(ModelError::MixedOrientation);
            }
        }
        if !c2.is_empty() && !c3.is_empty() {
            return Err(ModelError::BlendConflict);
        }
        for a in &arcs {
            for v in a.nodes() {
                if v >= n {
                    return Err(ModelError::TimePointOutOfRange { tp: v, n });
                }
            }
        }
        for c in &c3 {
            for tp in [c.first.0, c.second.0] {
                if tp.0 >= n {
                    return Err(ModelError::TimePointOutOfRange { tp: tp.0, n });
                }
            }
        }
        let (c2, empty_t2_vars) = merge_t2_rows(n, c2)?;
        Ok(Hytn {
            n,
            arcs,
            c2,
            c3,
            empty_t2_vars,
        })
    }

    pub fn time_point_count(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[Hyperarc] {
        &self.arcs
    }

    pub fn c2(&self) -> &[T2Constraint] {
        &self.c2
    }

    pub fn c3(&self) -> &[T3Constraint] {
        &self.c3
    }

    pub fn empty_t2_vars(&self) -> &[usize] {
        &self.empty_t2_vars
    }

    /// The orientation of the hyperarcs; multi-head for arc-free networks.
    pub fn orientation(&self) -> Orientation {
        self.arcs
            .first()
            .map_or(Orientation::MultiHead, |a| a.orientation)
    }

    /// Network size `m = Σ |A|`.
    pub fn size(&self) -> usize {
        self.arcs.iter().map(|a| a.cardinality()).sum()
    }

    /// Plain pointwise satisfaction of hyperarcs and blended constraints.
    pub fn satisfied_by(&self, s: &Schedule) -> bool {
        if s.len() != self.n {
            return false;
        }
        self.arcs.iter().all(|a| hyperarc_satisfied(a, s))
            && self.c2.iter().all(|c| c.satisfied_by(s.value(c.x.0)))
            && self
                .c3
                .iter()
                .all(|c| c.satisfied_by(s.value(c.first.0 .0), s.value(c.second.0 .0)))
    }
}

/// Reverses every hyperarc and inverts the time axis: intervals `[l, u]`
/// become `[-u, -l]`. A schedule `s` is feasible for the input exactly when
/// `-s` is feasible for the output, and the reduction is an involution.
pub fn reduce_orientation(net: &Hytn) -> Hytn {
    let arcs = net.arcs.iter().map(Hyperarc::reversed).collect();
    let c2 = net
        .c2
        .iter()
        .map(|c| {
            let flipped: Vec<_> = c
                .intervals()
                .iter()
                .map(|iv| crate::model::Interval::new(-iv.hi, -iv.lo).expect("valid"))
                .collect();
            T2Constraint::new(c.x, &flipped).expect("non-empty")
        })
        .collect();
    let c3 = net
        .c3
        .iter()
        .map(|c| {
            let flip = |(tp, iv): (crate::model::TimePointId, crate::model::Interval)| {
                (
                    tp,
                    crate::model::Interval::new(-iv.hi, -iv.lo).expect("valid"),
                )
            };
            T3Constraint::new(flip(c.first), flip(c.second)).expect("distinct")
        })
        .collect();
    Hytn {
        n: net.n,
        arcs,
        c2,
        c3,
        empty_t2_vars: net.empty_t2_vars.clone(),
    }
}

/// Counters from hyper-network solving.
#[derive(Clone, Copy, Default, PartialEq, Eq, Debug)]
pub struct HytnStats {
    /// Node-value raises performed by the value iteration.
    pub relaxations: u64,
    /// Direct lower-bound lifts applied by the t2 loop.
    pub lifts: u64,
}

/// Builds the auxiliary multi-head network over `n + 1` nodes: the zero
/// node `z` is index `n`, every node gets `z - T <= 0`, each `(x, l)` adds
/// the lower bound `z - x <= -l`, and `cap = (x, u)` adds `x - z <= u`.
pub fn materialize_aux(
    base_arcs: &[Hyperarc],
    n: usize,
    lower_bounds: &[(usize, Weight)],
    cap: Option<(usize, Weight)>,
) -> Hytn {
    let z = n;
    let mut arcs = base_arcs.to_vec();
    for t in 0..n {
        arcs.push(Hyperarc::multi_head(t, vec![(z, 0)]).expect("valid"));
    }
    for &(x, l) in lower_bounds {
        arcs.push(Hyperarc::multi_head(x, vec![(z, -l)]).expect("valid"));
    }
    if let Some((x, u)) = cap {
        arcs.push(Hyperarc::multi_head(z, vec![(x, u)]).expect("valid"));
    }
    Hytn {
        n: n + 1,
        arcs,
        c2: Vec::new(),
        c3: Vec::new(),
        empty_t2_vars: Vec::new(),
    }
}

enum ViResult {
    Converged,
    Diverged,
}

struct HeadVi<'a> {
    arcs: &'a [Hyperarc],
    /// node -> indices of arcs having that node among their heads
    by_head: Vec<Vec<usize>>,
    values: Vec<Weight>,
    relaxations: u64,
}

impl<'a> HeadVi<'a> {
    fn new(n: usize, arcs: &'a [Hyperarc], values: Vec<Weight>) -> HeadVi<'a> {
        let mut by_head = vec![Vec::new(); n];
        for (i, a) in arcs.iter().enumerate() {
            for &(v, _) in a.others() {
                by_head[v].push(i);
            }
        }
        HeadVi {
            arcs,
            by_head,
            values,
            relaxations: 0,
        }
    }

    /// Least value forcing the pivot of `arc`, as an i128 (no overflow).
    fn forced_value(&self, arc: &Hyperarc) -> i128 {
        arc.others()
            .iter()
            .map(|&(v, w)| self.values[v] as i128 - w as i128)
            .min()
            .expect("non-empty")
    }

    /// Runs to the least fixpoint above the start values, declaring
    /// divergence when any value would exceed `bound`.
    fn run(&mut self, bound: i128) -> Result<ViResult, SolveError> {
        use std::collections::VecDeque;
        let mut queued = vec![true; self.arcs.len()];
        let mut queue: VecDeque<usize> = (0..self.arcs.len()).collect();
        while let Some(ai) = queue.pop_front() {
            queued[ai] = false;
            let arc = &self.arcs[ai];
            let need = self.forced_value(arc);
            if (self.values[arc.pivot] as i128) < need {
                if need > bound {
                    return Ok(ViResult::Diverged);
                }
                let v = Weight::try_from(need).map_err(|_| SolveError::Overflow)?;
                self.values[arc.pivot] = v;
                self.relaxations += 1;
                for &aj in &self.by_head[arc.pivot] {
                    if !queued[aj] {
                        queued[aj] = true;
                        queue.push_back(aj);
                    }
                }
            }
        }
        Ok(ViResult::Converged)
    }
}

fn abs_weight_sum(arcs: &[Hyperarc]) -> i128 {
    arcs.iter()
        .flat_map(|a| a.others().iter())
        .map(|&(_, w)| (w as i128).abs())
        .sum()
}

fn divergence_bound(values: &[Weight], arcs: &[Hyperarc]) -> i128 {
    let warm_max = values.iter().copied().max().unwrap_or(0).max(0) as i128;
    warm_max + abs_weight_sum(arcs)
}

/// Extracts a negative hypercycle from an inconsistent multi-head arc set.
///
/// Runs a capped fixpoint on weights scaled by `w' = (q+1)w + 1` (q = number
/// of distinct tails). The scaling opens a strictness gap: any cycle of
/// scaled weight <= 0 has strictly negative original weight. At the capped
/// fixpoint every divergent node sits within `q * W'` of the cap, so the set
/// above that threshold is exactly the divergent core, and each member's
/// fixpoint-defining arc keeps all heads inside the core.
fn extract_hypercycle(n: usize, arcs: &[Hyperarc]) -> NegativeHypercycle {
    use std::collections::BTreeSet;

    let tails: BTreeSet<usize> = arcs.iter().map(|a| a.pivot).collect();
    let q = tails.len() as i128;
    let scale = q + 1;
    let wprime = |w: Weight| scale * w as i128 + 1;
    let w_max: i128 = arcs
        .iter()
        .flat_map(|a| a.others().iter())
        .map(|&(_, w)| wprime(w).abs())
        .max()
        .expect("arcs present");
    let t_sum: i128 = arcs
        .iter()
        .flat_map(|a| a.others().iter())
        .map(|&(_, w)| wprime(w).abs())
        .sum();
    let cap = t_sum + q * w_max + w_max + 2;
    let theta = cap - q * w_max;

    // Capped fixpoint from zero on the scaled weights.
    let mut values = vec![0i128; n];
    let mut by_head = vec![Vec::new(); n];
    for (i, a) in arcs.iter().enumerate() {
        for &(v, _) in a.others() {
            by_head[v].push(i);
        }
    }
    use std::collections::VecDeque;
    let mut queued = vec![true; arcs.len()];
    let mut queue: VecDeque<usize> = (0..arcs.len()).collect();
    let forced = |values: &[i128], arc: &Hyperarc| -> i128 {
        arc.others()
            .iter()
            .map(|&(v, w)| values[v] - wprime(w))
            .min()
            .expect("non-empty")
    };
    while let Some(ai) = queue.pop_front() {
        queued[ai] = false;
        let arc = &arcs[ai];
        let need = forced(&values, arc).min(cap);
        if values[arc.pivot] < need {
            values[arc.pivot] = need;
            for &aj in &by_head[arc.pivot] {
                if !queued[aj] {
                    queued[aj] = true;
                    queue.push_back(aj);
                }
            }
        }
    }

    let core: Vec<usize> = (0..n).filter(|&v| values[v] >= theta).collect();
    debug_assert!(!core.is_empty(), "extraction requires divergence");
    let mut chosen = Vec::with_capacity(core.len());
    for &v in &core {
        let arc = arcs
            .iter()
            .find(|a| {
                a.pivot == v
                    && if values[v] >= cap {
                        forced(&values, a) >= cap
                    } else {
                        forced(&values, a) == values[v]
                    }
            })
            .expect("divergent node has a defining arc");
        chosen.push(arc.clone());
    }
    NegativeHypercycle {
        nodes: core,
        arcs: chosen,
    }
}

fn require_multi_head(net: &Hytn) -> Result<(), SolveError> {
    if net.arcs.iter().any(|a| a.orientation != Orientation::MultiHead) {
        return Err(SolveError::Precondition("network must be multi-head"));
    }
    Ok(())
}

/// Consistency of a pure multi-head network: the least feasible schedule
/// pointwise above `warm` (above zero when `warm` is `None`), or a negative
/// hypercycle.
pub fn solve_head_hytp_traced(
    net: &Hytn,
    warm: Option<&Schedule>,
) -> Result<(Verdict, HytnStats), SolveError> {
    require_multi_head(net)?;
    if !net.c2.is_empty() || !net.c3.is_empty() {
        return Err(SolveError::Precondition(
            "head-HyTP takes a pure hyperarc network",
        ));
    }
    let values = match warm {
        Some(s) => {
            if s.len() != net.n {
                return Err(SolveError::Precondition("warm schedule length != node count"));
            }
            s.values().to_vec()
        }
        None => vec![0; net.n],
    };
    let bound = divergence_bound(&values, &net.arcs);
    let mut vi = HeadVi::new(net.n, &net.arcs, values);
    let result = vi.run(bound)?;
    let stats = HytnStats {
        relaxations: vi.relaxations,
        lifts: 0,
    };
    let verdict = match result {
        ViResult::Converged => Verdict::Consistent(Schedule::from_values(vi.values)),
        ViResult::Diverged => Verdict::Inconsistent(Certificate::NegativeHypercycle(
            extract_hypercycle(net.n, &net.arcs),
        )),
    };
    Ok((verdict, stats))
}

pub fn solve_head_hytp(net: &Hytn, warm: Option<&Schedule>) -> Result<Verdict, SolveError> {
    solve_head_hytp_traced(net, warm).map(|(v, _)| v)
}

/// Consistency of a multi-head network blended with t2-constraints.
///
/// Solves the pure hyperarc part first, then alternates direct lower-bound
/// lifts with value-iteration runs until every t2-constraint holds or some
/// candidate value overshoots its constraint's greatest upper bound.
pub fn solve_t2hytp_traced(net: &Hytn) -> Result<(Verdict, HytnStats), SolveError> {
    require_multi_head(net)?;
    if !net.c3.is_empty() {
        return Err(SolveError::Precondition("t2-blend must not carry t3-constraints"));
    }
    let mut stats = HytnStats::default();
    let mut vi = HeadVi::new(net.n, &net.arcs, vec![0; net.n]);
    let bound = divergence_bound(&vi.values, &net.arcs);
    if let ViResult::Diverged = vi.run(bound)? {
        stats.relaxations = vi.relaxations;
        return Ok((
            Verdict::Inconsistent(Certificate::NegativeHypercycle(extract_hypercycle(
                net.n, &net.arcs,
            ))),
            stats,
        ));
    }
    let total_disjuncts: u64 = net.c2.iter().map(|c| c.intervals().len() as u64).sum();
    loop {
        let violated = net
            .c2
            .iter()
            .enumerate()
            .find(|(_, c)| !c.satisfied_by(vi.values[c.x.0]));
        let Some((idx, c)) = violated else {
            stats.relaxations = vi.relaxations;
            return Ok((Verdict::Consistent(Schedule::from_values(vi.values)), stats));
        };
        let v = vi.values[c.x.0];
        let Some(l_star) = c.first_lower_above(v) else {
            stats.relaxations = vi.relaxations;
            return Ok((
                Verdict::Inconsistent(Certificate::T2Witness {
                    schedule: Schedule::from_values(vi.values.clone()),
                    constraint: idx,
                }),
                stats,
            ));
        };
        vi.values[c.x.0] = l_star;
        stats.lifts += 1;
        debug_assert!(stats.lifts <= total_disjuncts);
        let bound = divergence_bound(&vi.values, &net.arcs);
        if let ViResult::Diverged = vi.run(bound)? {
            // Unreachable for a consistent arc core: lower bounds never make
            // a translation-invariant system diverge. Kept for safety.
            stats.relaxations = vi.relaxations;
            return Ok((
                Verdict::Inconsistent(Certificate::NegativeHypercycle(extract_hypercycle(
                    net.n, &net.arcs,
                ))),
                stats,
            ));
        }
    }
}

pub fn solve_t2hytp(net: &Hytn) -> Result<Verdict, SolveError> {
    solve_t2hytp_traced(net).map(|(v, _)| v)
}

/// Least feasible schedule of a materialized auxiliary network, restricted
/// to the first `n` user nodes, or `None` on divergence.
fn solve_aux(aux: &Hytn) -> Result<Option<Vec<Weight>>, SolveError> {
    let values = vec![0; aux.n];
    let bound = divergence_bound(&values, &aux.arcs);
    let mut vi = HeadVi::new(aux.n, &aux.arcs, values);
    match vi.run(bound)? {
        ViResult::Converged => Ok(Some(vi.values)),
        ViResult::Diverged => Ok(None),
    }
}

/// Per-node minimality certificates for the least schedule `phi` of the
/// bounded auxiliary network `base_arcs + lower_bounds`.
fn clfs_of_aux(
    base_arcs: &[Hyperarc],
    n: usize,
    lower_bounds: &[(usize, Weight)],
    phi: &Schedule,
) -> Result<ClfsCertificate, SolveError> {
    let mut hypercycles = Vec::with_capacity(n);
    for x in 0..n {
        let aux = materialize_aux(base_arcs, n, lower_bounds, Some((x, phi.value(x) - 1)));
        match solve_aux(&aux)? {
            None => hypercycles.push(extract_hypercycle(aux.n, &aux.arcs)),
            Some(_) => {
                return Err(SolveError::Precondition(
                    "schedule is not least: lowering a value stays feasible",
                ))
            }
        }
    }
    Ok(ClfsCertificate {
        schedule: phi.clone(),
        hypercycles,
    })
}

/// A certified least feasible schedule for a consistent multi-head network:
/// the least schedule plus, per node, a negative hypercycle of the auxiliary
/// network that forces the node one unit earlier. `None` when inconsistent.
pub fn clfs_certificate(net: &Hytn) -> Result<Option<ClfsCertificate>, SolveError> {
    let (verdict, _) = solve_head_hytp_traced(net, None)?;
    match verdict {
        Verdict::Inconsistent(_) => Ok(None),
        Verdict::Consistent(phi) => Ok(Some(clfs_of_aux(&net.arcs, net.n, &[], &phi)?)),
    }
}

/// The full co-NP inconsistency certificate for a t2-blended multi-head
/// network: either a negative hypercycle of the pure arc core, or the
/// sequence of certified least schedules and violated constraints that ends
/// with a value above its constraint's greatest upper bound. `None` when
/// the network is consistent.
pub fn t2hytp_inconsistency_certificate(net: &Hytn) -> Result<Option<Certificate>, SolveError> {
    require_multi_head(net)?;
    if !net.c3.is_empty() {
        return Err(SolveError::Precondition("t2-blend must not carry t3-constraints"));
    }
    let mut values = match solve_aux(&materialize_aux(&net.arcs, net.n, &[], None))? {
        Some(v) => {
            let mut v = v;
            v.truncate(net.n);
            v
        }
        None => {
            return Ok(Some(Certificate::NegativeHypercycle(extract_hypercycle(
                net.n, &net.arcs,
            ))))
        }
    };
    let mut bounds: Vec<(usize, Weight)> = Vec::new();
    let mut steps: Vec<T2HytpStep> = Vec::new();
    let total_disjuncts: usize = net.c2.iter().map(|c| c.intervals().len()).sum();
    loop {
        let violated = net
            .c2
            .iter()
            .enumerate()
            .find(|(_, c)| !c.satisfied_by(values[c.x.0]));
        let Some((idx, c)) = violated else {
            return Ok(None);
        };
        let phi = Schedule::from_values(values.clone());
        let clfs = clfs_of_aux(&net.arcs, net.n, &bounds, &phi)?;
        steps.push(T2HytpStep {
            clfs,
            witness: idx,
        });
        let v = values[c.x.0];
        let Some(l_star) = c.first_lower_above(v) else {
            // Final witness: value above the greatest upper bound. Every
            // earlier entry consumed a disjunct, so entries stay within
            // the total disjunct count plus the final one.
            debug_assert!(steps.len() <= total_disjuncts + 1);
            return Ok(Some(Certificate::T2HytpSequence(T2HytpSequence {
                steps,
            })));
        };
        bounds.push((c.x.0, l_star));
        values[c.x.0] = l_star;
        let mut vi = HeadVi::new(net.n, &net.arcs, values);
        let bound = divergence_bound(&vi.values, &net.arcs);
        match vi.run(bound)? {
            ViResult::Converged => values = vi.values,
            ViResult::Diverged => {
                return Ok(Some(Certificate::NegativeHypercycle(extract_hypercycle(
                    net.n, &net.arcs,
                ))))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Interval;
    use crate::model::TimePointId;

    fn iv(lo: Weight, hi: Weight) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn head_net(n: usize, arcs: Vec<Hyperarc>) -> Hytn {
        Hytn::new(n, arcs, vec![], vec![]).unwrap()
    }

    #[test]
    fn hyperarc_satisfaction_examples() {
        let a = Hyperarc::multi_head(0, vec![(1, 1), (2, 2)]).unwrap();
        assert!(hyperarc_satisfied(&a, &Schedule::zero(3)));

        let a = Hyperarc::multi_head(0, vec![(1, 0)]).unwrap();
        assert!(!hyperarc_satisfied(&a, &Schedule::from_values(vec![0, 5])));

        // The multi-tail mirror under the negated schedule keeps the same
        // satisfaction value on both sides of the reduction.
        let b = a.reversed();
        assert!(!hyperarc_satisfied(&b, &Schedule::from_values(vec![0, -5])));
        assert!(hyperarc_satisfied(&a, &Schedule::from_values(vec![5, 0])));
        assert!(hyperarc_satisfied(&b, &Schedule::from_values(vec![-5, 0])));
    }

    #[test]
    fn single_hyperarc_keeps_zero_schedule() {
        let net = head_net(3, vec![Hyperarc::multi_head(0, vec![(1, 1), (2, 2)]).unwrap()]);
        let v = solve_head_hytp(&net, None).unwrap();
        assert_eq!(v.schedule().unwrap().values(), &[0, 0, 0]);
    }

    #[test]
    fn standard_arc_cycle_is_inconsistent() {
        // 2-cycle (a, b, -1), (b, a, 0) as standard multi-head arcs.
        let net = head_net(
            2,
            vec![
                Hyperarc::multi_head(0, vec![(1, -1)]).unwrap(),
                Hyperarc::multi_head(1, vec![(0, 0)]).unwrap(),
            ],
        );
        match solve_head_hytp(&net, None).unwrap() {
            Verdict::Inconsistent(Certificate::NegativeHypercycle(c)) => {
                assert!(crate::certify::verify_negative_hypercycle(&net, &c));
            }
            other => panic!("expected negative hypercycle, got {other:?}"),
        }
    }

    #[test]
    fn reduction_examples() {
        let net = Hytn::new(
            3,
            vec![Hyperarc::multi_tail(vec![(0, 5), (1, 7)], 2).unwrap()],
            vec![],
            vec![],
        )
        .unwrap();
        let red = reduce_orientation(&net);
        assert_eq!(red.orientation(), Orientation::MultiHead);
        assert_eq!(red.arcs()[0].pivot, 2);
        assert_eq!(red.arcs()[0].others(), &[(0, 5), (1, 7)]);
        assert_eq!(reduce_orientation(&red), net);

        let net = Hytn::new(
            1,
            vec![],
            vec![T2Constraint::new(TimePointId(0), &[iv(0, 1), iv(2, 3)]).unwrap()],
            vec![],
        )
        .unwrap();
        let red = reduce_orientation(&net);
        assert_eq!(red.c2()[0].intervals(), &[iv(-3, -2), iv(-1, 0)]);
        assert_eq!(reduce_orientation(&red), net);
    }

    #[test]
    fn t2_blend_examples() {
        // Figure-style four-interval constraint, no arcs: least value is 0.
        let fig = T2Constraint::new(
            TimePointId(0),
            &[iv(0, 1), iv(2, 3), iv(5, 7), iv(8, 9)],
        )
        .unwrap();
        let net = Hytn::new(1, vec![], vec![fig.clone()], vec![]).unwrap();
        let v = solve_t2hytp(&net).unwrap();
        assert_eq!(v.schedule().unwrap().values(), &[0]);

        // Arc structure forcing X >= 4 pushes the least value to 5.
        let net = Hytn::new(
            2,
            vec![Hyperarc::multi_head(0, vec![(1, -4)]).unwrap()],
            vec![T2Constraint::new(TimePointId(0), fig.intervals()).unwrap()],
            vec![],
        )
        .unwrap();
        let v = solve_t2hytp(&net).unwrap();
        assert_eq!(v.schedule().unwrap().values(), &[5, 0]);

        // Forcing X >= 2 against a [0, 1] domain is inconsistent.
        let net = Hytn::new(
            2,
            vec![Hyperarc::multi_head(0, vec![(1, -2)]).unwrap()],
            vec![T2Constraint::new(TimePointId(0), &[iv(0, 1)]).unwrap()],
            vec![],
        )
        .unwrap();
        match solve_t2hytp(&net).unwrap() {
            Verdict::Inconsistent(Certificate::T2Witness { schedule, constraint }) => {
                assert_eq!(constraint, 0);
                assert_eq!(schedule.value(0), 2);
            }
            other => panic!("expected t2 witness, got {other:?}"),
        }
        let cert = t2hytp_inconsistency_certificate(&net).unwrap().unwrap();
        match cert {
            Certificate::T2HytpSequence(seq) => {
                assert!(crate::certify::verify_t2hytp_inconsistency(&net, &seq));
            }
            other => panic!("expected sequence, got {other:?}"),
        }
    }

    #[test]
    fn clfs_of_consistent_net_verifies() {
        let net = head_net(
            3,
            vec![
                Hyperarc::multi_head(0, vec![(1, -2), (2, -3)]).unwrap(),
                Hyperarc::multi_head(1, vec![(2, -1)]).unwrap(),
            ],
        );
        let cert = clfs_certificate(&net).unwrap().unwrap();
        assert!(crate::certify::verify_clfs(&net, &cert));
    }
}
