//! Simple Temporal Network engine.
//!
//! An STN is a set of difference constraints `Y - X <= w`, viewed as a
//! directed graph with one arc `(X, Y, w)` per constraint. The solver is a
//! queue-driven Bellman-Ford value iteration: values start at a warm schedule
//! (all zeros for a cold solve) and only ever move upward, raising the tail
//! of a violated arc to the least value that satisfies it. The fixpoint is
//! the least feasible schedule pointwise above the start; for a zero start
//! that is the least non-negative feasible schedule. Inconsistent networks
//! yield a negative cycle extracted from the predecessor graph.

use crate::model::{Schedule, SolveError, Verdict, Weight};

/// A directed arc `(tail, head, weight)` standing for `head - tail <= weight`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct StnArc {
    pub tail: usize,
    pub head: usize,
    pub weight: Weight,
}

impl StnArc {
    pub fn new(tail: usize, head: usize, weight: Weight) -> StnArc {
        StnArc { tail, head, weight }
    }
}

/// A weighted constraint graph over `n` nodes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StnGraph {
    pub n: usize,
    pub arcs: Vec<StnArc>,
}

impl StnGraph {
    pub fn new(n: usize, arcs: Vec<StnArc>) -> StnGraph {
        debug_assert!(arcs.iter().all(|a| a.tail < n && a.head < n));
        StnGraph { n, arcs }
    }

    fn arcs_by_head(&self) -> Vec<Vec<usize>> {
        let mut by_head = vec![Vec::new(); self.n];
        for (i, a) in self.arcs.iter().enumerate() {
            by_head[a.head].push(i);
        }
        by_head
    }
}

/// A path length that may be unreachable. `Infinite` compares greater than
/// every finite value and saturates under addition.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Dist {
    Finite(Weight),
    Infinite,
}

impl Dist {
    pub fn is_finite(&self) -> bool {
        matches!(self, Dist::Finite(_))
    }

    pub fn finite(&self) -> Option<Weight> {
        match self {
            Dist::Finite(d) => Some(*d),
            Dist::Infinite => None,
        }
    }

    pub fn checked_add(self, w: Weight) -> Result<Dist, SolveError> {
        match self {
            Dist::Infinite => Ok(Dist::Infinite),
            Dist::Finite(d) => d
                .checked_add(w)
                .map(Dist::Finite)
                .ok_or(SolveError::Overflow),
        }
    }
}

/// Shortest-path lengths from every node to one target.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DistanceRow {
    pub target: usize,
    pub dist: Vec<Dist>,
}

/// Counters from one value-iteration run.
#[derive(Clone, Copy, Default, PartialEq, Eq, Debug)]
pub struct StnStats {
    /// Successful value raises.
    pub relaxations: u64,
}

/// Predecessor data left behind by the value iteration, enough to extract a
/// negative cycle after over-relaxation.
#[derive(Clone, Debug)]
pub struct ViTrace {
    /// Arc index that last raised each node.
    pub pred: Vec<Option<usize>>,
    /// Number of raises per node.
    pub counts: Vec<u64>,
}

struct Vi<'g> {
    g: &'g StnGraph,
    by_head: Vec<Vec<usize>>,
    values: Vec<Weight>,
    pred: Vec<Option<usize>>,
    counts: Vec<u64>,
    next_probe: Vec<u64>,
    stamp: Vec<u64>,
    stamp_gen: u64,
    relaxations: u64,
}

enum ViOutcome {
    Converged,
    NegativeCycle(Vec<StnArc>),
}

impl<'g> Vi<'g> {
    fn new(g: &'g StnGraph, values: Vec<Weight>) -> Vi<'g> {
        let probe = (g.n as u64).max(2);
        Vi {
            g,
            by_head: g.arcs_by_head(),
            values,
            pred: vec![None; g.n],
            counts: vec![0; g.n],
            next_probe: vec![probe; g.n],
            stamp: vec![0; g.n],
            stamp_gen: 0,
            relaxations: 0,
        }
    }

    fn run(&mut self) -> Result<ViOutcome, SolveError> {
        let n = self.g.n;
        let m = self.g.arcs.len();
        // Consistent runs stay within n*m raises; anything past this margin
        // proves a negative cycle exists even before one is extracted.
        let budget = 2 * (n as u64 + 1) * (m as u64 + 1) + 16;
        let mut queued = vec![true; n];
        // Lower indices pushed first; LIFO extraction order.
        let mut stack: Vec<usize> = (0..n).collect();
        while let Some(y) = stack.pop() {
            queued[y] = false;
            for k in 0..self.by_head[y].len() {
                let ai = self.by_head[y][k];
                let arc = self.g.arcs[ai];
                let need = self.values[y]
                    .checked_sub(arc.weight)
                    .ok_or(SolveError::Overflow)?;
                if self.values[arc.tail] < need {
                    self.values[arc.tail] = need;
                    self.pred[arc.tail] = Some(ai);
                    self.counts[arc.tail] += 1;
                    self.relaxations += 1;
                    if self.counts[arc.tail] >= self.next_probe[arc.tail] {
                        if let Some(cycle) = self.probe(arc.tail) {
                            return Ok(ViOutcome::NegativeCycle(cycle));
                        }
                        self.next_probe[arc.tail] += (n as u64).max(2);
                    }
                    if self.relaxations > budget {
                        return self.fallback();
                    }
                    if !queued[arc.tail] {
                        queued[arc.tail] = true;
                        stack.push(arc.tail);
                    }
                }
            }
        }
        Ok(ViOutcome::Converged)
    }

    /// Walks the predecessor chain from `x` and returns a negative cycle if
    /// the chain currently closes one.
    fn probe(&mut self, x: usize) -> Option<Vec<StnArc>> {
        // Land inside the cycle (if any) by walking n steps first.
        let mut cur = x;
        for _ in 0..self.g.n {
            cur = self.g.arcs[self.pred[cur]?].head;
        }
        self.cycle_through(cur)
    }

    /// Detects a predecessor-graph cycle on the chain starting at `start`.
    fn cycle_through(&mut self, start: usize) -> Option<Vec<StnArc>> {
        self.stamp_gen += 1;
        let gen = self.stamp_gen;
        let mut cur = start;
        loop {
            if self.stamp[cur] == gen {
                break; // revisited: cur is on the cycle
            }
            self.stamp[cur] = gen;
            cur = self.g.arcs[self.pred[cur]?].head;
        }
        let mut cycle = Vec::new();
        let mut total: i128 = 0;
        let first = cur;
        loop {
            let arc = self.g.arcs[self.pred[cur].expect("on cycle")];
            cycle.push(arc);
            total += arc.weight as i128;
            cur = arc.head;
            if cur == first {
                break;
            }
        }
        // Cycles in the predecessor graph are negative by construction; a
        // non-negative candidate means the chain moved under us, so decline.
        (total < 0).then_some(cycle)
    }

    /// Round-based detection for when probing never caught the cycle in the
    /// act. Checks closure at every predecessor assignment, so the first
    /// cycle to materialize is returned; a quiet full round means the values
    /// converged after all.
    fn fallback(&mut self) -> Result<ViOutcome, SolveError> {
        self.pred = vec![None; self.g.n];
        loop {
            let mut changed = false;
            for ai in 0..self.g.arcs.len() {
                let arc = self.g.arcs[ai];
                let need = self.values[arc.head]
                    .checked_sub(arc.weight)
                    .ok_or(SolveError::Overflow)?;
                if self.values[arc.tail] < need {
                    self.values[arc.tail] = need;
                    self.pred[arc.tail] = Some(ai);
                    self.counts[arc.tail] += 1;
                    self.relaxations += 1;
                    changed = true;
                    if let Some(cycle) = self.cycle_through(arc.tail) {
                        return Ok(ViOutcome::NegativeCycle(cycle));
                    }
                }
            }
            if !changed {
                return Ok(ViOutcome::Converged);
            }
        }
    }

    fn trace(&self) -> ViTrace {
        ViTrace {
            pred: self.pred.clone(),
            counts: self.counts.clone(),
        }
    }
}

/// Computes the least feasible schedule pointwise above `start`, or a
/// negative cycle.
pub fn solve_stn_warm_traced(
    g: &StnGraph,
    start: &Schedule,
) -> Result<(Verdict, StnStats), SolveError> {
    if start.len() != g.n {
        return Err(SolveError::Precondition("warm schedule length != node count"));
    }
    let mut vi = Vi::new(g, start.values().to_vec());
    let outcome = vi.run()?;
    let stats = StnStats {
        relaxations: vi.relaxations,
    };
    let verdict = match outcome {
        ViOutcome::Converged => Verdict::Consistent(Schedule::from_values(vi.values)),
        ViOutcome::NegativeCycle(c) => {
            Verdict::Inconsistent(crate::model::Certificate::NegativeCycle(c))
        }
    };
    Ok((verdict, stats))
}

pub fn solve_stn_warm(g: &StnGraph, start: &Schedule) -> Result<Verdict, SolveError> {
    solve_stn_warm_traced(g, start).map(|(v, _)| v)
}

/// Least non-negative feasible schedule of the STN, or a negative cycle.
pub fn solve_stn_traced(g: &StnGraph) -> Result<(Verdict, StnStats), SolveError> {
    solve_stn_warm_traced(g, &Schedule::zero(g.n))
}

pub fn solve_stn(g: &StnGraph) -> Result<Verdict, SolveError> {
    solve_stn_traced(g).map(|(v, _)| v)
}

/// Runs the value iteration and exposes the predecessor trace alongside the
/// verdict, for callers that extract certificates themselves.
pub fn solve_stn_with_trace(
    g: &StnGraph,
    start: &Schedule,
) -> Result<(Verdict, StnStats, ViTrace), SolveError> {
    if start.len() != g.n {
        return Err(SolveError::Precondition("warm schedule length != node count"));
    }
    let mut vi = Vi::new(g, start.values().to_vec());
    let outcome = vi.run()?;
    let stats = StnStats {
        relaxations: vi.relaxations,
    };
    let trace = vi.trace();
    let verdict = match outcome {
        ViOutcome::Converged => Verdict::Consistent(Schedule::from_values(vi.values)),
        ViOutcome::NegativeCycle(c) => {
            Verdict::Inconsistent(crate::model::Certificate::NegativeCycle(c))
        }
    };
    Ok((verdict, stats, trace))
}

/// Extracts a negative cycle from a predecessor trace left by the value
/// iteration. Errors when no node was over-relaxed or the chain holds no
/// cycle.
pub fn extract_negative_cycle(g: &StnGraph, trace: &ViTrace) -> Result<Vec<StnArc>, SolveError> {
    let threshold = (g.n as u64).max(2);
    let mut vi = Vi::new(g, vec![0; g.n]);
    vi.pred = trace.pred.clone();
    let start = (0..g.n)
        .find(|&v| trace.counts[v] >= threshold)
        .ok_or(SolveError::Precondition("no node was relaxed n times"))?;
    vi.probe(start)
        .ok_or(SolveError::Precondition("predecessor chain closes no cycle"))
}

/// Replaces each arc weight by its reduced cost `w - phi(head) + phi(tail)`.
/// All outputs are non-negative when `phi` is feasible.
pub fn reduced_costs(g: &StnGraph, phi: &Schedule) -> Result<StnGraph, SolveError> {
    if phi.len() != g.n {
        return Err(SolveError::Precondition("schedule length != node count"));
    }
    let mut arcs = Vec::with_capacity(g.arcs.len());
    for a in &g.arcs {
        let w = a.weight as i128 - phi.value(a.head) as i128 + phi.value(a.tail) as i128;
        let w = Weight::try_from(w).map_err(|_| SolveError::Overflow)?;
        arcs.push(StnArc::new(a.tail, a.head, w));
    }
    Ok(StnGraph::new(g.n, arcs))
}

/// Single-target Dijkstra on a non-negative graph: `dist[T]` is the length of
/// the shortest path from `T` to `target`, `Infinite` when unreachable.
pub fn dijkstra_to_target(g: &StnGraph, target: usize) -> Result<DistanceRow, SolveError> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    if g.arcs.iter().any(|a| a.weight < 0) {
        return Err(SolveError::NegativeArcWeight);
    }
    if target >= g.n {
        return Err(SolveError::Precondition("target out of range"));
    }
    let by_head = g.arcs_by_head();
    let mut dist: Vec<Option<Weight>> = vec![None; g.n];
    let mut heap = BinaryHeap::new();
    dist[target] = Some(0);
    heap.push(Reverse((0, target)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist[u] != Some(d) {
            continue;
        }
        for &ai in &by_head[u] {
            let arc = g.arcs[ai];
            let cand = d.checked_add(arc.weight).ok_or(SolveError::Overflow)?;
            if dist[arc.tail].is_none_or(|cur| cand < cur) {
                dist[arc.tail] = Some(cand);
                heap.push(Reverse((cand, arc.tail)));
            }
        }
    }
    Ok(DistanceRow {
        target,
        dist: dist
            .into_iter()
            .map(|d| d.map_or(Dist::Infinite, Dist::Finite))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Certificate;

    fn graph(n: usize, arcs: &[(usize, usize, Weight)]) -> StnGraph {
        StnGraph::new(
            n,
            arcs.iter().map(|&(t, h, w)| StnArc::new(t, h, w)).collect(),
        )
    }

    fn least(g: &StnGraph) -> Schedule {
        match solve_stn(g).unwrap() {
            Verdict::Consistent(s) => s,
            Verdict::Inconsistent(_) => panic!("expected consistent"),
        }
    }

    #[test]
    fn zero_schedule_is_least_for_nonnegative_weights() {
        let g = graph(2, &[(0, 1, 3)]);
        assert_eq!(least(&g).values(), &[0, 0]);
    }

    #[test]
    fn negative_weight_forces_tail_up() {
        let g = graph(2, &[(0, 1, -3)]);
        assert_eq!(least(&g).values(), &[3, 0]);
    }

    #[test]
    fn two_cycle_is_inconsistent() {
        let g = graph(2, &[(0, 1, -1), (1, 0, 0)]);
        match solve_stn(&g).unwrap() {
            Verdict::Inconsistent(Certificate::NegativeCycle(c)) => {
                assert!(crate::certify::verify_negative_cycle(&g, &c));
            }
            other => panic!("expected negative cycle, got {other:?}"),
        }
    }

    #[test]
    fn three_cycle_is_inconsistent() {
        let g = graph(3, &[(0, 1, -2), (1, 2, 1), (2, 0, 0)]);
        match solve_stn(&g).unwrap() {
            Verdict::Inconsistent(Certificate::NegativeCycle(c)) => {
                let total: i128 = c.iter().map(|a| a.weight as i128).sum();
                assert!(total < 0);
                assert!(crate::certify::verify_negative_cycle(&g, &c));
            }
            other => panic!("expected negative cycle, got {other:?}"),
        }
    }

    #[test]
    fn warm_start_examples() {
        let g = graph(2, &[(0, 1, -3)]);
        let v = solve_stn_warm(&g, &Schedule::zero(2)).unwrap();
        assert_eq!(v.schedule().unwrap().values(), &[3, 0]);

        // Brute-force minimal feasible point above (5, 1) has Y = X - 3 = 2.
        let g = graph(2, &[(0, 1, 3)]);
        let v = solve_stn_warm(&g, &Schedule::from_values(vec![5, 1])).unwrap();
        assert_eq!(v.schedule().unwrap().values(), &[5, 1]);

        let g = graph(2, &[(1, 0, 3)]); // X - Y <= 3, i.e. X <= Y + 3
        let v = solve_stn_warm(&g, &Schedule::from_values(vec![5, 1])).unwrap();
        assert_eq!(v.schedule().unwrap().values(), &[5, 2]);
    }

    #[test]
    fn reduced_cost_examples() {
        let g = graph(2, &[(0, 1, 3)]);
        let r = reduced_costs(&g, &Schedule::zero(2)).unwrap();
        assert_eq!(r.arcs[0].weight, 3);

        let g = graph(2, &[(0, 1, -3)]);
        let r = reduced_costs(&g, &Schedule::from_values(vec![3, 0])).unwrap();
        assert_eq!(r.arcs[0].weight, 0);
    }

    #[test]
    fn dijkstra_examples() {
        let g = graph(3, &[(0, 1, 1), (1, 2, 2)]);
        let row = dijkstra_to_target(&g, 2).unwrap();
        assert_eq!(row.dist[2], Dist::Finite(0));
        assert_eq!(row.dist[0], Dist::Finite(3));
        assert_eq!(row.dist[1], Dist::Finite(2));

        let row = dijkstra_to_target(&g, 0).unwrap();
        assert_eq!(row.dist[0], Dist::Finite(0));
        assert_eq!(row.dist[1], Dist::Infinite);

        let g = graph(2, &[(0, 1, -1)]);
        assert_eq!(
            dijkstra_to_target(&g, 1),
            Err(SolveError::NegativeArcWeight)
        );
    }

    #[test]
    fn trace_extraction_mirrors_solver_certificates() {
        let g = graph(3, &[(0, 1, -2), (1, 2, 1), (2, 0, 0)]);
        let (verdict, _, trace) = solve_stn_with_trace(&g, &Schedule::zero(3)).unwrap();
        assert!(!verdict.is_consistent());
        let cycle = extract_negative_cycle(&g, &trace).unwrap();
        assert!(crate::certify::verify_negative_cycle(&g, &cycle));

        // Without over-relaxation the extraction is a precondition error.
        let g = graph(2, &[(0, 1, 3)]);
        let (_, _, trace) = solve_stn_with_trace(&g, &Schedule::zero(2)).unwrap();
        assert_eq!(
            extract_negative_cycle(&g, &trace),
            Err(SolveError::Precondition("no node was relaxed n times"))
        );
    }

    #[test]
    fn relaxation_overflow_is_reported() {
        let big = Weight::MAX - 1;
        let g = graph(3, &[(0, 1, -big), (1, 2, -big)]);
        assert_eq!(solve_stn(&g), Err(SolveError::Overflow));
    }

    #[test]
    fn self_loop_negative_is_caught() {
        let g = graph(1, &[(0, 0, -1)]);
        match solve_stn(&g).unwrap() {
            Verdict::Inconsistent(Certificate::NegativeCycle(c)) => {
                assert_eq!(c.len(), 1);
            }
            other => panic!("expected negative cycle, got {other:?}"),
        }
    }
}
