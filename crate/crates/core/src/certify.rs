//! Strongly-polynomial verifiers for every certificate object: feasible
//! schedules, negative cycles, negative hypercycles, certified least
//! feasible schedules (CLFS), and t2-blend inconsistency sequences.
//!
//! Verifiers are the ground truth for the solvers' certificate extraction:
//! everything a solver emits must pass here, and the checks depend only on
//! the certificate and the network, never on solver internals.

use std::collections::BTreeMap;

use crate::hytn::{hyperarc_satisfied, materialize_aux, Hyperarc, Hytn, Orientation};
use crate::model::{satisfies, Network, Schedule, Weight};
use crate::stn::{StnArc, StnGraph};

/// A negative hypercycle `(S, C0)`: a non-empty node set that is exactly the
/// union of the nodes of `C0`, with every node the tail of exactly one arc
/// of `C0`, such that every cyclic node sequence through the arcs has
/// strictly negative total weight.
#[derive(Clone, PartialEq, Debug)]
pub struct NegativeHypercycle {
    pub nodes: Vec<usize>,
    pub arcs: Vec<Hyperarc>,
}

/// A certified least feasible schedule: a feasible schedule plus, per node,
/// a negative hypercycle of the auxiliary network that schedules the node
/// one unit earlier.
#[derive(Clone, PartialEq, Debug)]
pub struct ClfsCertificate {
    pub schedule: Schedule,
    /// One hypercycle per time-point, indexed by the time-point.
    pub hypercycles: Vec<NegativeHypercycle>,
}

/// One element of a t2-blend inconsistency sequence: a certified least
/// schedule of the current auxiliary network and the index of a
/// t2-constraint it violates.
#[derive(Clone, PartialEq, Debug)]
pub struct T2HytpStep {
    pub clfs: ClfsCertificate,
    pub witness: usize,
}

/// The co-NP inconsistency certificate for t2-blended multi-head networks:
/// certified least schedules of ever-tighter auxiliary networks, ending with
/// a value above its violated constraint's greatest upper bound.
#[derive(Clone, PartialEq, Debug)]
pub struct T2HytpSequence {
    pub steps: Vec<T2HytpStep>,
}

/// Pointwise satisfaction of every constraint or hyperarc of the network.
pub fn verify_schedule(net: &Network, s: &Schedule) -> bool {
    match net {
        Network::Rdtn(n) => satisfies(s, n),
        Network::Hytn(h) => h.satisfied_by(s),
    }
}

/// True iff the arcs belong to the graph, close cyclically, and their total
/// weight is strictly negative.
pub fn verify_negative_cycle(g: &StnGraph, cyc: &[StnArc]) -> bool {
    if cyc.is_empty() {
        return false;
    }
    for (i, arc) in cyc.iter().enumerate() {
        if !g.arcs.contains(arc) {
            return false;
        }
        let next = &cyc[(i + 1) % cyc.len()];
        if arc.head != next.tail {
            return false;
        }
    }
    let total: i128 = cyc.iter().map(|a| a.weight as i128).sum();
    total < 0
}

/// Checks that every directed cycle in the functional-choice graph of the
/// hypercycle has strictly negative weight, by max-plus powers of the
/// adjacency matrix up to the node count.
fn all_cycles_negative(cert: &NegativeHypercycle) -> bool {
    let index: BTreeMap<usize, usize> = cert
        .nodes
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let s = cert.nodes.len();
    let mut adj = vec![vec![None::<i128>; s]; s];
    for arc in &cert.arcs {
        let u = index[&arc.pivot];
        for &(h, w) in arc.others() {
            let v = index[&h];
            let w = w as i128;
            adj[u][v] = Some(adj[u][v].map_or(w, |old: i128| old.max(w)));
        }
    }
    let mul = |a: &Vec<Vec<Option<i128>>>, b: &Vec<Vec<Option<i128>>>| {
        let mut out = vec![vec![None::<i128>; s]; s];
        for i in 0..s {
            for k in 0..s {
                let Some(ik) = a[i][k] else { continue };
                for j in 0..s {
                    let Some(kj) = b[k][j] else { continue };
                    let cand = ik + kj;
                    out[i][j] = Some(out[i][j].map_or(cand, |old: i128| old.max(cand)));
                }
            }
        }
        out
    };
    // Longest closed walks of length 1..=s; a non-negative diagonal entry is
    // a non-negative cycle. Compound cycles decompose into simple ones, so
    // length s suffices.
    let mut cur = adj.clone();
    for step in 1..=s {
        for i in 0..s {
            if matches!(cur[i][i], Some(d) if d >= 0) {
                return false;
            }
        }
        if step < s {
            cur = mul(&cur, &adj);
        }
    }
    true
}

/// Full check of a negative hypercycle against its network: structural
/// membership, unique tail ownership, node-set closure, and strict
/// negativity of every cyclic sequence.
pub fn verify_negative_hypercycle(net: &Hytn, cert: &NegativeHypercycle) -> bool {
    if cert.arcs.is_empty() || cert.nodes.is_empty() {
        return false;
    }
    for arc in &cert.arcs {
        if arc.orientation != Orientation::MultiHead || !net.arcs().contains(arc) {
            return false;
        }
    }
    // S must be exactly the union of the arcs' nodes.
    let mut union: Vec<usize> = cert.arcs.iter().flat_map(|a| a.nodes()).collect();
    union.sort_unstable();
    union.dedup();
    let mut nodes = cert.nodes.clone();
    nodes.sort_unstable();
    nodes.dedup();
    if nodes != union || nodes.len() != cert.nodes.len() {
        return false;
    }
    // Every node owns exactly one arc as its tail.
    let mut tails: Vec<usize> = cert.arcs.iter().map(|a| a.pivot).collect();
    tails.sort_unstable();
    if tails.windows(2).any(|p| p[0] == p[1]) || tails != nodes {
        return false;
    }
    all_cycles_negative(cert)
}

/// CLFS check against a bounded auxiliary network `base_arcs` plus
/// accumulated lower bounds: the schedule must be non-negative and feasible,
/// and each node's hypercycle must prove the node cannot run one unit
/// earlier.
pub(crate) fn verify_clfs_bounded(
    base_arcs: &[Hyperarc],
    n: usize,
    bounds: &[(usize, Weight)],
    cert: &ClfsCertificate,
) -> bool {
    if cert.schedule.len() != n || cert.hypercycles.len() != n {
        return false;
    }
    if cert.schedule.values().iter().any(|&v| v < 0) {
        return false;
    }
    let aux = materialize_aux(base_arcs, n, bounds, None);
    let mut ext = cert.schedule.values().to_vec();
    ext.push(0);
    let ext = Schedule::from_values(ext);
    if !aux.arcs().iter().all(|a| hyperarc_satisfied(a, &ext)) {
        return false;
    }
    for x in 0..n {
        let hx = materialize_aux(base_arcs, n, bounds, Some((x, cert.schedule.value(x) - 1)));
        if !verify_negative_hypercycle(&hx, &cert.hypercycles[x]) {
            return false;
        }
    }
    true
}

/// True iff the schedule is feasible for the multi-head network and the
/// hypercycle family proves no value can be lowered.
pub fn verify_clfs(net: &Hytn, cert: &ClfsCertificate) -> bool {
    if net.arcs().iter().any(|a| a.orientation != Orientation::MultiHead)
        || !net.c2().is_empty()
        || !net.c3().is_empty()
    {
        return false;
    }
    verify_clfs_bounded(net.arcs(), net.time_point_count(), &[], cert)
}

/// Verifies a t2-blend inconsistency sequence: each step's schedule is a
/// certified least schedule of the auxiliary network accumulated so far and
/// violates its witness constraint; every non-final step implies the next
/// lower bound; the final step's value exceeds its constraint's greatest
/// upper bound; the length never exceeds the total disjunct count.
pub fn verify_t2hytp_inconsistency(net: &Hytn, seq: &T2HytpSequence) -> bool {
    if net.arcs().iter().any(|a| a.orientation != Orientation::MultiHead) || !net.c3().is_empty() {
        return false;
    }
    if seq.steps.is_empty() {
        return false;
    }
    // Every non-final step rules out one disjunct forever, so a sequence
    // holds at most one entry per disjunct plus the final over-bound one.
    let total_disjuncts: usize = net.c2().iter().map(|c| c.intervals().len()).sum();
    if seq.steps.len() > total_disjuncts + 1 {
        return false;
    }
    let n = net.time_point_count();
    let mut bounds: Vec<(usize, Weight)> = Vec::new();
    for (i, step) in seq.steps.iter().enumerate() {
        if !verify_clfs_bounded(net.arcs(), n, &bounds, &step.clfs) {
            return false;
        }
        let Some(c) = net.c2().get(step.witness) else {
            return false;
        };
        let v = step.clfs.schedule.value(c.x.0);
        if c.satisfied_by(v) {
            return false;
        }
        let last = i + 1 == seq.steps.len();
        match c.first_lower_above(v) {
            Some(l_star) => {
                if last {
                    // The sequence must end with an over-bound witness.
                    return false;
                }
                bounds.push((c.x.0, l_star));
            }
            None => {
                // v exceeds the greatest upper bound: only valid as the end.
                return last;
            }
        }
    }
    unreachable!("loop returns at the final step");
}
