//! Instance generators: the 3-SAT hardness gadget, seeded random networks,
//! and weight-scaling families for pseudo-polynomial stress measurements.
//!
//! Randomness comes from ChaCha8 seeded with a caller-supplied 64-bit seed;
//! every generator draws its fields in a fixed order from one fresh stream,
//! so instances reproduce exactly across runs and platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::hytn::{Hyperarc, Hytn, Orientation};
use crate::io::CnfFormula;
use crate::model::{
    Interval, Rdtn, SolveError, T1Constraint, T2Constraint, T3Constraint, TimePointId, Weight,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("the gadget needs at least one variable and one clause")]
    EmptyFormula,
    #[error("clause {index} is empty")]
    EmptyClause { index: usize },
    #[error("clause {index} has {len} literals, the gadget takes at most 3")]
    TooManyLiterals { index: usize, len: usize },
    #[error("clause {index} mentions variable {var} beyond the declared {max}")]
    VarOutOfRange { index: usize, var: usize, max: usize },
}

/// Node layout of the gadget: the reference point `z` is node 0, the
/// positive and negative literal of variable `i` (1-based) are nodes
/// `2i - 1` and `2i`, and clause `j` (1-based) is node `2n + j`.
pub fn gadget_layout(n_vars: usize) -> impl Fn(i32) -> usize {
    move |lit: i32| {
        let var = lit.unsigned_abs() as usize;
        debug_assert!(var >= 1 && var <= n_vars);
        if lit > 0 {
            2 * var - 1
        } else {
            2 * var
        }
    }
}

/// Builds the multi-tail t3-blended hyper network that is consistent exactly
/// when the 3-CNF formula is satisfiable.
///
/// Per variable: standard arcs keeping both literals within `[z, z + 1]`, a
/// multi-tail hyperarc forcing one literal to `z + 1`, and a t3-constraint
/// pinning one literal to 0. Per clause: standard arcs pinning the clause
/// node to `z + 1` and a multi-tail hyperarc from its literals. All weights
/// are in {-1, 0, 1} and every t3 bound is zero. Clauses with fewer than
/// three distinct literals keep repeated slots collapsed to a set.
pub fn gadget_from_3sat(f: &CnfFormula) -> Result<Hytn, GenError> {
    if f.var_count == 0 || f.clauses.is_empty() {
        return Err(GenError::EmptyFormula);
    }
    let n_vars = f.var_count;
    let m = f.clauses.len();
    let node_of = gadget_layout(n_vars);
    let z = 0usize;
    let clause_node = |j: usize| 2 * n_vars + j + 1;

    let std_arc = |tail: usize, head: usize, w: Weight| {
        Hyperarc::multi_tail(vec![(tail, w)], head).expect("valid standard arc")
    };

    let mut arcs = Vec::new();
    let mut c3 = Vec::new();
    for i in 1..=n_vars {
        let pos = 2 * i - 1;
        let neg = 2 * i;
        arcs.push(std_arc(z, pos, 1)); // x_i - z <= 1
        arcs.push(std_arc(pos, z, 0)); // z - x_i <= 0
        arcs.push(std_arc(z, neg, 1));
        arcs.push(std_arc(neg, z, 0));
        arcs.push(Hyperarc::multi_tail(vec![(pos, -1), (neg, -1)], z).expect("valid"));
        c3.push(
            T3Constraint::new(
                (TimePointId(pos), Interval::new(0, 0).expect("valid")),
                (TimePointId(neg), Interval::new(0, 0).expect("valid")),
            )
            .expect("distinct literals"),
        );
    }
    for (j, clause) in f.clauses.iter().enumerate() {
        if clause.is_empty() {
            return Err(GenError::EmptyClause { index: j });
        }
        if clause.len() > 3 {
            return Err(GenError::TooManyLiterals {
                index: j,
                len: clause.len(),
            });
        }
        for &lit in clause {
            let var = lit.unsigned_abs() as usize;
            if var == 0 || var > n_vars {
                return Err(GenError::VarOutOfRange {
                    index: j,
                    var,
                    max: n_vars,
                });
            }
        }
        let cj = clause_node(j);
        arcs.push(std_arc(z, cj, 1)); // C_j - z <= 1
        arcs.push(std_arc(cj, z, -1)); // z - C_j <= -1
        let mut tails: Vec<(usize, Weight)> = clause.iter().map(|&l| (node_of(l), 0)).collect();
        tails.sort();
        tails.dedup();
        arcs.push(Hyperarc::multi_tail(tails, cj).expect("valid clause hyperarc"));
    }
    let net = Hytn::new(1 + 2 * n_vars + m, arcs, vec![], c3).expect("gadget is well-formed");
    Ok(net)
}

/// The schedule the construction pairs with a satisfying assignment:
/// `z = 0`, every clause node at 1, true literals at 1, false literals at 0.
pub fn gadget_schedule(f: &CnfFormula, assignment: &[bool]) -> crate::model::Schedule {
    let n_vars = f.var_count;
    let mut values = vec![0; 1 + 2 * n_vars + f.clauses.len()];
    for (i, &val) in assignment.iter().enumerate() {
        let pos = 2 * (i + 1) - 1;
        let neg = 2 * (i + 1);
        values[pos] = Weight::from(val);
        values[neg] = Weight::from(!val);
    }
    for j in 0..f.clauses.len() {
        values[2 * n_vars + j + 1] = 1;
    }
    crate::model::Schedule::from_values(values)
}

/// Parameters for random RDTN generation.
#[derive(Clone, Copy, Debug)]
pub struct RdtnParams {
    pub n: usize,
    pub t1_count: usize,
    pub t2_count: usize,
    pub t3_count: usize,
    /// t1 weights are drawn from `[weight_lo, weight_hi]`.
    pub weight_lo: Weight,
    pub weight_hi: Weight,
    /// Interval lower bounds are drawn from `[0, bound_range]`.
    pub bound_range: Weight,
    /// Maximum intervals per t2-constraint.
    pub max_intervals: usize,
}

impl Default for RdtnParams {
    fn default() -> RdtnParams {
        RdtnParams {
            n: 5,
            t1_count: 6,
            t2_count: 2,
            t3_count: 2,
            weight_lo: -8,
            weight_hi: 8,
            bound_range: 8,
            max_intervals: 3,
        }
    }
}

fn random_interval(rng: &mut ChaCha8Rng, max_weight: Weight) -> Interval {
    let span = (max_weight / 3).max(1);
    let lo = rng.gen_range(0..=max_weight);
    let hi = lo + rng.gen_range(0..=span);
    Interval::new(lo, hi).expect("lo <= hi")
}

fn random_t2(rng: &mut ChaCha8Rng, var: usize, p_max_w: Weight, max_intervals: usize) -> T2Constraint {
    let k = rng.gen_range(1..=max_intervals.max(1));
    let intervals: Vec<Interval> = (0..k).map(|_| random_interval(rng, p_max_w)).collect();
    T2Constraint::new(TimePointId(var), &intervals).expect("non-empty")
}

/// Deterministic random RDTN: same seed, same instance.
pub fn random_rdtn(seed: u64, p: &RdtnParams) -> Rdtn {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.n.max(1);
    let mut c1 = Vec::with_capacity(p.t1_count);
    for _ in 0..p.t1_count {
        let x = rng.gen_range(0..n);
        let mut y = rng.gen_range(0..n);
        if n > 1 {
            while y == x {
                y = rng.gen_range(0..n);
            }
        }
        let w = rng.gen_range(p.weight_lo..=p.weight_hi);
        if x == y && w < 0 {
            continue;
        }
        c1.push(T1Constraint::new(TimePointId(x), TimePointId(y), w).expect("valid"));
    }
    let mut c2 = Vec::with_capacity(p.t2_count);
    for _ in 0..p.t2_count {
        let var = rng.gen_range(0..n);
        c2.push(random_t2(&mut rng, var, p.bound_range, p.max_intervals));
    }
    let mut c3 = Vec::with_capacity(p.t3_count);
    if n > 1 {
        for _ in 0..p.t3_count {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n);
            while b == a {
                b = rng.gen_range(0..n);
            }
            let iva = random_interval(&mut rng, p.bound_range);
            let ivb = random_interval(&mut rng, p.bound_range);
            c3.push(
                T3Constraint::new((TimePointId(a), iva), (TimePointId(b), ivb))
                    .expect("distinct"),
            );
        }
    }
    Rdtn::new(n, c1, c2, c3).expect("generated indices are in range")
}

/// Parameters for random hyper-network generation.
#[derive(Clone, Copy, Debug)]
pub struct HytnParams {
    pub n: usize,
    pub arc_count: usize,
    /// Maximum weighted nodes per hyperarc besides the pivot.
    pub max_others: usize,
    /// Hyperarc weights are drawn from `[weight_lo, weight_hi]`; a range
    /// shifted negative makes inconsistent instances common.
    pub weight_lo: Weight,
    pub weight_hi: Weight,
    pub orientation: Orientation,
    /// Number of t2-constraints blended in (0 for a pure network).
    pub t2_count: usize,
    pub max_intervals: usize,
    /// Bound magnitude for the blended t2 intervals.
    pub bound_range: Weight,
}

impl Default for HytnParams {
    fn default() -> HytnParams {
        HytnParams {
            n: 5,
            arc_count: 4,
            max_others: 2,
            weight_lo: -4,
            weight_hi: 4,
            orientation: Orientation::MultiHead,
            t2_count: 0,
            max_intervals: 2,
            bound_range: 4,
        }
    }
}

/// Deterministic random hyper network, optionally blended with
/// t2-constraints.
pub fn random_hytn(seed: u64, p: &HytnParams) -> Hytn {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.n.max(2);
    let mut arcs = Vec::with_capacity(p.arc_count);
    for _ in 0..p.arc_count {
        let pivot = rng.gen_range(0..n);
        let k = rng.gen_range(1..=p.max_others.max(1)).min(n - 1);
        let mut nodes: Vec<usize> = Vec::new();
        while nodes.len() < k {
            let v = rng.gen_range(0..n);
            if v != pivot && !nodes.contains(&v) {
                nodes.push(v);
            }
        }
        let others: Vec<(usize, Weight)> = nodes
            .into_iter()
            .map(|v| (v, rng.gen_range(p.weight_lo..=p.weight_hi)))
            .collect();
        arcs.push(Hyperarc::new(p.orientation, pivot, others).expect("valid"));
    }
    let mut c2 = Vec::with_capacity(p.t2_count);
    for _ in 0..p.t2_count {
        let var = rng.gen_range(0..n);
        c2.push(random_t2(&mut rng, var, p.bound_range, p.max_intervals));
    }
    Hytn::new(n, arcs, c2, vec![]).expect("generated indices are in range")
}

/// Multiplies every hyperarc weight and every t2 bound of the network by
/// `k`, keeping the topology. A schedule is feasible for the original
/// exactly when its k-fold multiple is feasible for the scaled network, so
/// the consistency verdict is invariant.
pub fn scale_weights(net: &Hytn, k: Weight) -> Result<Hytn, SolveError> {
    let mul = |w: Weight| w.checked_mul(k).ok_or(SolveError::Overflow);
    let mut arcs = Vec::with_capacity(net.arcs().len());
    for a in net.arcs() {
        let others = a
            .others()
            .iter()
            .map(|&(v, w)| Ok((v, mul(w)?)))
            .collect::<Result<Vec<_>, SolveError>>()?;
        arcs.push(Hyperarc::new(a.orientation, a.pivot, others).expect("same structure"));
    }
    let mut c2 = Vec::with_capacity(net.c2().len());
    for c in net.c2() {
        let intervals = c
            .intervals()
            .iter()
            .map(|iv| Ok(Interval::new(mul(iv.lo)?, mul(iv.hi)?).expect("order preserved")))
            .collect::<Result<Vec<_>, SolveError>>()?;
        c2.push(T2Constraint::new(c.x, &intervals).expect("non-empty"));
    }
    let c3 = net
        .c3()
        .iter()
        .map(|c| {
            let f = (c.first.0, Interval::new(mul(c.first.1.lo)?, mul(c.first.1.hi)?).expect("ok"));
            let s = (
                c.second.0,
                Interval::new(mul(c.second.1.lo)?, mul(c.second.1.hi)?).expect("ok"),
            );
            Ok(T3Constraint::new(f, s).expect("distinct"))
        })
        .collect::<Result<Vec<_>, SolveError>>()?;
    Hytn::new(net.time_point_count(), arcs, c2, c3).map_err(|_| SolveError::Overflow)
}

/// Base instances at multiplier 1, every weight and bound multiplied by `k`:
/// identical topology across the family, consistency invariant in `k`.
pub fn scaling_family(base_seed: u64, multiplier: Weight) -> Result<Vec<Hytn>, SolveError> {
    if multiplier < 1 {
        return Err(SolveError::Precondition("multiplier must be at least 1"));
    }
    let mut out = Vec::new();
    for i in 0..4 {
        let base = random_hytn(
            base_seed.wrapping_add(i),
            &HytnParams {
                t2_count: 2,
                weight_lo: -2,
                weight_hi: 2,
                bound_range: 2,
                ..HytnParams::default()
            },
        );
        out.push(scale_weights(&base, multiplier)?);
    }
    Ok(out)
}

/// Adversarial family whose hard part genuinely grows with the multiplier:
/// a two-node ladder pumps in unit steps toward a t2 bound at `k * base`,
/// so value-iteration work scales linearly with `k` at fixed topology.
pub fn gap_family(base_seed: u64, multiplier: Weight) -> Result<Vec<Hytn>, SolveError> {
    if multiplier < 1 {
        return Err(SolveError::Precondition("multiplier must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    let mut out = Vec::new();
    for _ in 0..2 {
        let base_bound: Weight = rng.gen_range(2..=4);
        let target = base_bound
            .checked_mul(multiplier)
            .ok_or(SolveError::Overflow)?;
        let arcs = vec![
            Hyperarc::multi_head(0, vec![(1, -1), (2, 0)]).expect("valid"),
            Hyperarc::multi_head(1, vec![(0, -1), (2, 0)]).expect("valid"),
        ];
        let c2 = vec![T2Constraint::new(
            TimePointId(2),
            &[Interval::new(target, target).expect("valid")],
        )
        .expect("non-empty")];
        out.push(Hytn::new(3, arcs, c2, vec![]).expect("well-formed"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Network;

    #[test]
    fn default_parameters_give_a_real_verdict_mix() {
        use crate::oracle::{oracle_rdtp, OracleConfig};
        let cfg = OracleConfig::default();
        let mut consistent = 0;
        let mut inconsistent = 0;
        for seed in 0..500u64 {
            let net = random_rdtn(seed, &RdtnParams::default());
            if oracle_rdtp(&net, &cfg).unwrap().consistent {
                consistent += 1;
            } else {
                inconsistent += 1;
            }
        }
        assert!(
            consistent >= 50 && inconsistent >= 50,
            "degenerate mix: {consistent}/{inconsistent}"
        );
    }

    #[test]
    fn generators_are_deterministic() {
        let p = RdtnParams::default();
        assert_eq!(random_rdtn(1, &p), random_rdtn(1, &p));
        let hp = HytnParams::default();
        assert_eq!(random_hytn(7, &hp), random_hytn(7, &hp));
    }

    #[test]
    fn single_interval_t2_is_expressible_as_bounds() {
        let p = RdtnParams {
            max_intervals: 1,
            ..RdtnParams::default()
        };
        let net = random_rdtn(3, &p);
        assert!(net.c2().iter().all(|c| c.intervals().len() == 1));
    }

    #[test]
    fn gadget_counts_and_worked_schedule() {
        // (x1 ∨ x1 ∨ x1): 4 time-points; z=0, x1=1, !x1=0, C1=1 verifies.
        let f = CnfFormula {
            var_count: 1,
            clauses: vec![vec![1, 1, 1]],
        };
        let net = gadget_from_3sat(&f).unwrap();
        assert_eq!(net.time_point_count(), 1 + 2 + 1);
        assert!(net
            .arcs()
            .iter()
            .all(|a| a.others().iter().all(|&(_, w)| (-1..=1).contains(&w))));
        assert!(net.c3().iter().all(|c| {
            c.first.1 == Interval::new(0, 0).unwrap() && c.second.1 == Interval::new(0, 0).unwrap()
        }));
        let sched = gadget_schedule(&f, &[true]);
        assert!(crate::certify::verify_schedule(
            &Network::Hytn(net),
            &sched
        ));
    }

    #[test]
    fn contradictory_formula_gives_inconsistent_gadget() {
        let f = CnfFormula {
            var_count: 1,
            clauses: vec![vec![1, 1, 1], vec![-1, -1, -1]],
        };
        let net = gadget_from_3sat(&f).unwrap();
        assert_eq!(net.time_point_count(), 1 + 2 + 2);
        let report =
            crate::oracle::oracle_hytn(&net, &crate::oracle::OracleConfig::default()).unwrap();
        assert!(!report.consistent);
    }

    #[test]
    fn gadget_rejects_bad_clauses() {
        let f = CnfFormula {
            var_count: 2,
            clauses: vec![vec![1, 2, -1, -2]],
        };
        assert!(matches!(
            gadget_from_3sat(&f),
            Err(GenError::TooManyLiterals { index: 0, len: 4 })
        ));
        let f = CnfFormula {
            var_count: 1,
            clauses: vec![vec![2]],
        };
        assert!(matches!(
            gadget_from_3sat(&f),
            Err(GenError::VarOutOfRange { .. })
        ));
    }

    #[test]
    fn scaling_preserves_topology_and_verdict() {
        let family1 = scaling_family(11, 1).unwrap();
        let family5 = scaling_family(11, 5).unwrap();
        for (a, b) in family1.iter().zip(&family5) {
            assert_eq!(a.time_point_count(), b.time_point_count());
            assert_eq!(a.arcs().len(), b.arcs().len());
            let va = crate::hytn::solve_t2hytp(a).unwrap().is_consistent();
            let vb = crate::hytn::solve_t2hytp(b).unwrap().is_consistent();
            assert_eq!(va, vb);
        }
    }

    #[test]
    fn gap_family_work_grows_with_multiplier() {
        let small: u64 = gap_family(3, 1)
            .unwrap()
            .iter()
            .map(|n| crate::hytn::solve_t2hytp_traced(n).unwrap().1.relaxations)
            .sum();
        let large: u64 = gap_family(3, 50)
            .unwrap()
            .iter()
            .map(|n| crate::hytn::solve_t2hytp_traced(n).unwrap().1.relaxations)
            .sum();
        assert!(large > small * 10, "{large} vs {small}");
    }
}
