//! Linear-time 2-SAT via the implication graph and strongly connected
//! components.
//!
//! Clauses are unary or binary. A clause `(a ∨ b)` contributes the
//! implications `¬a → b` and `¬b → a`; a unary clause `(a)` contributes
//! `¬a → a`. The formula is satisfiable iff no variable shares a component
//! with its negation. Components are computed with a single-pass lowlink
//! search on an explicit stack, so deep implication chains cannot overflow
//! the call stack.

/// A literal over variable `var`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Lit {
        Lit { var, positive: true }
    }

    pub fn neg(var: usize) -> Lit {
        Lit {
            var,
            positive: false,
        }
    }

    pub fn negated(self) -> Lit {
        Lit {
            var: self.var,
            positive: !self.positive,
        }
    }

    /// Node index in the implication graph. Negative literals come first per
    /// variable so that vacuous variables resolve to false.
    fn index(self) -> usize {
        2 * self.var + usize::from(self.positive)
    }

    fn from_index(i: usize) -> Lit {
        Lit {
            var: i / 2,
            positive: i % 2 == 1,
        }
    }
}

/// A clause with one or two literals.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Clause2 {
    Unit(Lit),
    Binary(Lit, Lit),
}

impl Clause2 {
    pub fn satisfied_by(&self, assignment: &Assignment) -> bool {
        let holds = |l: &Lit| assignment.values[l.var] == l.positive;
        match self {
            Clause2::Unit(a) => holds(a),
            Clause2::Binary(a, b) => holds(a) || holds(b),
        }
    }

    /// The implications this clause induces, as `(from, to)` literal pairs.
    fn implications(&self) -> [(Lit, Lit); 2] {
        match *self {
            Clause2::Unit(a) => [(a.negated(), a), (a.negated(), a)],
            Clause2::Binary(a, b) => [(a.negated(), b), (b.negated(), a)],
        }
    }
}

/// A conjunction of unary and binary clauses over `var_count` variables.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct CnfFormula2 {
    pub var_count: usize,
    pub clauses: Vec<Clause2>,
}

impl CnfFormula2 {
    pub fn new(var_count: usize) -> CnfFormula2 {
        CnfFormula2 {
            var_count,
            clauses: Vec::new(),
        }
    }

    pub fn add_unit(&mut self, a: Lit) {
        debug_assert!(a.var < self.var_count);
        self.clauses.push(Clause2::Unit(a));
    }

    pub fn add_binary(&mut self, a: Lit, b: Lit) {
        debug_assert!(a.var < self.var_count && b.var < self.var_count);
        self.clauses.push(Clause2::Binary(a, b));
    }

    pub fn satisfied_by(&self, assignment: &Assignment) -> bool {
        assignment.values.len() == self.var_count
            && self.clauses.iter().all(|c| c.satisfied_by(assignment))
    }
}

/// A total truth assignment.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Assignment {
    pub values: Vec<bool>,
}

/// One implication edge used in an unsatisfiability core path, tagged with
/// the clause that induced it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ImplicationStep {
    pub clause: usize,
    pub from: Lit,
    pub to: Lit,
}

/// Witness that some variable implies its own negation both ways.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnsatCore {
    pub variable: usize,
    /// Implication chain from `variable` to `¬variable`.
    pub pos_to_neg: Vec<ImplicationStep>,
    /// Implication chain from `¬variable` to `variable`.
    pub neg_to_pos: Vec<ImplicationStep>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TwoSatOutcome {
    Satisfiable(Assignment),
    Unsatisfiable(UnsatCore),
}

struct ImplicationGraph {
    /// Per literal node: outgoing `(target, clause index)` edges.
    adj: Vec<Vec<(usize, usize)>>,
}

impl ImplicationGraph {
    fn build(f: &CnfFormula2) -> ImplicationGraph {
        let mut adj = vec![Vec::new(); 2 * f.var_count];
        for (ci, clause) in f.clauses.iter().enumerate() {
            let [e1, e2] = clause.implications();
            adj[e1.0.index()].push((e1.1.index(), ci));
            if e2 != e1 {
                adj[e2.0.index()].push((e2.1.index(), ci));
            }
        }
        ImplicationGraph { adj }
    }

    /// Tarjan SCC with an explicit DFS stack. Component ids are assigned in
    /// completion order, which is reverse topological order of the
    /// condensation.
    fn sccs(&self) -> Vec<usize> {
        let n = self.adj.len();
        const UNSET: usize = usize::MAX;
        let mut comp = vec![UNSET; n];
        let mut index = vec![UNSET; n];
        let mut lowlink = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut scc_stack: Vec<usize> = Vec::new();
        let mut next_index = 0;
        let mut next_comp = 0;
        // (node, next out-edge position)
        let mut dfs: Vec<(usize, usize)> = Vec::new();

        for root in 0..n {
            if index[root] != UNSET {
                continue;
            }
            dfs.push((root, 0));
            while let Some(&mut (u, ref mut ei)) = dfs.last_mut() {
                if *ei == 0 {
                    index[u] = next_index;
                    lowlink[u] = next_index;
                    next_index += 1;
                    on_stack[u] = true;
                    scc_stack.push(u);
                }
                if let Some(&(v, _)) = self.adj[u].get(*ei) {
                    *ei += 1;
                    if index[v] == UNSET {
                        dfs.push((v, 0));
                    } else if on_stack[v] {
                        lowlink[u] = lowlink[u].min(index[v]);
                    }
                } else {
                    dfs.pop();
                    if lowlink[u] == index[u] {
                        loop {
                            let v = scc_stack.pop().expect("scc stack");
                            on_stack[v] = false;
                            comp[v] = next_comp;
                            if v == u {
                                break;
                            }
                        }
                        next_comp += 1;
                    }
                    if let Some(&mut (p, _)) = dfs.last_mut() {
                        lowlink[p] = lowlink[p].min(lowlink[u]);
                    }
                }
            }
        }
        comp
    }

    /// Shortest implication path between two literal nodes, as clause-tagged
    /// steps. Both nodes sit in one SCC when this is called, so a path
    /// exists.
    fn path(&self, from: usize, to: usize) -> Vec<ImplicationStep> {
        use std::collections::VecDeque;
        let n = self.adj.len();
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; n]; // (node, clause)
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[from] = true;
        queue.push_back(from);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for &(v, ci) in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    prev[v] = Some((u, ci));
                    queue.push_back(v);
                }
            }
        }
        let mut steps = Vec::new();
        let mut cur = to;
        while cur != from {
            let (p, ci) = prev[cur].expect("path exists within an SCC");
            steps.push(ImplicationStep {
                clause: ci,
                from: Lit::from_index(p),
                to: Lit::from_index(cur),
            });
            cur = p;
        }
        steps.reverse();
        steps
    }
}

/// Solves a 2-SAT formula. Deterministic: identical input yields an
/// identical assignment or core.
pub fn solve_2sat(f: &CnfFormula2) -> TwoSatOutcome {
    let graph = ImplicationGraph::build(f);
    let comp = graph.sccs();
    for var in 0..f.var_count {
        let p = Lit::pos(var).index();
        let n = Lit::neg(var).index();
        if comp[p] == comp[n] {
            return TwoSatOutcome::Unsatisfiable(UnsatCore {
                variable: var,
                pos_to_neg: graph.path(p, n),
                neg_to_pos: graph.path(n, p),
            });
        }
    }
    // A literal is true iff its component completes before its negation's,
    // i.e. sits later in topological order of the condensation.
    let values = (0..f.var_count)
        .map(|v| comp[Lit::pos(v).index()] < comp[Lit::neg(v).index()])
        .collect();
    TwoSatOutcome::Satisfiable(Assignment { values })
}

/// Re-walks an unsat core against the formula: both chains must consist of
/// implications the formula's clauses actually induce and connect the
/// witness variable to its negation in both directions.
pub fn verify_unsat_core(f: &CnfFormula2, core: &UnsatCore) -> bool {
    if core.variable >= f.var_count {
        return false;
    }
    let check_chain = |steps: &[ImplicationStep], from: Lit, to: Lit| -> bool {
        let mut cur = from;
        for step in steps {
            if step.from != cur {
                return false;
            }
            let Some(clause) = f.clauses.get(step.clause) else {
                return false;
            };
            if !clause
                .implications()
                .iter()
                .any(|&(a, b)| a == step.from && b == step.to)
            {
                return false;
            }
            cur = step.to;
        }
        cur == to
    };
    check_chain(
        &core.pos_to_neg,
        Lit::pos(core.variable),
        Lit::neg(core.variable),
    ) && check_chain(
        &core.neg_to_pos,
        Lit::neg(core.variable),
        Lit::pos(core.variable),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_formula_is_all_false() {
        let f = CnfFormula2::new(3);
        match solve_2sat(&f) {
            TwoSatOutcome::Satisfiable(a) => assert_eq!(a.values, vec![false; 3]),
            _ => panic!("vacuous formula must be satisfiable"),
        }
    }

    #[test]
    fn forced_model_is_found() {
        // (x ∨ y), (¬x ∨ y), (x ∨ ¬y): brute force leaves only x=y=true.
        let mut f = CnfFormula2::new(2);
        f.add_binary(Lit::pos(0), Lit::pos(1));
        f.add_binary(Lit::neg(0), Lit::pos(1));
        f.add_binary(Lit::pos(0), Lit::neg(1));
        match solve_2sat(&f) {
            TwoSatOutcome::Satisfiable(a) => assert_eq!(a.values, vec![true, true]),
            _ => panic!("satisfiable"),
        }
    }

    #[test]
    fn contradictory_units_are_unsat_with_verified_core() {
        let mut f = CnfFormula2::new(1);
        f.add_unit(Lit::pos(0));
        f.add_unit(Lit::neg(0));
        match solve_2sat(&f) {
            TwoSatOutcome::Unsatisfiable(core) => {
                assert_eq!(core.variable, 0);
                assert!(verify_unsat_core(&f, &core));
                // Tampering with a step must break verification: clause 0 is
                // (x), which induces only the opposite implication.
                let mut bad = core.clone();
                bad.pos_to_neg[0].clause = 0;
                assert!(!verify_unsat_core(&f, &bad));
            }
            _ => panic!("unsatisfiable"),
        }
    }

    fn brute_force(f: &CnfFormula2) -> Option<Assignment> {
        for bits in 0u32..(1 << f.var_count) {
            let a = Assignment {
                values: (0..f.var_count).map(|v| bits >> v & 1 == 1).collect(),
            };
            if f.satisfied_by(&a) {
                return Some(a);
            }
        }
        None
    }

    #[test]
    fn agrees_with_brute_force_on_small_formulas() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x2541);
        for _ in 0..300 {
            let vars = rng.gen_range(1..=6);
            let mut f = CnfFormula2::new(vars);
            for _ in 0..rng.gen_range(0..=10) {
                let a = Lit {
                    var: rng.gen_range(0..vars),
                    positive: rng.gen(),
                };
                if rng.gen_bool(0.15) {
                    f.add_unit(a);
                } else {
                    let b = Lit {
                        var: rng.gen_range(0..vars),
                        positive: rng.gen(),
                    };
                    f.add_binary(a, b);
                }
            }
            match (solve_2sat(&f), brute_force(&f)) {
                (TwoSatOutcome::Satisfiable(a), Some(_)) => assert!(f.satisfied_by(&a)),
                (TwoSatOutcome::Unsatisfiable(core), None) => {
                    assert!(verify_unsat_core(&f, &core))
                }
                (got, want) => panic!("solver and brute force disagree: {got:?} vs {want:?}"),
            }
        }
    }
}
