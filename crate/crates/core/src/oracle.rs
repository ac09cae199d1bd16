//! Brute-force deciders, enumerators, and instance generators.
//!
//! Everything here exists to keep the constructions honest: the DPLL solver
//! and the interesting-pair enumerator re-derive answers from first
//! principles (sharing only CNF primitives with the builders), so a bug in
//! the clever code shows up as a disagreement rather than a self-certified
//! pass.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cnf::{ClauseId, Cnf, GraphFlavor, Literal, LiteralSet, Restricted, Variable};
use crate::decomp::order::{min_bag, postorder, prefix_forest};
use crate::decomp::{validate, NodeId, TreeDecomposition};
use crate::longclauses::{DecisionType, LongClauseSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Unsat,
    /// A total satisfying assignment (unconstrained variables default to
    /// positive).
    Sat(LiteralSet),
}

/// Complete DPLL search: unit propagation, then branch on the smallest
/// occurring variable, positive side first.
pub fn dpll_unsat(cnf: &Cnf) -> OracleVerdict {
    let clauses: Vec<LiteralSet> = cnf.clauses.iter().map(|c| c.lits.clone()).collect();
    match search(clauses) {
        None => OracleVerdict::Unsat,
        Some(fixed) => {
            let assigned: BTreeMap<Variable, bool> =
                fixed.iter().map(|l| (l.var, l.positive)).collect();
            let total = (1..=cnf.num_vars).map(|v| Literal {
                var: Variable(v),
                positive: assigned.get(&Variable(v)).copied().unwrap_or(true),
            });
            OracleVerdict::Sat(LiteralSet::new(total).expect("one literal per variable"))
        }
    }
}

fn search(mut clauses: Vec<LiteralSet>) -> Option<Vec<Literal>> {
    let mut fixed = Vec::new();
    loop {
        if clauses.is_empty() {
            return Some(fixed);
        }
        if clauses.iter().any(LiteralSet::is_empty) {
            return None;
        }
        if let Some(unit) = clauses.iter().find(|c| c.len() == 1) {
            let lit = unit.iter().next().expect("unit clause");
            fixed.push(lit);
            clauses = assign(&clauses, lit);
            continue;
        }
        let v = clauses
            .iter()
            .flat_map(|c| c.vars())
            .min()
            .expect("nonempty clauses");
        for positive in [true, false] {
            let lit = Literal { var: v, positive };
            if let Some(rest) = search(assign(&clauses, lit)) {
                fixed.push(lit);
                fixed.extend(rest);
                return Some(fixed);
            }
        }
        return None;
    }
}

fn assign(clauses: &[LiteralSet], lit: Literal) -> Vec<LiteralSet> {
    let s = LiteralSet::singleton(lit);
    clauses
        .iter()
        .filter_map(|c| match c.restrict(&s) {
            Restricted::Satisfied => None,
            Restricted::Residual(r) => Some(r),
        })
        .collect()
}

/// Memoizing front-end over [`dpll_unsat`] for the builders' many residual
/// queries. Keys are a canonical clause-set encoding, so the verdict is
/// shared across syntactically different views of the same set.
#[derive(Default)]
pub struct UnsatOracle {
    memo: HashMap<Vec<i64>, bool>,
    pub calls: u64,
    pub hits: u64,
}

impl UnsatOracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_unsat<'a, I>(&mut self, clauses: I) -> bool
    where
        I: IntoIterator<Item = &'a LiteralSet>,
    {
        self.calls += 1;
        let sets: BTreeSet<Vec<i64>> = clauses
            .into_iter()
            .map(|c| c.iter().map(Literal::to_dimacs).collect())
            .collect();
        let mut key = Vec::new();
        for s in &sets {
            key.extend(s);
            key.push(0);
        }
        if let Some(&verdict) = self.memo.get(&key) {
            self.hits += 1;
            return verdict;
        }
        let num_vars = sets
            .iter()
            .flat_map(|s| s.iter().map(|l| l.unsigned_abs() as u32))
            .max()
            .unwrap_or(0);
        let cnf = Cnf::from_literal_sets(
            num_vars,
            sets.iter().map(|s| {
                LiteralSet::new(s.iter().map(|&l| Literal::from_dimacs(l).expect("nonzero")))
                    .expect("well-formed clause")
            }),
        );
        let verdict = matches!(dpll_unsat(&cnf), OracleVerdict::Unsat);
        self.memo.insert(key, verdict);
        verdict
    }
}

#[derive(Debug, Error)]
pub enum EnumError {
    #[error("prefix has {0} variables; the exhaustive scan is capped at 20")]
    TooManyPrefixVars(usize),
    #[error("prefix length {got} exceeds the {len} decomposition nodes")]
    PrefixOutOfRange { got: usize, len: usize },
    #[error("spec rejected: {0}")]
    BadSpec(String),
}

/// Exhaustively scans all well-formed literal sets over the prefix variables
/// and classifies each from scratch. Returns the interesting ones with their
/// types, sorted so that members of the same type are adjacent.
///
/// This deliberately re-derives the three conditions instead of calling the
/// construction-side classifier, so the two can cross-check each other.
pub fn enumerate_interesting_pairs(
    cnf: &Cnf,
    spec: &LongClauseSpec,
    st_len: usize,
) -> Result<Vec<(LiteralSet, DecisionType)>, EnumError> {
    spec.validate(cnf)
        .map_err(|e| EnumError::BadSpec(e.to_string()))?;
    let td = &spec.short_td;
    let idx = postorder(td).map_err(|e| EnumError::BadSpec(e.to_string()))?;
    if st_len > idx.len() {
        return Err(EnumError::PrefixOutOfRange {
            got: st_len,
            len: idx.len(),
        });
    }
    let mut prefix_vars: BTreeSet<Variable> = BTreeSet::new();
    for i in 0..st_len {
        prefix_vars.extend(td.node(idx.node_at(i)).var_bag.iter().copied());
    }
    if prefix_vars.len() > 20 {
        return Err(EnumError::TooManyPrefixVars(prefix_vars.len()));
    }
    let vars: Vec<Variable> = prefix_vars.iter().copied().collect();
    let forest = prefix_forest(td, &idx, st_len).map_err(|e| EnumError::BadSpec(e.to_string()))?;
    let subtree_vars = td.subtree_var_sets();
    let rank = |v: Variable| min_bag(td, &idx, v).map_or(usize::MAX, |t| idx.rank(t));
    let longs: Vec<(ClauseId, LiteralSet)> = spec
        .long_ids
        .iter()
        .map(|&id| (id, cnf.clause(id).expect("validated id").lits.clone()))
        .collect();

    let mut out = Vec::new();
    // odometer over {unassigned, positive, negative} per prefix variable
    let mut digits = vec![0u8; vars.len()];
    loop {
        let s = LiteralSet::new(digits.iter().zip(&vars).filter(|(&d, _)| d != 0).map(
            |(&d, &var)| Literal {
                var,
                positive: d == 1,
            },
        ))
        .expect("one digit per variable");

        if let Some(dt) = classify_from_scratch(
            &s,
            st_len,
            &longs,
            &prefix_vars,
            &forest.trees,
            &subtree_vars,
            td,
            &rank,
        ) {
            out.push((s, dt));
        }

        let mut i = 0;
        loop {
            if i == digits.len() {
                out.sort_by(|a, b| (a.1.key(), &a.0).cmp(&(b.1.key(), &b.0)));
                return Ok(out);
            }
            digits[i] += 1;
            if digits[i] < 3 {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Checks the three interesting-pair conditions directly against their
/// definitions and assembles the type tuple on success.
#[allow(clippy::too_many_arguments)]
fn classify_from_scratch(
    s: &LiteralSet,
    st_len: usize,
    longs: &[(ClauseId, LiteralSet)],
    prefix_vars: &BTreeSet<Variable>,
    forest_roots: &[NodeId],
    subtree_vars: &[BTreeSet<Variable>],
    td: &TreeDecomposition,
    rank: &dyn Fn(Variable) -> usize,
) -> Option<DecisionType> {
    // determining: no earlier variable of the same long clause satisfies it
    let mut determining = BTreeSet::new();
    for (_, c) in longs {
        for x in c.vars() {
            let earlier_sat = c.iter().any(|l| rank(l.var) < rank(x) && s.contains(l));
            if !earlier_sat {
                determining.insert(x);
            }
        }
    }
    if determining
        .iter()
        .any(|&v| prefix_vars.contains(&v) && !s.has_var(v))
    {
        return None;
    }

    let mut tree_of = BTreeMap::new();
    for (id, c) in longs {
        let sat_vars: Vec<Variable> = c.iter().filter(|l| s.contains(*l)).map(|l| l.var).collect();
        if sat_vars.is_empty() {
            continue;
        }
        let mv = sat_vars
            .iter()
            .copied()
            .min_by_key(|&v| (rank(v), v.0))
            .expect("nonempty");
        let root = forest_roots
            .iter()
            .copied()
            .find(|t| subtree_vars[t.index()].contains(&mv))?;
        tree_of.insert(*id, root);
    }

    let roots: Vec<NodeId> = forest_roots
        .iter()
        .copied()
        .filter(|t| tree_of.values().any(|r| r == t))
        .collect();
    let in_trees = |v: Variable| roots.iter().any(|r| subtree_vars[r.index()].contains(&v));
    if s.vars().any(|v| !determining.contains(&v) && !in_trees(v)) {
        return None;
    }

    let root_bags: BTreeSet<Variable> = roots
        .iter()
        .flat_map(|r| td.node(*r).var_bag.iter().copied())
        .collect();
    if root_bags.iter().any(|&v| !s.has_var(v)) {
        return None;
    }

    Some(DecisionType {
        st_len,
        sat_tree_roots: roots,
        sat_clauses: tree_of.keys().copied().collect(),
        tree_of,
        root_assign: s.project(&root_bags),
        witness: s.clone(),
    })
}

/// Deterministic recipe for one random instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InstanceRecipe {
    pub seed: u64,
    pub num_vars: u32,
    /// Target primal width of the short part; bags hold ≤ width+1 variables.
    pub width: u32,
    pub long_clauses: u32,
    /// Short clauses per variable, roughly.
    pub density: f64,
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("bad recipe: {0}")]
    BadRecipe(String),
    #[error("no unsatisfiable instance found in {0} attempts")]
    ResamplingExhausted(u32),
}

const MAX_ATTEMPTS: u32 = 1000;

/// Samples an unsatisfiable instance: a random rooted binary decomposition
/// with bags of ≤ width+1 variables, short clauses drawn inside bags (so the
/// short part has primal width ≤ width by construction), and long clauses
/// spanning three distinct bags. Resamples until DPLL says UNSAT — and, when
/// long clauses were requested, until the short part alone is satisfiable,
/// so the long clauses actually carry the contradiction.
pub fn gen_instances(recipe: &InstanceRecipe) -> Result<(Cnf, LongClauseSpec), GenError> {
    if recipe.num_vars == 0 {
        return Err(GenError::BadRecipe("at least one variable required".into()));
    }
    if recipe.long_clauses > 0 && recipe.num_vars < 3 {
        return Err(GenError::BadRecipe(
            "long clauses need at least 3 variables".into(),
        ));
    }
    if !recipe.density.is_finite() || recipe.density <= 0.0 {
        return Err(GenError::BadRecipe(
            "density must be positive and finite".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(recipe.seed);
    for _ in 0..MAX_ATTEMPTS {
        let (cnf, spec) = sample_once(recipe, &mut rng)?;
        if !matches!(dpll_unsat(&cnf), OracleVerdict::Unsat) {
            continue;
        }
        let report = validate(&spec.short_cnf(&cnf), &spec.short_td, false)
            .expect("generated decomposition is valid by construction");
        assert!(
            report.width <= recipe.width,
            "generated width exceeds the target"
        );
        return Ok((cnf, spec));
    }
    Err(GenError::ResamplingExhausted(MAX_ATTEMPTS))
}

fn sample_once(
    recipe: &InstanceRecipe,
    rng: &mut ChaCha8Rng,
) -> Result<(Cnf, LongClauseSpec), GenError> {
    let n = recipe.num_vars;
    let cap = recipe.width as usize + 1;
    let mut deck: Vec<Variable> = (1..=n).map(Variable).collect();
    deck.shuffle(rng);

    // Bags are built root-first; children inherit a subset of the parent bag
    // and add fresh variables, which keeps every variable's bags connected.
    // Capping fresh intake forces enough bags for the long-clause sampler.
    let fresh_cap = if recipe.long_clauses > 0 {
        ((n as usize).div_ceil(3)).clamp(1, cap)
    } else {
        cap
    };
    let mut bags: Vec<(Option<NodeId>, BTreeSet<Variable>)> = Vec::new();
    let mut open: Vec<(usize, u8)> = Vec::new(); // (bag index, child count)
    let root_fresh = rng.gen_range(1..=fresh_cap.min(deck.len()));
    let bag: BTreeSet<Variable> = deck.drain(..root_fresh).collect();
    bags.push((None, bag));
    open.push((0, 0));
    while !deck.is_empty() {
        let slot = rng.gen_range(0..open.len());
        let (parent, children) = open[slot];
        let parent_bag: Vec<Variable> = bags[parent].1.iter().copied().collect();
        let inherit_max = parent_bag.len().min(cap - 1);
        let inherit_ct = rng.gen_range(0..=inherit_max);
        let mut bag: BTreeSet<Variable> = parent_bag
            .choose_multiple(rng, inherit_ct)
            .copied()
            .collect();
        // inherit_ct ≤ cap-1, so at least one fresh slot is always open
        let room = (cap - bag.len()).min(fresh_cap);
        let fresh_ct = rng.gen_range(1..=room.min(deck.len()));
        bag.extend(deck.drain(..fresh_ct));
        bags.push((Some(NodeId(parent as u32 + 1)), bag));
        let new_index = bags.len() - 1;
        if children + 1 >= 2 {
            open.swap_remove(slot);
        } else {
            open[slot].1 += 1;
        }
        open.push((new_index, 0));
    }

    let td = TreeDecomposition::from_bags(
        GraphFlavor::Primal,
        bags.into_iter()
            .map(|(p, b)| (p, b, BTreeSet::new()))
            .collect(),
    )
    .expect("sampled tree is well-formed");

    // With long clauses in play, plant a hidden assignment: every short
    // clause is patched to satisfy it and every long clause is aimed against
    // it, so the contradiction (if the UNSAT filter finds one) necessarily
    // runs through the long clauses.
    let planted: Option<LiteralSet> = (recipe.long_clauses > 0).then(|| {
        LiteralSet::new((1..=n).map(|v| Literal {
            var: Variable(v),
            positive: rng.gen_bool(0.5),
        }))
        .expect("one literal per variable")
    });

    // short clauses live inside single bags
    let num_short = ((recipe.density * n as f64).round() as usize).max(1);
    let mut clauses: Vec<LiteralSet> = Vec::new();
    for _ in 0..num_short {
        let node = td.node(NodeId(rng.gen_range(1..=td.len() as u32)));
        let bag: Vec<Variable> = node.var_bag.iter().copied().collect();
        // units pin variables hard; avoid them in the planted regime so the
        // walk sees real local structure instead of immediate falsifications
        let min_size = if planted.is_some() {
            2.min(bag.len())
        } else {
            1
        };
        let size = rng.gen_range(min_size..=bag.len());
        let mut lits: Vec<Literal> = bag
            .choose_multiple(rng, size)
            .map(|&var| Literal {
                var,
                positive: rng.gen_bool(0.5),
            })
            .collect();
        if let Some(w) = &planted {
            if !lits.iter().any(|l| w.contains(*l)) {
                let i = rng.gen_range(0..lits.len());
                lits[i] = lits[i].negated();
            }
        }
        clauses.push(LiteralSet::new(lits).expect("distinct bag variables"));
    }

    // long clauses take one variable from each of three distinct bags
    let mut long_ids = BTreeSet::new();
    for _ in 0..recipe.long_clauses {
        let mut lits: Option<LiteralSet> = None;
        for _ in 0..20 {
            let picks = rand::seq::index::sample(rng, td.len(), 3.min(td.len()));
            let vars: BTreeSet<Variable> = picks
                .iter()
                .map(|i| {
                    let bag: Vec<Variable> = td
                        .node(NodeId(i as u32 + 1))
                        .var_bag
                        .iter()
                        .copied()
                        .collect();
                    *bag.choose(rng).expect("bags are nonempty")
                })
                .collect();
            if vars.len() >= 3 {
                let w = planted
                    .as_ref()
                    .expect("long clauses imply a planted assignment");
                lits = Some(
                    LiteralSet::new(vars.into_iter().map(|var| Literal {
                        var,
                        positive: !w.sign_of(var).expect("planted assignment is total"),
                    }))
                    .expect("distinct variables"),
                );
                break;
            }
        }
        let Some(lits) = lits else {
            return Err(GenError::BadRecipe(
                "could not sample a long clause across 3 bags".into(),
            ));
        };
        long_ids.insert(ClauseId(clauses.len() as u32 + 1));
        clauses.push(lits);
    }

    let cnf = Cnf::from_literal_sets(n, clauses);
    Ok((
        cnf,
        LongClauseSpec {
            long_ids,
            short_td: td,
        },
    ))
}
