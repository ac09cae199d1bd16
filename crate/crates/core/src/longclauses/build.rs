//! Assembles the refutation out of decision types.
//!
//! Primary nodes (one per reachable type) carry the extension decision tree;
//! each realized extension either closes immediately on an emptied clause,
//! splices in a *gadget* — a bounded-width subrefutation of the clauses the
//! successor type no longer tracks — or continues to the successor's primary
//! node. Terminal types are refuted wholesale by a gadget. Gadget instances
//! are renumbered to compact variables so the one-sided builder can validate
//! them; their proofs are relabeled back before splicing.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{
    chase_transients, classify_pair, count_bound, ext_family, inv_and_phi, succ_star, Classified,
    DecisionType, ExtFamily, LongClauseSpec, LongCtx, SpecError, TypeKey,
};
use crate::cnf::{ClauseId, Cnf, Literal, LiteralSet, Restricted, Variable};
use crate::decomp::{induced_subdecomposition, primal_to_one_sided, TreeDecomposition};
use crate::onesided::{build_onesided_rr, BuildError as OnesidedError};
use crate::oracle::{dpll_unsat, OracleVerdict, UnsatOracle};
use crate::proof::check::check_proof;
use crate::proof::{DagBuilder, NodeLabel, RrDag, RrNodeId};
use crate::report::LongReport;

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("input formula is satisfiable; witness {0}")]
    Satisfiable(LiteralSet),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("internal bug: {0}")]
    InternalBug(String),
}

struct LongBuilder<'a, 'b> {
    ctx: &'a LongCtx<'a>,
    oracle: &'b mut UnsatOracle,
    dag: DagBuilder,
    memo: BTreeMap<TypeKey, RrNodeId>,
    sinks: BTreeMap<ClauseId, RrNodeId>,
    gadget_count: usize,
}

impl LongBuilder<'_, '_> {
    fn sink_for(&mut self, clause: ClauseId) -> RrNodeId {
        if let Some(&id) = self.sinks.get(&clause) {
            return id;
        }
        let id = self.dag.add_sink(clause);
        self.sinks.insert(clause, id);
        id
    }

    /// The proof node of a firm-or-terminal decision type, memoized by its
    /// witness-free key.
    fn primary_node(&mut self, dt: &DecisionType) -> Result<RrNodeId, BuildError> {
        let key = dt.key();
        if let Some(&id) = self.memo.get(&key) {
            return Ok(id);
        }
        let id = if dt.st_len == self.ctx.len() {
            self.terminal_node(dt)?
        } else {
            match ext_family(self.ctx, dt) {
                ExtFamily::Singleton => {
                    return Err(BuildError::InternalBug(
                        "transient type was materialized".into(),
                    ))
                }
                ExtFamily::Tree {
                    members,
                    query_order,
                } => {
                    let (_, phi) = inv_and_phi(self.ctx, dt);
                    self.ext_tree(dt, &phi, &members, &query_order, &mut Vec::new())?
                }
            }
        };
        self.memo.insert(key, id);
        Ok(id)
    }

    /// The whole prefix is processed: φ_DT closes the remaining paths, either
    /// through a directly falsified clause or a gadget refutation.
    fn terminal_node(&mut self, dt: &DecisionType) -> Result<RrNodeId, BuildError> {
        let (_, phi) = inv_and_phi(self.ctx, dt);
        if let Some(c) = phi.clauses.iter().find(|c| c.lits.is_empty()) {
            return Ok(self.sink_for(c.id));
        }
        let residuals: Vec<(ClauseId, LiteralSet)> =
            phi.clauses.iter().map(|c| (c.id, c.lits.clone())).collect();
        if !self.oracle.is_unsat(residuals.iter().map(|(_, r)| r)) {
            return Err(BuildError::InternalBug(
                "terminal residual formula is satisfiable".into(),
            ));
        }
        self.splice_gadget(&residuals)
    }

    /// Realizes the extension family as a decision tree: stop at any branch
    /// that is a member, otherwise query the next variable.
    fn ext_tree(
        &mut self,
        dt: &DecisionType,
        phi: &Cnf,
        members: &BTreeSet<LiteralSet>,
        query_order: &[Variable],
        branch: &mut Vec<Literal>,
    ) -> Result<RrNodeId, BuildError> {
        let assignment = LiteralSet::new(branch.iter().copied()).expect("distinct variables");
        if members.contains(&assignment) {
            return self.resolve_extension(dt, phi, &assignment);
        }
        let Some(&v) = query_order.get(branch.len()) else {
            return Err(BuildError::InternalBug(format!(
                "extension family is not prefix-closed at {assignment}"
            )));
        };
        let node = self.dag.add_decision(v);
        for positive in [true, false] {
            let lit = Literal { var: v, positive };
            branch.push(lit);
            let child = self.ext_tree(dt, phi, members, query_order, branch)?;
            branch.pop();
            self.dag.add_edge(node, child, lit);
        }
        Ok(node)
    }

    /// One realized extension: empty residual → sink; φ_{DT,S*} (what the
    /// successor stops tracking) unsatisfiable → secondary gadget; otherwise
    /// the successor's primary node.
    fn resolve_extension(
        &mut self,
        dt: &DecisionType,
        phi: &Cnf,
        s_ext: &LiteralSet,
    ) -> Result<RrNodeId, BuildError> {
        let mut restricted: Vec<(ClauseId, LiteralSet)> = Vec::new();
        for c in &phi.clauses {
            if let Restricted::Residual(r) = c.lits.restrict(s_ext) {
                if r.is_empty() {
                    return Ok(self.sink_for(c.id));
                }
                restricted.push((c.id, r));
            }
        }
        let next =
            succ_star(self.ctx, dt, s_ext).map_err(|e| BuildError::InternalBug(e.to_string()))?;
        let (_, next_phi) = inv_and_phi(self.ctx, &next);
        let kept: BTreeSet<ClauseId> = next_phi.clauses.iter().map(|c| c.id).collect();
        let dropped: Vec<(ClauseId, LiteralSet)> = restricted
            .into_iter()
            .filter(|(id, _)| !kept.contains(id))
            .collect();
        if !dropped.is_empty() && self.oracle.is_unsat(dropped.iter().map(|(_, r)| r)) {
            return self.splice_gadget(&dropped);
        }
        if !self
            .oracle
            .is_unsat(next_phi.clauses.iter().map(|c| &c.lits))
        {
            return Err(BuildError::InternalBug(format!(
                "successor dichotomy violated after extension {s_ext}: neither part refutable"
            )));
        }
        self.primary_node(&next)
    }

    /// Builds a one-sided refutation of the residual clauses over the induced
    /// short decomposition and splices it in, sinks pointing at the
    /// originating input clauses.
    fn splice_gadget(
        &mut self,
        residuals: &[(ClauseId, LiteralSet)],
    ) -> Result<RrNodeId, BuildError> {
        let gadget = build_gadget(self.ctx, residuals, self.oracle)?;
        let map = self.dag.append_dag(&gadget);
        self.gadget_count += 1;
        Ok(map(gadget.root))
    }
}

fn internal(msg: impl Into<String>) -> BuildError {
    BuildError::InternalBug(msg.into())
}

/// Gadget subproof of a residual CNF: compact-renumber its variables, induce
/// the short decomposition onto them, convert to one-sided, run the one-sided
/// builder, and relabel everything back into the input namespace.
fn build_gadget(
    ctx: &LongCtx,
    residuals: &[(ClauseId, LiteralSet)],
    oracle: &mut UnsatOracle,
) -> Result<RrDag, BuildError> {
    if let Some((id, _)) = residuals.iter().find(|(id, _)| ctx.is_long(*id)) {
        return Err(internal(format!(
            "long clause {id} left a residual for a gadget"
        )));
    }
    let vars: BTreeSet<Variable> = residuals
        .iter()
        .flat_map(|(_, r)| r.vars().collect::<Vec<_>>())
        .collect();
    let fwd: BTreeMap<Variable, Variable> = vars
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, Variable(i as u32 + 1)))
        .collect();
    let back: Vec<Variable> = vars.iter().copied().collect();

    let renumbered = |set: &LiteralSet| {
        LiteralSet::new(set.iter().map(|l| Literal {
            var: fwd[&l.var],
            positive: l.positive,
        }))
        .expect("renumbering keeps variables distinct")
    };
    let gcnf = Cnf::from_literal_sets(
        vars.len() as u32,
        residuals.iter().map(|(_, r)| renumbered(r)),
    );
    let orig_ids: Vec<ClauseId> = residuals.iter().map(|(id, _)| *id).collect();

    let induced = induced_subdecomposition(&ctx.spec.short_td, &vars);
    let induced = renumber_td(&induced, &fwd).map_err(internal)?;
    let onesided_td = primal_to_one_sided(&induced, &gcnf)
        .map_err(|e| internal(format!("gadget conversion failed: {e}")))?;

    let (mut dag, _) = build_onesided_rr(&gcnf, &onesided_td, oracle).map_err(|e| match e {
        OnesidedError::InternalBug(m) => internal(m),
        other => internal(format!("gadget build failed: {other}")),
    })?;

    for label in &mut dag.nodes {
        match label {
            NodeLabel::Decision(v) => *v = back[v.index() as usize - 1],
            NodeLabel::Sink(c) => *c = orig_ids[c.index() as usize - 1],
        }
    }
    for e in &mut dag.edges {
        e.lit.var = back[e.lit.var.index() as usize - 1];
    }
    Ok(dag)
}

/// Rebuilds a decomposition with every bag pushed through the variable map.
fn renumber_td(
    td: &TreeDecomposition,
    fwd: &BTreeMap<Variable, Variable>,
) -> Result<TreeDecomposition, String> {
    let bags = td
        .nodes()
        .iter()
        .map(|n| {
            let mapped: BTreeSet<Variable> = n
                .var_bag
                .iter()
                .filter_map(|v| fwd.get(v).copied())
                .collect();
            (n.parent, mapped, n.clause_bag.clone())
        })
        .collect();
    TreeDecomposition::from_bags(td.flavor, bags).map_err(|e| e.to_string())
}

/// Builds a regular resolution refutation of `cnf` driven by the decision
/// types of `spec`, self-checking the result before returning it.
pub fn build_longclauses_rr(
    cnf: &Cnf,
    spec: &LongClauseSpec,
    oracle: &mut UnsatOracle,
) -> Result<(RrDag, LongReport), BuildError> {
    let ctx = LongCtx::new(cnf, spec)?;
    let calls_before = oracle.calls;
    let bound = count_bound(&ctx);
    let k = ctx.k.min(30);

    let finish = |dag: RrDag,
                  types: usize,
                  gadgets: usize,
                  oracle_calls: u64|
     -> Result<(RrDag, LongReport), BuildError> {
        if let Err(violations) = check_proof(cnf, &dag) {
            return Err(BuildError::InternalBug(format!(
                "self-check rejected the built proof: {}",
                violations[0]
            )));
        }
        let report = LongReport {
            decision_types: types,
            count_bound: bound,
            gadget_count: gadgets,
            node_budget: (types.max(1) as u128) << (3 * k + 6),
            oracle_calls,
            nodes: dag.num_nodes(),
            edges: dag.num_edges(),
        };
        Ok((dag, report))
    };

    if let Some(c) = cnf.empty_clause() {
        let mut b = DagBuilder::new();
        let root = b.add_sink(c);
        let dag = b.finish(root);
        return finish(dag, 0, 0, oracle.calls - calls_before);
    }
    if !oracle.is_unsat(cnf.clauses.iter().map(|c| &c.lits)) {
        let OracleVerdict::Sat(witness) = dpll_unsat(cnf) else {
            return Err(BuildError::InternalBug(
                "oracle and solver disagree on satisfiability".into(),
            ));
        };
        return Err(BuildError::Satisfiable(witness));
    }

    let root_type = match classify_pair(&ctx, 0, &LiteralSet::empty()) {
        Classified::Interesting(dt) => dt,
        Classified::NotInteresting(r) => {
            return Err(BuildError::InternalBug(format!(
                "root type not interesting: {r}"
            )))
        }
    };
    let root_type =
        chase_transients(&ctx, root_type).map_err(|e| BuildError::InternalBug(e.to_string()))?;

    let mut builder = LongBuilder {
        ctx: &ctx,
        oracle,
        dag: DagBuilder::new(),
        memo: BTreeMap::new(),
        sinks: BTreeMap::new(),
        gadget_count: 0,
    };
    let root = builder.primary_node(&root_type)?;
    let types = builder.memo.len();
    let gadgets = builder.gadget_count;
    let dag = builder.dag.finish(root);
    let calls = builder.oracle.calls - calls_before;
    finish(dag, types, gadgets, calls)
}
