//! Versal deformation-ring presentations for cover skeletons, relation
//! checking at the level of rational exponents, singularity reporting,
//! and the explicit smoothing algorithm.
//!
//! All exponents are normalized so the base uniformizer has formal
//! valuation 1 and `p` itself has valuation 1; an assignment
//! `g_v = pi^{lambda_v}`, `thickness_e = pi^{eps_e}` is checked purely
//! as identities of rationals.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover_skeleton::{check_admissible, CoverSkeleton};
use crate::hurwitz_graph::{level_function, reduce, GraphError};
use crate::valuation_ring::{lcm, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeformError {
    #[error("r_0 = {0} does not divide every finite r(v)")]
    BadR0(Rational),
    #[error("skeleton is not admissible")]
    NotAdmissible,
    #[error("edge {0} has equal exponent at both ends (cannot smooth)")]
    ZeroJump(String),
    #[error("base node {0} ties edges with incompatible exponents")]
    IncompatibleBaseNodes(String),
    #[error("vertex {0} has finite r different from its level; no monomial smoothing exists")]
    LevelMismatch(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One relation of the presentation, multiplicative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// `g_v = p^{r}` for finite `r(v)`.
    VertexValue { vertex: String, r: Rational },
    /// `g_{o(e)} * w_e^{m} = g_{t(e)}`.
    EdgeChain {
        edge: String,
        origin: String,
        target: String,
        m: i64,
    },
    /// `w_a^{n_a} = w_b^{n_b}` for two nodes over the same base node.
    BaseTie {
        edge_a: String,
        n_a: u64,
        edge_b: String,
        n_b: u64,
    },
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fn pow(var: &str, e: i64) -> String {
            if e == 1 {
                var.to_string()
            } else {
                format!("{var}^{e}")
            }
        }
        match self {
            Relation::VertexValue { vertex, r } => {
                if r.is_zero() {
                    write!(f, "g[{vertex}] = 1")
                } else {
                    write!(f, "g[{vertex}] = p^{r}")
                }
            }
            Relation::EdgeChain {
                edge,
                origin,
                target,
                m,
            } => {
                if *m == 0 {
                    write!(f, "g[{origin}] = g[{target}]")
                } else {
                    write!(f, "g[{origin}]*{} = g[{target}]", pow(&format!("w[{edge}]"), *m))
                }
            }
            Relation::BaseTie {
                edge_a,
                n_a,
                edge_b,
                n_b,
            } => write!(
                f,
                "{} = {}",
                pow(&format!("w[{edge_a}]"), *n_a as i64),
                pow(&format!("w[{edge_b}]"), *n_b as i64)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    /// Human-readable base ring description.
    pub base: String,
    pub r0: Rational,
    /// `g_v`, one per vertex, ordered by id.
    pub vertex_vars: Vec<String>,
    /// `w_e`, one per positive edge, ordered by id.
    pub edge_vars: Vec<String>,
    pub relations: Vec<Relation>,
}

/// Realization of a presentation by powers of a uniformizer: `g_v =
/// pi^{lambda_v}` and thickness `pi^{eps_e}` per edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentAssignment {
    pub lambda: BTreeMap<String, Rational>,
    pub eps: BTreeMap<String, Rational>,
    /// Required root extension: lcm of all exponent denominators.
    pub ram: u64,
}

/// Emit the presentation of the versal deformation ring: one `g_v` per
/// vertex, one `w_e` per positive edge, vertex-value relations for
/// finite `r`, chain relations along edges, and base-node ties.
/// Ordering is deterministic (vertices, then edges, by id).
pub fn emit_presentation(
    sk: &CoverSkeleton,
    r0: &Rational,
) -> Result<Presentation, DeformError> {
    for v in &sk.graph.vertices {
        if !v.r.is_infinite() && !v.r.is_zero() && !v.r.is_integer_multiple_of(r0) {
            return Err(DeformError::BadR0(*r0));
        }
    }
    let mut vertices: Vec<_> = sk.graph.vertices.clone();
    vertices.sort_by(|a, b| a.id.cmp(&b.id));
    let mut edges: Vec<_> = sk.graph.edges.clone();
    edges.sort_by(|a, b| a.id.cmp(&b.id));

    let mut relations = vec![];
    for v in &vertices {
        if !v.r.is_infinite() {
            relations.push(Relation::VertexValue {
                vertex: v.id.clone(),
                r: v.r,
            });
        }
    }
    for e in &edges {
        relations.push(Relation::EdgeChain {
            edge: e.id.clone(),
            origin: e.from.clone(),
            target: e.to.clone(),
            m: e.m,
        });
    }
    let mut groups: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for e in &edges {
        groups
            .entry(sk.edge_data[&e.id].base_node.as_str())
            .or_default()
            .push(e.id.as_str());
    }
    for ids in groups.values() {
        for w in ids.windows(2) {
            relations.push(Relation::BaseTie {
                edge_a: w[0].to_string(),
                n_a: sk.edge_data[w[0]].n_e,
                edge_b: w[1].to_string(),
                n_b: sk.edge_data[w[1]].n_e,
            });
        }
    }
    let base = match sk.graph.char_mode {
        crate::hurwitz_graph::CharMode::CharP(p) => {
            format!("W(k)[p^{r0}] (p = {p})")
        }
        crate::hurwitz_graph::CharMode::Char0 => "k".to_string(),
    };
    Ok(Presentation {
        base,
        r0: *r0,
        vertex_vars: vertices.iter().map(|v| v.id.clone()).collect(),
        edge_vars: edges.iter().map(|e| e.id.clone()).collect(),
        relations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub failures: Vec<String>,
}

/// Check the assignment against every relation as an identity of
/// rational exponents, plus the smoothing condition `eps > 0`.
pub fn verify_assignment(pres: &Presentation, asg: &ExponentAssignment) -> VerifyReport {
    let mut failures = vec![];
    for v in &pres.vertex_vars {
        if !asg.lambda.contains_key(v) {
            failures.push(format!("no lambda for vertex {v}"));
        }
    }
    for e in &pres.edge_vars {
        match asg.eps.get(e) {
            None => failures.push(format!("no eps for edge {e}")),
            Some(eps) => {
                if !(*eps > Rational::zero()) || eps.is_infinite() {
                    failures.push(format!("edge {e}: eps = {eps} not smoothing (must be > 0)"));
                }
            }
        }
    }
    if !failures.is_empty() {
        return VerifyReport {
            pass: false,
            failures,
        };
    }
    for rel in &pres.relations {
        match rel {
            Relation::VertexValue { vertex, r } => {
                let lam = asg.lambda[vertex];
                if lam != *r {
                    failures.push(format!("{rel}: lambda[{vertex}] = {lam} != {r}"));
                }
            }
            Relation::EdgeChain {
                edge,
                origin,
                target,
                m,
            } => {
                let lhs = asg.lambda[origin].add(&asg.eps[edge].mul_int(*m));
                if lhs != asg.lambda[target] {
                    failures.push(format!(
                        "{rel}: {} + {}*{} != {}",
                        asg.lambda[origin], m, asg.eps[edge], asg.lambda[target]
                    ));
                }
            }
            Relation::BaseTie {
                edge_a,
                n_a,
                edge_b,
                n_b,
            } => {
                let lhs = asg.eps[edge_a].mul_int(*n_a as i64);
                let rhs = asg.eps[edge_b].mul_int(*n_b as i64);
                if lhs != rhs {
                    failures.push(format!("{rel}: {lhs} != {rhs}"));
                }
            }
        }
    }
    VerifyReport {
        pass: failures.is_empty(),
        failures,
    }
}

fn denominator_lcm(acc: u64, r: &Rational) -> u64 {
    match r.parts() {
        Some((_, den)) => lcm(acc as i64, den) as u64,
        None => acc,
    }
}

/// The density algorithm: produce an exponent assignment with every
/// thickness nonzero. Infinite regime (some `r = inf`): `lambda` is the
/// level function of the reduced graph and `eps = jump / m`. Finite
/// regime: `lambda = r` and `eps = (r(t) - r(o)) / m`. Contracted
/// (`m = 0`) edges take the exponent their base-node tie dictates, or 1
/// when unconstrained.
pub fn smooth_lift(sk: &CoverSkeleton) -> Result<ExponentAssignment, DeformError> {
    if !check_admissible(sk).pass {
        return Err(DeformError::NotAdmissible);
    }
    let (red, merge) = reduce(&sk.graph);
    let infinite = sk.graph.vertices.iter().any(|v| v.r.is_infinite());
    let mut lambda: BTreeMap<String, Rational> = BTreeMap::new();
    let mut eps: BTreeMap<String, Rational> = BTreeMap::new();

    if infinite {
        let lf = level_function(&red)?;
        for v in &sk.graph.vertices {
            let lv = Rational::integer(lf.levels[&merge[&v.id]] as i64);
            if !v.r.is_infinite() && v.r != lv {
                // g_v = p^{r(v)} forces lambda = r(v), but the chain
                // relations force lambda = level; no monomial
                // assignment satisfies both.
                return Err(DeformError::LevelMismatch(v.id.clone()));
            }
            lambda.insert(v.id.clone(), lv);
        }
        for e in &red.edges {
            let jump = lf.levels[&e.to] as i64 - lf.levels[&e.from] as i64;
            eps.insert(e.id.clone(), Rational::new(jump, e.m));
        }
    } else {
        for v in &sk.graph.vertices {
            lambda.insert(v.id.clone(), v.r);
        }
        for e in &red.edges {
            let jump = sk.graph.r_of(&e.to).unwrap().sub(&sk.graph.r_of(&e.from).unwrap());
            if jump.is_zero() {
                return Err(DeformError::ZeroJump(e.id.clone()));
            }
            eps.insert(e.id.clone(), jump.div_int(e.m));
        }
    }

    // Base-node ties: reduced edges arrive with eps fixed; contracted
    // edges in the same group must match n_e * eps_e across the group.
    let mut groups: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for e in &sk.graph.edges {
        groups
            .entry(sk.edge_data[&e.id].base_node.as_str())
            .or_default()
            .push(e.id.as_str());
    }
    for (base, ids) in &groups {
        let mut tie: Option<Rational> = None;
        for id in ids {
            if let Some(e) = eps.get(*id) {
                let val = e.mul_int(sk.edge_data[*id].n_e as i64);
                match tie {
                    None => tie = Some(val),
                    Some(t) if t == val => {}
                    Some(_) => return Err(DeformError::IncompatibleBaseNodes(base.to_string())),
                }
            }
        }
        let free: Vec<&str> = ids.iter().filter(|id| !eps.contains_key(**id)).copied().collect();
        if free.is_empty() {
            continue;
        }
        let tie = tie.unwrap_or_else(|| {
            // all-contracted group: pick the lcm of the node degrees so
            // every exponent is a positive integer (1 for singletons).
            let l = free
                .iter()
                .fold(1i64, |acc, id| lcm(acc, sk.edge_data[*id].n_e as i64));
            Rational::integer(l)
        });
        for id in free {
            eps.insert(id.to_string(), tie.div_int(sk.edge_data[id].n_e as i64));
        }
    }

    let mut ram = 1u64;
    for r in lambda.values().chain(eps.values()) {
        ram = denominator_lcm(ram, r);
    }
    Ok(ExponentAssignment { lambda, eps, ram })
}

/// Residual relation after eliminating the `g_v`: a monomial identity
/// `prod vars^exp = p^{p_exp}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    pub vars: BTreeMap<String, i64>,
    pub p_exp: Rational,
    pub class: ResidualClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResidualClass {
    /// Some variable appears with exponent +-1: substitutable, smooth.
    Eliminable,
    /// Multi-variable monomial with all exponents of size >= 2.
    Singular,
    /// Variable-free relation `1 = p^q`, `q != 0`.
    Inconsistent,
}

impl std::fmt::Display for Residual {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut lhs = vec![];
        let mut rhs = vec![];
        for (v, &e) in &self.vars {
            let s = if e.abs() == 1 {
                format!("w[{v}]")
            } else {
                format!("w[{v}]^{}", e.abs())
            };
            if e > 0 {
                lhs.push(s);
            } else {
                rhs.push(s);
            }
        }
        if !self.p_exp.is_zero() {
            rhs.push(format!("p^{}", self.p_exp));
        }
        let fmt_side = |side: &[String]| {
            if side.is_empty() {
                "1".to_string()
            } else {
                side.join("*")
            }
        };
        write!(f, "{} = {}", fmt_side(&lhs), fmt_side(&rhs))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularityReport {
    pub formally_smooth: bool,
    /// Edges whose variable is pinned to a power of `p` (regular, at
    /// worst after a root extension); not residual relations.
    pub determined: Vec<String>,
    pub residuals: Vec<Residual>,
}

#[derive(Debug, Clone)]
struct LinRel {
    vars: BTreeMap<String, i64>,
    p_exp: Rational,
}

impl LinRel {
    fn subtract(&mut self, other: &LinRel, k: i64) {
        for (v, &e) in &other.vars {
            let entry = self.vars.entry(v.clone()).or_insert(0);
            *entry -= k * e;
            if *entry == 0 {
                self.vars.remove(v);
            }
        }
        self.p_exp = self.p_exp.sub(&other.p_exp.mul_int(k));
    }
}

/// Eliminate the `g_v` through the relations where they occur with unit
/// exponent, then classify what remains among the `w_e`.
pub fn singularity_report(pres: &Presentation) -> SingularityReport {
    // Multiplicative normal form: prod vars^e = p^q per relation, with
    // g-variables prefixed "g:" and edge variables "w:".
    let mut rels: Vec<LinRel> = pres
        .relations
        .iter()
        .map(|rel| {
            let mut vars = BTreeMap::new();
            let mut p_exp = Rational::zero();
            match rel {
                Relation::VertexValue { vertex, r } => {
                    vars.insert(format!("g:{vertex}"), 1);
                    p_exp = *r;
                }
                Relation::EdgeChain {
                    edge,
                    origin,
                    target,
                    m,
                } => {
                    *vars.entry(format!("g:{origin}")).or_insert(0) += 1;
                    *vars.entry(format!("g:{target}")).or_insert(0) -= 1;
                    if *m != 0 {
                        vars.insert(format!("w:{edge}"), *m);
                    }
                    vars.retain(|_, e| *e != 0);
                }
                Relation::BaseTie {
                    edge_a,
                    n_a,
                    edge_b,
                    n_b,
                } => {
                    *vars.entry(format!("w:{edge_a}")).or_insert(0) += *n_a as i64;
                    *vars.entry(format!("w:{edge_b}")).or_insert(0) -= *n_b as i64;
                    vars.retain(|_, e| *e != 0);
                }
            }
            LinRel { vars, p_exp }
        })
        .collect();

    // Pass 1: eliminate every g that occurs with exponent +-1 somewhere.
    loop {
        let pivot = rels.iter().enumerate().find_map(|(i, r)| {
            r.vars
                .iter()
                .find(|(v, e)| v.starts_with("g:") && e.abs() == 1)
                .map(|(v, &e)| (i, v.clone(), e))
        });
        let Some((pi, pv, pe)) = pivot else { break };
        let pivot_rel = rels.remove(pi);
        for r in rels.iter_mut() {
            if let Some(&e) = r.vars.get(&pv) {
                // subtract (e / pe) copies; pe is +-1.
                r.subtract(&pivot_rel, e * pe);
            }
        }
    }

    // Pass 2: single-variable relations pin their w; substitute where
    // the pinned exponent divides.
    let mut determined: Vec<String> = vec![];
    loop {
        let idx = rels.iter().position(|r| {
            r.vars.len() == 1 && r.vars.keys().next().unwrap().starts_with("w:")
        });
        let Some(i) = idx else { break };
        let rel = rels.remove(i);
        let (var, &k) = rel.vars.iter().next().unwrap();
        let var = var.clone();
        determined.push(var.trim_start_matches("w:").to_string());
        for r in rels.iter_mut() {
            if let Some(&e) = r.vars.get(&var) {
                if e % k == 0 {
                    r.vars.remove(&var);
                    r.p_exp = r.p_exp.add(&rel.p_exp.mul_int(e / k));
                }
            }
        }
    }
    determined.sort();
    determined.dedup();

    // Pass 3: a relation with a variable alone on its side with
    // exponent +-1 defines that variable as a monomial in the others:
    // a genuine substitution, so the relation is harmless (Eliminable).
    // Substituting is skipped when it would cancel a common monomial
    // factor between the two sides: that cancellation is a division,
    // invalid at the closed point, and the uncancelled relation (e.g.
    // w^2 = w^3 from w0^2 = w1^3 with w0 = w1) is singular.
    let mut residuals: Vec<Residual> = vec![];
    rels.retain(|r| !(r.vars.is_empty() && r.p_exp.is_zero()));
    loop {
        let pivot = rels.iter().enumerate().find_map(|(i, r)| {
            r.vars
                .iter()
                .find(|(_, &e)| {
                    e.abs() == 1 && r.vars.values().all(|&o| o == e || o.signum() != e.signum())
                })
                .map(|(v, &e)| (i, v.clone(), e))
        });
        let Some((pi, pv, pe)) = pivot else { break };
        let pivot_rel = rels.remove(pi);
        for r in rels.iter_mut() {
            let Some(&e) = r.vars.get(&pv) else { continue };
            let k = e * pe;
            // taint check: does any non-pivot contribution push an
            // existing exponent toward (or past) zero?
            let taints = pivot_rel.vars.iter().any(|(u, &pu)| {
                *u != pv && {
                    let old = r.vars.get(u).copied().unwrap_or(0);
                    old != 0 && (old - k * pu).signum() != old.signum()
                        || old != 0 && (old - k * pu).abs() < old.abs()
                }
            });
            if !taints {
                r.subtract(&pivot_rel, k);
            }
        }
        residuals.push(Residual {
            vars: pivot_rel
                .vars
                .iter()
                .map(|(v, &e)| (v.trim_start_matches("w:").to_string(), e))
                .collect(),
            p_exp: pivot_rel.p_exp,
            class: ResidualClass::Eliminable,
        });
        rels.retain(|r| !(r.vars.is_empty() && r.p_exp.is_zero()));
    }
    for r in rels {
        let class = if r.vars.is_empty() {
            ResidualClass::Inconsistent
        } else {
            ResidualClass::Singular
        };
        residuals.push(Residual {
            vars: r
                .vars
                .iter()
                .map(|(v, &e)| (v.trim_start_matches("w:").to_string(), e))
                .collect(),
            p_exp: r.p_exp,
            class,
        });
    }
    let formally_smooth = residuals
        .iter()
        .all(|r| r.class == ResidualClass::Eliminable);
    SingularityReport {
        formally_smooth,
        determined,
        residuals,
    }
}
