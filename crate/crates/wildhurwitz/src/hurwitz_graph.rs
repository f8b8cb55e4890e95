//! Directed-graph carrier of the Hurwitz data `(m, r)`: validation of
//! the six axioms, contraction of the `m = 0` edges, goodness of the
//! reduced graph, and the level function.
//!
//! Only positive edges are stored; the opposite edge `ē` with
//! `m(ē) = -m(e)` is implicit, which makes axiom 1 structural.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::valuation_ring::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph is not reduced: edge {0} has m = 0")]
    NotReduced(String),
    #[error("graph is not good (directed cycle or self-loop)")]
    NotGood,
    #[error("malformed graph: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharMode {
    CharP(u64),
    Char0,
}

impl Serialize for CharMode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CharMode::CharP(p) => s.serialize_str(&format!("p={p}")),
            CharMode::Char0 => s.serialize_str("0"),
        }
    }
}

impl<'de> Deserialize<'de> for CharMode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "0" {
            return Ok(CharMode::Char0);
        }
        if let Some(rest) = s.strip_prefix("p=") {
            if let Ok(p) = rest.parse::<u64>() {
                return Ok(CharMode::CharP(p));
            }
        }
        Err(serde::de::Error::custom(format!(
            "expected \"0\" or \"p=<prime>\", got {s:?}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    pub r: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub from: String,
    pub to: String,
    pub m: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HurwitzGraph {
    #[serde(rename = "char")]
    pub char_mode: CharMode,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// 0 for structural defects, 1..=6 for the Hurwitz axioms.
    pub axiom: u8,
    pub subject: String,
    pub detail: String,
}

impl HurwitzGraph {
    pub fn r_of(&self, v: &str) -> Option<Rational> {
        self.vertices.iter().find(|x| x.id == v).map(|x| x.r)
    }

    fn vertex_ids(&self) -> BTreeSet<&str> {
        self.vertices.iter().map(|v| v.id.as_str()).collect()
    }
}

/// Check the six axioms plus structural well-formedness. An empty list
/// means the graph is valid.
pub fn validate(g: &HurwitzGraph) -> Vec<Violation> {
    let mut out: Vec<Violation> = vec![];
    fn push(out: &mut Vec<Violation>, axiom: u8, subject: &str, detail: String) {
        out.push(Violation {
            axiom,
            subject: subject.to_string(),
            detail,
        })
    }

    let ids = g.vertex_ids();
    if ids.len() != g.vertices.len() {
        push(&mut out, 0, "graph", "duplicate vertex id".into());
    }
    let mut edge_ids = BTreeSet::new();
    for e in &g.edges {
        if !edge_ids.insert(e.id.as_str()) {
            push(&mut out, 0, &e.id, "duplicate edge id".into());
        }
        for end in [&e.from, &e.to] {
            if !ids.contains(end.as_str()) {
                push(&mut out, 0, &e.id, format!("unknown vertex {end}"));
            }
        }
    }
    if !out.is_empty() {
        return out;
    }

    // Axiom 1 (m(ē) = -m(e)) holds by representation. Axiom 2:
    // r(o(e)) <= r(t(e)), with equality when m(e) = 0.
    for e in &g.edges {
        let ro = g.r_of(&e.from).unwrap();
        let rt = g.r_of(&e.to).unwrap();
        if ro > rt {
            push(&mut out, 2, &e.id, format!("r(o) = {ro} > {rt} = r(t)"));
        } else if e.m == 0 && ro != rt {
            push(&mut out, 2, &e.id, format!("m = 0 but r(o) = {ro} != {rt} = r(t)"));
        }
    }

    // Axiom 3: Im r inside [0, 1], or inside {0, inf}, whole graph.
    let in_unit = |r: Rational| !r.is_infinite() && r >= Rational::zero() && r <= Rational::integer(1);
    let in_binary = |r: Rational| r.is_infinite() || r.is_zero();
    if !g.vertices.iter().all(|v| in_unit(v.r)) && !g.vertices.iter().all(|v| in_binary(v.r)) {
        let bad = g
            .vertices
            .iter()
            .find(|v| !in_unit(v.r))
            .map(|v| v.id.clone())
            .unwrap_or_default();
        push(&mut out, 3, &bad, "Im r is neither inside [0,1] nor inside {0,inf}".into());
    }

    for e in &g.edges {
        // Axiom 4: m >= 0 on positive edges.
        if e.m < 0 {
            push(&mut out, 4, &e.id, format!("m = {} < 0 on a positive edge", e.m));
        }
        match g.char_mode {
            // Axiom 5: in char p, m is 0 or prime to p.
            CharMode::CharP(p) => {
                if e.m != 0 && e.m.unsigned_abs() % p == 0 {
                    push(&mut out, 5, &e.id, format!("m = {} is a nonzero multiple of p = {p}", e.m));
                }
            }
            // Axiom 6: in char 0, m = 0 everywhere.
            CharMode::Char0 => {
                if e.m != 0 {
                    push(&mut out, 6, &e.id, format!("char 0 requires m = 0, got {}", e.m));
                }
            }
        }
    }
    if let CharMode::Char0 = g.char_mode {
        for v in &g.vertices {
            if !v.r.is_zero() {
                push(&mut out, 6, &v.id, format!("char 0 requires r = 0, got {}", v.r));
            }
        }
    }
    out
}

struct UnionFind {
    parent: BTreeMap<String, String>,
}

impl UnionFind {
    fn new<'a>(ids: impl Iterator<Item = &'a str>) -> Self {
        UnionFind {
            parent: ids.map(|i| (i.to_string(), i.to_string())).collect(),
        }
    }

    fn find(&mut self, x: &str) -> String {
        let p = self.parent[x].clone();
        if p == x {
            return p;
        }
        let root = self.find(&p);
        self.parent.insert(x.to_string(), root.clone());
        root
    }

    fn union(&mut self, a: &str, b: &str) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return;
        }
        // Lexicographically smallest id represents the class.
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent.insert(drop, keep);
    }
}

/// Contract every `m = 0` edge. Returns the reduced graph and the map
/// from original vertex ids to their merged representative. Self-loops
/// created by the contraction (necessarily m = 0) are deleted.
pub fn reduce(g: &HurwitzGraph) -> (HurwitzGraph, BTreeMap<String, String>) {
    let mut uf = UnionFind::new(g.vertices.iter().map(|v| v.id.as_str()));
    for e in &g.edges {
        if e.m == 0 {
            uf.union(&e.from, &e.to);
        }
    }
    let merge: BTreeMap<String, String> = g
        .vertices
        .iter()
        .map(|v| (v.id.clone(), uf.find(&v.id)))
        .collect();
    let mut vertices: Vec<Vertex> = g
        .vertices
        .iter()
        .filter(|v| merge[&v.id] == v.id)
        .cloned()
        .collect();
    vertices.sort_by(|a, b| a.id.cmp(&b.id));
    let edges: Vec<Edge> = g
        .edges
        .iter()
        .filter(|e| e.m != 0)
        .map(|e| Edge {
            id: e.id.clone(),
            from: merge[&e.from].clone(),
            to: merge[&e.to].clone(),
            m: e.m,
        })
        .collect();
    (
        HurwitzGraph {
            char_mode: g.char_mode,
            vertices,
            edges,
        },
        merge,
    )
}

/// True when `t(e) > o(e)` extends to a partial order: the directed
/// graph on positive edges has no self-loop and no directed cycle.
pub fn is_good(g: &HurwitzGraph) -> Result<bool, GraphError> {
    if let Some(e) = g.edges.iter().find(|e| e.m == 0) {
        return Err(GraphError::NotReduced(e.id.clone()));
    }
    if g.edges.iter().any(|e| e.from == e.to) {
        return Ok(false);
    }
    Ok(topo_order(g).is_some())
}

/// Kahn's algorithm; `None` when a directed cycle remains.
fn topo_order(g: &HurwitzGraph) -> Option<Vec<String>> {
    let mut indeg: BTreeMap<&str, usize> =
        g.vertices.iter().map(|v| (v.id.as_str(), 0)).collect();
    for e in &g.edges {
        *indeg.get_mut(e.to.as_str())? += 1;
    }
    let mut queue: Vec<&str> = indeg
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(&v, _)| v)
        .collect();
    let mut order = vec![];
    while let Some(v) = queue.pop() {
        order.push(v.to_string());
        for e in &g.edges {
            if e.from == v {
                let d = indeg.get_mut(e.to.as_str()).unwrap();
                *d -= 1;
                if *d == 0 {
                    queue.push(e.to.as_str());
                }
            }
        }
    }
    (order.len() == g.vertices.len()).then_some(order)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelFunction {
    pub levels: BTreeMap<String, u64>,
}

/// `l(v)` = length of the longest directed path ending at `v`; zero
/// exactly on the minimal vertices, and `l(t(e)) > l(o(e))` on every
/// edge of the reduced graph.
pub fn level_function(g: &HurwitzGraph) -> Result<LevelFunction, GraphError> {
    if !is_good(g)? {
        return Err(GraphError::NotGood);
    }
    let order = topo_order(g).expect("good graph is acyclic");
    let mut levels: BTreeMap<String, u64> = g.vertices.iter().map(|v| (v.id.clone(), 0)).collect();
    for v in order {
        for e in &g.edges {
            if e.from == v {
                let cand = levels[&v] + 1;
                let tgt = levels.get_mut(&e.to).unwrap();
                if cand > *tgt {
                    *tgt = cand;
                }
            }
        }
    }
    Ok(LevelFunction { levels })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(id: &str, r: Rational) -> Vertex {
        Vertex {
            id: id.into(),
            r,
        }
    }

    fn e(id: &str, from: &str, to: &str, m: i64) -> Edge {
        Edge {
            id: id.into(),
            from: from.into(),
            to: to.into(),
            m,
        }
    }

    fn chain(ms: &[i64]) -> HurwitzGraph {
        let names = ["A", "B", "C", "D", "E"];
        HurwitzGraph {
            char_mode: CharMode::CharP(3),
            vertices: (0..=ms.len())
                .map(|i| v(names[i], Rational::new(i as i64, ms.len() as i64 + 1)))
                .collect(),
            edges: ms
                .iter()
                .enumerate()
                .map(|(i, &m)| e(&format!("e{i}"), names[i], names[i + 1], m))
                .collect(),
        }
    }

    #[test]
    fn validate_cases() {
        let trivial = HurwitzGraph {
            char_mode: CharMode::CharP(3),
            vertices: vec![v("A", Rational::zero())],
            edges: vec![],
        };
        assert!(validate(&trivial).is_empty());

        let mut g = chain(&[3]);
        let viols = validate(&g);
        assert_eq!(viols.len(), 1);
        assert_eq!(viols[0].axiom, 5);

        g = chain(&[1]);
        g.vertices[0].r = Rational::integer(1);
        g.vertices[1].r = Rational::zero();
        assert!(validate(&g).iter().any(|x| x.axiom == 2));

        // m = 0 requires equal r.
        g = chain(&[0]);
        assert!(validate(&g).iter().any(|x| x.axiom == 2));

        // mixed image {1/2, inf} breaks axiom 3.
        g = chain(&[1]);
        g.vertices[0].r = Rational::new(1, 2);
        g.vertices[1].r = Rational::Infinity;
        assert!(validate(&g).iter().any(|x| x.axiom == 3));

        // {0, inf} image is fine.
        g.vertices[0].r = Rational::zero();
        assert!(validate(&g).is_empty());

        // char 0 demands m = 0, r = 0.
        g = chain(&[1]);
        g.char_mode = CharMode::Char0;
        assert!(validate(&g).iter().any(|x| x.axiom == 6));
    }

    #[test]
    fn reduce_cases() {
        // all m = 0: everything merges, no edges.
        let mut g = chain(&[0, 0]);
        for vv in g.vertices.iter_mut() {
            vv.r = Rational::zero();
        }
        let (red, merge) = reduce(&g);
        assert!(red.edges.is_empty());
        assert_eq!(red.vertices.len(), 1);
        assert_eq!(red.vertices[0].id, "A");
        assert!(merge.values().all(|x| x == "A"));

        // chain A->B->C, m = (0,2): A,B merge; edge A->C with m=2.
        let mut g = chain(&[0, 2]);
        g.vertices[0].r = Rational::zero();
        g.vertices[1].r = Rational::zero();
        let (red, merge) = reduce(&g);
        assert_eq!(red.vertices.len(), 2);
        assert_eq!(red.edges.len(), 1);
        assert_eq!((red.edges[0].from.as_str(), red.edges[0].to.as_str()), ("A", "C"));
        assert_eq!(red.edges[0].m, 2);
        assert_eq!(merge["B"], "A");

        // m=0 edge between already-merged vertices drops silently.
        let g = HurwitzGraph {
            char_mode: CharMode::CharP(3),
            vertices: vec![v("A", Rational::zero()), v("B", Rational::zero())],
            edges: vec![e("e0", "A", "B", 0), e("e1", "A", "B", 0)],
        };
        let (red, _) = reduce(&g);
        assert_eq!(red.vertices.len(), 1);
        assert!(red.edges.is_empty());
    }

    #[test]
    fn reduce_idempotent_and_preserves_validity() {
        let g = chain(&[0, 2, 0, 1]);
        let mut g = g;
        // make r constant on the contracted pairs so g is valid.
        g.vertices[0].r = Rational::zero();
        g.vertices[1].r = Rational::zero();
        g.vertices[2].r = Rational::new(1, 2);
        g.vertices[3].r = Rational::new(1, 2);
        g.vertices[4].r = Rational::integer(1);
        assert!(validate(&g).is_empty());
        let (red, _) = reduce(&g);
        assert!(validate(&red).is_empty());
        let (red2, _) = reduce(&red);
        assert_eq!(red, red2);
    }

    #[test]
    fn goodness_cases() {
        assert!(is_good(&reduce(&chain(&[1, 1])).0).unwrap());

        let cyc = HurwitzGraph {
            char_mode: CharMode::CharP(3),
            vertices: vec![v("A", Rational::zero()), v("B", Rational::zero())],
            edges: vec![e("e0", "A", "B", 1), e("e1", "B", "A", 1)],
        };
        assert!(!is_good(&cyc).unwrap());

        let lp = HurwitzGraph {
            char_mode: CharMode::CharP(3),
            vertices: vec![v("A", Rational::zero())],
            edges: vec![e("e0", "A", "A", 1)],
        };
        assert!(!is_good(&lp).unwrap());

        assert!(matches!(
            is_good(&chain(&[0])),
            Err(GraphError::NotReduced(_))
        ));
    }

    #[test]
    fn level_cases() {
        let l = level_function(&chain(&[1, 1])).unwrap();
        assert_eq!(l.levels["A"], 0);
        assert_eq!(l.levels["B"], 1);
        assert_eq!(l.levels["C"], 2);

        let diamond = HurwitzGraph {
            char_mode: CharMode::CharP(3),
            vertices: ["A", "B", "C", "D"]
                .iter()
                .map(|n| v(n, Rational::zero()))
                .collect(),
            edges: vec![
                e("e0", "A", "B", 1),
                e("e1", "A", "C", 1),
                e("e2", "B", "D", 1),
                e("e3", "C", "D", 1),
            ],
        };
        let l = level_function(&diamond).unwrap();
        assert_eq!(
            [l.levels["A"], l.levels["B"], l.levels["C"], l.levels["D"]],
            [0, 1, 1, 2]
        );

        let single = HurwitzGraph {
            char_mode: CharMode::CharP(3),
            vertices: vec![v("A", Rational::zero())],
            edges: vec![],
        };
        assert_eq!(level_function(&single).unwrap().levels["A"], 0);
    }

    #[test]
    fn level_function_satisfies_contract() {
        let g = reduce(&chain(&[1, 2, 1, 2])).0;
        let l = level_function(&g).unwrap();
        for ed in &g.edges {
            assert!(l.levels[&ed.to] > l.levels[&ed.from]);
        }
        // zero exactly on minimal vertices.
        for vx in &g.vertices {
            let minimal = g.edges.iter().all(|ed| ed.to != vx.id);
            assert_eq!(l.levels[&vx.id] == 0, minimal);
        }
    }

    /// Oracle: goodness is equivalent to the existence of any level map
    /// with range bounded by |V|, found by exhaustive search.
    fn brute_force_has_level(nv: usize, edges: &[(usize, usize)]) -> bool {
        let mut assign = vec![0usize; nv];
        loop {
            if edges.iter().all(|&(o, t)| assign[t] > assign[o]) {
                return true;
            }
            let mut i = 0;
            loop {
                if i == nv {
                    return false;
                }
                assign[i] += 1;
                if assign[i] < nv {
                    break;
                }
                assign[i] = 0;
                i += 1;
            }
        }
    }

    fn graph_from_pairs(nv: usize, edges: &[(usize, usize)]) -> HurwitzGraph {
        HurwitzGraph {
            char_mode: CharMode::CharP(3),
            vertices: (0..nv)
                .map(|i| v(&format!("v{i}"), Rational::zero()))
                .collect(),
            edges: edges
                .iter()
                .enumerate()
                .map(|(k, &(o, t))| e(&format!("e{k}"), &format!("v{o}"), &format!("v{t}"), 1))
                .collect(),
        }
    }

    #[test]
    fn goodness_matches_brute_force_small() {
        for nv in 1..=4usize {
            let all: Vec<(usize, usize)> = (0..nv)
                .flat_map(|a| (0..nv).map(move |b| (a, b)))
                .collect();
            let ne = all.len();
            // all edge subsets of size <= 6 (complete enumeration for nv <= 4).
            for mask in 0u32..(1 << ne) {
                if mask.count_ones() > 6 {
                    continue;
                }
                let edges: Vec<(usize, usize)> = (0..ne)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| all[i])
                    .collect();
                let g = graph_from_pairs(nv, &edges);
                assert_eq!(
                    is_good(&g).unwrap(),
                    brute_force_has_level(nv, &edges),
                    "nv={nv} edges={edges:?}"
                );
            }
        }
    }

    #[test]
    fn serde_matches_file_format() {
        let json = r#"{
            "char": "p=3",
            "vertices": [{"id": "A", "r": "0"}, {"id": "B", "r": "1/2"}, {"id": "C", "r": "inf"}],
            "edges": [{"id": "e0", "from": "A", "to": "B", "m": 1}]
        }"#;
        let g: HurwitzGraph = serde_json::from_str(json).unwrap();
        assert_eq!(g.char_mode, CharMode::CharP(3));
        assert_eq!(g.r_of("B"), Some(Rational::new(1, 2)));
        assert_eq!(g.r_of("C"), Some(Rational::Infinity));
        let back = serde_json::to_string(&g).unwrap();
        let g2: HurwitzGraph = serde_json::from_str(&back).unwrap();
        assert_eq!(g, g2);
    }
}
