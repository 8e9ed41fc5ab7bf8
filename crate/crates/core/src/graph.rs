//! Dominance digraph of the variety of five-dimensional nilpotent Jordan
//! algebras: assembles the verified curve edges, membership edges, scaling
//! edges, derived direct-sum edges and cited closures into one graph,
//! computes its reflexive-transitive closure, and certifies the component
//! roots with machine-checkable rigidity evidence.

use crate::catalog::{union_base_label, AlgebraId, Catalog, CatalogError};
use crate::deform::{
    check_obstructions, derive_direct_sum_edge, membership_edges, scaling_edge,
    verify_curve_with, CurveError, CurveReport, CurvesFile, Edge, EdgeProvenance,
    ObstructionReport,
};
use crate::invariants::{invariant_profile, InvariantError, InvariantProfile};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("curve {id} failed verification: {detail}")]
    CurveFailed { id: String, detail: String },
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("edge endpoint {0} is not a node of the graph")]
    UnknownNode(String),
    #[error("{0} is not a node of the graph")]
    NoSuchNode(String),
    #[error("malformed union label {0}")]
    MalformedUnion(String),
    #[error("union {union}: sample {id} has orbit dimension {got}, another sample has {expected}")]
    UnionDimension {
        union: String,
        id: String,
        got: usize,
        expected: usize,
    },
    #[error("verified edge {from} -> {to} contradicts the obstruction conditions: {failing}")]
    BlockedEdge {
        from: String,
        to: String,
        failing: String,
    },
    #[error("no blocking evidence found for root {root} against {other}")]
    RigidityUndecided { root: String, other: String },
    #[error("graph json: {0}")]
    Json(String),
}

/// Serialized form: the node and edge lists; the closure is recomputed on
/// load, so round-tripping through JSON is lossless.
#[derive(Serialize, Deserialize)]
struct GraphDoc {
    nodes: Vec<String>,
    edges: Vec<Edge>,
}

#[derive(Clone, Debug)]
pub struct DominanceGraph {
    nodes: Vec<String>,
    edges: Vec<Edge>,
    index: BTreeMap<String, usize>,
    reach: Vec<Vec<bool>>,
}

impl PartialEq for DominanceGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }
}

impl Eq for DominanceGraph {}

impl DominanceGraph {
    /// Builds the graph from explicit parts: nodes are deduplicated and
    /// sorted, edges are deduplicated, sorted, and checked against the
    /// node set, and the reflexive-transitive closure is computed.
    pub fn from_parts(nodes: Vec<String>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let node_set: BTreeSet<String> = nodes.into_iter().collect();
        let nodes: Vec<String> = node_set.iter().cloned().collect();
        let index: BTreeMap<String, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let edge_set: BTreeSet<Edge> = edges.into_iter().collect();
        for e in &edge_set {
            for end in [&e.from, &e.to] {
                if !index.contains_key(end) {
                    return Err(GraphError::UnknownNode(end.clone()));
                }
            }
        }
        let edges: Vec<Edge> = edge_set.into_iter().collect();

        let n = nodes.len();
        let mut reach = vec![vec![false; n]; n];
        for (i, row) in reach.iter_mut().enumerate() {
            row[i] = true;
        }
        for e in &edges {
            reach[index[&e.from]][index[&e.to]] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    for j in 0..n {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        Ok(DominanceGraph {
            nodes,
            edges,
            index,
            reach,
        })
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, node: &str) -> bool {
        self.index.contains_key(node)
    }

    fn idx(&self, node: &str) -> Result<usize, GraphError> {
        self.index
            .get(node)
            .copied()
            .ok_or_else(|| GraphError::NoSuchNode(node.to_string()))
    }

    /// True when `to` lies in the closure of `from` (reflexively so).
    pub fn reaches(&self, from: &str, to: &str) -> Result<bool, GraphError> {
        Ok(self.reach[self.idx(from)?][self.idx(to)?])
    }

    pub fn reachable_from(&self, from: &str) -> Result<Vec<&str>, GraphError> {
        let i = self.idx(from)?;
        Ok(self
            .nodes
            .iter()
            .enumerate()
            .filter(|(j, _)| self.reach[i][*j])
            .map(|(_, n)| n.as_str())
            .collect())
    }

    /// Nodes with no incoming edge from a different node; every maximal
    /// element of the dominance order is one of these.
    pub fn roots(&self) -> Vec<String> {
        let mut has_in = vec![false; self.nodes.len()];
        for e in &self.edges {
            if e.from != e.to {
                has_in[self.index[&e.to]] = true;
            }
        }
        self.nodes
            .iter()
            .zip(&has_in)
            .filter(|(_, dominated)| !**dominated)
            .map(|(n, _)| n.clone())
            .collect()
    }

    /// Nodes not reachable from any root; empty exactly when the roots
    /// cover the whole graph.
    pub fn unreached_from_roots(&self) -> Vec<String> {
        let root_rows: Vec<usize> = self.roots().iter().map(|r| self.index[r]).collect();
        self.nodes
            .iter()
            .enumerate()
            .filter(|(j, _)| !root_rows.iter().any(|&i| self.reach[i][*j]))
            .map(|(_, n)| n.clone())
            .collect()
    }

    /// True when some node is covered by this root alone, so dropping the
    /// root would break coverage.
    pub fn root_is_necessary(&self, root: &str) -> Result<bool, GraphError> {
        let i = self.idx(root)?;
        let others: Vec<usize> = self
            .roots()
            .iter()
            .filter(|r| r.as_str() != root)
            .map(|r| self.index[r])
            .collect();
        Ok((0..self.nodes.len())
            .any(|j| self.reach[i][j] && !others.iter().any(|&o| self.reach[o][j])))
    }

    /// Edges restricted to concrete instances (no closure unions) whose
    /// provenance is machine-verified: pinned curve edges, scaling edges,
    /// and direct-sum edges. Cited edges and union endpoints are left out.
    pub fn verified_instance_edges<'a>(
        &'a self,
        instances: &BTreeMap<String, AlgebraId>,
    ) -> Vec<&'a Edge> {
        self.edges
            .iter()
            .filter(|e| {
                !matches!(e.provenance, EdgeProvenance::ExternalCitation { .. })
                    && instances.contains_key(&e.from)
                    && instances.contains_key(&e.to)
            })
            .collect()
    }

    pub fn emit_dot(&self) -> String {
        let mut out = String::from("digraph dominance {\n");
        for n in &self.nodes {
            out.push_str(&format!("  \"{n}\";\n"));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [style={}];\n",
                e.from,
                e.to,
                edge_style(&e.provenance)
            ));
        }
        out.push_str("}\n");
        out
    }

    pub fn emit_json(&self) -> String {
        let doc = GraphDoc {
            nodes: self.nodes.clone(),
            edges: self.edges.clone(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("graph serializes");
        s.push('\n');
        s
    }

    pub fn parse_json(text: &str) -> Result<Self, GraphError> {
        let doc: GraphDoc =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        Self::from_parts(doc.nodes, doc.edges)
    }
}

/// Edge style in DOT output: solid for curve-verified, dashed for cited,
/// dotted for scaling and direct-sum edges.
pub fn edge_style(p: &EdgeProvenance) -> &'static str {
    match p {
        EdgeProvenance::Curve { .. } => "solid",
        EdgeProvenance::ExternalCitation { .. } => "dashed",
        EdgeProvenance::Scaling | EdgeProvenance::DirectSum { .. } => "dotted",
    }
}

/// Graph nodes standing for concrete algebras: every non-alias
/// five-dimensional entry at each of its graph samples.
pub fn instance_nodes(cat: &Catalog) -> Result<BTreeMap<String, AlgebraId>, GraphError> {
    let mut out = BTreeMap::new();
    for e in cat.entries() {
        if e.dim != 5 || e.alias_of.is_some() {
            continue;
        }
        for id in cat.graph_ids(&e.label)? {
            out.insert(id.to_string(), id);
        }
    }
    Ok(out)
}

/// Closure-union nodes referenced by the catalog's membership column.
pub fn union_nodes(cat: &Catalog) -> BTreeSet<String> {
    cat.entries()
        .iter()
        .filter(|e| e.dim == 5)
        .filter_map(|e| e.member_of.clone())
        .collect()
}

/// Verifies every curve (in parallel), keeping the file order of the
/// reports; the first failure aborts with the offending curve id.
pub fn verify_all_curves(
    cat: &Catalog,
    curves: &CurvesFile,
    overrides: &BTreeMap<String, Vec<String>>,
) -> Result<Vec<CurveReport>, GraphError> {
    let results: Vec<(String, Result<CurveReport, CurveError>)> = curves
        .curves
        .par_iter()
        .map(|c| (c.id.clone(), verify_curve_with(cat, c, overrides)))
        .collect();
    let mut reports = Vec::with_capacity(results.len());
    for (id, r) in results {
        match r {
            Ok(rep) => reports.push(rep),
            Err(e) => {
                return Err(GraphError::CurveFailed {
                    id,
                    detail: e.to_string(),
                })
            }
        }
    }
    Ok(reports)
}

/// Computes (in parallel) the profiles of every requested instance that
/// the cache does not already hold.
pub fn fill_profiles(
    cat: &Catalog,
    ids: &BTreeMap<String, AlgebraId>,
    cache: &mut BTreeMap<String, InvariantProfile>,
) -> Result<(), GraphError> {
    let missing: Vec<(&String, &AlgebraId)> = ids
        .iter()
        .filter(|(name, _)| !cache.contains_key(*name))
        .collect();
    let computed: Vec<(String, Result<InvariantProfile, GraphError>)> = missing
        .par_iter()
        .map(|(name, id)| {
            let profile = cat
                .instantiate_unchecked(id)
                .map_err(GraphError::from)
                .and_then(|t| invariant_profile(&t).map_err(GraphError::from));
            ((*name).clone(), profile)
        })
        .collect();
    for (name, p) in computed {
        cache.insert(name, p?);
    }
    Ok(())
}

/// One invariant profile per requested instance, computed in parallel and
/// keyed by the instance's display name.
pub fn profile_cache(
    cat: &Catalog,
    ids: &BTreeMap<String, AlgebraId>,
) -> Result<BTreeMap<String, InvariantProfile>, GraphError> {
    let mut cache = BTreeMap::new();
    fill_profiles(cat, ids, &mut cache)?;
    Ok(cache)
}

/// Full pipeline: verify every curve, then assemble and cross-check the
/// graph. Any curve failure aborts with that curve's id.
pub fn build_graph(cat: &Catalog, curves: &CurvesFile) -> Result<DominanceGraph, GraphError> {
    let reports = verify_all_curves(cat, curves, &BTreeMap::new())?;
    assemble_graph(cat, curves, &reports)
}

/// Assembles the graph from already-verified curve reports, adds the
/// derived membership, scaling, direct-sum and cited edges, and checks
/// that no verified edge (nor any composite of verified instance edges)
/// contradicts the obstruction conditions.
pub fn assemble_graph(
    cat: &Catalog,
    curves: &CurvesFile,
    reports: &[CurveReport],
) -> Result<DominanceGraph, GraphError> {
    assemble_graph_cached(cat, curves, reports, &BTreeMap::new())
}

/// Same as `assemble_graph`, seeded with already-computed profiles so the
/// consistency pass only fills the gaps.
pub fn assemble_graph_cached(
    cat: &Catalog,
    curves: &CurvesFile,
    reports: &[CurveReport],
    seed: &BTreeMap<String, InvariantProfile>,
) -> Result<DominanceGraph, GraphError> {
    let instances = instance_nodes(cat)?;
    let unions = union_nodes(cat);
    let mut nodes: Vec<String> = instances.keys().cloned().collect();
    nodes.extend(unions.iter().cloned());

    let mut edges: Vec<Edge> = Vec::new();
    for r in reports {
        edges.extend(r.edges.iter().cloned());
    }
    edges.extend(membership_edges(cat)?);
    for id in instances.values() {
        edges.push(scaling_edge(cat, id)?);
    }
    for spec in &curves.direct_sum_edges {
        edges.push(derive_direct_sum_edge(cat, spec)?);
    }
    for ext in &curves.external_edges {
        edges.push(Edge {
            from: ext.source.clone(),
            to: ext.target.clone(),
            provenance: EdgeProvenance::ExternalCitation {
                note: ext.note.clone(),
            },
        });
    }

    let graph = DominanceGraph::from_parts(nodes, edges)?;
    check_edge_consistency(cat, &graph, reports, &instances, seed)?;
    Ok(graph)
}

/// Two coherence requirements on the verified part of the graph: every
/// pinned (source, target) pair of every curve passes the obstruction
/// conditions, and so does every ordered pair in the closure of the
/// verified instance-level edges.
fn check_edge_consistency(
    cat: &Catalog,
    graph: &DominanceGraph,
    reports: &[CurveReport],
    instances: &BTreeMap<String, AlgebraId>,
    seed: &BTreeMap<String, InvariantProfile>,
) -> Result<(), GraphError> {
    let mut profiles = seed.clone();
    fill_profiles(cat, instances, &mut profiles)?;

    for r in reports {
        for (src, tgt) in &r.instance_pairs {
            let Some(src) = src else { continue };
            if src == tgt {
                continue;
            }
            for id in [src, tgt] {
                let name = id.to_string();
                if !profiles.contains_key(&name) {
                    let t = cat.instantiate_unchecked(id)?;
                    profiles.insert(name, invariant_profile(&t)?);
                }
            }
            let report = ObstructionReport::from_profiles(
                &src.to_string(),
                &tgt.to_string(),
                &profiles[&src.to_string()],
                &profiles[&tgt.to_string()],
            );
            if report.blocked() {
                return Err(GraphError::BlockedEdge {
                    from: src.to_string(),
                    to: tgt.to_string(),
                    failing: report.failing().join(", "),
                });
            }
        }
    }

    let restricted: Vec<&Edge> = graph.verified_instance_edges(instances);
    let names: Vec<&String> = instances.keys().collect();
    let pos: BTreeMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let n = names.len();
    let mut reach = vec![vec![false; n]; n];
    for e in &restricted {
        reach[pos[e.from.as_str()]][pos[e.to.as_str()]] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j || !reach[i][j] {
                continue;
            }
            let report =
                ObstructionReport::from_profiles(names[i], names[j], &profiles[names[i]], &profiles[names[j]]);
            if report.blocked() {
                return Err(GraphError::BlockedEdge {
                    from: names[i].clone(),
                    to: names[j].clone(),
                    failing: report.failing().join(", "),
                });
            }
        }
    }
    Ok(())
}

/// Dimension of a union node's closure: the (constant) orbit dimension of
/// the base family's samples plus the number of family parameters.
pub fn union_dimension(cat: &Catalog, union: &str) -> Result<usize, GraphError> {
    let base = union_base_label(union).ok_or_else(|| GraphError::MalformedUnion(union.into()))?;
    let entry = cat.entry(&base)?;
    let ids = cat.graph_ids(&base)?;
    let mut orbit: Option<(usize, String)> = None;
    for id in &ids {
        let t = cat.instantiate_unchecked(id)?;
        let p = invariant_profile(&t)?;
        match &orbit {
            None => orbit = Some((p.orbit_dim, id.to_string())),
            Some((expected, _)) if *expected != p.orbit_dim => {
                return Err(GraphError::UnionDimension {
                    union: union.into(),
                    id: id.to_string(),
                    got: p.orbit_dim,
                    expected: *expected,
                });
            }
            Some(_) => {}
        }
    }
    let (orbit, _) = orbit.ok_or_else(|| GraphError::MalformedUnion(union.into()))?;
    Ok(orbit + entry.params.len())
}

/// Dimension of the closure a node stands for: the orbit dimension for a
/// concrete instance, the family dimension for a union.
pub fn node_closure_dim(cat: &Catalog, node: &str) -> Result<usize, GraphError> {
    if union_base_label(node).is_some() {
        return union_dimension(cat, node);
    }
    let instances = instance_nodes(cat)?;
    let id = instances
        .get(node)
        .ok_or_else(|| GraphError::NoSuchNode(node.to_string()))?;
    let t = cat.instantiate_unchecked(id)?;
    Ok(invariant_profile(&t)?.orbit_dim)
}

/// The machine-checkable fact that excludes one candidate dominator.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RigidityEvidence {
    /// The root's closure is strictly bigger than the other root's, so it
    /// cannot sit inside it.
    OrbitDimensionExceeds { root_dim: usize, other_dim: usize },
    /// Equal closure dimensions but non-isomorphic generic members, so
    /// neither closure contains the other.
    EqualDimensionDistinct {
        dim: usize,
        field: &'static str,
        root_value: String,
        other_value: String,
    },
    /// A degeneration from the other root's generic member to this root's
    /// generic member fails a necessary condition.
    Obstruction { report: ObstructionReport },
}

#[derive(Clone, Debug, Serialize)]
pub struct RootExclusion {
    pub other: String,
    pub evidence: RigidityEvidence,
}

#[derive(Clone, Debug, Serialize)]
pub struct RigidityVerdict {
    pub root: String,
    pub rigid: bool,
    /// Nodes whose closure contains this one (empty when rigid).
    pub dominated_by: Vec<String>,
    /// One blocking fact per other root (empty when not rigid).
    pub exclusions: Vec<RootExclusion>,
}

/// Generic representative of a node: the instance itself, or the base
/// family at its first graph sample for a union.
fn node_representative(cat: &Catalog, node: &str) -> Result<AlgebraId, GraphError> {
    if let Some(base) = union_base_label(node) {
        let ids = cat.graph_ids(&base)?;
        return ids
            .into_iter()
            .next()
            .ok_or_else(|| GraphError::MalformedUnion(node.to_string()));
    }
    let instances = instance_nodes(cat)?;
    instances
        .get(node)
        .cloned()
        .ok_or_else(|| GraphError::NoSuchNode(node.to_string()))
}

/// First invariant that separates two profiles, in a fixed field order.
pub fn first_profile_difference(
    a: &InvariantProfile,
    b: &InvariantProfile,
) -> Option<(&'static str, String, String)> {
    macro_rules! cmp {
        ($field:ident) => {
            if a.$field != b.$field {
                return Some((
                    stringify!($field),
                    format!("{:?}", a.$field),
                    format!("{:?}", b.$field),
                ));
            }
        };
    }
    cmp!(ann_dim);
    cmp!(center_dim);
    cmp!(der_dim);
    cmp!(nilindex);
    cmp!(power_dims);
    cmp!(nilpotency_type);
    cmp!(jacobi_dim);
    cmp!(h2_dim);
    cmp!(associative);
    None
}

/// Certifies that a candidate root is a genuine component: nothing in the
/// graph dominates it, and for every other root there is a recorded fact
/// (dimension count, generic-member invariant, or failed obstruction)
/// excluding domination. A node dominated by anything is reported as not
/// rigid with its dominators listed.
pub fn rigidity_check(
    cat: &Catalog,
    graph: &DominanceGraph,
    root: &str,
) -> Result<RigidityVerdict, GraphError> {
    if !graph.contains(root) {
        return Err(GraphError::NoSuchNode(root.to_string()));
    }
    let dominated_by: Vec<String> = graph
        .nodes()
        .iter()
        .filter(|n| n.as_str() != root)
        .filter(|n| graph.reaches(n, root).unwrap_or(false))
        .cloned()
        .collect();
    if !dominated_by.is_empty() {
        return Ok(RigidityVerdict {
            root: root.to_string(),
            rigid: false,
            dominated_by,
            exclusions: Vec::new(),
        });
    }

    let root_dim = node_closure_dim(cat, root)?;
    let root_rep = node_representative(cat, root)?;
    let root_profile = invariant_profile(&cat.instantiate_unchecked(&root_rep)?)?;

    let mut exclusions = Vec::new();
    for other in graph.roots() {
        if other == root {
            continue;
        }
        let other_dim = node_closure_dim(cat, &other)?;
        let other_rep = node_representative(cat, &other)?;
        let evidence = if root_dim > other_dim {
            RigidityEvidence::OrbitDimensionExceeds {
                root_dim,
                other_dim,
            }
        } else if root_dim == other_dim {
            let other_profile = invariant_profile(&cat.instantiate_unchecked(&other_rep)?)?;
            let Some((field, root_value, other_value)) =
                first_profile_difference(&root_profile, &other_profile)
            else {
                return Err(GraphError::RigidityUndecided {
                    root: root.to_string(),
                    other,
                });
            };
            RigidityEvidence::EqualDimensionDistinct {
                dim: root_dim,
                field,
                root_value,
                other_value,
            }
        } else {
            let report = check_obstructions(cat, &other_rep, &root_rep)?;
            if !report.blocked() {
                return Err(GraphError::RigidityUndecided {
                    root: root.to_string(),
                    other,
                });
            }
            RigidityEvidence::Obstruction { report }
        };
        exclusions.push(RootExclusion {
            other,
            evidence,
        });
    }
    Ok(RigidityVerdict {
        root: root.to_string(),
        rigid: true,
        dominated_by: Vec::new(),
        exclusions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(from: &str, to: &str, provenance: EdgeProvenance) -> Edge {
        Edge {
            from: from.into(),
            to: to.into(),
            provenance,
        }
    }

    fn curve(id: &str) -> EdgeProvenance {
        EdgeProvenance::Curve { id: id.into() }
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn closure_is_reflexive_and_transitive() {
        let g = DominanceGraph::from_parts(
            names(&["a", "b", "c"]),
            vec![e("a", "b", curve("x")), e("b", "c", curve("y"))],
        )
        .unwrap();
        assert!(g.reaches("a", "a").unwrap());
        assert!(g.reaches("a", "c").unwrap());
        assert!(!g.reaches("c", "a").unwrap());
        // Rebuilding from the closure's edge set changes no reachability.
        let closure_edges: Vec<Edge> = g
            .nodes()
            .iter()
            .flat_map(|x| {
                g.nodes()
                    .iter()
                    .filter(|y| g.reaches(x, y).unwrap())
                    .map(|y| e(x, y, EdgeProvenance::Scaling))
                    .collect::<Vec<_>>()
            })
            .collect();
        let g2 = DominanceGraph::from_parts(names(&["a", "b", "c"]), closure_edges).unwrap();
        for x in g.nodes() {
            for y in g.nodes() {
                assert_eq!(g.reaches(x, y).unwrap(), g2.reaches(x, y).unwrap());
            }
        }
    }

    #[test]
    fn unknown_endpoints_are_rejected() {
        let err = DominanceGraph::from_parts(
            names(&["a"]),
            vec![e("a", "b", EdgeProvenance::Scaling)],
        )
        .unwrap_err();
        assert!(matches!(err, GraphError::UnknownNode(n) if n == "b"));
        let g = DominanceGraph::from_parts(names(&["a"]), vec![]).unwrap();
        assert!(matches!(
            g.reaches("a", "zzz"),
            Err(GraphError::NoSuchNode(_))
        ));
    }

    #[test]
    fn scaling_only_graph_reaches_self_and_zero() {
        let mut edges = vec![
            e("x", "zero", EdgeProvenance::Scaling),
            e("y", "zero", EdgeProvenance::Scaling),
            e("zero", "zero", EdgeProvenance::Scaling),
        ];
        edges.sort();
        let g = DominanceGraph::from_parts(names(&["x", "y", "zero"]), edges).unwrap();
        assert_eq!(g.reachable_from("x").unwrap(), vec!["x", "zero"]);
        assert_eq!(g.reachable_from("y").unwrap(), vec!["y", "zero"]);
        assert_eq!(g.reachable_from("zero").unwrap(), vec!["zero"]);
        assert_eq!(g.roots(), names(&["x", "y"]));
    }

    #[test]
    fn roots_cover_and_are_each_necessary() {
        // Two sources over a shared sink, plus a private leaf each.
        let g = DominanceGraph::from_parts(
            names(&["r1", "r2", "shared", "leaf1", "leaf2"]),
            vec![
                e("r1", "shared", curve("a")),
                e("r2", "shared", curve("b")),
                e("r1", "leaf1", curve("c")),
                e("r2", "leaf2", curve("d")),
            ],
        )
        .unwrap();
        assert_eq!(g.roots(), names(&["r1", "r2"]));
        assert!(g.unreached_from_roots().is_empty());
        assert!(g.root_is_necessary("r1").unwrap());
        assert!(g.root_is_necessary("r2").unwrap());
    }

    #[test]
    fn dot_output_is_deterministic_and_styled() {
        let g = DominanceGraph::from_parts(
            names(&["p", "q", "r"]),
            vec![
                e("p", "q", curve("c1")),
                e("q", "r", EdgeProvenance::Scaling),
                e(
                    "p",
                    "r",
                    EdgeProvenance::ExternalCitation {
                        note: "cited".into(),
                    },
                ),
            ],
        )
        .unwrap();
        let dot = g.emit_dot();
        assert!(dot.starts_with("digraph dominance {"));
        assert!(dot.contains("\"p\" -> \"q\" [style=solid];"));
        assert!(dot.contains("\"p\" -> \"r\" [style=dashed];"));
        assert!(dot.contains("\"q\" -> \"r\" [style=dotted];"));
        assert_eq!(dot, g.emit_dot());
    }

    #[test]
    fn empty_graph_is_valid() {
        let g = DominanceGraph::from_parts(vec![], vec![]).unwrap();
        assert_eq!(g.emit_dot(), "digraph dominance {\n}\n");
        assert!(g.roots().is_empty());
        assert!(g.unreached_from_roots().is_empty());
        let back = DominanceGraph::parse_json(&g.emit_json()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn json_round_trips() {
        let g = DominanceGraph::from_parts(
            names(&["a", "b"]),
            vec![
                e("a", "b", curve("k")),
                e(
                    "a",
                    "b",
                    EdgeProvenance::DirectSum {
                        via: "a = x + y".into(),
                    },
                ),
            ],
        )
        .unwrap();
        let back = DominanceGraph::parse_json(&g.emit_json()).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.emit_json(), g.emit_json());
    }
}
