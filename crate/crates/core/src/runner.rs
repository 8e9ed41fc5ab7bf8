//! Staged verification driver: loads the data files, replays every check
//! the workbench knows (identity laws, invariant tables, isomorphism
//! witnesses, obstruction matrix, curve suite, graph assembly, rigidity)
//! and collects structured discrepancies instead of stopping at the first
//! mismatch.

use crate::catalog::{load_catalog, AlgebraId, Catalog, CatalogError};
use crate::deform::{
    derive_direct_sum_edge, load_curves, membership_edges, verify_curve_with, CurveError,
    CurveReport, CurvesFile,
};
use crate::graph::{
    assemble_graph_cached, fill_profiles, first_profile_difference, instance_nodes,
    rigidity_check, DominanceGraph, GraphError,
};
use crate::invariants::{invariant_profile, InvariantProfile};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use thiserror::Error;

/// Errors in the inputs themselves (unreadable or malformed data files),
/// as opposed to verification mismatches, which land in the run report.
#[derive(Debug, Error)]
pub enum RunnerError {
    #[error("catalog: {0}")]
    Catalog(#[from] CatalogError),
    #[error("curves: {0}")]
    Curves(#[from] CurveError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Identity,
    Invariants,
    Witnesses,
    Obstructions,
    Curves,
    Graph,
    Rigidity,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::Identity,
        Stage::Invariants,
        Stage::Witnesses,
        Stage::Obstructions,
        Stage::Curves,
        Stage::Graph,
        Stage::Rigidity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Stage::Identity => "identity",
            Stage::Invariants => "invariants",
            Stage::Witnesses => "witnesses",
            Stage::Obstructions => "obstructions",
            Stage::Curves => "curves",
            Stage::Graph => "graph",
            Stage::Rigidity => "rigidity",
        }
    }

    pub fn from_name(name: &str) -> Option<Stage> {
        Stage::ALL.iter().copied().find(|s| s.name() == name)
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub data_dir: PathBuf,
    /// None runs every stage.
    pub stages: Option<BTreeSet<Stage>>,
    /// Per-name overrides of the curves' free-parameter sample lists.
    pub samples: BTreeMap<String, Vec<String>>,
}

impl RunConfig {
    pub fn new(data_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            data_dir: data_dir.into(),
            stages: None,
            samples: BTreeMap::new(),
        }
    }

    fn wants(&self, stage: Stage) -> bool {
        self.stages.as_ref().map_or(true, |set| set.contains(&stage))
    }
}

/// The data directory: the environment override when set, else `./data`.
pub fn default_data_dir() -> PathBuf {
    std::env::var_os("JORN5_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("data"))
}

#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    pub stage: &'static str,
    pub subject: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageOutcome {
    pub stage: &'static str,
    pub checks: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RunReport {
    pub outcomes: Vec<StageOutcome>,
    pub discrepancies: Vec<Discrepancy>,
    /// Component roots found by the rigidity stage (empty if it did not run).
    pub roots: Vec<String>,
    pub summary: String,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

struct StageLog<'a> {
    stage: Stage,
    checks: usize,
    sink: &'a mut Vec<Discrepancy>,
    start_len: usize,
}

impl<'a> StageLog<'a> {
    fn new(stage: Stage, sink: &'a mut Vec<Discrepancy>) -> Self {
        let start_len = sink.len();
        StageLog {
            stage,
            checks: 0,
            sink,
            start_len,
        }
    }

    fn check(&mut self, subject: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.sink.push(Discrepancy {
                stage: self.stage.name(),
                subject: subject.to_string(),
                detail: detail(),
            });
        }
    }

    fn fail(&mut self, subject: &str, detail: String) {
        self.checks += 1;
        self.sink.push(Discrepancy {
            stage: self.stage.name(),
            subject: subject.to_string(),
            detail,
        });
    }

    fn outcome(&self) -> StageOutcome {
        StageOutcome {
            stage: self.stage.name(),
            checks: self.checks,
            failures: self.sink.len() - self.start_len,
        }
    }
}

fn all_default_ids(cat: &Catalog) -> Result<Vec<AlgebraId>, CatalogError> {
    let mut ids = Vec::new();
    for e in cat.entries() {
        ids.extend(cat.default_ids(&e.label)?);
    }
    Ok(ids)
}

/// Runs the requested stages in order over one immutable catalog; within a
/// stage the per-instance work is parallel, the reporting single-threaded.
pub fn run_all(cfg: &RunConfig) -> Result<RunReport, RunnerError> {
    let cat = load_catalog(&cfg.data_dir.join("catalog.json"))?;
    let mut report = RunReport::default();
    let mut discrepancies = Vec::new();
    let mut profiles: BTreeMap<String, InvariantProfile> = BTreeMap::new();
    let mut curves: Option<CurvesFile> = None;
    let mut reports: Option<Vec<CurveReport>> = None;
    let mut curve_failures = 0usize;
    let mut graph: Option<DominanceGraph> = None;

    let needs_curves =
        cfg.wants(Stage::Curves) || cfg.wants(Stage::Graph) || cfg.wants(Stage::Rigidity);
    if needs_curves {
        curves = Some(load_curves(&cfg.data_dir.join("curves.json"), &cat)?);
    }

    if cfg.wants(Stage::Identity) {
        let mut log = StageLog::new(Stage::Identity, &mut discrepancies);
        for e in cat.entries() {
            if !e.params.is_empty() {
                log.check(&e.label, e.default_samples.len() >= 3, || {
                    format!(
                        "family has {} default samples, need at least 3",
                        e.default_samples.len()
                    )
                });
            }
        }
        let ids = all_default_ids(&cat)?;
        let results: Vec<(&AlgebraId, Result<(bool, bool, bool), CatalogError>)> = ids
            .par_iter()
            .map(|id| {
                let r = cat
                    .instantiate(id)
                    .map(|t| (t.is_commutative(), t.is_jordan(), t.is_associative()));
                (id, r)
            })
            .collect();
        for (id, r) in results {
            let name = id.to_string();
            match r {
                Err(e) => log.fail(&name, format!("instantiation failed: {e}")),
                Ok((comm, jordan, assoc)) => {
                    log.check(&name, comm, || "product table is not commutative".into());
                    log.check(&name, jordan, || "the Jordan identity fails".into());
                    if let Some(expect_assoc) = cat.expected_invariants(id)?.associative {
                        log.check(&name, assoc == expect_assoc, || {
                            format!("associative: expected {expect_assoc}, computed {assoc}")
                        });
                    }
                }
            }
        }
        report.outcomes.push(log.outcome());
    }

    if cfg.wants(Stage::Invariants) {
        let mut log = StageLog::new(Stage::Invariants, &mut discrepancies);
        let ids = all_default_ids(&cat)?;
        let id_map: BTreeMap<String, AlgebraId> =
            ids.iter().map(|id| (id.to_string(), id.clone())).collect();
        match fill_profiles(&cat, &id_map, &mut profiles) {
            Err(e) => log.fail("profiles", e.to_string()),
            Ok(()) => {
                for id in &ids {
                    let name = id.to_string();
                    let frag = cat.expected_invariants(id)?;
                    let p = &profiles[&name];
                    log.checks += 1;
                    for msg in frag.mismatches(p) {
                        log.fail(&name, msg);
                    }
                }
            }
        }
        report.outcomes.push(log.outcome());
    }

    if cfg.wants(Stage::Witnesses) {
        let mut log = StageLog::new(Stage::Witnesses, &mut discrepancies);
        match cat.verify_all_witnesses() {
            Ok(pairs) => {
                for (a, b) in &pairs {
                    let subject = format!("{a} = {b}");
                    let pa = profile_of(&cat, &mut profiles, a);
                    let pb = profile_of(&cat, &mut profiles, b);
                    match (pa, pb) {
                        (Ok(pa), Ok(pb)) => match first_profile_difference(&pa, &pb) {
                            None => log.check(&subject, true, String::new),
                            Some((field, va, vb)) => log.fail(
                                &subject,
                                format!("isomorphic instances disagree on {field}: {va} vs {vb}"),
                            ),
                        },
                        (Err(e), _) | (_, Err(e)) => log.fail(&subject, e),
                    }
                }
            }
            Err(e) => log.fail("witnesses", e.to_string()),
        }
        report.outcomes.push(log.outcome());
    }

    if cfg.wants(Stage::Obstructions) {
        let mut log = StageLog::new(Stage::Obstructions, &mut discrepancies);
        let ids = all_default_ids(&cat)?;
        let id_map: BTreeMap<String, AlgebraId> =
            ids.iter().map(|id| (id.to_string(), id.clone())).collect();
        match fill_profiles(&cat, &id_map, &mut profiles) {
            Err(e) => log.fail("profiles", e.to_string()),
            Ok(()) => {
                let mut blocked = 0usize;
                let mut open = 0usize;
                for a in &ids {
                    for b in &ids {
                        let (pa, pb) = (&profiles[&a.to_string()], &profiles[&b.to_string()]);
                        if a == b || pa.dim != pb.dim {
                            continue;
                        }
                        let rep = crate::deform::ObstructionReport::from_profiles(
                            &a.to_string(),
                            &b.to_string(),
                            pa,
                            pb,
                        );
                        if rep.blocked() {
                            blocked += 1;
                        } else {
                            open += 1;
                        }
                        if pb.dim == 5 && pb.power_dims.get(1).copied().unwrap_or(0) == 0 {
                            // b is the zero algebra: nothing obstructs
                            // the scaling degeneration into it.
                            log.check(&format!("{a} -> {b}"), !rep.blocked(), || {
                                format!(
                                    "scaling target blocked by {}",
                                    rep.failing().join(", ")
                                )
                            });
                        }
                    }
                }
                log.check("matrix", blocked + open > 0, || {
                    "no same-dimension pairs found".into()
                });
            }
        }
        report.outcomes.push(log.outcome());
    }

    if cfg.wants(Stage::Curves) {
        let mut log = StageLog::new(Stage::Curves, &mut discrepancies);
        let file = curves.as_ref().expect("curves loaded above");
        let results: Vec<(String, Result<CurveReport, CurveError>)> = file
            .curves
            .par_iter()
            .map(|c| (c.id.clone(), verify_curve_with(&cat, c, &cfg.samples)))
            .collect();
        let mut ok_reports = Vec::new();
        for (id, r) in results {
            match r {
                Ok(rep) => {
                    log.checks += 1;
                    ok_reports.push(rep);
                }
                Err(e) => {
                    curve_failures += 1;
                    log.fail(&id, e.to_string());
                }
            }
        }
        for spec in &file.direct_sum_edges {
            match derive_direct_sum_edge(&cat, spec) {
                Ok(_) => log.checks += 1,
                Err(e) => log.fail(&spec.id, e.to_string()),
            }
        }
        match membership_edges(&cat) {
            Ok(edges) => log.checks += edges.len(),
            Err(e) => log.fail("membership", e.to_string()),
        }
        reports = Some(ok_reports);
        report.outcomes.push(log.outcome());
    }

    if cfg.wants(Stage::Graph) {
        let mut log = StageLog::new(Stage::Graph, &mut discrepancies);
        let file = curves.as_ref().expect("curves loaded above");
        if reports.is_none() {
            match crate::graph::verify_all_curves(&cat, file, &cfg.samples) {
                Ok(r) => reports = Some(r),
                Err(e) => {
                    curve_failures += 1;
                    log.fail("curves", e.to_string());
                }
            }
        }
        if curve_failures > 0 {
            log.fail(
                "build",
                format!("skipped: {curve_failures} curve failure(s)"),
            );
        } else if let Some(reps) = &reports {
            match assemble_graph_cached(&cat, file, reps, &profiles) {
                Err(e) => log.fail("build", e.to_string()),
                Ok(g) => {
                    let instances = instance_nodes(&cat).map_err(graph_to_string)?;
                    for node in instances.keys() {
                        log.check(node, g.reaches(node, "eps_25").unwrap_or(false), || {
                            "does not reach the zero algebra".into()
                        });
                    }
                    let back = DominanceGraph::parse_json(&g.emit_json());
                    log.check(
                        "serialization",
                        back.as_ref().map(|b| b == &g).unwrap_or(false),
                        || "graph JSON does not round-trip".into(),
                    );
                    graph = Some(g);
                }
            }
        }
        report.outcomes.push(log.outcome());
    }

    if cfg.wants(Stage::Rigidity) {
        let mut log = StageLog::new(Stage::Rigidity, &mut discrepancies);
        if graph.is_none() && curve_failures == 0 {
            let file = curves.as_ref().expect("curves loaded above");
            match crate::graph::verify_all_curves(&cat, file, &cfg.samples)
                .and_then(|r| assemble_graph_cached(&cat, file, &r, &profiles))
            {
                Ok(g) => graph = Some(g),
                Err(e) => log.fail("build", e.to_string()),
            }
        }
        match &graph {
            None => log.fail("roots", "skipped: no graph".into()),
            Some(g) => {
                let roots = g.roots();
                let unreached = g.unreached_from_roots();
                log.check("coverage", unreached.is_empty(), || {
                    format!("unreached nodes: {}", unreached.join(", "))
                });
                for root in &roots {
                    log.check(root, g.root_is_necessary(root).unwrap_or(false), || {
                        "root is redundant: the others already cover its nodes".into()
                    });
                    match rigidity_check(&cat, g, root) {
                        Ok(v) => log.check(root, v.rigid, || {
                            format!("not rigid; dominated by {}", v.dominated_by.join(", "))
                        }),
                        Err(e) => log.fail(root, e.to_string()),
                    }
                }
                report.roots = roots;
            }
        }
        report.outcomes.push(log.outcome());
    }

    report.discrepancies = discrepancies;
    report.summary = if !report.passed() {
        format!(
            "{} discrepancy(ies) across {} stage(s)",
            report.discrepancies.len(),
            report
                .discrepancies
                .iter()
                .map(|d| d.stage)
                .collect::<BTreeSet<_>>()
                .len()
        )
    } else if !report.roots.is_empty() {
        format!("{} components confirmed", report.roots.len())
    } else {
        "requested stages passed".to_string()
    };
    Ok(report)
}

fn profile_of(
    cat: &Catalog,
    cache: &mut BTreeMap<String, InvariantProfile>,
    id: &AlgebraId,
) -> Result<InvariantProfile, String> {
    let name = id.to_string();
    if let Some(p) = cache.get(&name) {
        return Ok(p.clone());
    }
    let t = cat.instantiate_unchecked(id).map_err(|e| e.to_string())?;
    let p = invariant_profile(&t).map_err(|e| e.to_string())?;
    cache.insert(name, p.clone());
    Ok(p)
}

fn graph_to_string(e: GraphError) -> RunnerError {
    RunnerError::Curves(CurveError::BadCurve {
        id: "graph".into(),
        detail: e.to_string(),
    })
}

/// Parses a display name like `J_27[2,3]` back into an id using the
/// catalog's parameter declarations.
pub fn parse_node_id(cat: &Catalog, name: &str) -> Result<AlgebraId, CatalogError> {
    match name.split_once('[') {
        None => {
            cat.entry(name)?;
            Ok(AlgebraId::plain(name))
        }
        Some((label, rest)) => {
            let inner = rest.strip_suffix(']').ok_or_else(|| {
                CatalogError::UnknownLabel(name.to_string())
            })?;
            cat.entry(label)?;
            let params = inner
                .split(',')
                .map(|s| {
                    crate::scalar::parse_const_expr(s.trim(), &BTreeMap::new())
                        .map_err(CatalogError::from)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(AlgebraId::with_params(label, params))
        }
    }
}
