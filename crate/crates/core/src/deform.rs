//! Degeneration machinery: verification of explicit curves over rational
//! functions of t, synthesized scaling and family-membership curves,
//! direct-sum derivation of edges, and the necessary-condition checker
//! that blocks impossible degenerations.

use crate::catalog::{
    free_param_combinations, AlgebraId, Catalog, CatalogError, EntrySpec, IdSpec,
};
use crate::invariants::{invariant_profile, InvariantError, InvariantProfile};
use crate::scalar::{
    parse_const_expr, parse_with_ratfunc_bindings, ExactScalar, RatFunc, Scalar, ScalarError,
};
use crate::tensor::{
    apply_basis_change, tensors_equal, BasisChange, StructureTensor, TensorError,
};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum CurveError {
    #[error("could not read {path}: {detail}")]
    Read { path: String, detail: String },
    #[error("curve file is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("duplicate curve id {0}")]
    DuplicateId(String),
    #[error("curve {id}: {detail}")]
    BadCurve { id: String, detail: String },
    #[error("curve {id}: change-of-basis matrix is singular for all t")]
    SingularFamily { id: String },
    #[error("curve {id}: determinant is {got}, expected {expected}")]
    DetMismatch {
        id: String,
        expected: String,
        got: String,
    },
    #[error("curve {id}: only {got} of the required {needed} generic samples are legal")]
    NotEnoughSamples { id: String, needed: usize, got: usize },
    #[error("curve {id}: pole at special point t = {t0}")]
    PoleAtSpecialPoint { id: String, t0: String },
    #[error("curve {id}: limit at t = {t0} is not {target}: {detail}")]
    LimitMismatch {
        id: String,
        t0: String,
        target: String,
        detail: String,
    },
    #[error("curve {id}: source family {label} has no closure-union node")]
    MissingUnion { id: String, label: String },
    #[error("direct sum {id}: {detail}")]
    BadSum { id: String, detail: String },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

/// Curve source: a catalog entry together with one rational function of t
/// per formal parameter. Constant paths pin a fixed algebra; non-constant
/// paths sweep through the family.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub label: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub param_path: BTreeMap<String, String>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// A point t0 where the deformed tensor must coincide with a catalog
/// algebra. The optional witness is a constant change of basis applied
/// to the limit before comparison, for curves whose limit lands on an
/// isomorphic copy of the target rather than on its table basis.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecialPoint {
    pub t0: String,
    pub target: IdSpec,
    #[serde(default, skip_serializing_if = "is_false")]
    pub family_target: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub id: String,
    pub source: SourceSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub free_params: BTreeMap<String, Vec<String>>,
    pub matrix: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_det: Option<String>,
    pub special_points: Vec<SpecialPoint>,
}

/// An edge imported from the literature rather than verified here.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExternalEdgeSpec {
    pub source: String,
    pub target: String,
    pub note: String,
}

/// One summand of a direct-sum edge: either reflexive (source == target)
/// or an imported degeneration carrying a citation note.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SumPartSpec {
    pub source: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Derives sum_source -> sum_target from summand-wise degenerations.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectSumSpec {
    pub id: String,
    pub sum_source: String,
    pub sum_target: String,
    pub parts: Vec<SumPartSpec>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvesFile {
    pub curves: Vec<CurveSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub external_edges: Vec<ExternalEdgeSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub direct_sum_edges: Vec<DirectSumSpec>,
}

/// How an edge of the dominance graph was established.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EdgeProvenance {
    Curve { id: String },
    Scaling,
    DirectSum { via: String },
    ExternalCitation { note: String },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub provenance: EdgeProvenance,
}

/// Result of checking one curve at every sampled binding of its free
/// parameters.
#[derive(Clone, Debug)]
pub struct CurveReport {
    pub id: String,
    /// Graph node the verified edges start from: the pinned instance if
    /// the path is constant and binding-independent, else the source
    /// family's closure union.
    pub source_node: String,
    pub edges: Vec<Edge>,
    /// One entry per (binding, special point): the pinned source
    /// instance when the binding fixes one, and the target instance.
    /// A None source marks a family-transversal verification.
    pub instance_pairs: Vec<(Option<AlgebraId>, AlgebraId)>,
    pub bindings_checked: usize,
    pub generic_samples: usize,
}

impl CurvesFile {
    pub fn from_json(text: &str) -> Result<Self, CurveError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("curve specs serialize");
        s.push('\n');
        s
    }

    /// Structural checks that do not instantiate anything: labels exist,
    /// shapes agree, sample sets are usable.
    pub fn validate(&self, cat: &Catalog) -> Result<(), CurveError> {
        let mut seen = BTreeSet::new();
        for c in &self.curves {
            if !seen.insert(c.id.clone()) {
                return Err(CurveError::DuplicateId(c.id.clone()));
            }
            let entry = cat.entry(&c.source.label)?;
            let n = entry.dim;
            if c.matrix.len() != n || c.matrix.iter().any(|r| r.len() != n) {
                return Err(CurveError::BadCurve {
                    id: c.id.clone(),
                    detail: format!("matrix is not {n}x{n}"),
                });
            }
            let names: BTreeSet<&str> =
                entry.params.iter().map(|p| p.name.as_str()).collect();
            let given: BTreeSet<&str> =
                c.source.param_path.keys().map(|k| k.as_str()).collect();
            if names != given {
                return Err(CurveError::BadCurve {
                    id: c.id.clone(),
                    detail: "param_path does not match the source parameters".into(),
                });
            }
            for (name, samples) in &c.free_params {
                if samples.is_empty() {
                    return Err(CurveError::BadCurve {
                        id: c.id.clone(),
                        detail: format!("free parameter {name} has no samples"),
                    });
                }
                if names.contains(name.as_str()) || matches!(name.as_str(), "t" | "i" | "r2") {
                    return Err(CurveError::BadCurve {
                        id: c.id.clone(),
                        detail: format!("free parameter {name} shadows a bound symbol"),
                    });
                }
            }
            if c.special_points.is_empty() {
                return Err(CurveError::BadCurve {
                    id: c.id.clone(),
                    detail: "curve has no special points".into(),
                });
            }
            for sp in &c.special_points {
                let target = cat.entry(&sp.target.label)?;
                if sp.target.params.len() != target.params.len() {
                    return Err(CurveError::BadCurve {
                        id: c.id.clone(),
                        detail: format!("target {} parameter arity mismatch", sp.target.label),
                    });
                }
                if sp.family_target && target.member_of.is_none() {
                    return Err(CurveError::BadCurve {
                        id: c.id.clone(),
                        detail: format!(
                            "family target {} has no closure-union node",
                            sp.target.label
                        ),
                    });
                }
                if let Some(w) = &sp.witness {
                    let m = target.dim;
                    if w.len() != m || w.iter().any(|r| r.len() != m) {
                        return Err(CurveError::BadCurve {
                            id: c.id.clone(),
                            detail: "witness matrix has the wrong shape".into(),
                        });
                    }
                }
            }
        }
        for d in &self.direct_sum_edges {
            if !seen.insert(d.id.clone()) {
                return Err(CurveError::DuplicateId(d.id.clone()));
            }
            if d.parts.is_empty() {
                return Err(CurveError::BadSum {
                    id: d.id.clone(),
                    detail: "no summands".into(),
                });
            }
        }
        Ok(())
    }
}

pub fn load_curves(path: &Path, cat: &Catalog) -> Result<CurvesFile, CurveError> {
    let text = std::fs::read_to_string(path).map_err(|e| CurveError::Read {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    let file = CurvesFile::from_json(&text)?;
    file.validate(cat)?;
    Ok(file)
}

/// Candidate generic sample points tried in order until three are legal.
const SAMPLE_CANDIDATES: [&str; 7] = ["2", "3", "5", "7", "11", "1/2", "1/3"];
const SAMPLES_NEEDED: usize = 3;

fn eval_change(
    g: &BasisChange<RatFunc>,
    t0: &ExactScalar,
) -> Result<BasisChange<ExactScalar>, ScalarError> {
    let rows = g
        .rows()
        .iter()
        .map(|row| row.iter().map(|e| e.eval(t0)).collect())
        .collect::<Result<Vec<Vec<_>>, _>>()?;
    Ok(BasisChange::new(rows))
}

fn first_diff<S: Scalar>(a: &StructureTensor<S>, b: &StructureTensor<S>) -> String {
    let n = a.dim();
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                if a.get(i, j, k) != b.get(i, j, k) {
                    return format!(
                        "entry ({},{},{}) is {} instead of {}",
                        i + 1,
                        j + 1,
                        k + 1,
                        a.get(i, j, k),
                        b.get(i, j, k)
                    );
                }
            }
        }
    }
    "tensors agree".into()
}

/// True when the source instance at t0 lies inside the family's legal
/// parameter domain.
fn path_legal_at(
    cat: &Catalog,
    label: &str,
    entry: &EntrySpec,
    paths: &[RatFunc],
    t0: &ExactScalar,
) -> bool {
    if entry.params.is_empty() {
        return true;
    }
    let mut values = Vec::with_capacity(paths.len());
    for p in paths {
        match p.eval(t0) {
            Ok(v) => values.push(v),
            Err(_) => return false,
        }
    }
    cat.instantiate(&AlgebraId::with_params(label, values)).is_ok()
}

pub fn verify_curve(cat: &Catalog, spec: &CurveSpec) -> Result<CurveReport, CurveError> {
    verify_curve_with(cat, spec, &BTreeMap::new())
}

/// Checks the curve at every binding of its free parameters (entries in
/// `overrides` replace the shipped sample lists). Each binding runs the
/// full pipeline: instantiate the source along its parameter path, apply
/// the change of basis over rational functions, confirm the determinant,
/// witness generic invertibility at sample points, and match every
/// special-point limit against its catalog target.
pub fn verify_curve_with(
    cat: &Catalog,
    spec: &CurveSpec,
    overrides: &BTreeMap<String, Vec<String>>,
) -> Result<CurveReport, CurveError> {
    let entry = cat.entry(&spec.source.label)?;

    let mut free = spec.free_params.clone();
    for (name, samples) in overrides {
        if free.contains_key(name) {
            free.insert(name.clone(), samples.clone());
        }
    }
    let combos = free_param_combinations(&free)?;

    let mut source_instances: Vec<Option<AlgebraId>> = Vec::new();
    let mut point_targets: Vec<Vec<(usize, AlgebraId)>> = Vec::new();
    let mut instance_pairs = Vec::new();
    let mut generic_samples = 0;

    for binding in &combos {
        let rf: BTreeMap<String, RatFunc> = binding
            .iter()
            .map(|(k, v)| (k.clone(), RatFunc::constant(v.clone())))
            .collect();

        let mut paths = Vec::with_capacity(entry.params.len());
        for p in &entry.params {
            let expr = &spec.source.param_path[&p.name];
            paths.push(parse_with_ratfunc_bindings(expr, &rf)?);
        }
        let (src, src_instance) = if entry.params.is_empty() {
            let id = AlgebraId::plain(&spec.source.label);
            (cat.instantiate(&id)?.to_ratfunc(), Some(id))
        } else {
            let t = cat.instantiate_path(&spec.source.label, &paths)?;
            let constants: Option<Vec<ExactScalar>> =
                paths.iter().map(|p| p.as_constant()).collect();
            let inst =
                constants.map(|c| AlgebraId::with_params(&spec.source.label, c));
            (t, inst)
        };

        let rows = spec
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| parse_with_ratfunc_bindings(e, &rf))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let g = BasisChange::new(rows);
        let det = g.det();
        if det.is_zero() {
            return Err(CurveError::SingularFamily { id: spec.id.clone() });
        }
        if let Some(expect) = &spec.expect_det {
            let e = parse_with_ratfunc_bindings(expect, &rf)?;
            if e != det {
                return Err(CurveError::DetMismatch {
                    id: spec.id.clone(),
                    expected: e.to_string(),
                    got: det.to_string(),
                });
            }
        }
        let moved = apply_basis_change(&src, &g)?;

        let mut good = 0;
        for cand in SAMPLE_CANDIDATES {
            if good >= SAMPLES_NEEDED {
                break;
            }
            let t0 = parse_const_expr(cand, &BTreeMap::new())?;
            if !path_legal_at(cat, &spec.source.label, entry, &paths, &t0) {
                continue;
            }
            let Ok(dv) = det.eval(&t0) else { continue };
            if dv.is_zero() {
                continue;
            }
            let Ok(ge) = eval_change(&g, &t0) else { continue };
            let (Ok(me), Ok(se)) = (moved.eval(&t0), src.eval(&t0)) else {
                continue;
            };
            let direct = apply_basis_change(&se, &ge)?;
            if !tensors_equal(&me, &direct) || !me.is_jordan() {
                return Err(CurveError::BadCurve {
                    id: spec.id.clone(),
                    detail: format!("inconsistent evaluation at t = {cand}"),
                });
            }
            good += 1;
        }
        if good < SAMPLES_NEEDED {
            return Err(CurveError::NotEnoughSamples {
                id: spec.id.clone(),
                needed: SAMPLES_NEEDED,
                got: good,
            });
        }
        generic_samples += good;

        let mut targets = Vec::new();
        for (pi, sp) in spec.special_points.iter().enumerate() {
            let t0 = parse_const_expr(&sp.t0, binding)?;
            let limit = moved.eval(&t0).map_err(|_| CurveError::PoleAtSpecialPoint {
                id: spec.id.clone(),
                t0: sp.t0.clone(),
            })?;
            let target_params = sp
                .target
                .params
                .iter()
                .map(|s| parse_const_expr(s, binding))
                .collect::<Result<Vec<_>, _>>()?;
            let target_id = AlgebraId::with_params(&sp.target.label, target_params);
            let target = cat.instantiate_unchecked(&target_id)?;
            let compared = match &sp.witness {
                Some(wrows) => {
                    let rows = wrows
                        .iter()
                        .map(|row| {
                            row.iter()
                                .map(|e| parse_const_expr(e, binding))
                                .collect::<Result<Vec<_>, _>>()
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    let w = BasisChange::new(rows);
                    if w.det().is_zero() {
                        return Err(CurveError::BadCurve {
                            id: spec.id.clone(),
                            detail: format!("witness at t = {} is singular", sp.t0),
                        });
                    }
                    apply_basis_change(&limit, &w)?
                }
                None => limit,
            };
            if !tensors_equal(&compared, &target) {
                return Err(CurveError::LimitMismatch {
                    id: spec.id.clone(),
                    t0: sp.t0.clone(),
                    target: target_id.to_string(),
                    detail: first_diff(&compared, &target),
                });
            }
            instance_pairs.push((src_instance.clone(), target_id.clone()));
            targets.push((pi, target_id));
        }
        source_instances.push(src_instance);
        point_targets.push(targets);
    }

    let fixed = match source_instances.split_first() {
        Some((Some(first), rest)) if rest.iter().all(|x| x.as_ref() == Some(first)) => {
            Some(first.clone())
        }
        _ => None,
    };
    let source_node = match &fixed {
        Some(id) => id.to_string(),
        None => entry
            .member_of
            .clone()
            .ok_or_else(|| CurveError::MissingUnion {
                id: spec.id.clone(),
                label: spec.source.label.clone(),
            })?,
    };

    let mut edges = BTreeSet::new();
    for targets in &point_targets {
        for (pi, target_id) in targets {
            edges.insert(Edge {
                from: source_node.clone(),
                to: target_id.to_string(),
                provenance: EdgeProvenance::Curve { id: spec.id.clone() },
            });
            let sp = &spec.special_points[*pi];
            if sp.family_target {
                let union = cat
                    .entry(&sp.target.label)?
                    .member_of
                    .clone()
                    .expect("validated family target");
                edges.insert(Edge {
                    from: source_node.clone(),
                    to: union,
                    provenance: EdgeProvenance::Curve { id: spec.id.clone() },
                });
            }
        }
    }

    Ok(CurveReport {
        id: spec.id.clone(),
        source_node,
        edges: edges.into_iter().collect(),
        instance_pairs,
        bindings_checked: combos.len(),
        generic_samples,
    })
}

/// The scaling curve t times the identity: every structure constant picks
/// up one factor of t, so the limit at t = 0 is the zero algebra of the
/// same dimension.
pub fn scaling_edge(cat: &Catalog, id: &AlgebraId) -> Result<Edge, CurveError> {
    let src = cat.instantiate_unchecked(id)?.to_ratfunc();
    let n = src.dim();
    let zero_label = cat
        .entries()
        .iter()
        .find(|e| e.dim == n && e.products.is_empty() && e.params.is_empty())
        .map(|e| e.label.clone())
        .ok_or_else(|| CurveError::BadCurve {
            id: format!("scaling:{id}"),
            detail: format!("no zero algebra of dimension {n} in the catalog"),
        })?;
    let g = BasisChange::scaling(n, RatFunc::var());
    let moved = apply_basis_change(&src, &g)?;
    let limit = moved
        .eval(&ExactScalar::zero())
        .map_err(|_| CurveError::PoleAtSpecialPoint {
            id: format!("scaling:{id}"),
            t0: "0".into(),
        })?;
    if !tensors_equal(&limit, &StructureTensor::zero(n)) {
        return Err(CurveError::BadCurve {
            id: format!("scaling:{id}"),
            detail: "limit of the scaling curve is not the zero algebra".into(),
        });
    }
    Ok(Edge {
        from: id.to_string(),
        to: zero_label,
        provenance: EdgeProvenance::Scaling,
    })
}

/// For every family member, verifies that driving the base family along
/// the member's recorded parameter path lands exactly on the member at
/// t = 0, and emits the membership edge from the closure union.
pub fn membership_edges(cat: &Catalog) -> Result<Vec<Edge>, CurveError> {
    let mut out = Vec::new();
    for e in cat.entries() {
        let Some(union) = &e.member_of else { continue };
        let base_label = crate::catalog::union_base_label(union).ok_or_else(|| {
            CurveError::BadCurve {
                id: format!("membership:{}", e.label),
                detail: format!("malformed union name {union}"),
            }
        })?;
        for inst in cat.graph_ids(&e.label)? {
            let id = format!("membership:{inst}");
            let rf: BTreeMap<String, RatFunc> = e
                .params
                .iter()
                .zip(&inst.params)
                .map(|(p, v)| (p.name.clone(), RatFunc::constant(v.clone())))
                .collect();
            let paths = e
                .base_path
                .iter()
                .map(|expr| parse_with_ratfunc_bindings(expr, &rf))
                .collect::<Result<Vec<_>, _>>()?;
            let along = cat.instantiate_path(&base_label, &paths)?;
            let limit = along.eval(&ExactScalar::zero()).map_err(|_| {
                CurveError::PoleAtSpecialPoint {
                    id: id.clone(),
                    t0: "0".into(),
                }
            })?;
            let target = cat.instantiate_unchecked(&inst)?;
            if !tensors_equal(&limit, &target) {
                return Err(CurveError::LimitMismatch {
                    id,
                    t0: "0".into(),
                    target: inst.to_string(),
                    detail: first_diff(&limit, &target),
                });
            }
            out.push(Edge {
                from: union.clone(),
                to: inst.to_string(),
                provenance: EdgeProvenance::Curve { id },
            });
        }
    }
    Ok(out)
}

/// Assembles a degeneration of direct sums from summand-wise edges:
/// reflexive summands are free, non-reflexive ones must carry a citation
/// note. The block bookkeeping against the catalog sums is exact.
pub fn derive_direct_sum_edge(
    cat: &Catalog,
    spec: &DirectSumSpec,
) -> Result<Edge, CurveError> {
    let mut src_sum: Option<StructureTensor<ExactScalar>> = None;
    let mut tgt_sum: Option<StructureTensor<ExactScalar>> = None;
    let mut via = Vec::new();
    for part in &spec.parts {
        if part.source != part.target && part.note.is_none() {
            return Err(CurveError::BadSum {
                id: spec.id.clone(),
                detail: format!(
                    "summand {} -> {} is neither reflexive nor cited",
                    part.source, part.target
                ),
            });
        }
        let s = cat.instantiate(&AlgebraId::plain(&part.source))?;
        let t = cat.instantiate(&AlgebraId::plain(&part.target))?;
        src_sum = Some(match src_sum {
            None => s,
            Some(acc) => acc.direct_sum(&s),
        });
        tgt_sum = Some(match tgt_sum {
            None => t,
            Some(acc) => acc.direct_sum(&t),
        });
        via.push(if part.source == part.target {
            part.source.clone()
        } else {
            format!("{}->{}", part.source, part.target)
        });
    }
    let (Some(src_sum), Some(tgt_sum)) = (src_sum, tgt_sum) else {
        return Err(CurveError::BadSum {
            id: spec.id.clone(),
            detail: "no summands".into(),
        });
    };
    let src_expect = cat.instantiate(&AlgebraId::plain(&spec.sum_source))?;
    let tgt_expect = cat.instantiate(&AlgebraId::plain(&spec.sum_target))?;
    if !tensors_equal(&src_sum, &src_expect) {
        return Err(CurveError::BadSum {
            id: spec.id.clone(),
            detail: format!(
                "summand sources do not assemble to {}: {}",
                spec.sum_source,
                first_diff(&src_sum, &src_expect)
            ),
        });
    }
    if !tensors_equal(&tgt_sum, &tgt_expect) {
        return Err(CurveError::BadSum {
            id: spec.id.clone(),
            detail: format!(
                "summand targets do not assemble to {}: {}",
                spec.sum_target,
                first_diff(&tgt_sum, &tgt_expect)
            ),
        });
    }
    Ok(Edge {
        from: spec.sum_source.clone(),
        to: spec.sum_target.clone(),
        provenance: EdgeProvenance::DirectSum {
            via: via.join(" (+) "),
        },
    })
}

/// Block-diagonal combination of curves on the summands, for re-verifying
/// a direct-sum edge end to end when every summand edge is itself backed
/// by a curve. All parts must be parameter-free with one special point at
/// the same t0.
pub fn block_diagonal_curve(
    id: &str,
    sum_source: &str,
    sum_target: &str,
    parts: &[&CurveSpec],
) -> Result<CurveSpec, CurveError> {
    let mut t0: Option<String> = None;
    for p in parts {
        if !p.free_params.is_empty() || !p.source.param_path.is_empty() {
            return Err(CurveError::BadSum {
                id: id.to_string(),
                detail: format!("summand curve {} is not parameter-free", p.id),
            });
        }
        let [sp] = p.special_points.as_slice() else {
            return Err(CurveError::BadSum {
                id: id.to_string(),
                detail: format!("summand curve {} must have one special point", p.id),
            });
        };
        if sp.witness.is_some() || !sp.target.params.is_empty() {
            return Err(CurveError::BadSum {
                id: id.to_string(),
                detail: format!("summand curve {} has a decorated special point", p.id),
            });
        }
        match &t0 {
            None => t0 = Some(sp.t0.clone()),
            Some(prev) if prev == &sp.t0 => {}
            Some(_) => {
                return Err(CurveError::BadSum {
                    id: id.to_string(),
                    detail: "summand curves disagree on the special point".into(),
                })
            }
        }
    }
    let t0 = t0.ok_or_else(|| CurveError::BadSum {
        id: id.to_string(),
        detail: "no summands".into(),
    })?;
    let total: usize = parts.iter().map(|p| p.matrix.len()).sum();
    let mut matrix = vec![vec!["0".to_string(); total]; total];
    let mut offset = 0;
    for p in parts {
        let m = p.matrix.len();
        for (r, row) in p.matrix.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                matrix[offset + r][offset + c] = e.clone();
            }
        }
        offset += m;
    }
    Ok(CurveSpec {
        id: id.to_string(),
        source: SourceSpec {
            label: sum_source.to_string(),
            param_path: BTreeMap::new(),
        },
        free_params: BTreeMap::new(),
        matrix,
        expect_det: None,
        special_points: vec![SpecialPoint {
            t0,
            target: IdSpec {
                label: sum_target.to_string(),
                params: Vec::new(),
            },
            family_target: false,
            witness: None,
        }],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Verdicts for the six necessary conditions an edge A -> B must satisfy:
/// dim Aut strictly grows, dim Ann grows weakly, every power dimension
/// shrinks weakly, the associative center grows weakly, the nilindex
/// shrinks weakly, and associative algebras only reach associative ones.
#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub a: String,
    pub b: String,
    pub conditions: Vec<ConditionCheck>,
}

impl ObstructionReport {
    pub fn from_profiles(
        a: &str,
        b: &str,
        pa: &InvariantProfile,
        pb: &InvariantProfile,
    ) -> Self {
        let mut conditions = Vec::with_capacity(6);
        conditions.push(ConditionCheck {
            name: "aut_strict",
            passed: pa.der_dim < pb.der_dim,
            detail: format!("dim Aut {} -> {}", pa.der_dim, pb.der_dim),
        });
        conditions.push(ConditionCheck {
            name: "annihilator",
            passed: pa.ann_dim <= pb.ann_dim,
            detail: format!("dim Ann {} -> {}", pa.ann_dim, pb.ann_dim),
        });
        let m = pa.power_dims.len().max(pb.power_dims.len());
        let dim_at = |dims: &[usize], k: usize| dims.get(k).copied().unwrap_or(0);
        let powers_ok = (0..m)
            .all(|k| dim_at(&pa.power_dims, k) >= dim_at(&pb.power_dims, k));
        conditions.push(ConditionCheck {
            name: "powers",
            passed: powers_ok,
            detail: format!("{:?} -> {:?}", pa.power_dims, pb.power_dims),
        });
        conditions.push(ConditionCheck {
            name: "center",
            passed: pa.center_dim <= pb.center_dim,
            detail: format!("dim Z {} -> {}", pa.center_dim, pb.center_dim),
        });
        conditions.push(ConditionCheck {
            name: "nilindex",
            passed: pa.nilindex >= pb.nilindex,
            detail: format!("nilindex {} -> {}", pa.nilindex, pb.nilindex),
        });
        conditions.push(ConditionCheck {
            name: "associativity",
            passed: !(pa.associative && !pb.associative),
            detail: format!("associative {} -> {}", pa.associative, pb.associative),
        });
        ObstructionReport {
            a: a.to_string(),
            b: b.to_string(),
            conditions,
        }
    }

    pub fn blocked(&self) -> bool {
        self.conditions.iter().any(|c| !c.passed)
    }

    pub fn failing(&self) -> Vec<&'static str> {
        self.conditions
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }
}

/// Evaluates the six necessary conditions for a degeneration A -> B from
/// freshly computed invariant profiles.
pub fn check_obstructions(
    cat: &Catalog,
    a: &AlgebraId,
    b: &AlgebraId,
) -> Result<ObstructionReport, CurveError> {
    let ta = cat.instantiate_unchecked(a)?;
    let tb = cat.instantiate_unchecked(b)?;
    let pa = invariant_profile(&ta)?;
    let pb = invariant_profile(&tb)?;
    Ok(ObstructionReport::from_profiles(
        &a.to_string(),
        &b.to_string(),
        &pa,
        &pb,
    ))
}
