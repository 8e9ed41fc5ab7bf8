//! The structure-constant catalog: the on-disk schema, load-time
//! validation, instantiation of entries and one-parameter paths inside
//! families, expected-invariant resolution, and isomorphism witnesses.

use crate::invariants::InvariantProfile;
use crate::scalar::{
    parse_const_expr, parse_with_ratfunc_bindings, ExactScalar, RatFunc, ScalarError,
};
use crate::tensor::{apply_basis_change, tensors_equal, BasisChange, StructureTensor};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

/// A concrete algebra: a catalog label plus exact parameter values for
/// each formal parameter of the entry.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraId {
    pub label: String,
    pub params: Vec<ExactScalar>,
}

impl AlgebraId {
    pub fn plain(label: &str) -> Self {
        AlgebraId {
            label: label.to_string(),
            params: Vec::new(),
        }
    }

    pub fn with_params(label: &str, params: Vec<ExactScalar>) -> Self {
        AlgebraId {
            label: label.to_string(),
            params,
        }
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.params.is_empty() {
            return write!(f, "{}", self.label);
        }
        let ps: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
        write!(f, "{}[{}]", self.label, ps.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("cannot read catalog: {0}")]
    Read(String),
    #[error("cannot parse catalog JSON: {0}")]
    Json(String),
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("{label}: expected {expected} parameter(s), got {got}")]
    ParamCount {
        label: String,
        expected: usize,
        got: usize,
    },
    #[error("{label}: parameter {param} takes an excluded value {value}")]
    ExcludedValue {
        label: String,
        param: String,
        value: String,
    },
    #[error("{label}: constraint {constraint} != 0 is violated")]
    ConstraintViolated { label: String, constraint: String },
    #[error("{label}: bad product table: {detail}")]
    InvalidProduct { label: String, detail: String },
    #[error("{label}: product at sample {sample} violates the Jordan identity")]
    NotJordan { label: String, sample: String },
    #[error("{label}: declared direct sum does not match the product table")]
    SumMismatch { label: String },
    #[error("{label}: {detail}")]
    BadEntry { label: String, detail: String },
    #[error("witness {source_id} -> {target_id} failed: {detail}")]
    WitnessFailed {
        source_id: String,
        target_id: String,
        detail: String,
    },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// One formal parameter of a family, with values excluded from the domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub excluded: Vec<String>,
}

/// n_i n_j = coeff n_k with 1-based indices and i <= j; coeff is an
/// expression in the entry's parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductSpec {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub coeff: String,
}

/// Reference to a catalog entry at concrete parameter expressions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdSpec {
    pub label: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<String>,
}

/// Invariant values an entry is expected to have; unset fields are not
/// checked. `aut_dim` is the derivation dimension (automorphism group
/// dimension in characteristic zero), `j2_dim` the dimension of the
/// square under full-sum powers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedFragment {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aut_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ann_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j2_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nilindex: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jacobi_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h2_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nilpotency_type: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub associative: Option<bool>,
}

impl ExpectedFragment {
    fn is_empty_frag(&self) -> bool {
        self == &ExpectedFragment::default()
    }

    fn merge_from(&mut self, other: &ExpectedFragment) {
        macro_rules! take {
            ($($f:ident),*) => {
                $(if other.$f.is_some() { self.$f = other.$f.clone(); })*
            };
        }
        take!(
            aut_dim,
            ann_dim,
            j2_dim,
            nilindex,
            center_dim,
            jacobi_dim,
            h2_dim,
            nilpotency_type,
            associative
        );
    }

    /// Field-by-field comparison against a computed profile; returns one
    /// message per mismatch, empty when everything agrees.
    pub fn mismatches(&self, p: &InvariantProfile) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |name: &str, expected: Option<usize>, got: usize| {
            if let Some(e) = expected {
                if e != got {
                    out.push(format!("{name}: expected {e}, computed {got}"));
                }
            }
        };
        check("aut_dim", self.aut_dim, p.der_dim);
        check("ann_dim", self.ann_dim, p.ann_dim);
        check("j2_dim", self.j2_dim, p.power_dims.get(1).copied().unwrap_or(0));
        check("nilindex", self.nilindex, p.nilindex);
        check("center_dim", self.center_dim, p.center_dim);
        check("jacobi_dim", self.jacobi_dim, p.jacobi_dim);
        check("h2_dim", self.h2_dim, p.h2_dim);
        if let Some(t) = &self.nilpotency_type {
            if t != &p.nilpotency_type {
                out.push(format!(
                    "nilpotency_type: expected {:?}, computed {:?}",
                    t, p.nilpotency_type
                ));
            }
        }
        if let Some(a) = self.associative {
            if a != p.associative {
                out.push(format!(
                    "associative: expected {a}, computed {}",
                    p.associative
                ));
            }
        }
        out
    }
}

/// Guard: the fragment applies when every `when_zero` expression
/// evaluates to zero and every `when_nonzero` expression does not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GuardedCase {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub when_zero: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub when_nonzero: Vec<String>,
    pub fragment: ExpectedFragment,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "ExpectedFragment::is_empty_frag")]
    pub base: ExpectedFragment,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cases: Vec<GuardedCase>,
}

/// An explicit isomorphism: rows of `matrix` are the new basis vectors in
/// the source entry's coordinates. `free_params` enumerates sample values
/// for auxiliary symbols; `source_params` pins the source family's
/// parameters (as expressions in the free symbols) and `target` names the
/// isomorphic catalog instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessSpec {
    pub target: IdSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub source_params: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub free_params: BTreeMap<String, Vec<String>>,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntrySpec {
    pub label: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<ParamSpec>,
    /// Expressions in the parameters that must stay nonzero.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub nonzero: Vec<String>,
    pub products: Vec<ProductSpec>,
    /// Labels whose direct sum this entry's table must equal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sum_of: Option<Vec<String>>,
    /// This entry is the same algebra as another one (witnessed below);
    /// aliases are kept out of the dominance graph.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alias_of: Option<IdSpec>,
    /// Union node of the family closure this entry belongs to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub member_of: Option<String>,
    /// Parameter path (expressions in t and this entry's own parameters)
    /// inside the base family of `member_of` that reaches this entry at
    /// t = 0.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub base_path: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub default_samples: Vec<Vec<String>>,
    /// Samples used as graph nodes when they differ from the default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph_samples: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<WitnessSpec>,
}

impl EntrySpec {
    pub fn param_names(&self) -> Vec<&str> {
        self.params.iter().map(|p| p.name.as_str()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogFile {
    pub entries: Vec<EntrySpec>,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    file: CatalogFile,
    index: BTreeMap<String, usize>,
}

pub fn load_catalog(path: &Path) -> Result<Catalog, CatalogError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CatalogError::Read(format!("{}: {e}", path.display())))?;
    Catalog::from_json(&text)
}

impl Catalog {
    pub fn from_json(text: &str) -> Result<Catalog, CatalogError> {
        let file: CatalogFile =
            serde_json::from_str(text).map_err(|e| CatalogError::Json(e.to_string()))?;
        let mut index = BTreeMap::new();
        for (at, e) in file.entries.iter().enumerate() {
            if index.insert(e.label.clone(), at).is_some() {
                return Err(CatalogError::DuplicateLabel(e.label.clone()));
            }
        }
        let cat = Catalog { file, index };
        cat.validate()?;
        Ok(cat)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.file).expect("catalog serializes");
        s.push('\n');
        s
    }

    pub fn entries(&self) -> &[EntrySpec] {
        &self.file.entries
    }

    pub fn entry(&self, label: &str) -> Result<&EntrySpec, CatalogError> {
        self.index
            .get(label)
            .map(|&i| &self.file.entries[i])
            .ok_or_else(|| CatalogError::UnknownLabel(label.to_string()))
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.file.entries.iter().map(|e| e.label.as_str())
    }

    /// Labels of five-dimensional entries, catalog order.
    pub fn five_dim_labels(&self) -> Vec<&str> {
        self.file
            .entries
            .iter()
            .filter(|e| e.dim == 5)
            .map(|e| e.label.as_str())
            .collect()
    }

    fn validate(&self) -> Result<(), CatalogError> {
        for e in &self.file.entries {
            let bad = |detail: String| CatalogError::BadEntry {
                label: e.label.clone(),
                detail,
            };
            if e.dim == 0 || e.dim > 8 {
                return Err(bad(format!("dimension {} out of range", e.dim)));
            }
            let mut names: Vec<&str> = e.param_names();
            names.sort_unstable();
            names.dedup();
            if names.len() != e.params.len() {
                return Err(bad("duplicate parameter names".into()));
            }
            let mut seen = Vec::new();
            for p in &e.products {
                if p.i == 0 || p.j == 0 || p.k == 0 || p.i > e.dim || p.j > e.dim || p.k > e.dim {
                    return Err(CatalogError::InvalidProduct {
                        label: e.label.clone(),
                        detail: format!("index out of range in ({},{},{})", p.i, p.j, p.k),
                    });
                }
                if p.i > p.j {
                    return Err(CatalogError::InvalidProduct {
                        label: e.label.clone(),
                        detail: format!("indices not sorted in ({},{},{})", p.i, p.j, p.k),
                    });
                }
                if seen.contains(&(p.i, p.j, p.k)) {
                    return Err(CatalogError::InvalidProduct {
                        label: e.label.clone(),
                        detail: format!("duplicate product ({},{},{})", p.i, p.j, p.k),
                    });
                }
                seen.push((p.i, p.j, p.k));
            }
            if !e.params.is_empty() && e.default_samples.is_empty() {
                return Err(bad("family without default samples".into()));
            }
            for s in e
                .default_samples
                .iter()
                .chain(e.graph_samples.iter().flatten())
            {
                if s.len() != e.params.len() {
                    return Err(bad(format!(
                        "sample arity {} does not match {} parameter(s)",
                        s.len(),
                        e.params.len()
                    )));
                }
            }
            // Jordan identity at every default sample (or at the single
            // instance for parameterless entries).
            for id in self.default_ids_of(e)? {
                let t = self.instantiate(&id)?;
                if !t.is_jordan() {
                    return Err(CatalogError::NotJordan {
                        label: e.label.clone(),
                        sample: id.to_string(),
                    });
                }
            }
            if let Some(parts) = &e.sum_of {
                let mut sum: Option<StructureTensor<ExactScalar>> = None;
                for part in parts {
                    let pe = self.entry(part)?;
                    if !pe.params.is_empty() {
                        return Err(bad(format!("direct summand {part} has parameters")));
                    }
                    let pt = self.instantiate(&AlgebraId::plain(part))?;
                    sum = Some(match sum {
                        None => pt,
                        Some(acc) => acc.direct_sum(&pt),
                    });
                }
                let whole = self.instantiate_unchecked(&AlgebraId::plain(&e.label))?;
                match sum {
                    Some(s) if tensors_equal(&s, &whole) => {}
                    _ => return Err(CatalogError::SumMismatch {
                        label: e.label.clone(),
                    }),
                }
            }
            if let Some(alias) = &e.alias_of {
                let target = self.entry(&alias.label)?;
                if alias.params.len() != target.params.len() {
                    return Err(bad(format!(
                        "alias target {} takes {} parameter(s)",
                        alias.label,
                        target.params.len()
                    )));
                }
                if !e
                    .witnesses
                    .iter()
                    .any(|w| w.target.label == alias.label)
                {
                    return Err(bad(format!(
                        "alias of {} has no witness to it",
                        alias.label
                    )));
                }
            }
            if let Some(union) = &e.member_of {
                let base = union_base_label(union).ok_or_else(|| {
                    bad(format!("malformed union node name {union}"))
                })?;
                let base_entry = self.entry(&base)?;
                if e.base_path.len() != base_entry.params.len() {
                    return Err(bad(format!(
                        "base path arity {} does not match {} parameter(s) of {base}",
                        e.base_path.len(),
                        base_entry.params.len()
                    )));
                }
            } else if !e.base_path.is_empty() {
                return Err(bad("base path without a union membership".into()));
            }
            for w in &e.witnesses {
                self.entry(&w.target.label)?;
                if w.matrix.len() != e.dim || w.matrix.iter().any(|r| r.len() != e.dim) {
                    return Err(bad(format!(
                        "witness to {} has a non {dim}x{dim} matrix",
                        w.target.label,
                        dim = e.dim
                    )));
                }
                if w.source_params.len() != e.params.len() {
                    return Err(bad(format!(
                        "witness to {} pins {} of {} source parameter(s)",
                        w.target.label,
                        w.source_params.len(),
                        e.params.len()
                    )));
                }
                if w.free_params.values().any(|v| v.is_empty()) {
                    return Err(bad(format!(
                        "witness to {} has a free symbol without samples",
                        w.target.label
                    )));
                }
            }
        }
        Ok(())
    }

    fn bindings_for(
        entry: &EntrySpec,
        params: &[ExactScalar],
    ) -> Result<BTreeMap<String, ExactScalar>, CatalogError> {
        if params.len() != entry.params.len() {
            return Err(CatalogError::ParamCount {
                label: entry.label.clone(),
                expected: entry.params.len(),
                got: params.len(),
            });
        }
        Ok(entry
            .params
            .iter()
            .zip(params)
            .map(|(p, v)| (p.name.clone(), v.clone()))
            .collect())
    }

    fn build_tensor(
        entry: &EntrySpec,
        bindings: &BTreeMap<String, ExactScalar>,
    ) -> Result<StructureTensor<ExactScalar>, CatalogError> {
        let mut t = StructureTensor::zero(entry.dim);
        for p in &entry.products {
            let c = parse_const_expr(&p.coeff, bindings)?;
            t.set_product(p.i - 1, p.j - 1, p.k - 1, c);
        }
        Ok(t)
    }

    /// Strict instantiation: parameter domain constraints are enforced.
    pub fn instantiate(
        &self,
        id: &AlgebraId,
    ) -> Result<StructureTensor<ExactScalar>, CatalogError> {
        let entry = self.entry(&id.label)?;
        let bindings = Self::bindings_for(entry, &id.params)?;
        for (spec, value) in entry.params.iter().zip(&id.params) {
            for ex in &spec.excluded {
                let e = parse_const_expr(ex, &BTreeMap::new())?;
                if &e == value {
                    return Err(CatalogError::ExcludedValue {
                        label: id.label.clone(),
                        param: spec.name.clone(),
                        value: value.to_string(),
                    });
                }
            }
        }
        for con in &entry.nonzero {
            if parse_const_expr(con, &bindings)?.is_zero() {
                return Err(CatalogError::ConstraintViolated {
                    label: id.label.clone(),
                    constraint: con.clone(),
                });
            }
        }
        Self::build_tensor(entry, &bindings)
    }

    /// Arity-checked instantiation that ignores domain constraints; used
    /// when a witness pins a family at a boundary value on purpose.
    pub fn instantiate_unchecked(
        &self,
        id: &AlgebraId,
    ) -> Result<StructureTensor<ExactScalar>, CatalogError> {
        let entry = self.entry(&id.label)?;
        let bindings = Self::bindings_for(entry, &id.params)?;
        Self::build_tensor(entry, &bindings)
    }

    /// Instantiation along a parameter path: each parameter becomes a
    /// rational function of t. A path constantly equal to an excluded
    /// value is rejected, as is one that kills a nonzero constraint
    /// identically; hitting a boundary value at isolated points is fine.
    pub fn instantiate_path(
        &self,
        label: &str,
        paths: &[RatFunc],
    ) -> Result<StructureTensor<RatFunc>, CatalogError> {
        let entry = self.entry(label)?;
        if paths.len() != entry.params.len() {
            return Err(CatalogError::ParamCount {
                label: label.to_string(),
                expected: entry.params.len(),
                got: paths.len(),
            });
        }
        for (spec, path) in entry.params.iter().zip(paths) {
            for ex in &spec.excluded {
                let e = parse_const_expr(ex, &BTreeMap::new())?;
                if path == &RatFunc::constant(e) {
                    return Err(CatalogError::ExcludedValue {
                        label: label.to_string(),
                        param: spec.name.clone(),
                        value: path.to_string(),
                    });
                }
            }
        }
        let bindings: BTreeMap<String, RatFunc> = entry
            .params
            .iter()
            .zip(paths)
            .map(|(p, v)| (p.name.clone(), v.clone()))
            .collect();
        for con in &entry.nonzero {
            if parse_with_ratfunc_bindings(con, &bindings)?.is_zero() {
                return Err(CatalogError::ConstraintViolated {
                    label: label.to_string(),
                    constraint: con.clone(),
                });
            }
        }
        let mut t = StructureTensor::zero(entry.dim);
        for p in &entry.products {
            let c = parse_with_ratfunc_bindings(&p.coeff, &bindings)?;
            t.set_product(p.i - 1, p.j - 1, p.k - 1, c);
        }
        Ok(t)
    }

    fn parse_sample(sample: &[String]) -> Result<Vec<ExactScalar>, CatalogError> {
        sample
            .iter()
            .map(|s| Ok(parse_const_expr(s, &BTreeMap::new())?))
            .collect()
    }

    fn default_ids_of(&self, entry: &EntrySpec) -> Result<Vec<AlgebraId>, CatalogError> {
        if entry.params.is_empty() {
            return Ok(vec![AlgebraId::plain(&entry.label)]);
        }
        entry
            .default_samples
            .iter()
            .map(|s| Ok(AlgebraId::with_params(&entry.label, Self::parse_sample(s)?)))
            .collect()
    }

    /// The concrete instances checked by default: the entry itself for
    /// fixed entries, the default samples for families.
    pub fn default_ids(&self, label: &str) -> Result<Vec<AlgebraId>, CatalogError> {
        let entry = self.entry(label)?;
        self.default_ids_of(entry)
    }

    /// Instances representing this entry in the dominance graph.
    pub fn graph_ids(&self, label: &str) -> Result<Vec<AlgebraId>, CatalogError> {
        let entry = self.entry(label)?;
        match &entry.graph_samples {
            Some(samples) => samples
                .iter()
                .map(|s| Ok(AlgebraId::with_params(label, Self::parse_sample(s)?)))
                .collect(),
            None => self.default_ids_of(entry),
        }
    }

    /// Resolves the expected-invariant table at concrete parameters:
    /// guarded cases overlay the base fragment in order.
    pub fn expected_invariants(
        &self,
        id: &AlgebraId,
    ) -> Result<ExpectedFragment, CatalogError> {
        let entry = self.entry(&id.label)?;
        let bindings = Self::bindings_for(entry, &id.params)?;
        let Some(expected) = &entry.expected else {
            return Ok(ExpectedFragment::default());
        };
        let mut out = expected.base.clone();
        for case in &expected.cases {
            let mut holds = true;
            for g in &case.when_zero {
                if !parse_const_expr(g, &bindings)?.is_zero() {
                    holds = false;
                    break;
                }
            }
            if holds {
                for g in &case.when_nonzero {
                    if parse_const_expr(g, &bindings)?.is_zero() {
                        holds = false;
                        break;
                    }
                }
            }
            if holds {
                out.merge_from(&case.fragment);
            }
        }
        Ok(out)
    }

    /// Checks one witness at every sample of its free symbols; returns
    /// the verified (source, target) instance pairs.
    pub fn verify_witness(
        &self,
        source_label: &str,
        w: &WitnessSpec,
    ) -> Result<Vec<(AlgebraId, AlgebraId)>, CatalogError> {
        let mut verified = Vec::new();
        for binding in free_param_combinations(&w.free_params)? {
            let source_params: Vec<ExactScalar> = w
                .source_params
                .iter()
                .map(|s| Ok::<_, CatalogError>(parse_const_expr(s, &binding)?))
                .collect::<Result<_, _>>()?;
            let source_id = AlgebraId::with_params(source_label, source_params);
            let target_params: Vec<ExactScalar> = w
                .target
                .params
                .iter()
                .map(|s| Ok::<_, CatalogError>(parse_const_expr(s, &binding)?))
                .collect::<Result<_, _>>()?;
            let target_id = AlgebraId::with_params(&w.target.label, target_params);
            let source = self.instantiate_unchecked(&source_id)?;
            let target = self.instantiate_unchecked(&target_id)?;
            let rows: Vec<Vec<ExactScalar>> = w
                .matrix
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|s| Ok::<_, CatalogError>(parse_const_expr(s, &binding)?))
                        .collect()
                })
                .collect::<Result<_, _>>()?;
            let g = BasisChange::new(rows);
            if g.det().is_zero() {
                return Err(CatalogError::WitnessFailed {
                    source_id: source_id.to_string(),
                    target_id: target_id.to_string(),
                    detail: "matrix is singular".into(),
                });
            }
            let moved = apply_basis_change(&source, &g).map_err(|e| {
                CatalogError::WitnessFailed {
                    source_id: source_id.to_string(),
                    target_id: target_id.to_string(),
                    detail: e.to_string(),
                }
            })?;
            if !tensors_equal(&moved, &target) {
                return Err(CatalogError::WitnessFailed {
                    source_id: source_id.to_string(),
                    target_id: target_id.to_string(),
                    detail: "transformed product table differs from the target".into(),
                });
            }
            verified.push((source_id, target_id));
        }
        Ok(verified)
    }

    /// Runs every witness of every entry; returns the verified pairs.
    pub fn verify_all_witnesses(
        &self,
    ) -> Result<Vec<(AlgebraId, AlgebraId)>, CatalogError> {
        let mut all = Vec::new();
        for e in &self.file.entries {
            for w in &e.witnesses {
                all.extend(self.verify_witness(&e.label, w)?);
            }
        }
        Ok(all)
    }
}

/// "N_27#" names the closure-union of the family "J_27".
pub fn union_base_label(union: &str) -> Option<String> {
    let stem = union.strip_prefix("N_")?.strip_suffix('#')?;
    if stem.is_empty() {
        None
    } else {
        Some(format!("J_{stem}"))
    }
}

/// Cartesian product of the sample lists, as one binding map per choice.
pub(crate) fn free_param_combinations(
    free: &BTreeMap<String, Vec<String>>,
) -> Result<Vec<BTreeMap<String, ExactScalar>>, CatalogError> {
    let mut combos = vec![BTreeMap::new()];
    for (name, samples) in free {
        let mut next = Vec::with_capacity(combos.len() * samples.len());
        for combo in &combos {
            for s in samples {
                let v = parse_const_expr(s, &BTreeMap::new())?;
                let mut c = combo.clone();
                c.insert(name.clone(), v);
                next.push(c);
            }
        }
        combos = next;
    }
    Ok(combos)
}
