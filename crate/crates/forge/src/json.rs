//! The `segal-forge/1` JSON formats.
//!
//! Every top-level document is an object carrying `"format": "segal-forge/1"`
//! and a `"kind"`. Labels are strings; maps are label-to-label objects.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use segal_core::alg::{AlgChain, AlgMorphism};
use segal_core::finset::{FinMap, FinSet};
use segal_core::hall::{BigRational, IncidenceElement};
use segal_core::poset::{FinCat, FinPoset};
use segal_core::sset::SSet;

pub const FORMAT: &str = "segal-forge/1";

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {message}")]
    Syntax { path: String, message: String },
    #[error("{0}")]
    Content(#[from] segal_core::Error),
    #[error("unsupported format {0:?}, expected {FORMAT:?}")]
    Version(String),
}

/// Parses a document, reporting the JSON path of the first offending value.
pub fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| FormatError::Syntax {
        path: match e.path().to_string().as_str() {
            "." => "$".to_string(),
            p => format!("$.{p}"),
        },
        message: e.into_inner().to_string(),
    })
}

/// What produced a document: enough to reproduce it byte for byte.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub command: String,
    pub inputs: Vec<String>,
    pub bounds: BTreeMap<String, Value>,
    pub output: String,
    pub seed: Option<u64>,
}

fn check_version(format: &str) -> Result<(), FormatError> {
    if format != FORMAT {
        return Err(FormatError::Version(format.to_string()));
    }
    Ok(())
}

fn set(labels: &[String]) -> Result<FinSet, FormatError> {
    Ok(FinSet::new(labels.iter().cloned())?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinMapDoc {
    pub source: Vec<String>,
    pub target: Vec<String>,
    pub map: BTreeMap<String, String>,
}

impl FinMapDoc {
    pub fn from_map(f: &FinMap) -> Self {
        FinMapDoc {
            source: f.source().labels().to_vec(),
            target: f.target().labels().to_vec(),
            map: (0..f.source().len()).map(|i| (f.source().label(i).to_string(), f.target().label(f.apply(i)).to_string())).collect(),
        }
    }

    pub fn to_map(&self) -> Result<FinMap, FormatError> {
        let (s, t) = (set(&self.source)?, set(&self.target)?);
        Ok(FinMap::from_labels(s, t, self.map.iter().map(|(a, b)| (a.as_str(), b.as_str())))?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgMorphismDoc {
    pub map: FinMapDoc,
    pub orders: BTreeMap<String, Vec<String>>,
}

impl AlgMorphismDoc {
    pub fn from_morphism(p: &AlgMorphism) -> Self {
        let orders = (0..p.target().len())
            .map(|y| {
                let fiber = p.fiber(y).iter().map(|&x| p.source().label(x).to_string()).collect();
                (p.target().label(y).to_string(), fiber)
            })
            .collect();
        AlgMorphismDoc { map: FinMapDoc::from_map(p.base()), orders }
    }

    pub fn to_morphism(&self) -> Result<AlgMorphism, FormatError> {
        Ok(AlgMorphism::from_label_orders(self.map.to_map()?, &self.orders)?)
    }
}

/// `{"format", "kind": "chain", "chain": [AlgMorphism, …]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDoc {
    pub format: String,
    pub kind: ChainKind,
    pub chain: Vec<AlgMorphismDoc>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainKind {
    Chain,
}

impl ChainDoc {
    pub fn from_chain(c: &AlgChain) -> Self {
        ChainDoc { format: FORMAT.into(), kind: ChainKind::Chain, chain: c.morphisms().iter().map(AlgMorphismDoc::from_morphism).collect() }
    }

    pub fn to_chain(&self) -> Result<AlgChain, FormatError> {
        check_version(&self.format)?;
        let ms = self.chain.iter().map(AlgMorphismDoc::to_morphism).collect::<Result<Vec<_>, _>>()?;
        Ok(AlgChain::new(ms)?)
    }
}

/// `{"format", "kind": "sset", "dim", "levels", "faces": {"m,i": map}, "degens": {"m,i": map}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SSetDoc {
    pub format: String,
    pub kind: SSetKind,
    pub dim: usize,
    pub levels: Vec<Vec<String>>,
    pub faces: BTreeMap<String, BTreeMap<String, String>>,
    pub degens: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<Manifest>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SSetKind {
    Sset,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PosetKind {
    Poset,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CategoryKind {
    Category,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionKind {
    Function,
}

impl SSetDoc {
    pub fn from_sset(x: &SSet) -> Self {
        let mut faces = BTreeMap::new();
        let mut degens = BTreeMap::new();
        let table = |m: usize, to: usize, values: &[usize]| -> BTreeMap<String, String> {
            values.iter().enumerate().map(|(a, &b)| (x.level(m).label(a).to_string(), x.level(to).label(b).to_string())).collect()
        };
        for m in 0..=x.dim() {
            for i in 0..=m {
                if m > 0 {
                    faces.insert(format!("{m},{i}"), table(m, m - 1, x.face_table(m, i)));
                }
                if m < x.dim() {
                    degens.insert(format!("{m},{i}"), table(m, m + 1, x.degen_table(m, i)));
                }
            }
        }
        SSetDoc {
            format: FORMAT.into(),
            kind: SSetKind::Sset,
            dim: x.dim(),
            levels: x.levels().iter().map(|l| l.labels().to_vec()).collect(),
            faces,
            degens,
            manifest: None,
        }
    }

    pub fn to_sset(&self) -> Result<SSet, FormatError> {
        check_version(&self.format)?;
        let dim = self.dim;
        if self.levels.len() != dim + 1 {
            return Err(content(format!("dim {dim} needs {} levels, got {}", dim + 1, self.levels.len())));
        }
        let levels = self.levels.iter().map(|l| set(l)).collect::<Result<Vec<_>, _>>()?;
        let lookup = |kind: &str, tables: &BTreeMap<String, BTreeMap<String, String>>, m: usize, i: usize, to: usize| {
            let key = format!("{m},{i}");
            let t = tables.get(&key).ok_or_else(|| content(format!("{kind} table {key:?} is missing")))?;
            (0..levels[m].len())
                .map(|a| {
                    let l = levels[m].label(a);
                    let v = t.get(l).ok_or_else(|| content(format!("{kind} table {key:?} has no entry for {l:?}")))?;
                    levels[to].index_of(v).ok_or_else(|| content(format!("{kind} table {key:?} sends {l:?} to unknown {v:?}")))
                })
                .collect::<Result<Vec<_>, _>>()
        };
        let mut faces = Vec::with_capacity(dim + 1);
        let mut degens = Vec::with_capacity(dim + 1);
        for m in 0..=dim {
            faces.push(if m == 0 { Vec::new() } else { (0..=m).map(|i| lookup("face", &self.faces, m, i, m - 1)).collect::<Result<_, _>>()? });
            degens.push(if m == dim { Vec::new() } else { (0..=m).map(|i| lookup("degeneracy", &self.degens, m, i, m + 1)).collect::<Result<_, _>>()? });
        }
        let expected_faces: usize = (1..=dim).map(|m| m + 1).sum();
        let expected_degens: usize = (0..dim).map(|m| m + 1).sum();
        if self.faces.len() != expected_faces || self.degens.len() != expected_degens {
            return Err(content("face or degeneracy tables outside the truncation range".into()));
        }
        Ok(SSet::new(dim, levels, faces, degens)?)
    }
}

fn content(msg: String) -> FormatError {
    FormatError::Content(segal_core::Error::Input(msg))
}

/// `{"format", "kind": "poset", "elements", "relations": [[a, b], …]}`; the
/// order is generated by the listed relations.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDoc {
    pub format: String,
    pub kind: PosetKind,
    pub elements: Vec<String>,
    pub relations: Vec<(String, String)>,
}

impl PosetDoc {
    pub fn from_poset(p: &FinPoset) -> Self {
        PosetDoc {
            format: FORMAT.into(),
            kind: PosetKind::Poset,
            elements: p.elements().labels().to_vec(),
            relations: p.covers().iter().map(|&(a, b)| (p.label(a).to_string(), p.label(b).to_string())).collect(),
        }
    }

    pub fn to_poset(&self) -> Result<FinPoset, FormatError> {
        check_version(&self.format)?;
        let elements = set(&self.elements)?;
        let pairs = self
            .relations
            .iter()
            .map(|(a, b)| match (elements.index_of(a), elements.index_of(b)) {
                (Some(i), Some(j)) => Ok((i, j)),
                _ => Err(content(format!("relation {a:?} ≤ {b:?} mentions an unknown element"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FinPoset::generated(elements, &pairs)?)
    }
}

/// `{"format", "objects", "arrows": [{"name", "source", "target"}],
/// "composition": [[f, g, g∘f], …]}`. Identities are implicit and named
/// `id_x`; composites with an identity are implicit.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    pub format: String,
    pub kind: CategoryKind,
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowDoc>,
    #[serde(default)]
    pub composition: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDoc {
    pub name: String,
    pub source: String,
    pub target: String,
}

impl CategoryDoc {
    pub fn to_category(&self) -> Result<FinCat, FormatError> {
        check_version(&self.format)?;
        let objects = set(&self.objects)?;
        let obj = |o: &str| objects.index_of(o).ok_or_else(|| content(format!("unknown object {o:?}")));
        let mut names: Vec<String> = self.objects.iter().map(|o| format!("id_{o}")).collect();
        let mut src: Vec<usize> = (0..objects.len()).collect();
        let mut tgt = src.clone();
        for a in &self.arrows {
            names.push(a.name.clone());
            src.push(obj(&a.source)?);
            tgt.push(obj(&a.target)?);
        }
        let arrows = set(&names)?;
        let arrow = |f: &str| arrows.index_of(f).ok_or_else(|| content(format!("unknown arrow {f:?}")));
        let n = arrows.len();
        let mut compose = vec![vec![None; n]; n];
        for f in 0..n {
            for g in 0..n {
                if tgt[f] == src[g] {
                    if f < objects.len() {
                        compose[f][g] = Some(g);
                    } else if g < objects.len() {
                        compose[f][g] = Some(f);
                    }
                }
            }
        }
        for (f, g, h) in &self.composition {
            let (f, g, h) = (arrow(f)?, arrow(g)?, arrow(h)?);
            compose[f][g] = Some(h);
        }
        let identity = (0..objects.len()).collect();
        Ok(FinCat::new(objects, arrows, src, tgt, identity, compose)?)
    }
}

/// `{"format", "kind": "function", "values": {"label": "num/den"}}`;
/// missing labels are zero. A bare `{"label": "num/den"}` object is also
/// accepted by [`FunctionDoc::parse`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDoc {
    pub format: String,
    pub kind: FunctionKind,
    pub values: BTreeMap<String, String>,
}

pub fn rational_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

impl FunctionDoc {
    pub fn from_element(f: &IncidenceElement) -> Self {
        let values = f.support().into_iter().map(|(l, q)| (l.to_string(), rational_string(q))).collect();
        FunctionDoc { format: FORMAT.into(), kind: FunctionKind::Function, values }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let v: Value = parse(text)?;
        if v.get("format").is_some() {
            return parse(text);
        }
        let values = parse(text)?;
        Ok(FunctionDoc { format: FORMAT.into(), kind: FunctionKind::Function, values })
    }

    pub fn to_element(&self, carrier: &FinSet) -> Result<IncidenceElement, FormatError> {
        check_version(&self.format)?;
        let values = self
            .values
            .iter()
            .map(|(l, v)| {
                BigRational::from_str(v.trim())
                    .map(|q| (l.clone(), q))
                    .map_err(|_| content(format!("value {v:?} of {l:?} is not a rational num/den")))
            })
            .collect::<Result<BTreeMap<_, _>, _>>()?;
        Ok(IncidenceElement::from_sparse(carrier.clone(), &values)?)
    }
}

/// The `kind` of a document, for commands that accept several.
pub fn kind_of(text: &str) -> Result<String, FormatError> {
    let v: Value = parse(text)?;
    let format = v.get("format").and_then(Value::as_str).ok_or_else(|| FormatError::Syntax {
        path: "$.format".into(),
        message: "missing format key".into(),
    })?;
    check_version(format)?;
    match v.get("kind").and_then(Value::as_str) {
        Some(k) => Ok(k.to_string()),
        None => Err(FormatError::Syntax { path: "$.kind".into(), message: "missing kind key".into() }),
    }
}

/// A tagged document for commands that take a poset or a category.
#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Diagram {
    Poset(PosetBody),
    Category(CategoryBody),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetBody {
    pub format: String,
    pub elements: Vec<String>,
    pub relations: Vec<(String, String)>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryBody {
    pub format: String,
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowDoc>,
    #[serde(default)]
    pub composition: Vec<(String, String, String)>,
}

impl Diagram {
    pub fn to_category(&self) -> Result<FinCat, FormatError> {
        match self {
            Diagram::Poset(p) => Ok(FinCat::from_poset(&self.poset_doc(p).to_poset()?)),
            Diagram::Category(c) => CategoryDoc {
                format: c.format.clone(),
                kind: CategoryKind::Category,
                objects: c.objects.clone(),
                arrows: c.arrows.clone(),
                composition: c.composition.clone(),
            }
            .to_category(),
        }
    }

    /// The poset, if the document is one.
    pub fn to_poset(&self) -> Result<Option<FinPoset>, FormatError> {
        match self {
            Diagram::Poset(p) => Ok(Some(self.poset_doc(p).to_poset()?)),
            Diagram::Category(_) => Ok(None),
        }
    }

    fn poset_doc(&self, p: &PosetBody) -> PosetDoc {
        PosetDoc { format: p.format.clone(), kind: PosetKind::Poset, elements: p.elements.clone(), relations: p.relations.clone() }
    }
}
