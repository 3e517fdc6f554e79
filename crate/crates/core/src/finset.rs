//! Explicit finite sets, total functions between them, and the finite
//! limits and colimits the rest of the crate is built from.
//!
//! Elements are opaque string labels kept in a fixed order. Constructed sets
//! get canonical labels: a pullback element is `(a|b)`, a pushout class is
//! `class#k` where classes are numbered by their least member, reading the
//! left target before the right target.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use smallvec::SmallVec;

use crate::error::{input_err, Result};

/// Sets up to this size are searched linearly instead of through an index.
const SMALL: usize = 16;

struct Labels {
    labels: Vec<String>,
    index: Option<BTreeMap<String, usize>>,
}

/// An ordered finite set of distinct labels. Cloning is cheap.
#[derive(Clone)]
pub struct FinSet(Arc<Labels>);

impl FinSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() <= SMALL {
            if let Some((_, l)) = labels.iter().enumerate().find(|(i, l)| labels[..*i].contains(l)) {
                return Err(input_err!("duplicate label {l:?} in finite set"));
            }
            return Ok(FinSet(Arc::new(Labels { labels, index: None })));
        }
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(input_err!("duplicate label {l:?} in finite set"));
            }
        }
        Ok(FinSet(Arc::new(Labels { labels, index: Some(index) })))
    }

    /// `{0, 1, ..., n-1}` with decimal labels.
    pub fn range(n: usize) -> Self {
        Self::new((0..n).map(|i| i.to_string())).expect("decimal labels are distinct")
    }

    pub fn empty() -> Self {
        Self::range(0)
    }

    pub fn singleton(label: &str) -> Self {
        Self::new([label]).expect("one label")
    }

    pub fn len(&self) -> usize {
        self.0.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        match &self.0.index {
            Some(index) => index.get(label).copied(),
            None => self.0.labels.iter().position(|l| l == label),
        }
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index_of(label).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> + '_ {
        self.0.labels.iter().map(String::as_str)
    }

    /// Every label prefixed with `tag:`.
    pub fn tagged(&self, tag: &str) -> Self {
        Self::new(self.iter().map(|l| format!("{tag}:{l}"))).expect("prefixing keeps labels distinct")
    }
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.labels == other.0.labels
    }
}

impl Eq for FinSet {}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.labels.iter()).finish()
    }
}

/// Index tables of maps between small sets stay inline.
type Table = SmallVec<[usize; 4]>;

fn table_from(v: Vec<usize>) -> Table {
    if v.len() <= 4 {
        Table::from_slice(&v)
    } else {
        Table::from_vec(v)
    }
}

/// A total function between two finite sets, stored as an index table.
#[derive(Clone, PartialEq, Eq)]
pub struct FinMap {
    source: FinSet,
    target: FinSet,
    table: Table,
}

impl FinMap {
    pub fn new(source: FinSet, target: FinSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != source.len() {
            return Err(input_err!(
                "map table has {} entries for a source of size {}",
                table.len(),
                source.len()
            ));
        }
        if let Some(bad) = table.iter().find(|&&j| j >= target.len()) {
            return Err(input_err!("map value {bad} outside a target of size {}", target.len()));
        }
        Ok(FinMap { source, target, table: table_from(table) })
    }

    /// Builds a map from `(source label, target label)` pairs covering the source.
    pub fn from_labels<'a, I>(source: FinSet, target: FinSet, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut table = Table::from_elem(usize::MAX, source.len());
        for (a, b) in pairs {
            let i = source.index_of(a).ok_or_else(|| input_err!("{a:?} is not in the map source"))?;
            let j = target.index_of(b).ok_or_else(|| input_err!("{b:?} is not in the map target"))?;
            if table[i] != usize::MAX && table[i] != j {
                return Err(input_err!("{a:?} is assigned twice"));
            }
            table[i] = j;
        }
        if let Some(i) = table.iter().position(|&j| j == usize::MAX) {
            return Err(input_err!("map is not total: {:?} has no value", source.label(i)));
        }
        Ok(FinMap { source, target, table })
    }

    pub fn identity(set: &FinSet) -> Self {
        FinMap { source: set.clone(), target: set.clone(), table: (0..set.len()).collect() }
    }

    /// The unique map out of the empty set.
    pub fn from_empty(target: &FinSet) -> Self {
        FinMap { source: FinSet::empty(), target: target.clone(), table: Table::new() }
    }

    pub fn source(&self) -> &FinSet {
        &self.source
    }

    pub fn target(&self) -> &FinSet {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn apply_label(&self, label: &str) -> Option<&str> {
        self.source.index_of(label).map(|i| self.target.label(self.table[i]))
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &FinMap) -> Result<FinMap> {
        if self.target != g.source {
            return Err(input_err!("cannot compose: codomain {:?} differs from domain {:?}", self.target, g.source));
        }
        Ok(FinMap {
            source: self.source.clone(),
            target: g.target.clone(),
            table: self.table.iter().map(|&j| g.table[j]).collect(),
        })
    }

    /// Preimage of a target element, in source order.
    pub fn fiber(&self, j: usize) -> Vec<usize> {
        (0..self.table.len()).filter(|&i| self.table[i] == j).collect()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = alloc::vec![false; self.target.len()];
        self.table.iter().all(|&j| !core::mem::replace(&mut seen[j], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = alloc::vec![false; self.target.len()];
        for &j in &self.table {
            seen[j] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_bijection(&self) -> bool {
        self.source.len() == self.target.len() && self.is_injective()
    }

    pub fn inverse(&self) -> Option<FinMap> {
        if !self.is_bijection() {
            return None;
        }
        let mut table = Table::from_elem(0, self.table.len());
        for (i, &j) in self.table.iter().enumerate() {
            table[j] = i;
        }
        Some(FinMap { source: self.target.clone(), target: self.source.clone(), table })
    }
}

impl fmt::Debug for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.table.iter().enumerate().map(|(i, &j)| (self.source.label(i), self.target.label(j))))
            .finish()
    }
}

/// The chosen pullback of `f: A → C` and `g: B → C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pullback {
    pub apex: FinSet,
    /// Projection to the domain of `f`.
    pub first: FinMap,
    /// Projection to the domain of `g`.
    pub second: FinMap,
}

/// Pairs `(a|b)` with `f(a) = g(b)`, ordered lexicographically by position.
pub fn pullback(f: &FinMap, g: &FinMap) -> Result<Pullback> {
    if f.target != g.target {
        return Err(input_err!("pullback of maps with different targets"));
    }
    let mut by_value: Vec<Vec<usize>> = alloc::vec![Vec::new(); f.target.len()];
    for (b, &c) in g.table.iter().enumerate() {
        by_value[c].push(b);
    }
    let mut labels = Vec::new();
    let (mut first, mut second) = (Table::new(), Table::new());
    for (a, &c) in f.table.iter().enumerate() {
        for &b in &by_value[c] {
            labels.push(format!("({}|{})", f.source.label(a), g.source.label(b)));
            first.push(a);
            second.push(b);
        }
    }
    let apex = FinSet::new(labels)?;
    Ok(Pullback {
        first: FinMap { source: apex.clone(), target: f.source.clone(), table: first },
        second: FinMap { source: apex.clone(), target: g.source.clone(), table: second },
        apex,
    })
}

impl Pullback {
    /// The unique map from a commuting cone `(u, v)` into the apex.
    pub fn mediate(&self, u: &FinMap, v: &FinMap) -> Result<FinMap> {
        if u.source != v.source || u.target != self.first.target || v.target != self.second.target {
            return Err(input_err!("cone legs do not match the pullback"));
        }
        // Apex elements are ordered by their pair of positions.
        let nb = self.second.target.len();
        let key = |a: usize, b: usize| a * nb + b;
        let keys: Vec<usize> = (0..self.apex.len()).map(|k| key(self.first.table[k], self.second.table[k])).collect();
        let table = (0..u.source.len())
            .map(|x| {
                keys.binary_search(&key(u.table[x], v.table[x]))
                    .map_err(|_| input_err!("cone does not commute at {:?}", u.source.label(x)))
            })
            .collect::<Result<Table>>()?;
        Ok(FinMap { source: u.source.clone(), target: self.apex.clone(), table })
    }
}

/// The chosen pushout of `f: A → B` and `g: A → C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pushout {
    pub apex: FinSet,
    /// Injection of the target of `f`.
    pub first: FinMap,
    /// Injection of the target of `g`.
    pub second: FinMap,
}

/// Union-find over a fixed number of elements.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges two classes keeping the smaller index as root.
    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Class number of every element, classes numbered by least member.
    pub fn classes(&mut self) -> (usize, Vec<usize>) {
        let n = self.parent.len();
        let mut number = alloc::vec![usize::MAX; n];
        let mut out = Vec::with_capacity(n);
        let mut count = 0;
        for x in 0..n {
            let r = self.find(x);
            if number[r] == usize::MAX {
                number[r] = count;
                count += 1;
            }
            out.push(number[r]);
        }
        (count, out)
    }
}

pub fn pushout(f: &FinMap, g: &FinMap) -> Result<Pushout> {
    if f.source != g.source {
        return Err(input_err!("pushout of maps with different sources"));
    }
    let nb = f.target.len();
    let mut uf = UnionFind::new(nb + g.target.len());
    for a in 0..f.source.len() {
        uf.union(f.table[a], nb + g.table[a]);
    }
    let (count, class) = uf.classes();
    let apex = FinSet::new((0..count).map(|k| format!("class#{k}")))?;
    Ok(Pushout {
        first: FinMap { source: f.target.clone(), target: apex.clone(), table: Table::from_slice(&class[..nb]) },
        second: FinMap { source: g.target.clone(), target: apex.clone(), table: Table::from_slice(&class[nb..]) },
        apex,
    })
}

impl Pushout {
    /// The unique map out of the apex induced by a commuting cocone.
    pub fn mediate(&self, u: &FinMap, v: &FinMap) -> Result<FinMap> {
        if u.target != v.target || u.source != self.first.source || v.source != self.second.source {
            return Err(input_err!("cocone legs do not match the pushout"));
        }
        let mut table = Table::from_elem(usize::MAX, self.apex.len());
        let legs = [(&self.first, u), (&self.second, v)];
        for (inj, leg) in legs {
            for x in 0..inj.source.len() {
                let k = inj.table[x];
                let y = leg.table[x];
                if table[k] != usize::MAX && table[k] != y {
                    return Err(input_err!("cocone does not commute on {:?}", self.apex.label(k)));
                }
                table[k] = y;
            }
        }
        Ok(FinMap { source: self.apex.clone(), target: u.target.clone(), table })
    }
}

/// Disjoint union with `L:`/`R:` tags, plus its two injections.
pub fn coproduct(a: &FinSet, b: &FinSet) -> (FinSet, FinMap, FinMap) {
    let set = FinSet::new(a.iter().map(|l| format!("L:{l}")).chain(b.iter().map(|l| format!("R:{l}"))))
        .expect("tags keep labels distinct");
    let left = FinMap { source: a.clone(), target: set.clone(), table: (0..a.len()).collect() };
    let right = FinMap { source: b.clone(), target: set.clone(), table: (a.len()..a.len() + b.len()).collect() };
    (set, left, right)
}

/// A span `left.target ← apex → right.target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Span {
    left: FinMap,
    right: FinMap,
}

impl Span {
    pub fn new(left: FinMap, right: FinMap) -> Result<Self> {
        if left.source != right.source {
            return Err(input_err!("span legs have different apexes"));
        }
        Ok(Span { left, right })
    }

    /// `c = c = c`.
    pub fn identity(set: &FinSet) -> Self {
        Span { left: FinMap::identity(set), right: FinMap::identity(set) }
    }

    pub fn apex(&self) -> &FinSet {
        &self.left.source
    }

    pub fn left(&self) -> &FinMap {
        &self.left
    }

    pub fn right(&self) -> &FinMap {
        &self.right
    }
}

/// Horizontal composite `t ∘ s` through the chosen pullback of the inner legs.
pub fn compose_spans(s: &Span, t: &Span) -> Result<Span> {
    if s.right.target != t.left.target {
        return Err(input_err!("spans do not share a boundary object"));
    }
    let pb = pullback(&s.right, &t.left)?;
    Ok(Span { left: pb.first.then(&s.left)?, right: pb.second.then(&t.right)? })
}

/// An apex bijection `s.apex → t.apex` commuting with both legs, if any.
pub fn span_isomorphism(s: &Span, t: &Span) -> Option<FinMap> {
    if s.left.target != t.left.target || s.right.target != t.right.target || s.apex().len() != t.apex().len() {
        return None;
    }
    // Apex elements can only be matched within the same (left, right) fibre,
    // and inside a fibre any matching works.
    let mut pool: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for y in (0..t.apex().len()).rev() {
        pool.entry((t.left.table[y], t.right.table[y])).or_default().push(y);
    }
    let mut table = Table::with_capacity(s.apex().len());
    for x in 0..s.apex().len() {
        let y = pool.get_mut(&(s.left.table[x], s.right.table[x]))?.pop()?;
        table.push(y);
    }
    Some(FinMap { source: s.apex().clone(), target: t.apex().clone(), table })
}
