//! Finite posets with bitset relations, finite categories with explicit
//! composition tables, twisted arrow categories and the subset lattices
//! `Cart(S)`.
//!
//! Twisted arrows follow one convention throughout: an object of `Tw(D)` is
//! an arrow `f: d → d'`, and a morphism `f₁ → f₂` is a pair `(g, h)` with
//! `f₁ = h ∘ f₂ ∘ g`. For a poset this makes `Tw(P)` the set of intervals
//! `[x;y]` with `[x;y] ≤ [x';y']` iff `x ≤ x' ≤ y' ≤ y`, i.e. an interval
//! maps to each of its subintervals.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{input_err, validation_err, Error, Result};
use crate::finset::{FinMap, FinSet};

/// A square bit matrix; row `i` holds the set `{j : i ≤ j}`.
#[derive(Clone, PartialEq, Eq, Hash)]
struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix { n, words, bits: vec![0; n * words] }
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// Warshall closure.
    fn close(&mut self) {
        for k in 0..self.n {
            let row_k: Vec<u64> = self.row(k).to_vec();
            for i in 0..self.n {
                if self.get(i, k) {
                    for (w, &bits) in row_k.iter().enumerate() {
                        self.bits[i * self.words + w] |= bits;
                    }
                }
            }
        }
    }

    fn is_transitive(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).filter(|&j| self.get(i, j)).all(|j| {
                self.row(j).iter().zip(self.row(i)).all(|(&rj, &ri)| rj & !ri == 0)
            })
        })
    }
}

/// A finite partially ordered set.
#[derive(Clone, PartialEq, Eq)]
pub struct FinPoset {
    elements: FinSet,
    le: BitMatrix,
}

impl core::fmt::Debug for FinPoset {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let covers: Vec<(&str, &str)> =
            self.covers().into_iter().map(|(a, b)| (self.elements.label(a), self.elements.label(b))).collect();
        f.debug_struct("FinPoset").field("elements", &self.elements).field("covers", &covers).finish()
    }
}

impl FinPoset {
    /// The order given by a complete relation, which must already be
    /// reflexive, antisymmetric and transitive.
    pub fn from_relation(elements: FinSet, pairs: &[(usize, usize)]) -> Result<Self> {
        let le = Self::matrix(&elements, pairs)?;
        let p = FinPoset { elements, le };
        if let Some(i) = (0..p.len()).find(|&i| !p.le.get(i, i)) {
            return Err(validation_err!("relation is not reflexive at {:?}", p.elements.label(i)));
        }
        if !p.le.is_transitive() {
            return Err(validation_err!("relation is not transitive"));
        }
        p.check_antisymmetric()?;
        Ok(p)
    }

    /// The reflexive-transitive closure of `pairs`, which must be acyclic.
    pub fn generated(elements: FinSet, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut le = Self::matrix(&elements, pairs)?;
        for i in 0..elements.len() {
            le.set(i, i);
        }
        le.close();
        let p = FinPoset { elements, le };
        p.check_antisymmetric()?;
        Ok(p)
    }

    /// Like [`FinPoset::generated`] with the relation given by a predicate.
    pub fn from_fn(elements: FinSet, le: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = elements.len();
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| le(i, j)).collect();
        Self::from_relation(elements, &pairs)
    }

    fn matrix(elements: &FinSet, pairs: &[(usize, usize)]) -> Result<BitMatrix> {
        let mut le = BitMatrix::new(elements.len());
        for &(i, j) in pairs {
            if i >= elements.len() || j >= elements.len() {
                return Err(input_err!("relation mentions an element outside the poset"));
            }
            le.set(i, j);
        }
        Ok(le)
    }

    fn check_antisymmetric(&self) -> Result<()> {
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.le(i, j) && self.le(j, i) {
                    return Err(validation_err!(
                        "{:?} and {:?} are mutually related",
                        self.elements.label(i),
                        self.elements.label(j)
                    ));
                }
            }
        }
        Ok(())
    }

    /// The ordinal `[n] = {0 < 1 < ⋯ < n}`.
    pub fn chain(n: usize) -> Self {
        Self::from_fn(FinSet::range(n + 1), |i, j| i <= j).expect("total order")
    }

    pub fn discrete(elements: FinSet) -> Self {
        Self::from_fn(elements, |i, j| i == j).expect("discrete order")
    }

    pub fn elements(&self) -> &FinSet {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        self.elements.label(i)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements.index_of(label)
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.le.get(i, j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.le(i, j)
    }

    /// All pairs `i ≤ j`, row by row.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|i| (0..self.len()).filter(move |&j| self.le(i, j)).map(move |j| (i, j))).collect()
    }

    /// The Hasse diagram: pairs `i < j` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|i| self.upper_covers(i).into_iter().map(move |j| (i, j))).collect()
    }

    pub fn upper_covers(&self, i: usize) -> Vec<usize> {
        let n = self.len();
        let mut strict = self.le.row(i).to_vec();
        strict[i / 64] &= !(1 << (i % 64));
        // Elements strictly above something strictly above `i`.
        let mut far = vec![0u64; strict.len()];
        for k in (0..n).filter(|&k| k != i && self.le.get(i, k)) {
            for (w, &bits) in self.le.row(k).iter().enumerate() {
                far[w] |= bits & !(u64::from(w == k / 64) << (k % 64));
            }
        }
        (0..n).filter(|&j| strict[j / 64] >> (j % 64) & 1 == 1 && far[j / 64] >> (j % 64) & 1 == 0).collect()
    }

    pub fn opposite(&self) -> Self {
        Self::from_fn(self.elements.clone(), |i, j| self.le(j, i)).expect("opposite of a poset")
    }

    /// Product order with labels `(a,b)`.
    pub fn product(&self, other: &FinPoset) -> Self {
        let m = other.len();
        let labels = (0..self.len())
            .flat_map(|i| (0..m).map(move |j| format!("({},{})", self.label(i), other.label(j))));
        let elements = FinSet::new(labels).expect("pairs are distinct");
        Self::from_fn(elements, |x, y| self.le(x / m, y / m) && other.le(x % m, y % m)).expect("product order")
    }

    /// Full subposet on the given elements, in the given order.
    pub fn full_subposet(&self, members: &[usize]) -> Result<(FinPoset, PosetMap)> {
        let elements = FinSet::new(members.iter().map(|&i| self.label(i).to_string()))?;
        let sub = Self::from_fn(elements, |a, b| self.le(members[a], members[b]))?;
        let inclusion = PosetMap::new(sub.clone(), self.clone(), members.to_vec())?;
        Ok((sub, inclusion))
    }

    /// Elements in an order compatible with `≤` (a linear extension).
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| (0..self.len()).filter(|&j| self.lt(j, i)).count());
        order
    }

    /// A bijection `σ` with `x ≤ y ⟺ σ(x) ≤ σ(y)`, if one exists.
    pub fn isomorphism_to(&self, other: &FinPoset) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() {
            return None;
        }
        let profile = |p: &FinPoset, i: usize| {
            ((0..p.len()).filter(|&j| p.le(j, i)).count(), (0..p.len()).filter(|&j| p.le(i, j)).count())
        };
        let mut sigma = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            a: &FinPoset,
            b: &FinPoset,
            x: usize,
            sigma: &mut Vec<usize>,
            used: &mut Vec<bool>,
            profile: &dyn Fn(&FinPoset, usize) -> (usize, usize),
        ) -> bool {
            if x == a.len() {
                return true;
            }
            for y in 0..b.len() {
                if used[y] || profile(a, x) != profile(b, y) {
                    continue;
                }
                if (0..x).all(|w| a.le(w, x) == b.le(sigma[w], y) && a.le(x, w) == b.le(y, sigma[w])) {
                    sigma[x] = y;
                    used[y] = true;
                    if go(a, b, x + 1, sigma, used, profile) {
                        return true;
                    }
                    used[y] = false;
                }
            }
            false
        }
        go(self, other, 0, &mut sigma, &mut used, &profile).then_some(sigma)
    }

    pub fn is_isomorphic(&self, other: &FinPoset) -> bool {
        self.isomorphism_to(other).is_some()
    }

    /// Twisted arrow poset: intervals `[x;y]`, each below its subintervals.
    pub fn twisted_arrow(&self) -> FinPoset {
        let intervals = self.intervals();
        let elements = FinSet::new(intervals.iter().map(|&(x, y)| format!("[{};{}]", self.label(x), self.label(y))))
            .expect("intervals are distinct");
        FinPoset::from_fn(elements, |a, b| {
            let ((x, y), (x2, y2)) = (intervals[a], intervals[b]);
            self.le(x, x2) && self.le(y2, y)
        })
        .expect("twisted arrows of a poset form a poset")
    }

    /// All pairs `x ≤ y`, which index the elements of [`FinPoset::twisted_arrow`].
    pub fn intervals(&self) -> Vec<(usize, usize)> {
        self.relations()
    }
}

/// A monotone map of finite posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetMap {
    source: FinPoset,
    target: FinPoset,
    table: Vec<usize>,
}

impl PosetMap {
    pub fn new(source: FinPoset, target: FinPoset, table: Vec<usize>) -> Result<Self> {
        if table.len() != source.len() || table.iter().any(|&t| t >= target.len()) {
            return Err(input_err!("poset map table does not fit its source and target"));
        }
        for (i, j) in source.relations() {
            if !target.le(table[i], table[j]) {
                return Err(input_err!(
                    "map is not monotone: {:?} ≤ {:?} is not preserved",
                    source.label(i),
                    source.label(j)
                ));
            }
        }
        Ok(PosetMap { source, target, table })
    }

    pub fn identity(p: &FinPoset) -> Self {
        PosetMap { source: p.clone(), target: p.clone(), table: (0..p.len()).collect() }
    }

    pub fn source(&self) -> &FinPoset {
        &self.source
    }

    pub fn target(&self) -> &FinPoset {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &PosetMap) -> Result<PosetMap> {
        if self.target != g.source {
            return Err(input_err!("poset maps are not composable"));
        }
        Ok(PosetMap { source: self.source.clone(), target: g.target.clone(), table: self.table.iter().map(|&i| g.table[i]).collect() })
    }

    /// `Tw(f)`: `[x;y] ↦ [f(x);f(y)]`.
    pub fn twisted(&self) -> PosetMap {
        let src = self.source.twisted_arrow();
        let tgt = self.target.twisted_arrow();
        let target_intervals = self.target.intervals();
        let table = self
            .source
            .intervals()
            .iter()
            .map(|&(x, y)| {
                let image = (self.table[x], self.table[y]);
                target_intervals.iter().position(|&iv| iv == image).expect("monotone maps send intervals to intervals")
            })
            .collect();
        PosetMap::new(src, tgt, table).expect("Tw of a monotone map is monotone")
    }

    pub fn as_finmap(&self) -> FinMap {
        FinMap::new(self.source.elements.clone(), self.target.elements.clone(), self.table.clone())
            .expect("poset map tables are in range")
    }
}

/// Every poset with `n` elements, one per isomorphism class.
///
/// Each class has a representative whose order extends the order of the
/// labels `0..n`, so only upper-triangular relations are generated; classes
/// are then separated by a canonical form (least relation mask over all
/// relabellings), which is cheap for the sizes this is used with.
pub fn posets_up_to_iso(n: usize) -> Vec<FinPoset> {
    assert!(n <= 6, "poset enumeration is only meant for tiny sizes");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let lt = |i: usize, j: usize| -> bool {
            i < j && pairs.iter().position(|&p| p == (i, j)).is_some_and(|k| mask >> k & 1 == 1)
        };
        let transitive =
            (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(lt(i, j) && lt(j, k)) || lt(i, k))));
        if !transitive {
            continue;
        }
        let canonical = perms
            .iter()
            .map(|sigma| {
                let mut bits = 0u64;
                for i in 0..n {
                    for j in 0..n {
                        if lt(i, j) {
                            bits |= 1 << (sigma[i] * n + sigma[j]);
                        }
                    }
                }
                bits
            })
            .min()
            .unwrap_or(0);
        if seen.insert(canonical) {
            out.push(FinPoset::from_fn(FinSet::range(n), |i, j| i == j || lt(i, j)).expect("transitive and acyclic"));
        }
    }
    out
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // Next permutation in lexicographic order.
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else { break };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).expect("a larger suffix element");
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

/// Default bound on `|S|` for [`cart_poset`].
pub const CART_BOUND: usize = 10;

/// Subsets of `S` ordered by inclusion, labelled `{a,b}`. Element `i`
/// corresponds to the bitmask `i`.
pub fn cart_poset(s: &FinSet, bound: usize) -> Result<FinPoset> {
    if s.len() > bound {
        return Err(Error::Resource(format!("Cart(S) for |S| = {} exceeds the bound {bound}", s.len())));
    }
    let labels = (0..1usize << s.len()).map(|mask| subset_label(s, mask));
    let elements = FinSet::new(labels)?;
    FinPoset::from_fn(elements, |a, b| a & !b == 0)
}

fn subset_label(s: &FinSet, mask: usize) -> String {
    let members: Vec<&str> = (0..s.len()).filter(|i| mask >> i & 1 == 1).map(|i| s.label(i)).collect();
    format!("{{{}}}", members.join(","))
}

/// The singleton subsets of `S` inside [`cart_poset`], as element indices.
pub fn cart_singletons(s: &FinSet) -> Vec<usize> {
    (0..s.len()).map(|i| 1 << i).collect()
}

/// The preimage map `Cart(T) → Cart(S)` of a pointed map `S₊ → T₊`, given
/// as `f[s] = Some(t)` or `None` for elements sent to the base point.
pub fn cart_preimage(s: &FinSet, t: &FinSet, f: &[Option<usize>], bound: usize) -> Result<PosetMap> {
    if f.len() != s.len() || f.iter().flatten().any(|&x| x >= t.len()) {
        return Err(input_err!("pointed map does not fit its source and target"));
    }
    let table = (0..1usize << t.len())
        .map(|u| (0..s.len()).filter(|&i| f[i].is_some_and(|x| u >> x & 1 == 1)).map(|i| 1 << i).sum())
        .collect();
    PosetMap::new(cart_poset(t, bound)?, cart_poset(s, bound)?, table)
}

/// A small category with an explicit composition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCat {
    objects: FinSet,
    arrows: FinSet,
    src: Vec<usize>,
    tgt: Vec<usize>,
    identity: Vec<usize>,
    /// `compose[f][g] = g ∘ f` when `tgt(f) = src(g)`.
    compose: Vec<Vec<Option<usize>>>,
}

impl FinCat {
    /// Validates composability, unitality and associativity.
    pub fn new(
        objects: FinSet,
        arrows: FinSet,
        src: Vec<usize>,
        tgt: Vec<usize>,
        identity: Vec<usize>,
        compose: Vec<Vec<Option<usize>>>,
    ) -> Result<Self> {
        let (no, na) = (objects.len(), arrows.len());
        if src.len() != na || tgt.len() != na || identity.len() != no || compose.len() != na {
            return Err(input_err!("category tables have the wrong sizes"));
        }
        if src.iter().chain(&tgt).any(|&o| o >= no) || identity.iter().any(|&a| a >= na) {
            return Err(input_err!("category tables point outside the object or arrow sets"));
        }
        let c = FinCat { objects, arrows, src, tgt, identity, compose };
        for (o, &id) in c.identity.iter().enumerate() {
            if c.src[id] != o || c.tgt[id] != o {
                return Err(validation_err!("identity of {:?} is not an endomorphism", c.objects.label(o)));
            }
        }
        for f in 0..na {
            if c.compose[f].len() != na {
                return Err(input_err!("composition table row has the wrong size"));
            }
            for g in 0..na {
                match (c.tgt[f] == c.src[g], c.compose[f][g]) {
                    (true, Some(h)) if h < na && c.src[h] == c.src[f] && c.tgt[h] == c.tgt[g] => {}
                    (false, None) => {}
                    _ => {
                        return Err(validation_err!(
                            "composite of {:?} then {:?} is ill-defined",
                            c.arrows.label(f),
                            c.arrows.label(g)
                        ))
                    }
                }
            }
            if c.then(c.identity[c.src[f]], f) != Some(f) || c.then(f, c.identity[c.tgt[f]]) != Some(f) {
                return Err(validation_err!("identities do not act trivially on {:?}", c.arrows.label(f)));
            }
        }
        for f in 0..na {
            for g in (0..na).filter(|&g| c.tgt[f] == c.src[g]) {
                let fg = c.then(f, g).expect("composable");
                for h in (0..na).filter(|&h| c.tgt[g] == c.src[h]) {
                    if c.then(fg, h) != c.then(f, c.then(g, h).expect("composable")) {
                        return Err(validation_err!("composition is not associative"));
                    }
                }
            }
        }
        Ok(c)
    }

    /// The category of a poset; the arrow `x ≤ y` is labelled `x->y`.
    pub fn from_poset(p: &FinPoset) -> Self {
        let rel = p.relations();
        let arrows = FinSet::new(rel.iter().map(|&(x, y)| format!("{}->{}", p.label(x), p.label(y)))).expect("distinct");
        let index = |x: usize, y: usize| rel.iter().position(|&r| r == (x, y));
        let compose = rel
            .iter()
            .map(|&(x, y)| rel.iter().map(|&(y2, z)| if y == y2 { index(x, z) } else { None }).collect())
            .collect();
        FinCat::new(
            p.elements().clone(),
            arrows,
            rel.iter().map(|r| r.0).collect(),
            rel.iter().map(|r| r.1).collect(),
            (0..p.len()).map(|x| index(x, x).expect("reflexive")).collect(),
            compose,
        )
        .expect("a poset is a category")
    }

    /// The free category on an acyclic quiver. Arrows are paths, labelled by
    /// their edge labels joined with `.` in traversal order, identities `id_x`.
    pub fn free_on_acyclic(objects: FinSet, edges: &[(String, usize, usize)]) -> Result<Self> {
        let no = objects.len();
        let mut paths: Vec<(Vec<usize>, usize, usize)> = (0..no).map(|o| (Vec::new(), o, o)).collect();
        let mut frontier: Vec<usize> = (0..no).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &p in &frontier {
                for (e, &(_, a, b)) in edges.iter().enumerate() {
                    if a >= no || b >= no {
                        return Err(input_err!("quiver edge outside the object set"));
                    }
                    if paths[p].2 == a {
                        let mut path = paths[p].0.clone();
                        path.push(e);
                        if path.len() > no {
                            return Err(input_err!("quiver has a cycle"));
                        }
                        paths.push((path, paths[p].1, b));
                        next.push(paths.len() - 1);
                    }
                }
            }
            frontier = next;
        }
        let label = |(path, o, _): &(Vec<usize>, usize, usize)| {
            if path.is_empty() {
                format!("id_{}", objects.label(*o))
            } else {
                path.iter().map(|&e| edges[e].0.as_str()).collect::<Vec<_>>().join(".")
            }
        };
        let arrows = FinSet::new(paths.iter().map(label))?;
        let compose = paths
            .iter()
            .map(|(pf, _, tf)| {
                paths
                    .iter()
                    .map(|(pg, sg, _)| {
                        (tf == sg).then(|| {
                            let joined: Vec<usize> = pf.iter().chain(pg).copied().collect();
                            paths
                                .iter()
                                .position(|(q, s, _)| *q == joined && (!joined.is_empty() || *s == *sg))
                                .expect("paths are closed under concatenation")
                        })
                    })
                    .collect()
            })
            .collect();
        FinCat::new(
            objects,
            arrows,
            paths.iter().map(|p| p.1).collect(),
            paths.iter().map(|p| p.2).collect(),
            (0..no).collect(),
            compose,
        )
    }

    /// A one-object category from a monoid table `mul[a][b] = a·b`, where
    /// `a·b` means "first `b`, then `a`". Element `unit` is the identity.
    pub fn monoid(elements: FinSet, unit: usize, mul: &[Vec<usize>]) -> Result<Self> {
        let n = elements.len();
        if mul.len() != n || mul.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) || unit >= n {
            return Err(input_err!("monoid table has the wrong shape"));
        }
        let compose = (0..n).map(|f| (0..n).map(|g| Some(mul[g][f])).collect()).collect();
        FinCat::new(FinSet::singleton("*"), elements, vec![0; n], vec![0; n], vec![unit], compose)
    }

    pub fn objects(&self) -> &FinSet {
        &self.objects
    }

    pub fn arrows(&self) -> &FinSet {
        &self.arrows
    }

    pub fn src(&self, f: usize) -> usize {
        self.src[f]
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.tgt[f]
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identity[o]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identity[self.src[f]] == f
    }

    /// `g ∘ f`, when composable.
    pub fn then(&self, f: usize, g: usize) -> Option<usize> {
        self.compose[f][g]
    }

    /// The poset this category is, if it is thin with no nontrivial isomorphisms.
    pub fn as_poset(&self) -> Option<FinPoset> {
        let mut pairs = BTreeSet::new();
        for f in 0..self.arrows.len() {
            if !pairs.insert((self.src[f], self.tgt[f])) {
                return None;
            }
        }
        let pairs: Vec<_> = pairs.into_iter().collect();
        FinPoset::from_relation(self.objects.clone(), &pairs).ok()
    }

    /// `Tw(D)`. Objects are the arrows of `D`; a morphism `f₁ → f₂` is a pair
    /// `(g, h)` with `f₁ = h ∘ f₂ ∘ g`, labelled `(g|f₂|h)`.
    pub fn twisted_arrow(&self) -> FinCat {
        let na = self.arrows.len();
        let mut morphisms: Vec<(usize, usize, usize, usize)> = Vec::new(); // (f1, g, f2, h)
        for f2 in 0..na {
            for g in (0..na).filter(|&g| self.tgt[g] == self.src[f2]) {
                let f2g = self.then(g, f2).expect("composable");
                for h in (0..na).filter(|&h| self.src[h] == self.tgt[f2]) {
                    let f1 = self.then(f2g, h).expect("composable");
                    morphisms.push((f1, g, f2, h));
                }
            }
        }
        morphisms.sort();
        let labels = morphisms
            .iter()
            .map(|&(_, g, f2, h)| format!("({}|{}|{})", self.arrows.label(g), self.arrows.label(f2), self.arrows.label(h)));
        let arrows = FinSet::new(labels).expect("triples are distinct");
        let find = |g: usize, f2: usize, h: usize| {
            morphisms.iter().position(|&(_, g2, f22, h2)| (g2, f22, h2) == (g, f2, h)).expect("closed under composition")
        };
        let identity = (0..na).map(|f| find(self.identity[self.src[f]], f, self.identity[self.tgt[f]])).collect();
        // (g,h): f1 → f2 followed by (g',h'): f2 → f3 is (g'∘g, h∘h').
        let compose = morphisms
            .iter()
            .map(|&(_, g, f2, h)| {
                morphisms
                    .iter()
                    .map(|&(f2b, g2, f3, h2)| {
                        (f2b == f2).then(|| {
                            find(self.then(g, g2).expect("composable"), f3, self.then(h2, h).expect("composable"))
                        })
                    })
                    .collect()
            })
            .collect();
        FinCat::new(
            self.arrows.clone(),
            arrows,
            morphisms.iter().map(|m| m.0).collect(),
            morphisms.iter().map(|m| m.2).collect(),
            identity,
            compose,
        )
        .expect("twisted arrow category is a category")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twisted_arrow_of_point_is_terminal() {
        let tw = FinCat::from_poset(&FinPoset::chain(0)).twisted_arrow();
        assert_eq!(tw.objects().len(), 1);
        assert_eq!(tw.arrows().len(), 1);
    }

    #[test]
    fn twisted_arrow_of_interval() {
        let d = FinCat::from_poset(&FinPoset::chain(1));
        let tw = d.twisted_arrow();
        assert_eq!(tw.objects().len(), 3);
        let non_identity: Vec<(&str, &str)> = (0..tw.arrows().len())
            .filter(|&m| !tw.is_identity(m))
            .map(|m| (tw.objects().label(tw.src(m)), tw.objects().label(tw.tgt(m))))
            .collect();
        assert_eq!(non_identity.len(), 2);
        assert!(non_identity.contains(&("0->1", "0->0")));
        assert!(non_identity.contains(&("0->1", "1->1")));
    }

    #[test]
    fn twisted_arrow_of_chain_counts_intervals() {
        for n in 0..5 {
            let p = FinPoset::chain(n);
            assert_eq!(p.twisted_arrow().len(), (n + 1) * (n + 2) / 2);
            let via_cat = FinCat::from_poset(&p).twisted_arrow().as_poset().unwrap();
            assert!(via_cat.is_isomorphic(&p.twisted_arrow()));
        }
    }

    #[test]
    fn twisted_arrow_is_opposite_of_intervals() {
        // Intervals of [n] ordered by inclusion, then reversed.
        let n = 3;
        let p = FinPoset::chain(n);
        let iv = p.intervals();
        let inclusion = FinPoset::from_fn(FinSet::range(iv.len()), |a, b| iv[b].0 <= iv[a].0 && iv[a].1 <= iv[b].1).unwrap();
        assert!(p.twisted_arrow().is_isomorphic(&inclusion.opposite()));
    }

    #[test]
    fn cart_small_cases() {
        assert_eq!(cart_poset(&FinSet::empty(), CART_BOUND).unwrap().len(), 1);
        let two = cart_poset(&FinSet::new(["a", "b"]).unwrap(), CART_BOUND).unwrap();
        assert_eq!(two.len(), 4);
        assert_eq!(two.covers().len(), 4);
        assert_eq!(two.label(3), "{a,b}");
        assert!(matches!(cart_poset(&FinSet::range(11), CART_BOUND), Err(Error::Resource(_))));
    }

    #[test]
    fn cart_preimage_is_monotone() {
        for ns in 0..=3 {
            for nt in 0..=3 {
                let (s, t) = (FinSet::range(ns), FinSet::range(nt));
                // All pointed maps S₊ → T₊ restricted to S.
                let total = (nt + 1).pow(ns as u32);
                for code in 0..total {
                    let mut c = code;
                    let f: Vec<Option<usize>> = (0..ns)
                        .map(|_| {
                            let v = c % (nt + 1);
                            c /= nt + 1;
                            (v < nt).then_some(v)
                        })
                        .collect();
                    assert!(cart_preimage(&s, &t, &f, CART_BOUND).is_ok());
                }
            }
        }
    }

    #[test]
    fn poset_counts_up_to_iso() {
        let counts: Vec<usize> = (0..=5).map(|n| posets_up_to_iso(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn generated_rejects_cycles() {
        assert!(FinPoset::generated(FinSet::range(2), &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn free_category_paths() {
        let objects = FinSet::range(3);
        let edges = [("a".to_string(), 0, 1), ("b".to_string(), 1, 2), ("c".to_string(), 0, 2)];
        let c = FinCat::free_on_acyclic(objects, &edges).unwrap();
        // 3 identities, 3 edges, one path a.b.
        assert_eq!(c.arrows().len(), 7);
        assert!(c.arrows().contains("a.b"));
        assert!(c.as_poset().is_none());
    }

    #[test]
    fn monoid_category() {
        // {1, x} with x² = x.
        let m = FinCat::monoid(FinSet::new(["1", "x"]).unwrap(), 0, &[vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.then(1, 1), Some(1));
        // Not associative: rejected.
        let bad = FinCat::monoid(FinSet::range(3), 0, &[vec![0, 1, 2], vec![1, 2, 0], vec![2, 2, 2]]);
        assert!(bad.is_err());
    }

    #[test]
    fn twisted_functoriality_on_chains() {
        let f = PosetMap::new(FinPoset::chain(1), FinPoset::chain(2), vec![0, 2]).unwrap();
        let g = PosetMap::new(FinPoset::chain(2), FinPoset::chain(1), vec![0, 0, 1]).unwrap();
        assert_eq!(f.then(&g).unwrap().twisted(), f.twisted().then(&g.twisted()).unwrap());
    }
}
