//! Normal oplax functors from a finite poset `D` into spans, and functors
//! out of the twisted arrow poset `Tw(D)`, with the explicit bijection
//! between the two.
//!
//! An oplax functor stores an object `F(x)` for every `x`, a span
//! `F(x) ← F(x<y) → F(y)` for every strict relation, and a comparison map
//! `Φ_{g,f}: F(gf) → F(g) ×_{F(y)} F(f)` for every strict chain `x<y<z`
//! (`f: x → y`, `g: y → z`). Identities go to identity spans and the
//! comparison maps involving them are identities; neither is stored.
//!
//! The pullback `F(g) ×_{F(y)} F(f)` is always the chosen pullback of
//! `F(g).left` and `F(f).right`, so its first projection lands in `F(g)`.
//!
//! The target category is abstract ([`SpanCategory`]). [`FinSets`] is the
//! category of finite sets; [`SSetOp`] is the opposite of truncated
//! simplicial sets, where pullbacks are pushouts.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::marker::PhantomData;

use crate::error::{input_err, validation_err, Result};
use crate::finset::{self, FinMap, FinSet};
use crate::poset::FinPoset;
use crate::sset::{self, Colimit, SSet, SSetMap};

/// A category with chosen pullbacks.
pub trait SpanCategory {
    type Obj: Clone + PartialEq + Debug;
    type Mor: Clone + Debug;
    type Pullback: Clone + Debug;

    fn dom(f: &Self::Mor) -> Self::Obj;
    fn cod(f: &Self::Mor) -> Self::Obj;
    fn identity(x: &Self::Obj) -> Self::Mor;
    /// `g ∘ f`.
    fn then(f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;
    fn mor_eq(a: &Self::Mor, b: &Self::Mor) -> bool;
    fn is_iso(f: &Self::Mor) -> bool;
    /// The chosen pullback of `f: A → C` and `g: B → C`.
    fn pullback(f: &Self::Mor, g: &Self::Mor) -> Result<Self::Pullback>;
    fn apex(p: &Self::Pullback) -> Self::Obj;
    /// Projection to `A`.
    fn first(p: &Self::Pullback) -> Self::Mor;
    /// Projection to `B`.
    fn second(p: &Self::Pullback) -> Self::Mor;
    fn mediate(p: &Self::Pullback, u: &Self::Mor, v: &Self::Mor) -> Result<Self::Mor>;
}

/// Finite sets and functions.
#[derive(Clone, Copy, Debug)]
pub struct FinSets;

impl SpanCategory for FinSets {
    type Obj = FinSet;
    type Mor = FinMap;
    type Pullback = finset::Pullback;

    fn dom(f: &FinMap) -> FinSet {
        f.source().clone()
    }
    fn cod(f: &FinMap) -> FinSet {
        f.target().clone()
    }
    fn identity(x: &FinSet) -> FinMap {
        FinMap::identity(x)
    }
    fn then(f: &FinMap, g: &FinMap) -> Result<FinMap> {
        f.then(g)
    }
    fn mor_eq(a: &FinMap, b: &FinMap) -> bool {
        a == b
    }
    fn is_iso(f: &FinMap) -> bool {
        f.is_bijection()
    }
    fn pullback(f: &FinMap, g: &FinMap) -> Result<finset::Pullback> {
        finset::pullback(f, g)
    }
    fn apex(p: &finset::Pullback) -> FinSet {
        p.apex.clone()
    }
    fn first(p: &finset::Pullback) -> FinMap {
        p.first.clone()
    }
    fn second(p: &finset::Pullback) -> FinMap {
        p.second.clone()
    }
    fn mediate(p: &finset::Pullback, u: &FinMap, v: &FinMap) -> Result<FinMap> {
        p.mediate(u, v)
    }
}

/// The opposite of truncated simplicial sets.
#[derive(Clone, Copy, Debug)]
pub struct SSetOp;

/// A morphism `A → B` of [`SSetOp`]: a simplicial map `B → A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpMor(pub SSetMap);

impl SpanCategory for SSetOp {
    type Obj = SSet;
    type Mor = OpMor;
    type Pullback = Colimit;

    fn dom(f: &OpMor) -> SSet {
        f.0.target().clone()
    }
    fn cod(f: &OpMor) -> SSet {
        f.0.source().clone()
    }
    fn identity(x: &SSet) -> OpMor {
        OpMor(SSetMap::identity(x))
    }
    fn then(f: &OpMor, g: &OpMor) -> Result<OpMor> {
        Ok(OpMor(g.0.then(&f.0)?))
    }
    fn mor_eq(a: &OpMor, b: &OpMor) -> bool {
        a == b
    }
    fn is_iso(f: &OpMor) -> bool {
        f.0.is_isomorphism()
    }
    fn pullback(f: &OpMor, g: &OpMor) -> Result<Colimit> {
        sset::pushout(&f.0, &g.0)
    }
    fn apex(p: &Colimit) -> SSet {
        p.apex.clone()
    }
    fn first(p: &Colimit) -> OpMor {
        OpMor(p.injections[0].clone())
    }
    fn second(p: &Colimit) -> OpMor {
        OpMor(p.injections[1].clone())
    }
    fn mediate(p: &Colimit, u: &OpMor, v: &OpMor) -> Result<OpMor> {
        Ok(OpMor(p.mediate(&[u.0.clone(), v.0.clone()])?))
    }
}

/// A span `F(x) ← apex → F(y)`.
#[derive(Debug)]
pub struct SpanOf<C: SpanCategory> {
    pub left: C::Mor,
    pub right: C::Mor,
}

impl<C: SpanCategory> Clone for SpanOf<C> {
    fn clone(&self) -> Self {
        SpanOf { left: self.left.clone(), right: self.right.clone() }
    }
}

impl<C: SpanCategory> SpanOf<C> {
    pub fn apex(&self) -> C::Obj {
        C::dom(&self.left)
    }
}

/// A normal oplax functor `D → Span(C)` for a finite poset `D`.
#[derive(Clone, Debug)]
pub struct OplaxFunctor<C: SpanCategory> {
    poset: FinPoset,
    objects: Vec<C::Obj>,
    spans: BTreeMap<(usize, usize), SpanOf<C>>,
    phi: BTreeMap<(usize, usize, usize), C::Mor>,
    pullbacks: BTreeMap<(usize, usize, usize), C::Pullback>,
    /// `Tw(D)`, when it is already known.
    twisted: Option<FinPoset>,
}

fn strict_chains(p: &FinPoset) -> Vec<(usize, usize, usize)> {
    let n = p.len();
    let mut out = Vec::new();
    for x in 0..n {
        for y in (0..n).filter(|&y| p.lt(x, y)) {
            for z in (0..n).filter(|&z| p.lt(y, z)) {
                out.push((x, y, z));
            }
        }
    }
    out
}

impl<C: SpanCategory> OplaxFunctor<C> {
    /// Validates the span boundaries, that every `Φ` is a map of spans, and
    /// the coherence law for every strict chain `x<y<z<w`.
    pub fn new(
        poset: FinPoset,
        objects: Vec<C::Obj>,
        spans: BTreeMap<(usize, usize), SpanOf<C>>,
        phi: BTreeMap<(usize, usize, usize), C::Mor>,
    ) -> Result<Self> {
        if objects.len() != poset.len() {
            return Err(input_err!("one object per poset element is required"));
        }
        for x in 0..poset.len() {
            for y in (0..poset.len()).filter(|&y| poset.lt(x, y)) {
                let s = spans.get(&(x, y)).ok_or_else(|| input_err!("missing span for {x} < {y}"))?;
                if C::dom(&s.left) != C::dom(&s.right) || C::cod(&s.left) != objects[x] || C::cod(&s.right) != objects[y] {
                    return Err(input_err!("span for {x} < {y} has the wrong boundary"));
                }
            }
        }
        if spans.len() != poset.relations().len() - poset.len() {
            return Err(input_err!("spans given for pairs that are not strict relations"));
        }
        let mut pullbacks = BTreeMap::new();
        for (x, y, z) in strict_chains(&poset) {
            let pb = C::pullback(&spans[&(y, z)].left, &spans[&(x, y)].right)?;
            let map = phi.get(&(x, y, z)).ok_or_else(|| input_err!("missing comparison map for {x} < {y} < {z}"))?;
            if C::dom(map) != spans[&(x, z)].apex() || C::cod(map) != C::apex(&pb) {
                return Err(input_err!("comparison map for {x} < {y} < {z} has the wrong boundary"));
            }
            // Φ is a map of spans.
            let to_z = C::then(&C::then(map, &C::first(&pb))?, &spans[&(y, z)].right)?;
            let to_x = C::then(&C::then(map, &C::second(&pb))?, &spans[&(x, y)].left)?;
            if !C::mor_eq(&to_z, &spans[&(x, z)].right) || !C::mor_eq(&to_x, &spans[&(x, z)].left) {
                return Err(validation_err!("comparison map for {x} < {y} < {z} does not commute with the legs"));
            }
            pullbacks.insert((x, y, z), pb);
        }
        if phi.len() != pullbacks.len() {
            return Err(input_err!("comparison maps given for triples that are not strict chains"));
        }
        let f = OplaxFunctor { poset, objects, spans, phi, pullbacks, twisted: None };
        f.check_coherence()?;
        Ok(f)
    }

    pub fn poset(&self) -> &FinPoset {
        &self.poset
    }

    pub fn object(&self, x: usize) -> &C::Obj {
        &self.objects[x]
    }

    /// `F(x ≤ y)`; the identity span when `x = y`.
    pub fn span(&self, x: usize, y: usize) -> SpanOf<C> {
        if x == y {
            let id = C::identity(&self.objects[x]);
            return SpanOf { left: id.clone(), right: id };
        }
        self.spans[&(x, y)].clone()
    }

    pub fn phi(&self, x: usize, y: usize, z: usize) -> &C::Mor {
        &self.phi[&(x, y, z)]
    }

    pub fn pullback(&self, x: usize, y: usize, z: usize) -> &C::Pullback {
        &self.pullbacks[&(x, y, z)]
    }

    /// The coherence law, compared componentwise on `F(h) × F(g) × F(f)`
    /// for `f: x → y`, `g: y → z`, `h: z → w`.
    pub fn check_coherence(&self) -> Result<()> {
        let n = self.poset.len();
        for (x, y, z) in strict_chains(&self.poset) {
            for w in (0..n).filter(|&w| self.poset.lt(z, w)) {
                let via_gf = |first: bool| -> Result<C::Mor> {
                    // π ∘ Φ_{g,f} ∘ π_{gf} ∘ Φ_{h,gf}
                    let outer = C::then(self.phi(x, z, w), &C::second(self.pullback(x, z, w)))?;
                    let inner = C::then(&outer, self.phi(x, y, z))?;
                    let pb = self.pullback(x, y, z);
                    C::then(&inner, &if first { C::first(pb) } else { C::second(pb) })
                };
                let via_hg = |first: bool| -> Result<C::Mor> {
                    // π ∘ Φ_{h,g} ∘ π_{hg} ∘ Φ_{hg,f}
                    let outer = C::then(self.phi(x, y, w), &C::first(self.pullback(x, y, w)))?;
                    let inner = C::then(&outer, self.phi(y, z, w))?;
                    let pb = self.pullback(y, z, w);
                    C::then(&inner, &if first { C::first(pb) } else { C::second(pb) })
                };
                let h_left = C::then(self.phi(x, z, w), &C::first(self.pullback(x, z, w)))?;
                let f_right = C::then(self.phi(x, y, w), &C::second(self.pullback(x, y, w)))?;
                let agree = C::mor_eq(&h_left, &via_hg(true)?)
                    && C::mor_eq(&via_gf(true)?, &via_hg(false)?)
                    && C::mor_eq(&via_gf(false)?, &f_right);
                if !agree {
                    return Err(validation_err!(
                        "coherence fails for f = {}<{}, g = {}<{}, h = {}<{}",
                        self.poset.label(x),
                        self.poset.label(y),
                        self.poset.label(y),
                        self.poset.label(z),
                        self.poset.label(z),
                        self.poset.label(w)
                    ));
                }
            }
        }
        Ok(())
    }
}

/// A functor `Tw(D) → C`, stored on every relation of `Tw(D)`.
#[derive(Clone, Debug)]
pub struct TwistedFunctor<C: SpanCategory> {
    poset: FinPoset,
    twisted: FinPoset,
    intervals: Vec<(usize, usize)>,
    objects: Vec<C::Obj>,
    /// `maps[a * |Tw(D)| + b]` is the image of `a ≤ b`.
    maps: Vec<Option<C::Mor>>,
    _target: PhantomData<C>,
}

impl<C: SpanCategory> TwistedFunctor<C> {
    /// Validates boundaries, identities and composition. `objects` and the
    /// keys of `maps` index the elements of `Tw(D)`, i.e. [`FinPoset::intervals`].
    pub fn new(poset: FinPoset, objects: Vec<C::Obj>, maps: BTreeMap<(usize, usize), C::Mor>) -> Result<Self> {
        let twisted = poset.twisted_arrow();
        Self::assemble(poset, twisted, objects, maps)
    }

    /// Like [`TwistedFunctor::new`], reusing a precomputed `Tw(D)`; its
    /// order must be the interval order on [`FinPoset::intervals`].
    pub fn with_twisted(
        poset: FinPoset,
        twisted: &FinPoset,
        objects: Vec<C::Obj>,
        maps: BTreeMap<(usize, usize), C::Mor>,
    ) -> Result<Self> {
        let intervals = poset.intervals();
        let matches = twisted.len() == intervals.len()
            && (0..intervals.len()).all(|a| {
                (0..intervals.len()).all(|b| {
                    let ((x, y), (x2, y2)) = (intervals[a], intervals[b]);
                    twisted.le(a, b) == (poset.le(x, x2) && poset.le(y2, y))
                })
            });
        if !matches {
            return Err(input_err!("the given poset is not the twisted arrow poset"));
        }
        Self::assemble(poset, twisted.clone(), objects, maps)
    }

    fn assemble(poset: FinPoset, twisted: FinPoset, objects: Vec<C::Obj>, maps: BTreeMap<(usize, usize), C::Mor>) -> Result<Self> {
        let n = twisted.len();
        let mut dense = alloc::vec![None; n * n];
        for ((a, b), f) in maps {
            if a >= n || b >= n || !twisted.le(a, b) {
                return Err(input_err!("map given for {a} → {b}, which is not a relation of Tw(D)"));
            }
            dense[a * n + b] = Some(f);
        }
        Self::assemble_dense(poset, twisted, objects, dense)
    }

    fn assemble_dense(poset: FinPoset, twisted: FinPoset, objects: Vec<C::Obj>, maps: Vec<Option<C::Mor>>) -> Result<Self> {
        let intervals = poset.intervals();
        let n = twisted.len();
        if objects.len() != n {
            return Err(input_err!("one object per twisted arrow is required"));
        }
        for (a, b) in twisted.relations() {
            let f = maps[a * n + b].as_ref().ok_or_else(|| input_err!("missing map {a} → {b}"))?;
            if C::dom(f) != objects[a] || C::cod(f) != objects[b] {
                return Err(input_err!("map {} → {} has the wrong boundary", twisted.label(a), twisted.label(b)));
            }
            if a == b && !C::mor_eq(f, &C::identity(&objects[a])) {
                return Err(validation_err!("identity of {} is not sent to an identity", twisted.label(a)));
            }
        }
        let functor = TwistedFunctor { poset, twisted, intervals, objects, maps, _target: PhantomData };
        functor.check_composition()?;
        Ok(functor)
    }

    /// Builds the functor from its values on the covering relations of
    /// `Tw(D)`, composing along chains and checking consistency.
    pub fn from_covers(poset: FinPoset, objects: Vec<C::Obj>, covers: &BTreeMap<(usize, usize), C::Mor>) -> Result<Self> {
        let twisted = poset.twisted_arrow();
        let mut maps: BTreeMap<(usize, usize), C::Mor> = BTreeMap::new();
        // Longest relations last: process by the number of elements strictly between.
        let mut rel = twisted.relations();
        let between = |&(a, b): &(usize, usize)| (0..twisted.len()).filter(|&c| twisted.lt(a, c) && twisted.lt(c, b)).count();
        rel.sort_by_key(between);
        for (a, b) in rel {
            let f = if a == b {
                C::identity(&objects[a])
            } else if let Some(f) = covers.get(&(a, b)) {
                f.clone()
            } else {
                let c = (0..twisted.len())
                    .find(|&c| twisted.lt(a, c) && twisted.lt(c, b) && covers.contains_key(&(a, c)))
                    .ok_or_else(|| input_err!("no cover data below {} → {}", twisted.label(a), twisted.label(b)))?;
                C::then(&covers[&(a, c)], &maps[&(c, b)])?
            };
            maps.insert((a, b), f);
        }
        Self::new(poset, objects, maps)
    }

    /// Checks `F(a ≤ c) = F(b ≤ c) ∘ F(a ≤ b)` for covers `a ⋖ b ≤ c` only;
    /// by induction on the length of `[a, b]` this gives every composite.
    fn check_composition(&self) -> Result<()> {
        let t = &self.twisted;
        let covers: Vec<Vec<usize>> = (0..t.len()).map(|a| t.upper_covers(a)).collect();
        for (a, c) in t.relations() {
            let h = self.map_at(a, c);
            for &b in covers[a].iter().filter(|&&b| b != c && t.le(b, c)) {
                let composite = C::then(self.map_at(a, b), self.map_at(b, c))?;
                if !C::mor_eq(&composite, h) {
                    return Err(validation_err!(
                        "composition fails along {} → {} → {}",
                        t.label(a),
                        t.label(b),
                        t.label(c)
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn poset(&self) -> &FinPoset {
        &self.poset
    }

    pub fn twisted(&self) -> &FinPoset {
        &self.twisted
    }

    /// Index in `Tw(D)` of the interval `[x;y]`.
    pub fn index(&self, x: usize, y: usize) -> usize {
        self.intervals.iter().position(|&iv| iv == (x, y)).expect("an interval of D")
    }

    pub fn object(&self, x: usize, y: usize) -> &C::Obj {
        &self.objects[self.index(x, y)]
    }

    pub fn objects(&self) -> &[C::Obj] {
        &self.objects
    }

    /// The image of `[x;y] → [x';y']`.
    pub fn map(&self, from: (usize, usize), to: (usize, usize)) -> &C::Mor {
        self.map_at(self.index(from.0, from.1), self.index(to.0, to.1))
    }

    /// The image of a relation of `Tw(D)` given by element indices.
    pub fn map_at(&self, a: usize, b: usize) -> &C::Mor {
        self.maps[a * self.twisted.len() + b].as_ref().expect("a relation of Tw(D)")
    }

    /// Exact equality of all objects and maps.
    pub fn same_as(&self, other: &TwistedFunctor<C>) -> bool {
        self.poset == other.poset
            && self.objects == other.objects
            && self.maps.len() == other.maps.len()
            && self.maps.iter().zip(&other.maps).all(|(f, g)| match (f, g) {
                (Some(f), Some(g)) => C::mor_eq(f, g),
                (None, None) => true,
                _ => false,
            })
    }
}

/// `F̃: [x;y] ↦ F(x<y)`, `((g,h): f₁ → f₂) ↦ π_{f₂} ∘ (Id × Φ_{f₂,g}) ∘ Φ_{h,f₂g}`.
pub fn oplax_to_twisted<C: SpanCategory>(f: &OplaxFunctor<C>) -> Result<TwistedFunctor<C>> {
    let p = &f.poset;
    let intervals = p.intervals();
    let objects: Vec<C::Obj> =
        intervals.iter().map(|&(x, y)| if x == y { f.objects[x].clone() } else { f.spans[&(x, y)].apex() }).collect();
    let twisted = f.twisted.clone().unwrap_or_else(|| p.twisted_arrow());
    let n = twisted.len();
    let mut maps = alloc::vec![None; n * n];
    for (a, b) in twisted.relations() {
        let ((x, y), (x2, y2)) = (intervals[a], intervals[b]);
        maps[a * n + b] = Some(twisted_component(f, x, x2, y2, y)?);
    }
    TwistedFunctor::assemble_dense(p.clone(), twisted, objects, maps)
}

/// `F_{g,h}: F(x<y) → F(x'<y')` for `x ≤ x' ≤ y' ≤ y`.
fn twisted_component<C: SpanCategory>(f: &OplaxFunctor<C>, x: usize, x2: usize, y2: usize, y: usize) -> Result<C::Mor> {
    let (g_id, f2_id, h_id) = (x == x2, x2 == y2, y2 == y);
    Ok(match (g_id, f2_id, h_id) {
        (true, true, true) => C::identity(&f.objects[x]),
        (true, true, false) => f.spans[&(x, y)].left.clone(),
        (false, true, true) => f.spans[&(x, y)].right.clone(),
        (false, true, false) => {
            // F(g).right ∘ π_g ∘ Φ_{h,g}
            let pb = f.pullback(x, x2, y);
            C::then(&C::then(f.phi(x, x2, y), &C::second(pb))?, &f.spans[&(x, x2)].right)?
        }
        (true, false, true) => C::identity(&f.spans[&(x2, y2)].apex()),
        (true, false, false) => C::then(f.phi(x, y2, y), &C::second(f.pullback(x, y2, y)))?,
        (false, false, true) => C::then(f.phi(x, x2, y), &C::first(f.pullback(x, x2, y)))?,
        (false, false, false) => {
            let outer = C::then(f.phi(x, y2, y), &C::second(f.pullback(x, y2, y)))?;
            let inner = C::then(&outer, f.phi(x, x2, y2))?;
            C::then(&inner, &C::first(f.pullback(x, x2, y2)))?
        }
    })
}

/// `F(x) = G[x;x]`, `F(x<y) = (G[x;y] → G[x;x], G[x;y] → G[y;y])` and
/// `Φ_{g,f}` induced by `G[x;z] → G[y;z]` and `G[x;z] → G[x;y]`.
pub fn twisted_to_oplax<C: SpanCategory>(g: &TwistedFunctor<C>) -> Result<OplaxFunctor<C>> {
    let p = g.poset.clone();
    let n = p.len();
    let objects: Vec<C::Obj> = (0..n).map(|x| g.object(x, x).clone()).collect();
    let mut spans = BTreeMap::new();
    for x in 0..n {
        for y in (0..n).filter(|&y| p.lt(x, y)) {
            let left = g.map((x, y), (x, x)).clone();
            let right = g.map((x, y), (y, y)).clone();
            spans.insert((x, y), SpanOf::<C> { left, right });
        }
    }
    let mut phi = BTreeMap::new();
    for (x, y, z) in strict_chains(&p) {
        let pb = C::pullback(&spans[&(y, z)].left, &spans[&(x, y)].right)?;
        phi.insert((x, y, z), C::mediate(&pb, g.map((x, z), (y, z)), g.map((x, z), (x, y)))?);
    }
    let mut f = OplaxFunctor::new(p, objects, spans, phi)?;
    f.twisted = Some(g.twisted.clone());
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn set(n: usize) -> FinSet {
        FinSet::range(n)
    }

    #[test]
    fn constant_oplax_functor() {
        let p = FinPoset::chain(2);
        let s = set(2);
        let id = FinMap::identity(&s);
        let spans = [(0, 1), (0, 2), (1, 2)]
            .into_iter()
            .map(|k| (k, SpanOf::<FinSets> { left: id.clone(), right: id.clone() }))
            .collect();
        let pb = finset::pullback(&id, &id).unwrap();
        let phi = [((0, 1, 2), pb.mediate(&id, &id).unwrap())].into_iter().collect();
        let f = OplaxFunctor::<FinSets>::new(p, vec![s.clone(); 3], spans, phi).unwrap();
        let g = oplax_to_twisted(&f).unwrap();
        assert!(g.objects().iter().all(|o| o.len() == 2));
        let back = twisted_to_oplax(&g).unwrap();
        assert!(oplax_to_twisted(&back).unwrap().same_as(&g));
    }

    #[test]
    fn interval_has_no_coherence() {
        let p = FinPoset::chain(1);
        let apex = set(3);
        let left = FinMap::new(apex.clone(), set(2), vec![0, 1, 1]).unwrap();
        let right = FinMap::new(apex, set(1), vec![0, 0, 0]).unwrap();
        let spans = [((0, 1), SpanOf::<FinSets> { left, right })].into_iter().collect();
        let f = OplaxFunctor::<FinSets>::new(p, vec![set(2), set(1)], spans, BTreeMap::new()).unwrap();
        let g = oplax_to_twisted(&f).unwrap();
        assert_eq!(g.twisted().len(), 3);
        let back = twisted_to_oplax(&g).unwrap();
        assert_eq!(back.span(0, 1).left, f.span(0, 1).left);
    }

    #[test]
    fn constant_covers_compose() {
        let p = FinPoset::chain(2);
        let tw = p.twisted_arrow();
        let one = set(1);
        let two = set(2);
        let objects: Vec<FinSet> = (0..tw.len()).map(|i| if i == 0 { two.clone() } else { one.clone() }).collect();
        let mut covers = BTreeMap::new();
        for (a, b) in tw.covers() {
            let f = FinMap::new(objects[a].clone(), objects[b].clone(), vec![0; objects[a].len()]).unwrap();
            covers.insert((a, b), f);
        }
        assert!(TwistedFunctor::<FinSets>::from_covers(p, objects, &covers).is_ok());
    }
}
