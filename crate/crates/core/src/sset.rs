//! Truncated, level-wise finite simplicial sets.
//!
//! An [`SSet`] of dimension `N` stores levels `0..=N` explicitly, degenerate
//! simplices included, together with face and degeneracy tables. The same
//! type serves as a simplicial object in finite sets; [`evaluate`] computes
//! its value `Hom(S, X)` on a finite simplicial set `S`.
//!
//! Labels are deterministic:
//!
//! - a simplex of `Δⁿ` or of the nerve of a poset is its vertex tuple, `0,0,1`;
//! - a simplex of the nerve of a category is its arrow string, `f,g`;
//! - a summand of a tagged coproduct is `tag:label`;
//! - a colimit class is `i:label` for its least member, read from object `i`.
//!
//! [`alpha`] builds the gluing cospan `X·Δ¹ → ⊔_y Δ^{|p⁻¹(y)|} ← Y·Δ¹` of a
//! morphism of `Alg`, and [`oplax_component`] the comparison map out of the
//! glued composite.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::alg::AlgMorphism;
use crate::error::{input_err, internal_err, validation_err, Error, Result};
use crate::finset::{FinMap, FinSet, UnionFind};
use crate::poset::{FinCat, FinPoset};

#[derive(PartialEq, Eq)]
struct Data {
    dim: usize,
    levels: Vec<FinSet>,
    /// `faces[m][i][x] = d_i x` for `1 ≤ m ≤ dim`.
    faces: Vec<Vec<Vec<usize>>>,
    /// `degens[m][i][x] = s_i x` for `m < dim`.
    degens: Vec<Vec<Vec<usize>>>,
}

/// A simplicial set truncated at dimension `dim`. Cloning is cheap.
#[derive(Clone)]
pub struct SSet(Arc<Data>);

impl PartialEq for SSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for SSet {}

impl core::fmt::Debug for SSet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let sizes: Vec<usize> = self.0.levels.iter().map(FinSet::len).collect();
        f.debug_struct("SSet").field("dim", &self.0.dim).field("sizes", &sizes).finish()
    }
}

impl SSet {
    /// Validates table shapes and every simplicial identity.
    pub fn new(
        dim: usize,
        levels: Vec<FinSet>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        if levels.len() != dim + 1 || faces.len() != dim + 1 || degens.len() != dim + 1 {
            return Err(input_err!("a simplicial set of dimension {dim} needs {} levels", dim + 1));
        }
        for m in 0..=dim {
            let expected_faces = if m == 0 { 0 } else { m + 1 };
            let expected_degens = if m == dim { 0 } else { m + 1 };
            if faces[m].len() != expected_faces || degens[m].len() != expected_degens {
                return Err(input_err!("level {m} has the wrong number of face or degeneracy maps"));
            }
            for t in &faces[m] {
                if t.len() != levels[m].len() || t.iter().any(|&y| y >= levels[m - 1].len()) {
                    return Err(input_err!("a face map out of level {m} does not fit"));
                }
            }
            for t in &degens[m] {
                if t.len() != levels[m].len() || t.iter().any(|&y| y >= levels[m + 1].len()) {
                    return Err(input_err!("a degeneracy map out of level {m} does not fit"));
                }
            }
        }
        let x = SSet(Arc::new(Data { dim, levels, faces, degens }));
        x.check_identities()?;
        Ok(x)
    }

    fn check_identities(&self) -> Result<()> {
        let n = self.dim();
        for m in 0..=n {
            for x in 0..self.size(m) {
                // d_i d_j = d_{j-1} d_i for i < j.
                if m >= 2 {
                    for j in 0..=m {
                        for i in 0..j {
                            if self.face(m - 1, i, self.face(m, j, x)) != self.face(m - 1, j - 1, self.face(m, i, x)) {
                                return Err(validation_err!("d_{i} d_{j} ≠ d_{} d_{i} on level {m}", j - 1));
                            }
                        }
                    }
                }
                // s_i s_j = s_{j+1} s_i for i ≤ j.
                if m + 2 <= n {
                    for j in 0..=m {
                        for i in 0..=j {
                            if self.degen(m + 1, i, self.degen(m, j, x)) != self.degen(m + 1, j + 1, self.degen(m, i, x)) {
                                return Err(validation_err!("s_{i} s_{j} ≠ s_{} s_{i} on level {m}", j + 1));
                            }
                        }
                    }
                }
                // Mixed identities for d_i s_j on level m + 1.
                if m < n {
                    for j in 0..=m {
                        let y = self.degen(m, j, x);
                        for i in 0..=m + 1 {
                            let lhs = self.face(m + 1, i, y);
                            let rhs = if i == j || i == j + 1 {
                                x
                            } else if i < j {
                                self.degen(m - 1, j - 1, self.face(m, i, x))
                            } else {
                                self.degen(m - 1, j, self.face(m, i - 1, x))
                            };
                            if lhs != rhs {
                                return Err(validation_err!("d_{i} s_{j} identity fails on level {m}"));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The empty simplicial set.
    pub fn empty(dim: usize) -> Self {
        let levels = vec![FinSet::empty(); dim + 1];
        let faces = (0..=dim).map(|m| if m == 0 { Vec::new() } else { vec![Vec::new(); m + 1] }).collect();
        let degens = (0..=dim).map(|m| if m == dim { Vec::new() } else { vec![Vec::new(); m + 1] }).collect();
        SSet::new(dim, levels, faces, degens).expect("empty simplicial set")
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn level(&self, m: usize) -> &FinSet {
        &self.0.levels[m]
    }

    pub fn levels(&self) -> &[FinSet] {
        &self.0.levels
    }

    pub fn size(&self, m: usize) -> usize {
        self.0.levels[m].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.0.levels.iter().map(FinSet::len).collect()
    }

    /// `d_i x` for `x` on level `m`.
    pub fn face(&self, m: usize, i: usize, x: usize) -> usize {
        self.0.faces[m][i][x]
    }

    /// `s_i x` for `x` on level `m`.
    pub fn degen(&self, m: usize, i: usize, x: usize) -> usize {
        self.0.degens[m][i][x]
    }

    pub fn face_table(&self, m: usize, i: usize) -> &[usize] {
        &self.0.faces[m][i]
    }

    pub fn degen_table(&self, m: usize, i: usize) -> &[usize] {
        &self.0.degens[m][i]
    }

    pub fn face_map(&self, m: usize, i: usize) -> FinMap {
        FinMap::new(self.level(m).clone(), self.level(m - 1).clone(), self.0.faces[m][i].clone()).expect("valid table")
    }

    pub fn degen_map(&self, m: usize, i: usize) -> FinMap {
        FinMap::new(self.level(m).clone(), self.level(m + 1).clone(), self.0.degens[m][i].clone()).expect("valid table")
    }

    /// Whether `x` is `s_i` of something.
    pub fn is_degenerate(&self, m: usize, x: usize) -> bool {
        m > 0 && (0..m).any(|i| self.degen(m - 1, i, self.face(m, i, x)) == x)
    }

    pub fn nondegenerate(&self, m: usize) -> Vec<usize> {
        (0..self.size(m)).filter(|&x| !self.is_degenerate(m, x)).collect()
    }

    /// Largest level holding a nondegenerate simplex.
    pub fn nondegenerate_dim(&self) -> Option<usize> {
        (0..=self.dim()).rev().find(|&m| !self.nondegenerate(m).is_empty())
    }

    /// Total number of nondegenerate simplices on each level.
    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        (0..=self.dim()).map(|m| self.nondegenerate(m).len()).collect()
    }

    /// `X(θ)(x)` for a monotone `θ: [m] → [n]` and `x ∈ X_n`.
    pub fn act(&self, theta: &[usize], n: usize, x: usize) -> usize {
        debug_assert!(theta.windows(2).all(|w| w[0] <= w[1]) && theta.iter().all(|&t| t <= n));
        // Faces first: delete the vertices θ misses, highest first.
        let mut y = x;
        let mut level = n;
        for j in (0..=n).rev() {
            if !theta.contains(&j) {
                y = self.face(level, j, y);
                level -= 1;
            }
        }
        // Then degeneracies: repeat vertex positions, lowest first.
        for i in 0..theta.len().saturating_sub(1) {
            if theta[i] == theta[i + 1] {
                y = self.degen(level, i, y);
                level += 1;
            }
        }
        y
    }

    /// The vertices of `x ∈ X_m`.
    pub fn vertices(&self, m: usize, x: usize) -> Vec<usize> {
        (0..=m).map(|i| self.act(&[i], m, x)).collect()
    }

    /// The same simplicial set restricted to levels `0..=k`.
    pub fn truncate(&self, k: usize) -> SSet {
        let k = k.min(self.dim());
        let d = &self.0;
        let mut degens: Vec<Vec<Vec<usize>>> = d.degens[..=k].to_vec();
        degens[k] = Vec::new();
        SSet::new(k, d.levels[..=k].to_vec(), d.faces[..=k].to_vec(), degens).expect("truncation of a valid set")
    }

    /// The same tables with new labels.
    pub fn relabel(&self, labels: Vec<Vec<String>>) -> Result<SSet> {
        if labels.len() != self.dim() + 1 || labels.iter().zip(self.levels()).any(|(l, s)| l.len() != s.len()) {
            return Err(input_err!("relabelling has the wrong shape"));
        }
        let levels = labels.into_iter().map(FinSet::new).collect::<Result<Vec<_>>>()?;
        Ok(SSet(Arc::new(Data { dim: self.dim(), levels, faces: self.0.faces.clone(), degens: self.0.degens.clone() })))
    }

    /// The sub-simplicial set on the marked simplices, which must be closed
    /// under faces and degeneracies, with its inclusion.
    pub fn subset(&self, keep: &[Vec<bool>]) -> Result<(SSet, SSetMap)> {
        let n = self.dim();
        let index: Vec<Vec<usize>> = keep
            .iter()
            .map(|k| {
                let mut next = 0;
                k.iter().map(|&b| if b { next += 1; next - 1 } else { usize::MAX }).collect()
            })
            .collect();
        let members: Vec<Vec<usize>> =
            keep.iter().map(|k| k.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()).collect();
        let remap = |m: usize, y: usize| -> Result<usize> {
            match index[m][y] {
                usize::MAX => Err(input_err!("marked simplices are not closed under the simplicial operators")),
                i => Ok(i),
            }
        };
        let mut faces = vec![Vec::new(); n + 1];
        let mut degens = vec![Vec::new(); n + 1];
        for m in 0..=n {
            if m > 0 {
                faces[m] = (0..=m)
                    .map(|i| members[m].iter().map(|&x| remap(m - 1, self.face(m, i, x))).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
            }
            if m < n {
                degens[m] = (0..=m)
                    .map(|i| members[m].iter().map(|&x| remap(m + 1, self.degen(m, i, x))).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
            }
        }
        let levels = members
            .iter()
            .enumerate()
            .map(|(m, ms)| FinSet::new(ms.iter().map(|&x| self.level(m).label(x).to_string())))
            .collect::<Result<Vec<_>>>()?;
        let sub = SSet::new(n, levels, faces, degens)?;
        let inclusion = SSetMap::new(sub.clone(), self.clone(), members)?;
        Ok((sub, inclusion))
    }

    /// Nondegenerate root level of every simplex (Eilenberg–Zilber).
    pub fn root_levels(&self) -> Vec<Vec<usize>> {
        let mut roots: Vec<Vec<usize>> = Vec::with_capacity(self.dim() + 1);
        for m in 0..=self.dim() {
            let level = (0..self.size(m))
                .map(|x| match (0..m).find(|&i| self.degen(m - 1, i, self.face(m, i, x)) == x) {
                    Some(i) => roots[m - 1][self.face(m, i, x)],
                    None => m,
                })
                .collect();
            roots.push(level);
        }
        roots
    }

    /// The `k`-skeleton: simplices whose nondegenerate root has dimension ≤ k.
    pub fn skeleton(&self, k: usize) -> (SSet, SSetMap) {
        let keep: Vec<Vec<bool>> = self.root_levels().iter().map(|l| l.iter().map(|&r| r <= k).collect()).collect();
        self.subset(&keep).expect("skeleta are closed under the operators")
    }
}

/// All weakly increasing tuples of length `m + 1` with values in `0..=n`.
pub fn monotone_tuples(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut t = vec![0; m + 1];
    loop {
        out.push(t.clone());
        let Some(i) = (0..=m).rev().find(|&i| t[i] < n) else { break };
        let v = t[i] + 1;
        for x in &mut t[i..] {
            *x = v;
        }
    }
    out
}

fn join(values: &[usize]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// A simplicial set whose `m`-simplices are tuples closed under deleting
/// and repeating entries, with faces deleting and degeneracies repeating.
fn from_tuples(dim: usize, tuples: Vec<Vec<Vec<usize>>>, label: impl Fn(&[usize]) -> String) -> Result<SSet> {
    let index: Vec<BTreeMap<&[usize], usize>> =
        tuples.iter().map(|l| l.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect()).collect();
    let look = |m: usize, t: &[usize]| index[m].get(t).copied().ok_or_else(|| internal_err!("tuple family is not closed"));
    let mut faces = vec![Vec::new(); dim + 1];
    let mut degens = vec![Vec::new(); dim + 1];
    for m in 0..=dim {
        if m > 0 {
            faces[m] = (0..=m)
                .map(|i| {
                    tuples[m]
                        .iter()
                        .map(|t| {
                            let mut u = t.clone();
                            u.remove(i);
                            look(m - 1, &u)
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
        }
        if m < dim {
            degens[m] = (0..=m)
                .map(|i| {
                    tuples[m]
                        .iter()
                        .map(|t| {
                            let mut u = t.clone();
                            u.insert(i, t[i]);
                            look(m + 1, &u)
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
        }
    }
    let levels = tuples.iter().map(|l| FinSet::new(l.iter().map(|t| label(t)))).collect::<Result<Vec<_>>>()?;
    SSet::new(dim, levels, faces, degens)
}

/// `Δⁿ` truncated at `dim`: level `m` is the monotone maps `[m] → [n]`.
pub fn standard_simplex(n: usize, dim: usize) -> SSet {
    from_tuples(dim, (0..=dim).map(|m| monotone_tuples(m, n)).collect(), join).expect("Δⁿ is a simplicial set")
}

/// `∂Δⁿ ⊂ Δⁿ`: simplices missing at least one vertex.
pub fn simplex_boundary(n: usize, dim: usize) -> (SSet, SSetMap) {
    let simplex = standard_simplex(n, dim);
    let keep = (0..=dim)
        .map(|m| monotone_tuples(m, n).iter().map(|t| (0..=n).any(|v| !t.contains(&v))).collect())
        .collect::<Vec<Vec<bool>>>();
    simplex.subset(&keep).expect("the boundary is a sub-simplicial set")
}

/// The nerve of a poset; simplices are chains `x₀ ≤ ⋯ ≤ x_m` labelled by
/// their element labels joined with `,`.
pub fn nerve_poset(p: &FinPoset, dim: usize) -> SSet {
    let mut tuples: Vec<Vec<Vec<usize>>> = vec![(0..p.len()).map(|x| vec![x]).collect()];
    for m in 1..=dim {
        let next = tuples[m - 1]
            .iter()
            .flat_map(|t| {
                let last = *t.last().expect("nonempty");
                (0..p.len()).filter(move |&y| p.le(last, y)).map(move |y| {
                    let mut u = t.clone();
                    u.push(y);
                    u
                })
            })
            .collect();
        tuples.push(next);
    }
    let label = |t: &[usize]| t.iter().map(|&x| p.label(x)).collect::<Vec<_>>().join(",");
    from_tuples(dim, tuples, label).expect("nerve of a poset")
}

/// The nerve of a finite category: level 0 is the objects, level `m ≥ 1`
/// the composable strings `(f₁, …, f_m)` labelled `f₁,…,f_m`.
pub fn nerve_cat(c: &FinCat, dim: usize) -> SSet {
    let na = c.arrows().len();
    let mut strings: Vec<Vec<Vec<usize>>> = vec![(0..c.objects().len()).map(|o| vec![o]).collect()];
    if dim >= 1 {
        strings.push((0..na).map(|f| vec![f]).collect());
    }
    for m in 2..=dim {
        let next = strings[m - 1]
            .iter()
            .flat_map(|s| {
                let last = *s.last().expect("nonempty");
                (0..na).filter(move |&g| c.tgt(last) == c.src(g)).map(move |g| {
                    let mut u = s.clone();
                    u.push(g);
                    u
                })
            })
            .collect();
        strings.push(next);
    }
    let index: Vec<BTreeMap<&[usize], usize>> =
        strings.iter().map(|l| l.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect()).collect();
    let look = |m: usize, t: &[usize]| index[m][t];
    // Vertex i of a string.
    let vertex = |s: &[usize], i: usize| if i == 0 { c.src(s[0]) } else { c.tgt(s[i - 1]) };
    let mut faces = vec![Vec::new(); dim + 1];
    let mut degens = vec![Vec::new(); dim + 1];
    for m in 1..=dim {
        faces[m] = (0..=m)
            .map(|i| {
                strings[m]
                    .iter()
                    .map(|s| {
                        if m == 1 {
                            return if i == 0 { c.tgt(s[0]) } else { c.src(s[0]) };
                        }
                        let mut u = s.clone();
                        if i == 0 {
                            u.remove(0);
                        } else if i == m {
                            u.pop();
                        } else {
                            let g = u.remove(i);
                            u[i - 1] = c.then(u[i - 1], g).expect("composable");
                        }
                        look(m - 1, &u)
                    })
                    .collect()
            })
            .collect();
    }
    for m in 0..dim {
        degens[m] = (0..=m)
            .map(|i| {
                strings[m]
                    .iter()
                    .map(|s| {
                        if m == 0 {
                            return look(1, &[c.identity(s[0])]);
                        }
                        let mut u = s.clone();
                        u.insert(i, c.identity(vertex(s, i)));
                        look(m + 1, &u)
                    })
                    .collect()
            })
            .collect();
    }
    let levels = strings
        .iter()
        .enumerate()
        .map(|(m, l)| {
            let names = if m == 0 { c.objects() } else { c.arrows() };
            FinSet::new(l.iter().map(|s| s.iter().map(|&a| names.label(a)).collect::<Vec<_>>().join(",")))
        })
        .collect::<Result<Vec<_>>>()
        .expect("distinct strings");
    SSet::new(dim, levels, faces, degens).expect("nerve of a category")
}

/// A simplicial map, stored level by level.
#[derive(Clone, PartialEq, Eq)]
pub struct SSetMap {
    source: SSet,
    target: SSet,
    levels: Vec<Vec<usize>>,
}

impl core::fmt::Debug for SSetMap {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SSetMap").field("source", &self.source).field("target", &self.target).finish()
    }
}

impl SSetMap {
    /// Validates that the tables commute with every face and degeneracy.
    pub fn new(source: SSet, target: SSet, levels: Vec<Vec<usize>>) -> Result<Self> {
        if source.dim() != target.dim() || levels.len() != source.dim() + 1 {
            return Err(input_err!("simplicial maps need source and target of equal truncation"));
        }
        for (m, t) in levels.iter().enumerate() {
            if t.len() != source.size(m) || t.iter().any(|&y| y >= target.size(m)) {
                return Err(input_err!("map table on level {m} does not fit"));
            }
        }
        let f = SSetMap { source, target, levels };
        for m in 0..=f.source.dim() {
            for x in 0..f.source.size(m) {
                let y = f.levels[m][x];
                if m > 0 {
                    for i in 0..=m {
                        if f.levels[m - 1][f.source.face(m, i, x)] != f.target.face(m, i, y) {
                            return Err(validation_err!("map does not commute with d_{i} on level {m}"));
                        }
                    }
                }
                if m < f.source.dim() {
                    for i in 0..=m {
                        if f.levels[m + 1][f.source.degen(m, i, x)] != f.target.degen(m, i, y) {
                            return Err(validation_err!("map does not commute with s_{i} on level {m}"));
                        }
                    }
                }
            }
        }
        Ok(f)
    }

    /// Extends values given on nondegenerate simplices, `value(m, x)`, to
    /// the unique candidate map and validates it.
    pub fn from_nondegenerate(source: SSet, target: SSet, value: impl Fn(usize, usize) -> usize) -> Result<Self> {
        if source.dim() != target.dim() {
            return Err(input_err!("simplicial maps need source and target of equal truncation"));
        }
        let mut levels: Vec<Vec<usize>> = Vec::with_capacity(source.dim() + 1);
        for m in 0..=source.dim() {
            let level = (0..source.size(m))
                .map(|x| match (0..m).find(|&i| source.degen(m - 1, i, source.face(m, i, x)) == x) {
                    Some(i) => target.degen(m - 1, i, levels[m - 1][source.face(m, i, x)]),
                    None => value(m, x),
                })
                .collect();
            levels.push(level);
        }
        Self::new(source, target, levels)
    }

    pub fn identity(x: &SSet) -> Self {
        SSetMap { source: x.clone(), target: x.clone(), levels: (0..=x.dim()).map(|m| (0..x.size(m)).collect()).collect() }
    }

    /// The map `Δⁿ → X` classifying `x ∈ X_n`.
    pub fn classifying(x: &SSet, n: usize, simplex: usize) -> Result<Self> {
        if n > x.dim() {
            return Err(Error::Truncation { what: "classifying map".into(), required: n, available: x.dim() });
        }
        let delta = standard_simplex(n, x.dim());
        let levels = (0..=x.dim()).map(|m| monotone_tuples(m, n).iter().map(|t| x.act(t, n, simplex)).collect()).collect();
        Self::new(delta, x.clone(), levels)
    }

    pub fn source(&self) -> &SSet {
        &self.source
    }

    pub fn target(&self) -> &SSet {
        &self.target
    }

    pub fn level(&self, m: usize) -> &[usize] {
        &self.levels[m]
    }

    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    pub fn apply(&self, m: usize, x: usize) -> usize {
        self.levels[m][x]
    }

    pub fn level_map(&self, m: usize) -> FinMap {
        FinMap::new(self.source.level(m).clone(), self.target.level(m).clone(), self.levels[m].clone()).expect("valid table")
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &SSetMap) -> Result<SSetMap> {
        if self.target != g.source {
            return Err(input_err!("simplicial maps are not composable"));
        }
        let levels = self.levels.iter().zip(&g.levels).map(|(f, g)| f.iter().map(|&x| g[x]).collect()).collect();
        Ok(SSetMap { source: self.source.clone(), target: g.target.clone(), levels })
    }

    /// Whether every level is a bijection.
    pub fn is_isomorphism(&self) -> bool {
        self.levels.iter().enumerate().all(|(m, t)| {
            let mut seen = vec![false; self.target.size(m)];
            t.len() == seen.len() && t.iter().all(|&y| !core::mem::replace(&mut seen[y], true))
        })
    }
}

/// A colimit with its injections.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub apex: SSet,
    /// One injection per diagram object.
    pub injections: Vec<SSetMap>,
}

/// The colimit of a finite diagram `(objects, arrows)`, where an arrow
/// `(i, j, f)` is a map `objects[i] → objects[j]`. All objects must share the
/// truncation `dim`. Classes are ordered and labelled by their least member,
/// reading objects in order.
pub fn colimit(dim: usize, objects: &[SSet], arrows: &[(usize, usize, &SSetMap)]) -> Result<Colimit> {
    if objects.iter().any(|o| o.dim() != dim) {
        return Err(input_err!("all objects of a diagram must have truncation {dim}"));
    }
    for &(i, j, f) in arrows {
        if i >= objects.len() || j >= objects.len() || f.source != objects[i] || f.target != objects[j] {
            return Err(input_err!("diagram arrow {i} → {j} does not match its objects"));
        }
    }
    let mut offsets: Vec<Vec<usize>> = Vec::new(); // offsets[m][object]
    let mut classes: Vec<(usize, Vec<usize>)> = Vec::new(); // per level: count, class of each member
    let mut reps: Vec<Vec<(usize, usize)>> = Vec::new(); // per level: (object, element) of each class
    for m in 0..=dim {
        let mut off = Vec::with_capacity(objects.len());
        let mut total = 0;
        for o in objects {
            off.push(total);
            total += o.size(m);
        }
        let mut uf = UnionFind::new(total);
        for &(i, j, f) in arrows {
            for x in 0..objects[i].size(m) {
                uf.union(off[i] + x, off[j] + f.levels[m][x]);
            }
        }
        let (count, class) = uf.classes();
        let mut rep = vec![(usize::MAX, 0); count];
        for (o, obj) in objects.iter().enumerate() {
            for x in 0..obj.size(m) {
                let k = class[off[o] + x];
                if rep[k].0 == usize::MAX {
                    rep[k] = (o, x);
                }
            }
        }
        offsets.push(off);
        classes.push((count, class));
        reps.push(rep);
    }
    let class_of = |m: usize, o: usize, x: usize| classes[m].1[offsets[m][o] + x];
    let levels = (0..=dim)
        .map(|m| FinSet::new(reps[m].iter().map(|&(o, x)| format!("{o}:{}", objects[o].level(m).label(x)))))
        .collect::<Result<Vec<_>>>()?;
    let mut faces = vec![Vec::new(); dim + 1];
    let mut degens = vec![Vec::new(); dim + 1];
    for m in 0..=dim {
        if m > 0 {
            faces[m] = (0..=m)
                .map(|i| reps[m].iter().map(|&(o, x)| class_of(m - 1, o, objects[o].face(m, i, x))).collect())
                .collect();
        }
        if m < dim {
            degens[m] = (0..=m)
                .map(|i| reps[m].iter().map(|&(o, x)| class_of(m + 1, o, objects[o].degen(m, i, x))).collect())
                .collect();
        }
    }
    let apex = SSet::new(dim, levels, faces, degens)?;
    let injections = objects
        .iter()
        .enumerate()
        .map(|(o, obj)| {
            let levels = (0..=dim).map(|m| (0..obj.size(m)).map(|x| class_of(m, o, x)).collect()).collect();
            SSetMap::new(obj.clone(), apex.clone(), levels)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Colimit { apex, injections })
}

impl Colimit {
    /// The map out of the apex induced by a cocone with one leg per object.
    pub fn mediate(&self, legs: &[SSetMap]) -> Result<SSetMap> {
        if legs.len() != self.injections.len() {
            return Err(input_err!("cocone needs one leg per diagram object"));
        }
        let target = match legs.first() {
            Some(l) => l.target.clone(),
            None => return Err(input_err!("cannot mediate out of an empty diagram without a target")),
        };
        let dim = self.apex.dim();
        let mut levels: Vec<Vec<usize>> = (0..=dim).map(|m| vec![usize::MAX; self.apex.size(m)]).collect();
        for (inj, leg) in self.injections.iter().zip(legs) {
            if leg.source != inj.source || leg.target != target {
                return Err(input_err!("cocone leg does not match the diagram"));
            }
            for (m, level) in levels.iter_mut().enumerate() {
                for x in 0..inj.source.size(m) {
                    let (k, y) = (inj.levels[m][x], leg.levels[m][x]);
                    if level[k] != usize::MAX && level[k] != y {
                        return Err(input_err!("cocone does not commute on level {m}"));
                    }
                    level[k] = y;
                }
            }
        }
        SSetMap::new(self.apex.clone(), target, levels)
    }
}

/// The pushout of `f: A → B` and `g: A → C`, as the colimit of `[B, C, A]`;
/// injections are `(B → P, C → P)`.
pub fn pushout(f: &SSetMap, g: &SSetMap) -> Result<Colimit> {
    if f.source != g.source {
        return Err(input_err!("pushout of maps with different sources"));
    }
    let objects = [f.target.clone(), g.target.clone(), f.source.clone()];
    let mut c = colimit(f.source.dim(), &objects, &[(2, 0, f), (2, 1, g)])?;
    c.injections.truncate(2);
    Ok(c)
}

/// The coproduct with summand `i` labelled `tags[i]:label`.
pub fn tagged_coproduct(dim: usize, parts: &[(String, SSet)]) -> Result<Colimit> {
    if parts.iter().any(|(_, p)| p.dim() != dim) {
        return Err(input_err!("all summands must have truncation {dim}"));
    }
    let mut faces = vec![Vec::new(); dim + 1];
    let mut degens = vec![Vec::new(); dim + 1];
    let mut offsets: Vec<Vec<usize>> = vec![Vec::new(); dim + 1];
    for (m, row) in offsets.iter_mut().enumerate() {
        let mut total = 0;
        for (_, p) in parts {
            row.push(total);
            total += p.size(m);
        }
    }
    let offsets = &offsets;
    for m in 0..=dim {
        if m > 0 {
            faces[m] = (0..=m)
                .map(|i| {
                    parts
                        .iter()
                        .enumerate()
                        .flat_map(|(k, (_, p))| p.face_table(m, i).iter().map(move |&y| y + offsets[m - 1][k]))
                        .collect()
                })
                .collect();
        }
        if m < dim {
            degens[m] = (0..=m)
                .map(|i| {
                    parts
                        .iter()
                        .enumerate()
                        .flat_map(|(k, (_, p))| p.degen_table(m, i).iter().map(move |&y| y + offsets[m + 1][k]))
                        .collect()
                })
                .collect();
        }
    }
    let levels = (0..=dim)
        .map(|m| FinSet::new(parts.iter().flat_map(|(t, p)| p.level(m).iter().map(move |l| format!("{t}:{l}")))))
        .collect::<Result<Vec<_>>>()?;
    let apex = SSet::new(dim, levels, faces, degens)?;
    let injections = parts
        .iter()
        .enumerate()
        .map(|(k, (_, p))| {
            let levels = (0..=dim).map(|m| (0..p.size(m)).map(|x| x + offsets[m][k]).collect()).collect();
            SSetMap::new(p.clone(), apex.clone(), levels)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Colimit { apex, injections })
}

/// `X ⊔ Y` with `L:`/`R:` tags.
pub fn coproduct(x: &SSet, y: &SSet) -> Result<Colimit> {
    if x.dim() != y.dim() {
        return Err(input_err!("coproduct of simplicial sets of different truncation"));
    }
    tagged_coproduct(x.dim(), &[("L".into(), x.clone()), ("R".into(), y.clone())])
}

/// Attaches an `n`-cell along `attaching: ∂Δⁿ → X`. Old simplices keep their
/// labels; new ones are labelled `{name}:{vertex tuple}`.
pub fn attach_cell(x: &SSet, n: usize, attaching: &SSetMap, name: &str) -> Result<(SSet, SSetMap)> {
    let (boundary, inclusion) = simplex_boundary(n, x.dim());
    if attaching.source != boundary || attaching.target != *x {
        return Err(input_err!("attaching map must go from ∂Δ^{n} to the complex"));
    }
    let glued = pushout(attaching, &inclusion)?;
    let delta = inclusion.target();
    let labels = (0..=x.dim())
        .map(|m| {
            let mut names: Vec<Option<String>> = vec![None; glued.apex.size(m)];
            for (k, &c) in glued.injections[0].levels[m].iter().enumerate() {
                names[c].get_or_insert_with(|| x.level(m).label(k).to_string());
            }
            for (k, &c) in glued.injections[1].levels[m].iter().enumerate() {
                names[c].get_or_insert_with(|| format!("{name}:{}", delta.level(m).label(k)));
            }
            names.into_iter().map(|n| n.expect("jointly surjective")).collect()
        })
        .collect();
    let apex = glued.apex.relabel(labels)?;
    let old = SSetMap::new(x.clone(), apex.clone(), glued.injections[0].levels.clone())?;
    Ok((apex, old))
}

/// A coproduct of standard simplices `⊔_k Δ^{n_k}` that remembers its
/// summands, so maps between such sums can be given by vertex maps.
#[derive(Clone, Debug)]
pub struct SimplexSum {
    parts: Vec<(String, usize)>,
    sset: SSet,
    /// `offsets[m][k]`: index of the first simplex of summand `k` on level `m`.
    offsets: Vec<Vec<usize>>,
}

impl SimplexSum {
    pub fn new(parts: Vec<(String, usize)>, dim: usize) -> Result<Self> {
        if let Some((t, n)) = parts.iter().find(|(_, n)| *n > dim) {
            return Err(Error::Truncation { what: format!("summand {t} = Δ^{n}"), required: *n, available: dim });
        }
        let simplices: Vec<(String, SSet)> =
            parts.iter().map(|(t, n)| (t.clone(), standard_simplex(*n, dim))).collect();
        let sset = tagged_coproduct(dim, &simplices)?.apex;
        let offsets = (0..=dim)
            .map(|m| {
                let mut total = 0;
                parts
                    .iter()
                    .map(|(_, n)| {
                        let o = total;
                        total += binomial(m + n + 1, m + 1);
                        o
                    })
                    .collect()
            })
            .collect();
        Ok(SimplexSum { parts, sset, offsets })
    }

    pub fn sset(&self) -> &SSet {
        &self.sset
    }

    pub fn parts(&self) -> &[(String, usize)] {
        &self.parts
    }

    pub fn part_index(&self, tag: &str) -> Option<usize> {
        self.parts.iter().position(|(t, _)| t == tag)
    }

    /// The simplex of summand `k` with the given vertex tuple.
    pub fn simplex(&self, k: usize, tuple: &[usize]) -> usize {
        self.offsets[tuple.len() - 1][k] + rank_monotone(tuple, self.parts[k].1)
    }

    /// The map to another sum sending summand `k` to summand `blocks[k].0`
    /// along the monotone vertex map `blocks[k].1`.
    pub fn map_to(&self, target: &SimplexSum, blocks: &[(usize, Vec<usize>)]) -> Result<SSetMap> {
        if blocks.len() != self.parts.len() {
            return Err(input_err!("one block per summand is required"));
        }
        for (k, (q, v)) in blocks.iter().enumerate() {
            let ok = *q < target.parts.len()
                && v.len() == self.parts[k].1 + 1
                && crate::grothendieck::is_monotone(v, target.parts[*q].1);
            if !ok {
                return Err(input_err!("block {k} is not a monotone vertex map into its summand"));
            }
        }
        let dim = self.sset.dim();
        let levels = (0..=dim)
            .map(|m| {
                let mut table = Vec::with_capacity(self.sset.size(m));
                for (k, (_, n)) in self.parts.iter().enumerate() {
                    let (q, v) = &blocks[k];
                    for t in monotone_tuples(m, *n) {
                        let image: Vec<usize> = t.iter().map(|&a| v[a]).collect();
                        table.push(target.simplex(*q, &image));
                    }
                }
                table
            })
            .collect();
        SSetMap::new(self.sset.clone(), target.sset.clone(), levels)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Position of a weakly increasing tuple in [`monotone_tuples`] order.
fn rank_monotone(tuple: &[usize], n: usize) -> usize {
    // Count tuples that are lexicographically smaller.
    let len = tuple.len();
    let mut rank = 0;
    let mut low = 0;
    for (i, &v) in tuple.iter().enumerate() {
        let rest = len - i - 1;
        for smaller in low..v {
            // Tuples of length `rest` with values in smaller..=n.
            rank += binomial(rest + n - smaller, rest);
        }
        low = v;
    }
    rank
}

/// A face identification `simplices[a]|faces_a ~ simplices[b]|faces_b`,
/// each side a monotone vertex list of the same length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identification {
    pub left: (usize, Vec<usize>),
    pub right: (usize, Vec<usize>),
}

/// A gluing of standard simplices along identified faces.
#[derive(Clone, Debug)]
pub struct Gluing {
    pub simplices: SimplexSum,
    pub identifications: Vec<Identification>,
    /// The colimit; injection 0 is the sum of the simplices.
    pub colimit: Colimit,
}

impl Gluing {
    pub fn apex(&self) -> &SSet {
        &self.colimit.apex
    }

    /// The image of the top simplex of summand `k`.
    pub fn top(&self, k: usize) -> usize {
        let n = self.simplices.parts()[k].1;
        self.colimit.injections[0].apply(n, self.simplices.simplex(k, &(0..=n).collect::<Vec<_>>()))
    }
}

/// `(⊔_k Δ^{n_k}) / ~`, the colimit of the simplices and one `Δ^m` per
/// identification mapped in along both sides.
pub fn glue(dims: &[usize], identifications: &[Identification], dim: usize) -> Result<Gluing> {
    let parts: Vec<(String, usize)> = dims.iter().enumerate().map(|(k, &n)| (format!("s{k}"), n)).collect();
    let sum = SimplexSum::new(parts, dim)?;
    let mut objects = vec![sum.sset().clone()];
    let mut maps = Vec::new();
    for (e, id) in identifications.iter().enumerate() {
        let len = id.left.1.len();
        if len == 0 || len != id.right.1.len() {
            return Err(input_err!("identification {e} must pair two vertex lists of equal, nonzero length"));
        }
        if id.left.0 >= dims.len() || id.right.0 >= dims.len() {
            return Err(input_err!("identification {e} names a missing simplex"));
        }
        let edge = SimplexSum::new(alloc::vec![(format!("i{e}"), len - 1)], dim)?;
        for side in [&id.left, &id.right] {
            maps.push((objects.len(), edge.map_to(&sum, core::slice::from_ref(side))?));
        }
        objects.push(edge.sset().clone());
    }
    let arrows: Vec<(usize, usize, &SSetMap)> = maps.iter().map(|(i, f)| (*i, 0, f)).collect();
    let mut colimit = colimit(dim, &objects, &arrows)?;
    colimit.injections.truncate(1);
    Ok(Gluing { simplices: sum, identifications: identifications.to_vec(), colimit })
}

/// `X·Δ¹`: one copy of `Δ¹` per element, labelled `x:0,1`.
pub fn alpha_object(x: &FinSet, dim: usize) -> Result<SimplexSum> {
    if dim == 0 {
        return Err(Error::Truncation { what: "X·Δ¹".into(), required: 1, available: 0 });
    }
    SimplexSum::new(x.iter().map(|l| (l.to_string(), 1)).collect(), dim)
}

/// The cospan `α(p)`: `X·Δ¹ → ⊔_y Δ^{|p⁻¹(y)|} ← Y·Δ¹`.
#[derive(Clone, Debug)]
pub struct AlphaSpan {
    pub source: SimplexSum,
    pub apex: SimplexSum,
    pub target: SimplexSum,
    /// Copy `x` goes to the edge `(r−1, r)` of summand `p(x)`, `r` the rank of `x`.
    pub spine: SSetMap,
    /// Copy `y` goes to the long edge `(0, |p⁻¹(y)|)` of summand `y`.
    pub longedge: SSetMap,
}

pub fn alpha(p: &AlgMorphism, dim: usize) -> Result<AlphaSpan> {
    let source = alpha_object(p.source(), dim)?;
    let target = alpha_object(p.target(), dim)?;
    let parts = p.target().iter().enumerate().map(|(y, l)| (l.to_string(), p.fiber(y).len())).collect();
    let apex = SimplexSum::new(parts, dim)?;
    let spine_blocks: Vec<(usize, Vec<usize>)> = (0..p.source().len())
        .map(|x| {
            let r = p.rank(x);
            (p.base().apply(x), vec![r - 1, r])
        })
        .collect();
    let long_blocks: Vec<(usize, Vec<usize>)> = (0..p.target().len()).map(|y| (y, vec![0, p.fiber(y).len()])).collect();
    let spine = source.map_to(&apex, &spine_blocks)?;
    let longedge = target.map_to(&apex, &long_blocks)?;
    Ok(AlphaSpan { source, apex, target, spine, longedge })
}

/// The gluing `α(q) ⊔_{Y·Δ¹} α(p)` and the canonical map into `α(q ∘ p)`.
#[derive(Clone, Debug)]
pub struct OplaxComponent {
    /// Pushout of the spine of `q` and the long edge of `p`; its first
    /// injection is from `α(q)`, its second from `α(p)`.
    pub gluing: Colimit,
    pub map: SSetMap,
}

pub fn oplax_component(p: &AlgMorphism, q: &AlgMorphism, dim: usize) -> Result<OplaxComponent> {
    let qp = crate::alg::compose_alg(p, q)?;
    let (ap, aq, aqp) = (alpha(p, dim)?, alpha(q, dim)?, alpha(&qp, dim)?);
    let gluing = pushout(&aq.spine, &ap.longedge)?;
    // Position of the block of p⁻¹(y) inside the composite fibre over q(y).
    let mut offset = vec![0; q.source().len()];
    for z in 0..q.target().len() {
        let mut acc = 0;
        for &y in q.fiber(z) {
            offset[y] = acc;
            acc += p.fiber(y).len();
        }
    }
    let collapse: Vec<(usize, Vec<usize>)> = (0..q.target().len())
        .map(|z| {
            let fiber = q.fiber(z);
            let mut vertices = vec![0];
            for &y in fiber {
                vertices.push(offset[y] + p.fiber(y).len());
            }
            (z, vertices)
        })
        .collect();
    let inclusions: Vec<(usize, Vec<usize>)> = (0..q.source().len())
        .map(|y| (q.base().apply(y), (0..=p.fiber(y).len()).map(|r| offset[y] + r).collect()))
        .collect();
    let u = aq.apex.map_to(&aqp.apex, &collapse)?;
    let v = ap.apex.map_to(&aqp.apex, &inclusions)?;
    let map = gluing.mediate(&[u, v])?;
    Ok(OplaxComponent { gluing, map })
}

/// The set `Hom(S, X)` of simplicial maps, with every map stored in full.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub set: FinSet,
    source: SSet,
    levels: usize,
    nondegenerate: Vec<(usize, usize)>,
    maps: Vec<Vec<Vec<usize>>>,
    index: BTreeMap<Vec<usize>, usize>,
}

impl Evaluation {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn source(&self) -> &SSet {
        &self.source
    }

    /// Value of map `k` on the simplex `x` of level `m`.
    pub fn value(&self, k: usize, m: usize, x: usize) -> usize {
        self.maps[k][m][x]
    }

    /// The map with the given values on the nondegenerate simplices of `S`.
    pub fn find(&self, values: &[usize]) -> Option<usize> {
        self.index.get(values).copied()
    }

    /// Precomposition with `g: S' → S`, landing in an evaluation on `S'`.
    pub fn restrict(&self, g: &SSetMap, onto: &Evaluation) -> Result<FinMap> {
        if g.target != self.source || g.source != onto.source {
            return Err(input_err!("restriction map does not match the evaluations"));
        }
        let table = self
            .maps
            .iter()
            .map(|f| {
                let values: Vec<usize> = onto.nondegenerate.iter().map(|&(m, x)| f[m][g.levels[m][x]]).collect();
                onto.find(&values).ok_or_else(|| internal_err!("restricted map is missing from the evaluation"))
            })
            .collect::<Result<Vec<_>>>()?;
        FinMap::new(self.set.clone(), onto.set.clone(), table)
    }

    /// Levels of `S` on which maps are stored.
    pub fn stored_levels(&self) -> usize {
        self.levels
    }
}

/// `X(S) = Hom(S, X)`, the value at `S` of the right Kan extension of `X`.
///
/// Maps are found by backtracking over the nondegenerate simplices of `S`,
/// highest level first; every assignment is propagated along faces and
/// degeneracies with conflict checks. Maps are labelled by their values on
/// the nondegenerate simplices of `S` (level by level, joined with `;`) and
/// ordered by those values.
pub fn evaluate(x: &SSet, s: &SSet) -> Result<Evaluation> {
    let needed = s.nondegenerate_dim().unwrap_or(0);
    if needed > x.dim() {
        return Err(Error::Truncation { what: "evaluation".into(), required: needed, available: x.dim() });
    }
    let top = s.dim().min(x.dim());
    let nondegenerate: Vec<(usize, usize)> =
        (0..=top).flat_map(|m| s.nondegenerate(m).into_iter().map(move |v| (m, v))).collect();
    let mut order = nondegenerate.clone();
    order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut search = Search {
        x,
        s,
        top,
        values: (0..=top).map(|m| vec![usize::MAX; s.size(m)]).collect(),
        trail: Vec::new(),
        found: Vec::new(),
    };
    search.run(&order, 0);
    let mut found: Vec<(Vec<usize>, Vec<Vec<usize>>)> = search
        .found
        .into_iter()
        .map(|f| (nondegenerate.iter().map(|&(m, v)| f[m][v]).collect(), f))
        .collect();
    found.sort();
    let labels = found.iter().map(|(key, _)| {
        let parts: Vec<&str> = key.iter().zip(&nondegenerate).map(|(&v, &(m, _))| x.level(m).label(v)).collect();
        parts.join(";")
    });
    let set = FinSet::new(labels)?;
    let index = found.iter().enumerate().map(|(k, (key, _))| (key.clone(), k)).collect();
    Ok(Evaluation {
        set,
        source: s.clone(),
        levels: top,
        nondegenerate,
        maps: found.into_iter().map(|(_, f)| f).collect(),
        index,
    })
}

struct Search<'a> {
    x: &'a SSet,
    s: &'a SSet,
    top: usize,
    values: Vec<Vec<usize>>,
    trail: Vec<(usize, usize)>,
    found: Vec<Vec<Vec<usize>>>,
}

impl Search<'_> {
    fn run(&mut self, order: &[(usize, usize)], pos: usize) {
        let Some(&(m, v)) = order.get(pos) else {
            self.found.push(self.values.clone());
            return;
        };
        if self.values[m][v] != usize::MAX {
            self.run(order, pos + 1);
            return;
        }
        for c in 0..self.x.size(m) {
            let faces_agree = m == 0
                || (0..=m).all(|i| {
                    let known = self.values[m - 1][self.s.face(m, i, v)];
                    known == usize::MAX || known == self.x.face(m, i, c)
                });
            if !faces_agree {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(m, v, c) {
                self.run(order, pos + 1);
            }
            for (lm, lv) in self.trail.drain(mark..) {
                self.values[lm][lv] = usize::MAX;
            }
        }
    }

    /// Sets `f(v) = c` and everything it forces; false on a conflict.
    fn assign(&mut self, m: usize, v: usize, c: usize) -> bool {
        let mut stack = vec![(m, v, c)];
        while let Some((m, v, c)) = stack.pop() {
            match self.values[m][v] {
                usize::MAX => {}
                known if known == c => continue,
                _ => return false,
            }
            self.values[m][v] = c;
            self.trail.push((m, v));
            if m > 0 {
                for i in 0..=m {
                    stack.push((m - 1, self.s.face(m, i, v), self.x.face(m, i, c)));
                }
            }
            if m < self.top {
                for i in 0..=m {
                    stack.push((m + 1, self.s.degen(m, i, v), self.x.degen(m, i, c)));
                }
            }
        }
        true
    }
}
