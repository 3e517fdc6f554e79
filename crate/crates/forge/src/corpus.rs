//! Generated families of simplicial sets used by the self-test and the
//! acceptance suite, plus the enumerators behind them.
//!
//! Everything random is driven by a seeded ChaCha generator, so a corpus is a
//! pure function of its seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use segal_core::finset::FinSet;
use segal_core::poset::{posets_up_to_iso, FinCat, FinPoset};
use segal_core::segal::{check_1segal, check_2segal_dk};
use segal_core::sset::{attach_cell, glue, monotone_tuples, nerve_cat, nerve_poset, simplex_boundary, Identification, SSet, SSetMap};
use segal_core::Result;

/// Truncation used for every generated member.
pub const DIM: usize = 4;
/// Largest number of nondegenerate cells per level in random complexes.
pub const MAX_CELLS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    PosetNerve,
    MonoidNerve,
    FreeCategoryNerve,
    CellComplex,
    Mutation,
    Fixture,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::PosetNerve => "poset-nerve",
            Family::MonoidNerve => "monoid-nerve",
            Family::FreeCategoryNerve => "free-category-nerve",
            Family::CellComplex => "cell-complex",
            Family::Mutation => "mutation",
            Family::Fixture => "fixture",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Member {
    pub name: String,
    pub family: Family,
    pub x: SSet,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nerves of all posets with `1..=max_elements` elements, up to isomorphism.
pub fn poset_nerves(max_elements: usize) -> Vec<Member> {
    let mut out = Vec::new();
    for n in 1..=max_elements {
        for (k, p) in posets_up_to_iso(n).iter().enumerate() {
            out.push(Member { name: format!("poset-{n}-{k}"), family: Family::PosetNerve, x: nerve_poset(p, DIM) });
        }
    }
    out
}

/// Multiplication tables of all monoids on `{0, …, n-1}` with unit `0`, up
/// to relabelling of the other elements.
pub fn monoid_tables(n: usize) -> Vec<Vec<Vec<usize>>> {
    if n == 0 {
        return Vec::new();
    }
    let free: Vec<(usize, usize)> = (1..n).flat_map(|a| (1..n).map(move |b| (a, b))).collect();
    let mut seen: Vec<Vec<Vec<usize>>> = Vec::new();
    let total = n.pow(free.len() as u32);
    for code in 0..total {
        let mut t: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| if a == 0 { b } else if b == 0 { a } else { 0 }).collect()).collect();
        let mut c = code;
        for &(a, b) in &free {
            t[a][b] = c % n;
            c /= n;
        }
        let assoc = (0..n).all(|a| (0..n).all(|b| (0..n).all(|d| t[t[a][b]][d] == t[a][t[b][d]])));
        if !assoc {
            continue;
        }
        let relabelled = |perm: &[usize]| {
            let mut u = vec![vec![0; n]; n];
            for a in 0..n {
                for b in 0..n {
                    u[perm[a]][perm[b]] = perm[t[a][b]];
                }
            }
            u
        };
        let duplicate = segal_core::poset::permutations(n - 1).iter().any(|p| {
            let perm: Vec<usize> = std::iter::once(0).chain(p.iter().map(|&i| i + 1)).collect();
            seen.contains(&relabelled(&perm))
        });
        if !duplicate {
            seen.push(t);
        }
    }
    seen
}

pub fn monoid_nerves(max_order: usize) -> Result<Vec<Member>> {
    let mut out = Vec::new();
    for n in 1..=max_order {
        for (k, t) in monoid_tables(n).into_iter().enumerate() {
            let c = FinCat::monoid(FinSet::range(n), 0, &t)?;
            out.push(Member { name: format!("monoid-{n}-{k}"), family: Family::MonoidNerve, x: nerve_cat(&c, DIM) });
        }
    }
    Ok(out)
}

/// Free categories on random acyclic quivers with at most four objects.
pub fn free_category_nerves(rng: &mut ChaCha8Rng, count: usize) -> Result<Vec<Member>> {
    let mut out = Vec::new();
    for k in 0..count {
        let n = rng.gen_range(1..=4);
        let edges: Vec<(String, usize, usize)> = if n == 1 {
            Vec::new()
        } else {
            (0..rng.gen_range(1..=4))
                .map(|e| {
                    let a = rng.gen_range(0..n - 1);
                    let b = rng.gen_range(a + 1..n);
                    (format!("e{e}"), a, b)
                })
                .collect()
        };
        let c = FinCat::free_on_acyclic(FinSet::range(n), &edges)?;
        out.push(Member { name: format!("free-{k}"), family: Family::FreeCategoryNerve, x: nerve_cat(&c, DIM) });
    }
    Ok(out)
}

/// A random compatible family `x₀, …, x_n ∈ X_{n-1}` with
/// `d_i x_j = d_{j-1} x_i` for `i < j`, i.e. a map `∂Δⁿ → X`.
pub fn random_boundary(x: &SSet, n: usize, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    fn extend(x: &SSet, n: usize, chosen: &mut Vec<usize>, rng: &mut ChaCha8Rng) -> bool {
        let j = chosen.len();
        if j == n + 1 {
            return true;
        }
        let mut candidates: Vec<usize> = (0..x.size(n - 1)).collect();
        candidates.shuffle(rng);
        for c in candidates {
            let fits = n == 1 || (0..j).all(|i| x.face(n - 1, i, c) == x.face(n - 1, j - 1, chosen[i]));
            if fits {
                chosen.push(c);
                if extend(x, n, chosen, rng) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::with_capacity(n + 1);
    extend(x, n, &mut chosen, rng).then_some(chosen)
}

/// The map `∂Δⁿ → X` determined by a compatible family of faces.
pub fn boundary_map(x: &SSet, n: usize, family: &[usize]) -> Result<SSetMap> {
    let (boundary, _) = simplex_boundary(n, x.dim());
    let levels = (0..=x.dim())
        .map(|m| {
            monotone_tuples(m, n)
                .into_iter()
                .filter_map(|t| {
                    let j = (0..=n).find(|v| !t.contains(v))?;
                    let theta: Vec<usize> = t.iter().map(|&v| if v > j { v - 1 } else { v }).collect();
                    Some(x.act(&theta, n - 1, family[j]))
                })
                .collect()
        })
        .collect();
    SSetMap::new(boundary, x.clone(), levels)
}

/// Attaches a cell of dimension `n` along the given boundary family.
pub fn attach(x: &SSet, n: usize, family: &[usize], name: &str) -> Result<SSet> {
    let f = boundary_map(x, n, family)?;
    Ok(attach_cell(x, n, &f, name)?.0)
}

pub fn discrete(vertices: usize, dim: usize) -> SSet {
    nerve_poset(&FinPoset::discrete(FinSet::range(vertices)), dim)
}

fn within_bounds(x: &SSet) -> bool {
    x.nondegenerate_counts().iter().all(|&c| c <= MAX_CELLS)
}

/// A random cell complex: a few vertices with random cells of dimension
/// `1..=3` attached, keeping at most five nondegenerate cells per level.
pub fn random_complex(rng: &mut ChaCha8Rng, dim: usize) -> Result<SSet> {
    let mut x = discrete(rng.gen_range(1..=3), dim);
    let attempts = rng.gen_range(1..=7);
    for c in 0..attempts {
        let n = rng.gen_range(1..=3.min(dim));
        let Some(family) = random_boundary(&x, n, rng) else { continue };
        let y = attach(&x, n, &family, &format!("c{c}"))?;
        if within_bounds(&y) {
            x = y;
        }
    }
    Ok(x)
}

pub fn cell_complexes(rng: &mut ChaCha8Rng, count: usize) -> Result<Vec<Member>> {
    (0..count)
        .map(|k| Ok(Member { name: format!("complex-{k}"), family: Family::CellComplex, x: random_complex(rng, DIM)? }))
        .collect()
}

/// Nerves of small posets with one or two extra cells attached.
pub fn mutations(rng: &mut ChaCha8Rng, count: usize) -> Result<Vec<Member>> {
    let bases: Vec<FinPoset> = (2..=3).flat_map(posets_up_to_iso).collect();
    let mut out = Vec::new();
    while out.len() < count {
        let mut x = nerve_poset(bases.choose(rng).expect("nonempty"), DIM);
        for c in 0..rng.gen_range(1..=2) {
            let n = rng.gen_range(1..=2);
            if let Some(family) = random_boundary(&x, n, rng) {
                x = attach(&x, n, &family, &format!("m{c}"))?;
            }
        }
        out.push(Member { name: format!("mutation-{}", out.len()), family: Family::Mutation, x });
    }
    Ok(out)
}

/// `Δ² ∪_{∂Δ²} Δ²`: two triangles sharing their whole boundary.
pub fn two_triangles(dim: usize) -> Result<SSet> {
    let x = nerve_poset(&FinPoset::chain(2), dim);
    let edges = |a: &str| x.level(1).index_of(a).expect("an edge");
    attach(&x, 2, &[edges("1,2"), edges("0,2"), edges("0,1")], "t")
}

/// Two triangles `012`, `023` sharing the edge `02`, with no 3-simplex to
/// fill the square.
pub fn square(dim: usize) -> Result<SSet> {
    let id = Identification { left: (0, vec![0, 2]), right: (1, vec![0, 1]) };
    Ok(glue(&[2, 2], &[id], dim)?.colimit.apex)
}

/// The first random cell complex drawn from `seed` that has a nondegenerate
/// triangle and is 2-Segal but not 1-Segal, with the attempt it was found at.
pub fn search_two_segal_not_one_segal(seed: u64, attempts: usize, dim: usize) -> Result<Option<(usize, SSet)>> {
    let mut rng = rng(seed);
    for attempt in 0..attempts {
        let x = random_complex(&mut rng, dim)?;
        if x.nondegenerate_counts()[2] > 0 && check_2segal_dk(&x, dim, false)?.passed && !check_1segal(&x, dim)?.passed {
            return Ok(Some((attempt, x)));
        }
    }
    Ok(None)
}

/// `Δ¹/∂Δ¹`: one vertex and one loop.
pub fn circle(dim: usize) -> Result<SSet> {
    attach(&discrete(1, dim), 1, &[0, 0], "loop")
}

/// The corpus used by the acceptance suite and `self-test`.
pub fn standard_corpus(seed: u64) -> Result<Vec<Member>> {
    let mut rng = rng(seed);
    let mut out = poset_nerves(4);
    out.extend(monoid_nerves(3)?);
    out.extend(free_category_nerves(&mut rng, 30)?);
    out.extend(cell_complexes(&mut rng, 120)?);
    out.extend(mutations(&mut rng, 20)?);
    out.push(Member { name: "two-triangles".into(), family: Family::Fixture, x: two_triangles(DIM)? });
    out.push(Member { name: "circle".into(), family: Family::Fixture, x: circle(DIM)? });
    out.push(Member { name: "square".into(), family: Family::Fixture, x: square(DIM)? });
    Ok(out)
}

/// Calls `visit(sizes, maps)` for every functor `P → FinSet` with object
/// sizes at most `max_size`, where `maps[a][b]` is the value on `a ≤ b`
/// (`None` unless `a ≤ b`). Stops early once `visit` returns `false`;
/// returns whether the enumeration ran to completion.
pub fn for_each_functor(p: &FinPoset, max_size: usize, mut visit: impl FnMut(&[usize], &[Vec<Option<Vec<usize>>>]) -> bool) -> bool {
    let n = p.len();
    // Assign maximal elements first, so everything above is known.
    let mut order = p.linear_extension();
    order.reverse();
    let above: Vec<Vec<usize>> = (0..n).map(|a| (0..n).filter(|&b| p.lt(a, b)).collect()).collect();
    let covers: Vec<Vec<usize>> = (0..n).map(|a| p.upper_covers(a)).collect();
    let mut sizes = vec![0; n];
    let mut maps: Vec<Vec<Option<Vec<usize>>>> = vec![vec![None; n]; n];

    struct Ctx<'a, F> {
        p: &'a FinPoset,
        order: Vec<usize>,
        above: Vec<Vec<usize>>,
        covers: Vec<Vec<usize>>,
        max_size: usize,
        visit: F,
    }

    fn rec<F: FnMut(&[usize], &[Vec<Option<Vec<usize>>>]) -> bool>(
        ctx: &mut Ctx<'_, F>,
        pos: usize,
        sizes: &mut Vec<usize>,
        maps: &mut Vec<Vec<Option<Vec<usize>>>>,
    ) -> bool {
        if pos == ctx.order.len() {
            return (ctx.visit)(sizes, maps);
        }
        let mut going = true;
        let a = ctx.order[pos];
        for s in 0..=ctx.max_size {
            if !going {
                break;
            }
            sizes[a] = s;
            maps[a][a] = Some((0..s).collect());
            let covers = ctx.covers[a].clone();
            let counts: Vec<usize> = covers.iter().map(|&b| sizes[b].pow(s as u32)).collect();
            let total: usize = counts.iter().product();
            for mut code in 0..total {
                if !going {
                    break;
                }
                let mut ok = true;
                let mut set: Vec<usize> = Vec::new();
                for (k, &b) in covers.iter().enumerate() {
                    let mut c = code % counts[k];
                    code /= counts[k];
                    let f: Vec<usize> = (0..s)
                        .map(|_| {
                            let v = c % sizes[b];
                            c /= sizes[b];
                            v
                        })
                        .collect();
                    let mut targets = vec![b];
                    targets.extend(ctx.above[b].iter().copied());
                    for c in targets {
                        let g: Vec<usize> =
                            if c == b { f.clone() } else { f.iter().map(|&v| maps[b][c].as_ref().expect("assigned")[v]).collect() };
                        match &maps[a][c] {
                            Some(h) if set.contains(&c) => {
                                if *h != g {
                                    ok = false;
                                    break;
                                }
                            }
                            _ => {
                                maps[a][c] = Some(g);
                                set.push(c);
                            }
                        }
                    }
                    if !ok {
                        break;
                    }
                }
                if ok {
                    debug_assert!(ctx.above[a].iter().all(|c| set.contains(c)) || ctx.p.is_empty());
                    going = rec(ctx, pos + 1, sizes, maps);
                }
                for c in set {
                    maps[a][c] = None;
                }
            }
        }
        maps[a][a] = None;
        sizes[a] = 0;
        going
    }

    let mut ctx = Ctx { p, order, above, covers, max_size, visit: &mut visit };
    rec(&mut ctx, 0, &mut sizes, &mut maps)
}
