//! Graphviz renderings of posets, categories and `α` pyramids.

use std::fmt::Write;

use segal_core::lax::AlphaSimplex;
use segal_core::poset::{FinCat, FinPoset};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn header(out: &mut String, name: &str, comment: Option<&str>) {
    if let Some(c) = comment {
        for line in c.lines() {
            writeln!(out, "// {line}").unwrap();
        }
    }
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
}

/// The Hasse diagram, arrows pointing up.
pub fn poset(p: &FinPoset, comment: Option<&str>) -> String {
    let mut out = String::new();
    header(&mut out, "poset", comment);
    writeln!(out, "  rankdir=BT;").unwrap();
    for i in 0..p.len() {
        writeln!(out, "  {};", quote(p.label(i))).unwrap();
    }
    for (a, b) in p.covers() {
        writeln!(out, "  {} -> {};", quote(p.label(a)), quote(p.label(b))).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Objects and non-identity arrows.
pub fn category(c: &FinCat, comment: Option<&str>) -> String {
    let mut out = String::new();
    header(&mut out, "category", comment);
    for o in c.objects().iter() {
        writeln!(out, "  {};", quote(o)).unwrap();
    }
    for f in 0..c.arrows().len() {
        if c.is_identity(f) {
            continue;
        }
        let (s, t) = (c.objects().label(c.src(f)), c.objects().label(c.tgt(f)));
        writeln!(out, "  {} -> {} [label={}];", quote(s), quote(t), quote(c.arrows().label(f))).unwrap();
    }
    out.push_str("}\n");
    out
}

fn counts(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

/// The pyramid on `Tw([n])` with its covering maps, plus the legs of every
/// span `X_i·Δ¹ → α(θ_ij) ← X_j·Δ¹` drawn dashed. Nodes show the
/// nondegenerate cell counts of their simplicial sets.
pub fn pyramid(a: &AlphaSimplex, comment: Option<&str>) -> String {
    let g = a.pyramid();
    let tw = g.twisted();
    let n = g.poset().len();
    let mut out = String::new();
    header(&mut out, "pyramid", comment);
    writeln!(out, "  node [shape=box];").unwrap();
    for len in (0..n).rev() {
        let row: Vec<String> = (0..n - len).map(|i| quote(&format!("[{i};{}]", i + len))).collect();
        writeln!(out, "  {{ rank=same; {}; }}", row.join("; ")).unwrap();
    }
    for i in 0..n {
        for j in i..n {
            let x = g.object(i, j);
            let node = format!("[{i};{j}]");
            writeln!(out, "  {} [label=\"{node}\\n{}\"];", quote(&node), counts(&x.nondegenerate_counts())).unwrap();
        }
    }
    // Covers onto the diagonal are span legs, drawn below.
    let diagonal: Vec<usize> = (0..n).map(|i| g.index(i, i)).collect();
    for (s, t) in tw.covers().into_iter().filter(|(_, t)| !diagonal.contains(t)) {
        writeln!(out, "  {} -> {};", quote(tw.label(s)), quote(tw.label(t))).unwrap();
    }
    for i in 0..n {
        for j in i + 1..n {
            let apex = quote(&format!("[{i};{j}]"));
            writeln!(out, "  {apex} -> {} [style=dashed, label=\"spine\"];", quote(&format!("[{i};{i}]"))).unwrap();
            writeln!(out, "  {apex} -> {} [style=dashed, label=\"long edge\"];", quote(&format!("[{j};{j}]"))).unwrap();
        }
    }
    out.push_str("}\n");
    out
}
