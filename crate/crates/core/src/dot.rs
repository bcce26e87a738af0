//! Graphviz output for the member poset and the face-incidence graph.

use std::collections::HashMap;
use std::fmt::Write;

use crate::linsys::LinearSystem;
use crate::mbfaces;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Covering pairs `(i, j)`, `X_i ⊊ X_j` with nothing in between.
pub fn hasse_edges(s: &LinearSystem) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 0..s.len() {
        for i in 0..j {
            if s.lt(i, j).unwrap_or(false)
                && !(i + 1..j).any(|k| s.lt(i, k).unwrap_or(false) && s.lt(k, j).unwrap_or(false))
            {
                out.push((i, j));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Hasse diagram, edges pointing up.
pub fn poset_dot(s: &LinearSystem) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n");
    for i in 0..s.len() {
        let _ = writeln!(out, "  m{i} [label={}];", quote(s.name(i)));
    }
    for (i, j) in hasse_edges(s) {
        let _ = writeln!(out, "  m{i} -> m{j};");
    }
    out.push_str("}\n");
    out
}

fn chain_label(s: &LinearSystem, chain: &[usize]) -> String {
    let names: Vec<&str> = chain.iter().map(|&i| s.name(i)).collect();
    format!("{{{}}}", names.join(" < "))
}

/// Boundary faces, with an edge from each face to each face of one higher
/// codimension contained in it.
pub fn incidence_dot(s: &LinearSystem) -> String {
    let faces: Vec<mbfaces::Face> = mbfaces::all_faces(s).into_iter().flatten().collect();
    let id: HashMap<&[usize], usize> = faces.iter().enumerate().map(|(k, f)| (f.chain.as_slice(), k)).collect();
    let mut out = String::from("digraph faces {\n");
    for (k, f) in faces.iter().enumerate() {
        let _ = writeln!(out, "  f{k} [label={}, codim={}];", quote(&chain_label(s, &f.chain)), f.codim());
    }
    for (k, f) in faces.iter().enumerate() {
        if f.chain.len() < 2 {
            continue;
        }
        let mut parents: Vec<usize> = (0..f.chain.len())
            .map(|drop| {
                let c: Vec<usize> = f.chain.iter().enumerate().filter(|(p, _)| *p != drop).map(|(_, &x)| x).collect();
                id[c.as_slice()]
            })
            .collect();
        parents.sort_unstable();
        for p in parents {
            let _ = writeln!(out, "  f{p} -> f{k};");
        }
    }
    out.push_str("}\n");
    out
}
