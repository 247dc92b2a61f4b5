use std::fmt::Write;

use crate::equivalence::Partition;
use crate::kernel::{Effect, System};
use crate::reglang::dot_escape;
use crate::saturation::{sample_words, WeakMatrix};

fn is_final(e: &Effect) -> bool {
    e.bare().iter().any(|w| w.is_empty())
}

fn nodes(out: &mut String, system: &System, indent: &str, members: impl Iterator<Item = usize>) {
    for x in members {
        let shape = if is_final(system.at(x)) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "{indent}n{x} [label=\"{}\", shape={shape}];", dot_escape(system.source().name(x)));
    }
}

fn edges(out: &mut String, system: &System) {
    let alphabet = system.alphabet();
    let mut accepts = false;
    for (x, e) in system.image().iter().enumerate() {
        match e {
            Effect::Pow(ys) => ys.iter().for_each(|y| {
                let _ = writeln!(out, "  n{x} -> n{y};");
            }),
            Effect::Lts(pairs) => pairs.iter().for_each(|&(l, y)| {
                let _ = writeln!(out, "  n{x} -> n{y} [label=\"{}\"];", dot_escape(alphabet.label_name(l)));
            }),
            Effect::FreeLts(pairs) | Effect::Ena { pairs, .. } => {
                for (w, y) in pairs {
                    let _ = writeln!(out, "  n{x} -> n{y} [label=\"{}\"];", dot_escape(&alphabet.render(w)));
                }
                for w in e.bare().iter().filter(|w| !w.is_empty()) {
                    accepts = true;
                    let _ = writeln!(out, "  n{x} -> accept [label=\"{}\", style=dashed];", dot_escape(&alphabet.render(w)));
                }
            }
        }
    }
    if accepts {
        out.push_str("  accept [shape=point];\n");
    }
}

/// A system as a digraph; states holding the empty bare word are double circles.
pub fn dot_system(system: &System) -> String {
    let mut out = String::from("digraph system {\n  rankdir=LR;\n");
    nodes(&mut out, system, "  ", 0..system.len());
    edges(&mut out, system);
    out.push_str("}\n");
    out
}

/// A partition as one cluster per block, with the system's edges if given.
pub fn dot_partition(partition: &Partition, system: Option<&System>) -> String {
    let mut out = String::from("digraph partition {\n  rankdir=LR;\n");
    let space = partition.space();
    for (b, block) in partition.blocks().iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{b} {{\n    label=\"B{b}\";");
        match system {
            Some(s) => nodes(&mut out, s, "    ", block.iter().copied()),
            None => block.iter().for_each(|&x| {
                let _ = writeln!(out, "    n{x} [label=\"{}\"];", dot_escape(space.name(x)));
            }),
        }
        out.push_str("  }\n");
    }
    if let Some(s) = system {
        edges(&mut out, s);
    }
    out.push_str("}\n");
    out
}

/// One edge per nonempty saturated entry, labelled with its shortest words.
pub fn dot_matrix(matrix: &WeakMatrix, max_len: usize, samples: usize) -> String {
    let alphabet = matrix.alphabet();
    let label = |l: &crate::reglang::RegLang| {
        let mut words: Vec<String> = sample_words(l, max_len, samples).iter().map(|w| alphabet.render(w)).collect();
        if words.len() == samples {
            words.push("…".into());
        }
        dot_escape(&words.join(", "))
    };
    let mut out = String::from("digraph saturation {\n  rankdir=LR;\n");
    for x in 0..matrix.len() {
        let _ = writeln!(out, "  n{x} [label=\"{}\"];", dot_escape(matrix.space().name(x)));
    }
    for x in 0..matrix.len() {
        for y in 0..matrix.len() {
            let l = matrix.lang(x, y);
            if !l.is_empty() {
                let _ = writeln!(out, "  n{x} -> n{y} [label=\"{}\"];", label(&l));
            }
        }
        if let Some(l) = matrix.bare(x).filter(|l| !l.is_empty()) {
            let _ = writeln!(out, "  n{x} -> accept [label=\"{}\", style=dashed];", label(&l));
        }
    }
    if matrix.has_bare() {
        out.push_str("  accept [shape=point];\n");
    }
    out.push_str("}\n");
    out
}
