//! Graphviz output for Hasse diagrams.

use std::fmt::Write;

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

/// A bottom-to-top Hasse diagram; nodes and edges are written in index order so the
/// output only depends on the input.
pub fn hasse(name: &str, labels: &[String], covers: &[(usize, usize)], notes: &[Option<String>]) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=box];").unwrap();
    for (i, l) in labels.iter().enumerate() {
        let text = match notes.get(i).and_then(Option::as_ref) {
            Some(n) => format!("{l}\\n{n}"),
            None => l.clone(),
        };
        writeln!(out, "  n{i} [label={}];", quote(&text).replace("\\\\n", "\\n")).unwrap();
    }
    let mut edges = covers.to_vec();
    edges.sort_unstable();
    for (a, b) in edges {
        writeln!(out, "  n{a} -> n{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_are_sorted_and_notes_break_lines() {
        let d = hasse("x", &["a".into(), "b".into()], &[(1, 0), (0, 1)], &[Some("{M}".into()), None]);
        assert!(d.contains("n0 [label=\"a\\n{M}\"]"));
        assert!(d.find("n0 -> n1").unwrap() < d.find("n1 -> n0").unwrap());
    }
}
