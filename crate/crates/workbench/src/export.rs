//! Graphviz output of the specialization order.

use qfs_core::FiniteSpace;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram, smaller points at the bottom.
pub fn to_dot(name: &str, space: &FiniteSpace) -> String {
    let mut out = format!(
        "digraph {} {{\n  rankdir=BT;\n  node [shape=circle];\n",
        quote(name)
    );
    for l in space.labels() {
        out += &format!("  {};\n", quote(l));
    }
    for (x, y) in space.specialization_order().covers() {
        out += &format!(
            "  {} -> {};\n",
            quote(space.label(x)),
            quote(space.label(y))
        );
    }
    out += "}\n";
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use qfs_core::catalogue;

    #[test]
    fn vee_has_two_edges() {
        let dot = to_dot("vee", &catalogue::vee());
        assert!(dot.contains("\"a\" -> \"c\";"));
        assert!(dot.contains("\"b\" -> \"c\";"));
        assert_eq!(dot.matches("->").count(), 2);
    }
}
