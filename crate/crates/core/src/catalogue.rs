//! Small named spaces used throughout the tests and the command line.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::order::SpecOrder;
use crate::set::PointSet;
use crate::space::{default_labels, FiniteSpace};

fn letters(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| char::from(b'a' + i as u8).to_string())
        .collect()
}

pub fn one_point() -> FiniteSpace {
    FiniteSpace::from_order(default_labels(1), SpecOrder::chain(1)).expect("one point")
}

/// Carrier `{0, 1}` with opens `∅, {1}, {0, 1}`.
pub fn sierpinski() -> FiniteSpace {
    FiniteSpace::from_opens(
        default_labels(2),
        alloc::vec![PointSet::EMPTY, PointSet::singleton(1), PointSet::full(2)],
    )
    .expect("sierpinski space")
}

/// `0 < 1 < .. < n-1` with the up-set topology.
pub fn chain(n: usize) -> FiniteSpace {
    FiniteSpace::from_order(default_labels(n), SpecOrder::chain(n)).expect("chain")
}

/// `n` incomparable points labelled `a, b, ..`.
pub fn antichain(n: usize) -> FiniteSpace {
    FiniteSpace::from_order(letters(n), SpecOrder::antichain(n)).expect("antichain")
}

/// `a < c`, `b < c`.
pub fn vee() -> FiniteSpace {
    let order = SpecOrder::from_relation(3, [(0, 2), (1, 2)]).expect("vee order");
    FiniteSpace::from_order(letters(3), order).expect("vee")
}

/// `a < b`, `a < c`.
pub fn wedge() -> FiniteSpace {
    let order = SpecOrder::from_relation(3, [(0, 1), (0, 2)]).expect("wedge order");
    FiniteSpace::from_order(letters(3), order).expect("wedge")
}

/// Looks up a catalogue space by name (`sierpinski`, `chain3`, `antichain2`, `vee`, ...).
pub fn by_name(name: &str) -> Option<FiniteSpace> {
    let lower = name.to_ascii_lowercase();
    match lower.as_str() {
        "one-point" | "one_point" | "point" => Some(one_point()),
        "sierpinski" => Some(sierpinski()),
        "vee" => Some(vee()),
        "wedge" => Some(wedge()),
        _ => {
            if let Some(n) = lower.strip_prefix("chain") {
                n.parse().ok().filter(|&n| (1..=12).contains(&n)).map(chain)
            } else if let Some(n) = lower.strip_prefix("antichain") {
                n.parse()
                    .ok()
                    .filter(|&n| (1..=12).contains(&n))
                    .map(antichain)
            } else {
                None
            }
        }
    }
}
