//! One-page summaries of a space and of its upper powerspace.

use qfs_core::approx::{is_locally_hypercompact, Approximation};
use qfs_core::construct::is_core_compact;
use qfs_core::qfs::{check_fs_family, search_fs_witness, search_qfs_witness};
use qfs_core::{FiniteSpace, MapFamily, PowerSpace, Reading, Search};
use serde::Serialize;

use crate::instance::labels_of;

fn search_word<W>(s: &Search<W>) -> String {
    match s {
        Search::Found(_) => "found".into(),
        Search::Absent => "absent".into(),
        Search::Unknown { explored } => format!("unknown after {explored} candidates"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub name: String,
    pub points: usize,
    pub opens: usize,
    pub covers: Vec<[String; 2]>,
    pub directed_space: bool,
    pub d_continuous: bool,
    pub d_quasicontinuous: bool,
    pub locally_hypercompact: bool,
    pub compact_points: Vec<String>,
    pub core_compact: Option<bool>,
    pub qfs_witness: String,
    pub fs_witness: String,
}

pub fn analyze(name: &str, space: &FiniteSpace, budget: u64) -> qfs_core::Result<Analysis> {
    let directed_space = space.is_directed_space();
    let approx = Approximation::new(space)?;
    Ok(Analysis {
        name: name.to_string(),
        points: space.len(),
        opens: space.opens().len(),
        covers: space
            .specialization_order()
            .covers()
            .into_iter()
            .map(|(x, y)| [space.label(x).to_string(), space.label(y).to_string()])
            .collect(),
        directed_space,
        d_continuous: approx.is_d_continuous(),
        d_quasicontinuous: approx.is_d_quasicontinuous(),
        locally_hypercompact: is_locally_hypercompact(space),
        compact_points: labels_of(space, approx.compact_points()),
        core_compact: is_core_compact(space).ok(),
        qfs_witness: search_word(&search_qfs_witness(space, budget)?),
        fs_witness: search_word(&search_fs_witness(space)?),
    })
}

impl Analysis {
    pub fn render_text(&self) -> String {
        let covers: Vec<String> = self
            .covers
            .iter()
            .map(|[x, y]| format!("{x} < {y}"))
            .collect();
        let core = match self.core_compact {
            Some(b) => b.to_string(),
            None => "not evaluated".into(),
        };
        format!(
            "space {}\n  points: {}\n  opens: {}\n  covers: {}\n  directed space: {}\n  \
             d-continuous: {}\n  d-quasicontinuous: {}\n  locally hypercompact: {}\n  \
             compact points: {}\n  core-compact: {}\n  qfs witness: {}\n  fs witness: {}\n",
            self.name,
            self.points,
            self.opens,
            if covers.is_empty() {
                "none".into()
            } else {
                covers.join(", ")
            },
            self.directed_space,
            self.d_continuous,
            self.d_quasicontinuous,
            self.locally_hypercompact,
            self.compact_points.join(", "),
            core,
            self.qfs_witness,
            self.fs_witness,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerSummary {
    pub reading: String,
    /// Generators of the elements, in index order.
    pub elements: Vec<String>,
    pub opens: usize,
    pub equals_upper_vietoris: bool,
    pub semilattice: bool,
    pub union_continuity: String,
    pub fs_family: String,
    pub readings_agree: bool,
}

pub fn powerspace_summary(
    base: &FiniteSpace,
    family: &MapFamily,
    reading: Reading,
) -> qfs_core::Result<(PowerSpace, PowerSummary)> {
    let power = PowerSpace::build(base, reading)?;
    let other = PowerSpace::build(
        base,
        match reading {
            Reading::SomeLimit => Reading::EveryLimit,
            Reading::EveryLimit => Reading::SomeLimit,
        },
    )?;
    let mut upper = power.upper_vietoris();
    upper.sort();
    let semi = power.semilattice_report()?;
    let union_continuity = if semi.continuous {
        "continuous"
    } else {
        "not continuous"
    }
    .to_string();
    let fs_family = match power.fs_witness(family) {
        Ok(maps) => {
            if check_fs_family(power.space(), &maps)?.passed() {
                "passes".into()
            } else {
                "fails".into()
            }
        }
        Err(e) => format!("not built: {e}"),
    };
    let summary = PowerSummary {
        reading: format!("{reading:?}"),
        elements: (0..power.len())
            .map(|i| base.format_set(power.elements().generator(i)))
            .collect(),
        opens: power.space().opens().len(),
        equals_upper_vietoris: power.space().opens() == upper.as_slice(),
        semilattice: semi.passed(),
        union_continuity,
        fs_family,
        readings_agree: power.space().opens() == other.space().opens(),
    };
    Ok((power, summary))
}

impl PowerSummary {
    pub fn render_text(&self) -> String {
        format!(
            "upper powerspace ({} reading)\n  elements: {}\n  opens: {}\n  equals upper Vietoris: {}\n  \
             semilattice laws: {}\n  union: {}\n  lifted fs family: {}\n  readings agree: {}\n",
            self.reading,
            self.elements.join(" "),
            self.opens,
            self.equals_upper_vietoris,
            self.semilattice,
            self.union_continuity,
            self.fs_family,
            self.readings_agree,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qfs_core::catalogue;

    #[test]
    fn sierpinski_summary() {
        let a = analyze("sierpinski", &catalogue::sierpinski(), 1000).unwrap();
        assert!(a.directed_space && a.d_quasicontinuous && a.locally_hypercompact);
        assert_eq!(a.qfs_witness, "found");
        assert_eq!(a.covers, [["0".to_string(), "1".to_string()]]);
    }

    #[test]
    fn chain_powerspace_summary() {
        let c = catalogue::chain(2);
        let (p, s) = powerspace_summary(&c, &MapFamily::identity(2), Reading::SomeLimit).unwrap();
        assert_eq!(p.len(), 2);
        assert!(s.equals_upper_vietoris && s.semilattice && s.readings_agree);
        assert_eq!(s.fs_family, "passes");
    }
}
