//! Theorem suites over a corpus, run in parallel and merged in corpus order.

use qfs_core::approx::{is_locally_hypercompact, Approximation};
use qfs_core::construct::{
    closed_subspace_qfs, directed_closed_violation, is_core_compact, point_plus_upset_retract,
    product_qfs, product_topology, projection_image_qfs, retract_transport_qfs, tensor_product,
};
use qfs_core::maps::{
    continuous_maps, find_retractions, is_projection, is_quasicontinuous_map,
    is_quasicontinuous_map_exhaustive,
};
use qfs_core::qfs::{
    check_fs_family, check_qfs_map, check_qfs_map_against, check_quasi_approximate_identity,
    first_unapproximated_point, fs_to_qfs, open_cover_report, qfs_maps_prefix,
    satisfies_property_p, search_fs_witness, search_qfs_witness, upset_report,
};
use qfs_core::space::default_labels;
use qfs_core::{FiniteSpace, MapFamily, PointSet, PowerSpace, Reading, Search, SetValuedMap};
use std::cell::OnceCell;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{enumerate_posets, Corpus};
use crate::instance::Instance;

pub const SCHEMA_VERSION: u32 = 1;

pub const SUITES: [&str; 4] = ["prelims", "qfs", "constructions", "powerspace"];

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("unknown suite {0:?}; expected one of prelims, qfs, constructions, powerspace, all")]
    UnknownSuite(String),
    #[error("unknown check {0:?}")]
    UnknownCheck(String),
    #[error("building the worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("{0}")]
    Corpus(#[from] crate::corpus::CorpusError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// Passed, with an observation worth reporting.
    Note(String),
    Fail(String),
    Unknown(String),
    /// The check does not apply to this instance.
    Skip,
}

fn fail_on_err<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, Outcome> {
    r.map_err(|e| Outcome::Fail(e.to_string()))
}

fn verdict(ok: bool, detail: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail(detail())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Settings {
    /// Candidate budget for witness searches and map enumeration.
    pub budget: u64,
    /// Richer witness families `{1*, δ}` tried per instance.
    pub extra_families: usize,
    /// Largest factor for tensor products, and largest retract target.
    pub factor_max: usize,
    /// Largest base space for the powerspace suite.
    pub power_max: usize,
    /// Largest space for the exhaustive family-universe cross-check.
    pub universe_max: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            budget: qfs_core::qfs::SEARCH_BUDGET,
            extra_families: 8,
            factor_max: 3,
            power_max: 4,
            universe_max: 4,
        }
    }
}

/// Shared, read-only inputs for every check.
pub struct Context {
    pub settings: Settings,
    /// Every poset up to `factor_max` points, for products and retracts.
    pub factors: Vec<FiniteSpace>,
}

impl Context {
    pub fn new(settings: Settings) -> Result<Self, SuiteError> {
        let mut factors = Vec::new();
        for n in 1..=settings.factor_max {
            for order in enumerate_posets(n, n)? {
                factors.push(
                    FiniteSpace::from_order(default_labels(n), order)
                        .map_err(crate::corpus::CorpusError::from)?,
                );
            }
        }
        Ok(Context { settings, factors })
    }
}

/// One instance, with the expensive shared inputs computed on first use.
pub struct Subject<'a> {
    pub space: &'a FiniteSpace,
    budget: u64,
    witness: OnceCell<Result<MapFamily, Outcome>>,
    maps: OnceCell<(Vec<SetValuedMap>, bool)>,
}

impl<'a> Subject<'a> {
    pub fn new(space: &'a FiniteSpace, budget: u64) -> Self {
        Subject {
            space,
            budget,
            witness: OnceCell::new(),
            maps: OnceCell::new(),
        }
    }

    /// The quasi-approximate identity found by search.
    fn witness(&self) -> Result<&MapFamily, Outcome> {
        self.witness
            .get_or_init(|| search_witness(self.space, self.budget))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Antichain-valued quasi-finitely separating maps found within the
    /// budget, and whether that is all of them.
    fn maps(&self) -> &(Vec<SetValuedMap>, bool) {
        self.maps
            .get_or_init(|| qfs_maps_prefix(self.space, self.budget))
    }
}

fn search_witness(space: &FiniteSpace, budget: u64) -> Result<MapFamily, Outcome> {
    match fail_on_err(search_qfs_witness(space, budget))? {
        Search::Found(w) => Ok(w),
        Search::Absent => Err(Outcome::Fail("no witness exists".into())),
        Search::Unknown { explored } => Err(Outcome::Unknown(format!(
            "budget spent after {explored} candidates"
        ))),
    }
}

type CheckFn = fn(&Context, &Subject) -> Outcome;

pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub run: CheckFn,
}

impl Check {
    pub fn id(&self) -> String {
        format!("{}/{}", self.suite, self.name)
    }
}

const CHECKS: &[Check] = &[
    Check {
        suite: "prelims",
        name: "directed-opens-are-upsets",
        run: directed_opens_are_upsets,
    },
    Check {
        suite: "prelims",
        name: "quasicontinuity-three-ways",
        run: quasicontinuity_three_ways,
    },
    Check {
        suite: "prelims",
        name: "uparrow-is-interior",
        run: uparrow_is_interior,
    },
    Check {
        suite: "prelims",
        name: "interpolation",
        run: interpolation,
    },
    Check {
        suite: "prelims",
        name: "way-below-is-order",
        run: way_below_is_order,
    },
    Check {
        suite: "prelims",
        name: "quasicontinuous-maps-two-ways",
        run: quasicontinuous_maps_two_ways,
    },
    Check {
        suite: "qfs",
        name: "witness-search",
        run: witness_search,
    },
    Check {
        suite: "qfs",
        name: "values-way-below-points",
        run: values_way_below_points,
    },
    Check {
        suite: "qfs",
        name: "values-form-quasibase",
        run: values_form_quasibase,
    },
    Check {
        suite: "qfs",
        name: "open-cover",
        run: open_cover,
    },
    Check {
        suite: "qfs",
        name: "upset-intersection",
        run: upset_intersection,
    },
    Check {
        suite: "qfs",
        name: "interpolating-member",
        run: interpolating_member,
    },
    Check {
        suite: "qfs",
        name: "convergence-over-directed-opens",
        run: convergence_over_directed_opens,
    },
    Check {
        suite: "qfs",
        name: "fs-lifts",
        run: fs_lifts,
    },
    Check {
        suite: "constructions",
        name: "directed-closed-agrees",
        run: directed_closed_agrees,
    },
    Check {
        suite: "constructions",
        name: "closed-subspaces",
        run: closed_subspaces,
    },
    Check {
        suite: "constructions",
        name: "projection-images",
        run: projection_images,
    },
    Check {
        suite: "constructions",
        name: "retracts",
        run: retracts,
    },
    Check {
        suite: "constructions",
        name: "point-upset-retracts",
        run: point_upset_retracts,
    },
    Check {
        suite: "constructions",
        name: "core-compact",
        run: core_compact,
    },
    Check {
        suite: "constructions",
        name: "tensor-products",
        run: tensor_products,
    },
    Check {
        suite: "powerspace",
        name: "vietoris",
        run: vietoris,
    },
    Check {
        suite: "powerspace",
        name: "way-below-lifts",
        run: way_below_lifts,
    },
    Check {
        suite: "powerspace",
        name: "semilattice",
        run: semilattice,
    },
    Check {
        suite: "powerspace",
        name: "continuous-base-convergence",
        run: continuous_base_convergence,
    },
    Check {
        suite: "powerspace",
        name: "fs-lift",
        run: powerspace_fs_lift,
    },
    Check {
        suite: "powerspace",
        name: "readings",
        run: readings,
    },
];

pub fn checks_for(suite: &str) -> Result<Vec<&'static Check>, SuiteError> {
    if suite == "all" {
        return Ok(CHECKS.iter().collect());
    }
    if !SUITES.contains(&suite) {
        return Err(SuiteError::UnknownSuite(suite.to_string()));
    }
    Ok(CHECKS.iter().filter(|c| c.suite == suite).collect())
}

pub fn check_by_id(id: &str) -> Result<&'static Check, SuiteError> {
    CHECKS
        .iter()
        .find(|c| c.id() == id)
        .ok_or_else(|| SuiteError::UnknownCheck(id.to_string()))
}

// ---- prelims ----

fn directed_opens_are_upsets(_: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    let upsets = match s.specialization_order().upper_sets() {
        Ok(u) => u,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    let d = s.directed_open_sets();
    if d != upsets {
        return Outcome::Fail(format!(
            "{} directed-open sets, {} upper sets",
            d.len(),
            upsets.len()
        ));
    }
    verdict(s.is_directed_space(), || "not a directed space".into())
}

fn quasicontinuity_three_ways(_: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    let a = match Approximation::new(s) {
        Ok(a) => a,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    let q = a.is_d_quasicontinuous();
    let h = is_locally_hypercompact(s);
    let c = a.has_converging_subfamilies();
    verdict(q == h && h == c, || {
        format!("quasicontinuous {q}, locally hypercompact {h}, converging subfamilies {c}")
    })
}

fn uparrow_is_interior(_: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    let a = match Approximation::new(s) {
        Ok(a) => a,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    for f in s.carrier().subsets().filter(|f| !f.is_empty()) {
        let up = a.uparrow_d(f).expect("nonempty");
        let int = s.interior(s.up_closure(f));
        if up != int {
            return Outcome::Fail(format!(
                "F = {}: {} vs {}",
                s.format_set(f),
                s.format_set(up),
                s.format_set(int)
            ));
        }
    }
    Outcome::Pass
}

fn interpolation(_: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    let a = match Approximation::new(s) {
        Ok(a) => a,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    for h in s.carrier().subsets().filter(|h| !h.is_empty()) {
        for y in 0..s.len() {
            let y_set = PointSet::singleton(y);
            if !a.way_below_set(h, y_set).expect("nonempty") {
                continue;
            }
            match a.interpolate(h, y) {
                Ok(Some(f))
                    if a.way_below_set(h, f).unwrap_or(false)
                        && a.way_below_set(f, y_set).unwrap_or(false) => {}
                other => {
                    return Outcome::Fail(format!(
                        "H = {}, y = {}: {other:?}",
                        s.format_set(h),
                        s.label(y)
                    ))
                }
            }
        }
    }
    Outcome::Pass
}

fn way_below_is_order(_: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    let a = match Approximation::new(s) {
        Ok(a) => a,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    for x in 0..s.len() {
        for y in 0..s.len() {
            if a.way_below_point(x, y) != s.le(x, y) {
                return Outcome::Fail(format!("{} and {}", s.label(x), s.label(y)));
            }
        }
    }
    let singletons: Vec<PointSet> = (0..s.len()).map(PointSet::singleton).collect();
    verdict(a.is_d_continuous() && a.is_quasibase(&singletons), || {
        "singletons are not a quasibase".into()
    })
}

fn quasicontinuous_maps_two_ways(ctx: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    if s.len() > ctx.settings.universe_max {
        return Outcome::Skip;
    }
    let maps = match continuous_maps(s, s) {
        Ok(m) => m,
        Err(e) => return Outcome::Unknown(e.to_string()),
    };
    for f in &maps {
        let reduced = is_quasicontinuous_map(s, s, f);
        match is_quasicontinuous_map_exhaustive(s, s, f) {
            Ok(full) if full == reduced => {}
            other => {
                return Outcome::Fail(format!(
                    "map {:?}: reduced {reduced}, exhaustive {other:?}",
                    f.table()
                ))
            }
        }
    }
    Outcome::Pass
}

// ---- qfs ----

/// The witness found by search, then `{1*, δ}` for enumerated maps `δ`.
fn witness_families(ctx: &Context, sub: &Subject) -> Result<Vec<MapFamily>, Outcome> {
    let mut families = vec![sub.witness()?.clone()];
    let s = sub.space;
    let identity = MapFamily::identity(s.len())
        .resolve(s)
        .expect("identity is quasi-finitely separating")
        .members
        .remove(0);
    let order = s.specialization_order();
    families.extend(
        sub.maps()
            .0
            .iter()
            .filter(|d| !d.same_upsets(&identity, order))
            .take(ctx.settings.extra_families)
            .map(|d| MapFamily::new(vec![identity.clone(), d.clone()])),
    );
    Ok(families)
}

fn each_family(
    ctx: &Context,
    sub: &Subject,
    mut check: impl FnMut(usize, &MapFamily) -> Outcome,
) -> Outcome {
    let s = sub.space;
    let families = match witness_families(ctx, sub) {
        Ok(f) => f,
        Err(o) => return o,
    };
    for (i, fam) in families.iter().enumerate() {
        let report = check_quasi_approximate_identity(s, fam);
        if !report.passed() {
            return Outcome::Fail(format!(
                "family {i} is not a quasi-approximate identity: {report:?}"
            ));
        }
        match check(i, fam) {
            Outcome::Pass => {}
            other => return other,
        }
    }
    Outcome::Pass
}

fn witness_search(ctx: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    match witness_families(ctx, sub) {
        Ok(families) => {
            let report = check_quasi_approximate_identity(s, &families[0]);
            verdict(report.passed(), || format!("{report:?}"))
        }
        Err(o) => o,
    }
}

fn values_way_below_points(ctx: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    let a = match Approximation::new(s) {
        Ok(a) => a,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    each_family(ctx, sub, |i, fam| {
        for (m, d) in fam.members.iter().enumerate() {
            if let Some(x) = first_unapproximated_point(&a, d) {
                return Outcome::Fail(format!("family {i} member {m} at {}", s.label(x)));
            }
        }
        Outcome::Pass
    })
}

fn values_form_quasibase(ctx: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    let a = match Approximation::new(s) {
        Ok(a) => a,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    each_family(ctx, sub, |i, fam| {
        let mut values: Vec<PointSet> = fam
            .members
            .iter()
            .flat_map(|d| d.table().iter().copied())
            .collect();
        values.sort();
        values.dedup();
        verdict(a.is_quasibase(&values) && a.is_d_quasicontinuous(), || {
            format!("family {i}: values are not a quasibase")
        })
    })
}

fn open_cover(ctx: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    each_family(ctx, sub, |i, fam| {
        for &u in s.opens() {
            match open_cover_report(s, fam, u) {
                Ok(r) if r.passed() => {}
                other => {
                    return Outcome::Fail(format!("family {i}, U = {}: {other:?}", s.format_set(u)))
                }
            }
        }
        Outcome::Pass
    })
}

fn upset_intersection(ctx: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    each_family(ctx, sub, |i, fam| {
        for f in s.carrier().subsets().filter(|f| !f.is_empty()) {
            match upset_report(s, fam, f) {
                Ok(r) if r.passed() => {}
                other => {
                    return Outcome::Fail(format!("family {i}, F = {}: {other:?}", s.format_set(f)))
                }
            }
        }
        Outcome::Pass
    })
}

fn interpolating_member(ctx: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    let a = match Approximation::new(s) {
        Ok(a) => a,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    each_family(ctx, sub, |i, fam| {
        verdict(satisfies_property_p(&a, fam), || format!("family {i}"))
    })
}

fn convergence_over_directed_opens(_ctx: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    let (maps, complete) = sub.maps();
    let d_opens = s.directed_open_sets();
    let mut candidates: Vec<SetValuedMap> = maps
        .iter()
        .map(|d| SetValuedMap::new(d.table().to_vec(), None).expect("valid"))
        .collect();
    candidates.push(SetValuedMap::identity(s.len()));
    for d in &candidates {
        let by_opens = check_qfs_map(s, d).passed();
        let by_directed = check_qfs_map_against(s, d, &d_opens).passed();
        if by_opens != by_directed {
            return Outcome::Fail(format!(
                "map {:?}: opens {by_opens}, directed opens {by_directed}",
                d.table()
            ));
        }
    }
    if *complete {
        Outcome::Pass
    } else {
        Outcome::Note(format!(
            "compared on the first {} maps; the enumeration budget ran out",
            maps.len()
        ))
    }
}

fn fs_lifts(_: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    match search_fs_witness(s) {
        Ok(Search::Found(fam)) => {
            let lifted = fs_to_qfs(&fam);
            let report = check_quasi_approximate_identity(s, &lifted);
            verdict(report.passed(), || format!("{report:?}"))
        }
        Ok(Search::Absent) => Outcome::Fail("no finitely separating witness".into()),
        Ok(Search::Unknown { explored }) => Outcome::Unknown(format!("explored {explored}")),
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

// ---- constructions ----

fn directed_closed_agrees(_: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    for a in s.carrier().subsets() {
        let by_limits = directed_closed_violation(s, a).is_none();
        if by_limits != s.is_closed(a) {
            return Outcome::Fail(format!("{}: limits say {by_limits}", s.format_set(a)));
        }
    }
    Outcome::Pass
}

fn closed_subspaces(_ctx: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    let w = match sub.witness() {
        Ok(w) => w,
        Err(o) => return o,
    };
    for &u in s.opens() {
        let a = u.complement(s.len());
        if a.is_empty() {
            continue;
        }
        if let Err(e) = closed_subspace_qfs(s, a, w) {
            return Outcome::Fail(format!("A = {}: {e}", s.format_set(a)));
        }
    }
    Outcome::Pass
}

fn projection_images(_ctx: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    let w = match sub.witness() {
        Ok(w) => w,
        Err(o) => return o,
    };
    let maps = match continuous_maps(s, s) {
        Ok(m) => m,
        Err(e) => return Outcome::Unknown(e.to_string()),
    };
    for f in maps.iter().filter(|f| is_projection(s, f)) {
        if let Err(e) = projection_image_qfs(s, f, w) {
            return Outcome::Fail(format!("projection {:?}: {e}", f.table()));
        }
    }
    Outcome::Pass
}

fn retracts(ctx: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    let w = match sub.witness() {
        Ok(w) => w,
        Err(o) => return o,
    };
    for y in ctx.factors.iter().filter(|y| y.len() <= s.len()) {
        let pairs = match find_retractions(s, y) {
            Ok(p) => p,
            Err(e) => return Outcome::Unknown(e.to_string()),
        };
        for pair in &pairs {
            if let Err(e) = retract_transport_qfs(s, y, pair, w) {
                return Outcome::Fail(format!(
                    "f = {:?}, g = {:?}: {e}",
                    pair.f.table(),
                    pair.g.table()
                ));
            }
        }
    }
    Outcome::Pass
}

fn point_upset_retracts(_ctx: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    let w = match sub.witness() {
        Ok(w) => w,
        Err(o) => return o,
    };
    let a = match Approximation::new(s) {
        Ok(a) => a,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    for b in 0..s.len() {
        let up = a.uparrow_d(PointSet::singleton(b)).expect("nonempty");
        for p in 0..s.len() {
            if !up.iter().all(|x| s.le(p, x)) {
                continue;
            }
            if let Err(e) = point_plus_upset_retract(s, p, b, w) {
                return Outcome::Fail(format!("a = {}, b = {}: {e}", s.label(p), s.label(b)));
            }
        }
    }
    Outcome::Pass
}

fn core_compact(_: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    match is_core_compact(s) {
        Ok(ok) => verdict(ok, || "not core-compact".into()),
        Err(e) => Outcome::Unknown(e.to_string()),
    }
}

fn tensor_products(ctx: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    if s.len() > ctx.settings.factor_max {
        return Outcome::Skip;
    }
    let w = match sub.witness() {
        Ok(w) => w,
        Err(o) => return o,
    };
    for y in &ctx.factors {
        let wy = match search_witness(y, ctx.settings.budget) {
            Ok(w) => w,
            Err(o) => return o,
        };
        let tensor = match tensor_product(s, y) {
            Ok(t) => t,
            Err(e) => return Outcome::Fail(e.to_string()),
        };
        let mut product = product_topology(s, y);
        product.sort();
        if tensor.space().opens() != product.as_slice() {
            return Outcome::Fail(format!(
                "tensor and product topologies differ with factor {:?}",
                y.labels()
            ));
        }
        if let Err(e) = product_qfs(s, y, w, &wy) {
            return Outcome::Fail(format!("factor {:?}: {e}", y.labels()));
        }
    }
    Outcome::Pass
}

// ---- powerspace ----

fn build_power(ctx: &Context, s: &FiniteSpace, reading: Reading) -> Result<PowerSpace, Outcome> {
    if s.len() > ctx.settings.power_max {
        return Err(Outcome::Skip);
    }
    PowerSpace::build(s, reading).map_err(|e| Outcome::Fail(e.to_string()))
}

fn vietoris(ctx: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    let p = match build_power(ctx, s, Reading::SomeLimit) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let opens = p.space().opens();
    let mut upper = p.upper_vietoris();
    upper.sort();
    if opens != upper.as_slice() {
        return Outcome::Fail(format!(
            "{} convergence opens, {} upper Vietoris opens",
            opens.len(),
            upper.len()
        ));
    }
    match p.convergence_opens_exhaustive() {
        Ok(mut all) => {
            all.sort();
            if opens != all.as_slice() {
                return Outcome::Fail("exhaustive family universe gives other opens".into());
            }
        }
        Err(e) => return Outcome::Unknown(e.to_string()),
    }
    let q = p.elements();
    let order_matches =
        (0..q.len()).all(|a| (0..q.len()).all(|b| p.space().le(a, b) == q.le_q(a, b)));
    verdict(order_matches && p.space().is_directed_space(), || {
        "specialization order is not the reverse-inclusion order".into()
    })
}

fn way_below_lifts(ctx: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    let p = match build_power(ctx, s, Reading::SomeLimit) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let a = match Approximation::new(s) {
        Ok(a) => a,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    let q = p.elements();
    for g in 0..q.len() {
        for h in 0..q.len() {
            let lifted = p.way_below_q(g, h);
            let full = p.way_below_q_exhaustive(g, h);
            let base = a.way_below_set(q.generator(g), q.generator(h));
            if !(matches!((&lifted, &full, &base), (Ok(x), Ok(y), Ok(z)) if x == y && y == z)) {
                return Outcome::Fail(format!(
                    "{} vs {}: powerspace {lifted:?}, exhaustive {full:?}, base {base:?}",
                    s.format_set(q.generator(g)),
                    s.format_set(q.generator(h))
                ));
            }
        }
    }
    Outcome::Pass
}

fn semilattice(ctx: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    let p = match build_power(ctx, s, Reading::SomeLimit) {
        Ok(p) => p,
        Err(o) => return o,
    };
    match p.semilattice_report() {
        Ok(r) => verdict(r.passed(), || format!("{r:?}")),
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

fn continuous_base_convergence(ctx: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    let p = match build_power(ctx, s, Reading::SomeLimit) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let families = match p.elements().directed_families() {
        Ok(f) => f,
        Err(e) => return Outcome::Unknown(e.to_string()),
    };
    for &fam in &families {
        for target in 0..p.len() {
            let q = p.q_converges(fam, target);
            let absorbed = p.absorbed_by_directed_opens(fam, target);
            if !matches!(q, Ok(v) if v == absorbed) {
                return Outcome::Fail(format!(
                    "family {fam:?} to {}: convergence {q:?}, absorbed {absorbed}",
                    s.format_set(p.elements().generator(target))
                ));
            }
        }
    }
    Outcome::Pass
}

fn powerspace_fs_lift(ctx: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    let p = match build_power(ctx, s, Reading::SomeLimit) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let w = match sub.witness() {
        Ok(w) => w,
        Err(o) => return o,
    };
    let maps = match p.fs_witness(w) {
        Ok(m) => m,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    match check_fs_family(p.space(), &maps) {
        Ok(r) => verdict(r.passed(), || format!("{r:?}")),
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

fn readings(ctx: &Context, sub: &Subject) -> Outcome {
    let s = sub.space;
    let some = match build_power(ctx, s, Reading::SomeLimit) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let every = match build_power(ctx, s, Reading::EveryLimit) {
        Ok(p) => p,
        Err(o) => return o,
    };
    if some.space().opens() == every.space().opens() {
        Outcome::Pass
    } else {
        Outcome::Note(format!(
            "the two readings differ: {} against {} opens",
            some.space().opens().len(),
            every.space().opens().len()
        ))
    }
}

// ---- running and reporting ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub check: String,
    pub instance_name: String,
    pub detail: String,
    pub instance: Instance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub instance_name: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub check: String,
    pub checked: usize,
    pub passed: usize,
    pub failed: usize,
    pub unknown: usize,
    pub skipped: usize,
    pub notes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<Failure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_unknown: Option<Observation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_note: Option<Observation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub description: String,
    pub instances: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: String,
    pub corpus: CorpusSummary,
    pub settings: Settings,
    pub checks: Vec<CheckSummary>,
}

impl SuiteReport {
    pub fn failed(&self) -> usize {
        self.checks.iter().map(|c| c.failed).sum()
    }

    pub fn unknown(&self) -> usize {
        self.checks.iter().map(|c| c.unknown).sum()
    }

    pub fn check(&self, id: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.check == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn render_text(&self) -> String {
        let width = self
            .checks
            .iter()
            .map(|c| c.check.len())
            .max()
            .unwrap_or(5)
            .max(5);
        let mut out = format!(
            "suite {} over {} ({} instances)\n{:width$}  checked  pass  fail  unknown  skip\n",
            self.suite, self.corpus.description, self.corpus.instances, "check"
        );
        for c in &self.checks {
            out += &format!(
                "{:width$}  {:>7}  {:>4}  {:>4}  {:>7}  {:>4}\n",
                c.check, c.checked, c.passed, c.failed, c.unknown, c.skipped
            );
            if let Some(f) = &c.first_failure {
                out += &format!("  first failure on {}: {}\n", f.instance_name, f.detail);
            }
            if let Some(n) = &c.first_note {
                out += &format!("  note on {}: {}\n", n.instance_name, n.detail);
            }
        }
        out += &format!("{} failed, {} unknown\n", self.failed(), self.unknown());
        out
    }
}

/// Runs every check of `suite` on every instance with at most `jobs` workers.
/// The report depends only on the corpus, the suite and the settings.
pub fn run_suite(
    corpus: &Corpus,
    description: &str,
    suite: &str,
    settings: Settings,
    jobs: usize,
) -> Result<SuiteReport, SuiteError> {
    let checks = checks_for(suite)?;
    let ctx = Context::new(settings)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()?;
    let budget = ctx.settings.budget;
    let rows: Vec<Vec<Outcome>> = pool.install(|| {
        corpus
            .entries
            .par_iter()
            .map(|e| {
                let sub = Subject::new(&e.space, budget);
                checks.iter().map(|c| (c.run)(&ctx, &sub)).collect()
            })
            .collect()
    });
    let mut summaries: Vec<CheckSummary> = checks
        .iter()
        .map(|c| CheckSummary {
            check: c.id(),
            ..CheckSummary::default()
        })
        .collect();
    for (entry, row) in corpus.entries.iter().zip(rows) {
        for (sum, outcome) in summaries.iter_mut().zip(row) {
            let observe = |detail: String| Observation {
                instance_name: entry.name(),
                detail,
            };
            match outcome {
                Outcome::Skip => sum.skipped += 1,
                Outcome::Pass => sum.passed += 1,
                Outcome::Note(detail) => {
                    sum.passed += 1;
                    sum.notes += 1;
                    sum.first_note.get_or_insert_with(|| observe(detail));
                }
                Outcome::Unknown(detail) => {
                    sum.unknown += 1;
                    sum.first_unknown.get_or_insert_with(|| observe(detail));
                }
                Outcome::Fail(detail) => {
                    sum.failed += 1;
                    sum.first_failure.get_or_insert_with(|| Failure {
                        check: sum.check.clone(),
                        instance_name: entry.name(),
                        detail,
                        instance: Instance::from_space(&entry.name(), &entry.space),
                    });
                }
            }
        }
    }
    for s in &mut summaries {
        s.checked = s.passed + s.failed + s.unknown;
    }
    Ok(SuiteReport {
        schema: SCHEMA_VERSION,
        suite: suite.to_string(),
        corpus: CorpusSummary {
            description: description.to_string(),
            instances: corpus.len(),
        },
        settings: ctx.settings,
        checks: summaries,
    })
}

/// Re-runs the check named in `failure` on its embedded instance.
pub fn replay(failure: &Failure, settings: Settings, cap: usize) -> anyhow::Result<Outcome> {
    let check = check_by_id(&failure.check)?;
    let space = failure.instance.space(cap)?;
    let ctx = Context::new(settings)?;
    let sub = Subject::new(&space, ctx.settings.budget);
    Ok((check.run)(&ctx, &sub))
}

#[cfg(test)]
mod tests {
    use super::*;
    use qfs_core::catalogue;

    fn ctx() -> Context {
        Context::new(Settings::default()).unwrap()
    }

    #[test]
    fn every_check_passes_on_sierpinski() {
        let s = catalogue::sierpinski();
        let ctx = ctx();
        let sub = Subject::new(&s, ctx.settings.budget);
        for c in CHECKS {
            let o = (c.run)(&ctx, &sub);
            assert!(
                matches!(o, Outcome::Pass | Outcome::Note(_)),
                "{}: {o:?}",
                c.id()
            );
        }
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(
            checks_for("nope"),
            Err(SuiteError::UnknownSuite(_))
        ));
        assert_eq!(checks_for("all").unwrap().len(), CHECKS.len());
        assert!(check_by_id("qfs/witness-search").is_ok());
    }

    #[test]
    fn report_counts_add_up() {
        let corpus = Corpus::exhaustive(2, 7).unwrap();
        let r = run_suite(&corpus, "n <= 2", "prelims", Settings::default(), 2).unwrap();
        assert_eq!(r.failed(), 0);
        for c in &r.checks {
            assert_eq!(c.checked + c.skipped, corpus.len());
        }
    }
}
