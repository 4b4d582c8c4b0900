//! Subspaces, projection images, retracts and tensor products, each carrying a
//! quasi-approximate identity across from the spaces it is built from.
//!
//! Every transported family is re-checked on the new space before it is
//! returned; a family that fails is reported as [`Error::WitnessRejected`].

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::approx::Approximation;
use crate::error::{Error, Result};
use crate::maps::{is_projection, validate_retract, PointMap, RetractPair};
use crate::order::DIRECTED_LIMIT;
use crate::qfs::{check_quasi_approximate_identity, MapFamily, SetValuedMap};
use crate::set::{minimal_sets, PointSet};
use crate::space::{generate_topology, FiniteSpace};

/// Largest `|X|·|Y|` for which the tensor topology is computed by filtering the powerset.
pub const TENSOR_LIMIT: usize = 16;

/// A subset of a parent space with the relative topology, re-indexed from 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceView {
    points: PointSet,
    embed: Vec<usize>,
    space: FiniteSpace,
}

impl SubspaceView {
    pub fn new(parent: &FiniteSpace, points: PointSet) -> Result<Self> {
        parent.check_set(points)?;
        if points.is_empty() {
            return Err(Error::EmptyArgument("subspace"));
        }
        let embed: Vec<usize> = points.iter().collect();
        let restrict = |s: PointSet| -> PointSet {
            embed
                .iter()
                .enumerate()
                .filter(|(_, &p)| s.contains(p))
                .map(|(i, _)| i)
                .collect()
        };
        let opens: Vec<PointSet> = parent.opens().iter().map(|&u| restrict(u)).collect();
        let labels = embed
            .iter()
            .map(|&p| String::from(parent.label(p)))
            .collect();
        let space = FiniteSpace::from_opens(labels, opens)?;
        Ok(SubspaceView {
            points,
            embed,
            space,
        })
    }

    /// The points of the parent, as a parent set.
    pub fn points(&self) -> PointSet {
        self.points
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn into_space(self) -> FiniteSpace {
        self.space
    }

    /// Parent index of subspace point `i`.
    pub fn embed(&self, i: usize) -> usize {
        self.embed[i]
    }

    /// Subspace index of parent point `p`.
    pub fn index_of(&self, p: usize) -> Option<usize> {
        self.embed.iter().position(|&q| q == p)
    }

    /// The part of a parent set inside the subspace, in subspace indices.
    pub fn restrict(&self, set: PointSet) -> PointSet {
        self.embed
            .iter()
            .enumerate()
            .filter(|(_, &p)| set.contains(p))
            .map(|(i, _)| i)
            .collect()
    }

    /// A subspace set in parent indices.
    pub fn lift(&self, set: PointSet) -> PointSet {
        set.map(|i| self.embed[i])
    }

    /// The inclusion into the parent.
    pub fn inclusion(&self, parent_len: usize) -> PointMap {
        PointMap::new(self.embed.clone(), parent_len).expect("embedding stays in range")
    }
}

/// A point showing `set` is not directed-closed: either it lies below a member
/// without being one, or it is a limit of a directed subset of `set` outside it.
pub fn directed_closed_violation(space: &FiniteSpace, set: PointSet) -> Option<usize> {
    if let Some(x) = (space.down_closure(set) - set).first() {
        return Some(x);
    }
    space
        .convergence_table()
        .filter(|(d, _)| d.is_subset(set))
        .find_map(|(_, lim)| (lim - set).first())
}

/// Requires `set` closed; the topological and the directed-limit tests must agree.
pub fn require_closed(space: &FiniteSpace, set: PointSet) -> Result<()> {
    space.check_set(set)?;
    let violation = directed_closed_violation(space, set);
    let closed = space.is_closed(set);
    if closed != violation.is_none() {
        return Err(Error::Precondition(format!(
            "closedness of {set:?} differs between the opens and directed limits"
        )));
    }
    match violation {
        None => Ok(()),
        Some(x) => Err(Error::NotClosed(set, x)),
    }
}

fn resolved(space: &FiniteSpace, family: &MapFamily) -> Result<MapFamily> {
    family
        .resolve(space)
        .map_err(|(i, v)| Error::WitnessRejected(format!("member {i} fails on the source: {v:?}")))
}

fn verified(space: &FiniteSpace, family: MapFamily) -> Result<MapFamily> {
    let report = check_quasi_approximate_identity(space, &family);
    if report.passed() {
        Ok(family)
    } else {
        Err(Error::WitnessRejected(format!("{report:?}")))
    }
}

/// `δ_A(x) = δ(x) ∩ A`, `F_{δ_A} = A ∩ F_δ`, on a closed subspace.
pub fn closed_subspace_qfs(
    space: &FiniteSpace,
    set: PointSet,
    family: &MapFamily,
) -> Result<(SubspaceView, MapFamily)> {
    require_closed(space, set)?;
    let view = SubspaceView::new(space, set)?;
    let family = resolved(space, family)?;
    let mut members = Vec::with_capacity(family.len());
    for d in &family.members {
        let table: Vec<PointSet> = view
            .embed
            .iter()
            .map(|&p| view.restrict(d.value(p)))
            .collect();
        if let Some(i) = table.iter().position(|v| v.is_empty()) {
            return Err(Error::WitnessRejected(format!(
                "restricted value at {} is empty",
                view.embed(i)
            )));
        }
        let sep = view.restrict(d.separating_set().expect("resolved"));
        members.push(SetValuedMap::new(table, Some(sep))?);
    }
    let out = verified(view.space(), MapFamily::new(members))?;
    Ok((view, out))
}

/// `f ∘ δ` on the image of a quasicontinuous projection, with separating sets `f(F_δ)`.
pub fn projection_image_qfs(
    space: &FiniteSpace,
    f: &PointMap,
    family: &MapFamily,
) -> Result<(SubspaceView, MapFamily)> {
    if f.source_len() != space.len() || f.target_len() != space.len() {
        return Err(Error::MapArity {
            got: f.source_len(),
            expected: space.len(),
        });
    }
    if !is_projection(space, f) {
        return Err(Error::Precondition(
            "not a quasicontinuous projection".into(),
        ));
    }
    let view = SubspaceView::new(space, f.image(space.carrier()))?;
    view.space().require_directed_space()?;
    let family = resolved(space, family)?;
    let members = family
        .members
        .iter()
        .map(|d| {
            let table = view
                .embed
                .iter()
                .map(|&p| view.restrict(f.image(d.value(p))))
                .collect();
            let sep = view.restrict(f.image(d.separating_set().expect("resolved")));
            SetValuedMap::new(table, Some(sep))
        })
        .collect::<Result<Vec<_>>>()?;
    let out = verified(view.space(), MapFamily::new(members))?;
    Ok((view, out))
}

/// `ε(y) = f(δ(g(y)))`, `F_ε = f(F_δ)`, on a retract `Y` of `X`.
pub fn retract_transport_qfs(
    x: &FiniteSpace,
    y: &FiniteSpace,
    pair: &RetractPair,
    family: &MapFamily,
) -> Result<MapFamily> {
    validate_retract(x, y, pair)?;
    let family = resolved(x, family)?;
    let members = family
        .members
        .iter()
        .map(|d| {
            let table = (0..y.len())
                .map(|p| pair.f.image(d.value(pair.g.apply(p))))
                .collect();
            SetValuedMap::new(
                table,
                Some(pair.f.image(d.separating_set().expect("resolved"))),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    verified(y, MapFamily::new(members))
}

/// `{a} ∪ ⇑_d b` as a retract, with the transported family.
#[derive(Clone, Debug)]
pub struct PointUpsetRetract {
    pub view: SubspaceView,
    pub pair: RetractPair,
    pub family: MapFamily,
}

/// Builds `A = {a} ∪ ⇑_d b` with `g` the inclusion and `f` fixing `A` and
/// sending everything else to `a`. Needs `a` below every point of `⇑_d b`.
pub fn point_plus_upset_retract(
    space: &FiniteSpace,
    a: usize,
    b: usize,
    family: &MapFamily,
) -> Result<PointUpsetRetract> {
    space.check_point(a)?;
    space.check_point(b)?;
    let approx = Approximation::new(space)?;
    let up = approx.uparrow_d(PointSet::singleton(b))?;
    if let Some(x) = up.iter().find(|&x| !space.le(a, x)) {
        return Err(Error::Precondition(format!(
            "{} is not below {} in the upper set of {}",
            space.label(a),
            space.label(x),
            space.label(b)
        )));
    }
    let view = SubspaceView::new(space, up.with(a))?;
    view.space().require_directed_space()?;
    let g = view.inclusion(space.len());
    let home = view.index_of(a).expect("a is in A");
    let f_table = (0..space.len())
        .map(|x| view.index_of(x).unwrap_or(home))
        .collect();
    let pair = RetractPair {
        f: PointMap::new(f_table, view.space().len())?,
        g,
    };
    let family = retract_transport_qfs(space, view.space(), &pair, family)?;
    Ok(PointUpsetRetract { view, pair, family })
}

/// `X ⊗ Y`: the pair `(i, j)` has index `i·|Y| + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSpace {
    x_len: usize,
    y_len: usize,
    space: FiniteSpace,
}

impl ProductSpace {
    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.y_len + j
    }

    pub fn coordinates(&self, p: usize) -> (usize, usize) {
        (p / self.y_len, p % self.y_len)
    }

    pub fn factor_lens(&self) -> (usize, usize) {
        (self.x_len, self.y_len)
    }

    /// `A × B`.
    pub fn rectangle(&self, a: PointSet, b: PointSet) -> PointSet {
        let mut out = PointSet::EMPTY;
        for i in a.iter() {
            for j in b.iter() {
                out.insert(self.index(i, j));
            }
        }
        out
    }

    pub fn first(&self, set: PointSet) -> PointSet {
        set.map(|p| p / self.y_len)
    }

    pub fn second(&self, set: PointSet) -> PointSet {
        set.map(|p| p % self.y_len)
    }
}

/// For each directed `D ⊆ X × Y` (pointwise order), the pairs `(x, y)` with
/// `π₁D → x` and `π₂D → y`.
pub fn product_convergence(x: &FiniteSpace, y: &FiniteSpace) -> Result<Vec<(PointSet, PointSet)>> {
    let m = y.len();
    let order = x.specialization_order().product(y.specialization_order())?;
    let directed = order.directed_subsets()?;
    let mut out = Vec::with_capacity(directed.len());
    for d in directed {
        let lx = x.limits(d.map(|p| p / m))?;
        let ly = y.limits(d.map(|p| p % m))?;
        let mut lim = PointSet::EMPTY;
        for i in lx.iter() {
            for j in ly.iter() {
                lim.insert(i * m + j);
            }
        }
        out.push((d, lim));
    }
    Ok(out)
}

/// The tensor topology, computed from product convergence over the whole powerset.
pub fn tensor_product(x: &FiniteSpace, y: &FiniteSpace) -> Result<ProductSpace> {
    x.require_directed_space()?;
    y.require_directed_space()?;
    let (n, m) = (x.len(), y.len());
    if n * m > TENSOR_LIMIT {
        return Err(Error::TooLarge {
            what: "tensor product carrier",
            size: (n * m) as u128,
            limit: TENSOR_LIMIT as u128,
        });
    }
    let conv = product_convergence(x, y)?;
    // only the inclusion-minimal converging D per point constrain openness
    let mut constraints = Vec::new();
    for p in 0..n * m {
        let ds: Vec<PointSet> = conv
            .iter()
            .filter(|(_, lim)| lim.contains(p))
            .map(|&(d, _)| d)
            .collect();
        constraints.extend(minimal_sets(&ds).into_iter().map(|d| (p, d)));
    }
    let opens: Vec<PointSet> = PointSet::full(n * m)
        .subsets()
        .filter(|&u| {
            constraints
                .iter()
                .all(|&(p, d)| !u.contains(p) || d.intersects(u))
        })
        .collect();
    let mut labels = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            labels.push(format!("({},{})", x.label(i), y.label(j)));
        }
    }
    Ok(ProductSpace {
        x_len: n,
        y_len: m,
        space: FiniteSpace::from_opens(labels, opens)?,
    })
}

/// The product topology, generated by open rectangles.
pub fn product_topology(x: &FiniteSpace, y: &FiniteSpace) -> Vec<PointSet> {
    let m = y.len();
    let mut boxes = Vec::new();
    for &u in x.opens() {
        for &v in y.opens() {
            let mut b = PointSet::EMPTY;
            for i in u.iter() {
                for j in v.iter() {
                    b.insert(i * m + j);
                }
            }
            boxes.push(b);
        }
    }
    generate_topology(x.len() * m, &boxes)
}

/// Every open `U` and `x ∈ U` admit an open `V ∋ x` way below `U` in the lattice
/// of opens, where way-below quantifies over all directed families of opens.
pub fn is_core_compact(space: &FiniteSpace) -> Result<bool> {
    let opens = space.opens();
    let k = opens.len();
    let lattice = crate::order::SpecOrder::from_up_sets(
        opens
            .iter()
            .map(|&a| {
                opens
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| a.is_subset(**b))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect(),
    )?;
    let families = lattice.directed_subsets().map_err(|_| Error::TooLarge {
        what: "directed families of opens",
        size: DIRECTED_LIMIT as u128 + 1,
        limit: DIRECTED_LIMIT as u128,
    })?;
    // below[u]: opens V with V ≪ U
    let mut below: Vec<PointSet> = (0..k).map(|u| lattice.down(u)).collect();
    for fam in families {
        let union = fam.iter().fold(PointSet::EMPTY, |acc, w| acc | opens[w]);
        let reached = lattice.down_closure(fam);
        for (u, b) in below.iter_mut().enumerate() {
            if opens[u].is_subset(union) {
                *b &= reached;
            }
        }
    }
    Ok((0..k).all(|u| {
        opens[u]
            .iter()
            .all(|x| below[u].iter().any(|v| opens[v].contains(x)))
    }))
}

/// `(δ, ε)(x, y) = δ(x) × ε(y)` over all pairs of members, on `X ⊗ Y`.
pub fn product_qfs(
    x: &FiniteSpace,
    y: &FiniteSpace,
    dx: &MapFamily,
    dy: &MapFamily,
) -> Result<(ProductSpace, MapFamily)> {
    if !is_core_compact(x)? {
        return Err(Error::Precondition(
            "first factor is not core-compact".into(),
        ));
    }
    let product = tensor_product(x, y)?;
    let dx = resolved(x, dx)?;
    let dy = resolved(y, dy)?;
    let mut members = Vec::with_capacity(dx.len() * dy.len());
    for d in &dx.members {
        for e in &dy.members {
            let mut table = Vec::with_capacity(x.len() * y.len());
            for i in 0..x.len() {
                for j in 0..y.len() {
                    table.push(product.rectangle(d.value(i), e.value(j)));
                }
            }
            let sep = product.rectangle(
                d.separating_set().expect("resolved"),
                e.separating_set().expect("resolved"),
            );
            members.push(SetValuedMap::new(table, Some(sep))?);
        }
    }
    let out = verified(product.space(), MapFamily::new(members))?;
    Ok((product, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue;
    use crate::maps::find_retractions;

    fn ps(items: &[usize]) -> PointSet {
        items.iter().copied().collect()
    }

    #[test]
    fn whole_space_is_its_own_closed_subspace() {
        let c = catalogue::chain(3);
        let id = MapFamily::identity(3);
        let (view, fam) = closed_subspace_qfs(&c, c.carrier(), &id).unwrap();
        assert_eq!(view.space(), &c);
        assert_eq!(fam.members[0].table(), id.members[0].table());
    }

    #[test]
    fn lower_segment_of_chain() {
        let c = catalogue::chain(3);
        let (view, fam) = closed_subspace_qfs(&c, ps(&[0, 1]), &MapFamily::identity(3)).unwrap();
        assert_eq!(view.space().len(), 2);
        assert_eq!(fam.members[0].table(), &[ps(&[0]), ps(&[1])]);
    }

    #[test]
    fn open_set_is_not_closed() {
        let c = catalogue::chain(3);
        let err = closed_subspace_qfs(&c, ps(&[2]), &MapFamily::identity(3)).unwrap_err();
        assert!(matches!(err, Error::NotClosed(_, 0 | 1)));
    }

    #[test]
    fn chain_collapse_projection() {
        let c = catalogue::chain(3);
        let f = PointMap::new(alloc::vec![0, 0, 2], 3).unwrap();
        let (view, fam) = projection_image_qfs(&c, &f, &MapFamily::identity(3)).unwrap();
        assert_eq!(view.points(), ps(&[0, 2]));
        assert!(check_quasi_approximate_identity(view.space(), &fam).passed());
        let swap = PointMap::new(alloc::vec![2, 1, 0], 3).unwrap();
        assert!(projection_image_qfs(&c, &swap, &MapFamily::identity(3)).is_err());
    }

    #[test]
    fn retract_transport_to_sierpinski() {
        let c = catalogue::chain(3);
        let s = catalogue::sierpinski();
        for pair in find_retractions(&c, &s).unwrap() {
            let fam = retract_transport_qfs(&c, &s, &pair, &MapFamily::identity(3)).unwrap();
            assert!(check_quasi_approximate_identity(&s, &fam).passed());
        }
    }

    #[test]
    fn point_plus_upset_on_chain() {
        let c = catalogue::chain(3);
        let r = point_plus_upset_retract(&c, 0, 2, &MapFamily::identity(3)).unwrap();
        assert_eq!(r.view.points(), ps(&[0, 2]));
        let bad = point_plus_upset_retract(&c, 2, 0, &MapFamily::identity(3));
        assert!(matches!(bad, Err(Error::Precondition(_))));
    }

    #[test]
    fn sierpinski_square() {
        let s = catalogue::sierpinski();
        let p = tensor_product(&s, &s).unwrap();
        let order = s
            .specialization_order()
            .product(s.specialization_order())
            .unwrap();
        assert_eq!(p.space().specialization_order(), &order);
        assert_eq!(p.space().opens(), order.upper_sets().unwrap().as_slice());
        assert_eq!(p.space().opens(), product_topology(&s, &s).as_slice());
    }

    #[test]
    fn one_point_factor() {
        let v = catalogue::vee();
        let p = tensor_product(&catalogue::one_point(), &v).unwrap();
        assert_eq!(p.space().opens(), v.opens());
    }

    #[test]
    fn finite_spaces_are_core_compact() {
        for s in [
            catalogue::sierpinski(),
            catalogue::vee(),
            catalogue::antichain(3),
        ] {
            assert!(is_core_compact(&s).unwrap());
        }
    }

    #[test]
    fn product_of_identities() {
        let s = catalogue::sierpinski();
        let c = catalogue::chain(3);
        let (p, fam) =
            product_qfs(&s, &c, &MapFamily::identity(2), &MapFamily::identity(3)).unwrap();
        assert_eq!(p.space().len(), 6);
        assert_eq!(fam.len(), 1);
    }
}
