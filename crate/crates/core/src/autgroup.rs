//! Automorphisms of rotation-system embeddings.
//!
//! A vertex bijection `σ` is orientation preserving when
//! `σ(ρ_x(y)) = ρ_{σx}(σy)` for every directed edge `(x, y)`, and orientation
//! reversing when `σ(ρ_x(y)) = ρ_{σx}^{-1}(σy)` for every directed edge.
//!
//! Two searches are provided. [`restricted_search`] only tries the `2(q-1)`
//! dihedral candidates built from the cycle of `ρ₀`, which is complete for
//! Archdeacon-type embeddings. [`exhaustive_search`] makes no such
//! assumption: it propagates every possible image of one directed edge
//! around the rotation at 0 and checks the result, so it serves as an
//! independent oracle for small `q`.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::Element;
use crate::embedding::{Embedding, Face};
use crate::heffter::PartiallyFilledArray;
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("permutation of length {len} is not a bijection of the {q} vertices")]
    NotBijection { len: usize, q: u32 },
    #[error("exhaustive search refused for q = {q} (limit {limit}); pass --force to override")]
    TooLarge { q: u32, limit: u32 },
    #[error("multiplication by {0} is not an orientation preserving automorphism")]
    VerificationFailed(Element),
    #[error("the permutations are not closed under composition")]
    NotClosed,
    #[error("work budget exhausted")]
    BudgetExceeded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Preserving,
    Reversing,
}

/// Position of a stabiliser element inside the dihedral group acting on the
/// cycle `(x_1, …, x_N)` of `ρ₀`, with `x_1 = 1` and indices mod `N`:
/// a rotation sends `x_j ↦ x_{j+shift}`, a reflection sends
/// `x_j ↦ x_{shift−j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DihedralIndex {
    pub reflection: bool,
    pub shift: usize,
}

/// An embedding automorphism with its orientation class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EmbAut {
    pub perm: Permutation,
    pub orientation: Orientation,
    pub dihedral: Option<DihedralIndex>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    Restricted,
    Exhaustive,
}

/// Limits applied to the searches.
#[derive(Debug, Clone, Copy)]
pub struct SearchBudget {
    /// Exhaustive search is refused above this field order.
    pub exhaustive_max_q: u32,
    pub deadline: Option<Instant>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { exhaustive_max_q: 71, deadline: None }
    }
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget { exhaustive_max_q: u32::MAX, deadline: None }
    }

    fn check(&self) -> Result<(), AutError> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(AutError::BudgetExceeded),
            _ => Ok(()),
        }
    }
}

/// Group order and, when cyclic, a generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupCertificate {
    pub order: usize,
    pub cyclic: bool,
    pub generator: Option<Permutation>,
    /// element order -> number of elements with that order
    pub order_profile: BTreeMap<u64, usize>,
}

impl GroupCertificate {
    /// Re-checks the certificate: the powers of the generator are exactly
    /// `perms`.
    pub fn verify(&self, perms: &[Permutation]) -> bool {
        let Some(g) = &self.generator else {
            return !self.cyclic;
        };
        let set: HashSet<&Permutation> = perms.iter().collect();
        let mut powers = HashSet::new();
        let mut x = Permutation::identity(g.len());
        loop {
            if !set.contains(&x) {
                return false;
            }
            powers.insert(x.clone());
            x = g.compose(&x);
            if x.is_identity() {
                break;
            }
        }
        powers.len() == set.len() && powers.len() == self.order
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AutReport {
    pub q: u32,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub aut0_plus: usize,
    pub aut0_minus: usize,
    pub total: u64,
    /// Whether the orientation preserving stabiliser of 0 is cyclic.
    pub cyclic: bool,
    /// Generator of the orientation preserving stabiliser, cycle notation.
    pub generator: Option<String>,
    pub generator_order: u64,
    pub method: SearchMethod,
    #[serde(skip)]
    pub stabilizer: Vec<EmbAut>,
}

impl AutReport {
    pub fn aut0(&self) -> usize {
        self.aut0_plus + self.aut0_minus
    }

    /// Same group data, ignoring the method tag.
    pub fn same_group(&self, other: &AutReport) -> bool {
        self.q == other.q
            && self.aut0_plus == other.aut0_plus
            && self.aut0_minus == other.aut0_minus
            && self.total == other.total
            && self.cyclic == other.cyclic
            && self.generator == other.generator
            && self.generator_order == other.generator_order
    }

    pub fn with_params(mut self, m: usize, n: usize) -> Self {
        self.m = Some(m);
        self.n = Some(n);
        self
    }

    /// The full group as (translation, stabiliser element) pairs:
    /// `x ↦ σ(x) + g`.
    pub fn elements(&self, emb: &Embedding) -> impl Iterator<Item = (Element, &EmbAut)> + '_ {
        let units: Vec<Element> = emb.field().elements().collect();
        units.into_iter().flat_map(move |g| self.stabilizer.iter().map(move |s| (g, s)))
    }
}

/// Expands `τ_g ∘ σ` into an explicit vertex permutation.
pub fn expand(emb: &Embedding, g: Element, sigma: &Permutation) -> Permutation {
    let f = emb.field();
    let images = (0..emb.q()).map(|x| f.add(Element(sigma.apply(x)), g).value()).collect();
    Permutation::from_images(images).expect("translate of a bijection")
}

/// Whether `perm` carries the rotation of `a` to the rotation of `b`
/// (or to its inverse when `reversing`) on every directed edge.
fn satisfies_law(a: &Embedding, b: &Embedding, perm: &Permutation, reversing: bool) -> bool {
    let f = a.field();
    let q = a.q();
    for x in 0..q {
        let x = Element(x);
        let sx = Element(perm.apply(x.value()));
        for d in 1..q {
            let y = f.add(x, Element(d));
            let lhs = perm.apply(a.rotate(x, y).value());
            let sy = Element(perm.apply(y.value()));
            let rhs = if reversing { b.rotate_inv(sx, sy) } else { b.rotate(sx, sy) };
            if lhs != rhs.value() {
                return false;
            }
        }
    }
    true
}

/// Classifies `perm` as an isomorphism from `a` to `b`. The preserving law is
/// tried first; a map that satisfies neither law on every edge is not an
/// isomorphism.
pub fn classify_isomorphism(a: &Embedding, b: &Embedding, perm: &Permutation) -> Result<Option<Orientation>, AutError> {
    if perm.len() != a.q() as usize || a.q() != b.q() {
        return Err(AutError::NotBijection { len: perm.len(), q: a.q() });
    }
    if satisfies_law(a, b, perm, false) {
        Ok(Some(Orientation::Preserving))
    } else if satisfies_law(a, b, perm, true) {
        Ok(Some(Orientation::Reversing))
    } else {
        Ok(None)
    }
}

pub fn classify_automorphism(emb: &Embedding, perm: &Permutation) -> Result<Option<Orientation>, AutError> {
    classify_isomorphism(emb, emb, perm)
}

/// Counts of directed edges satisfying the preserving law only, the
/// reversing law only, both, and neither. Used to confirm that no map obeys
/// one law on some edges and the other law elsewhere.
pub fn law_profile(emb: &Embedding, perm: &Permutation) -> [usize; 4] {
    let f = emb.field();
    let mut counts = [0; 4];
    for x in f.elements() {
        let sx = Element(perm.apply(x.value()));
        for d in f.units() {
            let y = f.add(x, d);
            let lhs = perm.apply(emb.rotate(x, y).value());
            let sy = Element(perm.apply(y.value()));
            let pres = emb.rotate(sx, sy).value() == lhs;
            let rev = emb.rotate_inv(sx, sy).value() == lhs;
            let slot = match (pres, rev) {
                (true, false) => 0,
                (false, true) => 1,
                (true, true) => 2,
                (false, false) => 3,
            };
            counts[slot] += 1;
        }
    }
    counts
}

/// Every translation `x ↦ x + g` is orientation preserving.
pub fn translations_are_automorphisms(emb: &Embedding) -> bool {
    emb.field().elements().collect::<Vec<_>>().par_iter().all(|&g| {
        let tau = expand(emb, g, &Permutation::identity(emb.q() as usize));
        classify_automorphism(emb, &tau) == Ok(Some(Orientation::Preserving))
    })
}

fn dihedral_candidate(cycle: &[Element], q: usize, index: DihedralIndex) -> Permutation {
    let n = cycle.len();
    let mut images: Vec<u32> = (0..q as u32).collect();
    for (i, x) in cycle.iter().enumerate() {
        // cycle[i] is x_{i+1}
        let target = if index.reflection {
            (index.shift as i64 - i as i64 - 2).rem_euclid(n as i64) as usize
        } else {
            (i + index.shift) % n
        };
        images[x.index()] = cycle[target].value();
    }
    Permutation::from_images(images).expect("dihedral action on a cycle")
}

/// Searches the stabiliser of 0 among the dihedral maps of the cycle of
/// `ρ₀` and extends it by the translations.
pub fn restricted_search(emb: &Embedding, m: usize, n: usize) -> Result<AutReport, AutError> {
    restricted_search_with_budget(emb, m, n, &SearchBudget::default())
}

pub fn restricted_search_with_budget(
    emb: &Embedding,
    m: usize,
    n: usize,
    budget: &SearchBudget,
) -> Result<AutReport, AutError> {
    let q = emb.q() as usize;
    let cycle = emb.rho0_cycle();
    let big_n = cycle.len();
    let candidates: Vec<DihedralIndex> = [false, true]
        .into_iter()
        .flat_map(|reflection| (1..=big_n).map(move |shift| DihedralIndex { reflection, shift }))
        .collect();
    let found: Vec<Option<EmbAut>> = candidates
        .par_iter()
        .map(|&index| {
            budget.check()?;
            let perm = dihedral_candidate(&cycle, q, index);
            Ok(classify_automorphism(emb, &perm)?.map(|orientation| EmbAut {
                perm,
                orientation,
                dihedral: Some(index),
            }))
        })
        .collect::<Result<_, AutError>>()?;
    let mut stabilizer: Vec<EmbAut> = Vec::new();
    let mut seen = HashSet::new();
    for aut in found.into_iter().flatten() {
        if seen.insert(aut.perm.clone()) {
            stabilizer.push(aut);
        }
    }
    let mut report = assemble(emb, stabilizer, stabilizer_total(q), SearchMethod::Restricted)?;
    report.m = Some(m);
    report.n = Some(n);
    Ok(report)
}

fn stabilizer_total(q: usize) -> impl Fn(usize) -> u64 {
    move |aut0| q as u64 * aut0 as u64
}

fn assemble(
    emb: &Embedding,
    stabilizer: Vec<EmbAut>,
    total: impl Fn(usize) -> u64,
    method: SearchMethod,
) -> Result<AutReport, AutError> {
    let plus: Vec<Permutation> = stabilizer
        .iter()
        .filter(|a| a.orientation == Orientation::Preserving)
        .map(|a| a.perm.clone())
        .collect();
    let aut0_plus = plus.len();
    let aut0_minus = stabilizer.len() - aut0_plus;
    let cert = group_structure(&plus)?;
    Ok(AutReport {
        q: emb.q(),
        m: None,
        n: None,
        aut0_plus,
        aut0_minus,
        total: total(stabilizer.len()),
        cyclic: cert.cyclic,
        generator: cert.generator.as_ref().map(ToString::to_string),
        generator_order: cert.generator.as_ref().map_or(0, Permutation::order),
        method,
        stabilizer,
    })
}

/// Finds every automorphism without assuming anything about its shape: an
/// automorphism is determined by the image `(u, w)` of the directed edge
/// `(0, 1)` and its orientation, since the rotation at 0 reaches every
/// other vertex.
pub fn exhaustive_search(emb: &Embedding) -> Result<AutReport, AutError> {
    exhaustive_search_with_budget(emb, &SearchBudget::default())
}

pub fn exhaustive_search_with_budget(emb: &Embedding, budget: &SearchBudget) -> Result<AutReport, AutError> {
    let q = emb.q();
    if q > budget.exhaustive_max_q {
        return Err(AutError::TooLarge { q, limit: budget.exhaustive_max_q });
    }
    let f = emb.field();
    // neighbours of 0 in rotation order, starting at 1
    let around_zero: Vec<Element> = {
        let mut v = vec![Element::ONE];
        let mut y = emb.rotate(Element::ZERO, Element::ONE);
        while y != Element::ONE && v.len() < q as usize {
            v.push(y);
            y = emb.rotate(Element::ZERO, y);
        }
        v
    };
    let candidates: Vec<(Element, Element, Orientation)> = f
        .elements()
        .flat_map(|u| {
            f.elements()
                .filter(move |&w| w != u)
                .flat_map(move |w| [(u, w, Orientation::Preserving), (u, w, Orientation::Reversing)])
        })
        .collect();
    let found: Vec<Option<EmbAut>> = candidates
        .par_iter()
        .map(|&(u, w, orientation)| {
            budget.check()?;
            let mut images = vec![u32::MAX; q as usize];
            images[0] = u.value();
            let mut image = w;
            for &y in &around_zero {
                images[y.index()] = image.value();
                image = match orientation {
                    Orientation::Preserving => emb.rotate(u, image),
                    Orientation::Reversing => emb.rotate_inv(u, image),
                };
            }
            let Ok(perm) = Permutation::from_images(images) else {
                return Ok(None);
            };
            Ok(classify_automorphism(emb, &perm)?.map(|orientation| EmbAut { perm, orientation, dihedral: None }))
        })
        .collect::<Result<_, AutError>>()?;

    let mut all: Vec<EmbAut> = Vec::new();
    let mut seen = HashSet::new();
    for aut in found.into_iter().flatten() {
        if seen.insert(aut.perm.clone()) {
            all.push(aut);
        }
    }
    let total = all.len() as u64;
    let stabilizer: Vec<EmbAut> = all.into_iter().filter(|a| a.perm.apply(0) == 0).collect();
    assemble(emb, stabilizer, move |_| total, SearchMethod::Exhaustive)
}

/// The maps `z ↦ η z` for each entry `η` of a rank-one array, each checked
/// to be an orientation preserving automorphism. Together they must form a
/// group of order `|E(A)|`.
pub fn multiplicative_auts(emb: &Embedding, array: &PartiallyFilledArray) -> Result<Vec<EmbAut>, AutError> {
    let f = emb.field();
    let auts: Vec<EmbAut> = array
        .entries()
        .map(|(_, eta)| {
            let images = f.elements().map(|z| f.mul(eta, z).value()).collect();
            let perm = Permutation::from_images(images).map_err(|_| AutError::VerificationFailed(eta))?;
            match classify_automorphism(emb, &perm)? {
                Some(Orientation::Preserving) => Ok(EmbAut { perm, orientation: Orientation::Preserving, dihedral: None }),
                _ => Err(AutError::VerificationFailed(eta)),
            }
        })
        .collect::<Result<_, _>>()?;
    let perms: Vec<Permutation> = auts.iter().map(|a| a.perm.clone()).collect();
    let cert = group_structure(&perms)?;
    if cert.order != array.entries().count() {
        return Err(AutError::NotClosed);
    }
    Ok(auts)
}

/// Decides whether a finite set of permutations, closed under composition,
/// is cyclic. The generator is the least full-order element in the ordering
/// of image lists, so the result does not depend on input order.
pub fn group_structure(perms: &[Permutation]) -> Result<GroupCertificate, AutError> {
    if perms.is_empty() {
        return Err(AutError::NotClosed);
    }
    let set: HashSet<&Permutation> = perms.iter().collect();
    let closed = perms.par_iter().all(|a| perms.iter().all(|b| set.contains(&a.compose(b))));
    if !closed {
        return Err(AutError::NotClosed);
    }
    let mut distinct: Vec<&Permutation> = set.into_iter().collect();
    distinct.sort();
    let order = distinct.len();
    let mut order_profile = BTreeMap::new();
    let mut generator = None;
    for p in &distinct {
        let o = p.order();
        *order_profile.entry(o).or_insert(0) += 1;
        if generator.is_none() && o == order as u64 {
            generator = Some((*p).clone());
        }
    }
    Ok(GroupCertificate { order, cyclic: generator.is_some(), generator, order_profile })
}

/// Whether `aut` maps every face to a face of the same length (reversing
/// maps send directed faces to reversed faces).
pub fn maps_faces_to_faces(emb: &Embedding, aut: &EmbAut) -> bool {
    let faces: HashSet<&Face> = emb.faces().iter().collect();
    emb.faces().iter().all(|face| {
        let image = face.map(|x| Element(aut.perm.apply(x.value())));
        let image = match aut.orientation {
            Orientation::Preserving => image,
            Orientation::Reversing => image.reversed(),
        };
        image.len() == face.len() && faces.contains(&image)
    })
}
