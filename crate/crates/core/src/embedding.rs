//! Translation-invariant rotation systems on the complete graph `K_q`.
//!
//! The vertex set is the additive group of a finite field. A rotation is
//! fixed by one permutation `ρ₀` of the nonzero elements: the neighbours of
//! `x` are visited in the order `y ↦ x + ρ₀(y − x)`. Faces are traced with
//! the successor rule `(u, v) ↦ (v, ρ_v(u))`.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Element, FieldSpec};
use crate::heffter::PartiallyFilledArray;
use crate::orderings::OrderingPair;
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingError {
    #[error("rho0 is not a single cycle on the nonzero elements; the orderings are not compatible")]
    NotCompatible,
    #[error("±E(A) does not cover every nonzero element exactly once")]
    IncompleteCover,
    #[error("rho0 must fix 0 and act on a field of order {q}")]
    BadRho0 { q: u32 },
    #[error("the difference a must be nonzero")]
    ZeroDifference,
    #[error("neither {0} nor its negative is an entry of the array")]
    NotCovered(Element),
    #[error("Euler characteristic {chi} does not give an integer genus")]
    NonIntegerGenus { chi: i64 },
}

/// A combinatorial embedding of `K_q` whose rotation at `x` is the translate
/// of `ρ₀`.
#[derive(Debug, Clone)]
pub struct Embedding {
    field: FieldSpec,
    rho0: Permutation,
    rho0_inv: Permutation,
    faces: OnceLock<Vec<Face>>,
}

impl PartialEq for Embedding {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.rho0 == other.rho0
    }
}

impl Eq for Embedding {}

impl Embedding {
    /// Embedding from `ρ₀`, given as a permutation of all `q` elements that
    /// fixes 0. `ρ₀` must be one cycle on the nonzero elements.
    pub fn from_rho0(field: FieldSpec, rho0: Permutation) -> Result<Self, EmbeddingError> {
        let emb = Embedding::from_rho0_unchecked(field, rho0)?;
        let q = emb.field.q();
        if q > 1 && emb.rho0.cycle_of(1).len() != q as usize - 1 {
            return Err(EmbeddingError::NotCompatible);
        }
        Ok(emb)
    }

    /// Like [`Embedding::from_rho0`] but accepts any permutation fixing 0,
    /// so that broken rotations can be built and then rejected by
    /// [`validate_rotation`].
    pub fn from_rho0_unchecked(field: FieldSpec, rho0: Permutation) -> Result<Self, EmbeddingError> {
        let q = field.q();
        if rho0.len() != q as usize || rho0.apply(0) != 0 {
            return Err(EmbeddingError::BadRho0 { q });
        }
        let rho0_inv = rho0.inverse();
        Ok(Embedding { field, rho0, rho0_inv, faces: OnceLock::new() })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn rho0(&self) -> &Permutation {
        &self.rho0
    }

    /// The cycle of `ρ₀` starting at 1: `(x_1, x_2, …, x_{q-1})`.
    pub fn rho0_cycle(&self) -> Vec<Element> {
        self.rho0.cycle_of(1).into_iter().map(Element).collect()
    }

    #[inline]
    pub fn rho0_at(&self, a: Element) -> Element {
        Element(self.rho0.apply(a.value()))
    }

    /// `ρ_x(y) = x + ρ₀(y − x)`.
    #[inline]
    pub fn rotate(&self, x: Element, y: Element) -> Element {
        let d = self.field.sub(y, x);
        self.field.add(x, Element(self.rho0.apply(d.value())))
    }

    /// `ρ_x^{-1}(y)`.
    #[inline]
    pub fn rotate_inv(&self, x: Element, y: Element) -> Element {
        let d = self.field.sub(y, x);
        self.field.add(x, Element(self.rho0_inv.apply(d.value())))
    }

    /// The same embedding with the positions of `a` and `b` in the cycle of
    /// `ρ₀` exchanged, i.e. `ρ₀` conjugated by the transposition `(a b)`.
    pub fn perturbed(&self, a: Element, b: Element) -> Embedding {
        let t = Permutation::from_cycles(self.q() as usize, &[vec![a.value(), b.value()]])
            .expect("transposition of two points");
        let rho0 = t.compose(&self.rho0).compose(&t);
        Embedding::from_rho0_unchecked(self.field.clone(), rho0).expect("conjugate still fixes 0")
    }

    /// Faces of the embedding, traced once and cached.
    pub fn faces(&self) -> &[Face] {
        self.faces.get_or_init(|| trace(self))
    }

    /// For every directed edge `(u, v)`, index `u*q + v`, the position in
    /// [`Embedding::faces`] of the face containing it.
    pub fn face_index(&self) -> Vec<u32> {
        let q = self.q() as usize;
        let mut index = vec![u32::MAX; q * q];
        for (i, face) in self.faces().iter().enumerate() {
            let vs = face.vertices();
            for j in 0..vs.len() {
                let (u, v) = (vs[j], vs[(j + 1) % vs.len()]);
                index[u.index() * q + v.index()] = i as u32;
            }
        }
        index
    }
}

/// `ρ₀(a) = −ω_r(a)` for entries `a`, and `ρ₀(a) = ω_c(−a)` when `−a` is an
/// entry.
pub fn build_rho0(array: &PartiallyFilledArray, pair: &OrderingPair) -> Result<Embedding, EmbeddingError> {
    let field = array.field();
    let q = field.q() as usize;
    let mut images: Vec<Option<u32>> = vec![None; q];
    images[0] = Some(0);
    for &a in pair.entries() {
        let neg = field.neg(a);
        let from_row = field.neg(pair.omega_r(a).expect("entry"));
        let from_col = pair.omega_c(a).expect("entry");
        if images[a.index()].is_some() || images[neg.index()].is_some() {
            return Err(EmbeddingError::IncompleteCover);
        }
        images[a.index()] = Some(from_row.value());
        images[neg.index()] = Some(from_col.value());
    }
    let images: Vec<u32> = images.into_iter().collect::<Option<_>>().ok_or(EmbeddingError::IncompleteCover)?;
    let rho0 = Permutation::from_images(images).map_err(|_| EmbeddingError::IncompleteCover)?;
    Embedding::from_rho0(field.clone(), rho0)
}

/// Checks that every `ρ_x` is a single cycle through all of `G ∖ {x}`.
pub fn validate_rotation(emb: &Embedding) -> bool {
    let q = emb.q();
    if q < 2 {
        return true;
    }
    emb.field().elements().all(|x| {
        let start = emb.field().add(x, Element::ONE);
        let mut y = start;
        for step in 1..q {
            y = emb.rotate(x, y);
            if y == x {
                return false;
            }
            if y == start {
                return step == q - 1;
            }
        }
        false
    })
}

/// A face boundary as a cyclic vertex sequence, rotated to its
/// lexicographically least form. Direction is kept.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face(Vec<Element>);

impl Face {
    pub fn new(vertices: Vec<Element>) -> Face {
        let n = vertices.len();
        let best = (0..n)
            .min_by(|&i, &j| {
                let a = vertices[i..].iter().chain(&vertices[..i]);
                let b = vertices[j..].iter().chain(&vertices[..j]);
                a.cmp(b)
            })
            .unwrap_or(0);
        let mut v = vertices;
        v.rotate_left(best);
        Face(v)
    }

    pub fn vertices(&self) -> &[Element] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// A face is simple when no vertex repeats along its boundary.
    pub fn is_simple(&self) -> bool {
        let set: HashSet<Element> = self.0.iter().copied().collect();
        set.len() == self.0.len()
    }

    pub fn map(&self, f: impl Fn(Element) -> Element) -> Face {
        Face::new(self.0.iter().map(|&x| f(x)).collect())
    }

    pub fn translate(&self, field: &FieldSpec, g: Element) -> Face {
        self.map(|x| field.add(x, g))
    }

    pub fn scale(&self, field: &FieldSpec, eta: Element) -> Face {
        self.map(|x| field.mul(eta, x))
    }

    pub fn reversed(&self) -> Face {
        Face::new(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn trace(emb: &Embedding) -> Vec<Face> {
    let q = emb.q() as usize;
    let mut seen = vec![false; q * q];
    let mut faces = Vec::new();
    for u in 0..q {
        for v in 0..q {
            if u == v || seen[u * q + v] {
                continue;
            }
            let mut boundary = Vec::new();
            let (mut a, mut b) = (Element(u as u32), Element(v as u32));
            while !seen[a.index() * q + b.index()] {
                seen[a.index() * q + b.index()] = true;
                boundary.push(a);
                (a, b) = (b, emb.rotate(b, a));
            }
            faces.push(Face::new(boundary));
        }
    }
    faces.sort();
    faces
}

/// All faces, canonical and sorted. Every directed edge lies on exactly one.
pub fn trace_faces(emb: &Embedding) -> Vec<Face> {
    emb.faces().to_vec()
}

/// The face through the directed edge `(x, x + a)`, computed from the array
/// orderings rather than by tracing. When `a` is an entry the face walks the
/// column of `a`; when `−a` is an entry it walks the row of `−a` backwards.
pub fn closed_form_face(pair: &OrderingPair, field: &FieldSpec, x: Element, a: Element) -> Result<Face, EmbeddingError> {
    if a == Element::ZERO {
        return Err(EmbeddingError::ZeroDifference);
    }
    if pair.contains(a) {
        let k = pair.col_len(a).expect("entry");
        let mut vertices = Vec::with_capacity(k);
        let (mut pos, mut step) = (x, a);
        for _ in 0..k {
            vertices.push(pos);
            pos = field.add(pos, step);
            step = pair.omega_c(step).expect("entry");
        }
        return Ok(Face::new(vertices));
    }
    let b = field.neg(a);
    if !pair.contains(b) {
        return Err(EmbeddingError::NotCovered(a));
    }
    let h = pair.row_len(b).expect("entry");
    // partial[j] = sum_{i=1}^{j} ω_r^{-i}(b)
    let mut partial = vec![Element::ZERO; h];
    let mut step = b;
    for j in 1..h {
        step = pair.omega_r_inv(step).expect("entry");
        partial[j] = field.add(partial[j - 1], step);
    }
    let vertices = std::iter::once(x).chain((1..h).rev().map(|j| field.add(x, partial[j]))).collect();
    Ok(Face::new(vertices))
}

/// The two faces on the edge `{x, x + a}`: the one containing the directed
/// edge `(x, x + a)` and the one containing `(x + a, x)`.
pub fn closed_form_faces(
    array: &PartiallyFilledArray,
    pair: &OrderingPair,
    x: Element,
    a: Element,
) -> Result<(Face, Face), EmbeddingError> {
    let field = array.field();
    let forward = closed_form_face(pair, field, x, a)?;
    let backward = closed_form_face(pair, field, field.add(x, a), field.neg(a))?;
    Ok((forward, backward))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BiembeddingReport {
    pub ok: bool,
    /// Every edge lies on one face of length `m` and one of length `n`.
    pub edge_lengths_ok: bool,
    pub faces_simple: bool,
    pub two_colorable: bool,
    /// Up to ten edges that fail the length condition.
    pub bad_edges: Vec<(Element, Element)>,
    pub nonsimple_faces: usize,
}

/// Checks the biembedding structure: each edge on one `m`-face and one
/// `n`-face, all faces simple cycles, and a proper 2-colouring of the faces
/// that agrees with the length classes.
pub fn verify_biembedding(emb: &Embedding, m: usize, n: usize) -> BiembeddingReport {
    let q = emb.q() as usize;
    let faces = emb.faces();
    let index = emb.face_index();
    let mut want = [m, n];
    want.sort_unstable();

    let mut bad_edges = Vec::new();
    let mut bad_count = 0usize;
    let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); faces.len()];
    for u in 0..q {
        for v in u + 1..q {
            let f = index[u * q + v];
            let g = index[v * q + u];
            adjacency[f as usize].push(g);
            adjacency[g as usize].push(f);
            let mut got = [faces[f as usize].len(), faces[g as usize].len()];
            got.sort_unstable();
            if f == g || got != want {
                bad_count += 1;
                if bad_edges.len() < 10 {
                    bad_edges.push((Element(u as u32), Element(v as u32)));
                }
            }
        }
    }

    let nonsimple_faces = faces.iter().filter(|f| !f.is_simple()).count();

    // BFS 2-colouring of the face adjacency graph
    let mut colour: Vec<Option<bool>> = vec![None; faces.len()];
    let mut two_colorable = true;
    for start in 0..faces.len() {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(faces[start].len() == m);
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            let c = colour[f].expect("coloured");
            for &g in &adjacency[f] {
                match colour[g as usize] {
                    None => {
                        colour[g as usize] = Some(!c);
                        queue.push_back(g as usize);
                    }
                    Some(d) if d == c => two_colorable = false,
                    Some(_) => {}
                }
            }
        }
    }
    if m != n {
        two_colorable &= faces.iter().zip(&colour).all(|(f, c)| *c == Some(f.len() == m));
    }

    let edge_lengths_ok = bad_count == 0;
    let faces_simple = nonsimple_faces == 0;
    BiembeddingReport {
        ok: edge_lengths_ok && faces_simple && two_colorable,
        edge_lengths_ok,
        faces_simple,
        two_colorable,
        bad_edges,
        nonsimple_faces,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceReport {
    pub vertices: u64,
    pub edges: u64,
    pub faces: u64,
    pub euler_characteristic: i64,
    pub genus: u64,
    /// face length -> number of faces
    pub face_census: BTreeMap<usize, usize>,
}

pub fn surface_report(emb: &Embedding) -> Result<SurfaceReport, EmbeddingError> {
    let q = emb.q() as u64;
    let faces = emb.faces();
    let mut face_census = BTreeMap::new();
    for f in faces {
        *face_census.entry(f.len()).or_insert(0) += 1;
    }
    let (v, e, f) = (q, q * (q - 1) / 2, faces.len() as u64);
    let chi = v as i64 - e as i64 + f as i64;
    let twice_genus = 2 - chi;
    if twice_genus < 0 || twice_genus % 2 != 0 {
        return Err(EmbeddingError::NonIntegerGenus { chi });
    }
    Ok(SurfaceReport {
        vertices: v,
        edges: e,
        faces: f,
        euler_characteristic: chi,
        genus: (twice_genus / 2) as u64,
        face_census,
    })
}

/// One face per line, vertices separated by spaces, after the field header.
pub fn faces_to_text(field: &FieldSpec, faces: &[Face]) -> String {
    let mut out = field.header();
    out.push('\n');
    for f in faces {
        let parts: Vec<String> = f.vertices().iter().map(ToString::to_string).collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize)]
struct FaceRecord<'a> {
    length: usize,
    vertices: &'a [Element],
}

pub fn faces_to_json(faces: &[Face]) -> String {
    let records: Vec<FaceRecord> = faces.iter().map(|f| FaceRecord { length: f.len(), vertices: f.vertices() }).collect();
    serde_json::to_string_pretty(&records).expect("faces serialize")
}
