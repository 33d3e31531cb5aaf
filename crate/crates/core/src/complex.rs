//! The pipe complex `Δ_{v,w}`: the subword complex on the boxes of `D(v)`
//! whose faces are complements of cross sets with Demazure product `>= w0 w`.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{KlError, Result};
use crate::nilhecke::demazure_step;
use crate::perm::{bruhat_leq, bruhat_leq_unchecked, Cell, Permutation};
use crate::pipedreams::{enumerate_masks, PipeDream, ReadingWord};

#[derive(Clone, Debug)]
pub struct PipeComplex {
    pub v: Permutation,
    pub w: Permutation,
    pub q: ReadingWord,
    /// `w0 * w`
    pub target: Permutation,
    /// False when `v` is not below `w`; the complex then has no faces at all.
    pub nonempty: bool,
}

/// A face as a vertex set, together with the pipe dream labeling it.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Face {
    pub vertices: Vec<Cell>,
    pub label: PipeDream,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Ball,
    Sphere,
    Empty,
}

#[derive(Clone, Debug, Serialize)]
pub struct TopologyReport {
    pub kind: Topology,
    pub dimension: i64,
    pub facets: usize,
    pub ridges: usize,
    pub boundary_ridges: usize,
    /// Face counts `f_{-1}, f_0, f_1, ...`.
    pub f_vector: Vec<u64>,
    pub euler_characteristic: i64,
    pub reduced_euler_characteristic: i64,
}

impl PipeComplex {
    pub fn new(v: &Permutation, w: &Permutation) -> Result<Self> {
        let nonempty = bruhat_leq(v, w)?;
        let target = Permutation::longest(v.n()).compose(w)?;
        Ok(Self {
            v: *v,
            w: *w,
            q: ReadingWord::new(v),
            target,
            nonempty,
        })
    }

    pub fn vertices(&self) -> &[Cell] {
        &self.q.boxes
    }

    pub fn num_vertices(&self) -> usize {
        self.q.len()
    }

    /// `|D(v)| - l(w0 w) - 1`
    pub fn dimension(&self) -> i64 {
        self.q.len() as i64 - self.target.length() as i64 - 1
    }

    pub fn mask_of(&self, cells: &[Cell]) -> Result<u128> {
        self.q.mask_of(cells)
    }

    pub fn is_face_mask(&self, face: u128) -> bool {
        if !self.nonempty {
            return false;
        }
        let crosses = self.q.full_mask() & !face;
        bruhat_leq_unchecked(&self.target, &self.q.product(crosses))
    }

    pub fn is_face(&self, vertices: &[Cell]) -> Result<bool> {
        Ok(self.is_face_mask(self.mask_of(vertices)?))
    }

    fn face_from_mask(&self, face: u128) -> Face {
        let crosses = self.q.full_mask() & !face;
        Face {
            vertices: self.q.cells_of(face),
            label: PipeDream {
                v: self.v,
                crosses: self.q.cells_of(crosses),
            },
        }
    }

    /// Facet vertex masks, from `RedPipes(v, w0 w)`.
    pub fn facet_masks(&self) -> Vec<u128> {
        if !self.nonempty {
            return vec![];
        }
        let full = self.q.full_mask();
        enumerate_masks(&self.q, &self.target, true)
            .into_iter()
            .map(|m| full & !m)
            .collect()
    }

    /// Interior face masks, from `Pipes(v, w0 w)`.
    pub fn interior_face_masks(&self) -> Vec<u128> {
        if !self.nonempty {
            return vec![];
        }
        let full = self.q.full_mask();
        enumerate_masks(&self.q, &self.target, false)
            .into_iter()
            .map(|m| full & !m)
            .collect()
    }

    pub fn facets(&self) -> Vec<Face> {
        self.facet_masks().into_iter().map(|m| self.face_from_mask(m)).collect()
    }

    pub fn interior_faces(&self) -> Vec<Face> {
        self.interior_face_masks()
            .into_iter()
            .map(|m| self.face_from_mask(m))
            .collect()
    }

    /// Every face, as vertex masks. Exponential; meant for small complexes.
    pub fn all_face_masks(&self) -> Vec<u128> {
        let mut out = Vec::new();
        if !self.nonempty {
            return out;
        }
        let n = self.v.n();
        // enumerate cross sets whose product dominates the target
        fn go(
            pc: &PipeComplex,
            k: usize,
            prefix: Permutation,
            crosses: u128,
            out: &mut Vec<u128>,
        ) {
            let mut reach = prefix;
            for &l in &pc.q.labels[k..] {
                reach = demazure_step(reach, l);
            }
            if !bruhat_leq_unchecked(&pc.target, &reach) {
                return;
            }
            if k == pc.q.len() {
                out.push(pc.q.full_mask() & !crosses);
                return;
            }
            go(pc, k + 1, prefix, crosses, out);
            let next = demazure_step(prefix, pc.q.labels[k]);
            go(pc, k + 1, next, crosses | 1 << k, out);
        }
        go(self, 0, Permutation::identity(n), 0, &mut out);
        out
    }

    pub fn f_vector(&self) -> Vec<u64> {
        let mut f = vec![0u64; self.q.len() + 1];
        for m in self.all_face_masks() {
            f[m.count_ones() as usize] += 1;
        }
        while f.len() > 1 && *f.last().unwrap() == 0 {
            f.pop();
        }
        f
    }

    /// Purity, ridge-incidence and Euler characteristic checks.
    pub fn topology_check(&self) -> Result<TopologyReport> {
        if !self.nonempty {
            return Ok(TopologyReport {
                kind: Topology::Empty,
                dimension: -2,
                facets: 0,
                ridges: 0,
                boundary_ridges: 0,
                f_vector: vec![],
                euler_characteristic: 0,
                reduced_euler_characteristic: 0,
            });
        }
        let facets = self.facet_masks();
        let expected = (self.dimension() + 1) as u32;
        if facets.is_empty() {
            return Err(KlError::Invariant(format!(
                "Δ_{{{},{}}} has no facets although v <= w",
                self.v, self.w
            )));
        }
        if let Some(bad) = facets.iter().find(|f| f.count_ones() != expected) {
            return Err(KlError::Invariant(format!(
                "Δ_{{{},{}}} is not pure: facet of size {} vs {}",
                self.v,
                self.w,
                bad.count_ones(),
                expected
            )));
        }
        let mut ridges: HashMap<u128, u32> = HashMap::new();
        for &f in &facets {
            let mut rest = f;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                rest ^= bit;
                *ridges.entry(f ^ bit).or_default() += 1;
            }
        }
        if let Some((_, c)) = ridges.iter().find(|(_, &c)| c > 2) {
            return Err(KlError::Invariant(format!(
                "Δ_{{{},{}}}: a ridge lies in {c} facets",
                self.v, self.w
            )));
        }
        let boundary = ridges.values().filter(|&&c| c == 1).count();
        let f_vector = self.f_vector();
        let reduced: i64 = f_vector
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { -(c as i64) } else { c as i64 })
            .sum();
        let dim = self.dimension();
        let kind = if boundary == 0 {
            Topology::Sphere
        } else {
            Topology::Ball
        };
        let expected_chi = match kind {
            Topology::Sphere => {
                if dim.rem_euclid(2) == 0 {
                    1
                } else {
                    -1
                }
            }
            _ => 0,
        };
        if reduced != expected_chi {
            return Err(KlError::Invariant(format!(
                "Δ_{{{},{}}}: reduced Euler characteristic {reduced}, expected {expected_chi} for a {kind:?}",
                self.v, self.w
            )));
        }
        Ok(TopologyReport {
            kind,
            dimension: dim,
            facets: facets.len(),
            ridges: ridges.len(),
            boundary_ridges: boundary,
            f_vector,
            euler_characteristic: reduced + 1,
            reduced_euler_characteristic: reduced,
        })
    }

    /// Minimal nonfaces, as sorted vertex lists.
    pub fn minimal_nonfaces(&self) -> Vec<Vec<Cell>> {
        minimal_nonface_masks(self)
            .into_iter()
            .map(|m| self.q.cells_of(m))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "v": self.v.to_word_string(),
            "w": self.w.to_word_string(),
            "dimension": self.dimension(),
            "facets": self.facets().iter().map(|f| f.vertices.iter().map(|c| [c.row, c.col]).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    /// Facet–ridge adjacency graph in DOT format.
    pub fn to_dot(&self) -> String {
        let facets = self.facet_masks();
        let mut out = String::from("graph facets {\n");
        for (k, &f) in facets.iter().enumerate() {
            let label: Vec<String> = self.q.cells_of(f).iter().map(|c| c.to_string()).collect();
            let _ = writeln!(out, "  f{k} [label=\"{}\"];", label.join(" "));
        }
        for a in 0..facets.len() {
            for b in a + 1..facets.len() {
                if (facets[a] & facets[b]).count_ones() + 1 == facets[a].count_ones() {
                    let _ = writeln!(out, "  f{a} -- f{b};");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Minimal nonfaces: minimal transversals of the facet complements.
pub(crate) fn minimal_nonface_masks(pc: &PipeComplex) -> Vec<u128> {
    if !pc.nonempty {
        // no faces at all: the empty set is the unique minimal nonface
        return vec![0];
    }
    let full = pc.q.full_mask();
    let complements: Vec<u128> = pc.facet_masks().into_iter().map(|f| full & !f).collect();
    minimal_transversals(&complements)
}

/// All inclusion-minimal sets meeting every member of `sets`.
pub fn minimal_transversals(sets: &[u128]) -> Vec<u128> {
    let mut tr: Vec<u128> = vec![0];
    for &s in sets {
        let mut next: BTreeSet<u128> = BTreeSet::new();
        for &t in &tr {
            if t & s != 0 {
                next.insert(t);
            } else {
                let mut rest = s;
                while rest != 0 {
                    let bit = rest & rest.wrapping_neg();
                    rest ^= bit;
                    next.insert(t | bit);
                }
            }
        }
        let cand: Vec<u128> = next.into_iter().collect();
        tr = cand
            .iter()
            .copied()
            .filter(|&a| !cand.iter().any(|&b| b != a && b & a == b))
            .collect();
    }
    tr.sort_by_key(|m| (m.count_ones(), *m));
    tr
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DecompositionCase {
    /// `i` is a descent of `w`; `V` lies in every facet.
    Cone,
    /// `i` is an ascent of `w`.
    Split,
}

#[derive(Clone, Debug)]
pub struct VertexDecomposition {
    pub i: usize,
    /// The box of `z_last`.
    pub vertex: Cell,
    pub case: DecompositionCase,
    /// `Δ_{v s_i, w}`
    pub link: PipeComplex,
    /// `Δ_{v s_i, w s_i}` in the split case, `Δ_{v s_i, w}` for a cone.
    pub deletion: PipeComplex,
}

impl VertexDecomposition {
    /// Image in `D(v s_i)` of a box of `D(v)` other than `z_last`: boxes of
    /// column `i` move one step right.
    pub fn map_vertex(&self, c: Cell) -> Cell {
        if c.col() == self.i {
            Cell::new(c.row(), self.i + 1)
        } else {
            c
        }
    }

    pub fn map_face(&self, vertices: &[Cell]) -> Vec<Cell> {
        let mut v: Vec<Cell> = vertices
            .iter()
            .filter(|&&c| c != self.vertex)
            .map(|&c| self.map_vertex(c))
            .collect();
        v.sort();
        v
    }

    /// Checks that the explicit maps carry the link and deletion of `V`
    /// bijectively onto the faces of the smaller complexes.
    pub fn verify(&self, pc: &PipeComplex) -> Result<()> {
        let vbit = 1u128 << pc.q.index_of(self.vertex).expect("z_last is a vertex");
        let faces = pc.all_face_masks();
        let face_set: BTreeSet<u128> = faces.iter().copied().collect();
        let to_cells = |m: u128| pc.q.cells_of(m);
        let image = |target: &PipeComplex, ms: &mut dyn Iterator<Item = u128>| -> Result<BTreeSet<u128>> {
            let mut out = BTreeSet::new();
            for m in ms {
                out.insert(target.mask_of(&self.map_face(&to_cells(m)))?);
            }
            Ok(out)
        };
        let link: Vec<u128> = faces
            .iter()
            .copied()
            .filter(|&f| f & vbit == 0 && face_set.contains(&(f | vbit)))
            .collect();
        let deletion: Vec<u128> = faces.iter().copied().filter(|&f| f & vbit == 0).collect();
        let link_img = image(&self.link, &mut link.iter().copied())?;
        let del_img = image(&self.deletion, &mut deletion.iter().copied())?;
        let link_target: BTreeSet<u128> = self.link.all_face_masks().into_iter().collect();
        let del_target: BTreeSet<u128> = self.deletion.all_face_masks().into_iter().collect();
        if link_img != link_target || link_img.len() != link.len() {
            return Err(KlError::Invariant(format!(
                "link of {} in Δ_{{{},{}}} does not map onto Δ_{{{},{}}}",
                self.vertex, pc.v, pc.w, self.link.v, self.link.w
            )));
        }
        if del_img != del_target || del_img.len() != deletion.len() {
            return Err(KlError::Invariant(format!(
                "deletion of {} in Δ_{{{},{}}} does not map onto Δ_{{{},{}}}",
                self.vertex, pc.v, pc.w, self.deletion.v, self.deletion.w
            )));
        }
        if self.case == DecompositionCase::Cone {
            let all_contain = pc.facet_masks().iter().all(|f| f & vbit != 0);
            if !all_contain {
                return Err(KlError::Invariant(format!(
                    "{} is not a cone point of Δ_{{{},{}}}",
                    self.vertex, pc.v, pc.w
                )));
            }
        }
        Ok(())
    }
}

/// Vertex decomposition at `z_last`, the rightmost then southmost box of `D(v)`.
pub fn vertex_decompose(pc: &PipeComplex) -> Result<VertexDecomposition> {
    let v = pc.v;
    let n = v.n();
    let i = v
        .last_ascent()
        .ok_or_else(|| KlError::Invariant("v = w0 has an empty diagram".into()))?;
    let vertex = Cell::new(n - v.at(i + 1) + 1, i);
    let rightmost = pc
        .q
        .boxes
        .iter()
        .copied()
        .max_by(|a, b| a.col.cmp(&b.col).then(b.row.cmp(&a.row)))
        .expect("nonempty diagram");
    if rightmost != vertex {
        return Err(KlError::Invariant(format!(
            "z_last of D({v}) is {rightmost}, expected {vertex}"
        )));
    }
    let vs = v.times_simple(i);
    let case = if pc.w.has_right_descent(i) {
        DecompositionCase::Cone
    } else {
        DecompositionCase::Split
    };
    let link = PipeComplex::new(&vs, &pc.w)?;
    let deletion = match case {
        DecompositionCase::Cone => link.clone(),
        DecompositionCase::Split => PipeComplex::new(&vs, &pc.w.times_simple(i))?,
    };
    Ok(VertexDecomposition {
        i,
        vertex,
        case,
        link,
        deletion,
    })
}

/// `(facets, interior faces)` of `Δ_{v,w}` computed purely through the
/// vertex-decomposition recursion.
pub fn recursive_counts(v: &Permutation, w: &Permutation) -> Result<(u64, u64)> {
    let mut memo = HashMap::new();
    rec_counts(v, w, &mut memo)
}

fn rec_counts(
    v: &Permutation,
    w: &Permutation,
    memo: &mut HashMap<(Permutation, Permutation), (u64, u64)>,
) -> Result<(u64, u64)> {
    if let Some(&r) = memo.get(&(*v, *w)) {
        return Ok(r);
    }
    let r = if !bruhat_leq(v, w)? {
        (0, 0)
    } else if let Some(i) = v.last_ascent() {
        let vs = v.times_simple(i);
        let (f1, i1) = rec_counts(&vs, w, memo)?;
        if w.has_right_descent(i) {
            (f1, i1)
        } else {
            let (f2, i2) = rec_counts(&vs, &w.times_simple(i), memo)?;
            (f1 + f2, 2 * i1 + i2)
        }
    } else {
        // v = w0 <= w forces w = w0 and Δ = {∅}
        (1, 1)
    };
    memo.insert((*v, *w), r);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn figure_examples() {
        let a = PipeComplex::new(&p("31452"), &p("53142")).unwrap();
        assert_eq!(a.facets().len(), 3);
        assert_eq!(a.interior_faces().len(), 5);
        let t = a.topology_check().unwrap();
        assert_eq!(t.kind, Topology::Ball);
        assert_eq!(t.dimension, 2);
        assert_eq!(t.euler_characteristic, 1);

        let b = PipeComplex::new(&p("31542"), &p("53142")).unwrap();
        assert_eq!(b.facets().len(), 1);
        assert_eq!(b.facets()[0].vertices.len(), 2);
        assert_eq!(b.interior_faces().len(), 1);
        let t = b.topology_check().unwrap();
        assert_eq!(t.kind, Topology::Ball);
        assert_eq!(t.dimension, 1);
    }

    #[test]
    fn trivial_complex() {
        for v in Permutation::all(4) {
            let c = PipeComplex::new(&v, &v).unwrap();
            let f = c.facets();
            assert_eq!(f.len(), 1);
            assert!(f[0].vertices.is_empty());
            let t = c.topology_check().unwrap();
            assert_eq!(t.kind, Topology::Sphere);
            assert_eq!(t.dimension, -1);
        }
    }

    #[test]
    fn empty_complex() {
        let c = PipeComplex::new(&p("4321"), &p("1234")).unwrap();
        assert!(c.all_face_masks().is_empty());
        assert!(!c.is_face(&[]).unwrap());
        assert_eq!(c.topology_check().unwrap().kind, Topology::Empty);
    }

    #[test]
    fn link_example() {
        let c = PipeComplex::new(&p("31452"), &p("53142")).unwrap();
        let vd = vertex_decompose(&c).unwrap();
        assert_eq!(vd.i, 3);
        assert_eq!(vd.case, DecompositionCase::Split);
        assert_eq!(vd.link.v, p("31542"));
        vd.verify(&c).unwrap();
    }

    #[test]
    fn transversals_small() {
        // complements {1,2}, {2,3} -> minimal transversals {2}, {1,3}
        let t = minimal_transversals(&[0b011, 0b110]);
        assert_eq!(t, vec![0b010, 0b101]);
        assert_eq!(minimal_transversals(&[]), vec![0]);
    }
}
