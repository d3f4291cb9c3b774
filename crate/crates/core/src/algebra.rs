//! Bound quiver algebras `A = kQ/I` with monomial admissible ideals.
//!
//! A path is stored in traversal order: `[a, b]` means "first a, then b",
//! so the composite arrow map is `M_b . M_a`. The basis of the algebra is
//! the set of paths containing no relation as a contiguous subpath, ordered
//! by length and then lexicographically on arrow ids. Trivial paths `e_i`
//! come first, ordered by vertex.

use crate::error::{Error, Result};
use std::sync::Arc;

pub type Vertex = usize; // 1-based
pub type ArrowId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub id: ArrowId,
    pub source: Vertex,
    pub target: Vertex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub vertex_count: usize,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertex_count: usize, arrows: Vec<(ArrowId, Vertex, Vertex)>) -> Result<Quiver> {
        assert!(vertex_count > 0, "quiver needs at least one vertex");
        let mut seen = std::collections::HashSet::new();
        let arrows: Vec<Arrow> = arrows
            .into_iter()
            .map(|(id, source, target)| Arrow { id, source, target })
            .collect();
        for a in &arrows {
            if a.source == 0 || a.source > vertex_count || a.target == 0 || a.target > vertex_count {
                return Err(Error::InvalidPath(format!(
                    "arrow {} endpoints out of range",
                    a.id
                )));
            }
            if !seen.insert(a.id) {
                return Err(Error::InvalidPath(format!("duplicate arrow id {}", a.id)));
            }
        }
        Ok(Quiver { vertex_count, arrows })
    }

    pub fn arrow(&self, id: ArrowId) -> Option<&Arrow> {
        self.arrows.iter().find(|a| a.id == id)
    }
}

/// A path in the quiver: either the trivial path at a vertex, or a
/// composable sequence of arrow ids in traversal order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    source: Vertex,
    target: Vertex,
    arrows: Vec<ArrowId>,
}

impl Path {
    pub fn trivial(v: Vertex) -> Path {
        Path { source: v, target: v, arrows: Vec::new() }
    }

    pub fn from_arrows(q: &Quiver, arrows: &[ArrowId]) -> Result<Path> {
        if arrows.is_empty() {
            return Err(Error::InvalidPath("empty arrow sequence".into()));
        }
        let first = q
            .arrow(arrows[0])
            .ok_or_else(|| Error::InvalidPath(format!("unknown arrow {}", arrows[0])))?;
        let mut at = first.target;
        let source = first.source;
        for &id in &arrows[1..] {
            let a = q
                .arrow(id)
                .ok_or_else(|| Error::InvalidPath(format!("unknown arrow {}", id)))?;
            if a.source != at {
                return Err(Error::InvalidPath(format!(
                    "arrows {:?} are not composable at arrow {}",
                    arrows, id
                )));
            }
            at = a.target;
        }
        Ok(Path { source, target: at, arrows: arrows.to_vec() })
    }

    pub fn source(&self) -> Vertex {
        self.source
    }

    pub fn target(&self) -> Vertex {
        self.target
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    /// `self` followed by arrow `a` (which must start at `self.target`).
    fn extend(&self, a: &Arrow) -> Path {
        debug_assert_eq!(self.target, a.source);
        let mut arrows = self.arrows.clone();
        arrows.push(a.id);
        Path { source: self.source, target: a.target, arrows }
    }

    fn contains_subpath(&self, rel: &Path) -> bool {
        let n = rel.arrows.len();
        if n == 0 || n > self.arrows.len() {
            return false;
        }
        self.arrows.windows(n).any(|w| w == rel.arrows.as_slice())
    }
}

pub const DEFAULT_ADMISSIBILITY_CAP: usize = 64;

#[derive(Debug)]
pub struct Algebra {
    pub quiver: Quiver,
    pub char_p: u64,
    pub relations: Vec<Path>,
    /// Nonzero paths, ordered by length then lexicographically on arrow ids.
    pub basis: Vec<Path>,
    pub dim: usize,
}

pub type AlgebraRef = Arc<Algebra>;

/// Build a bound quiver algebra, validating admissibility of the monomial
/// ideal by enumerating surviving paths level by level. Surviving paths are
/// closed under subpaths, so an empty level certifies finiteness.
pub fn build_algebra(q: Quiver, p: u64, rels: Vec<Path>) -> Result<AlgebraRef> {
    build_algebra_capped(q, p, rels, DEFAULT_ADMISSIBILITY_CAP)
}

pub fn build_algebra_capped(
    q: Quiver,
    p: u64,
    rels: Vec<Path>,
    cap: usize,
) -> Result<AlgebraRef> {
    if !crate::exactlin::is_prime(p) || p > 1 << 31 {
        return Err(Error::Invalid(format!("field characteristic {} is not a prime <= 2^31", p)));
    }
    for r in &rels {
        if r.len() < 2 {
            return Err(Error::InvalidPath(format!(
                "relation {:?} has length < 2",
                r.arrows()
            )));
        }
        // re-validate composability against this quiver
        Path::from_arrows(&q, r.arrows())?;
    }
    let mut basis: Vec<Path> = (1..=q.vertex_count).map(Path::trivial).collect();
    let mut level: Vec<Path> = basis.clone();
    for _len in 1..=cap {
        let mut next = Vec::new();
        for path in &level {
            for a in &q.arrows {
                if a.source != path.target() {
                    continue;
                }
                let ext = path.extend(a);
                if rels.iter().any(|r| ext.contains_subpath(r)) {
                    continue;
                }
                next.push(ext);
            }
        }
        next.sort_by(|a, b| a.arrows.cmp(&b.arrows));
        if next.is_empty() {
            let dim = basis.len();
            return Ok(Arc::new(Algebra { quiver: q, char_p: p, relations: rels, basis, dim }));
        }
        basis.extend(next.iter().cloned());
        level = next;
    }
    Err(Error::NonAdmissible { cap })
}

impl Algebra {
    /// Basis paths of `rad^k A`: the basis paths of length >= k.
    pub fn radical_power_basis(&self, k: usize) -> Vec<Path> {
        self.basis.iter().filter(|p| p.len() >= k).cloned().collect()
    }

    /// Linear A_n or a single oriented cycle: every vertex has in-degree
    /// and out-degree at most 1.
    pub fn is_nakayama(&self) -> bool {
        let mut indeg = vec![0usize; self.quiver.vertex_count + 1];
        let mut outdeg = vec![0usize; self.quiver.vertex_count + 1];
        for a in &self.quiver.arrows {
            indeg[a.target] += 1;
            outdeg[a.source] += 1;
        }
        indeg.iter().all(|&d| d <= 1) && outdeg.iter().all(|&d| d <= 1)
    }

    /// Basis paths starting at vertex `i` (the basis of `P_i = A e_i`).
    pub fn paths_from(&self, i: Vertex) -> Vec<Path> {
        self.basis.iter().filter(|p| p.source() == i).cloned().collect()
    }

    /// Basis paths ending at vertex `i`.
    pub fn paths_into(&self, i: Vertex) -> Vec<Path> {
        self.basis.iter().filter(|p| p.target() == i).cloned().collect()
    }

    /// Longest basis path length plus one bounds the radical length.
    pub fn loewy_length(&self) -> usize {
        self.basis.iter().map(|p| p.len()).max().unwrap_or(0) + 1
    }
}

/// Structural identity used for cheap same-algebra checks.
pub fn same_algebra(a: &AlgebraRef, b: &AlgebraRef) -> bool {
    Arc::ptr_eq(a, b)
        || (a.quiver == b.quiver && a.char_p == b.char_p && a.relations == b.relations)
}

/// Parse the line-oriented algebra text format:
///
/// ```text
/// field 2
/// vertices 3
/// arrow 1: 1 -> 2
/// arrow 2: 2 -> 3
/// relation 1 2
/// ```
pub fn parse_algebra(text: &str) -> Result<AlgebraRef> {
    let mut field: Option<u64> = None;
    let mut vertices: Option<usize> = None;
    let mut arrows: Vec<(ArrowId, Vertex, Vertex)> = Vec::new();
    let mut relations: Vec<Vec<ArrowId>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let mut parts = l.split_whitespace();
        let key = parts.next().unwrap();
        let err = |msg: &str| Error::Parse { line, msg: msg.to_string() };
        match key {
            "field" => {
                let v = parts.next().ok_or_else(|| err("expected `field <p>`"))?;
                field = Some(v.parse().map_err(|_| err("field characteristic must be an integer"))?);
            }
            "vertices" => {
                let v = parts.next().ok_or_else(|| err("expected `vertices <n>`"))?;
                vertices = Some(v.parse().map_err(|_| err("vertex count must be an integer"))?);
            }
            "arrow" => {
                // arrow <id>: <i> -> <j>
                let rest = l.strip_prefix("arrow").unwrap().trim();
                let (id_part, ends) = rest
                    .split_once(':')
                    .ok_or_else(|| err("expected `arrow <id>: <i> -> <j>`"))?;
                let id: ArrowId = id_part
                    .trim()
                    .parse()
                    .map_err(|_| err("arrow id must be an integer"))?;
                let (src, tgt) = ends
                    .split_once("->")
                    .ok_or_else(|| err("expected `-> ` between endpoints"))?;
                let source: Vertex =
                    src.trim().parse().map_err(|_| err("arrow source must be an integer"))?;
                let target: Vertex =
                    tgt.trim().parse().map_err(|_| err("arrow target must be an integer"))?;
                arrows.push((id, source, target));
            }
            "relation" => {
                let ids: std::result::Result<Vec<ArrowId>, _> =
                    parts.map(|s| s.parse::<ArrowId>()).collect();
                let ids = ids.map_err(|_| err("relation must list arrow ids"))?;
                if ids.len() < 2 {
                    return Err(err("relation needs at least two arrows"));
                }
                relations.push(ids);
            }
            _ => return Err(err(&format!("unknown directive `{}`", key))),
        }
    }
    let p = field.ok_or(Error::Parse { line: 0, msg: "missing `field` line".into() })?;
    let n = vertices.ok_or(Error::Parse { line: 0, msg: "missing `vertices` line".into() })?;
    let quiver = Quiver::new(n, arrows)?;
    let rels: Result<Vec<Path>> = relations
        .iter()
        .map(|ids| Path::from_arrows(&quiver, ids))
        .collect();
    build_algebra(quiver, p, rels?)
}

/// Shared fixtures used across the test suites.
pub mod fixtures {
    use super::*;

    /// kA_2: quiver `1 -> 2`, no relations.
    pub fn a2(p: u64) -> AlgebraRef {
        let q = Quiver::new(2, vec![(1, 1, 2)]).unwrap();
        build_algebra(q, p, vec![]).unwrap()
    }

    /// k[x]/x^2: one vertex, one loop `x`, relation `xx`.
    pub fn l2(p: u64) -> AlgebraRef {
        let q = Quiver::new(1, vec![(1, 1, 1)]).unwrap();
        let rel = Path::from_arrows(&q, &[1, 1]).unwrap();
        build_algebra(q, p, vec![rel]).unwrap()
    }

    /// k[x]/x^3.
    pub fn l3(p: u64) -> AlgebraRef {
        let q = Quiver::new(1, vec![(1, 1, 1)]).unwrap();
        let rel = Path::from_arrows(&q, &[1, 1, 1]).unwrap();
        build_algebra(q, p, vec![rel]).unwrap()
    }

    /// kA_3 with rad^2 = 0: arrows `a: 1 -> 2`, `b: 2 -> 3`, relation `ba`.
    pub fn n3(p: u64) -> AlgebraRef {
        let q = Quiver::new(3, vec![(1, 1, 2), (2, 2, 3)]).unwrap();
        let rel = Path::from_arrows(&q, &[1, 2]).unwrap();
        build_algebra(q, p, vec![rel]).unwrap()
    }

    /// kA_2 with the arrow reversed: quiver `2 -> 1`.
    pub fn a2_reversed(p: u64) -> AlgebraRef {
        let q = Quiver::new(2, vec![(1, 2, 1)]).unwrap();
        build_algebra(q, p, vec![]).unwrap()
    }
}
