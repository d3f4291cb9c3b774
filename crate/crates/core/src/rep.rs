//! The module category mod-A: representations, hom spaces, projectives,
//! injectives, radicals, projective covers, syzygies, isomorphism testing
//! and decomposition into indecomposables.

use crate::algebra::{same_algebra, AlgebraRef, Path, Vertex};
use crate::error::{Error, Result};
use crate::exactlin::{coords_in_basis, Mat};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A finite-dimensional left module presented as a quiver representation:
/// one vector space per vertex and one matrix per arrow, with the matrix of
/// arrow `a: u -> v` of shape `dims[v] x dims[u]`.
#[derive(Clone, Debug)]
pub struct Rep {
    pub algebra: AlgebraRef,
    pub dims: Vec<usize>,
    pub arrow_maps: Vec<Mat>,
}

/// A homomorphism between representations over the same algebra: one matrix
/// per vertex, `target.dims[v] x source.dims[v]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Morphism {
    pub blocks: Vec<Mat>,
}

#[derive(Clone, Debug)]
pub struct HomSpace {
    pub basis: Vec<Morphism>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Exhaustive enumeration is used when the search space `p^dim` stays under
/// this many bits.
pub const ENUM_CAP_BITS: f64 = 16.0;

pub fn enumerable(p: u64, dim: usize) -> bool {
    dim as f64 * (p as f64).log2() <= ENUM_CAP_BITS
}

impl Rep {
    pub fn new(algebra: AlgebraRef, dims: Vec<usize>, arrow_maps: Vec<Mat>) -> Result<Rep> {
        if dims.len() != algebra.quiver.vertex_count {
            return Err(Error::Invalid(format!(
                "expected {} vertex dimensions, got {}",
                algebra.quiver.vertex_count,
                dims.len()
            )));
        }
        if arrow_maps.len() != algebra.quiver.arrows.len() {
            return Err(Error::Invalid("one matrix per arrow required".into()));
        }
        for (a, m) in algebra.quiver.arrows.iter().zip(&arrow_maps) {
            if m.rows() != dims[a.target - 1] || m.cols() != dims[a.source - 1] {
                return Err(Error::Invalid(format!(
                    "map for arrow {} has shape {}x{}, expected {}x{}",
                    a.id,
                    m.rows(),
                    m.cols(),
                    dims[a.target - 1],
                    dims[a.source - 1]
                )));
            }
            if m.modulus() != algebra.char_p {
                return Err(Error::Invalid("matrix modulus differs from field".into()));
            }
        }
        let rep = Rep { algebra, dims, arrow_maps };
        for rel in rep.algebra.relations.clone() {
            if !rep.path_matrix(&rel).is_zero() {
                return Err(Error::Invalid(format!(
                    "relation {:?} does not act by zero",
                    rel.arrows()
                )));
            }
        }
        Ok(rep)
    }

    pub fn zero(algebra: AlgebraRef) -> Rep {
        let p = algebra.char_p;
        let dims = vec![0; algebra.quiver.vertex_count];
        let maps = algebra.quiver.arrows.iter().map(|_| Mat::zero(p, 0, 0)).collect();
        Rep { algebra, dims, arrow_maps: maps }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn field(&self) -> u64 {
        self.algebra.char_p
    }

    fn arrow_index(&self, id: usize) -> usize {
        self.algebra
            .quiver
            .arrows
            .iter()
            .position(|a| a.id == id)
            .expect("arrow id valid for this algebra")
    }

    /// The composite matrix of a path acting on this representation.
    pub fn path_matrix(&self, path: &Path) -> Mat {
        let p = self.field();
        let mut acc = Mat::identity(p, self.dims[path.source() - 1]);
        for &id in path.arrows() {
            let idx = self.arrow_index(id);
            acc = self.arrow_maps[idx].mul(&acc);
        }
        acc
    }

    /// The simple module at vertex `i`.
    pub fn simple(algebra: AlgebraRef, i: Vertex) -> Result<Rep> {
        check_vertex(&algebra, i)?;
        let p = algebra.char_p;
        let mut dims = vec![0; algebra.quiver.vertex_count];
        dims[i - 1] = 1;
        let maps = algebra
            .quiver
            .arrows
            .iter()
            .map(|a| Mat::zero(p, dims[a.target - 1], dims[a.source - 1]))
            .collect();
        Ok(Rep { algebra, dims, arrow_maps: maps })
    }

    /// The indecomposable projective `P_i = A e_i`: basis paths starting at
    /// `i`, arrows acting by path extension.
    pub fn projective(algebra: AlgebraRef, i: Vertex) -> Result<Rep> {
        check_vertex(&algebra, i)?;
        let p = algebra.char_p;
        let nv = algebra.quiver.vertex_count;
        // per-vertex basis: paths i -> v in algebra basis order
        let paths = algebra.paths_from(i);
        let per_vertex: Vec<Vec<&Path>> =
            (1..=nv).map(|v| paths.iter().filter(|q| q.target() == v).collect()).collect();
        let dims: Vec<usize> = per_vertex.iter().map(|b| b.len()).collect();
        let basis_index = |v: Vertex, path: &Path| per_vertex[v - 1].iter().position(|q| **q == *path);
        let mut maps = Vec::new();
        for a in &algebra.quiver.arrows {
            let mut m = Mat::zero(p, dims[a.target - 1], dims[a.source - 1]);
            for (col, q) in per_vertex[a.source - 1].iter().enumerate() {
                let mut arrows = q.arrows().to_vec();
                arrows.push(a.id);
                if let Ok(ext) = Path::from_arrows(&algebra.quiver, &arrows) {
                    if let Some(row) = basis_index(a.target, &ext) {
                        m.set(row, col, 1);
                    }
                }
            }
            maps.push(m);
        }
        Ok(Rep { algebra, dims, arrow_maps: maps })
    }

    /// The indecomposable injective `I_i = D(e_i A)`: dual of the paths
    /// ending at `i`, arrows acting by transposed precomposition.
    pub fn injective(algebra: AlgebraRef, i: Vertex) -> Result<Rep> {
        check_vertex(&algebra, i)?;
        let p = algebra.char_p;
        let nv = algebra.quiver.vertex_count;
        let paths = algebra.paths_into(i);
        let per_vertex: Vec<Vec<&Path>> =
            (1..=nv).map(|v| paths.iter().filter(|q| q.source() == v).collect()).collect();
        let dims: Vec<usize> = per_vertex.iter().map(|b| b.len()).collect();
        let mut maps = Vec::new();
        for a in &algebra.quiver.arrows {
            // precomposition: paths target -> i give paths source -> i
            let mut r = Mat::zero(p, dims[a.source - 1], dims[a.target - 1]);
            for (col, q) in per_vertex[a.target - 1].iter().enumerate() {
                let mut arrows = vec![a.id];
                arrows.extend_from_slice(q.arrows());
                if let Ok(pre) = Path::from_arrows(&algebra.quiver, &arrows) {
                    if let Some(row) = per_vertex[a.source - 1].iter().position(|x| **x == pre) {
                        r.set(row, col, 1);
                    }
                }
            }
            maps.push(r.transpose());
        }
        Ok(Rep { algebra, dims, arrow_maps: maps })
    }

    /// `P_i / rad^k P_i`.
    pub fn projective_mod_radical(algebra: AlgebraRef, i: Vertex, k: usize) -> Result<Rep> {
        let p = Rep::projective(algebra.clone(), i)?;
        // rad^k P_i as a subrep, by composing radical inclusions
        let mut sub = p.clone();
        let mut incl = Morphism::identity(&p);
        for _ in 0..k {
            if sub.is_zero() {
                break;
            }
            let (rad, step) = sub.radical();
            incl = incl.compose(&step);
            sub = rad;
        }
        let (q, _) = p.quotient_by(&incl);
        Ok(q)
    }
}

fn check_vertex(algebra: &AlgebraRef, i: Vertex) -> Result<()> {
    if i == 0 || i > algebra.quiver.vertex_count {
        return Err(Error::UnknownVertex(i));
    }
    Ok(())
}

impl Morphism {
    pub fn zero(source: &Rep, target: &Rep) -> Morphism {
        let p = source.field();
        let blocks = source
            .dims
            .iter()
            .zip(&target.dims)
            .map(|(&s, &t)| Mat::zero(p, t, s))
            .collect();
        Morphism { blocks }
    }

    pub fn identity(rep: &Rep) -> Morphism {
        let p = rep.field();
        Morphism { blocks: rep.dims.iter().map(|&d| Mat::identity(p, d)).collect() }
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Morphism) -> Morphism {
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(g, f)| g.mul(f))
            .collect();
        Morphism { blocks }
    }

    pub fn add(&self, other: &Morphism) -> Morphism {
        Morphism { blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Morphism) -> Morphism {
        Morphism { blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: u64) -> Morphism {
        Morphism { blocks: self.blocks.iter().map(|b| b.scale(c)).collect() }
    }

    pub fn neg(&self) -> Morphism {
        Morphism { blocks: self.blocks.iter().map(|b| b.neg()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.is_zero())
    }

    pub fn is_invertible(&self) -> bool {
        self.blocks
            .iter()
            .all(|b| b.rows() == b.cols() && b.rank() == b.rows())
    }

    pub fn inverse(&self) -> Option<Morphism> {
        let blocks: Option<Vec<Mat>> = self.blocks.iter().map(|b| b.inverse()).collect();
        blocks.map(|blocks| Morphism { blocks })
    }

    pub fn is_surjective(&self) -> bool {
        self.blocks.iter().all(|b| b.rank() == b.rows())
    }

    pub fn is_injective(&self) -> bool {
        self.blocks.iter().all(|b| b.rank() == b.cols())
    }

    /// Check that the blocks commute with the arrow maps, i.e. that this is
    /// a genuine module homomorphism `source -> target`.
    pub fn is_valid(&self, source: &Rep, target: &Rep) -> bool {
        source
            .algebra
            .quiver
            .arrows
            .iter()
            .enumerate()
            .all(|(ai, a)| {
                let (u, v) = (a.source - 1, a.target - 1);
                self.blocks[v].mul(&source.arrow_maps[ai])
                    == target.arrow_maps[ai].mul(&self.blocks[u])
            })
    }

    /// Linear combination of a hom basis.
    pub fn from_coords(basis: &[Morphism], coords: &[u64], source: &Rep, target: &Rep) -> Morphism {
        let mut acc = Morphism::zero(source, target);
        for (h, &c) in basis.iter().zip(coords) {
            if c != 0 {
                acc = acc.add(&h.scale(c));
            }
        }
        acc
    }

    /// Row-major flattening of all blocks, used to express homs in a basis.
    pub fn flatten(&self) -> Vec<u64> {
        let mut v = Vec::new();
        for b in &self.blocks {
            v.extend_from_slice(b.entries());
        }
        v
    }
}

/// Basis of all A-homomorphisms `m -> n`, computed as the kernel of the
/// commuting-square linear system.
pub fn hom_space(m: &Rep, n: &Rep) -> Result<HomSpace> {
    if !same_algebra(&m.algebra, &n.algebra) {
        return Err(Error::AlgebraMismatch);
    }
    let p = m.field();
    let nv = m.algebra.quiver.vertex_count;
    // unknowns: h_v entries, row-major, vertex by vertex
    let offsets: Vec<usize> = {
        let mut acc = 0;
        let mut offs = Vec::with_capacity(nv);
        for v in 0..nv {
            offs.push(acc);
            acc += n.dims[v] * m.dims[v];
        }
        offs
    };
    let unknowns = (0..nv).map(|v| n.dims[v] * m.dims[v]).sum::<usize>();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for (ai, a) in m.algebra.quiver.arrows.iter().enumerate() {
        let (u, v) = (a.source - 1, a.target - 1);
        let ma = &m.arrow_maps[ai];
        let na = &n.arrow_maps[ai];
        // constraint: h_v * M_a - N_a * h_u = 0, entrywise
        for i in 0..n.dims[v] {
            for j in 0..m.dims[u] {
                let mut row = vec![0u64; unknowns];
                for k in 0..m.dims[v] {
                    let c = ma.get(k, j);
                    if c != 0 {
                        let idx = offsets[v] + i * m.dims[v] + k;
                        row[idx] = (row[idx] + c) % p;
                    }
                }
                for k in 0..n.dims[u] {
                    let c = na.get(i, k);
                    if c != 0 {
                        let idx = offsets[u] + k * m.dims[u] + j;
                        row[idx] = (row[idx] + p - c) % p;
                    }
                }
                rows.push(row);
            }
        }
    }
    let system = if rows.is_empty() {
        Mat::zero(p, 0, unknowns)
    } else {
        Mat::from_rows(p, &rows)
    };
    let basis = system
        .kernel_basis()
        .into_iter()
        .map(|sol| {
            let mut blocks = Vec::with_capacity(nv);
            for v in 0..nv {
                let mut b = Mat::zero(p, n.dims[v], m.dims[v]);
                for i in 0..n.dims[v] {
                    for j in 0..m.dims[v] {
                        b.set(i, j, sol[offsets[v] + i * m.dims[v] + j]);
                    }
                }
                blocks.push(b);
            }
            Morphism { blocks }
        })
        .collect();
    Ok(HomSpace { basis })
}

/// Express a morphism in coordinates of a hom-space basis. Panics if the
/// morphism lies outside the span.
pub fn morphism_coords(basis: &[Morphism], h: &Morphism, p: u64) -> Vec<u64> {
    if basis.is_empty() {
        assert!(h.is_zero(), "nonzero morphism in zero hom space");
        return Vec::new();
    }
    let cols: Vec<Vec<u64>> = basis.iter().map(|b| b.flatten()).collect();
    let target = h.flatten();
    let rows = target.len();
    let mut m = Mat::zero(p, rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, &x) in c.iter().enumerate() {
            m.set(i, j, x);
        }
    }
    m.solve(&target).expect("morphism outside span of hom basis")
}

impl Rep {
    /// Subrepresentation spanned by the given per-vertex column spans
    /// (assumed closed under the arrow maps); returns the subrep and its
    /// inclusion.
    pub fn subrep_from_spans(&self, spans: &[Mat]) -> (Rep, Morphism) {
        let p = self.field();
        let bases: Vec<Mat> = spans.iter().map(|s| s.column_space_basis()).collect();
        let dims: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
        let mut maps = Vec::new();
        for (ai, a) in self.algebra.quiver.arrows.iter().enumerate() {
            let (u, v) = (a.source - 1, a.target - 1);
            let image = self.arrow_maps[ai].mul(&bases[u]);
            let restricted = if dims[v] == 0 {
                Mat::zero(p, 0, dims[u])
            } else {
                coords_in_basis(&bases[v], &image)
            };
            maps.push(restricted);
        }
        let sub = Rep { algebra: self.algebra.clone(), dims, arrow_maps: maps };
        (sub, Morphism { blocks: bases })
    }

    /// Quotient by the image of an inclusion; returns the quotient and the
    /// projection.
    pub fn quotient_by(&self, incl: &Morphism) -> (Rep, Morphism) {
        let (rep, proj, _) = self.quotient_with_section(incl);
        (rep, proj)
    }

    /// Like `quotient_by`, additionally returning per-vertex linear sections
    /// `s_v` with `proj_v * s_v = id`. The sections are not module maps in
    /// general; they are used to transport well-defined maps out of the
    /// quotient.
    pub fn quotient_with_section(&self, incl: &Morphism) -> (Rep, Morphism, Vec<Mat>) {
        let p = self.field();
        let nv = self.algebra.quiver.vertex_count;
        let mut projections = Vec::with_capacity(nv);
        let mut sections = Vec::with_capacity(nv);
        for v in 0..nv {
            let b = incl.blocks[v].column_space_basis();
            let dim = self.dims[v];
            let r = b.cols();
            // greedily complete the span to a basis with standard vectors
            let mut t = b.clone();
            let mut chosen = Vec::new();
            for j in 0..dim {
                if t.cols() == dim {
                    break;
                }
                let mut e = Mat::zero(p, dim, 1);
                e.set(j, 0, 1);
                let cand = t.hstack(&e);
                if cand.rank() == cand.cols() {
                    t = cand;
                    chosen.push(j);
                }
            }
            let tinv = t.inverse().expect("completed matrix is invertible");
            // last dim-r rows of t^{-1} kill the span and are the quotient map
            let mut q = Mat::zero(p, dim - r, dim);
            for i in 0..dim - r {
                for j in 0..dim {
                    q.set(i, j, tinv.get(r + i, j));
                }
            }
            // section: the chosen standard vectors
            let mut l = Mat::zero(p, dim, dim - r);
            for (k, &j) in chosen.iter().enumerate() {
                l.set(j, k, 1);
            }
            projections.push(q);
            sections.push(l);
        }
        let dims: Vec<usize> = projections.iter().map(|q| q.rows()).collect();
        let mut maps = Vec::new();
        for (ai, a) in self.algebra.quiver.arrows.iter().enumerate() {
            let (u, v) = (a.source - 1, a.target - 1);
            let m = projections[v].mul(&self.arrow_maps[ai]).mul(&sections[u]);
            maps.push(m);
        }
        let quot = Rep { algebra: self.algebra.clone(), dims, arrow_maps: maps };
        (quot, Morphism { blocks: projections }, sections)
    }

    /// Kernel of a morphism out of `self`, as a subrepresentation.
    pub fn kernel_of(&self, h: &Morphism) -> (Rep, Morphism) {
        let p = self.field();
        let spans: Vec<Mat> = h
            .blocks
            .iter()
            .enumerate()
            .map(|(v, b)| {
                let basis = b.kernel_basis();
                let mut m = Mat::zero(p, self.dims[v], basis.len());
                for (j, col) in basis.iter().enumerate() {
                    for (i, &x) in col.iter().enumerate() {
                        m.set(i, j, x);
                    }
                }
                m
            })
            .collect();
        self.subrep_from_spans(&spans)
    }

    /// Image of a morphism into `self`, as a subrepresentation.
    pub fn image_of(&self, h: &Morphism) -> (Rep, Morphism) {
        let spans: Vec<Mat> = h.blocks.iter().map(|b| b.clone()).collect();
        self.subrep_from_spans(&spans)
    }

    /// `rad M`: the subrepresentation spanned by all images of arrow maps,
    /// with its embedding.
    pub fn radical(&self) -> (Rep, Morphism) {
        let p = self.field();
        let nv = self.algebra.quiver.vertex_count;
        let mut spans: Vec<Mat> = (0..nv).map(|v| Mat::zero(p, self.dims[v], 0)).collect();
        for (ai, a) in self.algebra.quiver.arrows.iter().enumerate() {
            let v = a.target - 1;
            spans[v] = spans[v].hstack(&self.arrow_maps[ai]);
        }
        self.subrep_from_spans(&spans)
    }

    /// `M / rad M` with its projection.
    pub fn top(&self) -> (Rep, Morphism) {
        let (_, incl) = self.radical();
        self.quotient_by(&incl)
    }

    /// Minimal projective cover `P -> M`. The multiplicity of `P_i` is the
    /// dimension of the vertex-i component of the top.
    pub fn projective_cover(&self) -> Result<(Rep, Morphism)> {
        let p = self.field();
        let nv = self.algebra.quiver.vertex_count;
        let (_, incl) = self.radical();
        // section of the top projection: preimages of top basis vectors
        let (_top, proj) = self.quotient_by(&incl);
        let mut summands: Vec<Rep> = Vec::new();
        let mut generators: Vec<(Vertex, Vec<u64>)> = Vec::new();
        for v in 1..=nv {
            let q = &proj.blocks[v - 1];
            // solve q * x = e_k for each top basis vector
            for k in 0..q.rows() {
                let mut e = vec![0u64; q.rows()];
                e[k] = 1;
                let x = q.solve(&e).expect("top projection is surjective");
                summands.push(Rep::projective(self.algebra.clone(), v)?);
                generators.push((v, x));
            }
        }
        let cover = direct_sum(&self.algebra, &summands)?;
        // hom P_i -> M sending e_i to the generator: path basis element p
        // maps to M_p(gen)
        let mut blocks: Vec<Mat> = (0..nv).map(|v| Mat::zero(p, self.dims[v], 0)).collect();
        for (v, gen) in &generators {
            let paths = self.algebra.paths_from(*v);
            // per-vertex columns in the same order as Rep::projective
            for w in 1..=nv {
                let mut cols = Mat::zero(p, self.dims[w - 1], 0);
                for path in paths.iter().filter(|q| q.target() == w) {
                    let action = self.path_matrix(path);
                    let img = action.mul_vec(gen);
                    let mut c = Mat::zero(p, self.dims[w - 1], 1);
                    for (i, &x) in img.iter().enumerate() {
                        c.set(i, 0, x);
                    }
                    cols = cols.hstack(&c);
                }
                blocks[w - 1] = blocks[w - 1].hstack(&cols);
            }
        }
        let epi = Morphism { blocks };
        debug_assert!(epi.is_surjective(), "projective cover must be surjective");
        Ok((cover, epi))
    }

    /// `Omega M`: kernel of the projective cover.
    pub fn syzygy(&self) -> Result<Rep> {
        let (cover, epi) = self.projective_cover()?;
        let (ker, _) = cover.kernel_of(&epi);
        Ok(ker)
    }
}

/// Block-diagonal direct sum; the zero module is the empty sum.
pub fn direct_sum(algebra: &AlgebraRef, reps: &[Rep]) -> Result<Rep> {
    let p = algebra.char_p;
    let nv = algebra.quiver.vertex_count;
    for r in reps {
        if !same_algebra(&r.algebra, algebra) {
            return Err(Error::AlgebraMismatch);
        }
    }
    let mut dims = vec![0usize; nv];
    for r in reps {
        for v in 0..nv {
            dims[v] += r.dims[v];
        }
    }
    let mut maps = Vec::new();
    for (ai, a) in algebra.quiver.arrows.iter().enumerate() {
        let (u, v) = (a.source - 1, a.target - 1);
        let mut m = Mat::zero(p, dims[v], dims[u]);
        let mut roff = 0;
        let mut coff = 0;
        for r in reps {
            let b = &r.arrow_maps[ai];
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    m.set(roff + i, coff + j, b.get(i, j));
                }
            }
            roff += r.dims[v];
            coff += r.dims[u];
        }
        maps.push(m);
    }
    Ok(Rep { algebra: algebra.clone(), dims, arrow_maps: maps })
}

/// Inclusion of the `k`-th summand into the direct sum.
pub fn summand_inclusion(algebra: &AlgebraRef, reps: &[Rep], k: usize) -> Morphism {
    let p = algebra.char_p;
    let nv = algebra.quiver.vertex_count;
    let total: Vec<usize> = (0..nv).map(|v| reps.iter().map(|r| r.dims[v]).sum()).collect();
    let offsets: Vec<usize> =
        (0..nv).map(|v| reps[..k].iter().map(|r| r.dims[v]).sum()).collect();
    let blocks = (0..nv)
        .map(|v| {
            let mut m = Mat::zero(p, total[v], reps[k].dims[v]);
            for j in 0..reps[k].dims[v] {
                m.set(offsets[v] + j, j, 1);
            }
            m
        })
        .collect();
    Morphism { blocks }
}

/// Projection of the direct sum onto the `k`-th summand.
pub fn summand_projection(algebra: &AlgebraRef, reps: &[Rep], k: usize) -> Morphism {
    let incl = summand_inclusion(algebra, reps, k);
    Morphism { blocks: incl.blocks.iter().map(|b| b.transpose()).collect() }
}

fn next_coords(coords: &mut [u64], p: u64) -> bool {
    for c in coords.iter_mut() {
        *c += 1;
        if *c < p {
            return true;
        }
        *c = 0;
    }
    false
}

/// Isomorphism test. Deterministic enumeration of the hom space when small
/// enough; otherwise seeded random sampling with a decomposition-matching
/// fallback.
pub fn is_isomorphic(m: &Rep, n: &Rep, rng: &mut ChaCha8Rng) -> Result<bool> {
    if !same_algebra(&m.algebra, &n.algebra) {
        return Err(Error::AlgebraMismatch);
    }
    if m.dims != n.dims {
        return Ok(false);
    }
    if m.is_zero() {
        return Ok(true);
    }
    let p = m.field();
    let hom = hom_space(m, n)?;
    if hom.dim() == 0 {
        return Ok(false);
    }
    if enumerable(p, hom.dim()) {
        let mut coords = vec![0u64; hom.dim()];
        while next_coords(&mut coords, p) {
            let h = Morphism::from_coords(&hom.basis, &coords, m, n);
            if h.is_invertible() {
                return Ok(true);
            }
        }
        return Ok(false);
    }
    for _ in 0..256 {
        let coords: Vec<u64> = (0..hom.dim()).map(|_| rng.gen_range(0..p)).collect();
        let h = Morphism::from_coords(&hom.basis, &coords, m, n);
        if h.is_invertible() {
            return Ok(true);
        }
    }
    // derandomized fallback: match indecomposable summands
    let dm = decompose(m, rng)?;
    let dn = decompose(n, rng)?;
    if dm.len() == 1 && dm[0].1 == 1 && dn.len() == 1 && dn[0].1 == 1 {
        // both indecomposable: an iso between indecomposables of equal
        // dimension vectors exists iff a unit exists in the hom space, and
        // units are dense there; the sampling above decides.
        return Ok(false);
    }
    summand_lists_match(&dm, &dn, rng)
}

fn summand_lists_match(
    a: &[(Rep, usize)],
    b: &[(Rep, usize)],
    rng: &mut ChaCha8Rng,
) -> Result<bool> {
    if a.iter().map(|x| x.1).sum::<usize>() != b.iter().map(|x| x.1).sum::<usize>() {
        return Ok(false);
    }
    let mut used = vec![false; b.len()];
    for (rep, mult) in a {
        let mut found = false;
        for (j, (other, omult)) in b.iter().enumerate() {
            if used[j] || mult != omult {
                continue;
            }
            if is_isomorphic(rep, other, rng)? {
                used[j] = true;
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An indecomposable summand with its inclusion into the ambient module.
pub struct Summand {
    pub rep: Rep,
    pub inclusion: Morphism,
}

/// Full decomposition into pairwise non-isomorphic indecomposables with
/// multiplicities.
pub fn decompose(m: &Rep, rng: &mut ChaCha8Rng) -> Result<Vec<(Rep, usize)>> {
    let pieces = decompose_summands(m, rng)?;
    let mut out: Vec<(Rep, usize)> = Vec::new();
    for s in pieces {
        let mut merged = false;
        for (rep, mult) in out.iter_mut() {
            if is_isomorphic(rep, &s.rep, rng)? {
                *mult += 1;
                merged = true;
                break;
            }
        }
        if !merged {
            out.push((s.rep, 1));
        }
    }
    Ok(out)
}

/// Decomposition keeping one entry per indecomposable summand copy, each
/// with its inclusion into `m`. Summand order is deterministic for a fixed
/// seed.
pub fn decompose_summands(m: &Rep, rng: &mut ChaCha8Rng) -> Result<Vec<Summand>> {
    if m.is_zero() {
        return Ok(Vec::new());
    }
    let end = hom_space(m, m)?;
    if end.dim() == 1 {
        return Ok(vec![Summand { rep: m.clone(), inclusion: Morphism::identity(m) }]);
    }
    // try Fitting splits over basis elements, then seeded random combos
    if let Some((a, ia, b, ib)) = find_fitting_split(m, &end, rng)? {
        let mut out = Vec::new();
        for s in decompose_summands(&a, rng)? {
            out.push(Summand { inclusion: ia.compose(&s.inclusion), rep: s.rep });
        }
        for s in decompose_summands(&b, rng)? {
            out.push(Summand { inclusion: ib.compose(&s.inclusion), rep: s.rep });
        }
        return Ok(out);
    }
    // certify indecomposability
    let p = m.field();
    if enumerable(p, end.dim()) {
        if let Some(e) = find_idempotent_exhaustive(m, &end) {
            let (ker, ik) = m.kernel_of(&e);
            let (im, ii) = m.image_of(&e);
            let mut out = Vec::new();
            for s in decompose_summands(&ker, rng)? {
                out.push(Summand { inclusion: ik.compose(&s.inclusion), rep: s.rep });
            }
            for s in decompose_summands(&im, rng)? {
                out.push(Summand { inclusion: ii.compose(&s.inclusion), rep: s.rep });
            }
            return Ok(out);
        }
        return Ok(vec![Summand { rep: m.clone(), inclusion: Morphism::identity(m) }]);
    }
    // beyond the enumeration cap: extended seeded probing already happened
    // in find_fitting_split; treat as indecomposable
    Ok(vec![Summand { rep: m.clone(), inclusion: Morphism::identity(m) }])
}

/// Search for an endomorphism whose Fitting decomposition splits `m`.
/// Returns the two pieces with inclusions.
fn find_fitting_split(
    m: &Rep,
    end: &HomSpace,
    rng: &mut ChaCha8Rng,
) -> Result<Option<(Rep, Morphism, Rep, Morphism)>> {
    let p = m.field();
    let d = m.total_dim();
    let try_phi = |phi: &Morphism| -> Option<(Rep, Morphism, Rep, Morphism)> {
        // phi^k for k >= dim has stable kernel and image
        let mut pow = phi.clone();
        let mut k = 1usize;
        while k < d {
            pow = pow.compose(&pow);
            k *= 2;
        }
        let (ker, ik) = m.kernel_of(&pow);
        if ker.is_zero() || ker.total_dim() == m.total_dim() {
            return None;
        }
        let (im, ii) = m.image_of(&pow);
        debug_assert_eq!(ker.total_dim() + im.total_dim(), m.total_dim());
        Some((ker, ik, im, ii))
    };
    for h in &end.basis {
        if let Some(split) = try_phi(h) {
            return Ok(Some(split));
        }
    }
    for i in 0..end.basis.len() {
        for j in i + 1..end.basis.len() {
            if let Some(split) = try_phi(&end.basis[i].add(&end.basis[j])) {
                return Ok(Some(split));
            }
        }
    }
    let attempts = if enumerable(p, end.dim()) { 64 } else { 512 };
    for _ in 0..attempts {
        let coords: Vec<u64> = (0..end.dim()).map(|_| rng.gen_range(0..p)).collect();
        let phi = Morphism::from_coords(&end.basis, &coords, m, m);
        if let Some(split) = try_phi(&phi) {
            return Ok(Some(split));
        }
    }
    Ok(None)
}

/// Exhaustive search for a nontrivial idempotent endomorphism.
fn find_idempotent_exhaustive(m: &Rep, end: &HomSpace) -> Option<Morphism> {
    let p = m.field();
    let id = Morphism::identity(m);
    let mut coords = vec![0u64; end.dim()];
    while next_coords(&mut coords, p) {
        let e = Morphism::from_coords(&end.basis, &coords, m, m);
        if e.compose(&e) == e && !e.is_zero() && e != id {
            return Some(e);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures;
    use rand::SeedableRng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0x4954_5f44)
    }

    #[test]
    fn projective_dims() {
        let a2 = fixtures::a2(2);
        assert_eq!(Rep::projective(a2.clone(), 1).unwrap().dims, vec![1, 1]);
        assert_eq!(Rep::projective(a2.clone(), 2).unwrap().dims, vec![0, 1]);
        let l2 = fixtures::l2(2);
        assert_eq!(Rep::projective(l2, 1).unwrap().dims, vec![2]);
    }

    #[test]
    fn injective_dims() {
        let a2 = fixtures::a2(2);
        assert_eq!(Rep::injective(a2.clone(), 2).unwrap().dims, vec![1, 1]);
        assert_eq!(Rep::injective(a2, 1).unwrap().dims, vec![1, 0]);
        let l2 = fixtures::l2(2);
        assert_eq!(Rep::injective(l2, 1).unwrap().dims, vec![2]);
    }

    #[test]
    fn hom_space_dims_over_a2() {
        let a2 = fixtures::a2(2);
        let s1 = Rep::simple(a2.clone(), 1).unwrap();
        let s2 = Rep::simple(a2.clone(), 2).unwrap();
        assert_eq!(hom_space(&s1, &s1).unwrap().dim(), 1);
        assert_eq!(hom_space(&s1, &s2).unwrap().dim(), 0);
        let z = Rep::zero(a2);
        assert_eq!(hom_space(&z, &s1).unwrap().dim(), 0);
    }

    #[test]
    fn radical_of_projective() {
        let a2 = fixtures::a2(2);
        let p1 = Rep::projective(a2.clone(), 1).unwrap();
        let (rad, _) = p1.radical();
        assert_eq!(rad.dims, vec![0, 1]);
        let s1 = Rep::simple(a2, 1).unwrap();
        assert!(s1.radical().0.is_zero());
        let l2 = fixtures::l2(2);
        let reg = Rep::projective(l2, 1).unwrap();
        assert_eq!(reg.radical().0.dims, vec![1]);
    }

    #[test]
    fn projective_cover_of_simple() {
        let a2 = fixtures::a2(2);
        let s1 = Rep::simple(a2.clone(), 1).unwrap();
        let (cover, epi) = s1.projective_cover().unwrap();
        assert_eq!(cover.dims, vec![1, 1]);
        assert!(epi.is_surjective());
        let (ker, _) = cover.kernel_of(&epi);
        assert_eq!(ker.dims, vec![0, 1]);
    }

    #[test]
    fn cover_of_projective_is_identity_like() {
        let a2 = fixtures::a2(2);
        let p1 = Rep::projective(a2.clone(), 1).unwrap();
        let (cover, epi) = p1.projective_cover().unwrap();
        assert_eq!(cover.dims, p1.dims);
        let (ker, _) = cover.kernel_of(&epi);
        assert!(ker.is_zero());
        let z = Rep::zero(a2);
        let (cz, _) = z.projective_cover().unwrap();
        assert!(cz.is_zero());
    }

    #[test]
    fn syzygy_examples() {
        let a2 = fixtures::a2(2);
        let s1 = Rep::simple(a2.clone(), 1).unwrap();
        let p2 = Rep::projective(a2.clone(), 2).unwrap();
        let mut r = rng();
        assert!(is_isomorphic(&s1.syzygy().unwrap(), &p2, &mut r).unwrap());
        // k[x]/x^2 periodicity
        let l2 = fixtures::l2(2);
        let s = Rep::simple(l2, 1).unwrap();
        assert!(is_isomorphic(&s.syzygy().unwrap(), &s, &mut r).unwrap());
        // syzygy of a projective vanishes
        let p1 = Rep::projective(a2, 1).unwrap();
        assert!(p1.syzygy().unwrap().is_zero());
    }

    #[test]
    fn pd_s1_is_2_over_n3() {
        let n3 = fixtures::n3(2);
        let s1 = Rep::simple(n3.clone(), 1).unwrap();
        let o1 = s1.syzygy().unwrap();
        let s2 = Rep::simple(n3.clone(), 2).unwrap();
        let mut r = rng();
        assert!(is_isomorphic(&o1, &s2, &mut r).unwrap());
        let o2 = o1.syzygy().unwrap();
        let p3 = Rep::projective(n3, 3).unwrap();
        assert!(is_isomorphic(&o2, &p3, &mut r).unwrap());
        assert!(o2.syzygy().unwrap().is_zero());
    }

    #[test]
    fn direct_sum_and_iso_permutation() {
        let a2 = fixtures::a2(2);
        let s1 = Rep::simple(a2.clone(), 1).unwrap();
        let s2 = Rep::simple(a2.clone(), 2).unwrap();
        let ab = direct_sum(&a2, &[s1.clone(), s2.clone()]).unwrap();
        let ba = direct_sum(&a2, &[s2, s1.clone()]).unwrap();
        assert_eq!(ab.dims, vec![1, 1]);
        assert!(ab.arrow_maps[0].is_zero());
        let mut r = rng();
        assert!(is_isomorphic(&ab, &ba, &mut r).unwrap());
        // P_1 is not S1 + S2: the arrow map rank differs under every hom
        let p1 = Rep::projective(a2.clone(), 1).unwrap();
        assert!(!is_isomorphic(&p1, &ab, &mut r).unwrap());
        assert!(is_isomorphic(&s1, &s1, &mut r).unwrap());
        // empty sum is the zero module
        assert!(direct_sum(&a2, &[]).unwrap().is_zero());
    }

    #[test]
    fn decompose_examples() {
        let a2 = fixtures::a2(2);
        let s1 = Rep::simple(a2.clone(), 1).unwrap();
        let mut r = rng();
        let d = decompose(&direct_sum(&a2, &[s1.clone(), s1.clone()]).unwrap(), &mut r).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].1, 2);
        let p1 = Rep::projective(a2.clone(), 1).unwrap();
        let d = decompose(&p1, &mut r).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].1, 1);
    }

    #[test]
    fn decompose_regular_n3() {
        let n3 = fixtures::n3(2);
        let regular = direct_sum(
            &n3,
            &[
                Rep::projective(n3.clone(), 1).unwrap(),
                Rep::projective(n3.clone(), 2).unwrap(),
                Rep::projective(n3.clone(), 3).unwrap(),
            ],
        )
        .unwrap();
        let mut r = rng();
        let d = decompose(&regular, &mut r).unwrap();
        assert_eq!(d.len(), 3);
        assert!(d.iter().all(|(_, m)| *m == 1));
    }

    #[test]
    fn hom_additivity() {
        let n3 = fixtures::n3(3);
        let s1 = Rep::simple(n3.clone(), 1).unwrap();
        let s2 = Rep::simple(n3.clone(), 2).unwrap();
        let p1 = Rep::projective(n3.clone(), 1).unwrap();
        let sum = direct_sum(&n3, &[s1.clone(), s2.clone()]).unwrap();
        let lhs = hom_space(&sum, &p1).unwrap().dim();
        let rhs = hom_space(&s1, &p1).unwrap().dim() + hom_space(&s2, &p1).unwrap().dim();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn syzygy_respects_direct_sums() {
        let n3 = fixtures::n3(2);
        let s1 = Rep::simple(n3.clone(), 1).unwrap();
        let s2 = Rep::simple(n3.clone(), 2).unwrap();
        let sum = direct_sum(&n3, &[s1.clone(), s2.clone()]).unwrap();
        let lhs = sum.syzygy().unwrap();
        let rhs = direct_sum(&n3, &[s1.syzygy().unwrap(), s2.syzygy().unwrap()]).unwrap();
        let mut r = rng();
        assert!(is_isomorphic(&lhs, &rhs, &mut r).unwrap());
    }

    #[test]
    fn projective_mod_radical() {
        let l3 = fixtures::l3(2);
        let m2 = Rep::projective_mod_radical(l3.clone(), 1, 2).unwrap();
        assert_eq!(m2.dims, vec![2]);
        let m1 = Rep::projective_mod_radical(l3, 1, 1).unwrap();
        assert_eq!(m1.dims, vec![1]);
    }
}
