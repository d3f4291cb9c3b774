//! The relative exact structure `F = F_{add(E)}` induced by a generator
//! `E = A (+) G`: F-exactness and F-projectivity tests, minimal right
//! approximations, relative syzygies and relative Ext dimensions, plus the
//! pullback / pushout / Baer-sum constructions used by the closure suite.

use crate::algebra::{same_algebra, AlgebraRef};
use crate::error::{Error, Result};
use crate::exactlin::{coords_in_basis, Mat};
use crate::rep::{
    decompose, direct_sum, hom_space, is_isomorphic, morphism_coords, summand_inclusion,
    summand_projection, HomSpace, Morphism, Rep,
};
use rand_chacha::ChaCha8Rng;

/// The structure `F = F_{add(E)}` for `E = A (+) G`. Generators are the
/// pairwise non-isomorphic indecomposable summands of `E`; every `P_i` is
/// among them, so F has enough projectives and approximations are
/// surjective module maps.
pub struct RelStructure {
    pub algebra: AlgebraRef,
    pub generators: Vec<Rep>,
}

impl RelStructure {
    /// `G = 0`: the split structure, with `E = A`.
    pub fn trivial(algebra: AlgebraRef) -> Result<RelStructure> {
        RelStructure::new(algebra, &[], &mut crate::default_rng())
    }

    /// Build from the complement `G` given as a list of modules; each is
    /// decomposed and deduplicated against the projectives.
    pub fn new(algebra: AlgebraRef, g: &[Rep], rng: &mut ChaCha8Rng) -> Result<RelStructure> {
        let mut generators = Vec::new();
        for v in 1..=algebra.quiver.vertex_count {
            generators.push(Rep::projective(algebra.clone(), v)?);
        }
        for m in g {
            if !same_algebra(&m.algebra, &algebra) {
                return Err(Error::AlgebraMismatch);
            }
            for (indec, _) in decompose(m, rng)? {
                let mut seen = false;
                for existing in &generators {
                    if is_isomorphic(existing, &indec, rng)? {
                        seen = true;
                        break;
                    }
                }
                if !seen {
                    generators.push(indec);
                }
            }
        }
        Ok(RelStructure { algebra, generators })
    }

    /// `E = A (+) G` with multiplicities collapsed.
    pub fn generator_module(&self) -> Rep {
        direct_sum(&self.algebra, &self.generators).expect("generators share the algebra")
    }
}

/// A short exact sequence `0 -> sub -> mid -> quot -> 0`.
pub struct Ses {
    pub sub: Rep,
    pub mid: Rep,
    pub quot: Rep,
    pub inj: Morphism,
    pub epi: Morphism,
}

impl Ses {
    pub fn new(sub: Rep, mid: Rep, quot: Rep, inj: Morphism, epi: Morphism) -> Result<Ses> {
        if !same_algebra(&sub.algebra, &mid.algebra) || !same_algebra(&mid.algebra, &quot.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        if !inj.is_valid(&sub, &mid) || !epi.is_valid(&mid, &quot) {
            return Err(Error::Invalid("sequence maps are not module homomorphisms".into()));
        }
        if !inj.is_injective() {
            return Err(Error::Invalid("left map of sequence is not injective".into()));
        }
        if !epi.is_surjective() {
            return Err(Error::Invalid("right map of sequence is not surjective".into()));
        }
        if !epi.compose(&inj).is_zero() {
            return Err(Error::Invalid("sequence does not compose to zero".into()));
        }
        if mid.total_dim() != sub.total_dim() + quot.total_dim() {
            return Err(Error::Invalid("sequence dimensions do not add up".into()));
        }
        Ok(Ses { sub, mid, quot, inj, epi })
    }

    /// The split sequence `0 -> x -> x (+) z -> z -> 0`.
    pub fn split(x: &Rep, z: &Rep) -> Result<Ses> {
        let algebra = x.algebra.clone();
        let parts = [x.clone(), z.clone()];
        let mid = direct_sum(&algebra, &parts)?;
        let inj = summand_inclusion(&algebra, &parts, 0);
        let epi = summand_projection(&algebra, &parts, 1);
        Ses::new(x.clone(), mid, z.clone(), inj, epi)
    }

    /// Complete a surjection to a short exact sequence via its kernel.
    pub fn from_epi(mid: &Rep, quot: &Rep, epi: &Morphism) -> Result<Ses> {
        let (ker, incl) = mid.kernel_of(epi);
        Ses::new(ker, mid.clone(), quot.clone(), incl, epi.clone())
    }
}

/// `Hom(E, mid) -> Hom(E, quot)` surjective for every generator.
pub fn is_f_exact(f: &RelStructure, s: &Ses) -> Result<bool> {
    if !same_algebra(&s.mid.algebra, &f.algebra) {
        return Err(Error::AlgebraMismatch);
    }
    let p = f.algebra.char_p;
    for e in &f.generators {
        let from = hom_space(e, &s.mid)?;
        let to = hom_space(e, &s.quot)?;
        if to.dim() == 0 {
            continue;
        }
        let cols: Vec<Vec<u64>> = from
            .basis
            .iter()
            .map(|h| morphism_coords(&to.basis, &s.epi.compose(h), p))
            .collect();
        let mut m = Mat::zero(p, to.dim(), cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        if m.rank() < to.dim() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership in `add(E)`: every indecomposable summand isomorphic to a
/// generator.
pub fn is_f_projective(f: &RelStructure, m: &Rep, rng: &mut ChaCha8Rng) -> Result<bool> {
    if !same_algebra(&m.algebra, &f.algebra) {
        return Err(Error::AlgebraMismatch);
    }
    for (indec, _) in decompose(m, rng)? {
        let mut found = false;
        for e in &f.generators {
            if is_isomorphic(e, &indec, rng)? {
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

/// One source copy of a generator in an approximation.
struct ApproxCopy {
    generator: usize,
    hom: Morphism,
}

/// Minimal right `add(E)`-approximation of `m`: starts from one copy of
/// `E_i` per basis element of `Hom(E_i, m)` and greedily deletes copies (in
/// generator order, then basis order) while `Hom(E, -)`-surjectivity onto
/// `Hom(E, m)` survives. The result is surjective as a module map since all
/// `P_i` are generators.
pub fn min_right_approx(f: &RelStructure, m: &Rep) -> Result<(Rep, Morphism)> {
    if !same_algebra(&m.algebra, &f.algebra) {
        return Err(Error::AlgebraMismatch);
    }
    let p = f.algebra.char_p;
    let targets: Vec<HomSpace> =
        f.generators.iter().map(|e| hom_space(e, m)).collect::<Result<_>>()?;
    // Hom(E_j, E_i) tables, reused across surjectivity checks
    let n = f.generators.len();
    let mut cross: Vec<Vec<HomSpace>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut row = Vec::with_capacity(n);
        for i in 0..n {
            row.push(hom_space(&f.generators[j], &f.generators[i])?);
        }
        cross.push(row);
    }
    let mut copies: Vec<ApproxCopy> = Vec::new();
    for (gi, space) in targets.iter().enumerate() {
        for h in &space.basis {
            copies.push(ApproxCopy { generator: gi, hom: h.clone() });
        }
    }
    let surjective = |kept: &[&ApproxCopy]| -> bool {
        for (j, target) in targets.iter().enumerate() {
            if target.dim() == 0 {
                continue;
            }
            let mut vectors: Vec<Vec<u64>> = Vec::new();
            for copy in kept {
                for g in &cross[j][copy.generator].basis {
                    vectors.push(morphism_coords(&target.basis, &copy.hom.compose(g), p));
                }
            }
            let mut mat = Mat::zero(p, target.dim(), vectors.len());
            for (c, v) in vectors.iter().enumerate() {
                for (r, &x) in v.iter().enumerate() {
                    mat.set(r, c, x);
                }
            }
            if mat.rank() < target.dim() {
                return false;
            }
        }
        true
    };
    let mut keep = vec![true; copies.len()];
    for k in 0..copies.len() {
        keep[k] = false;
        let kept: Vec<&ApproxCopy> =
            copies.iter().zip(&keep).filter(|(_, &k)| k).map(|(c, _)| c).collect();
        if !surjective(&kept) {
            keep[k] = true;
        }
    }
    let kept: Vec<&ApproxCopy> =
        copies.iter().zip(&keep).filter(|(_, &k)| k).map(|(c, _)| c).collect();
    let sources: Vec<Rep> = kept.iter().map(|c| f.generators[c.generator].clone()).collect();
    let e0 = direct_sum(&f.algebra, &sources)?;
    let nv = f.algebra.quiver.vertex_count;
    let blocks = (0..nv)
        .map(|v| {
            let mut b = Mat::zero(p, m.dims[v], 0);
            for c in &kept {
                b = b.hstack(&c.hom.blocks[v]);
            }
            b
        })
        .collect();
    let g = Morphism { blocks };
    debug_assert!(g.is_valid(&e0, m));
    debug_assert!(g.is_surjective(), "approximation must be a module epimorphism");
    Ok((e0, g))
}

/// Relative syzygy: kernel of the minimal right approximation.
pub fn omega_f(f: &RelStructure, m: &Rep) -> Result<Rep> {
    let (e0, g) = min_right_approx(f, m)?;
    let (ker, _) = e0.kernel_of(&g);
    Ok(ker)
}

/// An F-projective resolution prefix `X_len -> ... -> X_1 -> X_0 -> m -> 0`.
pub struct Resolution {
    /// `terms[k] = X_k`.
    pub terms: Vec<Rep>,
    /// `maps[k]: X_{k+1} -> X_k` (composite of approximation and kernel
    /// inclusion).
    pub maps: Vec<Morphism>,
    /// The augmentation `X_0 -> m`.
    pub augmentation: Morphism,
    /// `syzygies[k] = Omega_F^{k+1}(m)` as computed along the way.
    pub syzygies: Vec<Rep>,
}

/// Iterate minimal right approximations: `terms` has `len + 1` entries.
pub fn resolution(f: &RelStructure, m: &Rep, len: usize) -> Result<Resolution> {
    let (x0, g0) = min_right_approx(f, m)?;
    let mut terms = vec![x0];
    let mut maps = Vec::new();
    let mut syzygies = Vec::new();
    // invariant: epi maps terms.last() onto the module resolved at this step
    let mut epi = g0.clone();
    for _ in 0..len {
        let last = terms.last().unwrap().clone();
        let (ker, incl) = last.kernel_of(&epi);
        let (xk, gk) = min_right_approx(f, &ker)?;
        maps.push(incl.compose(&gk));
        syzygies.push(ker);
        terms.push(xk);
        epi = gk;
    }
    Ok(Resolution { terms, maps, augmentation: g0, syzygies })
}

/// `dim_k Ext_F^deg(m, n)` from the F-projective resolution.
pub fn ext_f_dim(f: &RelStructure, m: &Rep, n: &Rep, deg: usize) -> Result<usize> {
    if !same_algebra(&n.algebra, &f.algebra) {
        return Err(Error::AlgebraMismatch);
    }
    let res = resolution(f, m, deg + 1)?;
    let p = f.algebra.char_p;
    let spaces: Vec<HomSpace> =
        res.terms.iter().map(|x| hom_space(x, n)).collect::<Result<_>>()?;
    // induced map Hom(X_k, n) -> Hom(X_{k+1}, n), h -> h . d_{k+1}
    let induced = |k: usize| -> Mat {
        let mut mat = Mat::zero(p, spaces[k + 1].dim(), spaces[k].dim());
        for (j, h) in spaces[k].basis.iter().enumerate() {
            let coords = morphism_coords(&spaces[k + 1].basis, &h.compose(&res.maps[k]), p);
            for (i, &x) in coords.iter().enumerate() {
                mat.set(i, j, x);
            }
        }
        mat
    };
    let kernel_dim = spaces[deg].dim() - induced(deg).rank();
    let image_dim = if deg == 0 { 0 } else { induced(deg - 1).rank() };
    Ok(kernel_dim - image_dim)
}

/// Pullback of the sequence along `h: c' -> quot`.
pub fn pullback(s: &Ses, h: &Morphism, cprime: &Rep) -> Result<Ses> {
    let algebra = s.mid.algebra.clone();
    if !same_algebra(&cprime.algebra, &algebra) {
        return Err(Error::AlgebraMismatch);
    }
    if !h.is_valid(cprime, &s.quot) {
        return Err(Error::Invalid("pullback map is not a module homomorphism".into()));
    }
    let parts = [s.mid.clone(), cprime.clone()];
    let d = direct_sum(&algebra, &parts)?;
    let to_quot = Morphism {
        blocks: s
            .epi
            .blocks
            .iter()
            .zip(&h.blocks)
            .map(|(e, f)| e.hstack(&f.neg()))
            .collect(),
    };
    let (bp, incl_d) = d.kernel_of(&to_quot);
    // sub -> bp: a -> (inj a, 0), expressed in the kernel basis
    let p = algebra.char_p;
    let inj_blocks = (0..algebra.quiver.vertex_count)
        .map(|v| {
            let zero = Mat::zero(p, cprime.dims[v], s.sub.dims[v]);
            let target = s.inj.blocks[v].vstack(&zero);
            if bp.dims[v] == 0 {
                Mat::zero(p, 0, s.sub.dims[v])
            } else {
                coords_in_basis(&incl_d.blocks[v], &target)
            }
        })
        .collect();
    let proj2 = summand_projection(&algebra, &parts, 1);
    let epi = proj2.compose(&incl_d);
    Ses::new(s.sub.clone(), bp, cprime.clone(), Morphism { blocks: inj_blocks }, epi)
}

/// Pushout of the sequence along `h: sub -> a'`.
pub fn pushout(s: &Ses, h: &Morphism, aprime: &Rep) -> Result<Ses> {
    let algebra = s.mid.algebra.clone();
    if !same_algebra(&aprime.algebra, &algebra) {
        return Err(Error::AlgebraMismatch);
    }
    if !h.is_valid(&s.sub, aprime) {
        return Err(Error::Invalid("pushout map is not a module homomorphism".into()));
    }
    let parts = [aprime.clone(), s.mid.clone()];
    let d = direct_sum(&algebra, &parts)?;
    // antidiagonal image of sub in a' (+) mid
    let j = Morphism {
        blocks: h
            .blocks
            .iter()
            .zip(&s.inj.blocks)
            .map(|(g, i)| g.vstack(&i.neg()))
            .collect(),
    };
    let (_, im_incl) = d.image_of(&j);
    let (bp, proj, sections) = d.quotient_with_section(&im_incl);
    let incl1 = summand_inclusion(&algebra, &parts, 0);
    let inj = proj.compose(&incl1);
    // bp -> quot: descend [0 | epi] through the section
    let p = algebra.char_p;
    let epi_blocks = (0..algebra.quiver.vertex_count)
        .map(|v| {
            let zero = Mat::zero(p, s.quot.dims[v], aprime.dims[v]);
            zero.hstack(&s.epi.blocks[v]).mul(&sections[v])
        })
        .collect();
    Ses::new(aprime.clone(), bp, s.quot.clone(), inj, Morphism { blocks: epi_blocks })
}

/// Baer sum of two sequences with the same ends (literally equal `sub` and
/// `quot` representations).
pub fn baer_sum(s1: &Ses, s2: &Ses) -> Result<Ses> {
    let algebra = s1.mid.algebra.clone();
    if !same_algebra(&s2.mid.algebra, &algebra) {
        return Err(Error::AlgebraMismatch);
    }
    if s1.sub.dims != s2.sub.dims || s1.quot.dims != s2.quot.dims {
        return Err(Error::Invalid("Baer sum requires equal end terms".into()));
    }
    let p = algebra.char_p;
    let nv = algebra.quiver.vertex_count;
    let parts = [s1.mid.clone(), s2.mid.clone()];
    let d = direct_sum(&algebra, &parts)?;
    // E0 = { (b1, b2) : epi1 b1 = epi2 b2 }
    let agree = Morphism {
        blocks: s1
            .epi
            .blocks
            .iter()
            .zip(&s2.epi.blocks)
            .map(|(a, b)| a.hstack(&b.neg()))
            .collect(),
    };
    let (e0, incl0) = d.kernel_of(&agree);
    // antidiagonal copy of sub inside E0
    let j_blocks: Vec<Mat> = (0..nv)
        .map(|v| {
            let t = s1.inj.blocks[v].vstack(&s2.inj.blocks[v].neg());
            if e0.dims[v] == 0 {
                Mat::zero(p, 0, s1.sub.dims[v])
            } else {
                coords_in_basis(&incl0.blocks[v], &t)
            }
        })
        .collect();
    let (_, im_incl) = e0.image_of(&Morphism { blocks: j_blocks });
    let (e, proj, sections) = e0.quotient_with_section(&im_incl);
    let inj_blocks: Vec<Mat> = (0..nv)
        .map(|v| {
            let zero = Mat::zero(p, s2.mid.dims[v], s1.sub.dims[v]);
            let t = s1.inj.blocks[v].vstack(&zero);
            let in_e0 = if e0.dims[v] == 0 {
                Mat::zero(p, 0, s1.sub.dims[v])
            } else {
                coords_in_basis(&incl0.blocks[v], &t)
            };
            proj.blocks[v].mul(&in_e0)
        })
        .collect();
    let epi_blocks: Vec<Mat> = (0..nv)
        .map(|v| {
            let row = s1.epi.blocks[v].hstack(&Mat::zero(p, s1.quot.dims[v], s2.mid.dims[v]));
            row.mul(&incl0.blocks[v]).mul(&sections[v])
        })
        .collect();
    Ses::new(
        s1.sub.clone(),
        e,
        s1.quot.clone(),
        Morphism { blocks: inj_blocks },
        Morphism { blocks: epi_blocks },
    )
}
