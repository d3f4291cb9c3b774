//! The Igusa-Todorov engine: iso-class registry, class vectors in the free
//! abelian group on non-F-projective indecomposables, syzygy orbits with
//! integer rank sequences, the relative phi function, and d-Divisions.

use crate::algebra::same_algebra;
use crate::error::{Error, Result};
use crate::exactlin::IntMat;
use crate::relstruct::{is_f_projective, omega_f, RelStructure};
use crate::rep::{decompose, direct_sum, is_isomorphic, Rep};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet, HashMap};

struct Entry {
    rep: Rep,
    f_projective: bool,
}

/// Registry of indecomposable iso-classes with dense first-seen IDs.
/// F-projective classes are registered too (so lookups are cached) but
/// never appear in class vectors.
pub struct Registry {
    entries: Vec<Entry>,
    omega_cache: HashMap<usize, ClassVector>,
}

/// An element of K_F(A): integer multiplicities over registry IDs, with
/// F-projective classes collapsed to zero and no explicit zeros stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ClassVector(BTreeMap<usize, BigInt>);

impl ClassVector {
    pub fn zero() -> ClassVector {
        ClassVector(BTreeMap::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    pub fn coeff(&self, id: usize) -> BigInt {
        self.0.get(&id).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn insert(&mut self, id: usize, mult: BigInt) {
        if mult.is_zero() {
            self.0.remove(&id);
        } else {
            self.0.insert(id, mult);
        }
    }

    /// `self += coeff * other`.
    pub fn add_scaled(&mut self, other: &ClassVector, coeff: &BigInt) {
        for (&id, m) in &other.0 {
            let v = self.coeff(id) + coeff * m;
            self.insert(id, v);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &BigInt)> + '_ {
        self.0.iter().map(|(&id, m)| (id, m))
    }
}

impl Registry {
    pub fn new() -> Registry {
        Registry { entries: Vec::new(), omega_cache: HashMap::new() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn representative(&self, id: usize) -> &Rep {
        &self.entries[id].rep
    }

    pub fn is_class_f_projective(&self, id: usize) -> bool {
        self.entries[id].f_projective
    }

    /// ID of an indecomposable, registering it on first sight.
    fn id_of(&mut self, f: &RelStructure, indec: &Rep, rng: &mut ChaCha8Rng) -> Result<usize> {
        for (id, e) in self.entries.iter().enumerate() {
            if is_isomorphic(&e.rep, indec, rng)? {
                return Ok(id);
            }
        }
        let f_projective = is_f_projective(f, indec, rng)?;
        self.entries.push(Entry { rep: indec.clone(), f_projective });
        Ok(self.entries.len() - 1)
    }

    /// `[m]` in K_F(A): decompose, register, drop F-projective summands.
    pub fn class_of(
        &mut self,
        f: &RelStructure,
        m: &Rep,
        rng: &mut ChaCha8Rng,
    ) -> Result<ClassVector> {
        if !same_algebra(&m.algebra, &f.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        let mut v = ClassVector::zero();
        for (indec, mult) in decompose(m, rng)? {
            let id = self.id_of(f, &indec, rng)?;
            if !self.entries[id].f_projective {
                let c = v.coeff(id) + BigInt::from(mult);
                v.insert(id, c);
            }
        }
        Ok(v)
    }

    /// `[Omega_F X]` for the class with the given ID, cached.
    fn omega_class(
        &mut self,
        f: &RelStructure,
        id: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<ClassVector> {
        if let Some(v) = self.omega_cache.get(&id) {
            return Ok(v.clone());
        }
        let rep = self.entries[id].rep.clone();
        let o = omega_f(f, &rep)?;
        let v = self.class_of(f, &o, rng)?;
        self.omega_cache.insert(id, v.clone());
        Ok(v)
    }

    /// Apply the syzygy operator linearly to a class vector.
    fn apply_omega(
        &mut self,
        f: &RelStructure,
        v: &ClassVector,
        rng: &mut ChaCha8Rng,
    ) -> Result<ClassVector> {
        let mut out = ClassVector::zero();
        for (id, mult) in v.clone().entries() {
            let o = self.omega_class(f, id, rng)?;
            out.add_scaled(&o, mult);
        }
        Ok(out)
    }
}

impl Default for Registry {
    fn default() -> Self {
        Registry::new()
    }
}

/// The syzygy orbit of the subgroup generated by the distinct
/// non-F-projective summands of a module.
pub struct Orbit {
    /// Registry IDs of the generators (level-0 support), ascending.
    pub base_ids: Vec<usize>,
    /// `levels[m][i] = [Omega_F^m X_i]`.
    pub levels: Vec<Vec<ClassVector>>,
    /// Integer rank of each level's matrix.
    pub ranks: Vec<usize>,
    /// Whether support closure plus the stabilization margin was reached.
    pub certified: bool,
}

fn level_rank(rows: &[ClassVector], columns: &[usize]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = IntMat::from_rows(
        rows.iter()
            .map(|r| columns.iter().map(|&c| r.coeff(c)).collect())
            .collect(),
    );
    m.rank()
}

/// Compute the orbit through certification or the horizon.
pub fn orbit(
    reg: &mut Registry,
    f: &RelStructure,
    m: &Rep,
    horizon: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Orbit> {
    if !same_algebra(&m.algebra, &f.algebra) {
        return Err(Error::AlgebraMismatch);
    }
    let base = reg.class_of(f, m, rng)?;
    let base_ids: Vec<usize> = base.support().collect();
    let mut row0 = Vec::new();
    for &id in &base_ids {
        let mut v = ClassVector::zero();
        v.insert(id, BigInt::from(1));
        row0.push(v);
    }
    // close the support under the syzygy operator, up to `horizon` rounds
    let mut closure: BTreeSet<usize> = base_ids.iter().copied().collect();
    let mut frontier = closure.clone();
    let mut closed_at: Option<usize> = None;
    for round in 1..=horizon {
        let mut new = BTreeSet::new();
        for &id in &frontier {
            for t in reg.omega_class(f, id, rng)?.support() {
                if !closure.contains(&t) {
                    new.insert(t);
                }
            }
        }
        if new.is_empty() {
            closed_at = Some(round - 1);
            break;
        }
        closure.extend(new.iter().copied());
        frontier = new;
    }
    let (depth, certified) = match closed_at {
        Some(m0) => (m0 + closure.len(), true),
        None => (horizon, false),
    };
    let columns: Vec<usize> = closure.iter().copied().collect();
    let mut levels = vec![row0];
    let mut ranks = vec![level_rank(&levels[0], &columns)];
    for _ in 0..depth {
        let prev = levels.last().unwrap().clone();
        let next: Vec<ClassVector> =
            prev.iter().map(|v| reg.apply_omega(f, v, rng)).collect::<Result<_>>()?;
        ranks.push(level_rank(&next, &columns));
        levels.push(next);
    }
    debug_assert!(ranks.windows(2).all(|w| w[0] >= w[1]), "rank sequence must be non-increasing");
    Ok(Orbit { base_ids, levels, ranks, certified })
}

pub struct PhiResult {
    pub value: usize,
    pub certified: bool,
    pub rank_sequence: Vec<usize>,
}

/// The relative Igusa-Todorov function: least level at which the integer
/// rank of the syzygy orbit stabilizes.
pub fn phi(
    reg: &mut Registry,
    f: &RelStructure,
    m: &Rep,
    horizon: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PhiResult> {
    let o = orbit(reg, f, m, horizon, rng)?;
    let last = *o.ranks.last().unwrap();
    let value = o.ranks.iter().position(|&r| r == last).unwrap();
    Ok(PhiResult { value, certified: o.certified, rank_sequence: o.ranks })
}

/// phi of the direct sum of a family (monotone over every member).
pub fn phi_dim(
    reg: &mut Registry,
    f: &RelStructure,
    family: &[Rep],
    horizon: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PhiResult> {
    let total = direct_sum(&f.algebra, family)?;
    phi(reg, f, &total, horizon, rng)
}

/// All indecomposables of a Nakayama algebra: `P_i / rad^k` for each vertex
/// `i` and `1 <= k <= dim P_i`.
pub fn nakayama_family(f: &RelStructure) -> Result<Vec<Rep>> {
    let algebra = &f.algebra;
    if !algebra.is_nakayama() {
        return Err(Error::NotNakayama);
    }
    let mut family = Vec::new();
    for v in 1..=algebra.quiver.vertex_count {
        let p = Rep::projective(algebra.clone(), v)?;
        for k in 1..=p.total_dim() {
            family.push(Rep::projective_mod_radical(algebra.clone(), v, k)?);
        }
    }
    Ok(family)
}

/// A relative d-Division witness: `add(x)` and `add(y)` are disjoint,
/// `[Omega^d x] = [Omega^d y]` and `[Omega^{d-1} x] != [Omega^{d-1} y]`.
pub struct Division {
    pub d: usize,
    pub x: Rep,
    pub y: Rep,
}

/// Find the deepest rank drop in the orbit and extract an integer kernel
/// vector witnessing it; absent iff the rank sequence never drops.
pub fn find_d_division(
    reg: &mut Registry,
    f: &RelStructure,
    m: &Rep,
    horizon: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Division>> {
    let o = orbit(reg, f, m, horizon, rng)?;
    let d = match (1..o.ranks.len()).rev().find(|&j| o.ranks[j] < o.ranks[j - 1]) {
        Some(d) => d,
        None => return Ok(None),
    };
    let columns: Vec<usize> = {
        let mut s = BTreeSet::new();
        for level in &o.levels {
            for row in level {
                s.extend(row.support());
            }
        }
        s.into_iter().collect()
    };
    let to_mat = |level: &[ClassVector]| {
        IntMat::from_rows(
            level
                .iter()
                .map(|r| columns.iter().map(|&c| r.coeff(c)).collect())
                .collect(),
        )
    };
    let level_d = to_mat(&o.levels[d]);
    let level_prev = to_mat(&o.levels[d - 1]);
    let mut witness: Option<Vec<BigInt>> = None;
    for v in level_d.left_kernel_basis() {
        // v * level_prev != 0 iff v leaves the previous kernel
        let nonzero = (0..level_prev.cols()).any(|j| {
            let mut acc = BigInt::zero();
            for (i, c) in v.iter().enumerate() {
                acc += c * level_prev.get(i, j);
            }
            !acc.is_zero()
        });
        if nonzero {
            witness = Some(v);
            break;
        }
    }
    let v = witness.expect("rank drop guarantees a new kernel vector");
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, c) in v.iter().enumerate() {
        let mult = c.abs().to_usize().ok_or_else(|| {
            Error::Invalid("division multiplicity exceeds machine range".into())
        })?;
        let rep = reg.representative(o.base_ids[i]).clone();
        let bucket = if c.is_positive() { &mut xs } else { &mut ys };
        for _ in 0..mult {
            bucket.push(rep.clone());
        }
    }
    let x = direct_sum(&f.algebra, &xs)?;
    let y = direct_sum(&f.algebra, &ys)?;
    Ok(Some(Division { d, x, y }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures;
    use crate::default_rng;

    #[test]
    fn class_vectors_collapse_projectives() {
        let a2 = fixtures::a2(2);
        let f = RelStructure::trivial(a2.clone()).unwrap();
        let mut reg = Registry::new();
        let mut rng = default_rng();
        let p1 = Rep::projective(a2.clone(), 1).unwrap();
        assert!(reg.class_of(&f, &p1, &mut rng).unwrap().is_zero());
        let s1 = Rep::simple(a2.clone(), 1).unwrap();
        let two = direct_sum(&a2, &[s1.clone(), s1.clone()]).unwrap();
        let v = reg.class_of(&f, &two, &mut rng).unwrap();
        assert_eq!(v.entries().count(), 1);
        let (_, mult) = v.entries().next().unwrap();
        assert_eq!(mult, &BigInt::from(2));
        let mixed = direct_sum(&a2, &[p1, s1]).unwrap();
        let w = reg.class_of(&f, &mixed, &mut rng).unwrap();
        let (_, mult) = w.entries().next().unwrap();
        assert_eq!(mult, &BigInt::from(1));
    }

    #[test]
    fn phi_of_f_projective_is_zero() {
        let a2 = fixtures::a2(2);
        let f = RelStructure::trivial(a2.clone()).unwrap();
        let mut reg = Registry::new();
        let mut rng = default_rng();
        let p1 = Rep::projective(a2, 1).unwrap();
        let r = phi(&mut reg, &f, &p1, 50, &mut rng).unwrap();
        assert_eq!(r.value, 0);
        assert!(r.certified);
        assert_eq!(r.rank_sequence, vec![0]);
    }

    #[test]
    fn phi_over_n3() {
        let n3 = fixtures::n3(2);
        let f = RelStructure::trivial(n3.clone()).unwrap();
        let mut reg = Registry::new();
        let mut rng = default_rng();
        let s1 = Rep::simple(n3.clone(), 1).unwrap();
        let s2 = Rep::simple(n3.clone(), 2).unwrap();
        let m = direct_sum(&n3, &[s1, s2]).unwrap();
        let r = phi(&mut reg, &f, &m, 50, &mut rng).unwrap();
        assert_eq!(r.value, 2);
        assert!(r.certified);
        assert_eq!(r.rank_sequence[0], 2);
        assert_eq!(*r.rank_sequence.last().unwrap(), 0);
    }

    #[test]
    fn phi_periodic_orbit_over_l3() {
        let l3 = fixtures::l3(2);
        let f = RelStructure::trivial(l3.clone()).unwrap();
        let mut reg = Registry::new();
        let mut rng = default_rng();
        let m1 = Rep::projective_mod_radical(l3.clone(), 1, 1).unwrap();
        let m2 = Rep::projective_mod_radical(l3.clone(), 1, 2).unwrap();
        let m = direct_sum(&l3, &[m1, m2]).unwrap();
        let r = phi(&mut reg, &f, &m, 50, &mut rng).unwrap();
        // Omega swaps the two classes, so the rank stays 2 forever
        assert_eq!(r.value, 0);
        assert!(r.certified);
        assert!(r.rank_sequence.iter().all(|&x| x == 2));
        // and no division exists
        assert!(find_d_division(&mut reg, &f, &m, 50, &mut rng).unwrap().is_none());
    }

    #[test]
    fn division_over_n3_matches_phi() {
        let n3 = fixtures::n3(2);
        let f = RelStructure::trivial(n3.clone()).unwrap();
        let mut reg = Registry::new();
        let mut rng = default_rng();
        let s1 = Rep::simple(n3.clone(), 1).unwrap();
        let s2 = Rep::simple(n3.clone(), 2).unwrap();
        let m = direct_sum(&n3, &[s1, s2]).unwrap();
        let div = find_d_division(&mut reg, &f, &m, 50, &mut rng).unwrap().unwrap();
        assert_eq!(div.d, 2);
        // Omega^2 kills both sides; Omega^1 distinguishes them
        assert!(!div.x.is_zero() || !div.y.is_zero());
    }

    #[test]
    fn nakayama_phi_dims() {
        let mut rng = default_rng();
        for (alg, expected) in [
            (fixtures::l2(2), 0usize),
            (fixtures::l3(2), 0),
            (fixtures::n3(2), 2),
        ] {
            let f = RelStructure::trivial(alg).unwrap();
            let mut reg = Registry::new();
            let fam = nakayama_family(&f).unwrap();
            let r = phi_dim(&mut reg, &f, &fam, 50, &mut rng).unwrap();
            assert_eq!(r.value, expected);
            assert!(r.certified);
        }
    }

    #[test]
    fn finer_structure_trivializes_l2() {
        let l2 = fixtures::l2(2);
        let mut rng = default_rng();
        let s1 = Rep::simple(l2.clone(), 1).unwrap();
        let f = RelStructure::new(l2, &[s1], &mut rng).unwrap();
        let mut reg = Registry::new();
        let fam = nakayama_family(&f).unwrap();
        let r = phi_dim(&mut reg, &f, &fam, 50, &mut rng).unwrap();
        assert_eq!(r.value, 0);
        assert!(r.certified);
        assert_eq!(r.rank_sequence, vec![0]);
    }

    #[test]
    fn non_nakayama_family_is_rejected() {
        let q = crate::algebra::Quiver::new(2, vec![(1, 1, 2), (2, 1, 2)]).unwrap();
        let kron = crate::algebra::build_algebra(q, 2, vec![]).unwrap();
        let f = RelStructure::trivial(kron).unwrap();
        assert!(matches!(nakayama_family(&f), Err(Error::NotNakayama)));
    }
}
