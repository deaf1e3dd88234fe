//! Twisted groupoid algebras `^θℂ𝒢`, their representations and counts.

mod character;
mod counts;
mod decompose;
mod double;
mod elliptic;
mod induce;
mod rep;
mod sections;

use std::sync::{Arc, OnceLock};

pub use character::{char_inner_product, character, rep_hom_dimension, TwistedCharacter};
pub use counts::{
    centralizer_irrep_sum, count_irreps, double_rank_formula, double_rank_integral, double_rank_triple_sum,
    group_count_formula,
};
pub use decompose::{decompose, Decomposition, Irrep};
pub use double::{dpr_product, drinfeld_double, DrinfeldDouble};
pub use elliptic::{elliptic_character, EllipticRelation};
pub use induce::{dpr_induce, induce_all, restricted_algebra};
pub use rep::AlgebraRep;
pub use sections::{flat_sections, FlatSections};

use crate::cochain::{Cochain, Phase};
use crate::error::{Error, Result};
use crate::groupoid::{same_groupoid, Groupoid, LoopGroupoid};

/// `^θℂ𝒢`: basis `⟨g⟩` for morphisms `g`, with `⟨g₂⟩⟨g₁⟩ = θ(g₂,g₁)⟨g₂∘g₁⟩`
/// when composable and zero otherwise.
#[derive(Clone, Debug)]
pub struct TwistedAlgebra {
    base: Arc<Groupoid>,
    twist: Cochain,
    transgressed: OnceLock<(LoopGroupoid, Cochain)>,
}

impl TwistedAlgebra {
    /// Requires a normalized 2-cocycle; associativity and the unit are then
    /// verified on every basis triple.
    pub fn new(base: &Arc<Groupoid>, twist: Cochain) -> Result<Self> {
        if twist.degree() != 2 {
            return Err(Error::Degree { expected: "2".into(), found: twist.degree() });
        }
        if !same_groupoid(twist.base(), base) {
            return Err(Error::BaseMismatch);
        }
        twist.require_cocycle()?;
        twist.require_normalized()?;
        let alg = Self { base: base.clone(), twist, transgressed: OnceLock::new() };
        alg.verify_associative()?;
        alg.verify_unit()?;
        Ok(alg)
    }

    /// The untwisted groupoid algebra.
    pub fn untwisted(base: &Arc<Groupoid>) -> Self {
        Self::new(base, Cochain::trivial(base, 2)).expect("trivial twist")
    }

    fn verify_associative(&self) -> Result<()> {
        let g = &self.base;
        for a in 0..g.num_morphisms() {
            for &b in g.out_morphisms(g.dst(a)) {
                let (p1, ba) = self.product(b, a).unwrap();
                for &c in g.out_morphisms(g.dst(b)) {
                    let (p2, left) = self.product(c, ba).unwrap();
                    let (q1, cb) = self.product(c, b).unwrap();
                    let (q2, right) = self.product(cb, a).unwrap();
                    if left != right || p1 * p2 != q1 * q2 {
                        return Err(Error::CrossCheck(format!("associativity fails on ({c}, {b}, {a})")));
                    }
                }
            }
        }
        Ok(())
    }

    fn verify_unit(&self) -> Result<()> {
        let g = &self.base;
        for m in 0..g.num_morphisms() {
            let left = self.product(g.id(g.dst(m)), m);
            let right = self.product(m, g.id(g.src(m)));
            if left != Some((Phase::ZERO, m)) || right != Some((Phase::ZERO, m)) {
                return Err(Error::CrossCheck(format!("unit fails on {m}")));
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Arc<Groupoid> {
        &self.base
    }

    pub fn twist(&self) -> &Cochain {
        &self.twist
    }

    pub fn dimension(&self) -> usize {
        self.base.num_morphisms()
    }

    /// `⟨m2⟩⟨m1⟩` as `(phase, basis element)`, or `None` for zero.
    #[inline]
    pub fn product(&self, m2: usize, m1: usize) -> Option<(Phase, usize)> {
        self.base.compose(m2, m1).map(|m| (self.twist.value(&[m2, m1]), m))
    }

    /// `⟨g⟩* = θ(g,g⁻¹)⁻¹⟨g⁻¹⟩`, extended conjugate-linearly.
    pub fn star(&self, g: usize) -> (Phase, usize) {
        let gi = self.base.inv(g);
        (self.twist.value(&[g, gi]).inv(), gi)
    }

    /// The loop groupoid of the base and `τ(θ)` on it, computed once.
    pub fn transgressed(&self) -> &(LoopGroupoid, Cochain) {
        self.transgressed.get_or_init(|| {
            let lg = LoopGroupoid::new(self.base.clone());
            let t = self.twist.transgress(&lg).expect("transgression of a verified cocycle");
            (lg, t)
        })
    }

    /// Dimension of the center, by exact elimination. A central element is
    /// supported on loops and its coefficients satisfy
    /// `c(hγh⁻¹)·θ(hγh⁻¹,h) = c(γ)·θ(h,γ)`; each orbit of loops contributes
    /// one dimension unless the relations force it to vanish.
    pub fn center_dimension(&self) -> usize {
        let g = &self.base;
        let loops = g.loops();
        let mut index = vec![usize::MAX; g.num_morphisms()];
        for (i, &l) in loops.iter().enumerate() {
            index[l] = i;
        }
        // Union-find with potentials: c(v) = c(root) · pot(v).
        let mut parent: Vec<usize> = (0..loops.len()).collect();
        let mut pot = vec![Phase::ZERO; loops.len()];
        let mut dead = vec![false; loops.len()];
        fn find(v: usize, parent: &mut [usize], pot: &mut [Phase]) -> (usize, Phase) {
            let mut path = Vec::new();
            let mut r = v;
            while parent[r] != r {
                path.push(r);
                r = parent[r];
            }
            // Compress: accumulate potentials from the root downwards.
            let mut acc = Phase::ZERO;
            for &u in path.iter().rev() {
                acc = acc * pot[u];
                pot[u] = acc;
                parent[u] = r;
            }
            (r, if v == r { Phase::ZERO } else { pot[v] })
        }
        for (i, &gamma) in loops.iter().enumerate() {
            for &h in g.out_morphisms(g.src(gamma)) {
                let conj = g.conjugate(h, gamma);
                let j = index[conj];
                // c(conj) = c(γ) · θ(h,γ)/θ(conj,h)
                let w = self.twist.value(&[h, gamma]) / self.twist.value(&[conj, h]);
                let (ri, pi) = find(i, &mut parent, &mut pot);
                let (rj, pj) = find(j, &mut parent, &mut pot);
                if ri == rj {
                    if pj != pi * w {
                        dead[ri] = true;
                    }
                } else {
                    // c(rj)·pj = c(ri)·pi·w  ⇒  pot(rj) = pi·w/pj relative to ri.
                    parent[rj] = ri;
                    pot[rj] = pi * w / pj;
                    dead[ri] = dead[ri] || dead[rj];
                }
            }
        }
        (0..loops.len()).filter(|&v| parent[v] == v && !dead[v]).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::cochain::random::random_cocycle;
    use crate::group::FiniteGroup;

    #[test]
    fn group_algebra_of_z2_is_commutative() {
        let b = Arc::new(Groupoid::delooping(&FiniteGroup::cyclic(2)));
        let a = TwistedAlgebra::untwisted(&b);
        assert_eq!(a.product(1, 1), Some((Phase::ZERO, 0)));
        assert_eq!(a.product(0, 1), a.product(1, 0));
        assert_eq!(a.center_dimension(), 2);
    }

    #[test]
    fn klein_twist_anticommutes() {
        let (g, theta) = builtins::klein_theta_v();
        let a = TwistedAlgebra::new(theta.base(), theta.clone()).unwrap();
        let (x, y) = (2, 1);
        let (p, m) = a.product(x, y).unwrap();
        let (q, n) = a.product(y, x).unwrap();
        assert_eq!(m, n);
        assert_eq!(p / q, Phase::HALF);
        assert_eq!(g.mul(x, y), m);
        assert_eq!(a.center_dimension(), 1);
    }

    #[test]
    fn untwisted_double_of_s3() {
        let lg = LoopGroupoid::new(Arc::new(Groupoid::delooping(&FiniteGroup::symmetric(3).unwrap())));
        let a = TwistedAlgebra::untwisted(lg.groupoid());
        assert_eq!(a.dimension(), 36);
        assert_eq!(a.center_dimension(), 8);
    }

    #[test]
    fn center_dimension_is_class_count_for_untwisted_groups() {
        for g in [FiniteGroup::symmetric(3).unwrap(), FiniteGroup::dihedral(4).unwrap(), FiniteGroup::symmetric(4).unwrap()] {
            let b = Arc::new(Groupoid::delooping(&g));
            assert_eq!(TwistedAlgebra::untwisted(&b).center_dimension(), g.conjugacy_classes().len());
        }
    }

    #[test]
    fn coboundary_twist_keeps_center() {
        let g = FiniteGroup::dihedral(4).unwrap();
        let b = Arc::new(Groupoid::delooping(&g));
        for seed in 0..5 {
            let theta = random_cocycle(&b, 2, seed, None).unwrap();
            assert_eq!(TwistedAlgebra::new(&b, theta).unwrap().center_dimension(), 5);
        }
    }

    #[test]
    fn rejects_bad_twists() {
        let b = Arc::new(Groupoid::delooping(&FiniteGroup::cyclic(2)));
        let not_normal = Cochain::from_fn(&b, 2, |_| Phase::HALF);
        assert!(matches!(TwistedAlgebra::new(&b, not_normal), Err(Error::NotNormalized(_))));
        let z3 = Arc::new(Groupoid::delooping(&FiniteGroup::cyclic(3)));
        let not_closed = Cochain::from_fn(&z3, 2, |s| if s == [1, 2] { Phase::new(1, 3) } else { Phase::ZERO });
        assert!(matches!(TwistedAlgebra::new(&z3, not_closed), Err(Error::NotCocycle(_))));
    }

    #[test]
    fn trivial_group_gives_one_dimensional_algebra() {
        let b = Arc::new(Groupoid::delooping(&FiniteGroup::trivial()));
        let a = TwistedAlgebra::untwisted(&b);
        assert_eq!((a.dimension(), a.center_dimension()), (1, 1));
    }
}
