use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::rep::{AlgebraRep, REP_TOL};
use super::TwistedAlgebra;
use crate::error::{Error, Result};

/// `χ(γ) = Tr F(γ)` on the loops of the base, indexed like the objects of
/// the loop groupoid (loops in increasing morphism order).
#[derive(Clone, Debug)]
pub struct TwistedCharacter {
    values: Vec<Complex64>,
    loops: Vec<usize>,
    weights: Vec<f64>,
}

impl TwistedCharacter {
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Base morphism id of each value.
    pub fn loops(&self) -> &[usize] {
        &self.loops
    }

    pub fn at_loop(&self, gamma: usize) -> Option<Complex64> {
        self.loops.binary_search(&gamma).ok().map(|i| self.values[i])
    }

    /// Largest entrywise distance to another character on the same loops.
    pub fn distance(&self, other: &TwistedCharacter) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// The character of `rep`, after checking `χ(hγh⁻¹) = τ(θ)([h]γ)·χ(γ)`
/// to within `1e-9`.
pub fn character(alg: &TwistedAlgebra, rep: &AlgebraRep) -> Result<TwistedCharacter> {
    let g = alg.base();
    let (lg, tau) = alg.transgressed();
    let lgg = lg.groupoid();
    let loops: Vec<usize> = (0..lgg.num_objects()).map(|o| lg.object_loop(o)).collect();
    let values: Vec<Complex64> = loops.iter().map(|&l| rep.block(l).trace()).collect();
    let mut worst: f64 = 0.0;
    for k in 0..lgg.num_morphisms() {
        let (o, o2) = (lgg.src(k), lgg.dst(k));
        let r = (values[o2] - tau.value(&[k]).to_complex() * values[o]).norm();
        worst = worst.max(r);
    }
    if worst > REP_TOL {
        return Err(Error::SectionProperty(worst));
    }
    let weights = loops.iter().map(|&l| 1.0 / g.out_degree(g.src(l)) as f64).collect();
    Ok(TwistedCharacter { values, loops, weights })
}

/// `⟨χ₁, χ₂⟩ = Σ_γ conj(χ₁(γ)) χ₂(γ) / |γ→|`, the integral over the loop groupoid.
pub fn char_inner_product(c1: &TwistedCharacter, c2: &TwistedCharacter) -> Result<Complex64> {
    if c1.loops != c2.loops {
        return Err(Error::BaseMismatch);
    }
    Ok(c1.values.iter().zip(&c2.values).zip(&c1.weights).map(|((a, b), w)| a.conj() * b * *w).sum())
}

/// Dimension of the space of intertwiners `r1 → r2`, from the null space of
/// `Σ_b K_bᴴK_b` with `K_b = 1⊗ρ₂(b) − ρ₁(b)ᵀ⊗1`. It must match the
/// character inner product to within `1e-6`.
pub fn rep_hom_dimension(alg: &TwistedAlgebra, r1: &AlgebraRep, r2: &AlgebraRep) -> Result<usize> {
    let (d1, d2) = (r1.dimension(), r2.dimension());
    let n = d1 * d2;
    let dim = if n == 0 {
        0
    } else {
        let mut gram = DMatrix::<Complex64>::zeros(n, n);
        let i1 = DMatrix::<Complex64>::identity(d1, d1);
        let i2 = DMatrix::<Complex64>::identity(d2, d2);
        for b in 0..alg.dimension() {
            let k = i1.kronecker(&r2.full_matrix(alg, b)) - r1.full_matrix(alg, b).transpose().kronecker(&i2);
            gram += k.adjoint() * k;
        }
        let scale = gram.iter().map(|z| z.norm()).fold(1.0, f64::max);
        SymmetricEigen::new(gram).eigenvalues.iter().filter(|&&e| e.abs() < 1e-8 * scale).count()
    };
    let ip = char_inner_product(&character(alg, r1)?, &character(alg, r2)?)?;
    if (ip - Complex64::new(dim as f64, 0.0)).norm() > 1e-6 {
        return Err(Error::CrossCheck(format!("hom dimension {dim} but character inner product {ip}")));
    }
    Ok(dim)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::FiniteGroup;
    use crate::groupoid::Groupoid;

    #[test]
    fn regular_character_of_z2() {
        let b = Arc::new(Groupoid::delooping(&FiniteGroup::cyclic(2)));
        let a = TwistedAlgebra::untwisted(&b);
        let reg = AlgebraRep::regular(&a);
        let chi = character(&a, &reg).unwrap();
        assert_eq!(chi.values(), &[Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)]);
        let triv = AlgebraRep::new(&a, vec![1], vec![DMatrix::identity(1, 1); 2]).unwrap();
        let chi_t = character(&a, &triv).unwrap();
        assert!((char_inner_product(&chi, &chi_t).unwrap() - 1.0).norm() < 1e-12);
        assert_eq!(rep_hom_dimension(&a, &reg, &triv).unwrap(), 1);
        assert_eq!(rep_hom_dimension(&a, &triv, &triv).unwrap(), 1);
        let sign = AlgebraRep::new(&a, vec![1], vec![DMatrix::identity(1, 1), -DMatrix::identity(1, 1)]).unwrap();
        assert_eq!(rep_hom_dimension(&a, &sign, &triv).unwrap(), 0);
    }
}
