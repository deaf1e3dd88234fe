use nalgebra::DMatrix;
use num_complex::Complex64;

use super::TwistedAlgebra;
use crate::error::{Error, Result};

/// Residual allowed in the representation identities.
pub(crate) const REP_TOL: f64 = 1e-9;

/// A representation of `^θℂ𝒢`, equivalently a θ-twisted representation of
/// `𝒢`: a space `V_x` per object and a linear map `F(g): V_y → V_z` for
/// each `g: y → z`, with `F(g₂)F(g₁) = θ(g₂,g₁)F(g₂∘g₁)`.
#[derive(Clone, Debug)]
pub struct AlgebraRep {
    object_dims: Vec<usize>,
    offsets: Vec<usize>,
    blocks: Vec<DMatrix<Complex64>>,
}

pub(crate) fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl AlgebraRep {
    /// `blocks[g]` must be `dim V_{dst g} × dim V_{src g}`. The identities
    /// above and `F(Id_x) = 1` are checked to within `1e-9`.
    pub fn new(alg: &TwistedAlgebra, object_dims: Vec<usize>, blocks: Vec<DMatrix<Complex64>>) -> Result<Self> {
        let g = alg.base();
        if object_dims.len() != g.num_objects() || blocks.len() != g.num_morphisms() {
            return Err(Error::RepInvariant("one space per object and one map per morphism required".into()));
        }
        for (m, b) in blocks.iter().enumerate() {
            if b.shape() != (object_dims[g.dst(m)], object_dims[g.src(m)]) {
                return Err(Error::RepInvariant(format!("block of morphism {m} has the wrong shape")));
            }
        }
        let mut offsets = Vec::with_capacity(object_dims.len());
        let mut acc = 0;
        for &d in &object_dims {
            offsets.push(acc);
            acc += d;
        }
        let rep = Self { object_dims, offsets, blocks };
        rep.verify(alg)?;
        Ok(rep)
    }

    fn verify(&self, alg: &TwistedAlgebra) -> Result<()> {
        let g = alg.base();
        for x in 0..g.num_objects() {
            let e = &self.blocks[g.id(x)];
            if max_abs(&(e - DMatrix::identity(e.nrows(), e.ncols()))) > REP_TOL {
                return Err(Error::RepInvariant(format!("identity at object {x} acts nontrivially")));
            }
        }
        for m1 in 0..g.num_morphisms() {
            for &m2 in g.out_morphisms(g.dst(m1)) {
                let (p, m) = alg.product(m2, m1).unwrap();
                let lhs = &self.blocks[m2] * &self.blocks[m1];
                let rhs = &self.blocks[m] * p.to_complex();
                let r = max_abs(&(lhs - rhs));
                if r > REP_TOL {
                    return Err(Error::RepInvariant(format!("product ({m2}, {m1}) off by {r:e}")));
                }
            }
        }
        Ok(())
    }

    /// Left multiplication on `^θℂ𝒢` itself; `V_x` has basis `⟨k⟩` for
    /// `dst(k) = x`, in increasing order.
    pub fn regular(alg: &TwistedAlgebra) -> Self {
        let g = alg.base();
        let (dims, pos) = regular_layout(alg);
        let blocks = (0..g.num_morphisms())
            .map(|m| {
                let (y, z) = (g.src(m), g.dst(m));
                let mut b = DMatrix::zeros(dims[z], dims[y]);
                for k in (0..g.num_morphisms()).filter(|&k| g.dst(k) == y) {
                    let (p, mk) = alg.product(m, k).unwrap();
                    b[(pos[mk], pos[k])] = p.to_complex();
                }
                b
            })
            .collect();
        Self::new(alg, dims, blocks).expect("regular representation")
    }

    pub fn dimension(&self) -> usize {
        self.object_dims.iter().sum()
    }

    pub fn object_dims(&self) -> &[usize] {
        &self.object_dims
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn block(&self, m: usize) -> &DMatrix<Complex64> {
        &self.blocks[m]
    }

    /// The action of `⟨m⟩` on the whole space `⊕ V_x`.
    pub fn full_matrix(&self, alg: &TwistedAlgebra, m: usize) -> DMatrix<Complex64> {
        let g = alg.base();
        let d = self.dimension();
        let mut out = DMatrix::zeros(d, d);
        let b = &self.blocks[m];
        out.view_mut((self.offsets[g.dst(m)], self.offsets[g.src(m)]), b.shape()).copy_from(b);
        out
    }
}

/// Object dimensions of the regular representation and the position of each
/// basis element inside its object's space.
pub(crate) fn regular_layout(alg: &TwistedAlgebra) -> (Vec<usize>, Vec<usize>) {
    let g = alg.base();
    let mut dims = vec![0; g.num_objects()];
    let mut pos = vec![0; g.num_morphisms()];
    for k in 0..g.num_morphisms() {
        pos[k] = dims[g.dst(k)];
        dims[g.dst(k)] += 1;
    }
    (dims, pos)
}
