use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::character::rep_hom_dimension;
use super::decompose::decompose;
use super::rep::AlgebraRep;
use super::TwistedAlgebra;
use crate::error::{Error, Result};
use crate::groupoid::{Groupoid, GroupoidFunctor, RetractionData};

/// `^{θ|x}ℂAut(x)`, with the morphism id of each group element.
pub fn restricted_algebra(alg: &TwistedAlgebra, x: usize) -> Result<(TwistedAlgebra, Vec<usize>)> {
    let g = alg.base();
    let (aut, autos) = g.automorphism_group(x);
    let sub = Arc::new(Groupoid::delooping(&aut));
    let inc = GroupoidFunctor::new(sub.clone(), g.clone(), vec![x], autos.clone())?;
    let theta_x = alg.twist().pullback(&inc)?;
    Ok((TwistedAlgebra::new(&sub, theta_x)?, autos))
}

/// Induces a representation `ρ` of `^{θ|x}ℂAut(x)`, `x` the basepoint of
/// `component`, to the whole component:
///
/// `F_ρ(g: y → z) = θ(f_z, g) / θ(f_z g f_y⁻¹, f_y) · ρ(f_z g f_y⁻¹)`.
///
/// Other components get the zero space. The induced representation is
/// irreducible exactly when `ρ` is; both hom dimensions are computed and
/// compared.
pub fn dpr_induce(alg: &TwistedAlgebra, data: &RetractionData, component: usize, rho: &AlgebraRep) -> Result<AlgebraRep> {
    let g = alg.base();
    data.validate(g)?;
    let x = *data
        .basepoints
        .get(component)
        .ok_or_else(|| Error::InvalidRetraction(format!("no component {component}")))?;
    let (restricted, autos) = restricted_algebra(alg, x)?;
    let rho = AlgebraRep::new(&restricted, rho.object_dims().to_vec(), (0..autos.len()).map(|i| rho.block(i).clone()).collect())?;
    let d = rho.dimension();
    let mut aut_index = vec![usize::MAX; g.num_morphisms()];
    for (i, &a) in autos.iter().enumerate() {
        aut_index[a] = i;
    }
    let comp = g.component_index();
    let theta = alg.twist();
    let dims: Vec<usize> = (0..g.num_objects()).map(|y| if comp[y] == component { d } else { 0 }).collect();
    let blocks = (0..g.num_morphisms())
        .map(|m| {
            let (y, z) = (g.src(m), g.dst(m));
            if comp[y] != component {
                return DMatrix::<Complex64>::zeros(0, 0);
            }
            let (fy, fz) = (data.arrows[y], data.arrows[z]);
            let core = g.compose_unchecked(g.compose_unchecked(fz, m), g.inv(fy));
            let coeff = theta.value(&[fz, m]) / theta.value(&[core, fy]);
            rho.block(aut_index[core]) * coeff.to_complex()
        })
        .collect();
    let induced = AlgebraRep::new(alg, dims, blocks)?;
    let up = rep_hom_dimension(alg, &induced, &induced)?;
    let down = rep_hom_dimension(&restricted, &rho, &rho)?;
    if up != down {
        return Err(Error::CrossCheck(format!("induction changed the endomorphism dimension from {down} to {up}")));
    }
    Ok(induced)
}

/// Induces every irreducible of every restricted algebra, one basepoint per
/// component (default retraction data).
pub fn induce_all(alg: &TwistedAlgebra, seed: u64) -> Result<Vec<AlgebraRep>> {
    let data = RetractionData::default_for(alg.base());
    let mut out = Vec::new();
    for (c, &x) in data.basepoints.iter().enumerate() {
        let (restricted, _) = restricted_algebra(alg, x)?;
        for ir in decompose(&restricted, seed)?.irreps {
            out.push(dpr_induce(alg, &data, c, &ir.rep)?);
        }
    }
    Ok(out)
}
