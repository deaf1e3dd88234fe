use super::TwistedAlgebra;
use crate::cochain::{Cochain, Phase};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::groupoid::{Groupoid, LoopGroupoid};

/// `D^ω(G)` realized as `^{τ(ω)}ℂΛḠ`. The basis element `⟨g←x⟩` is the
/// loop-groupoid morphism `(g, x): x → gxg⁻¹`, with id `x·|G| + g`.
#[derive(Clone, Debug)]
pub struct DrinfeldDouble {
    pub group: FiniteGroup,
    pub omega: Cochain,
    pub loop_groupoid: LoopGroupoid,
    pub algebra: TwistedAlgebra,
}

impl DrinfeldDouble {
    /// Basis id of `⟨g←x⟩`.
    pub fn basis(&self, g: usize, x: usize) -> usize {
        x * self.group.order() + g
    }
}

/// `⟨h←y⟩⟨g←x⟩ = δ_{y,gxg⁻¹} ω(h,g,x)ω(hgx(hg)⁻¹,h,g)/ω(h,gxg⁻¹,g) ⟨hg←x⟩`,
/// with basis ids as in [`DrinfeldDouble`].
pub fn dpr_product(group: &FiniteGroup, omega: &Cochain, m2: usize, m1: usize) -> Option<(Phase, usize)> {
    let n = group.order();
    let (h, y) = (m2 % n, m2 / n);
    let (g, x) = (m1 % n, m1 / n);
    let gx = group.conjugate(g, x);
    if y != gx {
        return None;
    }
    let hg = group.mul(h, g);
    let phase = omega.value(&[h, g, x]) * omega.value(&[group.conjugate(hg, x), h, g]) / omega.value(&[h, gx, g]);
    Some((phase, x * n + hg))
}

/// Builds `^{τ(ω)}ℂΛḠ` for a normalized 3-cocycle on `Ḡ` and checks every
/// product of basis elements against [`dpr_product`].
pub fn drinfeld_double(group: &FiniteGroup, omega: &Cochain) -> Result<DrinfeldDouble> {
    if omega.degree() != 3 {
        return Err(Error::Degree { expected: "3".into(), found: omega.degree() });
    }
    if **omega.base() != Groupoid::delooping(group) {
        return Err(Error::BaseMismatch);
    }
    omega.require_normalized()?;
    let lg = LoopGroupoid::new(omega.base().clone());
    let tau = omega.transgress(&lg)?;
    let algebra = TwistedAlgebra::new(lg.groupoid(), tau)?;
    let dim = algebra.dimension();
    for m2 in 0..dim {
        for m1 in 0..dim {
            let generic = algebra.product(m2, m1);
            let closed = dpr_product(group, omega, m2, m1);
            if generic != closed {
                return Err(Error::CrossCheck(format!(
                    "double product ({m2}, {m1}): transgressed {generic:?}, closed form {closed:?}"
                )));
            }
        }
    }
    Ok(DrinfeldDouble { group: group.clone(), omega: omega.clone(), loop_groupoid: lg, algebra })
}
