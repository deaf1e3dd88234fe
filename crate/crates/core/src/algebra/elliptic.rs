use num_complex::Complex64;

use super::character::TwistedCharacter;
use super::double::DrinfeldDouble;
use crate::cochain::{Cochain, Phase};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::groupoid::{Groupoid, LoopGroupoid};

/// Residual below which a function passes the elliptic relation.
pub const ELLIPTIC_TOL: f64 = 1e-9;

/// The factors relating `χ(hgh⁻¹, hxh⁻¹)` to `χ(g, x)` for commuting
/// `(g, x)`, taken from `τ²(τ(ω))` on `Λ²Ḡ` and checked against
///
/// `ω(h,x,g)ω(hgh⁻¹,h,x)ω(hxh⁻¹,hgh⁻¹,h) / ω(h,g,x)ω(hxh⁻¹,h,g)ω(hgh⁻¹,hxh⁻¹,h)`.
#[derive(Clone, Debug)]
pub struct EllipticRelation {
    group: FiniteGroup,
    ratio: Vec<Option<Phase>>,
}

impl EllipticRelation {
    pub fn new(group: &FiniteGroup, omega: &Cochain) -> Result<Self> {
        if omega.degree() != 3 {
            return Err(Error::Degree { expected: "3".into(), found: omega.degree() });
        }
        if **omega.base() != Groupoid::delooping(group) {
            return Err(Error::BaseMismatch);
        }
        let n = group.order();
        let l1 = LoopGroupoid::new(omega.base().clone());
        let t1 = omega.transgress(&l1)?;
        let l2 = LoopGroupoid::new(l1.groupoid().clone());
        let t2 = t1.transgress(&l2)?;
        let o = |a: usize, b: usize, c: usize| omega.value(&[a, b, c]);
        let mut ratio = vec![None; n * n * n];
        for pair in group.commuting_tuples(2)? {
            let (g, x) = (pair[0], pair[1]);
            let obj = l2.loop_object(x * n + g).expect("commuting pair is a loop");
            for h in 0..n {
                let k = l2.morphism_for(x * n + h, obj).expect("morphism leaves x");
                let via_tau = t2.value(&[k]);
                let (hg, hx) = (group.conjugate(h, g), group.conjugate(h, x));
                let closed = o(h, x, g) * o(hg, h, x) * o(hx, hg, h) / (o(h, g, x) * o(hx, h, g) * o(hg, hx, h));
                if via_tau != closed {
                    return Err(Error::CrossCheck(format!(
                        "elliptic factor at (h, g, x) = ({h}, {g}, {x}): {via_tau} vs {closed}"
                    )));
                }
                ratio[(h * n + g) * n + x] = Some(closed);
            }
        }
        Ok(Self { group: group.clone(), ratio })
    }

    /// The factor for `h` acting on the commuting pair `(g, x)`.
    pub fn ratio(&self, h: usize, g: usize, x: usize) -> Option<Phase> {
        let n = self.group.order();
        self.ratio[(h * n + g) * n + x]
    }

    /// Checks `χ(hgh⁻¹, hxh⁻¹) = ratio · χ(g, x)` for all `h` and commuting
    /// `(g, x)`, with `chi[g·|G| + x]`. Returns whether the worst residual is
    /// below `1e-9`, and that residual.
    pub fn check(&self, chi: &[Complex64]) -> (bool, f64) {
        let (n, grp) = (self.group.order(), &self.group);
        let mut worst: f64 = 0.0;
        for h in 0..n {
            for g in 0..n {
                for x in 0..n {
                    if let Some(r) = self.ratio(h, g, x) {
                        let lhs = chi[grp.conjugate(h, g) * n + grp.conjugate(h, x)];
                        worst = worst.max((lhs - r.to_complex() * chi[g * n + x]).norm());
                    }
                }
            }
        }
        (worst < ELLIPTIC_TOL, worst)
    }
}

/// `χ(g, x) = Tr ρ(⟨g←x⟩)` on commuting pairs, zero elsewhere, indexed `g·|G| + x`.
pub fn elliptic_character(double: &DrinfeldDouble, chi: &TwistedCharacter) -> Vec<Complex64> {
    let n = double.group.order();
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for g in 0..n {
        for x in 0..n {
            if let Some(v) = chi.at_loop(double.basis(g, x)) {
                out[g * n + x] = v;
            }
        }
    }
    out
}
