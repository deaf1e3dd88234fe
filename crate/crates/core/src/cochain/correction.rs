use super::Cochain;
use crate::error::{Error, Result};
use crate::groupoid::{same_groupoid, NaturalTransformation};

/// For `T: K ⇒ Ǩ` and a 2-cocycle `θ` on their common target, the 1-cochain
///
/// `ε(g: x₀ → x₁) = θ(T(x₁), K(g)) / θ(Ǩ(g), T(x₀))`
///
/// satisfying `K*θ = dε · Ǩ*θ`. The identity is verified on every
/// composable pair before returning.
pub fn epsilon_correction(theta: &Cochain, t: &NaturalTransformation) -> Result<Cochain> {
    if theta.degree() != 2 {
        return Err(Error::Degree { expected: "2".into(), found: theta.degree() });
    }
    let (k, k2) = (t.from(), t.to());
    if !same_groupoid(k.target(), theta.base()) {
        return Err(Error::BaseMismatch);
    }
    theta.require_cocycle()?;
    let src = k.source();
    let eps = Cochain::from_fn(src, 1, |s| {
        let g = s[0];
        theta.value(&[t.component(src.dst(g)), k.morphism(g)]) / theta.value(&[k2.morphism(g), t.component(src.src(g))])
    });
    let lhs = theta.pullback(k)?;
    let rhs = (&eps.coboundary() * &theta.pullback(k2)?)?;
    if lhs != rhs {
        return Err(Error::CrossCheck("K*θ differs from dε·Ǩ*θ".into()));
    }
    Ok(eps)
}
