use num_rational::BigRational;

use crate::cochain::{transgress_at, Cochain, Phase};
use crate::cyclotomic::{integrate, Cyclotomic};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::groupoid::{Groupoid, LoopGroupoid};

fn per_order(group: &FiniteGroup) -> BigRational {
    BigRational::new(1.into(), (group.order() as i64).into())
}

fn on_delooping(group: &FiniteGroup, c: &Cochain, degree: usize) -> Result<()> {
    if c.degree() != degree {
        return Err(Error::Degree { expected: degree.to_string(), found: c.degree() });
    }
    if **c.base() != Groupoid::delooping(group) {
        return Err(Error::BaseMismatch);
    }
    c.require_cocycle()?;
    c.require_normalized()
}

/// `∫_{Λ²𝒢} τ²(θ)`, the number of irreducible θ-twisted representations.
pub fn count_irreps(theta: &Cochain) -> Result<i64> {
    if theta.degree() != 2 {
        return Err(Error::Degree { expected: "2".into(), found: theta.degree() });
    }
    theta.require_normalized()?;
    let l1 = LoopGroupoid::new(theta.base().clone());
    let t1 = theta.transgress(&l1)?;
    let l2 = LoopGroupoid::new(l1.groupoid().clone());
    integrate(&t1.transgress(&l2)?)?.as_integer()
}

/// `(1/|G|) Σ_{xg=gx} θ(x,g)/θ(g,x)`.
pub fn group_count_formula(group: &FiniteGroup, theta: &Cochain) -> Result<i64> {
    on_delooping(group, theta, 2)?;
    let w = per_order(group);
    let terms = group.commuting_tuples(2)?.into_iter().map(|t| {
        let (x, g) = (t[0], t[1]);
        (theta.value(&[x, g]) / theta.value(&[g, x]), w.clone())
    });
    Cyclotomic::from_weighted_phases(terms).as_integer()
}

/// `(1/|G|) Σ ω(h,x,g)ω(g,h,x)ω(x,g,h) / ω(h,g,x)ω(x,h,g)ω(g,x,h)` over
/// pairwise commuting triples `(h, g, x)`.
pub fn double_rank_triple_sum(group: &FiniteGroup, omega: &Cochain) -> Result<i64> {
    on_delooping(group, omega, 3)?;
    let w = per_order(group);
    let o = |a: usize, b: usize, c: usize| omega.value(&[a, b, c]);
    let terms = group.commuting_tuples(3)?.into_iter().map(|t| {
        let (h, g, x) = (t[0], t[1], t[2]);
        let p: Phase = o(h, x, g) * o(g, h, x) * o(x, g, h) / (o(h, g, x) * o(x, h, g) * o(g, x, h));
        (p, w.clone())
    });
    Cyclotomic::from_weighted_phases(terms).as_integer()
}

/// `∫_{Λ³Ḡ} τ³(ω)`.
pub fn double_rank_integral(group: &FiniteGroup, omega: &Cochain) -> Result<i64> {
    on_delooping(group, omega, 3)?;
    let mut lg = LoopGroupoid::new(omega.base().clone());
    let mut c = omega.transgress(&lg)?;
    for _ in 0..2 {
        lg = LoopGroupoid::new(lg.groupoid().clone());
        c = c.transgress(&lg)?;
    }
    integrate(&c)?.as_integer()
}

/// The rank of `Rep(D^ω(G))`, by the commuting-triple sum; the triple
/// integral is evaluated as well and must agree.
pub fn double_rank_formula(group: &FiniteGroup, omega: &Cochain) -> Result<i64> {
    let sum = double_rank_triple_sum(group, omega)?;
    let integral = double_rank_integral(group, omega)?;
    if sum != integral {
        return Err(Error::CrossCheck(format!("triple sum {sum} but ∫τ³ω = {integral}")));
    }
    Ok(sum)
}

/// `Σ_x #{irreducible τ_x(ω)-twisted representations of C_x}` over one
/// `x` per conjugacy class.
pub fn centralizer_irrep_sum(group: &FiniteGroup, omega: &Cochain) -> Result<i64> {
    on_delooping(group, omega, 3)?;
    let mut total = 0;
    for class in group.conjugacy_classes() {
        let (sub, tx) = transgress_at(omega, group, class[0])?;
        total += group_count_formula(&sub.group, &tx)?;
    }
    Ok(total)
}
